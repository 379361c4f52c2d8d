//! Riesz energies on the unit circle: roots of unity, greedy sequences via
//! their binary energy formula, and a brute-force greedy construction used
//! to validate that formula.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::binary::decompose;
use crate::error::{domain, Error, Result};
use crate::special::{beta_coeffs, v_s, zeta};
use crate::sum::NeumaierSum;

/// Largest N for which L_s(N) is summed term by term. Beyond it the
/// asymptotic expansion in powers of N is used.
pub const DIRECT_ROOTS_MAX: u64 = 1 << 24;

/// Riesz parameter; s = 0 selects the logarithmic kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyParams {
    pub s: f64,
    pub log_case: bool,
}

impl EnergyParams {
    pub fn new(s: f64) -> Self {
        Self {
            s,
            log_case: s == 0.0,
        }
    }

    /// Kernel value at chord length `d`.
    #[inline]
    pub fn kernel(&self, d: f64) -> f64 {
        if self.log_case {
            -d.ln()
        } else {
            d.powf(-self.s)
        }
    }

    /// True when greedy points maximize the potential (s < 0).
    pub fn maximizes(&self) -> bool {
        self.s < 0.0
    }

    fn check_greedy(&self) -> Result<()> {
        if !(self.s > -2.0) || !self.s.is_finite() {
            return domain(format!("greedy energies require s > -2 (s = {})", self.s));
        }
        Ok(())
    }
}

/// Chord length between two points of the circle given by their angles.
#[inline]
pub fn chord(a: f64, b: f64) -> f64 {
    2.0 * ((a - b) / 2.0).sin().abs()
}

/// L_s(N), the energy of the N-th roots of unity.
pub fn roots_energy(n: u64, params: EnergyParams) -> Result<f64> {
    if n == 0 {
        return domain("N must be positive");
    }
    if n == 1 {
        return Ok(0.0);
    }
    let nf = n as f64;
    if params.log_case {
        return Ok(-nf * nf.ln());
    }
    if n <= DIRECT_ROOTS_MAX {
        return Ok(roots_energy_direct(n, params.s));
    }
    roots_energy_expansion(n, params.s)
}

fn roots_energy_direct(n: u64, s: f64) -> f64 {
    let nf = n as f64;
    let half = ((n - 1) / 2) as usize;
    let terms = |k: usize| (PI * k as f64 / nf).sin().powf(-s);
    let body: f64 = if half > 4096 {
        (1..half + 1)
            .into_par_iter()
            .with_min_len(4096)
            .fold(NeumaierSum::default, |mut a, k| {
                a.add(terms(k));
                a
            })
            .map(|a| a.value())
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<NeumaierSum>()
            .value()
    } else {
        (1..=half).map(terms).collect::<NeumaierSum>().value()
    };
    let mut total = 2.0 * body;
    if n % 2 == 0 {
        total += 1.0;
    }
    2f64.powf(-s) * nf * total
}

fn roots_energy_expansion(n: u64, s: f64) -> Result<f64> {
    if s < -1.0 || (s > 0.0 && s.fract() == 0.0 && (s as i64) % 2 == 1) {
        return domain(format!(
            "L_s(N) for N > {DIRECT_ROOTS_MAX} is only available for s >= -1 not an odd integer"
        ));
    }
    let nf = n as f64;
    let beta = beta_coeffs(s, 30)?;
    let pref = 2.0 / (2.0 * PI).powf(s);
    let mut acc = NeumaierSum::default();
    acc.add(v_s(s)? * nf * nf);
    for j in 0..=30usize {
        let e = s - 2.0 * j as f64;
        let term = pref * beta.get(j) * zeta(e)? * nf.powf(e + 1.0);
        acc.add(term);
        if term.abs() < 1e-18 * acc.value().abs() {
            break;
        }
    }
    Ok(acc.value())
}

/// Caches L_s(2^k) so that greedy energies cost O(τ_b(N)) lookups.
pub struct GreedyEnergy {
    params: EnergyParams,
    pow2: [OnceLock<Result<f64>>; 64],
}

impl GreedyEnergy {
    pub fn new(params: EnergyParams) -> Result<Self> {
        params.check_greedy()?;
        Ok(Self {
            params,
            pow2: std::array::from_fn(|_| OnceLock::new()),
        })
    }

    pub fn params(&self) -> EnergyParams {
        self.params
    }

    /// L_s(2^k).
    pub fn roots_pow2(&self, k: u32) -> Result<f64> {
        if k >= 64 {
            return domain(format!("2^{k} exceeds the supported range"));
        }
        self.pow2[k as usize]
            .get_or_init(|| roots_energy(1u64 << k, self.params))
            .clone()
    }

    /// E_s(α_N) from the binary digits of N:
    /// Σ_k c_k L(2^{n_k+1}) + (1 − 2c_k) L(2^{n_k}), c_k = (N mod 2^{n_k})/2^{n_k}.
    pub fn energy(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return domain("N must be positive");
        }
        let dec = decompose(n)?;
        let mut acc = NeumaierSum::default();
        for &e in dec.exponents() {
            let c = (n & ((1u64 << e) - 1)) as f64 / (1u64 << e) as f64;
            if c > 0.0 {
                acc.add(c * self.roots_pow2(e + 1)?);
            }
            acc.add((1.0 - 2.0 * c) * self.roots_pow2(e)?);
        }
        Ok(acc.value())
    }

    /// U_{N,s}(a_N) = (E(N+1) − E(N))/2.
    pub fn extremal_potential(&self, n: u64) -> Result<f64> {
        if n == 0 || n == u64::MAX {
            return domain("N must lie in 1..u64::MAX");
        }
        Ok((self.energy(n + 1)? - self.energy(n)?) / 2.0)
    }
}

/// E_s(α_N) for the first N points of a greedy s-energy sequence.
pub fn greedy_energy(n: u64, params: EnergyParams) -> Result<f64> {
    GreedyEnergy::new(params)?.energy(n)
}

/// U_{N,s}(a_N), the extremal value of the potential of the first N points.
pub fn extremal_potential(n: u64, params: EnergyParams) -> Result<f64> {
    GreedyEnergy::new(params)?.extremal_potential(n)
}

/// Points on the circle, by angle in [0, 2π).
#[derive(Clone, Debug, PartialEq)]
pub struct CircleConfig {
    pub angles: Vec<f64>,
}

impl CircleConfig {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// One angle per line, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("angle\n");
        for a in &self.angles {
            let _ = writeln!(out, "{a:.16e}");
        }
        out
    }
}

/// 2 Σ_{i<j} k(|z_i − z_j|).
pub fn pairwise_energy(config: &CircleConfig, params: EnergyParams) -> f64 {
    let a = &config.angles;
    let mut acc = NeumaierSum::default();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            acc.add(2.0 * params.kernel(chord(a[i], a[j])));
        }
    }
    acc.value()
}

/// Result of a brute-force greedy construction.
#[derive(Clone, Debug)]
pub struct OracleRun {
    pub config: CircleConfig,
    /// `prefix_energies[n]` is the energy of the first n points (index 0 unused).
    pub prefix_energies: Vec<f64>,
}

impl OracleRun {
    pub fn energy(&self) -> f64 {
        *self.prefix_energies.last().unwrap()
    }
}

fn potential_at(angles: &[f64], params: EnergyParams, theta: f64) -> f64 {
    angles
        .iter()
        .map(|&a| params.kernel(chord(theta, a)))
        .collect::<NeumaierSum>()
        .value()
}

/// Builds a greedy sequence a_0 = 1, a_1, ... by extremizing the potential
/// over a uniform grid of 2^`grid_bits` angles and refining each choice by
/// golden-section search. Ties go to the smallest angle.
pub fn greedy_oracle(
    n: usize,
    params: EnergyParams,
    grid_bits: u32,
    refine_tol: f64,
) -> Result<OracleRun> {
    params.check_greedy()?;
    if !(2..=4096).contains(&n) {
        return domain(format!("oracle supports 2 <= N <= 4096 (N = {n})"));
    }
    let need = (n as f64).log2().ceil() as u32 + 4;
    if grid_bits < need || grid_bits > 28 {
        return domain(format!("grid_bits must lie in {need}..=28"));
    }
    if !(refine_tol > 0.0) {
        return domain("refine_tol must be positive");
    }
    let size = 1usize << grid_bits;
    let step = 2.0 * PI / size as f64;
    let sign = if params.maximizes() { -1.0 } else { 1.0 };
    // objective to minimize: sign * potential
    let mut field = vec![0.0f64; size];
    let mut angles = vec![0.0f64];
    let mut energies = vec![0.0, 0.0];
    let mut energy = NeumaierSum::default();

    let add_point = |field: &mut Vec<f64>, a: f64| {
        field
            .par_iter_mut()
            .enumerate()
            .with_min_len(1 << 12)
            .for_each(|(i, f)| {
                *f += sign * params.kernel(chord(i as f64 * step, a));
            });
    };
    add_point(&mut field, 0.0);

    for _ in 1..n {
        let best = field
            .par_iter()
            .with_min_len(1 << 12)
            .copied()
            .filter(|v| v.is_finite())
            .reduce(|| f64::INFINITY, f64::min);
        if !best.is_finite() {
            return Err(Error::Construction(
                "no admissible candidate on the grid".into(),
            ));
        }
        let slack = 1e-12 * best.abs().max(1e-300);
        let idx = field
            .par_iter()
            .with_min_len(1 << 12)
            .position_first(|v| v.is_finite() && *v <= best + slack)
            .unwrap();
        let grid_angle = idx as f64 * step;
        let objective = |t: f64| sign * potential_at(&angles, params, t);
        let refined = golden_section(objective, grid_angle - step, grid_angle + step, refine_tol);
        let g_val = objective(grid_angle);
        let chosen = if refined.is_finite() && objective(refined) < g_val - 1e-13 * g_val.abs() {
            refined.rem_euclid(2.0 * PI)
        } else {
            grid_angle
        };
        let u = potential_at(&angles, params, chosen);
        if !u.is_finite() {
            return Err(Error::Construction(
                "selected point coincides with an earlier one".into(),
            ));
        }
        energy.add(2.0 * u);
        energies.push(energy.value());
        angles.push(chosen);
        add_point(&mut field, chosen);
    }
    Ok(OracleRun {
        config: CircleConfig { angles },
        prefix_energies: energies,
    })
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    (a + b) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    #[test]
    fn roots_examples() {
        for s in [-1.5, 0.0, 0.5, 2.0] {
            assert_eq!(roots_energy(1, EnergyParams::new(s)).unwrap(), 0.0);
        }
        for s in [-1.5, 0.5, 2.0, 3.5] {
            let got = roots_energy(2, EnergyParams::new(s)).unwrap();
            assert!(rel(got, 2.0 * 2f64.powf(-s)) < 1e-15);
        }
        for n in 2..=50u64 {
            let nf = n as f64;
            let got = roots_energy(n, EnergyParams::new(2.0)).unwrap();
            assert!(rel(got, (nf * nf * nf - nf) / 12.0) < 1e-13, "N={n}");
        }
    }

    #[test]
    fn large_n_switches_to_expansion() {
        let p = EnergyParams::new(2.0);
        let n = DIRECT_ROOTS_MAX * 2;
        let nf = n as f64;
        let got = roots_energy(n, p).unwrap();
        assert!(rel(got, (nf * nf * nf - nf) / 12.0) < 1e-13);
        assert!(roots_energy(n, EnergyParams::new(3.0)).is_err());
    }

    #[test]
    fn greedy_examples() {
        for s in [-1.0, 0.5, 2.0] {
            let p = EnergyParams::new(s);
            let ge = GreedyEnergy::new(p).unwrap();
            for k in 0..12 {
                assert_eq!(ge.energy(1 << k).unwrap(), roots_energy(1 << k, p).unwrap());
            }
            assert!(rel(ge.energy(3).unwrap(), 0.5 * roots_energy(4, p).unwrap()) < 1e-15);
        }
        assert!((greedy_energy(3, EnergyParams::new(2.0)).unwrap() - 2.5).abs() < 1e-14);
        assert!(greedy_energy(5, EnergyParams::new(-2.0)).is_err());
    }

    #[test]
    fn extremal_potential_examples() {
        for s in [-1.0, 0.5, 2.0] {
            let p = EnergyParams::new(s);
            assert!(rel(extremal_potential(1, p).unwrap(), 2f64.powf(-s)) < 1e-15);
            let want = 0.5 * (0.5 * roots_energy(4, p).unwrap() - roots_energy(2, p).unwrap());
            assert!(rel(extremal_potential(2, p).unwrap(), want) < 1e-15);
        }
    }

    #[test]
    fn oracle_small_cases() {
        for s in [-1.0, 0.0, 0.5, 2.0] {
            let p = EnergyParams::new(s);
            let run = greedy_oracle(2, p, 10, 1e-12).unwrap();
            assert!((run.config.angles[1] - PI).abs() < 1e-12);
            let want = if s == 0.0 {
                -2.0 * 2f64.ln()
            } else {
                2.0 * 2f64.powf(-s)
            };
            assert!(rel(run.energy(), want) < 1e-13);
        }
        let run = greedy_oracle(4, EnergyParams::new(1.0), 12, 1e-12).unwrap();
        let mut a = run.config.angles.clone();
        a.sort_by(f64::total_cmp);
        for (i, t) in a.iter().enumerate() {
            assert!((t - i as f64 * PI / 2.0).abs() < 1e-12);
        }
        assert!(
            rel(
                run.energy(),
                roots_energy(4, EnergyParams::new(1.0)).unwrap()
            ) < 1e-13
        );
        let p = EnergyParams::new(0.5);
        let run = greedy_oracle(6, p, 12, 1e-12).unwrap();
        assert!(rel(run.energy(), greedy_energy(6, p).unwrap()) < 1e-8);
        assert!(rel(pairwise_energy(&run.config, p), run.energy()) < 1e-13);
    }

    #[test]
    fn config_csv() {
        let c = CircleConfig {
            angles: vec![0.0, PI],
        };
        assert_eq!(
            c.to_csv(),
            "angle\n0.0000000000000000e0\n3.1415926535897931e0\n"
        );
    }
}
