//! Reference values recomputed here by independent means (quadrature,
//! explicit configurations, finite differences, closed forms).

use std::f64::consts::{LN_2, PI};

use greedy_riesz::arith;
use greedy_riesz::asymptotics::{doubling_gap, Asymptotics};
use greedy_riesz::binary::{eta, grid_point, ThetaVector};
use greedy_riesz::energy::{
    greedy_oracle, pairwise_energy, roots_energy, CircleConfig, EnergyParams,
};
use greedy_riesz::limits::{
    interval_estimate, r_cal, scan_extremum, stationarity_residual, ScanTarget,
};
use greedy_riesz::special::{
    beta_coeffs, beta_prime, c_constant, c_constant_with, digamma, v_s, zeta, ZetaBackend,
    EULER_GAMMA,
};
use num_rational::Ratio;

const TOL: f64 = 1e-15;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Composite Gauss-Legendre (5 nodes) on [a, b] with `panels` panels.
fn gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W) {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * total
}

#[test]
fn v_half_matches_double_integral() {
    // ∫∫ |x−y|^{-1/2} dσ dσ on the circle, outer angle fixed by rotation;
    // u = w² removes the endpoint singularity of (2 sin u)^{-1/2}
    let s = 0.5;
    let upper = (PI / 2.0).sqrt();
    let integrand = |w: f64| {
        if w == 0.0 {
            2f64.sqrt()
        } else {
            2.0 * w * (2.0 * (w * w).sin()).powf(-s)
        }
    };
    let quad = 2.0 / PI * gauss(integrand, 0.0, upper, 400);
    let v = v_s(s).unwrap();
    assert!(close(v, quad, 1e-12), "v(1/2) = {v}, quadrature {quad}");
    assert!(close(v_s(-1.0).unwrap(), 4.0 / PI, 1e-14));
}

#[test]
fn beta_one_from_series_expansion() {
    // (πz/sin πz)^s = Σ β_n z^{2n}; recover β_1 by Richardson on small z
    for s in [-1.0, 0.5, 2.0, 3.0] {
        let f = |z: f64| ((PI * z / (PI * z).sin()).powf(s) - 1.0) / (z * z);
        let (h1, h2) = (1e-3, 5e-4);
        let est = (4.0 * f(h2) - f(h1)) / 3.0;
        let b = beta_coeffs(s, 2).unwrap();
        assert!(close(b.get(1), est, 1e-7), "s={s}: {} vs {est}", b.get(1));
        assert!(close(b.get(1), s * PI * PI / 6.0, 1e-14));
        assert_eq!(b.get(0), 1.0);
    }
    assert!(close(
        beta_coeffs(2.0, 1).unwrap().get(1),
        PI * PI / 3.0,
        1e-14
    ));
}

#[test]
fn beta_prime_is_derivative_of_beta() {
    assert!(close(beta_prime(1).unwrap(), PI * PI / 6.0, 1e-14));
    let h = 1e-4;
    let b2 = |s: f64| beta_coeffs(s, 2).unwrap().get(2);
    let numeric = (b2(5.0 + h) - b2(5.0 - h)) / (2.0 * h);
    let z2 = zeta(2.0).unwrap();
    let formula = zeta(4.0).unwrap() / 2.0 + beta_coeffs(5.0, 1).unwrap().get(1) * z2;
    assert!(close(beta_prime(2).unwrap(), formula, 1e-14));
    assert!(close(numeric, formula, 1e-8), "{numeric} vs {formula}");
}

#[test]
fn c_constants() {
    assert!(close(c_constant(0).unwrap(), LN_2, 1e-15));
    let composed = (PI * PI / 6.0) / beta_coeffs(3.0, 1).unwrap().get(1)
        + 0.5 * digamma(2.0).unwrap()
        - 0.5 * digamma(1.5).unwrap();
    assert!(close(c_constant(1).unwrap(), composed, 1e-14));
    assert!(close(c_constant(1).unwrap(), LN_2 - 1.0 / 6.0, 1e-14));
    let a = c_constant_with(2, ZetaBackend::Borwein).unwrap();
    let b = c_constant_with(2, ZetaBackend::EulerMaclaurin).unwrap();
    assert!((a - b).abs() <= 1e-12);
}

#[test]
fn k_two_thirds_by_hand_and_by_energy() {
    let th = ThetaVector::from_components(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
    let k = arith::k(&th, TOL).unwrap();
    let (t1, t2) = (2.0f64 / 3.0, 1.0f64 / 3.0);
    let hand = 2.0 * LN_2
        + t1 * t1 * (t1 / 4.0).ln()
        + t2 * t2 * (t2 / 4.0).ln()
        + 2.0 * t2 * t1 * t1.ln();
    assert!(close(k, hand, 1e-15), "K = {k}");
    assert!(close(k, 0.133_649_365_660_682, 1e-13));
    // T_{3·2^k,1} → (γ + log(2/π) + K)/π
    let a = Asymptotics::new(1.0).unwrap();
    let n = 3u64 << 18;
    let limit = a.t(n).unwrap() * PI - EULER_GAMMA - (2.0 / PI).ln();
    assert!((limit - k).abs() < 1e-6, "energy limit {limit} vs K {k}");
}

#[test]
fn r_of_three_from_explicit_configuration() {
    let cfg = CircleConfig {
        angles: vec![0.0, PI, PI / 2.0],
    };
    let e = pairwise_energy(&cfg, EnergyParams::new(0.0));
    let t = (e + 3.0 * 3f64.ln()) / 3.0;
    let r = arith::r(&eta(3).unwrap(), TOL).unwrap();
    assert!(close(r, 3f64.ln() - 4.0 / 3.0 * LN_2, 1e-15));
    assert!(close(t, r, 1e-14));
    let a = Asymptotics::new(0.0).unwrap();
    assert!(close(a.t(3).unwrap(), r, 1e-14));
}

#[test]
fn l_two_closed_form() {
    for n in 2..=50u64 {
        let direct: f64 = (1..n)
            .map(|k| (PI * k as f64 / n as f64).sin().powi(-2))
            .sum::<f64>()
            * n as f64
            / 4.0;
        let nf = n as f64;
        let exact = (nf * nf * nf - nf) / 12.0;
        assert!(close(direct, exact, 1e-12));
        assert!(close(
            roots_energy(n, EnergyParams::new(2.0)).unwrap(),
            exact,
            1e-13
        ));
    }
    assert_eq!(roots_energy(1, EnergyParams::new(0.7)).unwrap(), 0.0);
}

#[test]
fn small_configurations() {
    let p = EnergyParams::new(2.0);
    let a = Asymptotics::new(2.0).unwrap();
    let three = CircleConfig {
        angles: vec![0.0, PI, PI / 2.0],
    };
    assert!(close(pairwise_energy(&three, p), 2.5, 1e-14));
    assert!(close(a.energy(3).unwrap(), 2.5, 1e-14));
    assert!(close(a.t(4).unwrap(), 5.0 / 64.0, 1e-14));
    for s in [-0.5, 0.5, 2.0] {
        let a = Asymptotics::new(s).unwrap();
        let p = EnergyParams::new(s);
        let want = 0.5 * (0.5 * roots_energy(4, p).unwrap() - roots_energy(2, p).unwrap());
        assert!(close(a.extremal_potential(2).unwrap(), want, 1e-13));
    }
}

#[test]
fn oracle_structure() {
    let run = greedy_oracle(4, EnergyParams::new(1.0), 20, 1e-12).unwrap();
    let mut angles = run.config.angles.clone();
    angles.sort_by(f64::total_cmp);
    for (i, a) in angles.iter().enumerate() {
        assert!((a - i as f64 * PI / 2.0).abs() < 1e-9, "{angles:?}");
    }
    let l4 = roots_energy(4, EnergyParams::new(1.0)).unwrap();
    assert!(close(run.energy(), l4, 1e-12));
    let six = greedy_oracle(6, EnergyParams::new(0.5), 20, 1e-12).unwrap();
    let want = Asymptotics::new(0.5).unwrap().energy(6).unwrap();
    assert!(close(six.energy(), want, 1e-8));
}

#[test]
fn doubling_gap_at_two() {
    for n in [3u64, 5, 11, 100, 777] {
        let nf = n as f64;
        let gap = doubling_gap(n, 2.0).unwrap();
        assert!((gap - 1.0 / (16.0 * nf * nf)).abs() < 1e-15);
        assert!(doubling_gap(n, 0.0).unwrap().abs() < 1e-13);
    }
    let gaps: Vec<f64> = (2..12)
        .map(|k| doubling_gap(1 << k, 0.5).unwrap().abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn log_energy_identity() {
    let a = Asymptotics::new(0.0).unwrap();
    for n in 3..=64u64 {
        let nf = n as f64;
        let r = arith::r(&eta(n).unwrap(), TOL).unwrap();
        assert!(close(a.energy(n).unwrap(), -nf * nf.ln() + nf * r, 1e-13));
    }
    let band: Vec<f64> = (1..=1u64 << 12)
        .map(|n| a.extremal_potential(n).unwrap() / ((n + 1) as f64).ln())
        .collect();
    assert!(band.iter().all(|v| v.is_finite() && v.abs() < 10.0));
}

#[test]
fn expansion_at_minus_one_is_bounded() {
    let a = Asymptotics::new(-1.0).unwrap();
    let worst = (2..=1u64 << 12)
        .map(|n| {
            let nf = n as f64;
            let h = arith::h(&eta(n).unwrap(), -1.0, TOL).unwrap();
            (a.energy(n).unwrap() - 4.0 / PI * nf * nf + PI / 3.0 * h).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1.0, "{worst}");
}

#[test]
fn f_sequences_bounded_and_f_one_rate() {
    for s in [0.5, 2.0] {
        let a = Asymptotics::new(s).unwrap();
        let sup = (1..=1u64 << 12)
            .map(|n| a.f(n).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(sup < 10.0, "s={s}: {sup}");
    }
    let a = Asymptotics::new(1.0).unwrap();
    let scaled: Vec<f64> = (1u64 << 6..=1 << 10)
        .map(|n| {
            let lam = arith::lambda(&eta(n).unwrap(), TOL).unwrap();
            let pred = (EULER_GAMMA + (8.0 / PI).ln() + lam) / PI;
            (a.f(n).unwrap() - pred) * n as f64
        })
        .collect();
    let sup = scaled.iter().map(|v| v.abs()).fold(0.0, f64::max);
    assert!(sup < 5.0, "{sup}");
}

#[test]
fn range_endpoints() {
    let scan = scan_extremum(16, ScanTarget::R).unwrap();
    let mut min = scan
        .values
        .iter()
        .map(|v| v.1)
        .fold(f64::INFINITY, f64::min);
    for x in [Ratio::new(1, 2), Ratio::from_integer(1)] {
        min = min.min(r_cal(x, TOL).unwrap());
    }
    assert!(min >= -1e-15 && scan.extremum < (4.0f64 / 3.0).ln());
    let (lo, hi) = interval_estimate(2.0, 12).unwrap();
    assert_eq!(lo, 1.0);
    assert!(hi > 1.0 && hi <= 2.0);
    let (lo, hi) = interval_estimate(1.0, 10).unwrap();
    assert_eq!(lo, 0.0);
    assert!(hi > 0.17);
}

fn argext_index(scan: &greedy_riesz::limits::ScanResult) -> u64 {
    scan.values.iter().position(|v| v.0 == scan.arg).unwrap() as u64
}

#[test]
fn stationarity_at_maximizers() {
    for (s, m) in [(2.0, 12u32), (3.5, 14)] {
        let scan = scan_extremum(m, ScanTarget::H(s)).unwrap();
        let n = argext_index(&scan);
        let at = stationarity_residual(scan.arg, s).unwrap();
        let res = |k: u64| stationarity_residual(grid_point(m, k).unwrap(), s).unwrap();
        let (left, right) = (res(n - 1), res(n + 1));
        assert!(
            left * right < 0.0,
            "s={s}: no sign change across argmax ({left}, {right})"
        );
        assert!(
            at.abs() < left.abs().min(right.abs()),
            "s={s}: {at} vs ({left}, {right})"
        );
    }
}

#[test]
fn stationarity_residual_shrinks_with_m() {
    let s = 1.0 / 3.0;
    let res: Vec<f64> = [8u32, 12, 16, 20]
        .iter()
        .map(|&m| {
            let scan = scan_extremum(m, ScanTarget::H(s)).unwrap();
            stationarity_residual(scan.arg, s).unwrap().abs()
        })
        .collect();
    assert!(res.windows(2).all(|w| w[1] < w[0]), "{res:?}");
}
