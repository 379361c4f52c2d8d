//! Scaled sequences T_{N,s} and F_{N,s}, their leading-order predictions,
//! the multi-term energy expansion and empirical remainder scans.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::binary::eta;
use crate::energy::{EnergyParams, GreedyEnergy};
use crate::error::{domain, Result};
use crate::special::{beta_coeffs, c_constant, v_s, zeta, BetaTable, EULER_GAMMA};
use crate::sum::NeumaierSum;

/// Tolerance handed to the arithmetic functions; η(N) is finite so this
/// only matters for the API contract.
const ARITH_TOL: f64 = 1e-15;

/// Distance from a branch point below which s is rejected.
pub const BRANCH_GUARD: f64 = 1e-9;

/// One row of a T or F report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub n: u64,
    pub s: f64,
    /// E_s(α_N) for T reports, U_{N,s}(a_N) for F reports.
    pub exact: f64,
    pub scaled: f64,
    pub prediction: f64,
    pub remainder: f64,
    pub remainder_scale: f64,
}

impl EnergyReport {
    pub fn scaled_remainder(&self) -> f64 {
        self.remainder * self.remainder_scale
    }
}

/// A leading-order prediction and the factor that makes its error bounded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub value: f64,
    pub remainder_scale: f64,
}

/// Which scaled sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sequence {
    T,
    F,
}

fn is_odd_integer(s: f64) -> bool {
    s > 0.0 && s.fract() == 0.0 && (s as i64) % 2 == 1
}

fn check_s(s: f64) -> Result<()> {
    if !s.is_finite() || s <= -2.0 {
        return domain(format!("s must satisfy s > -2 (s = {s})"));
    }
    for b in [-1.0, 0.0, 1.0] {
        let d = (s - b).abs();
        if d > 0.0 && d < BRANCH_GUARD {
            return domain(format!(
                "s = {s} is within {BRANCH_GUARD:e} of the branch point {b}; pass {b} exactly"
            ));
        }
    }
    Ok(())
}

/// Remainder scale for T_{N,s} − prediction (s > −1, s ∉ {−1, 0, 1}).
fn generic_scale(s: f64, nf: f64) -> f64 {
    if s < 1.0 {
        nf.powf(1.0 + s)
    } else if s == 3.0 {
        nf * nf / nf.ln()
    } else if s == 2.0 || s > 3.0 {
        nf * nf
    } else {
        nf.powf(s - 1.0)
    }
}

/// Evaluator for a fixed s, caching the energies of roots of unity and the
/// constants that enter every prediction.
pub struct Asymptotics {
    s: f64,
    energy: GreedyEnergy,
    /// I_s(σ) for s < 1.
    i_s: Option<f64>,
    /// 2ζ(s)/(2π)^s where defined.
    lead: Option<f64>,
}

impl Asymptotics {
    pub fn new(s: f64) -> Result<Self> {
        check_s(s)?;
        let energy = GreedyEnergy::new(EnergyParams::new(s))?;
        let i_s = if s < 1.0 && s != 0.0 {
            Some(v_s(s)?)
        } else {
            None
        };
        let lead = if s != 1.0 {
            Some(2.0 * zeta(s)? / (2.0 * PI).powf(s))
        } else {
            None
        };
        Ok(Self {
            s,
            energy,
            i_s,
            lead,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn energy(&self, n: u64) -> Result<f64> {
        self.energy.energy(n)
    }

    pub fn extremal_potential(&self, n: u64) -> Result<f64> {
        self.energy.extremal_potential(n)
    }

    /// I_s(σ), defined for −2 < s < 1, s ≠ 0.
    pub fn equilibrium_energy(&self) -> Result<f64> {
        self.i_s
            .ok_or_else(|| crate::Error::Domain(format!("I_s(σ) undefined at s = {}", self.s)))
    }

    /// T_{N,s}.
    pub fn t(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return domain("T_{N,s} requires N >= 2");
        }
        let s = self.s;
        let e = self.energy(n)?;
        let nf = n as f64;
        Ok(if s == 0.0 {
            (e + nf * nf.ln()) / nf
        } else if s == 1.0 {
            (e - nf * nf * nf.ln() / PI) / (nf * nf)
        } else if s > 1.0 {
            e / nf.powf(1.0 + s)
        } else {
            let d = e - nf * nf * self.i_s.unwrap();
            if s < -1.0 {
                d
            } else if s == -1.0 {
                d / nf.ln()
            } else {
                d / nf.powf(1.0 + s)
            }
        })
    }

    /// F_{N,s}.
    pub fn f(&self, n: u64) -> Result<f64> {
        if n < 1 {
            return domain("F_{N,s} requires N >= 1");
        }
        let s = self.s;
        let u = self.extremal_potential(n)?;
        let nf = n as f64;
        Ok(if s == 0.0 {
            -u / (nf + 1.0).ln()
        } else if s < 0.0 {
            u - nf * self.i_s.unwrap()
        } else if s < 1.0 {
            (u - nf * self.i_s.unwrap()) / nf.powf(s)
        } else if s == 1.0 {
            (u - nf * nf.ln() / PI) / nf
        } else {
            u / nf.powf(s)
        })
    }

    /// Leading-order prediction for T_{N,s} (s ≥ −1).
    pub fn predict_t(&self, n: u64) -> Result<Prediction> {
        if n < 2 {
            return domain("predictions require N >= 2");
        }
        let s = self.s;
        let nf = n as f64;
        let theta = eta(n)?;
        if s < -1.0 {
            return domain(format!("no leading-order prediction for T at s = {s} < -1"));
        }
        Ok(if s == 0.0 {
            Prediction {
                value: arith::r(&theta, ARITH_TOL)?,
                remainder_scale: 1.0,
            }
        } else if s == 1.0 {
            Prediction {
                value: (EULER_GAMMA + (2.0 / PI).ln() + arith::k(&theta, ARITH_TOL)?) / PI,
                remainder_scale: nf * nf,
            }
        } else if s == -1.0 {
            Prediction {
                value: -PI / 3.0 * arith::h(&theta, -1.0, ARITH_TOL)? / nf.ln(),
                remainder_scale: nf.ln(),
            }
        } else {
            Prediction {
                value: self.lead.unwrap() * arith::h(&theta, s, ARITH_TOL)?,
                remainder_scale: generic_scale(s, nf),
            }
        })
    }

    /// Leading-order prediction for F_{N,s} (s > 0).
    pub fn predict_f(&self, n: u64) -> Result<Prediction> {
        let s = self.s;
        if s <= 0.0 {
            return domain(format!("no leading-order prediction for F at s = {s} <= 0"));
        }
        if n < 1 {
            return domain("predictions require N >= 1");
        }
        let nf = n as f64;
        let theta = eta(n)?;
        Ok(if s == 1.0 {
            Prediction {
                value: (EULER_GAMMA + (8.0 / PI).ln() + arith::lambda(&theta, ARITH_TOL)?) / PI,
                remainder_scale: nf,
            }
        } else {
            let scale = if s < 1.0 {
                nf.powf(s)
            } else {
                generic_scale(s, nf)
            };
            Prediction {
                value: (s * std::f64::consts::LN_2).exp_m1()
                    * self.lead.unwrap()
                    * arith::g(&theta, s, ARITH_TOL)?,
                remainder_scale: scale,
            }
        })
    }

    pub fn report(&self, seq: Sequence, n: u64) -> Result<EnergyReport> {
        let (exact, scaled, pred) = match seq {
            Sequence::T => (self.energy(n)?, self.t(n)?, self.predict_t(n)?),
            Sequence::F => (self.extremal_potential(n)?, self.f(n)?, self.predict_f(n)?),
        };
        Ok(EnergyReport {
            n,
            s: self.s,
            exact,
            scaled,
            prediction: pred.value,
            remainder: scaled - pred.value,
            remainder_scale: pred.remainder_scale,
        })
    }

    /// Multi-term prediction of E_s(α_N).
    pub fn expansion_e(&self, n: u64) -> Result<f64> {
        ExpansionTerms::new(self.s)?.eval(n)
    }

    /// (1/N) Σ_{k=1}^{N} (U_{k,s}(a_k) − k I_s(σ)), from Σ_k U_k = E(N+1)/2.
    pub fn cesaro_mean(&self, n: u64) -> Result<f64> {
        let s = self.s;
        if !(s > -2.0 && s < 0.0) {
            return domain(format!("Cesàro means require -2 < s < 0 (s = {s})"));
        }
        if n < 1 {
            return domain("N must be positive");
        }
        let nf = n as f64;
        let e = self.energy(n + 1)?;
        Ok((e - nf * (nf + 1.0) * self.i_s.unwrap()) / (2.0 * nf))
    }
}

/// Precomputed constants of the energy expansion for one s.
struct ExpansionTerms {
    s: f64,
    beta: BetaTable,
    zetas: Vec<f64>,
    v: f64,
    /// Coefficient and constant of the logarithmic terms for odd s.
    odd: Option<(f64, f64)>,
}

impl ExpansionTerms {
    fn new(s: f64) -> Result<Self> {
        if s < -1.0 || s == 0.0 {
            return domain(format!(
                "the energy expansion needs s >= -1, s != 0 (s = {s})"
            ));
        }
        check_s(s)?;
        if is_odd_integer(s) {
            let m = ((s - 1.0) / 2.0) as usize;
            let beta = beta_coeffs(s, m)?;
            let zetas = (0..m)
                .map(|j| zeta(s - 2.0 * j as f64))
                .collect::<Result<_>>()?;
            // (1/2)_M / (π 2^{2M} M!)
            let mut q = 1.0 / PI;
            for i in 0..m {
                q *= (0.5 + i as f64) / (4.0 * (i as f64 + 1.0));
            }
            let c = EULER_GAMMA - PI.ln() + c_constant(m)?;
            Ok(Self {
                s,
                beta,
                zetas,
                v: 0.0,
                odd: Some((q, c)),
            })
        } else {
            let j = ((s + 1.0) / 2.0).floor() as usize;
            let beta = beta_coeffs(s, j)?;
            let zetas = (0..=j)
                .map(|i| zeta(s - 2.0 * i as f64))
                .collect::<Result<_>>()?;
            Ok(Self {
                s,
                beta,
                zetas,
                v: v_s(s)?,
                odd: None,
            })
        }
    }

    fn eval(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return domain("the expansion requires N >= 2");
        }
        let s = self.s;
        let nf = n as f64;
        let theta = eta(n)?;
        let pref = 2.0 / (2.0 * PI).powf(s);
        let mut acc = NeumaierSum::default();
        if let Some((q, c)) = self.odd {
            let kv = arith::k(&theta, ARITH_TOL)?;
            acc.add(q * nf * nf * nf.ln());
            acc.add(q * (c + kv) * nf * nf);
        } else {
            acc.add(self.v * nf * nf);
        }
        for (j, z) in self.zetas.iter().enumerate() {
            let e = s - 2.0 * j as f64;
            if *z == 0.0 {
                continue;
            }
            acc.add(
                pref * self.beta.get(j) * z * arith::h(&theta, e, ARITH_TOL)? * nf.powf(e + 1.0),
            );
        }
        Ok(acc.value())
    }
}

/// T_{N,s}.
pub fn t_sequence(n: u64, s: f64) -> Result<f64> {
    Asymptotics::new(s)?.t(n)
}

/// F_{N,s}.
pub fn f_sequence(n: u64, s: f64) -> Result<f64> {
    Asymptotics::new(s)?.f(n)
}

pub fn predict_t(n: u64, s: f64) -> Result<Prediction> {
    Asymptotics::new(s)?.predict_t(n)
}

pub fn predict_f(n: u64, s: f64) -> Result<Prediction> {
    Asymptotics::new(s)?.predict_f(n)
}

/// Multi-term prediction of the greedy energy (without the bounded remainder).
pub fn expansion_e(n: u64, s: f64) -> Result<f64> {
    ExpansionTerms::new(s)?.eval(n)
}

/// T_{2N,s} − T_{N,s}.
pub fn doubling_gap(n: u64, s: f64) -> Result<f64> {
    if n > u64::MAX / 2 {
        return domain("2N overflows");
    }
    let a = Asymptotics::new(s)?;
    Ok(a.t(2 * n)? - a.t(n)?)
}

pub fn cesaro_mean(n: u64, s: f64) -> Result<f64> {
    Asymptotics::new(s)?.cesaro_mean(n)
}

/// Sup of |scaled remainder| over one octave [2^k, 2^{k+1}).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OctaveSup {
    pub octave: u32,
    pub sup: f64,
    pub argmax: u64,
    /// True if every N of the octave was scanned.
    pub complete: bool,
}

/// Output of [`remainder_scan`].
#[derive(Clone, Debug, Serialize)]
pub struct ScanSummary {
    pub s: f64,
    pub sequence: Sequence,
    pub rows: Vec<EnergyReport>,
    pub sup: f64,
    pub argmax: u64,
    pub octaves: Vec<OctaveSup>,
    /// Last complete octave's sup exceeds the previous one by more than 20%.
    pub divergence_alarm: bool,
    /// sup |E − expansion| / max(1, |E|), when the expansion applies.
    pub expansion_rel_sup: Option<f64>,
    /// sup |E − expansion|, when the expansion applies.
    pub expansion_abs_sup: Option<f64>,
}

/// Largest N accepted by [`remainder_scan`].
pub const SCAN_MAX: u64 = 1 << 14;

/// Scans the scaled remainder of the T (or F) prediction over lo..=hi.
pub fn remainder_scan(s: f64, lo: u64, hi: u64, seq: Sequence) -> Result<ScanSummary> {
    let min = if seq == Sequence::T { 2 } else { 1 };
    if lo < min || hi < lo || hi > SCAN_MAX {
        return domain(format!(
            "range must lie within [{min}, {SCAN_MAX}] (got {lo}:{hi})"
        ));
    }
    let a = Asymptotics::new(s)?;
    // fill the cache serially
    a.energy(hi + 1)?;
    let rows: Vec<EnergyReport> = (lo..=hi)
        .into_par_iter()
        .map(|n| a.report(seq, n))
        .collect::<Result<_>>()?;
    let (sup, argmax) = rows.iter().fold((0.0f64, lo), |(m, am), r| {
        let v = r.scaled_remainder().abs();
        if v > m {
            (v, r.n)
        } else {
            (m, am)
        }
    });
    let mut octaves: Vec<OctaveSup> = Vec::new();
    for r in &rows {
        let k = 63 - r.n.leading_zeros();
        let v = r.scaled_remainder().abs();
        match octaves.last_mut() {
            Some(o) if o.octave == k => {
                if v > o.sup {
                    o.sup = v;
                    o.argmax = r.n;
                }
            }
            _ => octaves.push(OctaveSup {
                octave: k,
                sup: v,
                argmax: r.n,
                complete: false,
            }),
        }
    }
    for o in &mut octaves {
        let start = 1u64 << o.octave;
        let end = (start << 1) - 1;
        o.complete = lo <= start && hi >= end;
    }
    let complete: Vec<&OctaveSup> = octaves.iter().filter(|o| o.complete).collect();
    let divergence_alarm = complete.len() >= 2 && {
        let last = complete[complete.len() - 1].sup;
        let prev = complete[complete.len() - 2].sup;
        last > 1.2 * prev
    };
    let (expansion_rel_sup, expansion_abs_sup) = if seq == Sequence::T && s >= -1.0 && s != 0.0 {
        let terms = ExpansionTerms::new(s)?;
        let diffs: Vec<(f64, f64)> = rows
            .par_iter()
            .map(|r| {
                let d = r.exact - terms.eval(r.n)?;
                Ok((d.abs() / r.exact.abs().max(1.0), d.abs()))
            })
            .collect::<Result<_>>()?;
        let rel = diffs.iter().map(|d| d.0).fold(0.0, f64::max);
        let abs = diffs.iter().map(|d| d.1).fold(0.0, f64::max);
        (Some(rel), Some(abs))
    } else {
        (None, None)
    };
    Ok(ScanSummary {
        s,
        sequence: seq,
        rows,
        sup,
        argmax,
        octaves,
        divergence_alarm,
        expansion_rel_sup,
        expansion_abs_sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_zero_examples() {
        let a = Asymptotics::new(0.0).unwrap();
        for k in 1..=12 {
            assert!(a.t(1 << k).unwrap().abs() < 1e-14);
        }
        for n in 2..=1000u64 {
            let p = a.predict_t(n).unwrap();
            assert!((a.t(n).unwrap() - p.value).abs() < 1e-12, "N={n}");
        }
    }

    #[test]
    fn t_two_examples() {
        assert!((t_sequence(4, 2.0).unwrap() - 0.078125).abs() < 1e-15);
        let a = Asymptotics::new(2.0).unwrap();
        for n in [2u64, 3, 10, 77, 1000] {
            let r = a.report(Sequence::T, n).unwrap();
            assert!((r.remainder + 1.0 / (12.0 * (n * n) as f64)).abs() < 1e-13);
        }
    }

    #[test]
    fn doubling_examples() {
        for n in [3u64, 5, 100] {
            assert_eq!(doubling_gap(n, 0.0).unwrap().abs() < 1e-13, true);
            let want = 1.0 / (16.0 * (n * n) as f64);
            assert!((doubling_gap(n, 2.0).unwrap() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn f_one_point() {
        for s in [-1.5, -0.5] {
            let want = 2f64.powf(-s) - v_s(s).unwrap();
            assert!((f_sequence(1, s).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn near_branch_rejected() {
        assert!(Asymptotics::new(1e-12).is_err());
        assert!(Asymptotics::new(1.0 + 1e-12).is_err());
        assert!(Asymptotics::new(-1.0 - 1e-12).is_err());
        assert!(Asymptotics::new(-2.0).is_err());
        assert!(predict_t(10, -1.5).is_err());
        assert!(expansion_e(10, 0.0).is_err());
        assert!(cesaro_mean(10, 0.5).is_err());
    }

    #[test]
    fn expansion_constant_at_one() {
        // q_0 = 1/π, C_0 = log 2: the constant reduces to γ + log(2/π)
        let terms = ExpansionTerms::new(1.0).unwrap();
        let (q, c) = terms.odd.unwrap();
        assert!((q - 1.0 / PI).abs() < 1e-16);
        assert!((c - (EULER_GAMMA + (2.0 / PI).ln())).abs() < 1e-14);
    }

    #[test]
    fn scan_exact_cases() {
        let s2 = remainder_scan(2.0, 2, 512, Sequence::T).unwrap();
        assert!(s2.expansion_rel_sup.unwrap() < 1e-12);
        let s0 = remainder_scan(0.0, 2, 512, Sequence::T).unwrap();
        assert!(s0.sup < 1e-12);
    }
}
