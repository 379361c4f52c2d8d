//! The arithmetic functions H(·;s), K, R, G(·;s) and Λ of a [`ThetaVector`],
//! and the block partition used to telescope H.
//!
//! All evaluators are O(p) through the suffix sums b_k = Σ_{j>k} θ_j.
//! Unit-gap tails are summed in closed form; truncated tails are extended
//! until a bound on the omitted terms drops below `tol`.

use std::f64::consts::LN_2;

use crate::binary::{ldexp, Tail, ThetaVector};
use crate::error::{domain, Error, Result};
use crate::sum::NeumaierSum;

const MAX_RESOLVE_TERMS: usize = 8192;

/// log θ_j for θ_j = x·2^{-k_j}.
fn log_components(theta: &ThetaVector) -> Vec<f64> {
    let lx = theta.scale_f64().ln();
    theta
        .shifts()
        .iter()
        .map(|&k| lx - k as f64 * LN_2)
        .collect()
}

/// Evaluates `eval` on `theta`, extending a truncated expansion until
/// `omitted(theta, omitted_mass)` is at most `tol`.
fn resolve<E, B>(theta: &ThetaVector, tol: f64, omitted: B, eval: E) -> Result<f64>
where
    E: Fn(&ThetaVector) -> Result<f64>,
    B: Fn(&ThetaVector, f64) -> f64,
{
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive (tol = {tol})"));
    }
    let mut current = theta.clone();
    loop {
        match current.tail() {
            Tail::Truncated { mass, .. } => {
                let err = omitted(&current, mass);
                if err <= tol {
                    return eval(&current);
                }
                let terms = current.len() * 2;
                if terms > MAX_RESOLVE_TERMS {
                    return Err(Error::Tolerance(format!(
                        "omitted-term bound {err:e} above {tol:e} after {} terms",
                        current.len()
                    )));
                }
                let next = current.extended(terms)?;
                if next.len() <= current.len() && next.tail() == current.tail() {
                    return Err(Error::Tolerance("expansion cannot be extended".into()));
                }
                current = next;
            }
            _ => return eval(&current),
        }
    }
}

/// x·log 2·2^{-K}·(aK + b): bound on Σ_{k>K} x 2^{-k}(a k + c) style tails.
fn dyadic_tail(theta: &ThetaVector, a: f64, b: f64) -> f64 {
    let big_k = *theta.shifts().last().unwrap() as f64;
    theta.scale_f64() * LN_2 * 2f64.powf(-big_k) * (a * big_k + b)
}

/// H(ϑ;s) = Σ ϑ_n^{s+1} + 2(2^s − 1) Σ_n ϑ_n^s b_n.
pub fn h(theta: &ThetaVector, s: f64, tol: f64) -> Result<f64> {
    if !s.is_finite() {
        return domain("s must be finite");
    }
    if !theta.is_finite() && s <= -1.0 {
        return domain(format!("H of an infinite vector requires s > -1 (s = {s})"));
    }
    resolve(
        theta,
        tol,
        |_, t| {
            let q = 2f64.powf(s + 1.0);
            (q + 3.0) * t.powf(s + 1.0) * q / (q - 1.0)
        },
        |v| Ok(h_terms(v, s)),
    )
}

fn h_terms(theta: &ThetaVector, s: f64) -> f64 {
    let c = 2.0 * (s * LN_2).exp_m1();
    let b = theta.suffix_sums();
    let logs = log_components(theta);
    let mut acc = NeumaierSum::default();
    for (lt, bk) in logs.iter().zip(&b) {
        let ts = (s * lt).exp();
        acc.add(ts * lt.exp());
        if *bk > 0.0 {
            acc.add(c * ts * bk);
        }
    }
    if let Tail::UnitGap { .. } = theta.tail() {
        acc.add(theta.tail_mass().powf(s + 1.0));
    }
    acc.value()
}

/// K(ϑ) = 2 log 2 + Σ ϑ_n² log(ϑ_n/4) + 2 Σ_n b_n ϑ_n log ϑ_n.
pub fn k(theta: &ThetaVector, tol: f64) -> Result<f64> {
    resolve(theta, tol, |_, t| 2.5 * t, |v| Ok(k_terms(v)))
}

fn k_terms(theta: &ThetaVector) -> f64 {
    let b = theta.suffix_sums();
    let logs = log_components(theta);
    let mut acc = NeumaierSum::default();
    acc.add(2.0 * LN_2);
    for (lt, bk) in logs.iter().zip(&b) {
        let t = lt.exp();
        acc.add(t * t * (lt - 2.0 * LN_2));
        acc.add(2.0 * bk * t * lt);
    }
    if let Tail::UnitGap { .. } = theta.tail() {
        let m = theta.tail_mass();
        acc.add(m * m * (m.ln() - 2.0 * LN_2));
    }
    acc.value()
}

/// R(ϑ) = −2 log 2 Σ (n−1) ϑ_n − Σ ϑ_n log ϑ_n.
pub fn r(theta: &ThetaVector, tol: f64) -> Result<f64> {
    resolve(
        theta,
        tol,
        |v, _| dyadic_tail(v, 3.0, 7.0),
        |v| Ok(r_terms(v)),
    )
}

fn r_terms(theta: &ThetaVector) -> f64 {
    let logs = log_components(theta);
    let mut acc = NeumaierSum::default();
    for (i, lt) in logs.iter().enumerate() {
        acc.add(-(2.0 * LN_2 * i as f64 + lt) * lt.exp());
    }
    if let Tail::UnitGap { .. } = theta.tail() {
        // the whole tail collapses onto one component of mass m at position p
        let m = theta.tail_mass();
        let p = theta.len() as f64;
        acc.add(-(2.0 * LN_2 * p + m.ln()) * m);
    }
    acc.value()
}

/// G(ϑ;s) = Σ ϑ_k^s.
pub fn g(theta: &ThetaVector, s: f64, tol: f64) -> Result<f64> {
    if !theta.is_finite() && s <= 0.0 {
        return domain(format!("G of an infinite vector requires s > 0 (s = {s})"));
    }
    resolve(
        theta,
        tol,
        |_, t| {
            let q = 2f64.powf(s);
            t.powf(s) * q / (q - 1.0)
        },
        |v| {
            let mut acc: NeumaierSum = log_components(v).iter().map(|lt| (s * lt).exp()).collect();
            if let Tail::UnitGap { .. } = v.tail() {
                let t = v.tail_mass() / 2.0;
                acc.add(t.powf(s) / -(-s * LN_2).exp_m1());
            }
            Ok(acc.value())
        },
    )
}

/// Λ(ϑ) = Σ ϑ_k log ϑ_k.
pub fn lambda(theta: &ThetaVector, tol: f64) -> Result<f64> {
    resolve(
        theta,
        tol,
        |v, _| dyadic_tail(v, 1.0, 3.0),
        |v| {
            let mut acc: NeumaierSum = log_components(v).iter().map(|lt| lt * lt.exp()).collect();
            if let Tail::UnitGap { .. } = v.tail() {
                let m = v.tail_mass();
                acc.add(m * (m.ln() - 2.0 * LN_2));
            }
            Ok(acc.value())
        },
    )
}

/// Σ ϑ_k |log ϑ_k|.
pub fn entropy_mass(theta: &ThetaVector, tol: f64) -> Result<f64> {
    lambda(theta, tol).map(|v| -v)
}

/// A maximal run of consecutive exponents, J = {first, ..., last}
/// (1-based). `last` is `None` for a run that never ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub first: usize,
    pub last: Option<usize>,
    /// θ and b at the first index.
    pub head: (f64, f64),
    /// θ and b at the last index, for finite runs.
    pub end: Option<(f64, f64)>,
}

impl Block {
    pub fn is_infinite(&self) -> bool {
        self.last.is_none()
    }

    /// Number of indices, `None` for an infinite block.
    pub fn len(&self) -> Option<usize> {
        self.last.map(|l| l + 1 - self.first)
    }

    /// This block's share of H(ϑ;s) after telescoping.
    pub fn telescoped(&self, s: f64) -> f64 {
        let (tm, bm) = self.head;
        match self.end {
            None => (2.0 * tm).powf(s + 1.0),
            Some((te, be)) => {
                let head = if bm > 0.0 {
                    (2.0 * tm).powf(s) * 2.0 * bm
                } else {
                    0.0
                };
                head + te.powf(s) * (te - 2.0 * be)
            }
        }
    }
}

/// The partition of a vector into maximal runs of consecutive exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionBlocks {
    blocks: Vec<Block>,
    truncated: bool,
}

impl PartitionBlocks {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Index sets of the blocks; infinite blocks list only their first index.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| match b.last {
                Some(l) => (b.first..=l).collect(),
                None => vec![b.first],
            })
            .collect()
    }

    /// True when the vector had an unresolved truncated tail; the last
    /// block then covers only the stored prefix.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// H(ϑ;s) as the sum of block contributions.
    pub fn telescoped_h(&self, s: f64) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.telescoped(s))
            .collect::<NeumaierSum>()
            .value()
    }
}

/// Splits ϑ into maximal strings of consecutive exponents.
pub fn partition(theta: &ThetaVector) -> Result<PartitionBlocks> {
    let shifts = theta.shifts();
    let comps = theta.components();
    let b = theta.suffix_sums();
    let mut blocks = Vec::new();
    let mut start = 0usize;
    for i in 0..shifts.len() {
        let closes = i + 1 == shifts.len() || shifts[i + 1] != shifts[i] + 1;
        if closes {
            blocks.push(Block {
                first: start + 1,
                last: Some(i + 1),
                head: (comps[start], b[start]),
                end: Some((comps[i], b[i])),
            });
            start = i + 1;
        }
    }
    if let Tail::UnitGap { start: t } = theta.tail() {
        let last_shift = *shifts.last().unwrap();
        if t == last_shift + 1 {
            let blk = blocks.last_mut().unwrap();
            blk.last = None;
            blk.end = None;
        } else {
            let x = theta.scale_f64();
            let th = ldexp(x, t as i32);
            blocks.push(Block {
                first: shifts.len() + 1,
                last: None,
                head: (th, th),
                end: None,
            });
        }
    }
    for blk in &blocks {
        if let Some((te, be)) = blk.end {
            if te - 2.0 * be < -4.0 * f64::EPSILON * te {
                return Err(Error::Structure(format!(
                    "block ending at {} has θ_end < 2 b_end",
                    blk.last.unwrap()
                )));
            }
        }
    }
    Ok(PartitionBlocks {
        blocks,
        truncated: matches!(theta.tail(), Tail::Truncated { .. }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{eta, expand_reciprocal};
    use num_rational::Ratio;

    const TOL: f64 = 1e-15;

    #[test]
    fn h_examples() {
        for n in [3u64, 7, 21, 100] {
            let e = eta(n).unwrap();
            assert!((h(&e, 0.0, TOL).unwrap() - 1.0).abs() < 1e-15);
            assert!((h(&e, 1.0, TOL).unwrap() - 1.0).abs() < 1e-15);
        }
        for s in [-0.5, 2.0, 3.5] {
            assert_eq!(h(&ThetaVector::unit(), s, TOL).unwrap(), 1.0);
            assert!((h(&ThetaVector::half_geometric(), s, TOL).unwrap() - 1.0).abs() < 1e-15);
        }
        for p in [2u32, 3, 5] {
            let n = (4u64.pow(p) - 1) / 3;
            let want = 2.0 * p as f64 / 3.0 + 4.0 / 9.0 * (1.0 - 4f64.powi(-(p as i32)));
            assert!((h(&eta(n).unwrap(), -1.0, TOL).unwrap() - want).abs() < 1e-13);
        }
        assert!(h(&ThetaVector::half_geometric(), -1.0, TOL).is_err());
    }

    #[test]
    fn k_examples() {
        assert_eq!(k(&ThetaVector::unit(), TOL).unwrap(), 0.0);
        assert!(k(&ThetaVector::half_geometric(), TOL).unwrap().abs() < 1e-15);
        // 2log2 + (4/9)log(1/6) + (1/9)log(1/12) + (4/9)log(2/3)
        let want = 2.0 * LN_2
            + 4.0 / 9.0 * (1.0f64 / 6.0).ln()
            + 1.0 / 9.0 * (1.0f64 / 12.0).ln()
            + 4.0 / 9.0 * (2.0f64 / 3.0).ln();
        let got = k(&eta(3).unwrap(), TOL).unwrap();
        assert!((got - want).abs() < 1e-15);
        assert!((got - 0.133_649_365_660_682).abs() < 1e-14);
    }

    #[test]
    fn r_examples() {
        assert_eq!(r(&ThetaVector::unit(), TOL).unwrap(), 0.0);
        for kk in 0..=10 {
            assert_eq!(r(&eta(1 << kk).unwrap(), TOL).unwrap(), 0.0);
        }
        let want = 3f64.ln() - 4.0 / 3.0 * LN_2;
        assert!((r(&eta(3).unwrap(), TOL).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn g_and_lambda_examples() {
        for n in [5u64, 21, 100] {
            assert!((g(&eta(n).unwrap(), 1.0, TOL).unwrap() - 1.0).abs() < 1e-15);
        }
        assert_eq!(g(&ThetaVector::unit(), 2.5, TOL).unwrap(), 1.0);
        for s in [0.5f64, 2.0] {
            let want = 1.0 / (2f64.powf(s) - 1.0);
            assert!((g(&ThetaVector::half_geometric(), s, TOL).unwrap() - want).abs() < 1e-14);
        }
        assert_eq!(lambda(&ThetaVector::unit(), TOL).unwrap(), 0.0);
        assert!((lambda(&ThetaVector::half_geometric(), TOL).unwrap() + 2.0 * LN_2).abs() < 1e-15);
        let want = 0.8 * 0.8f64.ln() + 0.2 * 0.2f64.ln();
        assert!((lambda(&eta(5).unwrap(), TOL).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn partition_examples() {
        let n = (1u64 << 13) + (1 << 12) + (1 << 10) + (1 << 8) + (1 << 7) + (1 << 6) + 8 + 2 + 1;
        let p = partition(&eta(n).unwrap()).unwrap();
        assert_eq!(
            p.index_sets(),
            vec![vec![1, 2], vec![3], vec![4, 5, 6], vec![7], vec![8, 9]]
        );
        assert_eq!(
            partition(&ThetaVector::unit()).unwrap().index_sets(),
            vec![vec![1]]
        );
        let g = partition(&ThetaVector::half_geometric()).unwrap();
        assert_eq!(g.blocks().len(), 1);
        assert!(g.blocks()[0].is_infinite());
        for s in [-0.5, 0.3, 2.0] {
            assert!((g.telescoped_h(s) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn truncated_vectors_resolve() {
        // 1/x = 5/3 never terminates
        let sv = expand_reciprocal(Ratio::new(3, 5), true, 8).unwrap();
        let a = h(sv.theta(), 2.0, 1e-14).unwrap();
        let b = h(
            expand_reciprocal(Ratio::new(3, 5), true, 200)
                .unwrap()
                .theta(),
            2.0,
            1e-14,
        )
        .unwrap();
        assert!((a - b).abs() < 2e-14);
        assert!(r(sv.theta(), 1e-13).is_ok());
        assert!(k(sv.theta(), 1e-13).is_ok());
    }

    #[test]
    fn finite_and_infinite_forms_agree() {
        let fin = expand_reciprocal(Ratio::new(8, 13), true, 64).unwrap();
        let inf = expand_reciprocal(Ratio::new(8, 13), false, 64).unwrap();
        for s in [-0.5, 0.5, 3.5] {
            let a = h(fin.theta(), s, TOL).unwrap();
            let b = h(inf.theta(), s, TOL).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
        assert!((k(fin.theta(), TOL).unwrap() - k(inf.theta(), TOL).unwrap()).abs() < 1e-14);
        assert!((r(fin.theta(), TOL).unwrap() - r(inf.theta(), TOL).unwrap()).abs() < 1e-14);
    }
}
