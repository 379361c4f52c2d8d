//! Limit-point functions on [1/2, 1] and extremum scans over the grid
//! x_{M,n} = 2^M/(2^M + 2n + 1).

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::binary::{
    eta, exact_abscissa, expand_reciprocal, grid_point, ratio_to_f64, Rational, SVector,
    ThetaVector, DEFAULT_MAX_TERMS,
};
use crate::error::{domain, Error, Result};
use crate::sum::NeumaierSum;

/// Largest grid order accepted by [`scan_extremum`].
pub const MAX_SCAN_ORDER: u32 = 24;

/// Something convertible to an exact point of [1/2, 1].
pub trait Abscissa {
    fn to_rational(self) -> Result<Rational>;
}

impl Abscissa for Rational {
    fn to_rational(self) -> Result<Rational> {
        Ok(self)
    }
}

impl Abscissa for f64 {
    fn to_rational(self) -> Result<Rational> {
        exact_abscissa(self)
    }
}

fn finite_form(x: impl Abscissa) -> Result<SVector> {
    expand_reciprocal(x.to_rational()?, true, DEFAULT_MAX_TERMS)
}

/// The infinite expansion of 1/x. At x = 1 this is 1/2 + 1/4 + ...,
/// which starts at k = 1 and is built here by hand.
fn infinite_components_g(x: Rational, s: f64, tol: f64) -> Result<f64> {
    if x == Rational::from_integer(1) {
        return Ok(1.0 / (s * LN_2).exp_m1());
    }
    arith::g(
        expand_reciprocal(x, false, DEFAULT_MAX_TERMS)?.theta(),
        s,
        tol,
    )
}

/// 𝓗(x,s) = H(ϑ(x);s), s > −1.
pub fn h_cal(x: impl Abscissa, s: f64, tol: f64) -> Result<f64> {
    if !(s > -1.0) {
        return domain(format!("𝓗 requires s > -1 (s = {s})"));
    }
    arith::h(finite_form(x)?.theta(), s, tol)
}

/// 𝓚(x) = K(ϑ(x)).
pub fn k_cal(x: impl Abscissa, tol: f64) -> Result<f64> {
    arith::k(finite_form(x)?.theta(), tol)
}

/// 𝓡(x) = R(ϑ(x)).
pub fn r_cal(x: impl Abscissa, tol: f64) -> Result<f64> {
    arith::r(finite_form(x)?.theta(), tol)
}

/// 𝓖(x,s) = G(ϑ(x);s), using the finite expansion where there are two.
pub fn g_cal(x: impl Abscissa, s: f64, tol: f64) -> Result<f64> {
    if !(s > 0.0) {
        return domain(format!("𝓖 requires s > 0 (s = {s})"));
    }
    arith::g(finite_form(x)?.theta(), s, tol)
}

/// Λ̃(x) = Λ(ϑ(x)), using the finite expansion where there are two.
pub fn lambda_tilde(x: impl Abscissa, tol: f64) -> Result<f64> {
    arith::lambda(finite_form(x)?.theta(), tol)
}

/// Function scanned over the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ScanTarget {
    H(f64),
    K,
    R,
}

impl ScanTarget {
    /// 𝓡 at s = 0, 𝓚 at s = 1, 𝓗(·,s) otherwise.
    pub fn for_s(s: f64) -> Self {
        if s == 0.0 {
            ScanTarget::R
        } else if s == 1.0 {
            ScanTarget::K
        } else {
            ScanTarget::H(s)
        }
    }

    pub fn s(&self) -> Option<f64> {
        match self {
            ScanTarget::H(s) => Some(*s),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ScanTarget::H(s) => format!("H(s={s})"),
            ScanTarget::K => "K".into(),
            ScanTarget::R => "R".into(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let ScanTarget::H(s) = *self {
            if s == 0.0 || s == 1.0 {
                return Err(Error::Degenerate(format!("𝓗(·,{s}) is identically 1")));
            }
            if !(s > -1.0) || !s.is_finite() {
                return domain(format!("𝓗 scans require s > -1 (s = {s})"));
            }
        }
        Ok(())
    }

    pub fn orientation(&self) -> Orientation {
        match *self {
            ScanTarget::H(s) if s > 0.0 && s < 1.0 => Orientation::Min,
            _ => Orientation::Max,
        }
    }

    /// Bound on |extremal constant − grid extremum| at order M.
    pub fn error_bound(&self, m: u32) -> Option<f64> {
        let s = self.s()?;
        let mf = m as f64;
        if s > 0.0 {
            Some(2f64.powf(s) / 2f64.powf(mf - 1.0))
        } else {
            Some(2f64.powf((1.0 - mf) * (s + 1.0)) / (LN_2 * (2f64.powf(s + 1.0) - 1.0)))
        }
    }

    fn eval(&self, theta: &ThetaVector) -> Result<f64> {
        const TOL: f64 = 1e-15;
        match *self {
            ScanTarget::H(s) => arith::h(theta, s, TOL),
            ScanTarget::K => arith::k(theta, TOL),
            ScanTarget::R => arith::r(theta, TOL),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Min,
    Max,
}

/// Values of a target over 𝒫_M and their extremum.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub m: u32,
    pub target: ScanTarget,
    /// (x_{M,n}, value) for n = 0, 1, ..., in order of decreasing x.
    pub values: Vec<(Rational, f64)>,
    pub extremum: f64,
    pub arg: Rational,
    pub orientation: Orientation,
    pub error_bound: Option<f64>,
}

impl ScanResult {
    pub fn s(&self) -> Option<f64> {
        self.target.s()
    }

    pub fn arg_f64(&self) -> f64 {
        ratio_to_f64(&self.arg)
    }

    /// Rows "x,value" with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 48 + 16);
        out.push_str("x,value\n");
        for (x, v) in &self.values {
            out.push_str(&format!("{:.16e},{:.16e}\n", ratio_to_f64(x), v));
        }
        out
    }
}

/// Evaluates `target` at every point of 𝒫_M and extracts the extremum
/// (minimum of 𝓗 for 0 < s < 1, maximum otherwise). Ties go to the
/// smallest x.
pub fn scan_extremum(m: u32, target: ScanTarget) -> Result<ScanResult> {
    target.validate()?;
    if m == 0 || m > MAX_SCAN_ORDER {
        return domain(format!("M must lie in 1..={MAX_SCAN_ORDER} (M = {m})"));
    }
    let count = 1u64 << (m - 1);
    let base = 1u64 << m;
    let values: Vec<(Rational, f64)> = (0..count as usize)
        .into_par_iter()
        .with_min_len(256)
        .map(|n| {
            let theta = eta(base + 2 * n as u64 + 1)?;
            let x = theta.scale();
            Ok((x, target.eval(&theta)?))
        })
        .collect::<Result<_>>()?;
    let orientation = target.orientation();
    let mut best = 0usize;
    for (i, (_, v)) in values.iter().enumerate().skip(1) {
        let better = match orientation {
            Orientation::Min => *v <= values[best].1,
            Orientation::Max => *v >= values[best].1,
        };
        if better {
            best = i;
        }
    }
    Ok(ScanResult {
        m,
        target,
        extremum: values[best].1,
        arg: values[best].0,
        values,
        orientation,
        error_bound: target.error_bound(m),
    })
}

/// Estimated range of the limit points of T_{N,s}: [0, max 𝓡] at s = 0,
/// [0, κ_M] at s = 1, [d_{s,M}, 1] for 0 < s < 1 and [1, d_{s,M}] otherwise.
pub fn interval_estimate(s: f64, m: u32) -> Result<(f64, f64)> {
    if !(s > -1.0) {
        return domain(format!("interval estimates require s > -1 (s = {s})"));
    }
    let scan = scan_extremum(m, ScanTarget::for_s(s))?;
    let d = scan.extremum;
    Ok(match scan.target {
        ScanTarget::R | ScanTarget::K => (0.0, d),
        ScanTarget::H(_) if scan.orientation == Orientation::Min => (d, 1.0),
        ScanTarget::H(_) => (1.0, d),
    })
}

/// 𝓗(x,s) − (2(2^s − 1)/(s+1)) Σ_n (x/2^{k_n})^s, the sum taken over the
/// infinite expansion of 1/x. Vanishes at interior extremizers.
pub fn stationarity_residual(x: impl Abscissa, s: f64) -> Result<f64> {
    if !(s > 0.0) || s == 1.0 {
        return domain(format!("the residual requires s > 0, s != 1 (s = {s})"));
    }
    let x = x.to_rational()?;
    let tol = 1e-14;
    let h = h_cal(x, s, tol)?;
    let g = infinite_components_g(x, s, tol)?;
    Ok(h - 2.0 * (s * LN_2).exp_m1() / (s + 1.0) * g)
}

/// Both sides of the two identities linking 𝓗 at x_{M,n} with its
/// children x_{M+1,2n+1} and x_{M+1,2n}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChildIdentities {
    /// 𝓗(x) − 𝓗(x′) and its closed form, x′ = x_{M+1,2n+1}.
    pub odd_child: (f64, f64),
    /// 𝓗(x) − 𝓗(x″) and its closed form, x″ = x_{M+1,2n}.
    pub even_child: (f64, f64),
}

impl ChildIdentities {
    pub fn max_mismatch(&self) -> f64 {
        (self.odd_child.0 - self.odd_child.1)
            .abs()
            .max((self.even_child.0 - self.even_child.1).abs())
    }
}

pub fn child_identities(m: u32, n: u64, s: f64) -> Result<ChildIdentities> {
    if m >= 62 {
        return domain("M must be below 62");
    }
    let x = grid_point(m, n)?;
    let x1 = grid_point(m + 1, 2 * n + 1)?;
    let x2 = grid_point(m + 1, 2 * n)?;
    let t = eta((1u64 << m) + 2 * n + 1)?;
    let t1 = eta((1u64 << (m + 1)) + 4 * n + 3)?;
    let t2 = eta((1u64 << (m + 1)) + 4 * n + 1)?;
    let tol = 1e-15;
    let (h, h1, h2) = (
        arith::h(&t, s, tol)?,
        arith::h(&t1, s, tol)?,
        arith::h(&t2, s, tol)?,
    );
    let (xf, x1f, x2f) = (ratio_to_f64(&x), ratio_to_f64(&x1), ratio_to_f64(&x2));
    let ks = t.shifts();
    let p = ks.len();
    let sum_k = |upto: usize| -> f64 {
        ks[..upto]
            .iter()
            .map(|&k| 2f64.powf(-(k as f64) * s))
            .collect::<NeumaierSum>()
            .value()
    };
    let mf = m as f64;
    let c = (s * LN_2).exp_m1() / 2f64.powf(mf);
    let sp1 = s + 1.0;
    let rhs1 = (1.0 - (x1f / xf).powf(sp1)) * h
        - x1f.powf(sp1) * (2f64.powf(-(mf + 1.0) * sp1) + c * sum_k(p));
    let rhs2 = ((xf / x2f).powf(sp1) - 1.0) * h2
        + xf.powf(sp1) * ((2f64.powf(sp1) - 1.0) / 2f64.powf((mf + 1.0) * sp1) + c * sum_k(p - 1));
    Ok(ChildIdentities {
        odd_child: (h - h1, rhs1),
        even_child: (h - h2, rhs2),
    })
}

/// Data behind the five published scatter plots: 𝓡, 𝓗(·,−1/2),
/// 𝓗(·,1/3), 𝓗(·,7/2) and 𝓚 over 𝒫_M.
pub fn figure_scans(m: u32) -> Result<Vec<(&'static str, ScanResult)>> {
    let specs: [(&'static str, ScanTarget); 5] = [
        ("fig1_R", ScanTarget::R),
        ("fig2_H_minus_half", ScanTarget::H(-0.5)),
        ("fig3_H_one_third", ScanTarget::H(1.0 / 3.0)),
        ("fig4_H_seven_halves", ScanTarget::H(3.5)),
        ("fig5_K", ScanTarget::K),
    ];
    specs
        .into_iter()
        .map(|(name, t)| Ok((name, scan_extremum(m, t)?)))
        .collect()
}
