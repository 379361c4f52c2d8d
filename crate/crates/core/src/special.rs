//! Real special functions: ζ, Γ, ψ, v(s), the Maclaurin coefficients of
//! sinc^{-s} and the constants C_M.

use std::f64::consts::{LN_2, PI};

use crate::error::{domain, Error, Result};
use crate::sum::NeumaierSum;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} for k = 1..=12.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const LANCZOS_R: f64 = 10.900511;
const LANCZOS: [f64; 11] = [
    2.4857408913875355e-5,
    1.0514237858172197,
    -3.4568709722201625,
    4.512277094668948,
    -2.9828522532357664,
    1.056397115771267,
    -1.9542877319164587e-1,
    1.709705434044412e-2,
    -5.719261174043057e-4,
    4.633994733599057e-6,
    -2.7199490848860772e-9,
];
/// 2√(e/π) and its logarithm.
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

/// sin(πx) with exact argument reduction; zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0;
    if r == 0.0 || r.fract() == 0.0 {
        return 0.0;
    }
    let r = if r < 0.0 { r + 2.0 } else { r };
    // r in (0, 2)
    let (sign, r) = if r > 1.0 { (-1.0, r - 1.0) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

/// cos(πx) with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Lanczos series, x ≥ 1/2.
fn lanczos_sum(x: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + i as f64 - 1.0);
    }
    s
}

/// log|Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x);
    }
    if x >= 10.0 {
        return stirling_ln_gamma(x);
    }
    lanczos_sum(x).ln()
        + LN_TWO_SQRT_E_OVER_PI
        + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(8) {
        let n = 2.0 * (k as f64 + 1.0);
        corr += b / (n * (n - 1.0)) * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

/// Γ(x); infinite at the poles 0, −1, −2, ...
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x >= 10.0 {
        return stirling_ln_gamma(x).exp();
    }
    lanczos_sum(x)
        * TWO_SQRT_E_OVER_PI
        * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).powf(x - 0.5)
}

/// 1/Γ(x), entire; zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return 0.0;
    }
    if x < 0.5 {
        return sin_pi(x) * gamma(1.0 - x) / PI;
    }
    1.0 / gamma(x)
}

/// Γ(x)/(2π)^x for x ≥ 1, by upward recurrence from [1, 2) so that large
/// arguments neither overflow nor lose relative accuracy in a logarithm.
fn gamma_over_2pi_pow(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x;
    let mut prod = 1.0;
    while y >= 2.0 {
        y -= 1.0;
        prod *= y / two_pi;
    }
    prod * gamma(y) / two_pi.powf(y)
}

/// Backend used for ζ(s) with s > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaBackend {
    /// Accelerated alternating (eta) series.
    Borwein,
    /// Euler–Maclaurin summation.
    EulerMaclaurin,
}

/// Riemann ζ(s) for real s ≠ 1.
pub fn zeta(s: f64) -> Result<f64> {
    zeta_with(s, ZetaBackend::Borwein)
}

pub fn zeta_with(s: f64, backend: ZetaBackend) -> Result<f64> {
    if s.is_nan() {
        return domain("s is NaN");
    }
    if (s - 1.0).abs() < 1e-9 {
        return Err(Error::Pole(format!("zeta has a pole at s = 1 (s = {s})")));
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    if s > 0.0 {
        return Ok(match backend {
            ZetaBackend::Borwein => zeta_borwein(s),
            ZetaBackend::EulerMaclaurin => zeta_euler_maclaurin(s),
        });
    }
    if s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return Ok(0.0);
    }
    // ζ(s) = 2 sin(πs/2) Γ(1−s)/(2π)^{1−s} ζ(1−s)
    let zr = zeta_with(1.0 - s, backend)?;
    Ok(2.0 * sin_pi(s / 2.0) * gamma_over_2pi_pow(1.0 - s) * zr)
}

fn zeta_borwein(s: f64) -> f64 {
    if s >= 64.0 {
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s);
    }
    const N: usize = 40;
    // tail sums e_k = d_n − d_k = n Σ_{i=k+1}^{n} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let nf = N as f64;
    let mut terms = [0.0f64; N + 1];
    let mut t = 1.0 / nf; // i = 0 term divided by n
    terms[0] = t;
    for i in 0..N {
        let fi = i as f64;
        // ratio term(i+1)/term(i) = (n+i)(n−i) 4 / ((2i+1)(2i+2))
        t *= (nf + fi) * (nf - fi) * 4.0 / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        terms[i + 1] = t;
    }
    let mut e = [0.0f64; N + 1];
    let mut acc = 0.0;
    for i in (0..=N).rev() {
        e[i] = acc * nf;
        acc += terms[i];
    }
    let d_n = acc * nf;
    let mut sum = NeumaierSum::default();
    for (k, ek) in e.iter().enumerate().take(N) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * ek * ((k + 1) as f64).powf(-s));
    }
    // η(s) = Σ/d_n, ζ(s) = η(s)/(1 − 2^{1−s})
    let eta = sum.value() / d_n;
    eta / -((1.0 - s) * LN_2).exp_m1()
}

fn zeta_euler_maclaurin(s: f64) -> f64 {
    let n = 24usize.max((s.abs() as usize) + 10);
    let nf = n as f64;
    let mut sum = NeumaierSum::default();
    for k in 1..n {
        sum.add((k as f64).powf(-s));
    }
    sum.add(nf.powf(1.0 - s) / (s - 1.0));
    sum.add(0.5 * nf.powf(-s));
    // Σ B_{2k}/(2k)! s(s+1)...(s+2k−2) N^{−s−2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut pw = nf.powf(-s - 1.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = k as f64;
        if k > 0 {
            rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
            fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
            pw /= nf * nf;
        }
        sum.add(b / fact * rising * pw);
    }
    sum.value()
}

/// Digamma ψ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("digamma requires x > 0 (x = {x})"));
    }
    let mut y = x;
    let mut shift = NeumaierSum::default();
    while y < 10.0 {
        shift.add(-1.0 / y);
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    let mut p = inv2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(8) {
        series += b / (2.0 * (k as f64 + 1.0)) * p;
        p *= inv2;
    }
    shift.add(y.ln() - 0.5 / y - series);
    Ok(shift.value())
}

/// v(s) = 2^{-s} Γ((1−s)/2) / (√π Γ(1 − s/2)), the s-energy of normalized
/// arclength for −2 < s < 1 and its continuation elsewhere.
pub fn v_s(s: f64) -> Result<f64> {
    if s > 0.0 && s.fract() == 0.0 && (s as i64) % 2 == 1 {
        return Err(Error::Pole(format!("v(s) has a pole at odd s = {s}")));
    }
    Ok(2f64.powf(-s) * gamma((1.0 - s) / 2.0) * rgamma(1.0 - s / 2.0) / PI.sqrt())
}

/// Coefficients β_0(s), ..., β_J(s) of sinc^{-s}(z) = Σ β_n(s) z^{2n},
/// sinc z = sin(πz)/(πz).
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTable {
    s: f64,
    coeffs: Vec<f64>,
}

impl BetaTable {
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> f64 {
        self.coeffs[n]
    }

    /// Partial sum Σ_{n≤J} β_n z^{2n}.
    pub fn eval(&self, z: f64) -> f64 {
        let z2 = z * z;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z2 + c)
    }
}

/// Maximum order accepted by [`beta_coeffs`].
pub const MAX_BETA_ORDER: usize = 64;

pub fn beta_coeffs(s: f64, j: usize) -> Result<BetaTable> {
    beta_coeffs_with(s, j, ZetaBackend::Borwein)
}

/// β_n from exp(s Σ ζ(2k) z^{2k}/k): with a_k = s ζ(2k)/k,
/// n β_n = Σ_{k=1}^{n} k a_k β_{n−k}.
pub fn beta_coeffs_with(s: f64, j: usize, backend: ZetaBackend) -> Result<BetaTable> {
    if j > MAX_BETA_ORDER {
        return domain(format!("J = {j} exceeds {MAX_BETA_ORDER}"));
    }
    let z2k: Vec<f64> = (1..=j)
        .map(|k| zeta_with(2.0 * k as f64, backend))
        .collect::<Result<_>>()?;
    let mut coeffs = vec![1.0];
    for n in 1..=j {
        let mut acc = NeumaierSum::default();
        for k in 1..=n {
            acc.add(z2k[k - 1] * coeffs[n - k]);
        }
        coeffs.push(s * acc.value() / n as f64);
    }
    Ok(BetaTable { s, coeffs })
}

/// β′_M(2M+1) = Σ_{k=0}^{M−1} β_k(2M+1) ζ(2(M−k))/(M−k).
pub fn beta_prime(m: usize) -> Result<f64> {
    beta_prime_with(m, ZetaBackend::Borwein)
}

pub fn beta_prime_with(m: usize, backend: ZetaBackend) -> Result<f64> {
    if m == 0 {
        return Ok(0.0);
    }
    let table = beta_coeffs_with(2.0 * m as f64 + 1.0, m, backend)?;
    let mut acc = NeumaierSum::default();
    for k in 0..m {
        let d = (m - k) as f64;
        acc.add(table.get(k) * zeta_with(2.0 * d, backend)? / d);
    }
    Ok(acc.value())
}

/// C_M = β′_M(2M+1)/β_M(2M+1) + ½ψ(M+1) − ½ψ(M+½).
pub fn c_constant(m: usize) -> Result<f64> {
    c_constant_with(m, ZetaBackend::Borwein)
}

pub fn c_constant_with(m: usize, backend: ZetaBackend) -> Result<f64> {
    let s = 2.0 * m as f64 + 1.0;
    let bm = beta_coeffs_with(s, m, backend)?.get(m);
    let mf = m as f64;
    Ok(beta_prime_with(m, backend)? / bm + 0.5 * digamma(mf + 1.0)? - 0.5 * digamma(mf + 0.5)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn zeta_known_values() {
        assert!(close(zeta(-1.0).unwrap(), -1.0 / 12.0, 1e-14));
        assert!(close(zeta(2.0).unwrap(), PI * PI / 6.0, 1e-15));
        assert_eq!(zeta(0.0).unwrap(), -0.5);
        assert!(close(zeta(4.0).unwrap(), PI.powi(4) / 90.0, 1e-15));
        assert!(close(zeta(0.5).unwrap(), -1.460_354_508_809_586_8, 1e-14));
        assert!(close(zeta(-3.0).unwrap(), 1.0 / 120.0, 1e-14));
        assert_eq!(zeta(-4.0).unwrap(), 0.0);
        assert!(matches!(zeta(1.0), Err(Error::Pole(_))));
        assert!(matches!(zeta(1.0 + 1e-10), Err(Error::Pole(_))));
    }

    #[test]
    fn zeta_backends_agree() {
        for &s in &[
            0.1, 0.5, 0.9, 1.1, 1.5, 2.5, 3.0, 7.5, 20.0, -0.5, -2.5, -7.5,
        ] {
            let a = zeta_with(s, ZetaBackend::Borwein).unwrap();
            let b = zeta_with(s, ZetaBackend::EulerMaclaurin).unwrap();
            assert!(close(a, b, 2e-14), "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn gamma_values() {
        assert!(close(gamma(0.5), PI.sqrt(), 1e-14));
        assert!(close(gamma(5.0), 24.0, 1e-14));
        assert!(close(gamma(-0.5), -2.0 * PI.sqrt(), 1e-14));
        assert!(close(gamma(20.0), 121_645_100_408_832_000.0, 1e-14));
        assert_eq!(rgamma(-3.0), 0.0);
        assert!(close(ln_gamma(100.0), 359.134_205_369_575_4, 1e-15));
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
        assert!((digamma(0.5).unwrap() + EULER_GAMMA + 2.0 * LN_2).abs() < 1e-14);
        assert!((digamma(2.0).unwrap() - 1.0 + EULER_GAMMA).abs() < 1e-15);
        assert!(digamma(0.0).is_err());
    }

    #[test]
    fn v_values() {
        assert!(close(v_s(-1.0).unwrap(), 4.0 / PI, 1e-14));
        assert_eq!(v_s(2.0).unwrap(), 0.0);
        assert!(matches!(v_s(3.0), Err(Error::Pole(_))));
        assert!(close(v_s(0.0).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn beta_first_terms() {
        let t = beta_coeffs(2.0, 3).unwrap();
        assert_eq!(t.get(0), 1.0);
        assert!(close(t.get(1), PI * PI / 3.0, 1e-15));
        for &s in &[-1.0, 0.5, 3.0] {
            let t = beta_coeffs(s, 1).unwrap();
            assert!(close(t.get(1), s * PI * PI / 6.0, 1e-15));
        }
    }

    #[test]
    fn c_zero_is_log_two() {
        assert!((c_constant(0).unwrap() - LN_2).abs() < 1e-14);
        assert_eq!(beta_prime(0).unwrap(), 0.0);
        assert!(close(beta_prime(1).unwrap(), PI * PI / 6.0, 1e-15));
    }

    #[test]
    fn sin_pi_exact_zeros() {
        assert_eq!(sin_pi(-6.0), 0.0);
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        assert_eq!(cos_pi(1.0), -1.0);
    }
}
