//! Binary decompositions of integers, the normalized vectors η(N), binary
//! expansions of 1/x on [1/2, 1] and the dyadic grid x_{M,n}.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Exact rational with 64-bit parts.
pub type Rational = Ratio<u64>;

/// Default number of exponents kept when an expansion has to be truncated.
pub const DEFAULT_MAX_TERMS: usize = 64;

/// `x * 2^-k`, exact while the result is representable.
#[inline]
pub(crate) fn ldexp(x: f64, k: i32) -> f64 {
    if k > 1000 {
        return x * 2f64.powi(-1000) * 2f64.powi(1000 - k);
    }
    x * 2f64.powi(-k)
}

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exponents n_1 > n_2 > ... > n_p of the set bits of N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryDecomposition {
    value: u64,
    exponents: Vec<u32>,
}

impl BinaryDecomposition {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return domain("N must be positive");
        }
        let exponents = (0..64u32).rev().filter(|&b| n >> b & 1 == 1).collect();
        Ok(Self {
            value: n,
            exponents,
        })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Σ 2^{n_k}, computed from the exponents.
    pub fn reconstruct(&self) -> u128 {
        self.exponents.iter().map(|&e| 1u128 << e).sum()
    }
}

pub fn decompose(n: u64) -> Result<BinaryDecomposition> {
    BinaryDecomposition::new(n)
}

/// η(N) = (2^{n_1}/N, ..., 2^{n_p}/N).
pub fn eta(n: u64) -> Result<ThetaVector> {
    ThetaVector::eta(n)
}

/// Number of ones in the binary representation of N.
pub fn tau_b(n: u64) -> Result<u32> {
    if n == 0 {
        return domain("N must be positive");
    }
    Ok(n.count_ones())
}

/// What follows the explicitly stored components of a [`ThetaVector`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tail {
    /// Nothing: the vector is finite.
    Finite,
    /// Components x·2^{-start}, x·2^{-start-1}, ... (every later gap is one).
    UnitGap { start: u32 },
    /// The expansion continues beyond the stored prefix. `mass` is the
    /// omitted mass, `bound` the bound x·2^{-k_last} on it.
    Truncated { mass: f64, bound: f64 },
}

/// A vector (θ_1, θ_2, ...) with θ_j = x·2^{-k_j}, 0 = k_1 < k_2 < ...
/// and Σθ_j = 1, where x = θ_1 is kept exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaVector {
    scale: Rational,
    shifts: Vec<u32>,
    tail: Tail,
}

impl ThetaVector {
    /// η(N) = (2^{n_1}/N, ..., 2^{n_p}/N).
    pub fn eta(n: u64) -> Result<Self> {
        let dec = decompose(n)?;
        let n1 = dec.exponents[0];
        let shifts = dec.exponents.iter().map(|&e| n1 - e).collect();
        Ok(Self {
            scale: Ratio::new(1u64 << n1, n),
            shifts,
            tail: Tail::Finite,
        })
    }

    /// The vector (1, 0, 0, ...).
    pub fn unit() -> Self {
        Self {
            scale: Ratio::from_integer(1),
            shifts: vec![0],
            tail: Tail::Finite,
        }
    }

    /// The vector (1/2, 1/4, 1/8, ...).
    pub fn half_geometric() -> Self {
        Self {
            scale: Ratio::new(1, 2),
            shifts: vec![0],
            tail: Tail::UnitGap { start: 1 },
        }
    }

    /// Builds the vector with exponents `shifts` (first one 0), optionally
    /// followed by the unit-gap tail `unit_tail_from, unit_tail_from + 1, ...`.
    /// The scale is fixed by normalization.
    pub fn from_shifts(shifts: Vec<u32>, unit_tail_from: Option<u32>) -> Result<Self> {
        if shifts.first() != Some(&0) {
            return Err(Error::Structure("first exponent must be 0".into()));
        }
        if shifts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Structure("exponents must increase strictly".into()));
        }
        let last = *shifts.last().unwrap();
        if let Some(t) = unit_tail_from {
            if t <= last {
                return Err(Error::Structure("tail must start after the prefix".into()));
            }
        }
        // 1/x = Σ 2^{-k_j} (+ 2^{-(t-1)}) = a / 2^K
        let big_k = unit_tail_from.map_or(last, |t| last.max(t - 1));
        if big_k > 62 {
            return Err(Error::Structure(
                "exponents beyond 62 are not representable".into(),
            ));
        }
        let mut a: u64 = shifts.iter().map(|&k| 1u64 << (big_k - k)).sum();
        if let Some(t) = unit_tail_from {
            a += 1u64 << (big_k - (t - 1));
        }
        let tail = match unit_tail_from {
            Some(start) => Tail::UnitGap { start },
            None => Tail::Finite,
        };
        Ok(Self {
            scale: Ratio::new(1u64 << big_k, a),
            shifts,
            tail,
        })
    }

    /// Recovers a finite vector from floating-point components. Every
    /// component must be θ_1 times an exact power of two and the sum must be
    /// one. Trailing zeros are ignored.
    pub fn from_components(components: &[f64]) -> Result<Self> {
        let mut end = components.len();
        while end > 0 && components[end - 1] == 0.0 {
            end -= 1;
        }
        let c = &components[..end];
        if c.is_empty() {
            return Err(Error::Structure("no positive component".into()));
        }
        if c.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::Structure(
                "components must be positive and finite".into(),
            ));
        }
        let t1 = c[0];
        let mut shifts = Vec::with_capacity(c.len());
        for &v in c {
            let ratio = t1 / v;
            let k = ratio.log2().round();
            if !(0.0..=62.0).contains(&k) || ldexp(t1, k as i32) != v {
                return Err(Error::Structure(format!(
                    "component {v} is not θ_1 times a power of two"
                )));
            }
            shifts.push(k as u32);
        }
        let theta = Self::from_shifts(shifts, None)?;
        let x = ratio_to_f64(&theta.scale);
        if ((x - t1) / x).abs() > 1e-12 {
            return Err(Error::Structure(format!(
                "components do not sum to one (θ_1 = {t1}, expected {x})"
            )));
        }
        Ok(theta)
    }

    /// θ_1 as an exact rational.
    pub fn scale(&self) -> Rational {
        self.scale
    }

    pub fn scale_f64(&self) -> f64 {
        ratio_to_f64(&self.scale)
    }

    /// Exponents k_j of the stored components.
    pub fn shifts(&self) -> &[u32] {
        &self.shifts
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Number of explicitly stored components.
    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.tail == Tail::Finite
    }

    /// θ_{i+1} (zero-based index into the stored prefix).
    pub fn component(&self, i: usize) -> f64 {
        ldexp(self.scale_f64(), self.shifts[i] as i32)
    }

    pub fn components(&self) -> Vec<f64> {
        let x = self.scale_f64();
        self.shifts.iter().map(|&k| ldexp(x, k as i32)).collect()
    }

    /// Stored components followed by up to `extra` components of a unit-gap
    /// tail.
    pub fn components_with_tail(&self, extra: usize) -> Vec<f64> {
        let mut out = self.components();
        if let Tail::UnitGap { start } = self.tail {
            let x = self.scale_f64();
            out.extend((0..extra as u32).map(|i| ldexp(x, (start + i) as i32)));
        }
        out
    }

    /// Mass carried beyond the stored prefix.
    pub fn tail_mass(&self) -> f64 {
        match self.tail {
            Tail::Finite => 0.0,
            Tail::UnitGap { start } => ldexp(self.scale_f64(), start as i32 - 1),
            Tail::Truncated { mass, .. } => mass,
        }
    }

    /// Upper bound on the mass beyond the stored prefix.
    pub fn tail_bound(&self) -> f64 {
        match self.tail {
            Tail::Truncated { bound, .. } => bound,
            _ => self.tail_mass(),
        }
    }

    /// b_k = Σ_{j>k} θ_j for each stored k, tail included. Accumulated from
    /// the back so small entries keep full relative accuracy.
    pub fn suffix_sums(&self) -> Vec<f64> {
        let comps = self.components();
        let mut b = vec![0.0; comps.len()];
        let mut acc = self.tail_mass();
        for i in (0..comps.len()).rev() {
            b[i] = acc;
            acc += comps[i];
        }
        b
    }

    /// Re-expands a truncated vector with a larger term budget.
    pub fn extended(&self, max_terms: usize) -> Result<Self> {
        match self.tail {
            Tail::Truncated { .. } => Ok(expand_reciprocal(self.scale, true, max_terms)?.theta),
            _ => Ok(self.clone()),
        }
    }

    fn exact_component(&self, k: u32) -> BigRational {
        let num = BigInt::from(*self.scale.numer());
        let den = BigInt::from(*self.scale.denom()) << (k as usize);
        BigRational::new(num, den)
    }

    /// Checks the defining inequalities in exact arithmetic: normalization,
    /// 1/2 ≤ θ_1 ≤ 1, θ_k ≤ 1/(2^k − 1), Σ_{j>k}θ_j ≤ θ_k and
    /// Σ_{j≤k}θ_j ≥ 1 − 2^{-(k-1)}. Unit-gap tails are checked over their
    /// first 64 entries, with exact tail masses.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut comps: Vec<BigRational> = self
            .shifts
            .iter()
            .map(|&k| self.exact_component(k))
            .collect();
        let one = BigRational::one();
        let prefix_total: BigRational = comps.iter().fold(BigRational::zero(), |a, c| a + c);
        // exact mass after the stored (and any materialized) components
        let mut rest = match self.tail {
            Tail::Finite => {
                if prefix_total != one {
                    return Err(format!("components sum to {prefix_total}, not 1"));
                }
                BigRational::zero()
            }
            Tail::UnitGap { start } => {
                let t = self.exact_component(start - 1);
                if &prefix_total + &t != one {
                    return Err("prefix plus unit-gap tail does not sum to 1".into());
                }
                for i in 0..64u32 {
                    comps.push(self.exact_component(start + i));
                }
                self.exact_component(start + 63)
            }
            Tail::Truncated { bound, .. } => {
                let r = &one - &prefix_total;
                let rf = r.to_f64().unwrap_or(f64::NAN);
                if r < BigRational::zero() || rf > bound * (1.0 + 1e-12) {
                    return Err(format!("truncated mass {rf} outside [0, {bound}]"));
                }
                r
            }
        };
        let half = BigRational::new(1.into(), 2.into());
        if comps[0] < half || comps[0] > one {
            return Err("θ_1 outside [1/2, 1]".into());
        }
        let mut b = vec![BigRational::zero(); comps.len()];
        for i in (0..comps.len()).rev() {
            b[i] = rest.clone();
            rest += &comps[i];
        }
        let mut partial = BigRational::zero();
        for (i, c) in comps.iter().enumerate() {
            let k = i + 1;
            if k < 120 {
                let cap = BigRational::new(1.into(), (BigInt::one() << k) - 1);
                if *c > cap {
                    return Err(format!("θ_{k} exceeds 1/(2^{k} - 1)"));
                }
            }
            if b[i] > *c {
                return Err(format!("tail after θ_{k} exceeds θ_{k}"));
            }
            partial += c;
            let floor = &one - BigRational::new(1.into(), BigInt::one() << (k - 1));
            if partial < floor {
                return Err(format!("partial sum to {k} below 1 - 2^-({k}-1)"));
            }
        }
        Ok(())
    }
}

/// A point x ∈ [1/2, 1] with a binary expansion of 1/x.
#[derive(Clone, Debug, PartialEq)]
pub struct SVector {
    theta: ThetaVector,
}

impl SVector {
    pub fn x(&self) -> Rational {
        self.theta.scale
    }

    pub fn x_f64(&self) -> f64 {
        self.theta.scale_f64()
    }

    /// Stored exponents k_1 = 0 < k_2 < ...
    pub fn k_exponents(&self) -> &[u32] {
        &self.theta.shifts
    }

    /// True for a terminating expansion.
    pub fn is_finite(&self) -> bool {
        self.theta.is_finite()
    }

    /// First exponent of an all-ones tail, if the expansion has one.
    pub fn unit_tail_start(&self) -> Option<u32> {
        match self.theta.tail {
            Tail::UnitGap { start } => Some(start),
            _ => None,
        }
    }

    pub fn tail_bound(&self) -> f64 {
        self.theta.tail_bound()
    }

    pub fn theta(&self) -> &ThetaVector {
        &self.theta
    }

    pub fn into_theta(self) -> ThetaVector {
        self.theta
    }

    /// Σ 2^{-k_j} over the whole expansion, exactly (unit-gap tails are
    /// summed in closed form; truncated tails are left out).
    pub fn reciprocal_sum(&self) -> BigRational {
        let term = |k: u32| BigRational::new(1.into(), BigInt::one() << (k as usize));
        let mut s = self
            .theta
            .shifts
            .iter()
            .fold(BigRational::zero(), |a, &k| a + term(k));
        if let Tail::UnitGap { start } = self.theta.tail {
            s += term(start - 1);
        }
        s
    }
}

/// Converts a double in [1/2, 1] to the exact rational it represents.
pub fn exact_abscissa(x: f64) -> Result<Rational> {
    if !(0.5..=1.0).contains(&x) {
        return domain(format!("x = {x} outside [1/2, 1]"));
    }
    // every double in [1/2, 1] is a multiple of 2^-53
    let scaled = x * 9007199254740992.0;
    Ok(Ratio::new(scaled as u64, 1u64 << 53))
}

/// Expands 1/x = Σ 2^{-k_j}, 0 = k_1 < k_2 < ... .
///
/// Dyadic 1/x has a finite and an infinite expansion; `prefer_finite`
/// selects between them. Non-terminating expansions are cut after
/// `max_terms` exponents.
pub fn expand_reciprocal(x: Rational, prefer_finite: bool, max_terms: usize) -> Result<SVector> {
    let half = Ratio::new(1u64, 2);
    if x < half || x > Ratio::from_integer(1) {
        return domain(format!("x = {x} outside [1/2, 1]"));
    }
    if max_terms == 0 {
        return domain("max_terms must be positive");
    }
    let (p, q) = (*x.numer() as u128, *x.denom() as u128);
    if q == 2 * p {
        return Ok(SVector {
            theta: ThetaVector::half_geometric(),
        });
    }
    // 1/x = q/p = 1 + r/p
    let mut r = q - p;
    let mut shifts = vec![0u32];
    let mut k = 0u32;
    while r != 0 && shifts.len() < max_terms {
        r *= 2;
        k += 1;
        if r >= p {
            shifts.push(k);
            r -= p;
        }
    }
    let tail = if r == 0 {
        if !prefer_finite && shifts.len() >= 2 {
            let last = shifts.pop().unwrap();
            Tail::UnitGap { start: last + 1 }
        } else {
            Tail::Finite
        }
    } else {
        let xf = ratio_to_f64(&x);
        Tail::Truncated {
            mass: ldexp(r as f64 / q as f64, k as i32),
            bound: ldexp(xf, k as i32),
        }
    };
    Ok(SVector {
        theta: ThetaVector {
            scale: x,
            shifts,
            tail,
        },
    })
}

/// x_{M,n} = 2^M / (2^M + 2n + 1).
pub fn grid_point(m: u32, n: u64) -> Result<Rational> {
    if m == 0 || m > 62 {
        return domain(format!("grid order M = {m} outside 1..=62"));
    }
    if n >= 1u64 << (m - 1) {
        return domain(format!("grid index n = {n} outside 0..2^(M-1)"));
    }
    Ok(Ratio::new(1u64 << m, (1u64 << m) + 2 * n + 1))
}

/// The 2^{M-1} grid points x_{M,n}, in order of increasing n (decreasing x).
pub fn grid_points(m: u32) -> Result<Vec<Rational>> {
    grid_point(m, 0)?;
    Ok((0..1u64 << (m - 1))
        .map(|n| Ratio::new(1u64 << m, (1u64 << m) + 2 * n + 1))
        .collect())
}
