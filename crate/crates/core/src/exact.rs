//! Arbitrary-precision reference implementation of every bound.
//!
//! Tolerances enter as exact rationals `p / q`, so the values computed here
//! carry no rounding at all. They certify the log-domain evaluators in
//! [`crate::bounds`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::bounds::{BoundKind, BoundQuery};
use crate::error::{domain, Error, Result};

/// Nonnegative exact rational in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalProb(Ratio<BigUint>);

impl RationalProb {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() {
            return Err(domain("rational with zero denominator"));
        }
        Ok(RationalProb(Ratio::new(numerator, denominator)))
    }

    pub fn from_ratio(numerator: u64, denominator: u64) -> Result<Self> {
        Self::new(numerator.into(), denominator.into())
    }

    pub fn zero() -> Self {
        RationalProb(Ratio::zero())
    }

    pub fn one() -> Self {
        RationalProb(Ratio::one())
    }

    pub fn numerator(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn min_one(self) -> Self {
        if self.0 > Ratio::one() {
            Self::one()
        } else {
            self
        }
    }

    /// Natural logarithm, accurate to a few ulps even when numerator and
    /// denominator are far outside the `f64` range. Zero maps to `-inf`.
    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        big_ln(self.numerator()) - big_ln(self.denominator())
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }
}

impl fmt::Display for RationalProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

impl FromStr for RationalProb {
    type Err = Error;

    /// Accepts `p/q` or a plain decimal such as `0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || domain(format!("cannot parse '{s}' as an exact rational"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigUint = p.trim().parse().map_err(|_| bad())?;
            let q: BigUint = q.trim().parse().map_err(|_| bad())?;
            return Self::new(p, q);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let numerator: BigUint = digits.parse().map_err(|_| bad())?;
        let denominator = BigUint::from(10u32).pow(frac_part.len() as u32);
        Self::new(numerator, denominator)
    }
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn big_binomial(n: u64, k: u64) -> BigUint {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c *= n - i;
        c /= i + 1;
    }
    c
}

/// Tolerance `p / q` with its complement `s / q`, `s = q - p`.
struct Tolerance {
    p: BigUint,
    q: BigUint,
    s: BigUint,
}

impl Tolerance {
    fn new(epsilon: &RationalProb) -> Result<Self> {
        let p = epsilon.numerator().clone();
        let q = epsilon.denominator().clone();
        if p.is_zero() || p > q {
            return Err(domain(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        let s = &q - &p;
        Ok(Tolerance { p, q, s })
    }

    /// `(s / q)^k`.
    fn complement_pow(&self, k: u64) -> Ratio<BigUint> {
        Ratio::new(pow(&self.s, k), pow(&self.q, k))
    }

    /// `sum_{i=0}^{k} C(n, i) (p/q)^i (s/q)^(n-i)`.
    fn lower_tail(&self, n: u64, k: u64) -> Ratio<BigUint> {
        let k = k.min(n);
        let mut sum = BigUint::zero();
        for i in 0..=k {
            sum += big_binomial(n, i) * pow(&self.p, i) * pow(&self.s, n - i);
        }
        Ratio::new(sum, pow(&self.q, n))
    }
}

fn pow(base: &BigUint, exp: u64) -> BigUint {
    num_traits::pow(base.clone(), exp as usize)
}

fn binom(n: u64, k: u64) -> Ratio<BigUint> {
    Ratio::from_integer(big_binomial(n, k))
}

/// Exact clamped value of `kind` at `(N, d, r, epsilon)`.
pub fn exact_bound(
    kind: BoundKind,
    n: u64,
    d: u64,
    r: u64,
    epsilon: &RationalProb,
) -> Result<RationalProb> {
    let tol = Tolerance::new(epsilon)?;
    kind.validate(&BoundQuery::discard(n, d, r, epsilon.to_f64().min(1.0)))?;
    let raw = match kind {
        BoundKind::FloydConsistent => binom(n, d) * tol.complement_pow(n - d),
        BoundKind::CampiConsistent => {
            if d == 0 {
                Ratio::zero()
            } else {
                tol.lower_tail(n, d - 1)
            }
        }
        BoundKind::WaitJudgeConsistent => {
            // Denominator scaled by q^(N-1-d) to stay integral.
            let mut sum = BigUint::zero();
            for m in d..n {
                sum += big_binomial(m, d) * pow(&tol.s, m - d) * pow(&tol.q, n - 1 - m);
            }
            let numer = BigUint::from(n) * big_binomial(n, d) * pow(&tol.s, n - d);
            Ratio::new(numer, &tol.q * sum)
        }
        BoundKind::NewConsistent => new_consistent(n, d, &tol),
        BoundKind::MargellosDiscard => binom(n, d) * tol.lower_tail(n - d, r),
        BoundKind::CampiDiscard => binom(r + d - 1, r) * tol.lower_tail(n, r + d - 1),
        BoundKind::RomaoDiscard => tol.lower_tail(n, r + d - 1),
        BoundKind::NewDiscard => binom(n, r) * new_consistent(n - r, d, &tol),
    };
    Ok(RationalProb(raw).min_one())
}

fn new_consistent(n: u64, d: u64, tol: &Tolerance) -> Ratio<BigUint> {
    let m = argmin_prefix(d, n, tol)[(n - d) as usize];
    binom(n, d) * tol.complement_pow(n - m) / binom(m, d)
}

/// Smallest exact argmin over `m in {d, ..., N}` of `C(m, d)^-1 (1 - epsilon)^(N - m)`.
pub fn exact_brute_min_m(n: u64, d: u64, epsilon: &RationalProb) -> Result<u64> {
    if d > n {
        return Err(domain(format!("requires d <= N, got d={d}, N={n}")));
    }
    let tol = Tolerance::new(epsilon)?;
    Ok(argmin_prefix(d, n, &tol)[(n - d) as usize])
}

/// `exact_brute_min_m(n, d, epsilon)` for every `n` in `d..=n_max`, indexed by
/// `n - d`. The objective depends on `N` only through a common factor, so a
/// single scan over `m` serves all horizons.
pub fn exact_min_m_all_horizons(d: u64, n_max: u64, epsilon: &RationalProb) -> Result<Vec<u64>> {
    if d > n_max {
        return Err(domain(format!("requires d <= N, got d={d}, N={n_max}")));
    }
    let tol = Tolerance::new(epsilon)?;
    Ok(argmin_prefix(d, n_max, &tol))
}

/// Running smallest argmin of `t_m`, each candidate compared exactly against
/// the incumbent through the ratio `t_m / t_best`, kept as a fraction of
/// integers and reset whenever the incumbent changes.
fn argmin_prefix(d: u64, n_max: u64, tol: &Tolerance) -> Vec<u64> {
    let mut out = Vec::with_capacity((n_max - d + 1) as usize);
    out.push(d);
    if tol.s.is_zero() {
        // Every term with m < N vanishes; the smallest index is already optimal.
        out.resize((n_max - d + 1) as usize, d);
        return out;
    }
    let mut best = d;
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for m in d..n_max {
        // t_{m+1} / t_m = (m + 1 - d) q / ((m + 1) s)
        num *= m + 1 - d;
        num *= &tol.q;
        den *= m + 1;
        den *= &tol.s;
        if num < den {
            best = m + 1;
            num.set_one();
            den.set_one();
        }
        out.push(best);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(p: u64, q: u64) -> RationalProb {
        RationalProb::from_ratio(p, q).unwrap()
    }

    #[test]
    fn hand_evaluated_values() {
        assert_eq!(
            exact_bound(BoundKind::NewConsistent, 2, 1, 0, &rp(3, 4)).unwrap(),
            rp(1, 2)
        );
        assert_eq!(
            exact_bound(BoundKind::CampiConsistent, 10, 2, 0, &rp(1, 2)).unwrap(),
            rp(11, 1024)
        );
        assert_eq!(
            exact_bound(BoundKind::NewDiscard, 3, 1, 1, &rp(9, 10)).unwrap(),
            rp(3, 5)
        );
        assert_eq!(
            exact_bound(BoundKind::WaitJudgeConsistent, 3, 1, 0, &rp(9, 10)).unwrap(),
            rp(3, 40)
        );
        assert_eq!(
            exact_bound(BoundKind::MargellosDiscard, 4, 1, 1, &rp(9, 10)).unwrap(),
            rp(14, 125)
        );
        assert_eq!(
            exact_bound(BoundKind::FloydConsistent, 10, 1, 0, &rp(1, 2)).unwrap(),
            rp(10, 512)
        );
        assert_eq!(
            exact_bound(BoundKind::FloydConsistent, 10, 1, 0, &rp(1, 5)).unwrap(),
            rp(1, 1)
        );
    }

    #[test]
    fn brute_min_examples() {
        assert_eq!(exact_brute_min_m(500, 100, &rp(3, 10)).unwrap(), 333);
        assert_eq!(exact_brute_min_m(5, 5, &rp(1, 7)).unwrap(), 5);
        assert_eq!(exact_brute_min_m(20, 1, &rp(1, 1)).unwrap(), 1);
        assert!(exact_brute_min_m(3, 4, &rp(1, 2)).is_err());
        // Exact tie at m = 9 and m = 10.
        assert_eq!(exact_brute_min_m(100, 3, &rp(3, 10)).unwrap(), 9);
    }

    #[test]
    fn horizons_agree_with_single_calls() {
        let eps = rp(7, 100);
        let all = exact_min_m_all_horizons(4, 120, &eps).unwrap();
        for n in 4..=120 {
            assert_eq!(
                all[(n - 4) as usize],
                exact_brute_min_m(n, 4, &eps).unwrap()
            );
        }
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("0.75".parse::<RationalProb>().unwrap(), rp(3, 4));
        assert_eq!("3/4".parse::<RationalProb>().unwrap(), rp(3, 4));
        assert_eq!("1".parse::<RationalProb>().unwrap(), rp(1, 1));
        assert_eq!(".05".parse::<RationalProb>().unwrap(), rp(1, 20));
        assert!("1e-3".parse::<RationalProb>().is_err());
        assert!("-0.5".parse::<RationalProb>().is_err());
        assert!("1/0".parse::<RationalProb>().is_err());
    }

    #[test]
    fn ln_of_huge_rationals() {
        let big = RationalProb::new(BigUint::from(3u32).pow(2000), BigUint::from(2u32).pow(3000))
            .unwrap();
        let want = 2000.0 * 3f64.ln() - 3000.0 * 2f64.ln();
        assert!((big.ln() - want).abs() < 1e-12 * want.abs());
        assert_eq!(RationalProb::zero().ln(), f64::NEG_INFINITY);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(exact_bound(BoundKind::FloydConsistent, 5, 1, 0, &rp(0, 1)).is_err());
        assert!(exact_bound(BoundKind::FloydConsistent, 5, 1, 0, &rp(3, 2)).is_err());
        assert!(exact_bound(BoundKind::CampiDiscard, 5, 0, 1, &rp(1, 2)).is_err());
    }
}
