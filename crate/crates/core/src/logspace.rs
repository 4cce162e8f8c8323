//! Log-domain arithmetic for nonnegative reals.
//!
//! Binomial coefficients such as C(500, 250) overflow `f64`, so every bound is
//! assembled from natural logarithms and only exponentiated at the very end.

use std::ops::{Div, Mul};

use crate::error::{domain, Result};

/// A nonnegative real stored as its natural logarithm.
///
/// `f64::NEG_INFINITY` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan(), "log magnitude must not be NaN");
        LogValue(ln)
    }

    pub fn from_value(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        LogValue(x.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `min(1, self)`, still in log domain.
    pub fn clamp_to_one(self) -> Self {
        if self.0 > 0.0 {
            LogValue::ONE
        } else {
            self
        }
    }

    /// Converts to a probability in `[0, 1]`.
    pub fn to_prob(self) -> f64 {
        self.clamp_to_one().0.exp().clamp(0.0, 1.0)
    }

    /// Unclamped value. May be `inf` when the magnitude exceeds `f64`.
    pub fn to_f64(self) -> f64 {
        self.0.exp()
    }

    /// `base^exponent` for a base given in log domain, with `0^0 = 1`.
    pub fn powi(self, exponent: u64) -> Self {
        if exponent == 0 {
            LogValue::ONE
        } else {
            LogValue(exponent as f64 * self.0)
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 + rhs.0)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        debug_assert!(!rhs.is_zero(), "division by zero in log domain");
        if self.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 - rhs.0)
    }
}

/// Max-shifted `ln(sum(exp(x_i)))`. Empty input is zero.
pub fn log_sum_exp<I>(terms: I) -> LogValue
where
    I: IntoIterator<Item = LogValue>,
{
    let terms: Vec<f64> = terms.into_iter().map(LogValue::ln).collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return LogValue::ZERO;
    }
    let sum: f64 = terms.iter().map(|&t| (t - max).exp()).sum();
    LogValue(max + sum.ln())
}

/// `ln C(n, k)` through the log-gamma function.
pub fn log_binomial(n: u64, k: u64) -> Result<LogValue> {
    if k > n {
        return Err(domain(format!(
            "binomial coefficient C({n}, {k}) requires k <= n"
        )));
    }
    Ok(log_binomial_unchecked(n, k))
}

pub(crate) fn log_binomial_unchecked(n: u64, k: u64) -> LogValue {
    debug_assert!(k <= n);
    if k == 0 || k == n {
        return LogValue::ONE;
    }
    if k == 1 || k == n - 1 {
        return LogValue((n as f64).ln());
    }
    let lg = |x: u64| libm::lgamma(x as f64 + 1.0);
    LogValue(lg(n) - lg(k) - lg(n - k))
}

/// `ln(epsilon)` and `ln(1 - epsilon)` for a tolerance in `(0, 1]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogTolerance {
    pub eps: LogValue,
    pub complement: LogValue,
}

impl LogTolerance {
    pub fn new(epsilon: f64) -> Self {
        LogTolerance {
            eps: LogValue(epsilon.ln()),
            complement: LogValue((-epsilon).ln_1p()),
        }
    }
}

/// Binomial lower tail `sum_{i=0}^{k} C(n, i) p^i (1-p)^(n-i)` in log domain.
pub(crate) fn binomial_lower_tail(n: u64, k: u64, tol: LogTolerance) -> LogValue {
    let k = k.min(n);
    log_sum_exp(
        (0..=k)
            .map(|i| log_binomial_unchecked(n, i) * tol.eps.powi(i) * tol.complement.powi(n - i)),
    )
}
