//! Compression-based confidence bounds for consistent and sample-and-discard
//! scenario decision algorithms.
//!
//! Every evaluator returns `q(N, epsilon)`: an upper bound on the probability,
//! over the draw of `N` i.i.d. scenarios, that the scenario decision has risk
//! larger than `epsilon`. Raw values above one are clamped to one.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::logspace::{
    binomial_lower_tail, log_binomial_unchecked, log_sum_exp, LogTolerance, LogValue,
};

/// The eight bound formulas.
///
/// `*Consistent` kinds apply to algorithms whose decision satisfies every
/// sampled constraint; `*Discard` kinds to algorithms that first drop up to
/// `r` scenarios with a selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    FloydConsistent,
    CampiConsistent,
    WaitJudgeConsistent,
    NewConsistent,
    MargellosDiscard,
    CampiDiscard,
    RomaoDiscard,
    NewDiscard,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::FloydConsistent,
        BoundKind::CampiConsistent,
        BoundKind::WaitJudgeConsistent,
        BoundKind::NewConsistent,
        BoundKind::MargellosDiscard,
        BoundKind::CampiDiscard,
        BoundKind::RomaoDiscard,
        BoundKind::NewDiscard,
    ];

    pub const CONSISTENT: [BoundKind; 4] = [
        BoundKind::FloydConsistent,
        BoundKind::CampiConsistent,
        BoundKind::WaitJudgeConsistent,
        BoundKind::NewConsistent,
    ];

    pub const DISCARD: [BoundKind; 4] = [
        BoundKind::MargellosDiscard,
        BoundKind::CampiDiscard,
        BoundKind::RomaoDiscard,
        BoundKind::NewDiscard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::FloydConsistent => "floyd-consistent",
            BoundKind::CampiConsistent => "campi-consistent",
            BoundKind::WaitJudgeConsistent => "waitjudge-consistent",
            BoundKind::NewConsistent => "new-consistent",
            BoundKind::MargellosDiscard => "margellos-discard",
            BoundKind::CampiDiscard => "campi-discard",
            BoundKind::RomaoDiscard => "romao-discard",
            BoundKind::NewDiscard => "new-discard",
        }
    }

    pub fn is_discard(self) -> bool {
        matches!(
            self,
            BoundKind::MargellosDiscard
                | BoundKind::CampiDiscard
                | BoundKind::RomaoDiscard
                | BoundKind::NewDiscard
        )
    }

    /// The bound only holds for distributions under which the minimal
    /// compression set is unique.
    pub fn assumes_nondegeneracy(self) -> bool {
        matches!(
            self,
            BoundKind::CampiConsistent | BoundKind::CampiDiscard | BoundKind::RomaoDiscard
        )
    }

    /// The bound additionally needs discarded constraints to be violated by
    /// the decision, or the decision to come from cascade optimization.
    pub fn assumes_conformity_or_cascade(self) -> bool {
        matches!(self, BoundKind::CampiDiscard | BoundKind::RomaoDiscard)
    }

    pub fn is_distribution_free(self) -> bool {
        !self.assumes_nondegeneracy() && !self.assumes_conformity_or_cascade()
    }

    /// Human-readable warning for bounds that are not distribution-free.
    pub fn assumptions_warning(self) -> Option<&'static str> {
        match self {
            BoundKind::CampiConsistent => Some(
                "campi-consistent assumes nondegeneracy (or convex constraints with nonempty interior); \
                 not valid for distributions with atoms",
            ),
            BoundKind::CampiDiscard => Some(
                "campi-discard assumes nondegeneracy and conformity of discarded constraints",
            ),
            BoundKind::RomaoDiscard => Some(
                "romao-discard assumes sequential nondegeneracy and a cascade-optimization algorithm",
            ),
            _ => None,
        }
    }

    /// Smallest `N` on which the formula is defined.
    pub fn min_sample_size(self, d: u64, r: u64) -> u64 {
        match self {
            BoundKind::FloydConsistent | BoundKind::CampiConsistent | BoundKind::NewConsistent => d,
            BoundKind::WaitJudgeConsistent => d + 1,
            BoundKind::MargellosDiscard | BoundKind::NewDiscard => r + d,
            BoundKind::CampiDiscard | BoundKind::RomaoDiscard => (r + d).saturating_sub(1),
        }
    }

    /// Checks `(d, r)` independently of `N` and `epsilon`.
    pub fn check_params(self, d: u64, r: u64) -> Result<()> {
        if !self.is_discard() && r != 0 {
            return Err(domain(format!(
                "{} takes no discarding size, got r={r}",
                self.name()
            )));
        }
        if matches!(self, BoundKind::CampiDiscard | BoundKind::RomaoDiscard) && d == 0 {
            return Err(domain(format!("{} requires d >= 1", self.name())));
        }
        Ok(())
    }

    pub fn validate(self, q: &BoundQuery) -> Result<()> {
        self.check_params(q.d, q.r)?;
        if !(q.epsilon > 0.0 && q.epsilon <= 1.0) {
            return Err(domain(format!(
                "epsilon must lie in (0, 1], got {}",
                q.epsilon
            )));
        }
        let min_n = self.min_sample_size(q.d, q.r);
        if q.n < min_n {
            return Err(domain(format!(
                "{} requires N >= {min_n} for d={}, r={}, got N={}",
                self.name(),
                q.d,
                q.r,
                q.n
            )));
        }
        Ok(())
    }

    /// Raw bound in log domain (not clamped).
    pub fn log_bound(self, q: &BoundQuery) -> Result<LogValue> {
        self.validate(q)?;
        let tol = LogTolerance::new(q.epsilon);
        let (n, d, r) = (q.n, q.d, q.r);
        Ok(match self {
            BoundKind::FloydConsistent => floyd_log(n, d, tol),
            BoundKind::CampiConsistent => campi_log(n, d, tol),
            BoundKind::WaitJudgeConsistent => waitjudge_log(n, d, tol),
            BoundKind::NewConsistent => new_consistent_log(n, d, q.epsilon, tol),
            BoundKind::MargellosDiscard => {
                let tail = binomial_lower_tail(n - d, r, tol);
                log_binomial_unchecked(n, d) * tail
            }
            BoundKind::CampiDiscard => {
                log_binomial_unchecked(r + d - 1, r) * binomial_lower_tail(n, r + d - 1, tol)
            }
            BoundKind::RomaoDiscard => binomial_lower_tail(n, r + d - 1, tol),
            BoundKind::NewDiscard => {
                log_binomial_unchecked(n, r) * new_consistent_log(n - r, d, q.epsilon, tol)
            }
        })
    }

    /// Clamped bound `min(1, q)`.
    pub fn evaluate(self, q: &BoundQuery) -> Result<f64> {
        Ok(self.log_bound(q)?.to_prob())
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = BoundKind::ALL.iter().map(|k| k.name()).collect();
                domain(format!(
                    "unknown bound '{s}', expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Parameters of a single bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    /// Number of sampled scenarios.
    pub n: u64,
    /// Upper bound on the compression size.
    pub d: u64,
    /// Discarding size; zero for consistent algorithms.
    pub r: u64,
    pub epsilon: f64,
}

impl BoundQuery {
    pub fn consistent(n: u64, d: u64, epsilon: f64) -> Self {
        BoundQuery {
            n,
            d,
            r: 0,
            epsilon,
        }
    }

    pub fn discard(n: u64, d: u64, r: u64, epsilon: f64) -> Self {
        BoundQuery { n, d, r, epsilon }
    }
}

fn floyd_log(n: u64, d: u64, tol: LogTolerance) -> LogValue {
    log_binomial_unchecked(n, d) * tol.complement.powi(n - d)
}

fn campi_log(n: u64, d: u64, tol: LogTolerance) -> LogValue {
    if d == 0 {
        return LogValue::ZERO;
    }
    binomial_lower_tail(n, d - 1, tol)
}

fn waitjudge_log(n: u64, d: u64, tol: LogTolerance) -> LogValue {
    let numerator = LogValue::from_ln((n as f64).ln()) * floyd_log(n, d, tol);
    let denominator =
        log_sum_exp((d..n).map(|m| log_binomial_unchecked(m, d) * tol.complement.powi(m - d)));
    numerator / denominator
}

fn new_consistent_log(n: u64, d: u64, epsilon: f64, tol: LogTolerance) -> LogValue {
    let m = optimal_m_unchecked(n, d, epsilon);
    log_binomial_unchecked(n, d) / log_binomial_unchecked(m, d) * tol.complement.powi(n - m)
}

/// Relative distance under which `d / epsilon` is treated as an integer.
///
/// Tolerances such as `0.3` are not exactly representable, so a ratio that is
/// an integer for the intended decimal lands a few ulps off; at such a tie the
/// two neighbouring terms are equal and the smaller index must win.
const TIE_RELATIVE_TOL: f64 = 1e-12;

/// Smallest minimizer over `m in {d, ..., n}` of `C(m, d)^-1 (1 - epsilon)^(n - m)`.
///
/// Consecutive terms have ratio `((m + 1 - d) / (m + 1)) / (1 - epsilon)`, which
/// is nondecreasing in `m` and crosses one at `m + 1 = d / epsilon`, so the
/// minimizer is `ceil(d / epsilon) - 1` clamped into `[d, n]`.
pub fn optimal_m(n: u64, d: u64, epsilon: f64) -> Result<u64> {
    if d > n {
        return Err(domain(format!(
            "optimal_m requires d <= N, got d={d}, N={n}"
        )));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(domain(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    Ok(optimal_m_unchecked(n, d, epsilon))
}

fn optimal_m_unchecked(n: u64, d: u64, epsilon: f64) -> u64 {
    if d == 0 {
        return 0;
    }
    let ratio = d as f64 / epsilon;
    let nearest = ratio.round();
    let ceil = if (ratio - nearest).abs() <= TIE_RELATIVE_TOL * ratio {
        nearest
    } else {
        ratio.ceil()
    };
    if ceil >= (n + 1) as f64 {
        return n;
    }
    ((ceil as u64).saturating_sub(1)).clamp(d, n)
}

/// `C(N, d) (1 - epsilon)^(N - d)`.
pub fn bound_consistent_floyd(q: &BoundQuery) -> Result<f64> {
    BoundKind::FloydConsistent.evaluate(q)
}

/// `sum_{i < d} C(N, i) epsilon^i (1 - epsilon)^(N - i)`; requires nondegeneracy.
pub fn bound_consistent_campi(q: &BoundQuery) -> Result<f64> {
    BoundKind::CampiConsistent.evaluate(q)
}

/// Fixed-`d` bound obtained from the wait-and-judge analysis.
pub fn bound_consistent_waitjudge(q: &BoundQuery) -> Result<f64> {
    BoundKind::WaitJudgeConsistent.evaluate(q)
}

/// `C(N, d) min_m C(m, d)^-1 (1 - epsilon)^(N - m)`.
pub fn bound_consistent_new(q: &BoundQuery) -> Result<f64> {
    BoundKind::NewConsistent.evaluate(q)
}

/// `C(N, d) sum_{i <= r} C(N - d, i) epsilon^i (1 - epsilon)^(N - d - i)`.
pub fn bound_discard_margellos(q: &BoundQuery) -> Result<f64> {
    BoundKind::MargellosDiscard.evaluate(q)
}

/// `C(r + d - 1, r) sum_{i < r + d} C(N, i) epsilon^i (1 - epsilon)^(N - i)`;
/// requires nondegeneracy and conformity.
pub fn bound_discard_campi(q: &BoundQuery) -> Result<f64> {
    BoundKind::CampiDiscard.evaluate(q)
}

/// Binomial lower tail at `r + d - 1`; requires a cascade algorithm.
pub fn bound_discard_romao(q: &BoundQuery) -> Result<f64> {
    BoundKind::RomaoDiscard.evaluate(q)
}

/// `C(N, r) C(N - r, d) min_m C(m, d)^-1 (1 - epsilon)^(N - r - m)`.
pub fn bound_discard_new(q: &BoundQuery) -> Result<f64> {
    BoundKind::NewDiscard.evaluate(q)
}
