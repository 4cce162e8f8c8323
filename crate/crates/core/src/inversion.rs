//! Inverting a bound: the tolerance reached at a fixed sample size, and the
//! sample size needed for a fixed tolerance.

use crate::bounds::{BoundKind, BoundQuery};
use crate::error::{domain, Error, Result};

/// Bisection stops once the bracket on epsilon is narrower than this.
pub const EPSILON_BRACKET_TOL: f64 = 1e-12;

/// Largest sample size `sample_size_for` will consider.
pub const MAX_SAMPLE_SIZE: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionTarget {
    pub kind: BoundKind,
    /// Target confidence level, in `(0, 1)`.
    pub beta: f64,
    pub d: u64,
    pub r: u64,
}

impl InversionTarget {
    pub fn new(kind: BoundKind, beta: f64, d: u64, r: u64) -> Self {
        InversionTarget { kind, beta, d, r }
    }

    fn check(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(domain(format!(
                "beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        self.kind.check_params(self.d, self.r)
    }

    fn bound(&self, n: u64, epsilon: f64) -> Result<f64> {
        self.kind
            .evaluate(&BoundQuery::discard(n, self.d, self.r, epsilon))
    }

    fn infeasible(&self, n: u64) -> Error {
        Error::Infeasible {
            bound: self.kind.name(),
            n,
            d: self.d,
            r: self.r,
            beta: self.beta,
        }
    }
}

/// Smallest `epsilon` in `(0, 1]` with `q(N, epsilon) <= beta`, to within
/// [`EPSILON_BRACKET_TOL`].
///
/// Relies on every bound being nonincreasing in `epsilon`; the clamped
/// plateau at one is harmless for bisection.
pub fn epsilon_for_confidence(target: &InversionTarget, n: u64) -> Result<f64> {
    target.check()?;
    if target.bound(n, 1.0)? > target.beta {
        return Err(target.infeasible(n));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > EPSILON_BRACKET_TOL {
        let mid = 0.5 * (lo + hi);
        if target.bound(n, mid)? <= target.beta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Minimal `N` with `q(N, epsilon) <= beta`.
///
/// The bounds are not monotone in `N` for small samples, so the search
/// doubles its step until the target holds, bisects inside the last bracket,
/// then walks backwards while the previous sample size still satisfies the
/// target. The result satisfies the target and either sits at the lower
/// domain limit or has a failing predecessor.
pub fn sample_size_for(target: &InversionTarget, epsilon: f64) -> Result<u64> {
    target.check()?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let lower = target.kind.min_sample_size(target.d, target.r).max(1);
    let holds = |n: u64| -> Result<bool> { Ok(target.bound(n, epsilon)? <= target.beta) };

    if holds(lower)? {
        return Ok(lower);
    }
    let mut failing = lower;
    let mut step = 1u64;
    let found = loop {
        let candidate = lower.saturating_add(step);
        if candidate > MAX_SAMPLE_SIZE {
            if failing < MAX_SAMPLE_SIZE && holds(MAX_SAMPLE_SIZE)? {
                break MAX_SAMPLE_SIZE;
            }
            return Err(Error::ResourceLimit {
                limit: MAX_SAMPLE_SIZE,
            });
        }
        if holds(candidate)? {
            break candidate;
        }
        failing = candidate;
        step *= 2;
    };

    // Invariant: holds(hi) and !holds(lo).
    let (mut lo, mut hi) = (failing, found);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    while hi > lower && holds(hi - 1)? {
        hi -= 1;
    }
    Ok(hi)
}
