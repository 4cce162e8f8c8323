//! Monte Carlo certification of a confidence bound on the planar min-norm
//! problem.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::distribution::Distribution;
use super::geometry::{discard_select, solve_min_norm, support_set, HalfPlaneConstraint, Vec2};
use crate::bounds::{BoundKind, BoundQuery};
use crate::error::{Error, Result};
use crate::logspace::{binomial_lower_tail, LogTolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    /// Anchor of the constraints.
    pub c: Vec2,
    pub distribution: Distribution,
    /// Scenarios per trial.
    pub n: usize,
    /// Discarding size; zero disables discarding.
    pub r: usize,
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
}

impl ProblemConfig {
    pub fn new(c: Vec2, distribution: Distribution, n: usize, epsilon: f64) -> Self {
        ProblemConfig {
            c,
            distribution,
            n,
            r: 0,
            epsilon,
            trials: 1,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.distribution.validate()?;
        if self.n < self.r + 1 {
            return Err(Error::Config(format!(
                "need N >= r + 1, got N={}, r={}",
                self.n, self.r
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if !(self.c.x.is_finite() && self.c.y.is_finite()) {
            return Err(Error::Config("center must be finite".into()));
        }
        Ok(())
    }

    /// Independent random stream for one trial: the seed picks the ChaCha
    /// key and the trial index picks the stream, so trials can run in any
    /// order or on any thread.
    pub fn trial_rng(&self, trial_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial_index);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub decision: Vec2,
    pub risk: f64,
    /// Indices into the sampled tuple, ascending.
    pub support_indices: Vec<usize>,
    pub kept_indices: Vec<usize>,
    pub violated: bool,
}

pub fn run_trial(config: &ProblemConfig, trial_index: u64) -> Result<TrialOutcome> {
    let mut rng = config.trial_rng(trial_index);
    let sampled: Vec<HalfPlaneConstraint> = (0..config.n)
        .map(|_| config.distribution.sample_constraint(&mut rng))
        .collect();
    let kept_indices = discard_select(&sampled, config.r)?;
    let kept: Vec<HalfPlaneConstraint> = kept_indices.iter().map(|&i| sampled[i]).collect();
    let decision = solve_min_norm(config.c, &kept)?;
    let support_indices = support_set(config.c, &kept, decision)?
        .into_iter()
        .map(|k| kept_indices[k])
        .collect();
    let risk = config.distribution.exact_risk(decision, config.c);
    Ok(TrialOutcome {
        decision,
        risk,
        support_indices,
        kept_indices,
        violated: risk > config.epsilon,
    })
}

/// All trials of a configuration, in trial order.
pub fn run_trials(config: &ProblemConfig) -> Result<Vec<TrialOutcome>> {
    config.validate()?;
    (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub violations: u64,
    pub empirical_rate: f64,
    /// One-sided exact-binomial 95% upper confidence limit on the violation
    /// probability.
    pub exact_binomial_upper_95: f64,
    pub theoretical_bound: f64,
    pub bound_kind: BoundKind,
}

impl MonteCarloReport {
    pub fn from_outcomes(
        config: &ProblemConfig,
        outcomes: &[TrialOutcome],
        bound_kind: BoundKind,
        d: u64,
    ) -> Result<Self> {
        let query = BoundQuery::discard(config.n as u64, d, config.r as u64, config.epsilon);
        let theoretical_bound = bound_kind.evaluate(&query)?;
        let trials = outcomes.len() as u64;
        let violations = outcomes.iter().filter(|o| o.violated).count() as u64;
        Ok(MonteCarloReport {
            trials,
            violations,
            empirical_rate: violations as f64 / trials as f64,
            exact_binomial_upper_95: binomial_upper_limit(violations, trials, 0.05)?,
            theoretical_bound,
            bound_kind,
        })
    }

    /// The upper confidence limit sits at or below the theoretical bound.
    pub fn is_certified(&self) -> bool {
        self.exact_binomial_upper_95 <= self.theoretical_bound
    }
}

pub fn run_monte_carlo(
    config: &ProblemConfig,
    bound: BoundKind,
    d: u64,
) -> Result<MonteCarloReport> {
    // Fail on a bad bound query before spending time on trials.
    bound.validate(&BoundQuery::discard(
        config.n as u64,
        d,
        config.r as u64,
        config.epsilon,
    ))?;
    let outcomes = run_trials(config)?;
    MonteCarloReport::from_outcomes(config, &outcomes, bound, d)
}

/// One-sided exact (Clopper-Pearson) upper confidence limit: the `p` at which
/// observing at most `successes` out of `trials` has probability `alpha`.
pub fn binomial_upper_limit(successes: u64, trials: u64, alpha: f64) -> Result<f64> {
    if trials == 0 || successes > trials {
        return Err(crate::error::domain(format!(
            "need 0 <= successes <= trials and trials > 0, got {successes}/{trials}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(crate::error::domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if successes == trials {
        return Ok(1.0);
    }
    if successes == 0 {
        return Ok(1.0 - alpha.powf(1.0 / trials as f64));
    }
    // P[X <= k] is decreasing in p.
    let cdf = |p: f64| binomial_lower_tail(trials, successes, LogTolerance::new(p)).to_prob();
    let (mut lo, mut hi) = (successes as f64 / trials as f64, 1.0_f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
