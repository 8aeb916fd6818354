//! High-accuracy Nystrom schemes: progressive column sampling with
//! alternating row/column pivoting (HAN-B), fast subset updates of both
//! index sets (HAN-U), and aggressive column updates driven by full row
//! pivoting (HAN-A), with randomized accuracy control.

mod estimate;
mod residual;
mod schemes;
mod update;

pub use estimate::{estimate_phi, estimate_theta};
pub use residual::{residual_norms, Evaluator, ResidualMode, ResidualNorms, DEFAULT_ORACLE_CAP};
pub use schemes::{han_a, han_b, han_u, HanRun};
pub use update::{set_upd, SchurUpdate, SetUpd};

pub use crate::sampling::sample_new;

use std::fmt;

use crate::baselines::LowRankApprox;
use crate::error::{Error, Result};
use crate::linalg::{Scalar, SrrConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct HanConfig {
    /// Columns sampled per iteration.
    pub b: usize,
    /// Target relative error for the estimator stop rule.
    pub tau: f64,
    /// Cap on the total progressive sample size; `None` means `n`.
    pub max_samples: Option<usize>,
    /// Stop once the output rank reaches this value.
    pub max_rank: Option<usize>,
    /// Successive iterations with `phi < tau` needed to stop.
    pub consecutive_hits: usize,
    pub srr: SrrConfig,
    pub seed: u64,
    /// Above this many Schur-complement rows, `phi` uses only the rows
    /// picked by pivoting the sampled block.
    pub phi_row_limit: usize,
    /// Keep the approximation of every iteration in the trace.
    pub snapshots: bool,
    /// HAN-U only: also build the row skeleton from one extra row pivoting step.
    pub effective: bool,
}

impl Default for HanConfig {
    fn default() -> Self {
        Self {
            b: 5,
            tau: 1e-14,
            max_samples: None,
            max_rank: None,
            consecutive_hits: 2,
            srr: SrrConfig::default(),
            seed: 0,
            phi_row_limit: 10_000,
            snapshots: false,
            effective: false,
        }
    }
}

impl HanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(Error::Config("stepsize b must be at least 1".into()));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::Config(format!("tau must lie in (0, 1), got {}", self.tau)));
        }
        if self.consecutive_hits == 0 {
            return Err(Error::Config("consecutive_hits must be at least 1".into()));
        }
        if self.max_samples == Some(0) {
            return Err(Error::Config("max_samples must be positive".into()));
        }
        self.srr.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The estimator stayed below `tau` for `consecutive_hits` iterations.
    Tolerance,
    MaxRank,
    MaxSamples,
    /// The row set stopped changing, or the sampled residual is at rounding level.
    Converged,
    /// Every row or every column is already selected.
    Exhausted,
    /// No unsampled columns remain.
    Saturated,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Tolerance => "tolerance",
            Self::MaxRank => "max-rank",
            Self::MaxSamples => "max-samples",
            Self::Converged => "converged",
            Self::Exhausted => "exhausted",
            Self::Saturated => "saturated",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct IterRecord<T: Scalar> {
    pub iteration: usize,
    /// Progressive samples so far (estimation-only samples excluded).
    pub total_samples: usize,
    pub rank_i: usize,
    pub rank_j: usize,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    /// Entries of `A` evaluated by this run so far.
    pub kernel_evals: u64,
    pub elapsed_ns: u64,
    pub snapshot: Option<LowRankApprox<T>>,
}

#[derive(Debug, Clone)]
pub struct HanTrace<T: Scalar> {
    pub records: Vec<IterRecord<T>>,
    pub stop: StopReason,
}

impl<T: Scalar> HanTrace<T> {
    pub fn last(&self) -> Option<&IterRecord<T>> {
        self.records.last()
    }
}

/// Tracks the stop rules in their order of precedence.
struct Stopper {
    hits: usize,
    need: usize,
    tau: f64,
    max_rank: Option<usize>,
    max_samples: usize,
}

impl Stopper {
    fn new(cfg: &HanConfig, n: usize) -> Self {
        Self {
            hits: 0,
            need: cfg.consecutive_hits,
            tau: cfg.tau,
            max_rank: cfg.max_rank,
            max_samples: cfg.max_samples.unwrap_or(n),
        }
    }

    fn check(&mut self, phi: Option<f64>, rank: usize, samples: usize, converged: bool, exhausted: bool) -> Option<StopReason> {
        match phi {
            Some(p) if p < self.tau => self.hits += 1,
            _ => self.hits = 0,
        }
        if self.hits >= self.need {
            Some(StopReason::Tolerance)
        } else if self.max_rank.is_some_and(|r| rank >= r) {
            Some(StopReason::MaxRank)
        } else if samples >= self.max_samples {
            Some(StopReason::MaxSamples)
        } else if converged {
            Some(StopReason::Converged)
        } else if exhausted {
            Some(StopReason::Exhausted)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(HanConfig::default().validate().is_ok());
        assert!(HanConfig { b: 0, ..HanConfig::default() }.validate().is_err());
        assert!(HanConfig { tau: 1.0, ..HanConfig::default() }.validate().is_err());
        assert!(HanConfig { consecutive_hits: 0, ..HanConfig::default() }.validate().is_err());
    }

    #[test]
    fn stop_precedence() {
        let cfg = HanConfig { consecutive_hits: 1, max_rank: Some(3), max_samples: Some(10), ..HanConfig::default() };
        let mut s = Stopper::new(&cfg, 100);
        assert_eq!(s.check(Some(0.0), 5, 20, true, true), Some(StopReason::Tolerance));
        let mut s = Stopper::new(&cfg, 100);
        assert_eq!(s.check(Some(1.0), 5, 20, true, true), Some(StopReason::MaxRank));
        assert_eq!(s.check(None, 1, 20, true, true), Some(StopReason::MaxSamples));
        assert_eq!(s.check(None, 1, 5, true, true), Some(StopReason::Converged));
        assert_eq!(s.check(None, 1, 5, false, true), Some(StopReason::Exhausted));
        assert_eq!(s.check(None, 1, 5, false, false), None);
    }

    #[test]
    fn hits_must_be_consecutive() {
        let cfg = HanConfig::default();
        let mut s = Stopper::new(&cfg, 100);
        assert_eq!(s.check(Some(0.0), 1, 1, false, false), None);
        assert_eq!(s.check(Some(1.0), 1, 1, false, false), None);
        assert_eq!(s.check(Some(0.0), 1, 1, false, false), None);
        assert_eq!(s.check(Some(0.0), 1, 1, false, false), Some(StopReason::Tolerance));
    }
}
