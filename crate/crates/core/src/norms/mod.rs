//! Witness search for lower bounds on `‖X‖²` in the full free-group norm and
//! the min tensor norm, and the certification chain that turns a full-norm
//! witness into a certified min-norm lower bound through [`decompose`].
//!
//! [`decompose`]: crate::construct::decompose

mod certify;
mod search;

pub use certify::{
    certify_theorem, gap_report, GapConfig, GapReport, TheoremCertificate, CHAIN_SLACK,
};
pub use search::{estimate_lower_bound, replay_value, restart_histories};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::Triplet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Arbitrary unitaries on one space.
    Full,
    /// `U_i = α_i ⊗ Id`, `U_{n+i} = Id ⊗ β_i`.
    Min,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessConfig {
    /// Dimension of `H` (full) or of each factor (min).
    pub rep_dim: usize,
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    /// A restart stops once an iteration improves by at most `tol·value`.
    pub tol: f64,
    pub mode: Mode,
}

impl WitnessConfig {
    pub fn full() -> Self {
        WitnessConfig {
            rep_dim: 4,
            restarts: 16,
            iters: 200,
            seed: 0,
            tol: 1e-13,
            mode: Mode::Full,
        }
    }

    pub fn min() -> Self {
        WitnessConfig {
            rep_dim: 3,
            mode: Mode::Min,
            ..Self::full()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rep_dim == 0 || self.restarts == 0 || self.iters == 0 {
            return Err(Error::Argument(
                "rep_dim, restarts and iters must all be positive".into(),
            ));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::Argument(format!(
                "tol {} must be finite and nonnegative",
                self.tol
            )));
        }
        Ok(())
    }

    /// Dimension of the witness space.
    pub fn witness_dim(&self) -> usize {
        match self.mode {
            Mode::Full => self.rep_dim,
            Mode::Min => self.rep_dim * self.rep_dim,
        }
    }
}

/// Small factors of a min-mode witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinFactors {
    pub alpha: Vec<CMatrix>,
    pub beta: Vec<CMatrix>,
}

/// A lower bound on a squared norm, realized by `witness`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub mode: Mode,
    pub value_sq: f64,
    pub witness: Triplet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<MinFactors>,
    /// Per-iteration values of the winning restart.
    pub history: Vec<f64>,
    /// Final value of every restart, by restart index.
    pub restart_values: Vec<f64>,
    pub winning_restart: usize,
}
