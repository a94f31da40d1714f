use serde::{Deserialize, Serialize};

use super::{estimate_lower_bound, Mode, NormEstimate, WitnessConfig};
use crate::construct::{decompose, decomposition_deviation};
use crate::error::{Error, Result};
use crate::model::{quad_coeffs, quad_form, quad_form_gram, SpanElement};

/// Relative slack on the inequalities of the certification chain.
pub const CHAIN_SLACK: f64 = 1e-8;

/// Relative bound on decomposition deviations before the pipeline is
/// declared internally inconsistent.
const DECOMPOSE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCertificate {
    pub x: SpanElement,
    /// `<X*X ξ, ξ>` on the full-norm witness.
    pub full_witness_value: f64,
    /// The same quadratic form against the decomposed, tensor-position Gram data.
    pub tensor_gram_value: f64,
    /// `tensor_gram_value / (N² − N)`: certified lower bound on `‖X‖_min²`.
    pub min_lb_sq: f64,
    pub factor: f64,
    pub verdict: bool,
    pub block_count: usize,
}

/// Decomposes the witness of `full_est` and evaluates `X*X` against the
/// tensor-position Gram data.
pub fn certify_theorem(x: &SpanElement, full_est: &NormEstimate) -> Result<TheoremCertificate> {
    if full_est.mode != Mode::Full {
        return Err(Error::Argument(
            "certification needs a full-mode estimate".into(),
        ));
    }
    let witness = &full_est.witness;
    let mass = witness.total_norm_sqr();
    if (mass - 1.0).abs() > 1e-12 {
        return Err(Error::Argument(format!(
            "witness vectors have total squared norm {mass}, expected 1"
        )));
    }
    let sym = witness.symbols() as f64;
    let factor = sym * sym - sym;

    let cert = decompose(witness);
    let (off, diag) = decomposition_deviation(witness, &cert)?;
    if off > DECOMPOSE_TOL || diag > DECOMPOSE_TOL * factor {
        return Err(Error::InternalConsistency(format!(
            "decomposition deviates from its contract (off-diagonal {off:e}, diagonal {diag:e})"
        )));
    }

    let q = quad_coeffs(x);
    let full_witness_value = quad_form(&q, witness)?;
    let tensor_gram_value = quad_form_gram(&q, &cert.associated_matrix())?;
    let slack = CHAIN_SLACK * full_witness_value.abs().max(1.0);
    if tensor_gram_value < full_witness_value - slack {
        return Err(Error::InternalConsistency(format!(
            "tensor value {tensor_gram_value} below witness value {full_witness_value}"
        )));
    }
    let min_lb_sq = tensor_gram_value / factor;
    let verdict = full_witness_value <= factor * min_lb_sq + slack;
    Ok(TheoremCertificate {
        x: x.clone(),
        full_witness_value,
        tensor_gram_value,
        min_lb_sq,
        factor,
        verdict,
        block_count: cert.blocks().len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapConfig {
    pub full: WitnessConfig,
    pub min: WitnessConfig,
}

/// The three-norm chain on one instance. Ratios compare norms, not squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub instance: SpanElement,
    pub lb_full_sq: f64,
    pub lb_min_sq: f64,
    pub certified_min_lb_sq: f64,
    /// `sqrt(lb_full_sq / max(lb_min_sq, certified_min_lb_sq))`; observational.
    pub ratio: f64,
    /// `sqrt(lb_full_sq / certified_min_lb_sq)`; never above `ceiling`.
    pub certified_ratio: f64,
    pub ceiling: f64,
    pub verdict: bool,
    pub seed: u64,
    pub config: GapConfig,
}

pub fn gap_report(
    x: &SpanElement,
    cfg_full: &WitnessConfig,
    cfg_min: &WitnessConfig,
) -> Result<GapReport> {
    if cfg_full.mode != Mode::Full || cfg_min.mode != Mode::Min {
        return Err(Error::Argument(
            "gap report needs one full and one min config".into(),
        ));
    }
    let full = estimate_lower_bound(x, cfg_full)?;
    let cert = certify_theorem(x, &full)?;
    let min = estimate_lower_bound(x, cfg_min)?;
    Ok(GapReport {
        instance: x.clone(),
        lb_full_sq: full.value_sq,
        lb_min_sq: min.value_sq,
        certified_min_lb_sq: cert.min_lb_sq,
        ratio: norm_ratio(full.value_sq, min.value_sq.max(cert.min_lb_sq)),
        certified_ratio: norm_ratio(full.value_sq, cert.min_lb_sq),
        ceiling: cert.factor.sqrt(),
        verdict: cert.verdict,
        seed: cfg_full.seed,
        config: GapConfig {
            full: cfg_full.clone(),
            min: cfg_min.clone(),
        },
    })
}

/// `sqrt(num / den)`, with `0/0 = 1`.
fn norm_ratio(num: f64, den: f64) -> f64 {
    if num <= 0.0 && den <= 0.0 {
        1.0
    } else {
        (num.max(0.0) / den).sqrt()
    }
}
