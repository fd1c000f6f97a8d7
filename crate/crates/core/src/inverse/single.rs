//! Recovery of `mu` and `|v_k|` from one spectrum.

use std::collections::BTreeMap;

use super::{residue_route_gap, residue_weights, RecoveredOperator, SpectralDatum};
use crate::error::{Error, Result};

/// Weights below this fraction of the largest are treated as zero.
const WEIGHT_FLOOR: f64 = 1e-12;

/// `mu = sum mu|v_k|^2` and `|v_k| = sqrt(mu|v_k|^2 / mu)`; phases are set
/// to `+1` and the result is flagged as phase-ambiguous.
pub fn recover_single(datum: &SpectralDatum) -> Result<RecoveredOperator> {
    let weights = residue_weights(datum)?;
    let (mu, coefficients) = moduli_from_weights(&weights)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("residue_route_gap".to_string(), residue_route_gap(datum)?);
    let norm: f64 = coefficients.values().map(|v| v * v).sum();
    residuals.insert("normalization".to_string(), (norm - 1.0).abs());
    Ok(RecoveredOperator {
        mu,
        coefficients,
        phase_ambiguous: true,
        residuals,
        warnings: Vec::new(),
    })
}

/// Splits weights `mu |v_k|^2` into `mu` and moduli.
pub(crate) fn moduli_from_weights(weights: &BTreeMap<i64, f64>) -> Result<(f64, BTreeMap<i64, f64>)> {
    let scale = weights.values().fold(0.0f64, |m, w| m.max(w.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroPotential);
    }
    let kept: BTreeMap<i64, f64> = weights
        .iter()
        .filter(|(_, w)| w.abs() > WEIGHT_FLOOR * scale)
        .map(|(&k, &w)| (k, w))
        .collect();
    let pos = kept.values().any(|w| *w > 0.0);
    let neg = kept.values().any(|w| *w < 0.0);
    if pos && neg {
        return Err(Error::InconsistentData(
            "residue weights of both signs cannot come from a rank-one perturbation".into(),
        ));
    }
    let mu: f64 = kept.values().sum();
    let coefficients = kept.iter().map(|(&k, &w)| (k, (w / mu).sqrt())).collect();
    Ok((mu, coefficients))
}
