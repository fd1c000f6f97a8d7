//! Recovery of `mu` and a real `v` from the spectra of `D(mu, v)` and
//! `D(mu, v + c)` with the constant shift `c = (c, c)`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use super::{residue_weights, ProductCharFun, RecoveredOperator, SpectralDatum};
use crate::charfun::CharacteristicFunction;
use crate::error::{Error, Result};
use crate::potential::{constant_big_v, constant_coefficient, grid_nodes, BoundaryParams, Potential};

/// Smallest usable shift coefficient.
pub const SHIFT_FLOOR: f64 = 1e-8;
/// Allowed drift of `sum v_k^2` from one before a warning is issued.
pub const DRIFT_TOL: f64 = 1e-4;
/// Grid used to synthesize `v` in the characteristic-function route.
pub const CAUCHY_GRID: usize = 512;

fn check_inputs(a: &SpectralDatum, b: &SpectralDatum, c: f64) -> Result<BoundaryParams> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InconsistentData(format!("shift must be finite and nonzero, got {c}")));
    }
    if a.boundary() != b.boundary() {
        return Err(Error::InconsistentData("the two spectra use different boundary angles".into()));
    }
    Ok(a.boundary())
}

fn significant(w: &BTreeMap<i64, f64>) -> BTreeMap<i64, f64> {
    let scale = w.values().fold(0.0f64, |m, x| m.max(x.abs()));
    w.iter()
        .filter(|(_, x)| x.abs() > 1e-12 * scale)
        .map(|(&k, &x)| (k, x))
        .collect()
}

/// Datum A is the free spectrum: `v = 0`, and `mu` can only be read off the
/// shifted datum, `mu = sum w_B / sum c_k^2`.
fn zero_potential_case(wb: &BTreeMap<i64, f64>, c: f64, bp: BoundaryParams) -> Result<RecoveredOperator> {
    if wb.is_empty() {
        return Err(Error::IndeterminateSign);
    }
    let c2: f64 = wb.keys().map(|&k| constant_coefficient(c, bp, k).powi(2)).sum();
    let mu = wb.values().sum::<f64>() / c2;
    let mut residuals = BTreeMap::new();
    let fit = wb
        .iter()
        .map(|(&k, &w)| (w - mu * constant_coefficient(c, bp, k).powi(2)).abs())
        .fold(0.0, f64::max);
    residuals.insert("shift_fit".to_string(), fit);
    Ok(RecoveredOperator {
        mu,
        coefficients: BTreeMap::new(),
        phase_ambiguous: false,
        residuals,
        warnings: vec!["first spectrum is unperturbed: recovered potential is zero".into()],
    })
}

fn shift_coefficient(c: f64, bp: BoundaryParams, k: i64) -> Result<f64> {
    let ck = constant_coefficient(c, bp, k);
    if ck.abs() < SHIFT_FLOOR {
        return Err(Error::VanishingShift(k));
    }
    Ok(ck)
}

fn finish(mu: f64, mut v: BTreeMap<i64, f64>, mut residuals: BTreeMap<String, f64>) -> RecoveredOperator {
    let mut warnings = Vec::new();
    let norm: f64 = v.values().map(|x| x * x).sum();
    residuals.insert("normalization_drift".to_string(), (norm - 1.0).abs());
    if (norm - 1.0).abs() > DRIFT_TOL {
        let msg = format!("normalization drift: sum v_k^2 = {norm}");
        warn!("{msg}");
        warnings.push(msg);
    }
    let s = norm.sqrt();
    v.values_mut().for_each(|x| *x /= s);
    RecoveredOperator {
        mu: mu * norm,
        coefficients: v,
        phase_ambiguous: false,
        residuals,
        warnings,
    }
}

/// Coefficient route: `mu v_k = (w_B - w_A - mu c_k^2) / (2 c_k)` with
/// `w = mu |.|^2` from residues of each spectrum.
pub fn recover_two_spectra_fourier(a: &SpectralDatum, b: &SpectralDatum, c: f64) -> Result<RecoveredOperator> {
    let bp = check_inputs(a, b, c)?;
    let wa = significant(&residue_weights(a)?);
    let wb = significant(&residue_weights(b)?);
    if wa.is_empty() {
        return zero_potential_case(&wb, c, bp);
    }
    let mu: f64 = wa.values().sum();
    let keys: BTreeSet<i64> = wa.keys().chain(wb.keys()).copied().collect();
    let mut v = BTreeMap::new();
    let mut fit = 0.0f64;
    for &k in &keys {
        let ck = shift_coefficient(c, bp, k)?;
        let (wak, wbk) = (wa.get(&k).copied().unwrap_or(0.0), wb.get(&k).copied().unwrap_or(0.0));
        let muv = (wbk - wak - mu * ck * ck) / (2.0 * ck);
        let vk = muv / mu;
        fit = fit.max((mu * vk * vk - wak).abs());
        v.insert(k, vk);
    }
    if fit > 1e-6 * mu.abs().max(1.0) {
        return Err(Error::InconsistentData(format!(
            "recovered coefficients do not reproduce the first spectrum (misfit {fit:e})"
        )));
    }
    let mut residuals = BTreeMap::new();
    residuals.insert("weight_fit".to_string(), fit);
    Ok(finish(mu, v, residuals))
}

/// Characteristic-function route: each spectrum is turned into
/// `Delta(mu, .)` by its product representation, `mu |V|^2 = 2 mu Re R` is
/// read off at the free eigenvalues, `V` is separated from `V + C`, and `v`
/// is synthesized on a grid and projected back onto the eigenbasis.
pub fn recover_two_spectra_cauchy(a: &SpectralDatum, b: &SpectralDatum, c: f64) -> Result<RecoveredOperator> {
    let bp = check_inputs(a, b, c)?;
    if let Some(l) = a.has_double_point().or_else(|| b.has_double_point()) {
        return Err(Error::DoublePoint(l));
    }
    let fa = ProductCharFun::new(a)?;
    let fb = ProductCharFun::new(b)?;
    let keys: BTreeSet<i64> = a.pairing().keys().chain(b.pairing().keys()).copied().collect();

    // mu |V(lambda_k(0))|^2 = 2 mu Re R = -4 (-1)^k (Delta - Delta0), Delta0 = 0 on the lattice
    let weight = |f: &ProductCharFun, k: i64| {
        let lam = bp.free_eigenvalue(k);
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        -4.0 * sign * f.eval(Complex64::new(lam, 0.0)).re
    };
    let va2: BTreeMap<i64, f64> = significant(&keys.iter().map(|&k| (k, weight(&fa, k))).collect());
    let vb2: BTreeMap<i64, f64> = significant(&keys.iter().map(|&k| (k, weight(&fb, k))).collect());
    if va2.is_empty() {
        let wb = vb2.iter().map(|(&k, &w)| (k, w / (4.0 * PI))).collect();
        return zero_potential_case(&wb, c, bp);
    }
    let mu_sum = va2.values().sum::<f64>() / (4.0 * PI);

    let band: BTreeSet<i64> = va2.keys().chain(vb2.keys()).copied().collect();
    let mut big_v = BTreeMap::new();
    for &k in &band {
        let lam = bp.free_eigenvalue(k);
        let ck = constant_big_v(c, bp, lam);
        if ck.abs() < 2.0 * PI.sqrt() * SHIFT_FLOOR {
            return Err(Error::VanishingShift(k));
        }
        let (x, y) = (va2.get(&k).copied().unwrap_or(0.0), vb2.get(&k).copied().unwrap_or(0.0));
        big_v.insert(k, (y - x - mu_sum * ck * ck) / (2.0 * ck) / mu_sum);
    }

    // v(x) = (1 / 2 pi) sum V(lambda_k) (cos(lambda_k x - alpha), sin(lambda_k x - alpha))
    let xs = grid_nodes(CAUCHY_GRID);
    let synth = |f: fn(f64) -> f64| -> Vec<Complex64> {
        xs.iter()
            .map(|&x| {
                let s: f64 = big_v
                    .iter()
                    .map(|(&k, &vk)| vk * f(bp.free_eigenvalue(k) * x - bp.alpha()))
                    .sum();
                Complex64::new(s / (2.0 * PI), 0.0)
            })
            .collect()
    };
    let grid = Potential::from_grid(synth(f64::cos), synth(f64::sin), bp)?;
    let lo = *band.iter().next().unwrap();
    let hi = *band.iter().next_back().unwrap();
    let v: BTreeMap<i64, f64> = grid.coefficients(lo..=hi).into_iter().map(|(k, x)| (k, x.re)).collect();

    // |mu| = ||mu v||, sign from the direction in which the first spectrum moved
    let norm = v.values().map(|x| x * x).sum::<f64>().sqrt();
    let drift: f64 = a.shifted().iter().map(|(_, a0, b0)| b0 - a0).sum();
    let mu = mu_sum.abs() * norm * drift.signum();
    let v: BTreeMap<i64, f64> = v.into_iter().map(|(k, x)| (k, x * mu_sum / mu)).collect();
    let mut residuals = BTreeMap::new();
    residuals.insert("mu_consistency".to_string(), (mu - mu_sum).abs() / mu_sum.abs());
    residuals.insert(
        "weight_fit".to_string(),
        big_v
            .iter()
            .map(|(k, vk)| (mu_sum * vk * vk - va2.get(k).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max),
    );
    Ok(finish(mu, v, residuals))
}
