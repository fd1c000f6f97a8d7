//! Seeded random operator specs for tests and the `roundtrip` command.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charfun::OperatorSpec;
use crate::error::{Error, Result};
use crate::potential::{constant_coefficient, BoundaryParams, Coefficients, Potential, Repr};
use crate::spectrum::Window;

/// Largest index used by generated bandlimited specs.
pub const BAND: i64 = 4;
pub const MAX_MODES: usize = 8;
pub const MAX_MU: f64 = 5.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Angles in `[0, pi)` with `|sin(beta - alpha)| > 0.1`.
pub fn random_boundary<R: Rng>(rng: &mut R) -> BoundaryParams {
    loop {
        let alpha = rng.gen_range(0.0..PI);
        let beta = rng.gen_range(0.0..PI);
        if (beta - alpha).sin().abs() > 0.1 {
            return BoundaryParams::new(alpha, beta).expect("angles checked");
        }
    }
}

fn random_mu<R: Rng>(rng: &mut R, max_mu: f64) -> f64 {
    let m = rng.gen_range(0.1..max_mu);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Bandlimited complex potential with at most `max_modes` nonzero
/// coefficients in `[-BAND, BAND]`, each of modulus at least 0.05 before
/// normalization, and `0.1 <= |mu| <= max_mu`.
pub fn random_bandlimited<R: Rng>(rng: &mut R, max_modes: usize, max_mu: f64) -> OperatorSpec {
    let bp = random_boundary(rng);
    let width = (2 * BAND + 1) as usize;
    let modes = rng.gen_range(1..=max_modes.min(width));
    let coeffs: Coefficients = sample(rng, width, modes)
        .into_iter()
        .map(|i| {
            let k = i as i64 - BAND;
            let r = rng.gen_range(0.05..1.0);
            let phase = rng.gen_range(0.0..2.0 * PI);
            (k, Complex64::from_polar(r, phase))
        })
        .collect();
    let mu = random_mu(rng, max_mu);
    unit_spec(mu, coeffs, bp)
}

/// Real potential on 4 distinct indices in `[-3, 3]` with both signs present,
/// `alpha = pi/4`, `beta = 0`.
pub fn random_real_mixed<R: Rng>(rng: &mut R, max_mu: f64) -> OperatorSpec {
    let bp = BoundaryParams::new(PI / 4.0, 0.0).expect("fixed angles");
    let ks = sample(rng, 7, 4).into_vec();
    let mut signs: Vec<f64> = (0..4).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
    if signs.iter().all(|s| *s == signs[0]) {
        let i = rng.gen_range(0..4);
        signs[i] = -signs[i];
    }
    let coeffs: Coefficients = ks
        .iter()
        .zip(&signs)
        .map(|(&i, s)| (i as i64 - 3, Complex64::new(s * rng.gen_range(0.3..1.0), 0.0)))
        .collect();
    let mu = random_mu(rng, max_mu);
    unit_spec(mu, coeffs, bp)
}

fn unit_spec(mu: f64, coeffs: Coefficients, bp: BoundaryParams) -> OperatorSpec {
    let v = Potential::from_coefficients(coeffs, bp).expect("nonzero coefficients");
    let v = v.scaled(1.0 / v.norm_sq().sqrt());
    OperatorSpec::new(mu, v).expect("nonzero potential")
}

/// Real coefficients of a coefficient-form potential.
pub fn real_coefficients(spec: &OperatorSpec) -> Result<BTreeMap<i64, f64>> {
    match spec.potential().repr() {
        Repr::Coefficients(c) if c.values().all(|z| z.im == 0.0) => Ok(c.iter().map(|(&k, z)| (k, z.re)).collect()),
        _ => Err(Error::InvalidPotential("expected a real coefficient potential".into())),
    }
}

/// The second operator of a two-spectra pair: the same `mu` with potential
/// `v + c` projected onto the index range spanned by `v`.
pub fn shifted_spec(spec: &OperatorSpec, c: f64) -> Result<OperatorSpec> {
    let bp = spec.boundary();
    let v = real_coefficients(spec)?;
    let lo = *v.keys().next().ok_or(Error::ZeroPotential)?;
    let hi = *v.keys().next_back().ok_or(Error::ZeroPotential)?;
    let coeffs: Coefficients = (lo..=hi)
        .map(|k| {
            let x = v.get(&k).copied().unwrap_or(0.0) + constant_coefficient(c, bp, k);
            (k, Complex64::new(x, 0.0))
        })
        .collect();
    OperatorSpec::new(spec.mu(), Potential::from_coefficients(coeffs, bp)?)
}

/// Symmetric window holding every eigenvalue that moves for any of `specs`,
/// with at least two unmoved free points beyond each end; the edges sit
/// midway between free points.
pub fn covering_window(specs: &[&OperatorSpec]) -> Window {
    let mut reach = 0.0f64;
    for s in specs {
        let bp = s.boundary();
        if let Some(band) = s.potential().band() {
            let lo = bp.free_eigenvalue(*band.start()) + s.mu().min(0.0);
            let hi = bp.free_eigenvalue(*band.end()) + s.mu().max(0.0);
            reach = reach.max(lo.abs()).max(hi.abs());
        }
    }
    let bp = specs.first().map(|s| s.boundary()).expect("at least one spec");
    let w = reach + 2.0;
    let hi = bp.free_eigenvalue(bp.nearest_index(w)) + 0.5;
    let lo = bp.free_eigenvalue(bp.nearest_index(-w)) - 0.5;
    Window::new(lo.min(-10.5), hi.max(10.5)).expect("ordered edges")
}
