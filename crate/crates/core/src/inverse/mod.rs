//! Recovery of `mu` and `v` from spectral data.

pub mod class_j;
pub mod single;
pub mod two_spectra;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::charfun::{delta0, CharacteristicFunction, OperatorSpec};
use crate::error::{Error, Result};
use crate::potential::{BoundaryParams, Coefficients, Potential};
use crate::spectrum::Spectrum;

pub use class_j::{classj_realize, classj_validate, classj_validate_samples, ClassJReport, Condition};
pub use single::recover_single;
pub use two_spectra::{recover_two_spectra_cauchy, recover_two_spectra_fourier};

/// Points at which the product for `A` is evaluated on the imaginary axis.
pub const PRODUCT_Y: [f64; 3] = [1e2, 1e3, 1e4];
/// Largest symmetric truncation accepted for the product.
pub const T_MAX: i64 = 10_000;
/// Steps of the symmetric residue limit.
pub const RESIDUE_STEPS: [f64; 2] = [1e-3, 5e-4];
/// Relative agreement required between the two residue routes.
pub const RESIDUE_TOL: f64 = 1e-6;

/// A spectrum aligned with the free spectrum: `pairing[k] = lambda_k(mu)`.
#[derive(Debug, Clone)]
pub struct SpectralDatum {
    spectrum: Spectrum,
    boundary: BoundaryParams,
    pairing: BTreeMap<i64, f64>,
}

impl SpectralDatum {
    /// Pairs the sorted eigenvalues (with multiplicity) with consecutive free
    /// eigenvalues. The offset is chosen so that every pair is at most one
    /// apart, which interlacing guarantees for genuine data.
    pub fn new(spectrum: Spectrum, boundary: BoundaryParams) -> Result<Self> {
        let eig = spectrum.expanded();
        if eig.is_empty() {
            return Err(Error::Pairing("empty spectrum".into()));
        }
        let k0 = boundary.nearest_index(eig[0]);
        // offsets keeping every partner within 1; ties broken by total displacement
        let candidates: Vec<(i64, f64, f64)> = (k0 - 1..=k0 + 1)
            .map(|start| {
                let diffs = eig
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| (e - boundary.free_eigenvalue(start + i as i64)).abs());
                let worst = diffs.clone().fold(0.0, f64::max);
                (start, worst, diffs.sum())
            })
            .collect();
        let best = candidates
            .iter()
            .filter(|c| c.1 <= 1.0 + 1e-9)
            .min_by(|a, b| a.2.total_cmp(&b.2))
            .copied()
            .ok_or_else(|| {
                let worst = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
                Error::Pairing(format!(
                    "no alignment with the free spectrum keeps every eigenvalue within 1 of its partner (best {worst:.3e})"
                ))
            })?;
        let pairing: BTreeMap<i64, f64> = eig.iter().enumerate().map(|(i, &e)| (best.0 + i as i64, e)).collect();
        let (first, last) = (eig[0], eig[eig.len() - 1]);
        let edge = |e: f64| (e - boundary.free_eigenvalue(boundary.nearest_index(e))).abs() > 1e-9;
        if edge(first) || edge(last) {
            warn!("spectrum ends on a shifted eigenvalue; data may be truncated inside the perturbed band");
        }
        Ok(Self {
            spectrum,
            boundary,
            pairing,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn boundary(&self) -> BoundaryParams {
        self.boundary
    }

    pub fn pairing(&self) -> &BTreeMap<i64, f64> {
        &self.pairing
    }

    /// Pairs `(k, lambda_k(0), lambda_k(mu))` whose members differ.
    pub fn shifted(&self) -> Vec<(i64, f64, f64)> {
        self.pairing
            .iter()
            .map(|(&k, &b)| (k, self.boundary.free_eigenvalue(k), b))
            .filter(|(_, a, b)| (a - b).abs() > 1e-14 * (1.0 + a.abs()))
            .collect()
    }

    pub fn has_double_point(&self) -> Option<f64> {
        self.spectrum
            .entries()
            .iter()
            .find(|e| e.multiplicity > 1)
            .map(|e| e.lambda)
    }
}

fn product_at(datum: &SpectralDatum, y: f64, t: i64) -> Complex64 {
    let iy = Complex64::new(0.0, y);
    datum
        .shifted()
        .iter()
        .filter(|(k, _, _)| k.abs() <= t)
        .map(|&(_, a, b)| (1.0 - iy / a) / (1.0 - iy / b))
        .product()
}

fn neville_at_zero(ts: &[f64], vs: &[f64]) -> f64 {
    let mut p = vs.to_vec();
    let n = ts.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (ts[i + m] * p[i] - ts[i] * p[i + 1]) / (ts[i + m] - ts[i]);
        }
    }
    p[0]
}

/// `A = Delta(mu, 0) = sin(beta - alpha) lim_{y -> inf} prod (1 - iy/lambda_k(0)) / (1 - iy/lambda_k(mu))`.
#[allow(non_snake_case)]
pub fn constant_A(datum: &SpectralDatum) -> Result<f64> {
    if let Some(&(_, _, b)) = datum.shifted().iter().find(|(_, _, b)| b.abs() < 1e-10) {
        return Err(Error::ZeroAtOrigin(b));
    }
    let reach = datum.pairing.keys().map(|k| k.abs()).max().unwrap_or(0);
    let mut t = 1;
    let mut prev: Option<[Complex64; 3]> = None;
    let vals = loop {
        let cur = PRODUCT_Y.map(|y| product_at(datum, y, t));
        if let Some(p) = prev {
            let change = cur.iter().zip(&p).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if change < 1e-10 && t >= reach {
                break cur;
            }
        }
        if t > T_MAX {
            return Err(Error::ProductNotConverged(format!("truncation exceeded {T_MAX}")));
        }
        prev = Some(cur);
        t *= 2;
    };
    let ts: Vec<f64> = PRODUCT_Y.iter().map(|y| 1.0 / (y * y)).collect();
    let re: Vec<f64> = vals.iter().map(|v| v.re).collect();
    let three = neville_at_zero(&ts, &re);
    let two = neville_at_zero(&ts[1..], &re[1..]);
    let s = datum.boundary.sin_beta_minus_alpha();
    let a = s * three;
    if (three - two).abs() * s.abs() > 1e-6 * a.abs() {
        return Err(Error::ProductNotConverged(format!(
            "extrapolated limits {two:e} and {three:e} differ"
        )));
    }
    Ok(a)
}

/// `F(lambda) = Delta(mu, lambda) / Delta(0, lambda)` from the datum.
fn product_f(shifted: &[(i64, f64, f64)], a_over_s: f64, lambda: Complex64) -> Complex64 {
    a_over_s
        * shifted
            .iter()
            .map(|&(_, a, b)| (1.0 - lambda / b) / (1.0 - lambda / a))
            .product::<Complex64>()
}

type WeightMap = BTreeMap<i64, f64>;

/// Product-formula and limit-route residues for every shifted `k`.
fn residue_routes(datum: &SpectralDatum) -> Result<(WeightMap, WeightMap)> {
    if let Some(l) = datum.has_double_point() {
        return Err(Error::DoublePoint(l));
    }
    let a = constant_A(datum)?;
    let s = datum.boundary.sin_beta_minus_alpha();
    let shifted = datum.shifted();
    let mut product = BTreeMap::new();
    let mut limit = BTreeMap::new();
    for &(p, ap, bp) in &shifted {
        let mut w = (a / s) * (ap / bp) * (bp - ap);
        for &(k, ak, bk) in &shifted {
            if k != p {
                w *= (ak / bk) * (bk - ap) / (ak - ap);
            }
        }
        product.insert(p, w);
        let one = |l: f64| (ap - l) * (product_f(&shifted, a / s, Complex64::new(l, 0.0)).re - 1.0);
        let r = |h: f64| 0.5 * (one(ap + h) + one(ap - h));
        let [h1, h2] = RESIDUE_STEPS;
        limit.insert(p, (4.0 * r(h2) - r(h1)) / 3.0);
    }
    Ok((product, limit))
}

/// `mu |v_k|^2` for every paired `k`, from the product formula, checked
/// against a symmetric limit of `(lambda_k(0) - lambda)(F(lambda) - 1)`.
pub fn residue_weights(datum: &SpectralDatum) -> Result<WeightMap> {
    let (product, limit) = residue_routes(datum)?;
    let scale = product.values().fold(0.0f64, |m, w| m.max(w.abs()));
    for (&k, &wp) in &product {
        let wl = limit[&k];
        if (wp - wl).abs() > RESIDUE_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ResidueMismatch { k, product: wp, limit: wl });
        }
    }
    Ok(datum.pairing.keys().map(|&k| (k, product.get(&k).copied().unwrap_or(0.0))).collect())
}

/// Largest disagreement between the product and limit residue routes,
/// relative to the largest weight.
pub fn residue_route_gap(datum: &SpectralDatum) -> Result<f64> {
    let (product, limit) = residue_routes(datum)?;
    let scale = product.values().fold(0.0f64, |m, w| m.max(w.abs()));
    Ok(product
        .iter()
        .map(|(k, wp)| (wp - limit[k]).abs() / scale.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max))
}

/// Result of an inverse pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredOperator {
    pub mu: f64,
    pub coefficients: BTreeMap<i64, f64>,
    pub phase_ambiguous: bool,
    pub residuals: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl RecoveredOperator {
    /// The operator described by the recovered data, with phases `+1`.
    pub fn to_spec(&self, bp: BoundaryParams) -> Result<OperatorSpec> {
        let coeffs: Coefficients = self
            .coefficients
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(&k, &v)| (k, Complex64::new(v, 0.0)))
            .collect();
        OperatorSpec::new(self.mu, Potential::from_coefficients(coeffs, bp)?)
    }
}

/// Characteristic function rebuilt from a datum:
/// `Delta(lambda) = (A / sin(beta - alpha)) Delta0(lambda) prod (1 - lambda/lambda_k(mu)) / (1 - lambda/lambda_k(0))`.
#[derive(Debug, Clone)]
pub struct ProductCharFun {
    boundary: BoundaryParams,
    a_over_s: f64,
    shifted: Vec<(i64, f64, f64)>,
}

impl ProductCharFun {
    pub fn new(datum: &SpectralDatum) -> Result<Self> {
        let a = constant_A(datum)?;
        Ok(Self {
            boundary: datum.boundary,
            a_over_s: a / datum.boundary.sin_beta_minus_alpha(),
            shifted: datum.shifted(),
        })
    }
}

impl CharacteristicFunction for ProductCharFun {
    fn eval(&self, lambda: Complex64) -> Complex64 {
        let bp = self.boundary;
        let near = self
            .shifted
            .iter()
            .enumerate()
            .filter(|(_, (_, a, _))| (lambda - a).norm() < 0.5)
            .map(|(i, _)| i)
            .next();
        let mut acc = Complex64::new(self.a_over_s, 0.0);
        match near {
            Some(i) => {
                // Delta0 / (1 - lambda/a_k) = -(-1)^k a_k pi sinc(lambda - a_k)
                let (k, a, _) = self.shifted[i];
                let x = (lambda - a) * PI;
                let sinc = if x.norm() < 1e-4 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                acc *= -sign * a * PI * sinc;
                for (j, &(_, aj, bj)) in self.shifted.iter().enumerate() {
                    acc *= 1.0 - lambda / bj;
                    if j != i {
                        acc /= 1.0 - lambda / aj;
                    }
                }
            }
            None => {
                acc *= delta0(bp, lambda);
                for &(_, aj, bj) in &self.shifted {
                    acc *= (1.0 - lambda / bj) / (1.0 - lambda / aj);
                }
            }
        }
        acc
    }

    fn boundary(&self) -> BoundaryParams {
        self.boundary
    }
}
