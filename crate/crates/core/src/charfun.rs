//! Free and perturbed characteristic functions, the function `Q`, and
//! eigenfunctions of `D = D0 + mu <., v> v`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::{BoundaryParams, Coefficients, Potential, Repr, TransformSet};
use crate::spectrum::{Spectrum, SpectrumClass, SpectrumEntry};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Distance to a `sigma1` pole below which `Q` refuses to evaluate.
pub const POLE_TOL: f64 = 1e-12;
/// Coefficients below this are treated as absent when forming the band of a
/// sampled potential. Projection onto modes with `|lambda| <= n / 8` is
/// accurate to well below this on an `n`-interval grid.
const GRID_BAND_TOL: f64 = 1e-8;

/// Anything with the analytic shape of a characteristic function.
pub trait CharacteristicFunction: Sync {
    fn eval(&self, lambda: Complex64) -> Complex64;
    fn boundary(&self) -> BoundaryParams;

    fn eval_real(&self, lambda: f64) -> f64 {
        self.eval(Complex64::new(lambda, 0.0)).re
    }
}

/// `Delta(0, lambda) = sin(lambda pi - alpha + beta)`.
pub fn delta0(bp: BoundaryParams, lambda: Complex64) -> Complex64 {
    (lambda * PI - bp.alpha() + bp.beta()).sin()
}

pub fn free_spectrum(bp: BoundaryParams, k_range: RangeInclusive<i64>) -> Spectrum {
    Spectrum::new(
        k_range
            .map(|k| SpectrumEntry {
                lambda: bp.free_eigenvalue(k),
                multiplicity: 1,
                class: SpectrumClass::Sigma0,
                k_hint: k,
                at_edge: false,
            })
            .collect(),
    )
}

/// Coupling and normalized potential.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    mu: f64,
    potential: Potential,
    input_norm: f64,
}

impl OperatorSpec {
    /// Normalizes `v` to unit norm and absorbs the scale into `mu`, so the
    /// operator itself is unchanged.
    pub fn new(mu: f64, potential: Potential) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidPotential(format!("non-finite coupling {mu}")));
        }
        let norm_sq = potential.norm_sq();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::ZeroPotential);
        }
        let norm = norm_sq.sqrt();
        let potential = if (norm - 1.0).abs() > 1e-14 {
            potential.scaled(1.0 / norm)
        } else {
            potential
        };
        Ok(Self {
            mu: mu * norm_sq,
            potential,
            input_norm: norm,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn boundary(&self) -> BoundaryParams {
        self.potential.boundary()
    }

    /// Norm of the potential as supplied, before normalization.
    pub fn input_norm(&self) -> f64 {
        self.input_norm
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..self.clone() }
    }
}

/// Evaluation context for one operator: transforms and band coefficients
/// are computed once.
#[derive(Debug, Clone)]
pub struct CharFunEval {
    spec: OperatorSpec,
    transforms: TransformSet,
    band: Coefficients,
}

impl CharFunEval {
    pub fn new(spec: OperatorSpec) -> Self {
        let potential = spec.potential();
        let band = match potential.repr() {
            Repr::Coefficients(c) => c.clone(),
            Repr::Grid { .. } => {
                let n = potential.grid_size().unwrap_or(0) as f64;
                let range = potential.boundary().indices_in(-n / 8.0, n / 8.0);
                potential
                    .coefficients(range)
                    .into_iter()
                    .filter(|(_, v)| v.norm() > GRID_BAND_TOL)
                    .collect()
            }
        };
        Self {
            transforms: potential.transforms(),
            band,
            spec,
        }
    }

    pub fn spec(&self) -> &OperatorSpec {
        &self.spec
    }

    pub fn mu(&self) -> f64 {
        self.spec.mu
    }

    pub fn transforms(&self) -> &TransformSet {
        &self.transforms
    }

    /// Nonzero eigenbasis coefficients of `v`.
    pub fn band(&self) -> &Coefficients {
        &self.band
    }

    pub fn delta0(&self, lambda: Complex64) -> Complex64 {
        delta0(self.boundary(), lambda)
    }

    /// `R(lambda) = Phi_+(lambda) + Phi_-*(-lambda) + e^{2i alpha} v~_+(lambda) v~_-*(-lambda)`.
    pub fn big_r(&self, lambda: Complex64) -> Complex64 {
        let t = &self.transforms;
        let alpha = self.boundary().alpha();
        let mirror = -lambda.conj();
        t.phi_plus(lambda)
            + t.phi_minus(mirror).conj()
            + Complex64::from_polar(1.0, 2.0 * alpha) * t.vtilde_plus(lambda) * t.vtilde_minus(mirror).conj()
    }

    /// `Delta(mu, lambda) = Delta0 - (mu/4) {e^{i theta} R + e^{-i theta} R*}`
    /// with `theta = lambda pi + beta - alpha`.
    pub fn delta_mu(&self, lambda: Complex64) -> Complex64 {
        let d0 = self.delta0(lambda);
        let mu = self.mu();
        if mu == 0.0 {
            return d0;
        }
        let bp = self.boundary();
        let theta = lambda * PI + bp.beta() - bp.alpha();
        let r = self.big_r(lambda);
        let r_star = self.big_r(lambda.conj()).conj();
        d0 - mu / 4.0 * ((I * theta).exp() * r + (-I * theta).exp() * r_star)
    }

    /// The same function written through `Phi_+ - Phi_-` and a product of
    /// transform combinations. Used as a consistency check.
    pub fn delta_mu_alt(&self, lambda: Complex64) -> Complex64 {
        let t = &self.transforms;
        let bp = self.boundary();
        let (alpha, beta) = (bp.alpha(), bp.beta());
        let mu = self.mu();
        let d0 = self.delta0(lambda);
        let first = d0 * (1.0 + mu / (2.0 * I) * (t.phi_plus(lambda) - t.phi_minus(-lambda)));
        let left = t.vtilde_plus(lambda) * Complex64::from_polar(1.0, alpha)
            + t.vtilde_minus(-lambda) * Complex64::from_polar(1.0, -alpha);
        let h = |z: Complex64| {
            t.vtilde_plus(z) * (I * (z * PI + beta)).exp() + t.vtilde_minus(-z) * (-I * (z * PI + beta)).exp()
        };
        let right = h(lambda.conj()).conj();
        first - mu / 4.0 * left * right
    }

    /// `Q(lambda) = 1 + mu sum |v_k|^2 / (lambda_k(0) - lambda)`.
    pub fn q_series(&self, lambda: Complex64) -> Result<Complex64> {
        let bp = self.boundary();
        let mut q = Complex64::new(1.0, 0.0);
        for (&k, v) in &self.band {
            let d = bp.free_eigenvalue(k) - lambda;
            if d.norm() < POLE_TOL {
                return Err(Error::PoleProximity(lambda.re));
            }
            q += self.mu() * v.norm_sqr() / d;
        }
        Ok(q)
    }

    /// `G(lambda) = (e^{i(lambda pi + beta)} v~_+(lambda) + e^{-i(lambda pi + beta)} v~_-(-lambda)) / 2`.
    pub fn g_term(&self, lambda: f64) -> Complex64 {
        let t = &self.transforms;
        let lam = Complex64::new(lambda, 0.0);
        let phase = Complex64::from_polar(1.0, lambda * PI + self.boundary().beta());
        0.5 * (phase * t.vtilde_plus(lam) + phase.conj() * t.vtilde_minus(-lam))
    }

    /// Eigenfunction `u(lambda, x)` at each `x` in `xs`, unnormalized.
    ///
    /// `u = -2 G(lambda) y_alpha(lambda, x) + Delta0(lambda) {(i, 1) I_+(x) + (-i, 1) I_-(x)}`
    /// where `I_pm(x) = int_0^x e^{pm i lambda (x - t)} v_pm(t) dt`.
    pub fn eigenfunction(&self, lambda: f64, xs: &[f64]) -> Result<Vec<(Complex64, Complex64)>> {
        let residual = self.delta_mu(Complex64::new(lambda, 0.0)).norm();
        if residual > 1e-6 {
            return Err(Error::NotARoot { lambda, residual });
        }
        if let Some(&x) = xs.iter().find(|&&x| !(0.0..=PI).contains(&x)) {
            return Err(Error::GridMismatch(format!("sample point {x} outside [0, pi]")));
        }
        let g = self.g_term(lambda);
        let d0 = self.delta0(Complex64::new(lambda, 0.0)).re;
        let alpha = self.boundary().alpha();
        let (ip, im) = self.running_integrals(lambda, xs);
        let u: Vec<(Complex64, Complex64)> = xs
            .iter()
            .zip(ip.iter().zip(&im))
            .map(|(&x, (&p, &m))| {
                let phase = lambda * x - alpha;
                let u1 = -2.0 * g * phase.cos() + d0 * (I * p - I * m);
                let u2 = -2.0 * g * phase.sin() + d0 * (p + m);
                (u1, u2)
            })
            .collect();
        let size = u.iter().map(|(a, b)| a.norm().max(b.norm())).fold(0.0, f64::max);
        if size < 1e-9 {
            return Err(Error::TrivialEigenfunction(lambda));
        }
        Ok(u)
    }

    fn running_integrals(&self, lambda: f64, xs: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        use crate::potential::Channel;
        let t = &self.transforms;
        let run = |ch: &Channel, lam: f64| -> Vec<Complex64> {
            match ch {
                Channel::Series(s) => xs.iter().map(|&x| s.running(x, lam)).collect(),
                Channel::Grid(g) => {
                    let f: Vec<Complex64> = g
                        .nodes()
                        .iter()
                        .zip(g.values())
                        .map(|(&t, v)| v * Complex64::from_polar(1.0, -lam * t))
                        .collect();
                    let cum = g.rule().cumulative(&f);
                    xs.iter()
                        .map(|&x| Complex64::from_polar(1.0, lam * x) * g.rule().interpolate(&cum, x))
                        .collect()
                }
            }
        };
        (run(t.plus(), lambda), run(t.minus(), -lambda))
    }
}

impl CharacteristicFunction for CharFunEval {
    fn eval(&self, lambda: Complex64) -> Complex64 {
        self.delta_mu(lambda)
    }

    fn boundary(&self) -> BoundaryParams {
        self.spec.boundary()
    }

    fn eval_real(&self, lambda: f64) -> f64 {
        self.delta_mu(Complex64::new(lambda, 0.0)).re
    }
}
