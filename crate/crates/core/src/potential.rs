//! Non-local potentials `v = (v1, v2)` on `[0, pi]` and their transforms.
//!
//! A potential is stored either as eigenbasis coefficients `v_k` of the free
//! operator (the canonical, band-limited form) or as samples on a uniform
//! grid. In coefficient form `v_+ = v1 + i v2` and `v_- = v1 - i v2` are
//! finite exponential sums, so every transform has a closed form.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{exp_integral, expm1_over, gauss_legendre, UniformRule, STENCIL};

/// Smallest grid accepted for sampled potentials.
pub const MIN_GRID: usize = 16;
/// Grid size used when rendering coefficient potentials.
pub const DEFAULT_GRID: usize = 512;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Boundary angles of `<y(0), Phi(alpha)> = 0`, `<y(pi), Phi(beta)> = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParams {
    alpha: f64,
    beta: f64,
}

impl BoundaryParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let s = (beta - alpha).sin();
        if !alpha.is_finite() || !beta.is_finite() || s.abs() < 1e-12 {
            return Err(Error::DegenerateBoundary(s));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `m = (alpha - beta) / pi`, the offset of the free spectrum.
    pub fn offset(&self) -> f64 {
        (self.alpha - self.beta) / PI
    }

    pub fn sin_beta_minus_alpha(&self) -> f64 {
        (self.beta - self.alpha).sin()
    }

    /// Free eigenvalue `lambda_k(0) = k + m`.
    pub fn free_eigenvalue(&self, k: i64) -> f64 {
        k as f64 + self.offset()
    }

    /// Index of the free eigenvalue nearest to `lambda`.
    pub fn nearest_index(&self, lambda: f64) -> i64 {
        (lambda - self.offset()).round() as i64
    }

    /// Indices whose free eigenvalue lies in `[lo, hi]`.
    pub fn indices_in(&self, lo: f64, hi: f64) -> RangeInclusive<i64> {
        let m = self.offset();
        ((lo - m).ceil() as i64)..=((hi - m).floor() as i64)
    }

    /// Orthonormal free eigenfunction `u(lambda_k(0), x)`.
    pub fn basis(&self, k: i64, x: f64) -> (f64, f64) {
        let phase = self.free_eigenvalue(k) * x - self.alpha;
        let s = 1.0 / PI.sqrt();
        (s * phase.cos(), s * phase.sin())
    }
}

pub type Coefficients = BTreeMap<i64, Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    Coefficients(Coefficients),
    /// Samples of `v1`, `v2` at `x_j = j pi / n`, `j = 0..=n`.
    Grid { v1: Vec<Complex64>, v2: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    repr: Repr,
    boundary: BoundaryParams,
}

impl Potential {
    pub fn from_coefficients(coeffs: Coefficients, boundary: BoundaryParams) -> Result<Self> {
        if coeffs.values().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidPotential("non-finite coefficient".into()));
        }
        let coeffs: Coefficients = coeffs.into_iter().filter(|(_, c)| c.norm() > 0.0).collect();
        if coeffs.is_empty() {
            return Err(Error::ZeroPotential);
        }
        Ok(Self {
            repr: Repr::Coefficients(coeffs),
            boundary,
        })
    }

    pub fn from_grid(v1: Vec<Complex64>, v2: Vec<Complex64>, boundary: BoundaryParams) -> Result<Self> {
        if v1.len() != v2.len() {
            return Err(Error::InvalidPotential(format!(
                "v1 has {} samples, v2 has {}",
                v1.len(),
                v2.len()
            )));
        }
        if v1.len() < MIN_GRID + 1 {
            return Err(Error::InvalidPotential(format!(
                "grid needs at least {} intervals, got {}",
                MIN_GRID,
                v1.len().saturating_sub(1)
            )));
        }
        if v1.iter().chain(&v2).any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidPotential("non-finite sample".into()));
        }
        let p = Self {
            repr: Repr::Grid { v1, v2 },
            boundary,
        };
        if p.norm_sq() <= 0.0 {
            return Err(Error::ZeroPotential);
        }
        Ok(p)
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn boundary(&self) -> BoundaryParams {
        self.boundary
    }

    /// Number of grid intervals for sampled potentials.
    pub fn grid_size(&self) -> Option<usize> {
        match &self.repr {
            Repr::Grid { v1, .. } => Some(v1.len() - 1),
            Repr::Coefficients(_) => None,
        }
    }

    /// Smallest index interval containing every nonzero coefficient.
    pub fn band(&self) -> Option<RangeInclusive<i64>> {
        match &self.repr {
            Repr::Coefficients(c) => {
                let lo = *c.keys().next()?;
                let hi = *c.keys().next_back()?;
                Some(lo..=hi)
            }
            Repr::Grid { .. } => None,
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match &self.repr {
            Repr::Coefficients(c) => c.values().map(|v| v.norm_sqr()).sum(),
            Repr::Grid { v1, v2 } => {
                let rule = UniformRule::new(PI / (v1.len() - 1) as f64);
                let dens: Vec<f64> = v1.iter().zip(v2).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect();
                rule.integrate(&dens)
            }
        }
    }

    /// True when `v1` and `v2` are real-valued (coefficients real in the
    /// real eigenbasis).
    pub fn is_real(&self, tol: f64) -> bool {
        match &self.repr {
            Repr::Coefficients(c) => c.values().all(|v| v.im.abs() <= tol),
            Repr::Grid { v1, v2 } => v1.iter().chain(v2).all(|v| v.im.abs() <= tol),
        }
    }

    pub fn scaled(&self, factor: f64) -> Potential {
        let repr = match &self.repr {
            Repr::Coefficients(c) => Repr::Coefficients(c.iter().map(|(&k, &v)| (k, v * factor)).collect()),
            Repr::Grid { v1, v2 } => Repr::Grid {
                v1: v1.iter().map(|v| v * factor).collect(),
                v2: v2.iter().map(|v| v * factor).collect(),
            },
        };
        Potential {
            repr,
            boundary: self.boundary,
        }
    }

    /// `(v1(x), v2(x))`; sampled potentials are interpolated.
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        match &self.repr {
            Repr::Coefficients(c) => c.iter().fold((Complex64::default(), Complex64::default()), |(a, b), (&k, &v)| {
                let (u1, u2) = self.boundary.basis(k, x);
                (a + v * u1, b + v * u2)
            }),
            Repr::Grid { v1, v2 } => {
                let rule = UniformRule::new(PI / (v1.len() - 1) as f64);
                (rule.interpolate(v1, x), rule.interpolate(v2, x))
            }
        }
    }

    /// Render on a uniform grid with `n` intervals using the eigenbasis sum.
    pub fn to_grid(&self, n: usize) -> Result<Potential> {
        let xs = grid_nodes(n);
        let (v1, v2) = xs.iter().map(|&x| self.eval(x)).unzip();
        Potential::from_grid(v1, v2, self.boundary)
    }

    /// Split into `v_+ = v1 + i v2` and `v_- = v1 - i v2`.
    pub fn split_pm(&self) -> (Channel, Channel) {
        match &self.repr {
            Repr::Coefficients(c) => {
                let alpha = self.boundary.alpha;
                let s = 1.0 / PI.sqrt();
                let ks: Vec<i64> = c.keys().copied().collect();
                let plus = ExpSeries::new(
                    c.values().map(|v| v * Complex64::from_polar(s, -alpha)).collect(),
                    ks.iter().map(|&k| self.boundary.free_eigenvalue(k)).collect(),
                );
                let minus = ExpSeries::new(
                    c.values().map(|v| v * Complex64::from_polar(s, alpha)).collect(),
                    ks.iter().map(|&k| -self.boundary.free_eigenvalue(k)).collect(),
                );
                (Channel::Series(plus), Channel::Series(minus))
            }
            Repr::Grid { v1, v2 } => {
                let plus = v1.iter().zip(v2).map(|(a, b)| a + I * b).collect();
                let minus = v1.iter().zip(v2).map(|(a, b)| a - I * b).collect();
                (Channel::Grid(GridChannel::new(plus)), Channel::Grid(GridChannel::new(minus)))
            }
        }
    }

    pub fn transforms(&self) -> TransformSet {
        let (plus, minus) = self.split_pm();
        TransformSet {
            plus,
            minus,
            alpha: self.boundary.alpha,
        }
    }

    /// `(v~_+(lambda), v~_-(lambda))`.
    pub fn fourier_pm(&self, lambda: Complex64) -> (Complex64, Complex64) {
        let t = self.transforms();
        (t.vtilde_plus(lambda), t.vtilde_minus(lambda))
    }

    /// `(Phi_+(lambda), Phi_-(lambda))`.
    pub fn phi_pm(&self, lambda: Complex64) -> (Complex64, Complex64) {
        let t = self.transforms();
        (t.phi_plus(lambda), t.phi_minus(lambda))
    }

    pub fn big_v(&self, lambda: Complex64) -> Complex64 {
        self.transforms().big_v(lambda)
    }

    /// Eigenbasis coefficients `v_k = <v, u(lambda_k(0), .)>` for every `k`
    /// in `range` (zeros included).
    pub fn coefficients(&self, range: RangeInclusive<i64>) -> Coefficients {
        match &self.repr {
            Repr::Coefficients(c) => range
                .map(|k| (k, c.get(&k).copied().unwrap_or_default()))
                .collect(),
            Repr::Grid { v1, v2 } => {
                let n = v1.len() - 1;
                let rule = UniformRule::new(PI / n as f64);
                let xs = grid_nodes(n);
                range
                    .map(|k| {
                        let f: Vec<Complex64> = xs
                            .iter()
                            .enumerate()
                            .map(|(j, &x)| {
                                let (u1, u2) = self.boundary.basis(k, x);
                                v1[j] * u1 + v2[j] * u2
                            })
                            .collect();
                        (k, rule.integrate(&f))
                    })
                    .collect()
            }
        }
    }
}

/// Build a potential from eigenbasis coefficients.
pub fn synthesize(coeffs: Coefficients, boundary: BoundaryParams) -> Result<Potential> {
    Potential::from_coefficients(coeffs, boundary)
}

pub fn grid_nodes(n: usize) -> Vec<f64> {
    let h = PI / n as f64;
    (0..=n).map(|j| j as f64 * h).collect()
}

fn sinc_half(lambda: f64) -> f64 {
    // sin(lambda pi / 2) / (lambda pi / 2)
    let z = 0.5 * lambda * PI;
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// `V(lambda)` for the constant potential `v = (c, c)`:
/// `(4 sqrt2 c / lambda) sin(lambda pi / 2) sin(lambda pi / 2 - alpha + pi/4)`.
pub fn constant_big_v(c: f64, boundary: BoundaryParams, lambda: f64) -> f64 {
    let half = 0.5 * lambda * PI;
    2.0 * std::f64::consts::SQRT_2 * c * PI * sinc_half(lambda) * (half - boundary.alpha + FRAC_PI_4).sin()
}

/// Eigenbasis coefficient `c_k` of the constant potential `(c, c)`:
/// `(2 sqrt2 c / (sqrt(pi) lambda_k)) sin(pi lambda_k / 2) sin(pi lambda_k / 2 - alpha + pi/4)`.
pub fn constant_coefficient(c: f64, boundary: BoundaryParams, k: i64) -> f64 {
    constant_big_v(c, boundary, boundary.free_eigenvalue(k)) / (2.0 * PI.sqrt())
}

/// Finite exponential sum `w(x) = sum_k a_k e^{i omega_k x}` on `[0, pi]`.
#[derive(Debug, Clone)]
pub struct ExpSeries {
    amps: Vec<Complex64>,
    freqs: Vec<f64>,
    // cross[j] = sum_k a_k E(omega_k - omega_j), E(s) = int_0^pi e^{isx} dx
    cross: Vec<Complex64>,
}

/// Panels x points of the composite Gauss rule used near removable
/// singularities of the autocorrelation transform.
const NEAR_PANELS: usize = 8;
const NEAR_POINTS: usize = 20;
/// Below this `|lambda - omega_j|` the difference quotient of the closed
/// form loses more than about `1e-14` and the Gauss rule is used instead.
const NEAR_RADIUS: f64 = 0.05;
fn near_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let (gx, gw) = gauss_legendre(NEAR_POINTS);
        let width = PI / NEAR_PANELS as f64;
        let mut xs = Vec::with_capacity(NEAR_PANELS * NEAR_POINTS);
        let mut ws = Vec::with_capacity(NEAR_PANELS * NEAR_POINTS);
        for p in 0..NEAR_PANELS {
            let a = p as f64 * width;
            for (x, w) in gx.iter().zip(&gw) {
                xs.push(a + 0.5 * width * (x + 1.0));
                ws.push(0.5 * width * w);
            }
        }
        (xs, ws)
    })
}

impl ExpSeries {
    pub fn new(amps: Vec<Complex64>, freqs: Vec<f64>) -> Self {
        let cross = freqs
            .iter()
            .map(|&wj| {
                amps.iter()
                    .zip(&freqs)
                    .map(|(a, &wk)| a * exp_integral(Complex64::new(wk - wj, 0.0)))
                    .sum()
            })
            .collect();
        Self { amps, freqs, cross }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.amps
            .iter()
            .zip(&self.freqs)
            .map(|(a, &w)| a * Complex64::from_polar(1.0, w * x))
            .sum()
    }

    /// `int_0^pi e^{-i lambda x} w(x) dx`.
    pub fn fourier(&self, lambda: Complex64) -> Complex64 {
        self.amps
            .iter()
            .zip(&self.freqs)
            .map(|(a, &w)| a * exp_integral(w - lambda))
            .sum()
    }

    /// `int_0^pi dx int_0^x e^{-i lambda (x - t)} conj(w(t)) w(x) dt`.
    pub fn autocorrelation_transform(&self, lambda: Complex64) -> Complex64 {
        let mut s_cache = None;
        let mut wave_cache: Option<Vec<Complex64>> = None;
        let mut total = Complex64::default();
        for (j, (&aj, &wj)) in self.amps.iter().zip(&self.freqs).enumerate() {
            let b = lambda - wj;
            let tj = if b.norm() >= NEAR_RADIUS {
                let s = *s_cache.get_or_insert_with(|| self.fourier(lambda));
                (self.cross[j] - s) / (I * b)
            } else {
                // (E(a + b) - E(a)) / (ib) cancels near b = 0; integrate
                // e^{iax} x (e^{ibx} - 1)/(ibx) directly instead.
                let (xs, ws) = near_rule();
                let waves = wave_cache.get_or_insert_with(|| {
                    xs.iter()
                        .map(|&x| {
                            self.amps
                                .iter()
                                .zip(&self.freqs)
                                .map(|(a, &wk)| a * (I * (wk - lambda) * x).exp())
                                .sum()
                        })
                        .collect()
                });
                xs.iter()
                    .zip(ws)
                    .zip(waves.iter())
                    .map(|((&x, &w), wave)| wave * expm1_over(I * b * x) * x * w)
                    .sum()
            };
            total += aj.conj() * tj;
        }
        total
    }

    /// `g(xi) = int_xi^pi conj(w(x - xi)) w(x) dx`.
    pub fn correlation(&self, xi: f64) -> Complex64 {
        let len = PI - xi;
        let mut total = Complex64::default();
        for (&aj, &wj) in self.amps.iter().zip(&self.freqs) {
            for (&ak, &wk) in self.amps.iter().zip(&self.freqs) {
                let s = wk - wj;
                // int_xi^pi e^{isx} dx
                let seg = Complex64::from_polar(1.0, s * xi) * len * expm1_over(I * s * len);
                total += aj.conj() * ak * Complex64::from_polar(1.0, wj * xi) * seg;
            }
        }
        total
    }

    /// `int_0^x e^{i lambda (x - t)} w(t) dt`.
    pub fn running(&self, x: f64, lambda: f64) -> Complex64 {
        let sum: Complex64 = self
            .amps
            .iter()
            .zip(&self.freqs)
            .map(|(a, &w)| a * x * expm1_over(I * (w - lambda) * x))
            .sum();
        Complex64::from_polar(1.0, lambda * x) * sum
    }
}

/// Samples of `v_+` or `v_-` on a uniform grid, with the correlation `g`
/// computed on first use.
#[derive(Debug, Clone)]
pub struct GridChannel {
    values: Vec<Complex64>,
    rule: UniformRule,
    xs: Vec<f64>,
    g: OnceLock<Vec<Complex64>>,
}

impl GridChannel {
    fn new(values: Vec<Complex64>) -> Self {
        let n = values.len() - 1;
        Self {
            rule: UniformRule::new(PI / n as f64),
            xs: grid_nodes(n),
            values,
            g: OnceLock::new(),
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn rule(&self) -> &UniformRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    fn g_nodes(&self) -> &[Complex64] {
        self.g.get_or_init(|| {
            let n = self.values.len() - 1;
            let mut buf = vec![Complex64::default(); n + 1];
            let (gx, gw) = gauss_legendre(16);
            (0..=n)
                .map(|j| {
                    if n - j + 1 >= STENCIL {
                        for i in j..=n {
                            buf[i] = self.values[i - j].conj() * self.values[i];
                        }
                        return self.rule.integrate_range(&buf, j, n);
                    }
                    // too few cells for the full stencil: Gauss nodes on the
                    // interpolant keep the tail of g at full order
                    let (xi, half) = (self.xs[j], 0.5 * (PI - self.xs[j]));
                    gx.iter()
                        .zip(&gw)
                        .map(|(&u, &w)| {
                            let t = xi + half * (u + 1.0);
                            let a = self.rule.interpolate(&self.values, t - xi);
                            let b = self.rule.interpolate(&self.values, t);
                            a.conj() * b * (w * half)
                        })
                        .sum()
                })
                .collect()
        })
    }

    fn fourier(&self, lambda: Complex64) -> Complex64 {
        let f: Vec<Complex64> = self
            .xs
            .iter()
            .zip(&self.values)
            .map(|(&x, v)| v * (-I * lambda * x).exp())
            .collect();
        self.rule.integrate(&f)
    }

    fn autocorrelation_transform(&self, lambda: Complex64) -> Complex64 {
        let f: Vec<Complex64> = self
            .xs
            .iter()
            .zip(self.g_nodes())
            .map(|(&x, g)| g * (-I * lambda * x).exp())
            .collect();
        self.rule.integrate(&f)
    }

    fn correlation(&self, xi: f64) -> Complex64 {
        self.rule.interpolate(self.g_nodes(), xi)
    }
}

/// One of `v_+`, `v_-` in either representation.
#[derive(Debug, Clone)]
pub enum Channel {
    Series(ExpSeries),
    Grid(GridChannel),
}

impl Channel {
    /// Value at `x`; sampled channels are interpolated.
    pub fn value_at(&self, x: f64) -> Complex64 {
        match self {
            Channel::Series(s) => s.eval(x),
            Channel::Grid(g) => g.rule.interpolate(&g.values, x),
        }
    }

    pub fn fourier(&self, lambda: Complex64) -> Complex64 {
        match self {
            Channel::Series(s) => s.fourier(lambda),
            Channel::Grid(g) => g.fourier(lambda),
        }
    }

    pub fn autocorrelation_transform(&self, lambda: Complex64) -> Complex64 {
        match self {
            Channel::Series(s) => s.autocorrelation_transform(lambda),
            Channel::Grid(g) => g.autocorrelation_transform(lambda),
        }
    }

    pub fn correlation(&self, xi: f64) -> Complex64 {
        match self {
            Channel::Series(s) => s.correlation(xi),
            Channel::Grid(g) => g.correlation(xi),
        }
    }
}

/// Cached transforms of a potential: `v~_pm`, `Phi_pm`, `g_pm`, `V`.
#[derive(Debug, Clone)]
pub struct TransformSet {
    plus: Channel,
    minus: Channel,
    alpha: f64,
}

impl TransformSet {
    pub fn plus(&self) -> &Channel {
        &self.plus
    }

    pub fn minus(&self) -> &Channel {
        &self.minus
    }

    pub fn vtilde_plus(&self, lambda: Complex64) -> Complex64 {
        self.plus.fourier(lambda)
    }

    pub fn vtilde_minus(&self, lambda: Complex64) -> Complex64 {
        self.minus.fourier(lambda)
    }

    pub fn phi_plus(&self, lambda: Complex64) -> Complex64 {
        self.plus.autocorrelation_transform(lambda)
    }

    pub fn phi_minus(&self, lambda: Complex64) -> Complex64 {
        self.minus.autocorrelation_transform(lambda)
    }

    pub fn g_plus(&self, xi: f64) -> Complex64 {
        self.plus.correlation(xi)
    }

    pub fn g_minus(&self, xi: f64) -> Complex64 {
        self.minus.correlation(xi)
    }

    /// `V(lambda) = e^{i alpha} v~_+(lambda) + e^{-i alpha} v~_-(-lambda)`.
    pub fn big_v(&self, lambda: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.alpha) * self.vtilde_plus(lambda)
            + Complex64::from_polar(1.0, -self.alpha) * self.vtilde_minus(-lambda)
    }
}

/// `f*(lambda) = conj(f(conj(lambda)))`.
pub fn star<F: Fn(Complex64) -> Complex64>(f: F, lambda: Complex64) -> Complex64 {
    f(lambda.conj()).conj()
}
