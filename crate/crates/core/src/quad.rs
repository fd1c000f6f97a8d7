//! Quadrature on uniform grids and a few stable elementary kernels.
//!
//! The uniform-grid rule integrates each cell with the Lagrange interpolant
//! through a ten-point stencil centred on that cell (shifted inwards near
//! the ends of the integration range). Interior node weights are exactly
//! one, so the rule is the trapezoid rule plus high-order end corrections.
//! Integrands here are smooth trigonometric sums, for which the rule is
//! accurate to roughly `(h * omega)^10`.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::Zero;

/// Largest stencil used per cell.
pub const STENCIL: usize = 10;

/// Precomputed cell-integration weights for stencils of 2..=STENCIL points.
#[derive(Debug, Clone)]
pub struct UniformRule {
    h: f64,
    // tables[p][o][j]: integral over [o, o+1] of the j-th Lagrange basis
    // polynomial on nodes 0..p (unit spacing).
    tables: Vec<Vec<Vec<f64>>>,
}

impl UniformRule {
    pub fn new(h: f64) -> Self {
        let (gx, gw) = gauss_legendre(8);
        let mut tables = vec![Vec::new(); STENCIL + 1];
        for (p, table) in tables.iter_mut().enumerate().skip(2) {
            *table = (0..p - 1)
                .map(|o| {
                    (0..p)
                        .map(|j| {
                            gx.iter()
                                .zip(&gw)
                                .map(|(&x, &w)| {
                                    let t = o as f64 + 0.5 * (x + 1.0);
                                    0.5 * w * lagrange_basis(p, j, t)
                                })
                                .sum()
                        })
                        .collect()
                })
                .collect();
        }
        Self { h, tables }
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    fn stencil(&self, cell: usize, cells: usize) -> (usize, usize, &[f64]) {
        let p = STENCIL.min(cells + 1);
        let start = (cell + 1).saturating_sub(p / 2).min(cells + 1 - p);
        let offset = cell - start;
        (p, start, &self.tables[p][offset])
    }

    /// Node weights (already scaled by `h`) for a range of `cells` cells.
    pub fn weights(&self, cells: usize) -> Vec<f64> {
        let mut w = vec![0.0; cells + 1];
        if cells == 0 {
            return w;
        }
        for cell in 0..cells {
            let (p, start, tw) = self.stencil(cell, cells);
            for j in 0..p {
                w[start + j] += tw[j];
            }
        }
        w.iter_mut().for_each(|x| *x *= self.h);
        w
    }

    /// Integral over the whole sample range.
    pub fn integrate<T>(&self, f: &[T]) -> T
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
    {
        self.integrate_range(f, 0, f.len().saturating_sub(1))
    }

    /// Integral over nodes `start..=end`.
    pub fn integrate_range<T>(&self, f: &[T], start: usize, end: usize) -> T
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
    {
        assert!(end < f.len() && start <= end);
        let cells = end - start;
        if cells == 0 {
            return T::zero();
        }
        self.weights(cells)
            .iter()
            .zip(&f[start..=end])
            .fold(T::zero(), |acc, (&w, &v)| acc + v * w)
    }

    /// Running integral `F[i] = integral from node 0 to node i`.
    pub fn cumulative<T>(&self, f: &[T]) -> Vec<T>
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
    {
        let cells = f.len().saturating_sub(1);
        let mut out = Vec::with_capacity(f.len());
        let mut acc = T::zero();
        out.push(acc);
        for cell in 0..cells {
            let (p, start, tw) = self.stencil(cell, cells);
            let piece = (0..p).fold(T::zero(), |s, j| s + f[start + j] * (tw[j] * self.h));
            acc = acc + piece;
            out.push(acc);
        }
        out
    }

    /// Evaluate the ten-point local interpolant of node data at `x` (grid
    /// coordinates measured from node 0 in units of `h`).
    pub fn interpolate(&self, f: &[Complex64], x: f64) -> Complex64 {
        let cells = f.len() - 1;
        let t = (x / self.h).clamp(0.0, cells as f64);
        let cell = (t.floor() as usize).min(cells.saturating_sub(1));
        let p = STENCIL.min(cells + 1);
        let start = (cell + 1).saturating_sub(p / 2).min(cells + 1 - p);
        let local = t - start as f64;
        (0..p).fold(Complex64::zero(), |acc, j| {
            acc + f[start + j] * lagrange_basis(p, j, local)
        })
    }
}

fn lagrange_basis(p: usize, j: usize, t: f64) -> f64 {
    (0..p)
        .filter(|&i| i != j)
        .map(|i| (t - i as f64) / (j as f64 - i as f64))
        .product()
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(e^z - 1) / z`, entire, with the removable singularity handled.
pub fn expm1_over(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 2..30 {
            term = term * z / n as f64;
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `integral_0^pi e^{i s x} dx`.
pub fn exp_integral(s: Complex64) -> Complex64 {
    let z = Complex64::i() * s * std::f64::consts::PI;
    expm1_over(z) * std::f64::consts::PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn interior_weights_are_one() {
        let rule = UniformRule::new(0.1);
        let w = rule.weights(64);
        for wi in &w[12..52] {
            assert!((wi - 0.1).abs() < 1e-14, "{wi}");
        }
        let sum: f64 = w.iter().sum();
        assert!((sum - 6.4).abs() < 1e-13);
    }

    #[test]
    fn trig_integral_is_accurate() {
        let n = 512;
        let h = PI / n as f64;
        let rule = UniformRule::new(h);
        let f: Vec<Complex64> = (0..=n)
            .map(|i| Complex64::new(0.0, 9.3 * i as f64 * h).exp())
            .collect();
        let got = rule.integrate(&f);
        let exact = exp_integral(Complex64::new(9.3, 0.0));
        assert!((got - exact).norm() < 1e-12, "{}", (got - exact).norm());
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let n = 256;
        let h = PI / n as f64;
        let rule = UniformRule::new(h);
        let f: Vec<f64> = (0..=n).map(|i| (3.0 * i as f64 * h).cos()).collect();
        let c = rule.cumulative(&f);
        for (i, ci) in c.iter().enumerate() {
            let x = i as f64 * h;
            assert!((ci - (3.0 * x).sin() / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn short_ranges_fall_back_to_lower_order() {
        let rule = UniformRule::new(0.5);
        let f = [1.0, 2.0, 3.0];
        assert!((rule.integrate(&f) - 2.0).abs() < 1e-14);
        assert!((rule.integrate_range(&f, 1, 2) - 1.25).abs() < 1e-14);
        assert_eq!(rule.integrate_range(&f, 2, 2), 0.0);
    }

    #[test]
    fn expm1_over_is_continuous() {
        let a = expm1_over(Complex64::new(0.49999, 0.0));
        let b = expm1_over(Complex64::new(0.50001, 0.0));
        assert!((a - b).norm() < 1e-4);
        let small = expm1_over(Complex64::new(1e-9, 0.0));
        assert!((small.re - 1.0).abs() < 1e-9);
        assert!((exp_integral(Complex64::new(0.0, 0.0)).re - PI).abs() < 1e-15);
    }

    #[test]
    fn interpolation_reproduces_smooth_data() {
        let n = 64;
        let h = PI / n as f64;
        let rule = UniformRule::new(h);
        let f: Vec<Complex64> = (0..=n).map(|i| Complex64::new((i as f64 * h).sin(), 0.0)).collect();
        let x = 1.2345;
        assert!((rule.interpolate(&f, x).re - x.sin()).abs() < 1e-10);
    }
}
