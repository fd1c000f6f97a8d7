//! Real root isolation for real-analytic functions on unit cells.

use log::{debug, warn};
use rayon::prelude::*;

/// Samples per bracket on the first pass.
pub const SAMPLES: usize = 16;
/// Refinement factor applied once to brackets where nothing was found.
pub const REFINE: usize = 8;
/// Central-difference step used for derivatives.
pub const DIFF_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub root: f64,
    pub multiplicity: u8,
}

/// Thresholds for deciding that a non-crossing minimum is a double root,
/// all relative to `scale`.
#[derive(Debug, Clone, Copy)]
pub struct DoubleRootConfig {
    pub f_tol: f64,
    pub deriv_tol: f64,
    pub curvature_min: f64,
}

impl Default for DoubleRootConfig {
    fn default() -> Self {
        Self {
            f_tol: 1e-9,
            deriv_tol: 1e-6,
            curvature_min: 1e-6,
        }
    }
}

/// Finds all real roots of `f` in the given brackets.
///
/// Each bracket is sampled; sign changes are bisected to `tol` and then
/// polished by Newton steps, and local minima of `|f|` without a sign change
/// are searched for a hidden pair of roots or a double root. Roots outside
/// `window` are dropped.
pub fn find_roots<F>(f: &F, window: (f64, f64), brackets: &[(f64, f64)], tol: f64) -> Vec<Root>
where
    F: Fn(f64) -> f64 + Sync,
{
    find_roots_with(f, window, brackets, tol, DoubleRootConfig::default())
}

pub fn find_roots_with<F>(
    f: &F,
    window: (f64, f64),
    brackets: &[(f64, f64)],
    tol: f64,
    cfg: DoubleRootConfig,
) -> Vec<Root>
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut roots: Vec<Root> = brackets
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let found = scan(f, a, b, SAMPLES, tol, cfg);
            if found.is_empty() {
                debug!("no root in [{a}, {b}] on first pass, refining");
                scan(f, a, b, SAMPLES * REFINE, tol, cfg)
            } else {
                found
            }
        })
        .collect();
    roots.sort_by(|a, b| a.root.total_cmp(&b.root));
    let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.root - last.root).abs() <= tol.max(1e-10) => {
                last.multiplicity = last.multiplicity.max(r.multiplicity);
            }
            _ => merged.push(r),
        }
    }
    merged.retain(|r| r.root >= window.0 - tol && r.root <= window.1 + tol);
    merged
}

fn scan<F>(f: &F, a: f64, b: f64, samples: usize, tol: f64, cfg: DoubleRootConfig) -> Vec<Root>
where
    F: Fn(f64) -> f64 + Sync,
{
    let xs: Vec<f64> = (0..samples).map(|i| a + (b - a) * i as f64 / (samples - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let scale = ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    let mut out = Vec::new();
    for i in 0..samples - 1 {
        let (x0, x1, y0, y1) = (xs[i], xs[i + 1], ys[i], ys[i + 1]);
        if y0 == 0.0 {
            out.push(Root { root: x0, multiplicity: 1 });
        } else if y0.signum() != y1.signum() && y1 != 0.0 {
            out.push(Root {
                root: polish(f, bisect(f, x0, x1, y0, tol), x0, x1),
                multiplicity: 1,
            });
        }
    }
    if ys[samples - 1] == 0.0 {
        out.push(Root { root: xs[samples - 1], multiplicity: 1 });
    }
    // interior local minima of |f| with no adjacent sign change
    for i in 1..samples - 1 {
        let (yl, y, yr) = (ys[i - 1], ys[i], ys[i + 1]);
        if y == 0.0 || yl.signum() != y.signum() || yr.signum() != y.signum() {
            continue;
        }
        if y.abs() > yl.abs() || y.abs() > yr.abs() {
            continue;
        }
        let s = y.signum();
        let (xm, fm) = golden_min(&|x| s * f(x), xs[i - 1], xs[i + 1]);
        let fm = s * fm;
        if fm.signum() != s && fm.abs() > cfg.f_tol * scale {
            // the hump crosses zero: two simple roots around xm
            let (lo, hi) = (xs[i - 1], xs[i + 1]);
            out.push(Root {
                root: polish(f, bisect(f, lo, xm, f(lo), tol), lo, xm),
                multiplicity: 1,
            });
            out.push(Root {
                root: polish(f, bisect(f, xm, hi, fm, tol), xm, hi),
                multiplicity: 1,
            });
        } else if fm.abs() < cfg.f_tol * scale {
            let d1 = (f(xm + DIFF_STEP) - f(xm - DIFF_STEP)) / (2.0 * DIFF_STEP);
            let h = 1e-4;
            let d2 = (f(xm + h) - 2.0 * f(xm) + f(xm - h)) / (h * h);
            if d1.abs() < cfg.deriv_tol * scale && d2.abs() > cfg.curvature_min * scale {
                out.push(Root { root: xm, multiplicity: 2 });
            } else {
                warn!("near-zero minimum at {xm} (f = {fm:e}, f' = {d1:e}, f'' = {d2:e}) not classified");
            }
        }
    }
    out
}

/// Bisection on `[a, b]` with `f(a) = fa` of opposite sign to `f(b)`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= tol || m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// A few Newton steps with a central-difference derivative, kept inside
/// `[a, b]` and only while `|f|` decreases.
fn polish<F: Fn(f64) -> f64>(f: &F, x0: f64, a: f64, b: f64) -> f64 {
    let mut x = x0;
    let mut fx = f(x);
    for _ in 0..4 {
        if fx == 0.0 {
            break;
        }
        let d = (f(x + DIFF_STEP) - f(x - DIFF_STEP)) / (2.0 * DIFF_STEP);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(a..=b).contains(&next) {
            break;
        }
        let fn_ = f(next);
        if fn_.abs() >= fx.abs() {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

/// Golden-section minimization of `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Root of a function that is strictly monotone on the open interval
/// `(a, b)`, where `f` may be singular at the endpoints.
pub fn monotone_root<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let increasing = {
        let q1 = a + 0.25 * (b - a);
        let q3 = a + 0.75 * (b - a);
        f(q3) > f(q1)
    };
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == increasing {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_cells(lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut a = lo;
        while a < hi {
            out.push((a, (a + 1.0).min(hi)));
            a += 1.0;
        }
        out
    }

    #[test]
    fn sine_roots() {
        let f = |x: f64| (x * PI).sin();
        let roots = find_roots(&f, (-2.5, 2.5), &unit_cells(-3.3, 3.3), 1e-13);
        let got: Vec<f64> = roots.iter().map(|r| r.root).collect();
        assert_eq!(got.len(), 5);
        for (g, w) in got.iter().zip([-2.0, -1.0, 0.0, 1.0, 2.0]) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn double_root_is_detected() {
        let f = |x: f64| (x - 0.3).powi(2) * (1.0 + x * x);
        let roots = find_roots(&f, (-1.0, 1.0), &unit_cells(-1.0, 1.0), 1e-13);
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 2);
        assert!((roots[0].root - 0.3).abs() < 1e-6);
    }

    #[test]
    fn close_pair_without_sample_sign_change() {
        let f = |x: f64| (x - 0.51) * (x - 0.52);
        let roots = find_roots(&f, (0.0, 1.0), &[(0.0, 1.0)], 1e-14);
        let got: Vec<f64> = roots.iter().map(|r| r.root).collect();
        assert_eq!(got.len(), 2, "{got:?}");
        assert!((got[0] - 0.51).abs() < 1e-12 && (got[1] - 0.52).abs() < 1e-12);
    }

    #[test]
    fn monotone_root_with_poles() {
        let q = |x: f64| 1.0 + 0.5 / (0.25 - x);
        let r = monotone_root(&q, 0.25, 0.75);
        assert!((r - 0.75).abs() < 1e-14);
        let q = |x: f64| 1.0 + 2.0 / (1.0 - x) + 1.0 / (2.0 - x);
        let r = monotone_root(&q, 1.0, 2.0);
        assert!(q(r).abs() < 1e-9);
    }
}
