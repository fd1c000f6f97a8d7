//! Membership test for the class of characteristic functions of operators
//! `D(mu, v)`, and realization of a member as an operator.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::charfun::{delta0, CharFunEval, CharacteristicFunction, OperatorSpec};
use crate::error::{Error, Result};
use crate::potential::{BoundaryParams, Coefficients, Potential};
use crate::spectrum::{assemble, find_roots, Root, Window};

/// Points on the imaginary axis used by the asymptotic checks.
pub const ASYMPTOTIC_Y: [f64; 3] = [10.0, 20.0, 40.0];
/// Allowed excess of the fitted exponential type over `pi`.
pub const TYPE_SLACK: f64 = 0.05;
/// Nodes of the trapezoid rule on each residue circle.
pub const CONTOUR_NODES: usize = 64;
pub const CONTOUR_RADIUS: f64 = 0.5;
/// Coincidence tolerance between a root and a free eigenvalue.
pub const COINCIDE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassJReport {
    pub conditions: Vec<Condition>,
    pub roots: Vec<Root>,
}

impl ClassJReport {
    pub fn verdict(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }
}

impl fmt::Display for ClassJReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            writeln!(f, "({}) {}: {} [{}]", c.id, c.name, if c.passed { "pass" } else { "FAIL" }, c.detail)?;
        }
        write!(f, "verdict: {}", if self.verdict() { "member" } else { "not a member" })
    }
}

fn samples(w: Window, n: usize) -> Vec<f64> {
    (0..n).map(|i| w.lo + (w.hi - w.lo) * i as f64 / (n - 1) as f64).collect()
}

/// `F = Delta / Delta0`.
fn ratio<D: CharacteristicFunction + ?Sized>(delta: &D, z: Complex64) -> Complex64 {
    delta.eval(z) / delta0(delta.boundary(), z)
}

/// Real roots of `delta` in `window`, searched over unit cells around the
/// free eigenvalues.
fn real_roots<D: CharacteristicFunction + ?Sized>(delta: &D, window: Window) -> Vec<Root> {
    let bp = delta.boundary();
    let brackets: Vec<(f64, f64)> = bp
        .indices_in(window.lo - 1.0, window.hi + 1.0)
        .map(|k| {
            let c = bp.free_eigenvalue(k);
            (c - 0.5, c + 0.5)
        })
        .collect();
    let f = |x: f64| delta.eval_real(x);
    find_roots(&f, (window.lo, window.hi), &brackets, 1e-12)
}

/// Runs the five membership checks on `delta` over `window`.
pub fn classj_validate<D: CharacteristicFunction + ?Sized>(delta: &D, window: Window) -> ClassJReport {
    let mut conditions = Vec::new();
    let bp = delta.boundary();

    // (i) analytic shape
    let mut sym = 0.0f64;
    for x in samples(window, 9) {
        for y in [0.5, 2.0, 5.0] {
            let z = Complex64::new(x, y);
            let d = delta.eval(z);
            sym = sym.max((delta.eval(z.conj()) - d.conj()).norm() / (1.0 + d.norm()));
        }
    }
    let at_zero = delta.eval(Complex64::new(0.0, 0.0)).norm();
    let g20 = delta.eval(Complex64::new(0.0, 20.0)).norm().ln();
    let g40 = delta.eval(Complex64::new(0.0, 40.0)).norm().ln();
    let slope = (g40 - g20) / 20.0;
    let sup = |w: Window| samples(w, 801).into_iter().map(|x| delta.eval_real(x).abs()).fold(0.0, f64::max);
    let mid = 0.5 * (window.lo + window.hi);
    let quarter = 0.25 * (window.hi - window.lo);
    let whole = sup(window);
    let half = sup(Window {
        lo: mid - quarter,
        hi: mid + quarter,
    });
    let bounded = whole.is_finite() && whole <= 2.0 * half.max(f64::MIN_POSITIVE);
    conditions.push(Condition {
        id: "i",
        name: "real on the real axis, nonzero at 0, type <= pi, bounded on R",
        passed: sym < 1e-8 && at_zero > 1e-10 && slope <= PI + TYPE_SLACK && bounded,
        detail: format!("symmetry {sym:.2e}, |delta(0)| {at_zero:.3e}, type {slope:.4}, sup ratio {:.3}", whole / half),
    });

    // (ii) real roots, simple or double at free points
    let roots = real_roots(delta, window);
    let bad: Vec<f64> = roots
        .iter()
        .filter(|r| {
            r.multiplicity > 2
                || (r.multiplicity == 2 && (r.root - bp.free_eigenvalue(bp.nearest_index(r.root))).abs() > 1e-7)
        })
        .map(|r| r.root)
        .collect();
    conditions.push(Condition {
        id: "ii",
        name: "roots simple, double only at free eigenvalues",
        passed: bad.is_empty(),
        detail: format!("{} roots, offending {:?}", roots.len(), bad),
    });

    // (iii) partial interlacing
    let (ok, detail) = partial_interlacing(bp, &roots, window, COINCIDE);
    conditions.push(Condition {
        id: "iii",
        name: "partially interlaced with the free spectrum",
        passed: ok,
        detail,
    });

    // (iv), (v) F(iy) -> 1 like 1/y
    let e: Vec<f64> = ASYMPTOTIC_Y
        .iter()
        .map(|&y| (ratio(delta, Complex64::new(0.0, y)) - 1.0).norm())
        .collect();
    let tiny = e.iter().all(|x| *x < 1e-8);
    conditions.push(Condition {
        id: "iv",
        name: "F(iy) -> 1",
        passed: tiny || (e[1] <= e[0] && e[2] <= e[1]),
        detail: format!("|F(iy) - 1| at y = 10, 20, 40: {:.3e}, {:.3e}, {:.3e}", e[0], e[1], e[2]),
    });
    let growth = (ASYMPTOTIC_Y[2] * e[2]) / (ASYMPTOTIC_Y[0] * e[0]);
    conditions.push(Condition {
        id: "v",
        name: "y |F(iy) - 1| bounded",
        passed: e[2] < 1e-12 || growth <= 1.5,
        detail: format!("40 e(40) / 10 e(10) = {growth:.4}"),
    });

    ClassJReport { conditions, roots }
}

/// The real-axis part of [`classj_validate`] for a tabulated `Delta(lambda)`:
/// conditions (i) without the type and symmetry checks, (ii) and (iii).
/// Sign changes give simple roots; a sample with `|Delta| <= 1e-9 sup|Delta|`
/// and no sign change around it counts as a double root.
pub fn classj_validate_samples(samples: &[(f64, f64)], bp: BoundaryParams) -> Result<ClassJReport> {
    if samples.len() < 3 {
        return Err(Error::Parse("need at least 3 samples".into()));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) || samples.iter().any(|(x, d)| !x.is_finite() || !d.is_finite()) {
        return Err(Error::Parse("samples must be finite and strictly increasing in lambda".into()));
    }
    let window = Window::new(samples[0].0, samples[samples.len() - 1].0)?;
    let scale = samples.iter().fold(0.0f64, |m, s| m.max(s.1.abs()));
    // linear interpolation locates roots to within a sample spacing
    let spacing = samples.windows(2).map(|w| w[1].0 - w[0].0).fold(0.0, f64::max);
    let mut conditions = Vec::new();

    let at_zero = samples.windows(2).find(|w| w[0].0 <= 0.0 && 0.0 <= w[1].0).map(|w| {
        let t = -w[0].0 / (w[1].0 - w[0].0);
        (w[0].1 + t * (w[1].1 - w[0].1)).abs()
    });
    let mid = 0.5 * (window.lo + window.hi);
    let quarter = 0.25 * (window.hi - window.lo);
    let half = samples
        .iter()
        .filter(|s| (s.0 - mid).abs() <= quarter)
        .fold(0.0f64, |m, s| m.max(s.1.abs()));
    let bounded = scale <= 2.0 * half.max(f64::MIN_POSITIVE);
    conditions.push(Condition {
        id: "i",
        name: "nonzero at 0, bounded on R (real samples)",
        passed: at_zero.is_some_and(|d| d > 1e-10) && bounded,
        detail: match at_zero {
            Some(d) => format!("|delta(0)| {d:.3e}, sup ratio {:.3}", scale / half),
            None => "0 lies outside the sampled range".into(),
        },
    });

    let mut roots = Vec::new();
    let tiny = 1e-9 * scale;
    for (i, w) in samples.windows(2).enumerate() {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        if d0 == 0.0 {
            continue;
        }
        if d0 * d1 < 0.0 {
            roots.push(Root {
                root: x0 - d0 * (x1 - x0) / (d1 - d0),
                multiplicity: 1,
            });
        } else if d1.abs() <= tiny {
            let touches = samples.get(i + 2).is_some_and(|s| s.1 * d0 > 0.0 && d1.abs() <= s.1.abs().min(d0.abs()));
            if touches || d1 == 0.0 {
                roots.push(Root {
                    root: x1,
                    multiplicity: if touches { 2 } else { 1 },
                });
            }
        }
    }
    let bad: Vec<f64> = roots
        .iter()
        .filter(|r| r.multiplicity == 2 && (r.root - bp.free_eigenvalue(bp.nearest_index(r.root))).abs() > spacing)
        .map(|r| r.root)
        .collect();
    conditions.push(Condition {
        id: "ii",
        name: "roots simple, double only at free eigenvalues",
        passed: bad.is_empty(),
        detail: format!("{} roots, offending {:?}", roots.len(), bad),
    });

    let (ok, detail) = partial_interlacing(bp, &roots, window, spacing);
    conditions.push(Condition {
        id: "iii",
        name: "partially interlaced with the free spectrum",
        passed: ok,
        detail,
    });
    Ok(ClassJReport { conditions, roots })
}

/// Greedy splitting: roots on free points form the unmoved part; the rest
/// must alternate with the free points that lost their root.
fn partial_interlacing(bp: BoundaryParams, roots: &[Root], window: Window, tol: f64) -> (bool, String) {
    let mut moved: Vec<f64> = roots
        .iter()
        .flat_map(|r| std::iter::repeat(r.root).take(r.multiplicity as usize))
        .collect();
    let mut vacated = Vec::new();
    for k in bp.indices_in(window.lo, window.hi) {
        let a = bp.free_eigenvalue(k);
        match moved.iter().position(|&r| (r - a).abs() <= tol) {
            Some(i) => {
                moved.remove(i);
            }
            None => vacated.push(a),
        }
    }
    let mut merged: Vec<(f64, bool)> = moved.iter().map(|&r| (r, true)).chain(vacated.iter().map(|&a| (a, false))).collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let alternates = merged.windows(2).all(|w| w[0].1 != w[1].1);
    let balanced = (moved.len() as i64 - vacated.len() as i64).abs() <= 1;
    (
        alternates && balanced,
        format!("{} moved roots, {} vacated free points, alternating: {alternates}", moved.len(), vacated.len()),
    )
}

/// Residues `A_k` of `F = Delta / Delta0` at each free eigenvalue in
/// `window`, by the trapezoid rule on a circle.
pub fn residues<D: CharacteristicFunction + ?Sized>(delta: &D, window: Window) -> Vec<(i64, f64)> {
    let bp = delta.boundary();
    bp.indices_in(window.lo, window.hi)
        .map(|k| {
            let a = bp.free_eigenvalue(k);
            let sum: Complex64 = (0..CONTOUR_NODES)
                .map(|j| {
                    let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CONTOUR_NODES as f64);
                    ratio(delta, a + CONTOUR_RADIUS * e) * e
                })
                .sum();
            // A_k = -(1 / 2 pi i) closed integral of F
            let ak = -(CONTOUR_RADIUS / CONTOUR_NODES as f64) * sum.re;
            (k, if ak.abs() < 1e-12 { 0.0 } else { ak })
        })
        .collect()
}

/// Builds `D(mu, v)` with `mu = sum A_k`, `|v_k| = sqrt(A_k / mu)`, phases
/// `+1`, and checks that its spectrum reproduces the roots of `delta`.
pub fn classj_realize<D: CharacteristicFunction + ?Sized>(delta: &D, window: Window) -> Result<OperatorSpec> {
    let bp = delta.boundary();
    let res = residues(delta, window);
    let pos = res.iter().any(|r| r.1 > 0.0);
    let neg = res.iter().any(|r| r.1 < 0.0);
    if pos && neg {
        return Err(Error::NotRealizable("mixed residue signs".into()));
    }
    let mu: f64 = res.iter().map(|r| r.1).sum();
    if mu == 0.0 {
        return Err(Error::ZeroPotential);
    }
    let coeffs: Coefficients = res
        .iter()
        .filter(|r| r.1 != 0.0)
        .map(|&(k, a)| (k, Complex64::new((a / mu).sqrt(), 0.0)))
        .collect();
    let spec = OperatorSpec::new(mu, Potential::from_coefficients(coeffs, bp)?)?;

    let ev = CharFunEval::new(spec.clone());
    let forward = assemble(&ev, window, 1e-12)?.expanded();
    let target: Vec<f64> = real_roots(delta, window)
        .iter()
        .flat_map(|r| std::iter::repeat(r.root).take(r.multiplicity as usize))
        .collect();
    let inner = |x: &f64| *x > window.lo + 1e-6 && *x < window.hi - 1e-6;
    let forward: Vec<f64> = forward.into_iter().filter(inner).collect();
    let target: Vec<f64> = target.into_iter().filter(inner).collect();
    if forward.len() != target.len() {
        return Err(Error::NotRealizable(format!(
            "realized operator has {} eigenvalues in the window, the function has {} roots",
            forward.len(),
            target.len()
        )));
    }
    let gap = forward.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > 1e-7 {
        return Err(Error::NotRealizable(format!("realized spectrum differs from the roots by {gap:e}")));
    }
    Ok(spec)
}
