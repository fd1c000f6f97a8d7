//! Spectrum of `D`: free points that survive, zeros of `Q`, and their
//! coincidences, cross-checked against direct roots of `Delta(mu, .)`.

pub mod oracle;
pub mod roots;

use std::fmt;
use std::ops::RangeInclusive;

use log::debug;
use num_complex::Complex64;

use crate::charfun::CharFunEval;
use crate::error::{Error, Result};
use crate::potential::Repr;

pub use oracle::{matrix_oracle, oracle_agreement};
pub use roots::{find_roots, Root};

pub const DEFAULT_ZERO_TOL: f64 = 1e-10;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Distance below which a zero of `Q` is identified with a free point.
pub const COINCIDENCE_TOL: f64 = 1e-9;
/// Allowed disagreement between the assembled set and direct roots.
pub const MATCH_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumClass {
    /// Free eigenvalue with `v_k = 0`, unmoved.
    Sigma0,
    /// Zero of `Q`.
    Sigma2,
    /// Free eigenvalue with `v_k = 0` that is also a zero of `Q`.
    Double,
}

impl SpectrumClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumClass::Sigma0 => "sigma0",
            SpectrumClass::Sigma2 => "sigma2",
            SpectrumClass::Double => "double",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigma0" => Some(SpectrumClass::Sigma0),
            "sigma2" => Some(SpectrumClass::Sigma2),
            "double" => Some(SpectrumClass::Double),
            _ => None,
        }
    }
}

impl fmt::Display for SpectrumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: u8,
    pub class: SpectrumClass,
    pub k_hint: i64,
    /// Root lies within tolerance of a window edge.
    pub at_edge: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn new(mut entries: Vec<SpectrumEntry>) -> Self {
        entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        Self { entries }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.lambda).take(e.multiplicity as usize))
            .collect()
    }

    pub fn count(&self, class: SpectrumClass) -> usize {
        self.entries.iter().filter(|e| e.class == class).count()
    }
}

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Parse(format!("invalid window [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Classification {
    /// `(k, lambda_k(0))` with `|v_k| <= zero_tol`.
    pub sigma0: Vec<(i64, f64)>,
    /// `(k, lambda_k(0))` with `|v_k| > zero_tol`.
    pub sigma1: Vec<(i64, f64)>,
    /// Zeros of `Q`, sorted.
    pub sigma2: Vec<f64>,
}

/// Splits the free points of `k_range` by whether `v_k` vanishes and finds
/// all zeros of `Q`.
pub fn classify(ev: &CharFunEval, k_range: RangeInclusive<i64>, zero_tol: f64) -> Classification {
    let bp = ev.spec().boundary();
    let mut out = Classification::default();
    for k in k_range {
        let lam = bp.free_eigenvalue(k);
        let vk = ev.band().get(&k).map_or(0.0, |v| v.norm());
        if vk > zero_tol {
            out.sigma1.push((k, lam));
        } else {
            out.sigma0.push((k, lam));
        }
    }
    out.sigma2 = q_zeros(ev, zero_tol);
    out
}

/// All zeros of `Q`: one strictly between consecutive poles and one beyond
/// the last pole on the side of the sign of `mu`. For `mu = 0` the poles
/// themselves are returned.
pub fn q_zeros(ev: &CharFunEval, zero_tol: f64) -> Vec<f64> {
    let mu = ev.mu();
    let bp = ev.spec().boundary();
    let poles: Vec<(f64, f64)> = ev
        .band()
        .iter()
        .filter(|(_, v)| v.norm() > zero_tol)
        .map(|(&k, v)| (bp.free_eigenvalue(k), v.norm_sqr()))
        .collect();
    if poles.is_empty() {
        return Vec::new();
    }
    if mu == 0.0 {
        // the zeros of Q tend to the poles as mu -> 0
        return poles.iter().map(|p| p.0).collect();
    }
    let total: f64 = poles.iter().map(|p| p.1).sum();
    let exact_band = matches!(ev.spec().potential().repr(), Repr::Coefficients(_));
    let q = |x: f64| {
        if exact_band {
            1.0 + mu * poles.iter().map(|&(a, w)| w / (a - x)).sum::<f64>()
        } else {
            // the projected band of a sampled potential is truncated; use Q = Delta / Delta0
            let z = Complex64::new(x, 0.0);
            (ev.delta_mu(z) / ev.delta0(z)).re
        }
    };
    let mut intervals: Vec<(f64, f64)> = poles.windows(2).map(|p| (p[0].0, p[1].0)).collect();
    let (first, last) = (poles[0].0, poles[poles.len() - 1].0);
    if mu > 0.0 {
        intervals.push((last, last + mu * total));
    } else {
        intervals.insert(0, (first + mu * total, first));
    }
    intervals.iter().map(|&(a, b)| roots::monotone_root(&q, a, b)).collect()
}

/// Eigenvalues in `window`, classified, and verified against the direct
/// roots of `Delta(mu, .)`.
pub fn assemble(ev: &CharFunEval, window: Window, tol: f64) -> Result<Spectrum> {
    assemble_with(ev, window, tol, DEFAULT_ZERO_TOL)
}

pub fn assemble_with(ev: &CharFunEval, window: Window, tol: f64, zero_tol: f64) -> Result<Spectrum> {
    let bp = ev.spec().boundary();
    // guard band so the comparison never hinges on roots at the window edge
    let guard = Window {
        lo: window.lo - 0.5,
        hi: window.hi + 0.5,
    };
    let cls = classify(ev, bp.indices_in(guard.lo, guard.hi), zero_tol);
    let mut expected: Vec<SpectrumEntry> = Vec::new();
    let mut used = vec![false; cls.sigma2.len()];
    for &(k, lam) in &cls.sigma0 {
        let hit = cls.sigma2.iter().position(|&s| (s - lam).abs() <= COINCIDENCE_TOL);
        if let Some(i) = hit {
            used[i] = true;
        }
        expected.push(SpectrumEntry {
            lambda: lam,
            multiplicity: if hit.is_some() { 2 } else { 1 },
            class: if hit.is_some() {
                SpectrumClass::Double
            } else {
                SpectrumClass::Sigma0
            },
            k_hint: k,
            at_edge: false,
        });
    }
    for (i, &s) in cls.sigma2.iter().enumerate() {
        if !used[i] && guard.contains(s) {
            expected.push(SpectrumEntry {
                lambda: s,
                multiplicity: 1,
                class: SpectrumClass::Sigma2,
                k_hint: bp.nearest_index(s),
                at_edge: false,
            });
        }
    }
    expected.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));

    let direct = direct_roots(ev, guard, tol);
    let matched = match_roots(&expected, &direct, guard)?;

    let entries = matched
        .into_iter()
        .filter(|e| window.contains(e.lambda) || (e.lambda - window.lo).abs() <= tol || (e.lambda - window.hi).abs() <= tol)
        .map(|mut e| {
            e.at_edge = (e.lambda - window.lo).abs() <= tol.max(1e-12) || (e.lambda - window.hi).abs() <= tol.max(1e-12);
            e
        })
        .collect();
    Ok(Spectrum::new(entries))
}

/// Roots of `Re Delta(mu, .)` over unit cells centred on free points.
pub fn direct_roots(ev: &CharFunEval, window: Window, tol: f64) -> Vec<Root> {
    let bp = ev.spec().boundary();
    let brackets: Vec<(f64, f64)> = bp
        .indices_in(window.lo - 1.0, window.hi + 1.0)
        .map(|k| {
            let c = bp.free_eigenvalue(k);
            (c - 0.5, c + 0.5)
        })
        .collect();
    let f = |x: f64| ev.delta_mu(Complex64::new(x, 0.0)).re;
    find_roots(&f, (window.lo, window.hi), &brackets, tol)
}

fn match_roots(expected: &[SpectrumEntry], direct: &[Root], guard: Window) -> Result<Vec<SpectrumEntry>> {
    let near_guard = |x: f64| (x - guard.lo).abs() < 1e-6 || (x - guard.hi).abs() < 1e-6;
    let mut out = Vec::with_capacity(expected.len());
    let (mut i, mut j) = (0, 0);
    while i < expected.len() || j < direct.len() {
        match (expected.get(i), direct.get(j)) {
            (Some(e), Some(d)) if (e.lambda - d.root).abs() <= MATCH_TOL => {
                if e.multiplicity != d.multiplicity {
                    return Err(Error::AssemblyMismatch(format!(
                        "multiplicity {} expected at {}, direct search found {} at {}",
                        e.multiplicity, e.lambda, d.multiplicity, d.root
                    )));
                }
                let lambda = if e.class == SpectrumClass::Double { e.lambda } else { d.root };
                out.push(SpectrumEntry { lambda, ..*e });
                i += 1;
                j += 1;
            }
            (Some(e), d) if d.map_or(true, |d| e.lambda < d.root) => {
                if !near_guard(e.lambda) {
                    return Err(Error::AssemblyMismatch(format!(
                        "{} eigenvalue {} has no matching root of the characteristic function",
                        e.class, e.lambda
                    )));
                }
                debug!("dropping unmatched guard-edge eigenvalue {}", e.lambda);
                i += 1;
            }
            (_, Some(d)) => {
                if !near_guard(d.root) {
                    return Err(Error::AssemblyMismatch(format!(
                        "root {} of the characteristic function is not explained by the classification",
                        d.root
                    )));
                }
                j += 1;
            }
            (None, None) => break,
            (Some(_), None) => unreachable!(),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfun::{free_spectrum, OperatorSpec};
    use crate::potential::{BoundaryParams, Coefficients, Potential};
    use std::f64::consts::FRAC_PI_4;

    fn bp() -> BoundaryParams {
        BoundaryParams::new(FRAC_PI_4, 0.0).unwrap()
    }

    fn eval(coeffs: &[(i64, f64)], mu: f64) -> CharFunEval {
        let c: Coefficients = coeffs.iter().map(|&(k, v)| (k, Complex64::new(v, 0.0))).collect();
        let p = Potential::from_coefficients(c, bp()).unwrap();
        CharFunEval::new(OperatorSpec::new(mu, p).unwrap())
    }

    #[test]
    fn single_mode_spectrum() {
        let ev = eval(&[(0, 1.0)], 0.5);
        let s = assemble(&ev, Window::new(-0.5, 2.5).unwrap(), DEFAULT_ROOT_TOL).unwrap();
        let l: Vec<f64> = s.entries().iter().map(|e| e.lambda).collect();
        assert_eq!(l.len(), 3, "{l:?}");
        for (g, w) in l.iter().zip([0.75, 1.25, 2.25]) {
            assert!((g - w).abs() < 1e-12);
        }
        assert_eq!(s.entries()[0].class, SpectrumClass::Sigma2);
        assert_eq!(s.entries()[1].class, SpectrumClass::Sigma0);
    }

    #[test]
    fn zero_coupling_gives_free_spectrum() {
        let ev = eval(&[(0, 1.0), (2, 0.5)], 0.0);
        let s = assemble(&ev, Window::new(-3.0, 3.0).unwrap(), DEFAULT_ROOT_TOL).unwrap();
        let free = free_spectrum(bp(), -3..=2);
        assert_eq!(s.len(), free.len());
        for (a, b) in s.entries().iter().zip(free.entries()) {
            assert!((a.lambda - b.lambda).abs() < 1e-12);
        }
    }

    #[test]
    fn engineered_double_point() {
        let ev = eval(&[(0, 1.0)], 1.0);
        let s = assemble(&ev, Window::new(-2.0, 3.0).unwrap(), DEFAULT_ROOT_TOL).unwrap();
        let d: Vec<&SpectrumEntry> = s.entries().iter().filter(|e| e.multiplicity == 2).collect();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].class, SpectrumClass::Double);
        assert!((d[0].lambda - 1.25).abs() < 1e-15);
    }

    #[test]
    fn two_mode_interlacing() {
        let ev = eval(&[(0, 0.6), (1, 0.8)], 0.7);
        let cls = classify(&ev, -3..=3, DEFAULT_ZERO_TOL);
        assert_eq!(cls.sigma1.len(), 2);
        assert_eq!(cls.sigma2.len(), 2);
        assert!(0.25 < cls.sigma2[0] && cls.sigma2[0] < 1.25 && 1.25 < cls.sigma2[1]);
    }

    #[test]
    fn agrees_with_oracle() {
        let ev = eval(&[(-2, 0.4), (-1, -0.3), (1, 0.5), (2, 0.2), (4, -0.6)], -3.1);
        let w = Window::new(-10.5, 10.5).unwrap();
        let s = assemble(&ev, w, DEFAULT_ROOT_TOL).unwrap();
        let oracle: Vec<f64> = matrix_oracle(&ev, -12..=12).unwrap().into_iter().filter(|x| w.contains(*x)).collect();
        let got = s.expanded();
        assert_eq!(got.len(), oracle.len());
        for (a, b) in got.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn class_names_round_trip() {
        for c in [SpectrumClass::Sigma0, SpectrumClass::Sigma2, SpectrumClass::Double] {
            assert_eq!(SpectrumClass::parse(c.as_str()), Some(c));
        }
    }
}
