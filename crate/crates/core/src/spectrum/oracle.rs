//! Independent eigenvalue oracle: the rank-one update
//! `diag(lambda_k(0)) + mu |v| |v|^T` restricted to the band.

use std::ops::RangeInclusive;

use crate::charfun::CharFunEval;
use crate::error::{Error, Result};
use crate::potential::Repr;
use crate::spectrum::{Spectrum, Window};

/// Sorted eigenvalues of the operator for free indices in `k_range`, with
/// every band mode included even if it falls outside the range.
pub fn matrix_oracle(ev: &CharFunEval, k_range: RangeInclusive<i64>) -> Result<Vec<f64>> {
    let coeffs = match ev.spec().potential().repr() {
        Repr::Coefficients(c) => c,
        Repr::Grid { .. } => {
            return Err(Error::InvalidPotential(
                "matrix oracle needs a coefficient potential".into(),
            ))
        }
    };
    let bp = ev.spec().boundary();
    let mu = ev.mu();
    let mut diag = Vec::new();
    let mut weights = Vec::new();
    let mut out = Vec::new();
    for k in k_range.clone() {
        if !coeffs.contains_key(&k) {
            out.push(bp.free_eigenvalue(k));
        }
    }
    for (&k, v) in coeffs {
        let z2 = v.norm_sqr();
        if z2 == 0.0 || mu == 0.0 {
            out.push(bp.free_eigenvalue(k));
        } else {
            diag.push(bp.free_eigenvalue(k));
            weights.push(z2);
        }
    }
    out.extend(secular_roots(mu, &diag, &weights));
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Largest per-eigenvalue gap between an assembled spectrum and the oracle
/// values inside `window`; `None` when the counts differ.
pub fn oracle_agreement(spectrum: &Spectrum, oracle: &[f64], window: Window) -> Option<f64> {
    let got = spectrum.expanded();
    let want: Vec<f64> = oracle.iter().copied().filter(|x| window.contains(*x)).collect();
    if got.len() != want.len() {
        return None;
    }
    Some(got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Roots of `1 + mu sum w_j / (d_j - x)` for increasing `d`, positive `w`.
pub fn secular_roots(mu: f64, d: &[f64], w: &[f64]) -> Vec<f64> {
    if d.is_empty() || mu == 0.0 {
        return d.to_vec();
    }
    let total: f64 = w.iter().sum();
    let secular = |x: f64| 1.0 + mu * d.iter().zip(w).map(|(&dj, &wj)| wj / (dj - x)).sum::<f64>();
    let mut intervals: Vec<(f64, f64)> = d.windows(2).map(|p| (p[0], p[1])).collect();
    if mu > 0.0 {
        intervals.push((d[d.len() - 1], d[d.len() - 1] + mu * total));
    } else {
        intervals.insert(0, (d[0] + mu * total, d[0]));
    }
    intervals
        .into_iter()
        .map(|(a, b)| {
            // secular is increasing in x for mu > 0 and decreasing for mu < 0
            let (mut lo, mut hi) = (a, b);
            loop {
                let mid = lo + 0.5 * (hi - lo);
                if mid <= lo || mid >= hi {
                    break mid;
                }
                let s = secular(mid);
                if s == 0.0 {
                    break mid;
                }
                if (s < 0.0) == (mu > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        })
        .collect()
}
