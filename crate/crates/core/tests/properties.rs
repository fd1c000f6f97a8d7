use std::f64::consts::PI;

use dirac_core::charfun::{CharFunEval, OperatorSpec};
use dirac_core::io::{read_spectrum, write_spectrum};
use dirac_core::potential::{star, BoundaryParams, Coefficients, Potential, DEFAULT_GRID};
use dirac_core::spectrum::{assemble, Window, DEFAULT_ROOT_TOL};
use num_complex::Complex64;
use proptest::prelude::*;

fn boundary() -> impl Strategy<Value = BoundaryParams> {
    (0.0..PI, 0.0..PI)
        .prop_filter("non-degenerate", |(a, b)| (b - a).sin().abs() > 0.1)
        .prop_map(|(a, b)| BoundaryParams::new(a, b).unwrap())
}

fn coefficients() -> impl Strategy<Value = Coefficients> {
    prop::collection::btree_map(-4i64..=4, (0.05..1.0f64, 0.0..2.0 * PI), 1..=6)
        .prop_map(|m| m.into_iter().map(|(k, (r, t))| (k, Complex64::from_polar(r, t))).collect())
}

fn potential() -> impl Strategy<Value = Potential> {
    (coefficients(), boundary()).prop_map(|(c, bp)| Potential::from_coefficients(c, bp).unwrap())
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn autocorrelation_identity(p in potential(), lam in complex()) {
        let t = p.transforms();
        let l = t.phi_plus(lam) + star(|z| t.phi_plus(z), lam);
        let r = t.vtilde_plus(lam) * star(|z| t.vtilde_plus(z), lam);
        prop_assert!((l - r).norm() <= 1e-10 * (1.0 + t.vtilde_plus(lam).norm_sqr()));
        let l = t.phi_minus(lam) + star(|z| t.phi_minus(z), lam);
        let r = t.vtilde_minus(lam) * star(|z| t.vtilde_minus(z), lam);
        prop_assert!((l - r).norm() <= 1e-10 * (1.0 + t.vtilde_minus(lam).norm_sqr()));
    }

    #[test]
    fn parseval(p in potential()) {
        let sum: f64 = p.coefficients(-30..=30).values().map(|v| v.norm_sqr()).sum();
        prop_assert!((sum - p.norm_sq()).abs() <= 1e-8 * p.norm_sq());
    }

    #[test]
    fn grid_round_trip(p in potential()) {
        let g = p.to_grid(DEFAULT_GRID).unwrap();
        let band = p.band().unwrap();
        let back = g.coefficients(band.clone());
        let Some(dirac_core::potential::Repr::Coefficients(orig)) = Some(p.repr().clone()) else { unreachable!() };
        for k in band {
            let want = orig.get(&k).copied().unwrap_or_default();
            prop_assert!((back[&k] - want).norm() < 1e-10, "k = {k}: {} vs {want}", back[&k]);
        }
    }

    #[test]
    fn conjugate_symmetry(p in potential(), mu in -5.0..5.0f64, lam in complex()) {
        let ev = CharFunEval::new(OperatorSpec::new(mu, p).unwrap());
        let d = ev.delta_mu(lam);
        prop_assert!((ev.delta_mu(lam.conj()) - d.conj()).norm() <= 1e-10 * (1.0 + d.norm()));
        let x = Complex64::new(lam.re, 0.0);
        let dx = ev.delta_mu(x);
        prop_assert!(dx.im.abs() <= 1e-12 * (1.0 + dx.norm()));
    }

    #[test]
    fn real_part_of_r(p in potential(), x in -10.0..10.0f64) {
        let ev = CharFunEval::new(OperatorSpec::new(1.0, p).unwrap());
        let z = Complex64::new(x, 0.0);
        let v2 = ev.transforms().big_v(z).norm_sqr();
        prop_assert!((2.0 * ev.big_r(z).re - v2).abs() <= 1e-9 * (1.0 + v2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectrum_csv_is_lossless(p in potential(), mu in -3.0..3.0f64) {
        let ev = CharFunEval::new(OperatorSpec::new(mu, p).unwrap());
        let s = assemble(&ev, Window::new(-6.5, 6.5).unwrap(), DEFAULT_ROOT_TOL).unwrap();
        let mut buf = Vec::new();
        write_spectrum(&mut buf, &s).unwrap();
        let back = read_spectrum(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), s.len());
        for (a, b) in back.entries().iter().zip(s.entries()) {
            prop_assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
            prop_assert_eq!(a.class, b.class);
            prop_assert_eq!(a.multiplicity, b.multiplicity);
        }
    }
}
