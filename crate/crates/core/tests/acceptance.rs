//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use dirac_core::charfun::{delta0, CharFunEval, CharacteristicFunction, OperatorSpec};
use dirac_core::cli::{self, CommandKind, RunConfig};
use dirac_core::error::Error;
use dirac_core::generate;
use dirac_core::inverse::{
    classj_realize, classj_validate, recover_single, recover_two_spectra_cauchy, recover_two_spectra_fourier,
    residue_route_gap, SpectralDatum,
};
use dirac_core::io::read_spectrum;
use dirac_core::potential::{grid_nodes, star, BoundaryParams, Coefficients, Potential};
use dirac_core::spectrum::{
    assemble, classify, matrix_oracle, oracle_agreement, SpectrumClass, Window, DEFAULT_ROOT_TOL, DEFAULT_ZERO_TOL,
};
use num_complex::Complex64;
use rand::Rng;

const SUITE_SEED: u64 = 20;
const SPECS: usize = 50;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn quarter() -> BoundaryParams {
    BoundaryParams::new(FRAC_PI_4, 0.0).unwrap()
}

fn spec(coeffs: &[(i64, f64)], mu: f64) -> OperatorSpec {
    let v: Coefficients = coeffs.iter().map(|&(k, x)| (k, c(x, 0.0))).collect();
    OperatorSpec::new(mu, Potential::from_coefficients(v, quarter()).unwrap()).unwrap()
}

fn suite_specs() -> Vec<OperatorSpec> {
    let mut rng = generate::rng(SUITE_SEED);
    (0..SPECS)
        .map(|_| generate::random_bandlimited(&mut rng, generate::MAX_MODES, generate::MAX_MU))
        .collect()
}

fn window_for(s: &OperatorSpec) -> Window {
    generate::covering_window(&[s])
}

fn k_range_for(s: &OperatorSpec, w: Window) -> std::ops::RangeInclusive<i64> {
    let r = s.boundary().indices_in(w.lo - 2.0, w.hi + 2.0);
    (*r.start())..=(*r.end())
}

fn free_spectrum() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("free.json");
    std::fs::write(
        &spec_path,
        r#"{"mu": 0.0, "alpha": 0.7853981633974483, "beta": 0.0,
            "potential": {"type": "fourier", "coeffs": [{"k": 0, "re": 1.0}]}}"#,
    )
    .unwrap();
    let out: PathBuf = dir.path().join("free.csv");
    let config = RunConfig {
        command: CommandKind::Forward,
        inputs: vec![spec_path],
        window: Window::new(-12.25, 12.75).unwrap(),
        k_range: -14..=14,
        output: out.clone(),
        ..RunConfig::default()
    };
    let start = Instant::now();
    let code = cli::run(&config);
    let elapsed = start.elapsed();
    if code != 0 {
        return outcome(false, format!("forward exited with {code}"));
    }
    let s = read_spectrum(std::fs::File::open(&out).unwrap()).unwrap();
    let ks: Vec<i64> = s.entries().iter().map(|e| e.k_hint).collect();
    let err = s
        .entries()
        .iter()
        .map(|e| (e.lambda - (e.k_hint as f64 + 0.25)).abs())
        .fold(0.0, f64::max);
    let complete = ks == (-12..=12).collect::<Vec<_>>();
    outcome(
        complete && err <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("{} eigenvalues, max error {err:.2e}, {:.3} s", ks.len(), elapsed.as_secs_f64()),
    )
}

/// Sampled potential `v1 = a + b x + e^{i d x}`, `v2 = conj(a) cos(2x) - b x^2 / 4`.
fn random_grid_potential<R: Rng>(rng: &mut R) -> Potential {
    let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let b = rng.gen_range(-1.0..1.0);
    let d = rng.gen_range(-3.0..3.0);
    let xs = grid_nodes(512);
    let v1 = xs.iter().map(|&x| a + b * x + Complex64::from_polar(1.0, d * x)).collect();
    let v2 = xs.iter().map(|&x| a.conj() * (2.0 * x).cos() - b * x * x / 4.0).collect();
    Potential::from_grid(v1, v2, generate::random_boundary(rng)).unwrap()
}

fn lemma_suite() -> Outcome {
    let mut rng = generate::rng(SUITE_SEED + 1);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let v = if i % 2 == 0 {
            generate::random_bandlimited(&mut rng, generate::MAX_MODES, 1.0).potential().clone()
        } else {
            random_grid_potential(&mut rng)
        };
        let t = v.transforms();
        let lam = c(rng.gen_range(-10.0..10.0), rng.gen_range(-3.0..3.0));
        let pairs: [(&dyn Fn(Complex64) -> Complex64, &dyn Fn(Complex64) -> Complex64); 2] = [
            (&|z| t.phi_plus(z), &|z| t.vtilde_plus(z)),
            (&|z| t.phi_minus(z), &|z| t.vtilde_minus(z)),
        ];
        for (phi, vt) in pairs {
            let left = phi(lam) + star(phi, lam);
            let right = vt(lam) * star(vt, lam);
            worst = worst.max((left - right).norm() / (1.0 + vt(lam).norm_sqr()));
        }
    }
    outcome(worst <= 1e-10, format!("100 pairs (50 sampled potentials), max relative gap {worst:.2e}"))
}

fn q_identity(specs: &[OperatorSpec]) -> Outcome {
    let mut rng = generate::rng(SUITE_SEED + 2);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut n = 0;
    for s in specs {
        let ev = CharFunEval::new(s.clone());
        let bp = s.boundary();
        let mut taken = 0;
        while taken < 20 {
            let x = rng.gen_range(-10.5..10.5);
            // away from the zeros of Delta0 so the ratio is well conditioned
            if (x - bp.free_eigenvalue(bp.nearest_index(x))).abs() < 0.05 {
                continue;
            }
            let z = c(x, 0.0);
            let q = ev.q_series(z).unwrap();
            let ratio = ev.delta_mu(z) / ev.delta0(z);
            worst = worst.max((ratio - q).norm() / (1.0 + q.norm()));
            taken += 1;
            n += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(30),
        format!("{n} points on {} specs, max scaled gap {worst:.2e}, {:.2} s", specs.len(), elapsed.as_secs_f64()),
    )
}

fn oracle_equivalence(specs: &[OperatorSpec]) -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let ev = CharFunEval::new(s.clone());
        let w = window_for(s);
        let result = assemble(&ev, w, DEFAULT_ROOT_TOL)
            .and_then(|sp| Ok((sp, matrix_oracle(&ev, k_range_for(s, w))?)));
        match result {
            Ok((sp, oracle)) => match oracle_agreement(&sp, &oracle, w) {
                Some(gap) => {
                    worst = worst.max(gap);
                    if gap > 1e-9 {
                        failures.push(format!("spec {i}: gap {gap:.2e}"));
                    }
                }
                None => failures.push(format!("spec {i}: eigenvalue count differs")),
            },
            Err(e) => failures.push(format!("spec {i}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("max gap {worst:.2e} over {} specs; failures {failures:?}", specs.len()),
    )
}

fn interlacing(specs: &[OperatorSpec]) -> Outcome {
    let mut bad = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let ev = CharFunEval::new(s.clone());
        let cls = classify(&ev, -20..=20, DEFAULT_ZERO_TOL);
        let poles: Vec<f64> = cls.sigma1.iter().map(|p| p.1).collect();
        let zeros = &cls.sigma2;
        let ok = zeros.len() == poles.len()
            && zeros.iter().enumerate().all(|(j, &z)| {
                if ev.mu() > 0.0 {
                    poles[j] < z && poles.get(j + 1).is_none_or(|&p| z < p)
                } else {
                    z < poles[j] && (j == 0 || poles[j - 1] < z)
                }
            });
        if !ok {
            bad.push(i);
        }
    }
    outcome(bad.is_empty(), format!("{} specs, violations at {bad:?}", specs.len()))
}

fn single_inverse(specs: &[OperatorSpec]) -> Outcome {
    let mut mu_gap = 0.0f64;
    let mut v_gap = 0.0f64;
    let mut route_gap = 0.0f64;
    let mut errors = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let ev = CharFunEval::new(s.clone());
        let mut run = || -> Result<(), Error> {
            let sp = assemble(&ev, window_for(s), DEFAULT_ROOT_TOL)?;
            let datum = SpectralDatum::new(sp, s.boundary())?;
            let r = recover_single(&datum)?;
            mu_gap = mu_gap.max((r.mu - s.mu()).abs() / s.mu().abs());
            for (k, v) in ev.band() {
                let got = r.coefficients.get(k).copied().unwrap_or(0.0);
                v_gap = v_gap.max((got - v.norm()).abs());
            }
            route_gap = route_gap.max(residue_route_gap(&datum)?);
            Ok(())
        };
        if let Err(e) = run() {
            errors.push(format!("spec {i}: {e}"));
        }
    }
    outcome(
        errors.is_empty() && mu_gap <= 1e-6 && v_gap <= 1e-6 && route_gap <= 1e-6,
        format!("mu rel gap {mu_gap:.2e}, |v_k| gap {v_gap:.2e}, residue routes {route_gap:.2e}; errors {errors:?}"),
    )
}

fn two_spectra() -> Outcome {
    let mut rng = generate::rng(SUITE_SEED + 3);
    let start = Instant::now();
    let (mut f_gap, mut q_gap) = (0.0f64, 0.0f64);
    let mut errors = Vec::new();
    for i in 0..20 {
        let a = generate::random_real_mixed(&mut rng, 3.0);
        let run = || -> Result<(f64, f64), Error> {
            let b = generate::shifted_spec(&a, 1.0)?;
            let w = generate::covering_window(&[&a, &b]);
            let datum = |s: &OperatorSpec| SpectralDatum::new(assemble(&CharFunEval::new(s.clone()), w, DEFAULT_ROOT_TOL)?, s.boundary());
            let (da, db) = (datum(&a)?, datum(&b)?);
            let truth = generate::real_coefficients(&a)?;
            let gap = |r: &dirac_core::inverse::RecoveredOperator| {
                let keys = truth.keys().chain(r.coefficients.keys());
                let v = keys
                    .map(|k| (truth.get(k).copied().unwrap_or(0.0) - r.coefficients.get(k).copied().unwrap_or(0.0)).abs())
                    .fold(0.0, f64::max);
                v.max((r.mu - a.mu()).abs())
            };
            let f = recover_two_spectra_fourier(&da, &db, 1.0)?;
            let q = recover_two_spectra_cauchy(&da, &db, 1.0)?;
            Ok((gap(&f), gap(&q)))
        };
        match run() {
            Ok((f, q)) => {
                f_gap = f_gap.max(f);
                q_gap = q_gap.max(q);
            }
            Err(e) => errors.push(format!("case {i}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        errors.is_empty() && f_gap <= 1e-6 && q_gap <= 1e-4 && elapsed < Duration::from_secs(60),
        format!(
            "fourier gap {f_gap:.2e}, cauchy gap {q_gap:.2e}, {:.2} s; errors {errors:?}",
            elapsed.as_secs_f64()
        ),
    )
}

/// `D u = B u' + mu <u, v> v` with fourth-order differences and the
/// trapezoid rule.
fn operator_residual(ev: &CharFunEval, xs: &[f64], u: &[(Complex64, Complex64)], lam: f64) -> f64 {
    let n = xs.len() - 1;
    let h = xs[1] - xs[0];
    let d = |f: &dyn Fn(usize) -> Complex64, i: usize| -> Complex64 {
        if i >= 2 && i + 2 <= n {
            (f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) / (12.0 * h)
        } else if i < 2 {
            (-25.0 * f(i) + 48.0 * f(i + 1) - 36.0 * f(i + 2) + 16.0 * f(i + 3) - 3.0 * f(i + 4)) / (12.0 * h)
        } else {
            (25.0 * f(i) - 48.0 * f(i - 1) + 36.0 * f(i - 2) - 16.0 * f(i - 3) + 3.0 * f(i - 4)) / (12.0 * h)
        }
    };
    let v: Vec<(Complex64, Complex64)> = xs.iter().map(|&x| ev.spec().potential().eval(x)).collect();
    let ip: Vec<Complex64> = u.iter().zip(&v).map(|(a, b)| a.0 * b.0.conj() + a.1 * b.1.conj()).collect();
    let trap = h * (ip.iter().sum::<Complex64>() - 0.5 * (ip[0] + ip[n]));
    let inner = trap * ev.mu();
    let mut res = 0.0;
    let mut norm = 0.0;
    for i in 0..=n {
        let du1 = d(&|j| u[j].1, i) + inner * v[i].0;
        let du2 = -d(&|j| u[j].0, i) + inner * v[i].1;
        res += (du1 - lam * u[i].0).norm_sqr() + (du2 - lam * u[i].1).norm_sqr();
        norm += u[i].0.norm_sqr() + u[i].1.norm_sqr();
    }
    (res / norm).sqrt()
}

fn eigenfunctions() -> Outcome {
    let s = spec(&[(0, 1.0)], 0.5);
    let ev = CharFunEval::new(s.clone());
    let bp = s.boundary();
    let xs = grid_nodes(2048);
    let sp = assemble(&ev, Window::new(-10.5, 10.5).unwrap(), DEFAULT_ROOT_TOL).unwrap();
    let (mut worst_res, mut worst_bc, mut fallbacks) = (0.0f64, 0.0f64, 0);
    for e in sp.entries() {
        let u = match ev.eigenfunction(e.lambda, &xs) {
            Ok(u) => u,
            Err(Error::TrivialEigenfunction(_)) => {
                // unmoved free eigenvalue: the free eigenfunction
                fallbacks += 1;
                xs.iter()
                    .map(|&x| {
                        let (a, b) = bp.basis(e.k_hint, x);
                        (c(a, 0.0), c(b, 0.0))
                    })
                    .collect()
            }
            Err(err) => return outcome(false, format!("lambda {}: {err}", e.lambda)),
        };
        worst_res = worst_res.max(operator_residual(&ev, &xs, &u, e.lambda));
        let size = u.iter().map(|p| p.0.norm_sqr() + p.1.norm_sqr()).sum::<f64>().sqrt() * (PI / 2048.0).sqrt();
        let n = xs.len() - 1;
        let left = (u[0].0 * bp.alpha().sin() + u[0].1 * bp.alpha().cos()).norm();
        let right = (u[n].0 * bp.beta().sin() + u[n].1 * bp.beta().cos()).norm();
        worst_bc = worst_bc.max(left.max(right) / size);
    }
    outcome(
        worst_res <= 1e-4 && worst_bc <= 1e-8,
        format!(
            "{} eigenvalues ({fallbacks} free), max residual {worst_res:.2e}, boundary {worst_bc:.2e}",
            sp.len()
        ),
    )
}

struct ShiftedSine(f64);

impl CharacteristicFunction for ShiftedSine {
    fn eval(&self, z: Complex64) -> Complex64 {
        delta0(quarter(), z) + self.0
    }
    fn boundary(&self) -> BoundaryParams {
        quarter()
    }
}

fn class_j(specs: &[OperatorSpec]) -> Outcome {
    let mut rejected = Vec::new();
    let mut gap = 0.0f64;
    let mut errors = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let ev = CharFunEval::new(s.clone());
        let w = window_for(s);
        let report = classj_validate(&ev, w);
        if !report.verdict() {
            rejected.push(format!("spec {i}: {:?}", report.failed()));
            continue;
        }
        match classj_realize(&ev, w) {
            Ok(r) => {
                gap = gap.max((r.mu() - s.mu()).abs());
                let got: BTreeMap<i64, f64> = r.potential().coefficients(-20..=20).iter().map(|(&k, v)| (k, v.norm())).collect();
                for (k, v) in ev.band() {
                    gap = gap.max((got.get(k).copied().unwrap_or(0.0) - v.norm()).abs());
                }
            }
            Err(e) => errors.push(format!("spec {i}: {e}")),
        }
    }
    let non_member = classj_validate(&ShiftedSine(10.0), Window::new(-10.5, 10.5).unwrap());
    let flagged = non_member.failed();
    outcome(
        rejected.is_empty() && errors.is_empty() && gap <= 1e-7 && flagged == vec!["iii"],
        format!(
            "{} forward members, realize gap {gap:.2e}; sin + 10 fails {flagged:?}; rejected {rejected:?}; errors {errors:?}",
            specs.len()
        ),
    )
}

fn double_point() -> Outcome {
    // lambda_0(0) + mu = 1.25 = lambda_1(0), which stays in the spectrum
    let s = spec(&[(0, 1.0)], 1.0);
    let sp = assemble(&CharFunEval::new(s.clone()), Window::new(-10.5, 10.5).unwrap(), DEFAULT_ROOT_TOL).unwrap();
    let doubles: Vec<(f64, u8)> = sp
        .entries()
        .iter()
        .filter(|e| e.class == SpectrumClass::Double)
        .map(|e| (e.lambda, e.multiplicity))
        .collect();
    let reported = doubles.len() == 1 && (doubles[0].0 - 1.25).abs() < 1e-12 && doubles[0].1 == 2;
    let rejected = match SpectralDatum::new(sp, s.boundary()).and_then(|d| recover_single(&d)) {
        Err(Error::DoublePoint(l)) => (l - 1.25).abs() < 1e-12,
        _ => false,
    };
    outcome(reported && rejected, format!("doubles {doubles:?}, inverse rejects: {rejected}"))
}

fn main() {
    let specs = suite_specs();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 free spectrum", Box::new(free_spectrum)),
        ("2 transform identity", Box::new(lemma_suite)),
        ("3 Q ratio identity", Box::new(|| q_identity(&specs))),
        ("4 matrix oracle", Box::new(|| oracle_equivalence(&specs))),
        ("5 interlacing", Box::new(|| interlacing(&specs))),
        ("6 single-spectrum inverse", Box::new(|| single_inverse(&specs))),
        ("7 two-spectra inverse", Box::new(two_spectra)),
        ("8 eigenfunction residual", Box::new(eigenfunctions)),
        ("9 class membership", Box::new(|| class_j(&specs))),
        ("10 double point", Box::new(double_point)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let o = check();
        println!(
            "[{}] {name}: {} ({:.2} s)",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
