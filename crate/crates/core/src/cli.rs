//! Command-line front end: `forward`, `inverse`, `validate`, `roundtrip` and
//! `sample`.
//!
//! Exit codes: 0 success, 2 malformed input, 3 oracle or assembly mismatch,
//! 4 pipeline failure.

use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, warn};
use num_complex::Complex64;
use serde::Serialize;

use crate::charfun::{CharFunEval, OperatorSpec};
use crate::error::Error;
use crate::generate;
use crate::inverse::{
    classj_validate, classj_validate_samples, recover_single, recover_two_spectra_cauchy, recover_two_spectra_fourier,
    RecoveredOperator, SpectralDatum,
};
use crate::io::{read_spec, read_spectrum, read_table, write_spectrum, write_table, RecoveredJson};
use crate::potential::{BoundaryParams, Repr};
use crate::spectrum::{
    assemble, classify, matrix_oracle, oracle_agreement, Spectrum, SpectrumClass, Window, DEFAULT_ROOT_TOL,
    DEFAULT_ZERO_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_PIPELINE: i32 = 4;

/// Largest tolerated gap between assembled and oracle eigenvalues.
pub const ORACLE_TOL: f64 = 1e-9;
/// Round-trip tolerance on eigenvalues.
pub const ROUNDTRIP_TOL: f64 = 1e-8;
/// Agreement expected between the two two-spectra methods.
pub const METHOD_GAP_TOL: f64 = 1e-4;

#[derive(Parser, Debug)]
#[command(name = "dirac", version, about = "Spectral problems for a Dirac operator with a rank-one potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classified spectrum of an operator spec (CSV) plus a JSON sidecar.
    Forward {
        spec: PathBuf,
        #[arg(long, default_value = "-10.5:10.5", value_parser = parse_window, allow_hyphen_values = true)]
        window: Window,
        #[arg(long = "k-range", default_value = "-12:12", value_parser = parse_k_range, allow_hyphen_values = true)]
        k_range: RangeInclusive<i64>,
        #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
        tol: f64,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Recover mu and v from one spectrum, or from two with `--shift`.
    Inverse {
        #[arg(num_args = 1..=2, required = true)]
        spectra: Vec<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<f64>,
        #[arg(long, value_enum, default_value_t = Method::Fourier)]
        method: Method,
        #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        /// Largest accepted consistency residual (scaled by max(1, |mu|)).
        #[arg(long = "weight-tol", default_value_t = 1e-6)]
        weight_tol: f64,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Class membership report for a spec or a table of real samples.
    Validate {
        input: PathBuf,
        #[arg(long, default_value = "-10.5:10.5", value_parser = parse_window, allow_hyphen_values = true)]
        window: Window,
        /// Boundary angles for sample tables.
        #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Forward, inverse and forward again on seeded random specs.
    Roundtrip {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Table of lambda, Delta0, Delta, Q, |V|^2 and 2 Re R.
    Sample {
        spec: PathBuf,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        #[arg(long, default_value = "-10.5:10.5", value_parser = parse_window, allow_hyphen_values = true)]
        window: Window,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fourier,
    Cauchy,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Forward,
    Inverse,
    Validate,
    Roundtrip,
    Sample,
}

/// Flattened settings of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub inputs: Vec<PathBuf>,
    pub window: Window,
    pub k_range: RangeInclusive<i64>,
    pub root_tol: f64,
    pub weight_tol: f64,
    pub method: Method,
    pub output: PathBuf,
    pub seed: u64,
    pub count: usize,
    pub shift: Option<f64>,
    pub grid: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::Forward,
            inputs: Vec::new(),
            window: Window { lo: -10.5, hi: 10.5 },
            k_range: -12..=12,
            root_tol: DEFAULT_ROOT_TOL,
            weight_tol: 1e-6,
            method: Method::Fourier,
            output: PathBuf::from("-"),
            seed: 0,
            count: 1,
            shift: None,
            grid: 2001,
            alpha: FRAC_PI_4,
            beta: 0.0,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let d = RunConfig::default();
        match cli.command {
            Command::Forward { spec, window, k_range, tol, output } => RunConfig {
                command: CommandKind::Forward,
                inputs: vec![spec],
                window,
                k_range,
                root_tol: tol,
                output,
                ..d
            },
            Command::Inverse { spectra, shift, method, alpha, beta, weight_tol, output } => RunConfig {
                command: CommandKind::Inverse,
                inputs: spectra,
                shift,
                method,
                alpha,
                beta,
                weight_tol,
                output,
                ..d
            },
            Command::Validate { input, window, alpha, beta } => RunConfig {
                command: CommandKind::Validate,
                inputs: vec![input],
                window,
                alpha,
                beta,
                ..d
            },
            Command::Roundtrip { seed, count, output } => RunConfig {
                command: CommandKind::Roundtrip,
                seed,
                count,
                output,
                ..d
            },
            Command::Sample { spec, grid, window, output } => RunConfig {
                command: CommandKind::Sample,
                inputs: vec![spec],
                grid,
                window,
                output,
                ..d
            },
        }
    }
}

impl RunConfig {
    /// Tolerances positive; `k_range` covers every free eigenvalue within 1
    /// of the window.
    pub fn check(&self, bp: BoundaryParams) -> Result<(), Error> {
        if !(self.root_tol > 0.0 && self.weight_tol > 0.0) {
            return Err(Error::Parse("tolerances must be positive".into()));
        }
        let need = bp.indices_in(self.window.lo - 1.0, self.window.hi + 1.0);
        if need.start() < self.k_range.start() || need.end() > self.k_range.end() {
            return Err(Error::Parse(format!(
                "k-range {}:{} does not cover the window [{}, {}] (needs {}:{})",
                self.k_range.start(),
                self.k_range.end(),
                self.window.lo,
                self.window.hi,
                need.start(),
                need.end()
            )));
        }
        Ok(())
    }
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Window::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_k_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok(lo..=hi)
}

#[derive(Debug)]
struct Failure {
    code: i32,
    error: Error,
}

fn input_err(e: impl Into<Error>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        error: e.into(),
    }
}

fn pipeline_err(e: Error) -> Failure {
    let code = match e {
        Error::AssemblyMismatch(_) => EXIT_MISMATCH,
        Error::Io(_) => EXIT_INPUT,
        _ => EXIT_PIPELINE,
    };
    Failure { code, error: e }
}

fn open_input(path: &Path) -> Result<Box<dyn Read>, Failure> {
    if path == Path::new("-") {
        Ok(Box::new(io::stdin().lock()))
    } else {
        Ok(Box::new(BufReader::new(File::open(path).map_err(|e| {
            input_err(Error::Parse(format!("{}: {e}", path.display())))
        })?)))
    }
}

fn open_output(path: &Path) -> Result<Box<dyn Write>, Failure> {
    if path == Path::new("-") {
        Ok(Box::new(io::stdout().lock()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path).map_err(input_err)?)))
    }
}

fn load_spec(path: &Path) -> Result<OperatorSpec, Failure> {
    read_spec(open_input(path)?).map_err(input_err)
}

fn load_spectrum(path: &Path) -> Result<Spectrum, Failure> {
    read_spectrum(open_input(path)?).map_err(input_err)
}

/// Parses arguments from the process, runs, and returns the exit code.
pub fn main_entry() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = std::env::var("DIRAC_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            warn!("DIRAC_THREADS ignored: {e}");
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    run(&RunConfig::from(cli))
}

pub fn run(config: &RunConfig) -> i32 {
    let result = match config.command {
        CommandKind::Forward => cmd_forward(config),
        CommandKind::Inverse => cmd_inverse(config),
        CommandKind::Validate => cmd_validate(config),
        CommandKind::Roundtrip => cmd_roundtrip(config),
        CommandKind::Sample => cmd_sample(config),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            error!("exit {}: {}", f.code, f.error);
            f.code
        }
    }
}

#[derive(Debug, Serialize)]
struct Counts {
    sigma0: usize,
    sigma1: usize,
    sigma2: usize,
    double: usize,
}

#[derive(Debug, Serialize)]
struct Sidecar {
    #[serde(rename = "A_constant")]
    a_constant: f64,
    counts: Counts,
    /// `None` for sampled potentials, which have no matrix oracle.
    oracle_agreement: Option<f64>,
    window: [f64; 2],
    k_range: [i64; 2],
}

fn cmd_forward(config: &RunConfig) -> Result<i32, Failure> {
    let spec = load_spec(&config.inputs[0])?;
    config.check(spec.boundary()).map_err(input_err)?;
    let ev = CharFunEval::new(spec);
    let spectrum = assemble(&ev, config.window, config.root_tol).map_err(pipeline_err)?;
    let bp = ev.spec().boundary();
    let cls = classify(&ev, bp.indices_in(config.window.lo, config.window.hi), DEFAULT_ZERO_TOL);
    let mut code = EXIT_OK;
    let oracle_gap = match ev.spec().potential().repr() {
        Repr::Coefficients(_) => {
            let oracle = matrix_oracle(&ev, config.k_range.clone()).map_err(pipeline_err)?;
            match oracle_agreement(&spectrum, &oracle, config.window) {
                Some(gap) => {
                    if gap > ORACLE_TOL {
                        error!("oracle disagreement {gap:.3e} exceeds {ORACLE_TOL:e}");
                        code = EXIT_MISMATCH;
                    }
                    Some(gap)
                }
                None => {
                    error!("assembled spectrum and oracle differ in eigenvalue count");
                    code = EXIT_MISMATCH;
                    None
                }
            }
        }
        Repr::Grid { .. } => None,
    };
    let sidecar = Sidecar {
        a_constant: ev.delta_mu(Complex64::new(0.0, 0.0)).re,
        counts: Counts {
            sigma0: spectrum.count(SpectrumClass::Sigma0),
            sigma1: cls.sigma1.len(),
            sigma2: spectrum.count(SpectrumClass::Sigma2),
            double: spectrum.count(SpectrumClass::Double),
        },
        oracle_agreement: oracle_gap,
        window: [config.window.lo, config.window.hi],
        k_range: [*config.k_range.start(), *config.k_range.end()],
    };
    let mut out = open_output(&config.output)?;
    write_spectrum(&mut out, &spectrum).map_err(pipeline_err)?;
    out.flush().map_err(input_err)?;
    let side = serde_json::to_string_pretty(&sidecar).map_err(input_err)?;
    if config.output == Path::new("-") {
        eprintln!("{side}");
    } else {
        std::fs::write(config.output.with_extension("json"), side + "\n").map_err(input_err)?;
    }
    Ok(code)
}

#[derive(Debug, Serialize)]
struct BothReport {
    fourier: RecoveredJson,
    cauchy: RecoveredJson,
    mu_gap: f64,
    max_coefficient_gap: f64,
}

/// Residuals checked against `weight_tol`.
const CHECKED_RESIDUALS: [&str; 2] = ["residue_route_gap", "weight_fit"];

fn check_residuals(r: &RecoveredOperator, weight_tol: f64) -> Result<(), Failure> {
    for name in CHECKED_RESIDUALS {
        if let Some(&x) = r.residuals.get(name) {
            if x > weight_tol * r.mu.abs().max(1.0) {
                return Err(pipeline_err(Error::InconsistentData(format!(
                    "residual {name} = {x:.3e} exceeds weight tolerance {weight_tol:e}"
                ))));
            }
        }
    }
    for w in &r.warnings {
        warn!("{w}");
    }
    Ok(())
}

fn coefficient_gap(a: &RecoveredOperator, b: &RecoveredOperator) -> f64 {
    a.coefficients
        .keys()
        .chain(b.coefficients.keys())
        .map(|k| {
            let x = a.coefficients.get(k).copied().unwrap_or(0.0);
            let y = b.coefficients.get(k).copied().unwrap_or(0.0);
            (x - y).abs()
        })
        .fold(0.0, f64::max)
}

fn cmd_inverse(config: &RunConfig) -> Result<i32, Failure> {
    let bp = BoundaryParams::new(config.alpha, config.beta).map_err(input_err)?;
    if config.weight_tol <= 0.0 {
        return Err(input_err(Error::Parse("weight tolerance must be positive".into())));
    }
    let data = config
        .inputs
        .iter()
        .map(|p| load_spectrum(p))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|s| SpectralDatum::new(s, bp).map_err(pipeline_err))
        .collect::<Result<Vec<_>, _>>()?;
    let json = match (&data[..], config.shift) {
        ([a], None) => {
            let r = recover_single(a).map_err(pipeline_err)?;
            check_residuals(&r, config.weight_tol)?;
            serde_json::to_string_pretty(&RecoveredJson::from(&r))
        }
        ([_], Some(_)) => return Err(input_err(Error::Parse("--shift needs two spectra".into()))),
        ([_, _], None) => return Err(input_err(Error::Parse("two spectra need --shift".into()))),
        ([a, b], Some(c)) => {
            let run = |m: Method| {
                let r = match m {
                    Method::Cauchy => recover_two_spectra_cauchy(a, b, c),
                    _ => recover_two_spectra_fourier(a, b, c),
                }
                .map_err(pipeline_err)?;
                check_residuals(&r, config.weight_tol)?;
                Ok::<_, Failure>(r)
            };
            match config.method {
                Method::Both => {
                    let f = run(Method::Fourier)?;
                    let q = run(Method::Cauchy)?;
                    let report = BothReport {
                        mu_gap: (f.mu - q.mu).abs(),
                        max_coefficient_gap: coefficient_gap(&f, &q),
                        fourier: RecoveredJson::from(&f),
                        cauchy: RecoveredJson::from(&q),
                    };
                    if report.mu_gap.max(report.max_coefficient_gap) > METHOD_GAP_TOL {
                        warn!(
                            "methods disagree: mu gap {:.3e}, coefficient gap {:.3e}",
                            report.mu_gap, report.max_coefficient_gap
                        );
                    }
                    serde_json::to_string_pretty(&report)
                }
                m => serde_json::to_string_pretty(&RecoveredJson::from(&run(m)?)),
            }
        }
        _ => unreachable!("clap limits the number of spectra"),
    }
    .map_err(input_err)?;
    let mut out = open_output(&config.output)?;
    writeln!(out, "{json}").map_err(input_err)?;
    out.flush().map_err(input_err)?;
    Ok(EXIT_OK)
}

fn cmd_validate(config: &RunConfig) -> Result<i32, Failure> {
    let path = &config.inputs[0];
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let text = if is_json {
        let ev = CharFunEval::new(load_spec(path)?);
        classj_validate(&ev, config.window).to_string()
    } else {
        let bp = BoundaryParams::new(config.alpha, config.beta).map_err(input_err)?;
        let (header, rows) = read_table(open_input(path)?).map_err(input_err)?;
        let col = |names: &[&str]| header.iter().position(|h| names.contains(&h.as_str()));
        let (Some(x), Some(d)) = (col(&["lambda"]), col(&["delta_mu", "delta"])) else {
            return Err(input_err(Error::Parse("sample table needs 'lambda' and 'delta_mu' columns".into())));
        };
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r[x], r[d])).collect();
        let report = classj_validate_samples(&samples, bp).map_err(input_err)?;
        format!("{report}\n(iv), (v) not checked: real-axis samples only")
    };
    println!("{text}");
    Ok(EXIT_OK)
}

fn cmd_sample(config: &RunConfig) -> Result<i32, Failure> {
    if config.grid < 2 {
        return Err(input_err(Error::Parse("--grid needs at least 2 points".into())));
    }
    let ev = CharFunEval::new(load_spec(&config.inputs[0])?);
    let exact_band = matches!(ev.spec().potential().repr(), Repr::Coefficients(_));
    let w = config.window;
    let n = config.grid;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let lam = w.lo + (w.hi - w.lo) * i as f64 / (n - 1) as f64;
            let z = Complex64::new(lam, 0.0);
            let d0 = ev.delta0(z).re;
            let d = ev.delta_mu(z).re;
            let q = if exact_band {
                ev.q_series(z).map_or(f64::NAN, |q| q.re)
            } else if d0.abs() < 1e-12 {
                f64::NAN
            } else {
                d / d0
            };
            let v2 = ev.transforms().big_v(z).norm_sqr();
            let r2 = 2.0 * ev.big_r(z).re;
            vec![lam, d0, d, q, v2, r2]
        })
        .collect();
    let mut out = open_output(&config.output)?;
    write_table(&mut out, &["lambda", "delta0", "delta_mu", "q", "v_abs2", "two_re_r"], &rows).map_err(input_err)?;
    Ok(EXIT_OK)
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn cmd_roundtrip(config: &RunConfig) -> Result<i32, Failure> {
    let mut rng = generate::rng(config.seed);
    let mut out = open_output(&config.output)?;
    let mut code = EXIT_OK;
    for i in 0..config.count {
        // single spectrum: K <= 6, |mu| <= 3
        let spec = generate::random_bandlimited(&mut rng, 6, 3.0);
        let bp = spec.boundary();
        let ev = CharFunEval::new(spec.clone());
        let first = assemble(&ev, config.window, config.root_tol).map_err(pipeline_err)?;
        let recovered = recover_single(&SpectralDatum::new(first.clone(), bp).map_err(pipeline_err)?)
            .map_err(pipeline_err)?;
        let again = CharFunEval::new(recovered.to_spec(bp).map_err(pipeline_err)?);
        let second = assemble(&again, config.window, config.root_tol).map_err(pipeline_err)?;
        let gap = max_gap(&first.expanded(), &second.expanded());
        let mu_gap = (recovered.mu - spec.mu()).abs() / spec.mu().abs();
        let ok = gap <= ROUNDTRIP_TOL;
        writeln!(
            out,
            "case {i} single: {} modes, mu {:.6}, mu rel gap {mu_gap:.3e}, eigenvalue gap {gap:.3e}: {}",
            ev.band().len(),
            spec.mu(),
            if ok { "ok" } else { "MISMATCH" }
        )
        .map_err(input_err)?;
        if !ok {
            code = EXIT_MISMATCH;
        }

        // two spectra: real 4-mode potential, c = 1
        let spec = generate::random_real_mixed(&mut rng, 3.0);
        let bp = spec.boundary();
        let shifted = generate::shifted_spec(&spec, 1.0).map_err(pipeline_err)?;
        let window = generate::covering_window(&[&spec, &shifted]);
        let datum = |s: &OperatorSpec| {
            let sp = assemble(&CharFunEval::new(s.clone()), window, config.root_tol).map_err(pipeline_err)?;
            SpectralDatum::new(sp, bp).map_err(pipeline_err)
        };
        let (a, b) = (datum(&spec)?, datum(&shifted)?);
        let r = recover_two_spectra_fourier(&a, &b, 1.0).map_err(pipeline_err)?;
        let truth = generate::real_coefficients(&spec).map_err(pipeline_err)?;
        let coeff_gap = truth
            .iter()
            .map(|(k, v)| (r.coefficients.get(k).copied().unwrap_or(0.0) - v).abs())
            .fold(0.0, f64::max);
        let mu_gap = (r.mu - spec.mu()).abs() / spec.mu().abs();
        let ok = coeff_gap <= 1e-6 && mu_gap <= 1e-6;
        writeln!(
            out,
            "case {i} two-spectra: mu {:.6}, mu rel gap {mu_gap:.3e}, coefficient gap {coeff_gap:.3e}: {}",
            spec.mu(),
            if ok { "ok" } else { "MISMATCH" }
        )
        .map_err(input_err)?;
        if !ok {
            code = EXIT_MISMATCH;
        }
    }
    out.flush().map_err(input_err)?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_parsing() {
        let w = parse_window("-3:3.5").unwrap();
        assert_eq!((w.lo, w.hi), (-3.0, 3.5));
        assert!(parse_window("3").is_err());
        assert!(parse_window("4:1").is_err());
        assert_eq!(parse_k_range("-12:12").unwrap(), -12..=12);
        assert!(parse_k_range("2:1").is_err());
    }

    #[test]
    fn k_range_must_cover_window() {
        let bp = BoundaryParams::new(FRAC_PI_4, 0.0).unwrap();
        let mut c = RunConfig::default();
        assert!(c.check(bp).is_ok());
        c.k_range = -5..=5;
        assert!(c.check(bp).is_err());
        c = RunConfig {
            root_tol: 0.0,
            ..RunConfig::default()
        };
        assert!(c.check(bp).is_err());
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["dirac", "forward", "s.json", "--window", "-3:3", "--k-range", "-6:6", "-o", "x.csv"])
            .unwrap();
        let c = RunConfig::from(cli);
        assert_eq!(c.command, CommandKind::Forward);
        assert_eq!(c.window, Window { lo: -3.0, hi: 3.0 });
        assert_eq!(c.k_range, -6..=6);
        let cli = Cli::try_parse_from(["dirac", "inverse", "a.csv", "b.csv", "--shift", "1", "--method", "both"]).unwrap();
        let c = RunConfig::from(cli);
        assert_eq!(c.inputs.len(), 2);
        assert_eq!(c.method, Method::Both);
        assert!(Cli::try_parse_from(["dirac", "inverse", "a.csv", "b.csv", "c.csv"]).is_err());
    }
}
