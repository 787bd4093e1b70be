//! Command-line front end.
//!
//! Every subcommand accepts `--config path.json` whose keys mirror the long
//! flags; flags given on the command line win. Output is canonical JSON (or
//! CSV where noted) carrying the resolved configuration, seed and version.
//! Exit codes: 0 success, 1 failed invariant or numerical failure, 2 usage.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::coherent::{self, BasisSpec};
use crate::dynamics::{conservation_report, integrate};
use crate::error::Error;
use crate::finrep::{homomorphism_residuals, nonunitarity_witness, rep_matrix, FinRepSpace};
use crate::quantization::{solve_spectrum, Chart, Region, Section, SpectralProblem};
use crate::report::{to_canonical_json, ARTIFACT_VERSION};
use crate::sampling::{self, random_group_element, random_state};
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "toda-quant", version, about = "Toda lattice dynamics, coadjoint orbit and quantization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the Toda flow from a seeded random state.
    Simulate(SimulateArgs),
    /// Check the coadjoint action, orbit dimension, symplectic form and polarization.
    VerifyOrbit(VerifyOrbitArgs),
    /// Lowest eigenvalues of the box-regularized quantum Hamiltonian.
    QuantizeSpectrum(SpectrumArgs),
    /// Reproducing kernel samples and coherent-state checks.
    CoherentKernel(KernelArgs),
    /// Representation matrix on polynomial sections.
    RepMatrix(RepArgs),
    /// Run every invariant suite.
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RegionArg {
    Box,
    QBoxImage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ChartArg {
    Q,
    Z,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct SimulateArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct VerifyOrbitArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random states (and group elements) sampled.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct SpectrumArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    chart: Option<ChartArg>,
    /// `lo:hi`, once for all axes or once per axis.
    #[arg(long = "box", allow_hyphen_values = true)]
    #[serde(rename = "box")]
    bounds: Option<Vec<String>>,
    /// Grid intervals, once for all axes or once per axis.
    #[arg(long)]
    grid: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    region: Option<RegionArg>,
    /// Number of eigenvalues.
    #[arg(long)]
    k: Option<usize>,
    /// Residual bound for every returned pair.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct KernelArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Basis functions per axis.
    #[arg(long)]
    degree: Option<usize>,
    /// Random points for the reproducing and positivity checks.
    #[arg(long)]
    points: Option<usize>,
    /// Kernel samples per axis in the CSV grid.
    #[arg(long)]
    kernel_grid: Option<usize>,
    /// The CSV grid spans `log a ∈ [−r, r]`.
    #[arg(long)]
    log_range: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct RepArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Polynomial degree `m`.
    #[arg(long)]
    degree: Option<usize>,
    /// Use only monomials of degree exactly `m`.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    homogeneous: Option<bool>,
    /// Random pairs for the homomorphism check.
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct VerifyAllArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::InvalidProblem(_)
            | Error::GridTooCoarse { .. }
            | Error::DimensionMismatch { .. }
            | Error::LatticeTooSmall(_)
            | Error::BadOrder { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NonPositiveOffDiagonal { .. }
            | Error::InvalidGroupElement(_)
            | Error::InvalidAlgebraElement(_)
            | Error::NotBidiagonal { .. }
            | Error::NotPolarizationPreserving { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// Overlays the flags given on the command line on the config file.
fn merge<T: Serialize + DeserializeOwned>(cli: &T, config: Option<&Path>) -> Result<T, Failure> {
    let mut base = match config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(m)) => m,
                Ok(_) => return Err(Failure::Usage("config file must hold a JSON object".into())),
                Err(e) => return Err(Failure::Usage(format!("invalid config: {e}"))),
            }
        }
        None => Map::new(),
    };
    let flags = serde_json::to_value(cli).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Value::Object(m) = flags {
        for (k, v) in m {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| Failure::Usage(format!("invalid config: {e}")))
}

fn check_n(n: usize) -> Result<usize, Failure> {
    if n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2 (got {n})")));
    }
    Ok(n)
}

/// Output document shared by every subcommand.
struct Outcome {
    command: &'static str,
    config: Value,
    seed: u64,
    result: Value,
    pass: bool,
}

impl Outcome {
    fn json(&self) -> Result<String, Failure> {
        Ok(to_canonical_json(&json!({
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": ARTIFACT_VERSION,
            "pass": self.pass,
            "result": self.result,
        }))?)
    }

    fn csv_preamble(&self) -> String {
        format!(
            "# toda-quant {ARTIFACT_VERSION}\n# command: {}\n# seed: {}\n# config: {}\n",
            self.command, self.seed, self.config
        )
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Runtime(e.to_string()))
}

/// Resolved flags as embedded in the output; the destination path is left
/// out so that the document does not depend on where it is written.
fn config_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    let mut value = to_value(v)?;
    if let Value::Object(m) = &mut value {
        m.remove("output");
    }
    Ok(value)
}

fn simulate(args: SimulateArgs) -> Result<bool, Failure> {
    let mut a = merge(&args, args.config.as_deref())?;
    let n = check_n(*a.n.get_or_insert(3))?;
    let seed = *a.seed.get_or_insert(0);
    let t_end = *a.t_end.get_or_insert(10.0);
    let dt = *a.dt.get_or_insert(1e-3);
    let format = *a.format.get_or_insert(Format::Json);
    let s = random_state(n, &mut sampling::rng(seed));
    let tr = integrate(&s.to_canonical(), s.trace_c(), t_end, dt)?;
    let report = conservation_report(&tr)?;
    let last = tr.state_at(tr.len() - 1)?;
    let outcome = Outcome {
        command: "simulate",
        config: config_value(&a)?,
        seed,
        result: json!({
            "initial_state": to_value(&s)?,
            "final_state": to_value(&last)?,
            "steps": tr.len() - 1,
            "step": tr.step,
            "integrator": tr.integrator_name,
            "completed": tr.completed,
            "conservation": to_value(&report)?,
        }),
        pass: tr.completed,
    };
    match format {
        Format::Json => emit(&outcome.json()?, a.output.as_deref())?,
        Format::Csv => {
            let mut buf = outcome.csv_preamble().into_bytes();
            tr.write_csv(&mut buf)?;
            emit(&String::from_utf8_lossy(&buf), a.output.as_deref())?;
        }
    }
    Ok(outcome.pass)
}

fn verify_orbit(args: VerifyOrbitArgs) -> Result<bool, Failure> {
    let mut a = merge(&args, args.config.as_deref())?;
    let n = check_n(*a.n.get_or_insert(3))?;
    let seed = *a.seed.get_or_insert(0);
    let samples = *a.samples.get_or_insert(20);
    let suite = verify::orbit_suite(n, seed, samples)?;
    let outcome = Outcome {
        command: "verify-orbit",
        config: config_value(&a)?,
        seed,
        result: to_value(&suite)?,
        pass: suite.pass,
    };
    emit(&outcome.json()?, a.output.as_deref())?;
    Ok(outcome.pass)
}

fn per_axis<T: Clone>(values: &[T], axes: usize, flag: &str) -> Result<Vec<T>, Failure> {
    match values.len() {
        1 => Ok(vec![values[0].clone(); axes]),
        len if len == axes => Ok(values.to_vec()),
        len => Err(Failure::Usage(format!("--{flag} given {len} times; expected 1 or {axes}"))),
    }
}

fn parse_box(s: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::Usage(format!("--box expects lo:hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn quantize_spectrum(args: SpectrumArgs) -> Result<bool, Failure> {
    let mut a = merge(&args, args.config.as_deref())?;
    let n = check_n(*a.n.get_or_insert(2))?;
    let seed = *a.seed.get_or_insert(0);
    let chart = *a.chart.get_or_insert(ChartArg::Q);
    let bounds = a.bounds.get_or_insert_with(|| vec!["-12:4".into()]).clone();
    let grid = a
        .grid
        .get_or_insert_with(|| vec![if n == 2 { 2000 } else { 60 }])
        .clone();
    let region = *a.region.get_or_insert(RegionArg::Box);
    let k = *a.k.get_or_insert(5);
    let tol = *a.tol.get_or_insert(1e-8);
    let format = *a.format.get_or_insert(Format::Json);
    let axes = n - 1;
    let bounds = per_axis(&bounds, axes, "box")?
        .iter()
        .map(|b| parse_box(b))
        .collect::<Result<Vec<_>, _>>()?;
    let problem = SpectralProblem {
        n,
        chart: match chart {
            ChartArg::Q => Chart::Q,
            ChartArg::Z => Chart::Z,
        },
        bounds,
        grid: per_axis(&grid, axes, "grid")?,
        region: match region {
            RegionArg::Box => Region::Box,
            RegionArg::QBoxImage => Region::QBoxImage,
        },
    };
    let spectrum = solve_spectrum(&problem, k)?;
    let pass = spectrum.residuals.iter().all(|r| *r < tol);
    let outcome = Outcome {
        command: "quantize-spectrum",
        config: config_value(&a)?,
        seed,
        result: json!({
            "eigenvalues": spectrum.eigenvalues,
            "residuals": spectrum.residuals,
            "grid": problem.grid,
            "box": problem.bounds,
            "chart": problem.chart,
            "region": problem.region,
            "dimension": spectrum.dimension,
            "lanczos_steps": spectrum.lanczos_steps,
        }),
        pass,
    };
    match format {
        Format::Json => emit(&outcome.json()?, a.output.as_deref())?,
        Format::Csv => {
            let mut buf = outcome.csv_preamble().into_bytes();
            spectrum.write_eigenfunctions_csv(&mut buf)?;
            emit(&String::from_utf8_lossy(&buf), a.output.as_deref())?;
        }
    }
    Ok(pass)
}

fn coherent_kernel(args: KernelArgs) -> Result<bool, Failure> {
    let mut a = merge(&args, args.config.as_deref())?;
    let n = check_n(*a.n.get_or_insert(2))?;
    let seed = *a.seed.get_or_insert(0);
    let degree = *a.degree.get_or_insert(12);
    let points = *a.points.get_or_insert(20);
    let kgrid = *a.kernel_grid.get_or_insert(41);
    let range = *a.log_range.get_or_insert(3.0);
    let format = *a.format.get_or_insert(Format::Json);
    if kgrid < 2 {
        return Err(Failure::Usage("--kernel-grid must be at least 2".into()));
    }
    let spec = BasisSpec::new(n, degree)?;
    let mut rng = sampling::rng(seed);
    let coeffs: Vec<f64> = (0..spec.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let xs: Vec<Vec<f64>> = (0..points)
        .map(|_| (0..n - 1).map(|_| rng.gen_range(0.2..5.0)).collect())
        .collect();
    let repro = coherent::reproducing_check(&spec, &coeffs, &xs)?;
    let min_eig = coherent::min_gram_eigenvalue(&coherent::kernel_gram(&spec, &xs)?);
    let s1 = Section::basis(spec, coeffs);
    let g = random_group_element(n, &mut rng);
    let states: Vec<_> = (0..points).map(|_| random_state(n, &mut rng)).collect();
    let residual = coherent::group_coherent_check(&g, &states, &s1)?;
    let pass = repro.max_error < 1e-8 && min_eig >= -1e-10 && residual < 1e-6;
    let outcome = Outcome {
        command: "coherent-kernel",
        config: config_value(&a)?,
        seed,
        result: json!({
            "reproducing": to_value(&repro)?,
            "gram_min_eigenvalue": min_eig,
            "group_coherent_residual": residual,
        }),
        pass,
    };
    match format {
        Format::Json => emit(&outcome.json()?, a.output.as_deref())?,
        Format::Csv => {
            // first coordinate varies, the others are held at a = 1
            let mut text = outcome.csv_preamble();
            text.push_str("x_a1,y_a1,K\n");
            let ticks: Vec<f64> = (0..kgrid)
                .map(|i| (-range + 2.0 * range * i as f64 / (kgrid - 1) as f64).exp())
                .collect();
            for &u in &ticks {
                for &v in &ticks {
                    let mut x = vec![1.0; n - 1];
                    let mut y = vec![1.0; n - 1];
                    x[0] = u;
                    y[0] = v;
                    let kv = coherent::kernel(&spec, &x, &y)?;
                    text.push_str(&format!("{u:.16e},{v:.16e},{kv:.16e}\n"));
                }
            }
            emit(&text, a.output.as_deref())?;
        }
    }
    Ok(pass)
}

fn rep_matrix_cmd(args: RepArgs) -> Result<bool, Failure> {
    let mut a = merge(&args, args.config.as_deref())?;
    let n = check_n(*a.n.get_or_insert(3))?;
    let seed = *a.seed.get_or_insert(0);
    let degree = *a.degree.get_or_insert(2);
    let homogeneous = *a.homogeneous.get_or_insert(false);
    let pairs = *a.pairs.get_or_insert(100);
    let space = FinRepSpace::new(n, degree, homogeneous)?;
    let mut rng = sampling::rng(seed);
    let g = random_group_element(n, &mut rng);
    let rho = rep_matrix(&g, &space)?;
    let mut abs: f64 = 0.0;
    let mut rel: f64 = 0.0;
    for _ in 0..pairs {
        let g1 = random_group_element(n, &mut rng);
        let g2 = random_group_element(n, &mut rng);
        let (x, y) = homomorphism_residuals(&g1, &g2, &space)?;
        abs = abs.max(x);
        rel = rel.max(y);
    }
    let witness = nonunitarity_witness(&space);
    let pass = rel < 1e-12 && witness.is_ok();
    let g_rows: Vec<Vec<f64>> = g.matrix().row_iter().map(|r| r.iter().copied().collect()).collect();
    let outcome = Outcome {
        command: "rep-matrix",
        config: config_value(&a)?,
        seed,
        result: json!({
            "g": g_rows,
            "basis_exponents": space.exponents(),
            "rho": rho.rows(),
            "determinant": rho.determinant(),
            "homomorphism_residual": abs,
            "homomorphism_relative_residual": rel,
            "nonunitarity_witness": match &witness {
                Ok(w) => to_value(w)?,
                Err(e) => json!({ "error": e.to_string() }),
            },
        }),
        pass,
    };
    emit(&outcome.json()?, a.output.as_deref())?;
    Ok(pass)
}

fn verify_all(args: VerifyAllArgs) -> Result<bool, Failure> {
    let mut a = merge(&args, args.config.as_deref())?;
    let n = check_n(*a.n.get_or_insert(3))?;
    let seed = *a.seed.get_or_insert(0);
    let samples = *a.samples.get_or_insert(20);
    let pairs = *a.pairs.get_or_insert(100);
    let suites = vec![
        verify::dynamics_suite(n, seed)?,
        verify::orbit_suite(n, seed, samples)?,
        verify::quantization_suite(n, seed)?,
        verify::coherent_suite(n, seed)?,
        verify::finrep_suite(n, seed, pairs)?,
    ];
    let pass = suites.iter().all(|s| s.pass);
    let outcome = Outcome {
        command: "verify-all",
        config: config_value(&a)?,
        seed,
        result: json!({ "suites": to_value(&suites)? }),
        pass,
    };
    emit(&outcome.json()?, a.output.as_deref())?;
    Ok(pass)
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::VerifyOrbit(a) => verify_orbit(a),
        Command::QuantizeSpectrum(a) => quantize_spectrum(a),
        Command::CoherentKernel(a) => coherent_kernel(a),
        Command::RepMatrix(a) => rep_matrix_cmd(a),
        Command::VerifyAll(a) => verify_all(a),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: toda-quant <simulate|verify-orbit|quantize-spectrum|coherent-kernel|rep-matrix|verify-all> [flags]");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
