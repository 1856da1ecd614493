//! `rsbound`: verification harness for the electromagnetic uncertainty
//! relation.
//!
//! Exit status: 0 success, 1 verification failed, 2 input or I/O error,
//! 3 degenerate field, 4 insufficient resolution, 5 grid truncation.

mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{check_grid, parse_complex, pick, FileConfig, Format};
use num_complex::Complex64;
use rsbound::analytic_fields::{photon_wavefunctions, saturating_rs_field, SaturatingFieldSpec};
use rsbound::eigensolver::{analytic_eigenvalue, solve_radial, RadialProblem, RadialSpectrum};
use rsbound::kspace::{read_rsf, write_rsf, FieldGrid, Grid, Space};
use rsbound::moments::{uncertainty_product_grid, uncertainty_product_saturating, VarianceReport};
use rsbound::propagator::{spreading_trajectory, QuadraticFit, Trajectory};
use rsbound::quadrature::SphericalRule;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "rsbound", version, about = "Verify the ΔrΔk ≥ 5/2 uncertainty relation for electromagnetic fields")]
struct Cli {
    /// TOML file with default values; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute ΔrΔk for a field and check it against the bound.
    VerifyBound(VerifyArgs),
    /// Solve the radial eigenproblem and compare with γₙ = 5/2 + 2n.
    Spectrum(SpectrumArgs),
    /// Evaluate a saturating field or photon wave function on a grid.
    Field(FieldArgs),
    /// Track ⟨r²⟩(t) and fit the spreading law.
    Spread(SpreadArgs),
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Width scale a.
    #[arg(long)]
    a: Option<f64>,
    /// Positive-helicity coefficient, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    c_plus: Option<Complex64>,
    /// Negative-helicity coefficient, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    c_minus: Option<Complex64>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Use the built-in saturating field (the default without --input).
    #[arg(long, conflicts_with = "input")]
    saturating: bool,
    /// Field-grid file (.rsf) to analyse.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[command(flatten)]
    spec: SpecArgs,
    /// Sample the saturating field on an N³ grid instead of the analytic path.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Grid side length in units of a.
    #[arg(long, value_name = "L")]
    extent: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    kappa_max: Option<f64>,
    /// Number of lowest states.
    #[arg(long)]
    states: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the eigenfunctions as CSV (kappa, g0, g1, ...).
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhotonHelicity {
    Plus,
    Minus,
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Time in units of a/c.
    #[arg(long, allow_hyphen_values = true)]
    time: Option<f64>,
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Grid side length in units of a.
    #[arg(long, value_name = "L")]
    extent: Option<f64>,
    /// Emit the photon wave function of this helicity instead.
    #[arg(long, value_enum)]
    photon: Option<PhotonHelicity>,
    /// Field-grid file to write.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Also write the field along the z-axis as CSV.
    #[arg(long, value_name = "PATH")]
    profile: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpreadArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Sample times in units of a/c, comma separated.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Position-space side length in units of a.
    #[arg(long, value_name = "L")]
    extent: Option<f64>,
    /// Relative tolerance on the fitted acceleration.
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<rsbound::Error> for Failure {
    fn from(e: rsbound::Error) -> Self {
        use rsbound::Error::*;
        let code = match e {
            DegenerateNorm | SingularIntegrand => 3,
            Resolution(_) => 4,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match cli.config.as_deref().map(FileConfig::load).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::VerifyBound(args) => verify_bound(args, &file),
        Command::Spectrum(args) => spectrum(args, &file),
        Command::Field(args) => field(args, &file),
        Command::Spread(args) => spread(args, &file),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// With neither coefficient given, the simplest saturating field
/// `e^{-r²/2a²}(y, -x, 0)`.
fn resolve_spec(args: &SpecArgs, file: &FileConfig, t: f64) -> Result<SaturatingFieldSpec, Failure> {
    let a = pick(args.a, file.a, 1.0);
    let from_file =
        |v: &Option<config::ComplexValue>| v.as_ref().map(|c| c.resolve()).transpose().map_err(Failure::input);
    let c_plus = args.c_plus.or(from_file(&file.c_plus)?);
    let c_minus = args.c_minus.or(from_file(&file.c_minus)?);
    let spec = match (c_plus, c_minus) {
        (None, None) => SaturatingFieldSpec::simplest(Complex64::new(1.0, 0.0), a)?,
        (p, m) => {
            let zero = Complex64::new(0.0, 0.0);
            SaturatingFieldSpec::new(a, p.unwrap_or(zero), m.unwrap_or(zero), 0.0)?
        }
    };
    Ok(spec.at_time(t))
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::input(format!("--{name} must be positive and finite, got {v}")))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure::input(e.to_string()))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn truncation(warnings: &[String]) -> Failure {
    Failure { code: 5, message: format!("{}; increase --grid or --extent", warnings.join("; ")) }
}

#[derive(Serialize)]
struct BoundOutput<'a> {
    command: &'static str,
    source: &'static str,
    path: &'static str,
    tolerance: f64,
    passed: bool,
    #[serde(flatten)]
    report: &'a VarianceReport,
}

fn verify_bound(args: &VerifyArgs, file: &FileConfig) -> Outcome {
    let tolerance = positive("tolerance", pick(args.tolerance, file.tolerance, 1e-3))?;
    let format = pick(args.output.format, file.format, Format::Json);
    let (source, path, report, saturating) = if let Some(input) = &args.input {
        let field = read_rsf(input)?;
        ("input", "grid", uncertainty_product_grid(&field)?, false)
    } else {
        let spec = resolve_spec(&args.spec, file, 0.0)?;
        match args.grid.or(file.grid) {
            Some(n) => {
                let n = check_grid(n).map_err(Failure::input)?;
                let extent = positive("extent", pick(args.extent, file.extent, 16.0))? * spec.a;
                let grid = Grid::cubic(n, extent)?;
                let field = FieldGrid::try_from_fn(Space::Position, grid, |r| saturating_rs_field(r, &spec))?;
                ("saturating", "grid", uncertainty_product_grid(&field)?, true)
            }
            None => ("saturating", "analytic", uncertainty_product_saturating(&spec, &SphericalRule::default())?, true),
        }
    };
    let passed =
        report.satisfies_bound(tolerance) && (!saturating || (report.saturation_ratio - 1.0).abs() <= tolerance);
    let text = match format {
        Format::Json => {
            json(&BoundOutput { command: "verify-bound", source, path, tolerance, passed, report: &report })?
        }
        Format::Csv => {
            let r = &report;
            format!(
                "source,path,delta_r2,delta_k2,product,bound,saturation_ratio,norm_r,norm_k,tolerance,passed\n\
                 {source},{path},{},{},{},{},{},{},{},{},{passed}\n",
                num(r.delta_r2),
                num(r.delta_k2),
                num(r.product),
                num(r.bound),
                num(r.saturation_ratio),
                num(r.norm_r),
                num(r.norm_k),
                num(tolerance)
            )
        }
    };
    emit(args.output.out.as_deref(), &text)?;
    if report.is_truncated() {
        return Err(truncation(&report.warnings));
    }
    Ok(passed)
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    command: &'static str,
    tolerance: f64,
    passed: bool,
    expected: Vec<f64>,
    #[serde(flatten)]
    spectrum: &'a RadialSpectrum,
}

fn spectrum(args: &SpectrumArgs, file: &FileConfig) -> Outcome {
    let defaults = RadialProblem::default();
    let problem = RadialProblem::new(
        pick(args.kappa_max, file.kappa_max, defaults.kappa_max),
        pick(args.n_points, file.n_points, defaults.n_points),
    )?;
    let states = pick(args.states, file.states, 3);
    let tolerance = positive("tolerance", pick(args.tolerance, file.tolerance, 1e-3))?;
    let spec = solve_radial(&problem, states)?;
    let expected: Vec<f64> = (0..states).map(analytic_eigenvalue).collect();
    let passed = spec.eigenvalues.iter().zip(&expected).all(|(g, e)| (g - e).abs() <= tolerance);
    if let Some(path) = &args.csv {
        emit(Some(path), &spec.to_csv())?;
    }
    let text = match pick(args.output.format, file.format, Format::Json) {
        Format::Json => json(&SpectrumOutput {
            command: "spectrum",
            tolerance,
            passed,
            expected: expected.clone(),
            spectrum: &spec,
        })?,
        Format::Csv => {
            let mut s = String::from("n,eigenvalue,expected,residual\n");
            for (n, g) in spec.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "{n},{},{},{}", num(*g), num(expected[n]), num(spec.residuals[n]));
            }
            s
        }
    };
    emit(args.output.out.as_deref(), &text)?;
    Ok(passed)
}

#[derive(Serialize)]
struct FieldOutput<'a> {
    command: &'static str,
    out: &'a Path,
    counts: [usize; 3],
    spacing: f64,
    time: f64,
    report: &'a VarianceReport,
}

fn field(args: &FieldArgs, file: &FileConfig) -> Outcome {
    let n = check_grid(pick(args.grid, file.grid, 64)).map_err(Failure::input)?;
    let a = positive("a", pick(args.spec.a, file.a, 1.0))?;
    let t = pick(args.time, file.time, 0.0) * a;
    if !t.is_finite() {
        return Err(Failure::input("--time must be finite"));
    }
    let spec = resolve_spec(&args.spec, file, t)?;
    let extent = positive("extent", pick(args.extent, file.extent, 16.0))? * a;
    let grid = Grid::cubic(n, extent)?;
    let eval = |r: [f64; 3]| -> rsbound::Result<rsbound::CVec3> {
        match args.photon {
            None => saturating_rs_field(r, &spec),
            Some(PhotonHelicity::Plus) => photon_wavefunctions(r, t, a).map(|p| p.0),
            Some(PhotonHelicity::Minus) => photon_wavefunctions(r, t, a).map(|p| p.1),
        }
    };
    let field = FieldGrid::try_from_fn(Space::Position, grid, eval)?;
    write_rsf(&field, &args.out)?;
    if let Some(path) = &args.profile {
        let mut s = String::from("z,fx_re,fx_im,fy_re,fy_im,fz_re,fz_im\n");
        let axis = grid.axes[2];
        for k in 0..axis.n {
            let z = axis.coord(k);
            let f = eval([0.0, 0.0, z])?;
            let _ = write!(s, "{}", num(z));
            for c in f {
                let _ = write!(s, ",{},{}", num(c.re), num(c.im));
            }
            s.push('\n');
        }
        emit(Some(path), &s)?;
    }
    let report = uncertainty_product_grid(&field)?;
    let summary = FieldOutput {
        command: "field",
        out: &args.out,
        counts: grid.counts(),
        spacing: grid.axes[0].spacing,
        time: t,
        report: &report,
    };
    emit(None, &json(&summary)?)?;
    Ok(true)
}

#[derive(Serialize)]
struct SpreadOutput<'a> {
    command: &'static str,
    tolerance: f64,
    passed: bool,
    acceleration: f64,
    minimal_at_zero: bool,
    fit: &'a QuadraticFit,
    trajectory: &'a Trajectory,
}

fn spread(args: &SpreadArgs, file: &FileConfig) -> Outcome {
    let spec = resolve_spec(&args.spec, file, 0.0)?;
    let a = spec.a;
    let n = check_grid(pick(args.grid, file.grid, 64)).map_err(Failure::input)?;
    let extent = positive("extent", pick(args.extent, file.extent, 20.0))? * a;
    let tolerance = positive("tolerance", pick(args.tolerance, file.tolerance, 0.01))?;
    let times: Vec<f64> = pick(args.times.clone(), file.times.clone(), vec![-1.0, -0.5, 0.0, 0.5, 1.0])
        .into_iter()
        .map(|t| t * a)
        .collect();
    let kgrid = Grid::cubic(n, extent)?.dual();
    let tr = spreading_trajectory(&spec.amplitudes(), &kgrid, &times)?;
    let fit = tr.fit()?;
    let minimal = tr.minimal_at_zero();
    let passed = (fit.acceleration() / 2.0 - 1.0).abs() <= tolerance && minimal;
    let text = match pick(args.output.format, file.format, Format::Json) {
        Format::Json => json(&SpreadOutput {
            command: "spread",
            tolerance,
            passed,
            acceleration: fit.acceleration(),
            minimal_at_zero: minimal,
            fit: &fit,
            trajectory: &tr,
        })?,
        Format::Csv => tr.to_csv(),
    };
    emit(args.output.out.as_deref(), &text)?;
    if tr.truncated {
        return Err(Failure {
            code: 5,
            message: "the packet reaches the grid boundary at some sampled time; increase --extent or --grid, or shorten --times".into(),
        });
    }
    Ok(passed)
}
