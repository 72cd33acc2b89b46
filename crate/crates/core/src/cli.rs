//! The `bsy` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on computational errors
//! (with a JSON error object on stderr). Numbers are printed with 17
//! significant digits.

use crate::argument::{lemma2_scan, omega_scan, s1_direct, s1_littlewood, s_of_t};
use crate::config::{OutputFormat, RunConfig};
use crate::dirichlet::{lemma3_compare, mean_square_exact, read_coefficients, Lemma3Request};
use crate::error::{Error, Result};
use crate::integral::{compute_i, decay_scan, tail_i, IntegralResult};
use crate::report::{to_json, Lab, SUITES};
use crate::resonator::{build_resonator, lemma4_check, ResonatorParams, SignVariant, DEFAULT_ENTRY_CAP};
use crate::scan::{DecayModel, ScanReport};
use crate::zeros::{read_zero_file, verify_zero_list, ZeroList};
use crate::zeta::{hardy_z_value, log_zeta_branch, theta, zeta_em, ComplexPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "bsy",
    version,
    about = "Critical-line integrals, argument functions and resonance sums"
)]
struct Cli {
    /// Configuration file (`key = value` lines); defaults to $BSY_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads.
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[arg(long, global = true)]
    target_abs_error: Option<f64>,
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
    #[arg(long, global = true)]
    euler_maclaurin_terms: Option<usize>,
    #[arg(long, global = true)]
    rs_correction_terms: Option<usize>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    /// Zero file read when it covers the needed height, written otherwise.
    #[arg(long, global = true)]
    zero_cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ζ(s), Z(t), θ(t) and log ζ(s).
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Find or verify zero ordinates.
    #[command(subcommand)]
    Zeros(ZerosCmd),
    /// I(T) = ∫_{-T}^{T} log|ζ(1/2+it)| / (1/4+t²) dt, its tail, or a decay scan.
    Integral(IntegralArgs),
    /// S(t), S₁(t) and the scans built on ∫ log|ζ|.
    #[command(subcommand)]
    Arg(ArgCmd),
    /// Build resonator tables and evaluate the Λ-weighted ratios.
    #[command(subcommand)]
    Resonator(ResonatorCmd),
    /// Dirichlet polynomial mean values.
    #[command(subcommand)]
    Mv(MvCmd),
    /// Run an acceptance suite (or `all`) and print its JSON report.
    Report { suite: String },
}

#[derive(Subcommand, Debug)]
enum ZetaCmd {
    Eval {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        t: f64,
    },
    Z {
        #[arg(long)]
        t: f64,
    },
    Theta {
        #[arg(long)]
        t: f64,
    },
    Log {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ZerosCmd {
    Find {
        #[arg(long = "max-t")]
        max_t: f64,
        #[arg(long)]
        out: PathBuf,
    },
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct IntegralArgs {
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Report the tail -2∫_T^{tmax} instead of I(T).
    #[arg(long)]
    tmax: Option<f64>,
    #[command(subcommand)]
    scan: Option<IntegralScan>,
}

#[derive(Subcommand, Debug)]
enum IntegralScan {
    Scan {
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        model: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum S1Method {
    Direct,
    Littlewood,
}

#[derive(Subcommand, Debug)]
enum ArgCmd {
    S {
        #[arg(long)]
        t: f64,
    },
    S1 {
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "littlewood")]
        method: S1Method,
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
    Lemma2 {
        #[arg(long = "T")]
        t: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
    Omega {
        #[arg(long = "T")]
        t: f64,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ResonatorArgs {
    #[arg(long)]
    mu: u32,
    #[arg(long, default_value_t = 0)]
    nu: u32,
    #[arg(long = "N")]
    n: u64,
    #[arg(long, default_value_t = 0.1)]
    h: f64,
    /// Use the given A, B and L instead of the solved values.
    #[arg(long = "override", requires_all = ["a", "b", "l"])]
    override_mode: bool,
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long = "L")]
    l: Option<f64>,
}

impl ResonatorArgs {
    fn params(&self) -> Result<ResonatorParams> {
        if self.override_mode {
            ResonatorParams::with_override(
                self.mu,
                self.nu,
                self.n,
                self.h,
                self.a.unwrap(),
                self.b.unwrap(),
                self.l.unwrap(),
            )
        } else {
            ResonatorParams::solved(self.mu, self.nu, self.n, self.h)
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

#[derive(Subcommand, Debug)]
enum ResonatorCmd {
    Build {
        #[command(flatten)]
        params: ResonatorArgs,
        #[arg(long, value_enum)]
        sign: Sign,
        #[arg(long)]
        out: PathBuf,
    },
    Check {
        #[command(flatten)]
        params: ResonatorArgs,
    },
}

#[derive(Subcommand, Debug)]
enum MvCmd {
    Exact {
        #[arg(long)]
        table: PathBuf,
        #[arg(long = "T")]
        t: f64,
    },
    Lemma3 {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = crate::dirichlet::DEFAULT_EPS_MARGIN)]
        eps_margin: f64,
        /// Needed at alpha = 1/2.
        #[arg(long)]
        zeros: Option<PathBuf>,
    },
}

/// A usage problem detected after parsing.
struct Usage(String);

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u.0)
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn build_config(cli: &Cli) -> std::result::Result<RunConfig, Failure> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::from_file(p),
        None => RunConfig::from_env(),
    }
    .map_err(|e| Failure::Usage(format!("configuration: {e}")))?;
    if let Some(f) = cli.format {
        c.output_format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    let p = &mut c.precision;
    if let Some(v) = cli.target_abs_error {
        p.target_abs_error = v;
    }
    if let Some(v) = cli.quad_tol {
        p.quad_tol = v;
    }
    if let Some(v) = cli.euler_maclaurin_terms {
        p.euler_maclaurin_terms = v;
    }
    if let Some(v) = cli.rs_correction_terms {
        p.rs_correction_terms = v;
    }
    if let Some(v) = cli.max_subdivisions {
        p.max_subdivisions = v;
    }
    if let Some(v) = cli.parallelism {
        c.parallelism = v;
    }
    if let Some(v) = &cli.zero_cache {
        c.zero_cache_path = Some(v.clone());
    }
    c.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(c)
}

/// Zeros from an explicit file, else from the lab (cache or fresh search).
fn zeros_for(file: &Option<PathBuf>, height: f64, lab: &Lab) -> Result<ZeroList> {
    match file {
        Some(p) => {
            let z = read_zero_file(p)?;
            z.require_height(height)?;
            Ok(z)
        }
        None => lab.zeros_to(height),
    }
}

/// One output field: a real or a count.
#[derive(Clone, Copy)]
enum Cell {
    F(f64),
    N(u64),
}

use Cell::{F, N};

impl Cell {
    fn text(self) -> String {
        match self {
            Cell::F(x) => num(x),
            Cell::N(n) => n.to_string(),
        }
    }

    fn value(self) -> serde_json::Value {
        match self {
            Cell::F(x) => json!(x),
            Cell::N(n) => json!(n),
        }
    }
}

fn emit_object(out: &mut dyn Write, fmt: OutputFormat, fields: &[(&str, Cell)]) -> Result<()> {
    match fmt {
        OutputFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                fields.iter().map(|&(k, v)| (k.to_string(), v.value())).collect();
            writeln!(out, "{}", to_json(&map))?;
        }
        OutputFormat::Csv => {
            let head: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let row: Vec<String> = fields.iter().map(|f| f.1.text()).collect();
            writeln!(out, "{}\n{}", head.join(","), row.join(","))?;
        }
    }
    Ok(())
}

fn emit_scan(out: &mut dyn Write, fmt: OutputFormat, r: &ScanReport) -> Result<()> {
    match fmt {
        OutputFormat::Csv => write!(out, "{}", r.to_csv())?,
        OutputFormat::Json => writeln!(out, "{}", to_json(r))?,
    }
    Ok(())
}

fn integral_row(out: &mut dyn Write, fmt: OutputFormat, t: f64, r: &IntegralResult) -> Result<()> {
    emit_object(
        out,
        fmt,
        &[
            ("T", F(t)),
            ("I", F(r.value)),
            ("abs_err", F(r.abs_error_est)),
            ("subintervals", N(r.subintervals as u64)),
            ("singularities", N(r.singularities_handled as u64)),
        ],
    )
}

fn execute(cli: Cli, rc: &RunConfig, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let cfg = &rc.precision;
    let fmt = rc.output_format;
    let lab = Lab::new(*cfg, rc.zero_cache_path.clone());
    match cli.command {
        Command::Zeta(c) => match c {
            ZetaCmd::Eval { sigma, t } => {
                let z = zeta_em(ComplexPoint::new(sigma, t), cfg)?;
                emit_object(
                    out,
                    fmt,
                    &[
                        ("re", F(z.value.re)),
                        ("im", F(z.value.im)),
                        ("error_bound", F(z.error_bound)),
                        ("terms", N(z.terms)),
                    ],
                )?;
            }
            ZetaCmd::Z { t } => {
                let z = hardy_z_value(t, cfg)?;
                emit_object(
                    out,
                    fmt,
                    &[("t", F(t)), ("Z", F(z.value)), ("error_bound", F(z.error_bound))],
                )?;
            }
            ZetaCmd::Theta { t } => emit_object(out, fmt, &[("t", F(t)), ("theta", F(theta(t)))])?,
            ZetaCmd::Log { sigma, t } => {
                let l = log_zeta_branch(sigma, t, cfg)?;
                emit_object(out, fmt, &[("re", F(l.re)), ("im", F(l.im))])?;
            }
        },
        Command::Zeros(c) => match c {
            ZerosCmd::Find { max_t, out: path } => {
                let z = crate::zeros::find_zeros_up_to(max_t, cfg)?;
                z.write_file(&path)?;
                emit_object(
                    out,
                    fmt,
                    &[("count", N(z.len() as u64)), ("covered_height", F(z.covered_height()))],
                )?;
            }
            ZerosCmd::Verify { input } => {
                let z = read_zero_file(&input)?;
                let n = z.len();
                let h = z.covered_height();
                let verified = verify_zero_list(z, cfg).map(|z| z.is_verified());
                match verified {
                    Ok(v) => writeln!(
                        out,
                        "{}",
                        to_json(&json!({"verified": v, "count": n, "covered_height": h}))
                    )
                    .map_err(Error::from)?,
                    Err(e @ Error::Inconsistent { .. }) => {
                        writeln!(
                            out,
                            "{}",
                            to_json(&json!({"verified": false, "count": n, "reason": e.to_string()}))
                        )
                        .map_err(Error::from)?;
                        return Err(e.into());
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        },
        Command::Integral(a) => match a.scan {
            Some(IntegralScan::Scan {
                tmin,
                tmax,
                points,
                model,
                out: path,
                zeros,
            }) => {
                let model =
                    DecayModel::parse(&model).ok_or_else(|| Usage(format!("--model: unknown model `{model}`")))?;
                let margin = crate::zeros::mean_spacing(tmax);
                let z = zeros_for(&zeros, tmax + margin, &lab)?;
                let r = decay_scan(tmin, tmax, points, model, &z, cfg)?;
                std::fs::write(&path, r.to_csv()).map_err(Error::from)?;
                writeln!(
                    out,
                    "{}",
                    to_json(&json!({
                        "model": model.name(),
                        "fitted_params": r.fitted_params,
                        "residual_rms": r.residual_rms,
                        "flagged": r.samples.iter().filter(|s| s.flagged).count(),
                    }))
                )
                .map_err(Error::from)?;
            }
            None => {
                let t = a.t.ok_or_else(|| Usage("--T is required".into()))?;
                let top = a.tmax.unwrap_or(t);
                let z = zeros_for(&a.zeros, top, &lab)?;
                let r = match a.tmax {
                    Some(tm) => tail_i(t, tm, &z, cfg)?,
                    None => compute_i(t, &z, cfg)?,
                };
                integral_row(out, fmt, t, &r)?;
            }
        },
        Command::Arg(c) => match c {
            ArgCmd::S { t } => emit_object(out, fmt, &[("t", F(t)), ("S", F(s_of_t(t, cfg)?))])?,
            ArgCmd::S1 { t, method, zeros } => {
                let v = match method {
                    S1Method::Littlewood => s1_littlewood(t, cfg)?,
                    S1Method::Direct => s1_direct(t, &zeros_for(&zeros, t, &lab)?, cfg)?,
                };
                emit_object(out, fmt, &[("t", F(t)), ("S1", F(v))])?;
            }
            ArgCmd::Lemma2 { t, tmax, points, zeros } => {
                if points < 1 || !(tmax > t) {
                    return Err(Usage("--points must be >= 1 and --tmax > --T".into()).into());
                }
                let grid: Vec<f64> = (1..=points)
                    .map(|j| t * (tmax / t).powf(j as f64 / points as f64))
                    .collect();
                let z = zeros_for(&zeros, tmax, &lab)?;
                emit_scan(out, fmt, &lemma2_scan(t, &grid, &z, cfg)?)?;
            }
            ArgCmd::Omega { t, h, zeros } => {
                let z = zeros_for(&zeros, 2.0 * t + h, &lab)?;
                emit_scan(out, fmt, &omega_scan(t, h, &z, cfg)?)?;
            }
        },
        Command::Resonator(c) => match c {
            ResonatorCmd::Build {
                params,
                sign,
                out: path,
            } => {
                let p = params.params()?;
                let v = match sign {
                    Sign::Plus => SignVariant::Plus,
                    Sign::Minus => SignVariant::Minus,
                };
                let t = build_resonator(&p, v, DEFAULT_ENTRY_CAP)?;
                t.write_file(&path)?;
                emit_object(
                    out,
                    fmt,
                    &[
                        ("entries", N(t.len() as u64)),
                        ("L", F(p.l)),
                        ("A", F(p.a)),
                        ("B", F(p.b)),
                    ],
                )?;
            }
            ResonatorCmd::Check { params } => {
                let c = lemma4_check(&params.params()?, DEFAULT_ENTRY_CAP)?;
                writeln!(out, "{}", to_json(&c)).map_err(Error::from)?;
            }
        },
        Command::Mv(c) => match c {
            MvCmd::Exact { table, t } => {
                let p = read_coefficients(&table)?;
                let v = mean_square_exact(&p, t)?;
                emit_object(
                    out,
                    fmt,
                    &[("T", F(t)), ("mean_square", F(v)), ("diagonal", F(t * p.sum_sq()))],
                )?;
            }
            MvCmd::Lemma3 {
                table,
                alpha,
                h,
                t,
                eps_margin,
                zeros,
            } => {
                let p = read_coefficients(&table)?;
                let req = Lemma3Request {
                    alpha,
                    h,
                    t,
                    eps_margin,
                };
                let z = if alpha == 0.5 {
                    Some(zeros_for(&zeros, 2.0 * t + h, &lab)?)
                } else {
                    None
                };
                let c = lemma3_compare(&p, &req, z.as_ref(), cfg)?;
                writeln!(
                    out,
                    "{}",
                    to_json(&json!({
                        "lhs_re": c.lhs_re,
                        "lhs_im": c.lhs_im,
                        "rhs_re": c.rhs_re,
                        "rhs_im": c.rhs_im,
                        "normalized_gap": c.normalized_gap,
                    }))
                )
                .map_err(Error::from)?;
            }
        },
        Command::Report { suite } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(Usage(format!("unknown suite `{suite}`; known: {}", SUITES.join(", "))).into());
            };
            let mut all_pass = true;
            for s in names {
                let r = lab
                    .run(s)
                    .map_err(|e| Failure::Compute(Error::InvalidInput(format!("criterion {s}: {e}"))))?;
                all_pass &= r.pass;
                writeln!(out, "{}", r.to_json()).map_err(Error::from)?;
            }
            if !all_pass {
                return Err(Error::InvalidInput("acceptance criterion not met".into()).into());
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = build_config(&cli).and_then(|rc| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(rc.parallelism)
            .build()
            .map_err(|e| Failure::Compute(Error::InvalidInput(e.to_string())))?;
        let mut buf = Vec::new();
        let r = pool.install(|| execute(cli, &rc, &mut buf));
        out.write_all(&buf).map_err(|e| Failure::Compute(e.into()))?;
        r
    });
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            1
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "{}", json!({"error": e.kind(), "message": e.to_string()}));
            2
        }
    }
}

/// Entry point for the `bsy` binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
