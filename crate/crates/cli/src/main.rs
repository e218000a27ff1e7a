//! `bohr`: radii, table and figure data, and seeded inequality checks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bohr_core::functionals::FunctionalKind;
use bohr_core::multidim::{
    compose_line, random_line_function, verify_theorem, verify_theorem_on_lines, Domain, LineDirection,
    MultidimReport, Theorem, TheoremCheck, MAX_DEGREE,
};
use bohr_core::radii::{
    figure1_data, radius_problem_for, solve_radius, table1_problems, table1_with_tolerance, ClosedFormRadius,
    RadiusProblem, DEFAULT_TOLERANCE,
};
use bohr_core::series::BoundedFunction;
use bohr_core::sharpness::{witness_search, DEFAULT_A_STEP, DEFAULT_PROBE_OFFSET};
use bohr_core::verify::{run_trials_with, VerificationConfig};
use bohr_core::{Complex64, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_INVALID: u8 = 2;
const EXIT_NO_ROOT: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_PROPERTY: u8 = 5;

#[derive(Parser)]
#[command(name = "bohr", version, about = "Bohr-type radii and inequality checks for bounded analytic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one radius equation or evaluate a closed-form radius.
    Radius(RadiusArgs),
    /// The eight reference roots of the Y equation.
    Table1 {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Samples of Y(r) for each reference parameter set, as CSV.
    Figure1 {
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded Monte-Carlo check below the sharp radius.
    Verify(VerifyArgs),
    /// Extremal witness just above the sharp radius.
    Sharpness(SharpnessArgs),
    /// Checks along complex lines of a function of several variables.
    Multidim(MultidimArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Y,
    Rn,
    Rnprime,
    Rap,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    BohrThird,
    Bombieri,
    ThreeFifths,
    Rogosinski,
    PowerP,
}

#[derive(Args)]
struct RadiusArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, value_enum)]
    which: Option<Which>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    m0: u32,
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Functional {
    Majorant,
    ZeroOmitted,
    Rogosinski,
    BohrRogosinski,
    RefinedJ,
    RefinedL,
    RefinedA,
    PowerMajorant,
    PartialSum,
}

/// Functional selection shared by `verify` and `sharpness`.
#[derive(Args)]
struct FunctionalArgs {
    #[arg(long, value_enum)]
    functional: Functional,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Index where the linear sum starts.
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    m0: u32,
}

impl FunctionalArgs {
    fn kind(&self) -> FunctionalKind {
        let (p, n) = (self.p, self.n);
        match self.functional {
            Functional::Majorant => FunctionalKind::Majorant,
            Functional::ZeroOmitted => FunctionalKind::ZeroOmittedSum,
            Functional::Rogosinski => FunctionalKind::RogosinskiSum { n },
            Functional::BohrRogosinski => FunctionalKind::BohrRogosinskiI { p, n },
            Functional::RefinedJ => FunctionalKind::RefinedJ { p, n },
            Functional::RefinedL => FunctionalKind::RefinedL,
            Functional::RefinedA => FunctionalKind::RefinedA { p, n },
            Functional::PowerMajorant => FunctionalKind::PowerMajorant { p },
            Functional::PartialSum => FunctionalKind::PartialSum { n },
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    functional: FunctionalArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, env = "BOHR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    margin: f64,
    #[arg(long, default_value_t = 64)]
    truncation: usize,
    /// Sample below this radius instead of the sharp one.
    #[arg(long)]
    radius: Option<f64>,
    /// Run on the current thread only.
    #[arg(long)]
    serial: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SharpnessArgs {
    #[command(flatten)]
    functional: FunctionalArgs,
    /// Probe at `radius + probe_offset`.
    #[arg(long, default_value_t = DEFAULT_PROBE_OFFSET, allow_hyphen_values = true)]
    probe_offset: f64,
    #[arg(long, default_value_t = DEFAULT_A_STEP)]
    a_step: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct MultidimArgs {
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// One of 2.1, 2.2, 2.3, 2.4, 2.5.
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Start of the linear sum for theorems 2.3 and 2.4.
    #[arg(long = "sum-from", default_value_t = 1)]
    sum_from: u32,
    #[arg(long, default_value_t = 1)]
    m0: u32,
    #[arg(long, default_value_t = 1000)]
    lines: usize,
    /// Number of seeded random test functions.
    #[arg(long, default_value_t = 1)]
    functions: usize,
    /// Use the extremal function with this parameter along the diagonal instead.
    #[arg(long)]
    extremal_a: Option<f64>,
    #[arg(long, env = "BOHR_SEED", default_value_t = 0)]
    seed: u64,
    /// Lines are probed at `radius − margin`; negative values probe above.
    #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
    margin: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

enum Failure {
    Core(Error),
    Io(io::Error),
    Invalid(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoWitness { probe_r, best_value } => {
                Failure::Property(format!("no witness at r = {probe_r}; best value {best_value}"))
            }
            other => Failure::Core(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<(), Failure>;

/// Nine significant digits, switching to exponent form for very small or large values.
fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..9).contains(&exp) {
        return format!("{x:.8e}");
    }
    format!("{x:.*}", (8 - exp).max(0) as usize)
}

fn print_json<T: serde::Serialize>(value: &T) -> CmdResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn kind_label(kind: &FunctionalKind) -> String {
    match *kind {
        FunctionalKind::Majorant => "majorant".into(),
        FunctionalKind::ZeroOmittedSum => "zero_omitted".into(),
        FunctionalKind::RogosinskiSum { n } => format!("rogosinski N={n}"),
        FunctionalKind::BohrRogosinskiI { p, n } => format!("bohr_rogosinski p={p} N={n}"),
        FunctionalKind::RefinedJ { p, n } => format!("refined_j p={p} N={n}"),
        FunctionalKind::RefinedL => "refined_l".into(),
        FunctionalKind::RefinedA { p, n } => format!("refined_a p={p} N={n}"),
        FunctionalKind::PowerMajorant { p } => format!("power_majorant p={p}"),
        FunctionalKind::PartialSum { n } => format!("partial_sum N={n}"),
    }
}

fn cmd_radius(args: &RadiusArgs) -> CmdResult {
    let problem = match args.family {
        Family::Y => RadiusProblem::y(args.p, args.k, args.n, args.m0),
        Family::Rn => RadiusProblem::RnEquation { n: args.n },
        Family::Rnprime => RadiusProblem::RnPrimeEquation { n: args.n },
        Family::Rap => RadiusProblem::RapEquation { a: args.a, p: args.p },
        Family::Closed => {
            let which = args.which.ok_or_else(|| Failure::Invalid("--family closed needs --which".into()))?;
            RadiusProblem::closed(match which {
                Which::BohrThird => ClosedFormRadius::BohrThird { k: args.k },
                Which::Bombieri => ClosedFormRadius::Bombieri { k: args.k },
                Which::ThreeFifths => ClosedFormRadius::RefinedThreeFifths { k: args.k },
                Which::Rogosinski => ClosedFormRadius::Rogosinski,
                Which::PowerP => ClosedFormRadius::PowerP { p: args.p },
            })
        }
    };
    print_json(&solve_radius(&problem, args.tol)?)
}

fn cmd_table1(format: Format, tol: f64) -> CmdResult {
    let rows = table1_with_tolerance(tol)?;
    match format {
        Format::Json => print_json(&rows),
        Format::Csv => {
            let mut out = io::stdout().lock();
            writeln!(out, "k,m0,N,p,root")?;
            for r in &rows {
                writeln!(out, "{},{},{},{},{}", r.k, r.m0, r.n, sig9(r.p), sig9(r.root))?;
            }
            Ok(())
        }
    }
}

fn cmd_figure1(grid: usize, out: Option<&PathBuf>) -> CmdResult {
    let points = figure1_data(&table1_problems(), grid)?;
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    writeln!(w, "label,r,y")?;
    for pt in &points {
        writeln!(w, "{},{},{}", pt.label, sig9(pt.r), sig9(pt.y))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let f = &args.functional;
    let mut cfg = VerificationConfig::new(f.kind(), f.k, f.m0, args.trials, args.seed);
    cfg.margin = args.margin;
    cfg.truncation = args.truncation;
    cfg.radius_override = args.radius;
    let report = run_trials_with(&cfg, !args.serial)?;
    match args.format {
        Format::Json => print_json(&report)?,
        Format::Csv => {
            let mut out = io::stdout().lock();
            writeln!(out, "functional,k,m0,radius,margin,trials_run,max_value,violation_count,seed")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                kind_label(&cfg.functional),
                cfg.k,
                cfg.m0,
                sig9(report.radius),
                sig9(cfg.margin),
                report.trials_run,
                sig9(report.max_value),
                report.violation_count,
                report.seed
            )?;
        }
    }
    if report.violation_count > 0 {
        return Err(Failure::Property(format!("{} violations, max value {}", report.violation_count, report.max_value)));
    }
    Ok(())
}

fn cmd_sharpness(args: &SharpnessArgs) -> CmdResult {
    let f = &args.functional;
    let kind = f.kind();
    kind.validate()?;
    let problem = radius_problem_for(&kind, f.k, f.m0);
    let report = witness_search(kind, &problem, args.probe_offset, args.a_step)?;
    match args.format {
        Format::Json => print_json(&report),
        Format::Csv => {
            let mut out = io::stdout().lock();
            writeln!(out, "functional,problem,radius,probe_r,witness_a,functional_value,exceeded")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                kind_label(&report.functional),
                report.problem,
                sig9(report.radius),
                sig9(report.probe_r),
                sig9(report.witness_a),
                sig9(report.functional_value),
                report.exceeded
            )?;
            Ok(())
        }
    }
}

fn parse_theorem(args: &MultidimArgs) -> Result<Theorem, Failure> {
    let (p, n, m0) = (args.p, args.sum_from, args.m0);
    match args.theorem.trim_start_matches(['t', 'T']).replace('_', ".").as_str() {
        "2.1" => Ok(Theorem::T2_1),
        "2.2" => Ok(Theorem::T2_2),
        "2.3" => Ok(Theorem::T2_3 { p, n, m0 }),
        "2.4" => Ok(Theorem::T2_4 { p, n, m0 }),
        "2.5" => Ok(Theorem::T2_5),
        other => Err(Failure::Invalid(format!("unknown theorem {other}; expected 2.1 to 2.5"))),
    }
}

fn cmd_multidim(args: &MultidimArgs) -> CmdResult {
    let theorem = parse_theorem(args)?;
    let check = TheoremCheck { theorem, k: args.k, lines: args.lines, seed: args.seed, margin: args.margin };
    let mut reports: Vec<MultidimReport> = Vec::new();
    if let Some(a) = args.extremal_a {
        let f = if theorem.needs_zero_constant() {
            BoundedFunction::extremal_fa_star(a)?
        } else {
            BoundedFunction::extremal_fa(a)?
        };
        let dims = args.n;
        if dims == 0 {
            return Err(Failure::Invalid("--n must be at least 1".into()));
        }
        let b = LineDirection::new(vec![Complex64::new(1.0 / dims as f64, 0.0); dims])?;
        let e = compose_line(&f, &b, 1, MAX_DEGREE)?;
        let diagonal = LineDirection::normalized(&Domain::Polydisk { dims }, vec![Complex64::new(1.0, 0.0); dims])?;
        reports.push(verify_theorem_on_lines(&e, &check, &vec![diagonal; args.lines.max(1)])?);
    } else {
        if args.functions == 0 {
            return Err(Failure::Invalid("--functions must be at least 1".into()));
        }
        for i in 0..args.functions as u64 {
            let (_, e) = random_line_function(args.n, theorem.needs_zero_constant(), args.seed.wrapping_add(i))?;
            reports.push(verify_theorem(&e, &TheoremCheck { seed: args.seed.wrapping_add(i), ..check })?);
        }
    }
    match args.format {
        Format::Json => print_json(&reports)?,
        Format::Csv => {
            let mut out = io::stdout().lock();
            writeln!(out, "function,k,radius,probe_modulus,lines_run,max_value,violations,seed")?;
            for (i, r) in reports.iter().enumerate() {
                writeln!(
                    out,
                    "{i},{},{},{},{},{},{},{}",
                    r.k,
                    sig9(r.radius),
                    sig9(r.probe_modulus),
                    r.lines_run,
                    sig9(r.max_value),
                    r.violations.len(),
                    r.seed
                )?;
            }
        }
    }
    let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
    if violations > 0 {
        return Err(Failure::Property(format!("{violations} line violations")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Radius(args) => cmd_radius(args),
        Command::Table1 { format, tol } => cmd_table1(*format, *tol),
        Command::Figure1 { grid, out } => cmd_figure1(*grid, out.as_ref()),
        Command::Verify(args) => cmd_verify(args),
        Command::Sharpness(args) => cmd_sharpness(args),
        Command::Multidim(args) => cmd_multidim(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::NoRootFound { .. }) { EXIT_NO_ROOT } else { EXIT_INVALID })
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Property(msg)) => {
            eprintln!("property failed: {msg}");
            ExitCode::from(EXIT_PROPERTY)
        }
    }
}
