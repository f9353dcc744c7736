//! Command-line front end. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | input error (arguments, config file, parameter values) |
//! | 2 | no-solution regime (no root, or hypotheses of an operation not met) |
//! | 3 | verification or numerical failure |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::equivalence::{round_trip_grid, write_round_trip_csv};
use crate::error::{Error, Result};
use crate::model::{reduce, DimensionlessParams, PhysicalParams, ReduceOptions};
use crate::numfmt::Num;
use crate::profiles::{
    profile_grid, write_profile_csv, ConvectiveSolution, SimilarityProfile, TemperatureSolution,
};
use crate::solver::{
    critical_h0, geometric_grid, monotonicity_sweep, solve_omega, solve_xi, thread_cap_from_env,
    Guarantee, H0Condition, RegimeReport, RootSet, SolveOptions,
};
use crate::verification::{verify_convective, verify_temperature, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "stefan-thaw",
    version,
    about = "Similarity solutions of a two-phase thawing problem with a density jump"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the front equation and print every root
    Solve(Shared),
    /// Print the regime classification only
    Classify(Shared),
    /// Evaluate the temperature fields on a grid (CSV)
    Profile(ProfileArgs),
    /// Front coefficient along a grid of h0 values (CSV) with a monotonicity verdict
    Sweep(SweepArgs),
    /// Convective/temperature round trip along a grid of h0 values (CSV)
    Equiv(EquivArgs),
    /// Check the solution against the free-boundary system (JSON report)
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// convective condition at x = 0
    Convective,
    /// prescribed temperature b0_wall at x = 0
    Temperature,
    /// zero density jump allowed; convective when h0 is given, otherwise temperature
    Classical,
}

#[derive(Debug, Clone, Args)]
pub struct Shared {
    /// Parameter file (key = value per line)
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Convective)]
    pub mode: Mode,
    /// Bound on |LHS - RHS| at a root
    #[arg(long)]
    pub tol: Option<f64>,
    /// Right end of the root scan; default 4 max(sqrt(B/(A|M|)), sqrt(1/|N|), 1)
    #[arg(long)]
    pub scan_max: Option<f64>,
    /// Geometric scan intervals (default 2048)
    #[arg(long)]
    pub scan_points: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub shared: Shared,
    /// Comma-separated times
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Right end of the x grid; defaults to the front plus 8 α_F √t
    #[arg(long)]
    pub x_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Smallest h0 as a multiple of the critical value
    #[arg(long, default_value_t = 1.01)]
    pub h0_min_factor: f64,
    /// Largest h0 as a multiple of the critical value
    #[arg(long, default_value_t = 1e3)]
    pub h0_max_factor: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 32)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EquivArgs {
    #[command(flatten)]
    pub shared: Shared,
    #[command(flatten)]
    pub range: GridArgs,
    /// Number of h0 values
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub shared: Shared,
    /// Multiply the solved coefficient by this factor before verifying
    #[arg(long)]
    pub perturb_xi: Option<f64>,
}

/// Exit code class of a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter { .. }
        | Error::DegenerateDensityJump
        | Error::DegenerateBeta
        | Error::Config { .. }
        | Error::Io { .. }
        | Error::NonFiniteInput { .. }
        | Error::DomainError { .. } => EXIT_INPUT,
        Error::NoRootFound { .. } | Error::HypothesesNotMet(_) => EXIT_NO_SOLUTION,
        Error::OverflowUnrepresentable { .. }
        | Error::ToleranceNotReached { .. }
        | Error::UniquenessViolation { .. }
        | Error::MonotonicityViolation { .. }
        | Error::OutOfPhaseRegion { .. }
        | Error::VerificationFailed { .. } => EXIT_FAILURE,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::NoRootFound { report, .. } = &e {
                if below_threshold(report) {
                    let _ = writeln!(stderr, "no phase change: h0 ≤ critical");
                }
            }
            exit_code(&e)
        }
    }
}

fn below_threshold(r: &RegimeReport) -> bool {
    matches!(
        r.h0_condition,
        Some(H0Condition::Below | H0Condition::AtThreshold)
    )
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Solve(s) => cmd_solve(s, stdout, stderr),
        Command::Classify(s) => cmd_classify(s, stdout),
        Command::Profile(a) => cmd_profile(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout, stderr),
        Command::Equiv(a) => cmd_equiv(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
    }
}

struct Setup {
    phys: PhysicalParams,
    dimless: DimensionlessParams,
    reduce_opts: ReduceOptions,
    opts: SolveOptions,
    temperature: bool,
}

fn setup(s: &Shared) -> Result<Setup> {
    let phys = PhysicalParams::from_config_file(&s.config)?;
    let reduce_opts = match s.mode {
        Mode::Classical => ReduceOptions::classical(),
        _ => ReduceOptions::strict(),
    };
    let temperature = match s.mode {
        Mode::Convective => false,
        Mode::Temperature => true,
        Mode::Classical => phys.h0.is_none(),
    };
    if temperature && phys.b0_wall.is_none() {
        return Err(Error::invalid(
            "b0_wall",
            "temperature mode needs `b0_wall`",
        ));
    }
    if !temperature && phys.h0.is_none() {
        return Err(Error::invalid("h0", "convective mode needs `h0`"));
    }
    let dimless = reduce(&phys, reduce_opts)?;
    let mut opts = SolveOptions::default();
    if let Some(t) = s.tol {
        if !(t > 0.0) {
            return Err(Error::invalid("tol", "must be positive"));
        }
        opts.tolerance = t;
    }
    if let Some(m) = s.scan_max {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::invalid("scan_max", "must be positive and finite"));
        }
        opts.scan_max = Some(m);
    }
    if let Some(n) = s.scan_points {
        if n < 2 {
            return Err(Error::invalid("scan_points", "needs at least two points"));
        }
        opts.scan_points = n;
    }
    Ok(Setup {
        phys,
        dimless,
        reduce_opts,
        opts,
        temperature,
    })
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    let io = |path: &Path, source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| io(path, e)),
        None => stdout
            .write_all(bytes)
            .map_err(|e| io(Path::new("<stdout>"), e)),
    }
}

fn dimless_summary(d: &DimensionlessParams) -> String {
    let mut s = String::new();
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| Num(x).to_string());
    let _ = writeln!(s, "M = {}", Num(d.m_par));
    let _ = writeln!(s, "N = {}", Num(d.n_par));
    let _ = writeln!(s, "p = {}", Num(d.p_par));
    let _ = writeln!(s, "delta1 = {}", opt(d.delta1));
    let _ = writeln!(s, "delta1_tilde = {}", opt(d.delta1_tilde));
    let _ = writeln!(s, "delta2 = {}", Num(d.delta2));
    let _ = writeln!(s, "K0 = {}", opt(d.k0));
    let _ = writeln!(s, "gamma0 = {}", Num(d.gamma0));
    let _ = writeln!(s, "alpha_U = {}", Num(d.alpha_u));
    let _ = writeln!(s, "alpha_F = {}", Num(d.alpha_f));
    s
}

fn roots_csv(roots: &RootSet) -> String {
    let mut s = String::from("index,root,residual,bracket_lo,bracket_hi\n");
    for (i, ((r, res), (lo, hi))) in roots
        .roots
        .iter()
        .zip(&roots.residuals)
        .zip(&roots.brackets)
        .enumerate()
    {
        let _ = writeln!(s, "{i},{},{},{},{}", Num(*r), Num(*res), Num(*lo), Num(*hi));
    }
    s
}

fn print_roots(name: &str, roots: &RootSet, stdout: &mut dyn Write) -> Result<()> {
    let mut s = String::new();
    let principal = roots.principal().expect("nonempty");
    let _ = writeln!(s, "{name} = {}", Num(principal));
    for r in roots.secondary() {
        let _ = writeln!(s, "secondary {name} = {}", Num(*r));
    }
    let _ = writeln!(s, "roots found: {}", roots.len());
    write_stdout(stdout, &s)
}

fn write_stdout(stdout: &mut dyn Write, s: &str) -> Result<()> {
    stdout.write_all(s.as_bytes()).map_err(|e| Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    })
}

pub fn cmd_solve(s: &Shared, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let st = setup(s)?;
    write_stdout(stdout, &dimless_summary(&st.dimless))?;
    if st.temperature {
        let roots = solve_omega(&st.dimless, &st.opts)?;
        print_roots("omega", &roots, stdout)?;
        if s.out.is_some() {
            emit(&s.out, stdout, roots_csv(&roots).as_bytes())?;
        }
        return Ok(EXIT_OK);
    }
    let (roots, report) = solve_xi(&st.dimless, &st.opts)?;
    write_stdout(stdout, &report.to_string())?;
    print_roots("xi", &roots, stdout)?;
    if s.out.is_some() {
        emit(&s.out, stdout, roots_csv(&roots).as_bytes())?;
    }
    if report.guarantee == Guarantee::NoneInRange {
        let _ = writeln!(stderr, "no phase change: h0 ≤ critical");
        return Ok(EXIT_NO_SOLUTION);
    }
    Ok(EXIT_OK)
}

pub fn cmd_classify(s: &Shared, stdout: &mut dyn Write) -> Result<i32> {
    let st = setup(s)?;
    let mut text = dimless_summary(&st.dimless);
    if let Ok(c) = critical_h0(&st.phys) {
        let _ = writeln!(text, "critical h0 = {}", Num(c));
    }
    if st.temperature {
        let _ = writeln!(
            text,
            "classification applies to the convective problem only"
        );
    } else {
        text.push_str(&crate::solver::classify(&st.dimless, &st.opts).to_string());
    }
    emit(&s.out, stdout, text.as_bytes())?;
    Ok(EXIT_OK)
}

fn solved_profile(st: &Setup) -> Result<SimilarityProfile> {
    if st.temperature {
        Ok(*TemperatureSolution::solve(&st.phys, st.reduce_opts, &st.opts)?.profile())
    } else {
        Ok(*ConvectiveSolution::solve(&st.phys, st.reduce_opts, &st.opts)?.profile())
    }
}

pub fn cmd_profile(a: &ProfileArgs, stdout: &mut dyn Write) -> Result<i32> {
    let st = setup(&a.shared)?;
    let profile = solved_profile(&st)?;
    let rows = profile_grid(&profile, &a.times, a.points, a.x_max)?;
    let mut buf = Vec::new();
    write_profile_csv(&rows, &mut buf).expect("writing to memory");
    emit(&a.shared.out, stdout, &buf)?;
    Ok(EXIT_OK)
}

fn h0_grid(phys: &PhysicalParams, g: &GridArgs, n: usize) -> Result<Vec<f64>> {
    if !(g.h0_min_factor > 0.0 && g.h0_max_factor > g.h0_min_factor) {
        return Err(Error::invalid(
            "h0_min_factor",
            "need 0 < min factor < max factor",
        ));
    }
    if n < 2 {
        return Err(Error::invalid("points", "a grid needs at least two points"));
    }
    let c = critical_h0(phys)?;
    Ok(geometric_grid(c * g.h0_min_factor, c * g.h0_max_factor, n))
}

pub fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let st = setup(&a.shared)?;
    let grid = h0_grid(&st.phys, &a.grid, a.points)?;
    let result = monotonicity_sweep(
        &st.phys,
        st.reduce_opts,
        &grid,
        &st.opts,
        thread_cap_from_env(),
    );
    let (points, verdict) = match result {
        Ok(p) => (p, "monotone: PASS"),
        Err(e @ Error::MonotonicityViolation { .. }) => {
            let _ = writeln!(stderr, "monotone: FAIL ({e})");
            return Ok(EXIT_FAILURE);
        }
        Err(e) => return Err(e),
    };
    let mut csv = String::from("h0,xi\n");
    for p in &points {
        let _ = writeln!(csv, "{},{}", Num(p.h0), Num(p.xi));
    }
    emit(&a.shared.out, stdout, csv.as_bytes())?;
    // the verdict goes wherever the CSV does not
    if a.shared.out.is_some() {
        write_stdout(stdout, &format!("{verdict}\n"))?;
    } else {
        let _ = writeln!(stderr, "{verdict}");
    }
    Ok(EXIT_OK)
}

pub fn cmd_equiv(a: &EquivArgs, stdout: &mut dyn Write) -> Result<i32> {
    let st = setup(&a.shared)?;
    let grid = h0_grid(&st.phys, &a.range, a.grid)?;
    let rows = round_trip_grid(
        &st.phys,
        st.reduce_opts,
        &st.opts,
        &grid,
        thread_cap_from_env(),
    )?;
    let mut buf = Vec::new();
    write_round_trip_csv(&rows, &mut buf).expect("writing to memory");
    emit(&a.shared.out, stdout, &buf)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let st = setup(&a.shared)?;
    let factor = a.perturb_xi.unwrap_or(1.0);
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::invalid("perturb_xi", "must be positive"));
    }
    let cfg = VerifyConfig::default();
    let outcome = if st.temperature {
        let sol = TemperatureSolution::solve(&st.phys, st.reduce_opts, &st.opts)?;
        let sol = TemperatureSolution::from_omega(&st.phys, &st.dimless, sol.omega * factor)?;
        verify_temperature(&sol, &cfg)
    } else {
        let sol = ConvectiveSolution::solve(&st.phys, st.reduce_opts, &st.opts)?;
        let sol = ConvectiveSolution::from_xi(&st.phys, &st.dimless, sol.xi * factor)?;
        verify_convective(&sol, &cfg)
    };
    match outcome {
        Ok(report) => {
            emit(
                &a.shared.out,
                stdout,
                format!("{}\n", report.to_json()).as_bytes(),
            )?;
            Ok(EXIT_OK)
        }
        Err(Error::VerificationFailed { component, report }) => {
            emit(
                &a.shared.out,
                stdout,
                format!("{}\n", report.to_json()).as_bytes(),
            )?;
            let _ = writeln!(stderr, "verification failed: {component}");
            for f in &report.failures {
                let _ = writeln!(stderr, "  {f}");
            }
            Ok(EXIT_FAILURE)
        }
        Err(e) => Err(e),
    }
}
