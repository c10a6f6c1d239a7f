use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use weylpert::hamiltonian::polynomial_potential;
use weylpert::oracle::compare;
use weylpert::potentials::{mode_variable, ModeResult, MultimodeResult};
use weylpert::report::{to_json, AlgebraReport, SolveReport, VerifyEntry, VerifyReport};
use weylpert::{generate_algebra, parse_potential, solve_multimode, solve_perturbation, structure_constants, Error};
use weylpert::{PotentialSpec, Radical2Scalar};

const EXIT_FAILURE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_CLOSURE: u8 = 3;
const DEFAULT_MAX_ORDER: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "weylpert", version, about = "Lie-algebraic perturbation theory for anharmonic oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the generator, Λ and the level shifts
    Solve(SolveArgs),
    /// Generate 𝒜ₙ⁽ᵏ⁾ and its structure constants
    Algebra(AlgebraArgs),
    /// Compare the series with exact RS sums and numeric diagonalization
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PotentialArgs {
    /// Shorthand ("x^4", "x^3 + 0.5 x^4", "exp(x)", "x^1; y^4") or a JSON file
    #[arg(long)]
    potential: String,
    /// Perturbation order k [default: 1, or the JSON file's order]
    #[arg(long)]
    order: Option<usize>,
    /// "0", "0..3" (inclusive), "0,2,5"
    #[arg(long, default_value = "0")]
    levels: String,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Solve inside an algebra built to this order (single-term potentials)
    #[arg(long)]
    algebra_order: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long, value_delimiter = ',', default_value = "1e-3,3e-3,1e-2")]
    lambda_grid: Vec<f64>,
    /// Fock-space dimension [default: n + k·p + 40]
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(
                Error::ClosureInsufficient { .. } | Error::UnsolvedGenerator(_) | Error::NotClosed { .. },
            ) => EXIT_CLOSURE,
            Failure::Core(_) | Failure::Usage(_) => EXIT_VALIDATION,
            Failure::Io(_) => EXIT_FAILURE,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprint!("{}", describe(&cli, &failure));
            ExitCode::from(failure.exit_code())
        }
    }
}

fn describe(cli: &Cli, failure: &Failure) -> String {
    let mut text = String::new();
    match failure {
        Failure::Core(e) => {
            let _ = writeln!(text, "error: {e}");
            if let (Error::Parse { column, .. }, Some(input)) = (e, shorthand_input(cli)) {
                let _ = writeln!(text, "  {input}\n  {}^", " ".repeat(column.saturating_sub(1)));
            }
        }
        Failure::Usage(m) | Failure::Io(m) => {
            let _ = writeln!(text, "error: {m}");
        }
    }
    text
}

fn shorthand_input(cli: &Cli) -> Option<&str> {
    let p = match &cli.command {
        Command::Solve(a) => &a.potential.potential,
        Command::Verify(a) => &a.potential.potential,
        Command::Algebra(_) => return None,
    };
    (!Path::new(p).is_file()).then_some(p.as_str())
}

fn run(cli: &Cli) -> CliResult<()> {
    let max_order = max_order()?;
    let (text, output) = match &cli.command {
        Command::Solve(args) => (solve(args, max_order)?, &args.output),
        Command::Algebra(args) => (algebra(args, max_order)?, &args.output),
        Command::Verify(args) => (verify(args, max_order)?, &args.output),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn max_order() -> CliResult<usize> {
    match std::env::var("WEYLPERT_MAX_ORDER") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("WEYLPERT_MAX_ORDER must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn check_order(order: usize, cap: usize) -> CliResult<()> {
    if order == 0 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    if order > cap {
        return Err(Failure::Usage(format!("order {order} exceeds WEYLPERT_MAX_ORDER = {cap}")));
    }
    Ok(())
}

fn load_potential(args: &PotentialArgs, cap: usize) -> CliResult<PotentialSpec> {
    let path = Path::new(&args.potential);
    let mut spec = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        PotentialSpec::from_json(&text)?
    } else {
        let mut spec = parse_potential(&args.potential)?;
        spec.order = 1;
        spec
    };
    if let Some(k) = args.order {
        spec.order = k;
    }
    check_order(spec.order, cap)?;
    Ok(spec)
}

fn parse_levels(text: &str) -> CliResult<Vec<u64>> {
    let bad = || Failure::Usage(format!("invalid --levels {text:?}; expected \"0\", \"0..3\" or \"0,2,5\""));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let mut levels = Vec::new();
    for part in text.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
                if a > b {
                    return Err(bad());
                }
                levels.extend(a..=b);
            }
            None => levels.push(num(part)?),
        }
    }
    levels.sort_unstable();
    levels.dedup();
    Ok(levels)
}

fn solve(args: &SolveArgs, cap: usize) -> CliResult<String> {
    let spec = load_potential(&args.potential, cap)?;
    let levels = parse_levels(&args.potential.levels)?;
    let result = match args.algebra_order {
        Some(m) => solve_in_algebra(&spec, m)?,
        None => solve_multimode(&spec)?,
    };
    let report = SolveReport::new(&args.potential.potential, &result, &levels)?;
    match args.output.format {
        Format::Json => Ok(to_json(&report)?),
        Format::Table => Ok(solve_table(&report)),
    }
}

fn solve_in_algebra(spec: &PotentialSpec, algebra_order: usize) -> CliResult<MultimodeResult> {
    let usage = || Failure::Usage("--algebra-order needs a single mode with a single term x^n".into());
    let [mode] = spec.modes.as_slice() else { return Err(usage()) };
    let terms = mode.all_terms();
    let ([term], None) = (terms.as_slice(), &mode.series) else { return Err(usage()) };
    let algebra = generate_algebra::<Radical2Scalar>(term.power, algebra_order)?;
    let perturbation = polynomial_potential(&[(term.power, term.coefficient.clone())], spec.order);
    let mut result = solve_perturbation(&perturbation, spec.order, Some(&algebra))?;
    result.n = Some(term.power);
    let mode = ModeResult {
        index: 0,
        name: mode.name.clone().unwrap_or_else(|| mode_variable(0)),
        order: spec.order,
        terms: terms.clone(),
        results: BTreeMap::from([(term.coupling.clone(), result)]),
        series: None,
    };
    Ok(MultimodeResult { order: spec.order, modes: vec![mode] })
}

fn algebra(args: &AlgebraArgs, cap: usize) -> CliResult<String> {
    check_order(args.order, cap)?;
    if args.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let algebra = generate_algebra::<Radical2Scalar>(args.n, args.order)?;
    let constants = structure_constants(&algebra)?;
    let report = AlgebraReport::new(&algebra, &constants);
    match args.output.format {
        Format::Json => Ok(to_json(&report)?),
        Format::Table => Ok(algebra_table(&report)),
    }
}

fn verify(args: &VerifyArgs, cap: usize) -> CliResult<String> {
    let spec = load_potential(&args.potential, cap)?;
    let levels = parse_levels(&args.potential.levels)?;
    if args.lambda_grid.is_empty() || args.lambda_grid.iter().any(|l| !l.is_finite()) {
        return Err(Failure::Usage("--lambda-grid needs finite values".into()));
    }
    let result = solve_multimode(&spec)?;
    let mut entries = Vec::new();
    for mode in &result.modes {
        for (coupling, r) in &mode.results {
            let comparisons =
                levels.iter().map(|&n| compare(r, n, &args.lambda_grid, args.dim)).collect::<Result<Vec<_>, _>>()?;
            entries.push(VerifyEntry { mode: mode.name.clone(), coupling: coupling.clone(), comparisons });
        }
    }
    let report = VerifyReport::new(&args.potential.potential, spec.order, &args.lambda_grid, entries);
    match args.output.format {
        Format::Json => Ok(to_json(&report)?),
        Format::Table => Ok(verify_table(&report)),
    }
}

fn series_text(coefficients: &[String], coupling: &str) -> String {
    let mut text = coefficients.first().cloned().unwrap_or_else(|| "0".into());
    for (j, c) in coefficients.iter().enumerate().skip(1) {
        if c == "0" {
            continue;
        }
        let power = if j == 1 { coupling.to_string() } else { format!("{coupling}^{j}") };
        match c.strip_prefix('-') {
            Some(abs) => write!(text, " - ({abs}) {power}"),
            None => write!(text, " + ({c}) {power}"),
        }
        .expect("writing to a String");
    }
    text
}

fn solve_table(report: &SolveReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "potential  {}", report.potential);
    let _ = writeln!(t, "order      {}", report.order);
    for mode in &report.modes {
        for c in &mode.couplings {
            let _ = writeln!(t, "\nmode {}  coupling {}", mode.name, c.coupling);
            if let Some(s) = &mode.series {
                let _ = writeln!(
                    t,
                    "  series {:?} cutoff {}  tail bound (n=0) {:.3e}",
                    s.kind, s.cutoff, s.tail_bound_ground
                );
            }
            let _ = writeln!(t, "  {:>5}  {:>3}  {:>3}  {:>24}  {:>14}", "order", "p", "q", "alpha", "decimal");
            for a in &c.alphas {
                let _ = writeln!(t, "  {:>5}  {:>3}  {:>3}  {:>24}  {:>14.8}", a.order, a.p, a.q, a.value, a.decimal);
            }
            for level in &c.levels {
                let exact: Vec<String> = level.coefficients.iter().map(|v| v.value.clone()).collect();
                let _ = writeln!(t, "  E_{} = {}", level.level, series_text(&exact, &c.coupling));
            }
            if let Some(h) = &c.harmonic {
                let _ = writeln!(t, "  exact {}  agrees: {}", h.formula, h.agrees);
            }
        }
    }
    for total in &report.totals {
        let levels: Vec<String> = total.levels.iter().map(u64::to_string).collect();
        let _ = write!(t, "\nE({}) = {}", levels.join(","), total.constant.value);
        for (name, cs) in &total.couplings {
            let mut exact = vec!["0".to_string()];
            exact.extend(cs.iter().map(|v| v.value.clone()));
            let _ = write!(t, "{}", series_text(&exact, name).trim_start_matches('0'));
        }
        t.push('\n');
    }
    t
}

fn algebra_table(report: &AlgebraReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "n {}  order {}  size {}", report.n, report.order, report.size);
    if let Some(c) = &report.count {
        let _ = writeln!(t, "expected (κ = ⌈n/2⌉) {}  match {}", c.expected, c.matches);
        let _ =
            writeln!(t, "floor convention (κ = ⌊n/2⌋) {}  match {}", c.floor_convention, c.matches_floor_convention);
    }
    let _ = writeln!(t, "scalar structure constants {}", report.scalar_constants);
    for b in &report.basis {
        let _ = writeln!(t, "  L{:<3} {:<10} {}", b.index, b.kind, b.label);
    }
    let _ = writeln!(t, "{} nonzero structure constants", report.structure_constants.len());
    t
}

fn verify_table(report: &VerifyReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "potential {}  order {}  λ grid {:?}", report.potential, report.order, report.lambda_grid);
    for e in &report.entries {
        for c in &e.comparisons {
            let _ = writeln!(t, "\nmode {} coupling {} level {}  D = {}", e.mode, e.coupling, c.level, c.dimension);
            for k in &c.coefficients {
                let _ = writeln!(
                    t,
                    "  λ^{}  symbolic {:>16}  oracle {:>16}  {}",
                    k.order,
                    k.symbolic,
                    k.oracle,
                    ok(k.matches)
                );
            }
            for p in &c.numeric {
                let _ = writeln!(
                    t,
                    "  λ = {:<8} series {:.12}  numeric {:.12}  residual {:.3e}",
                    p.lambda, p.series, p.eigenvalue, p.residual
                );
            }
            match c.slope {
                Some(s) => writeln!(t, "  slope {s:.3} (expected {}, {})", c.expected_slope, ok(c.slope_ok)),
                None => writeln!(t, "  slope n/a (residuals at round-off)"),
            }
            .expect("writing to a String");
            for i in &c.informational {
                let _ = writeln!(
                    t,
                    "  info: {} λ^{} {} vs {} ({})",
                    i.description,
                    i.order,
                    i.value,
                    i.oracle,
                    ok(i.matches)
                );
            }
        }
    }
    let _ = writeln!(t, "\ncoefficients {}  slopes {}", ok(report.all_coefficients_match), ok(report.all_slopes_ok));
    t
}

fn ok(flag: bool) -> &'static str {
    if flag {
        "ok"
    } else {
        "MISMATCH"
    }
}
