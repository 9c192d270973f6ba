//! `latgrowth`: degree tables, growth analysis and coefficient constraints
//! for lattice equations.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latgrowth::deauto::{self, DeautoError, GaugeSpec, GridFamily, LinearizationCheck, LinearizationMode};
use latgrowth::degrees::{self, BackendKind, DegreeError, DegreeTable};
use latgrowth::growth::{self, GrowthError};
use latgrowth::lattice::coeff::DEFAULT_CONSTANT;
use latgrowth::lattice::{CoefficientGrid, InitScheme, LatticeError, LatticeRule, Region, Sequence, Stencil, BUILTINS};
use latgrowth::reproduce;

#[derive(Parser, Debug)]
#[command(name = "latgrowth", version, about = "Degree growth and integrability of lattice equations")]
struct Cli {
    /// Worker threads for parallel trials.
    #[arg(long, global = true, env = "LATGROWTH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in equations.
    List(ListArgs),
    /// Compute a degree table.
    Degrees(DegreesArgs),
    /// Degree table plus closed-form fit, recursion, entropy and class.
    Analyze(AnalyzeArgs),
    /// Nonautonomous coefficient constraints.
    #[command(subcommand)]
    Deauto(DeautoCommand),
    /// Run every acceptance check and print a pass/fail summary.
    ReproducePaper(ReproduceArgs),
}

#[derive(Subcommand, Debug)]
enum DeautoCommand {
    /// Derive the constraint that cancels the movable factor.
    Derive(DeriveArgs),
    /// Compare constrained-grid degree tables with the autonomous table.
    Verify(VerifyArgs),
    /// Check the gauge that removes a product coefficient.
    Gauge(GaugeArgs),
    /// Check the linearisation of the Burgers-type rule.
    Linearize(LinearizeArgs),
}

#[derive(Args, Debug)]
struct RuleSource {
    /// Built-in rule name (see `list`).
    #[arg(long, conflicts_with = "rule_file", required_unless_present = "rule_file")]
    rule: Option<String>,
    /// Rule file with `name`, `stencil` and `rule` lines.
    #[arg(long)]
    rule_file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CoeffMode {
    Constant,
    GenericSymbolic,
    GenericRandom,
    Sum,
    Product,
    RowOnly,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Specialized,
}

impl From<Backend> for BackendKind {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Exact => BackendKind::Exact,
            Backend::Specialized => BackendKind::Specialized,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Sum,
    Product,
    RowOnly,
}

impl From<Family> for GridFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Sum => GridFamily::Sum,
            Family::Product => GridFamily::Product,
            Family::RowOnly => GridFamily::RowOnly,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Simple,
    General,
}

#[derive(Args, Debug)]
struct ListArgs {
    /// Append a rule loaded from a file.
    #[arg(long)]
    rule_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
    /// Shorthand for `--output json`.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    source: RuleSource,
    /// Initial-data scheme: corner, staircase or line (default depends on the stencil).
    #[arg(long)]
    init: Option<String>,
    #[arg(long, value_enum, default_value = "constant")]
    coeff: CoeffMode,
    /// Value of a constant coefficient.
    #[arg(long, default_value_t = DEFAULT_CONSTANT)]
    z: i64,
    /// Explicit f(n) values for sum and product grids.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f: Option<Vec<i64>>,
    /// Explicit g(m) values for sum, product and row-only grids.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    g: Option<Vec<i64>>,
    /// Region MxN: rows m = 0..M, columns n = 0..N.
    #[arg(long, default_value = "4x4")]
    region: String,
    #[arg(long, value_enum, default_value = "exact")]
    backend: Backend,
    /// Specialization trials for the specialized backend.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// On degenerate random data, retry with up to this many following seeds.
    #[arg(long, default_value_t = 0)]
    retry: u64,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DegreesArgs {
    #[command(flatten)]
    table: TableArgs,
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    table: TableArgs,
    /// `table` or `json`.
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
    /// Write the diagonal entropy series as CSV.
    #[arg(long)]
    entropy_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeriveArgs {
    #[command(flatten)]
    source: RuleSource,
    /// Cell `m,n` to work at (default: first cell where generic coefficients raise the degree).
    #[arg(long)]
    cell: Option<String>,
    /// Skip the degree-table verification of the matching grid family.
    #[arg(long)]
    no_verify: bool,
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: RuleSource,
    #[arg(long, value_enum)]
    coeff: Family,
    #[arg(long, default_value = "4x4")]
    region: String,
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    backend: Backend,
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
}

#[derive(Args, Debug)]
struct GaugeArgs {
    #[arg(long, default_value = "liouville")]
    rule: String,
    #[arg(long, default_value = "4x4")]
    region: String,
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
}

#[derive(Args, Debug)]
struct LinearizeArgs {
    #[arg(long, value_enum, default_value = "simple")]
    mode: Mode,
    #[arg(long, default_value = "4x6")]
    region: String,
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Take f(m) = 1 in simple mode.
    #[arg(long)]
    unit_f: bool,
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[arg(long, value_enum, default_value = "table")]
    output: Format,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Computation(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn computation(msg: impl Into<String>) -> Self {
        CliError::Computation(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Computation(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Computation(m) => ("computation", m),
        };
        write!(f, "error[{kind}]: {}", msg.replace('\n', " "))
    }
}

fn is_usage(e: &LatticeError) -> bool {
    matches!(
        e,
        LatticeError::Parse(_)
            | LatticeError::IllegalPlaceholder { .. }
            | LatticeError::ZeroDenominatorRule
            | LatticeError::UnknownRule(_)
            | LatticeError::RuleFile { .. }
            | LatticeError::IncompatibleScheme { .. }
            | LatticeError::BadRegion(_)
            | LatticeError::EmptyRegion { .. }
            | LatticeError::SymbolicCoefficient
            | LatticeError::SequenceIndex(_)
    )
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        if is_usage(&e) {
            CliError::usage(e.to_string())
        } else {
            CliError::computation(e.to_string())
        }
    }
}

impl From<DegreeError> for CliError {
    fn from(e: DegreeError) -> Self {
        match e {
            DegreeError::Lattice(l) => l.into(),
            DegreeError::NoTrials => CliError::usage(e.to_string()),
            _ => CliError::computation(e.to_string()),
        }
    }
}

impl From<GrowthError> for CliError {
    fn from(e: GrowthError) -> Self {
        match e {
            GrowthError::TooSmall { .. } => CliError::usage(e.to_string()),
            _ => CliError::computation(e.to_string()),
        }
    }
}

impl From<DeautoError> for CliError {
    fn from(e: DeautoError) -> Self {
        match e {
            DeautoError::Lattice(l) => l.into(),
            DeautoError::Degree(d) => d.into(),
            DeautoError::InvalidCell { .. } | DeautoError::NoSeeds | DeautoError::RegionTooSmall(_) => {
                CliError::usage(e.to_string())
            }
            _ => CliError::computation(e.to_string()),
        }
    }
}

/// Rendered output and whether the run counts as a failure.
struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            let _ = std::io::stdout().flush();
            if out.failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::computation(format!("cannot start thread pool: {e}")))?;
    }
    match cli.command {
        Command::List(a) => cmd_list(a),
        Command::Degrees(a) => cmd_degrees(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Deauto(DeautoCommand::Derive(a)) => cmd_derive(a),
        Command::Deauto(DeautoCommand::Verify(a)) => cmd_verify(a),
        Command::Deauto(DeautoCommand::Gauge(a)) => cmd_gauge(a),
        Command::Deauto(DeautoCommand::Linearize(a)) => cmd_linearize(a),
        Command::ReproducePaper(a) => cmd_reproduce(a),
    }
}

fn read_rule_file(path: &PathBuf) -> Result<LatticeRule, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read rule file {}: {e}", path.display())))?;
    Ok(LatticeRule::from_file_text(&text)?)
}

fn load_rule(src: &RuleSource) -> Result<LatticeRule, CliError> {
    match (&src.rule, &src.rule_file) {
        (Some(name), None) => Ok(LatticeRule::builtin(name)?),
        (None, Some(path)) => read_rule_file(path),
        _ => Err(CliError::usage("give exactly one of --rule or --rule-file")),
    }
}

fn parse_region(s: &str) -> Result<Region, CliError> {
    Ok(s.parse::<Region>()?)
}

fn parse_cell(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::usage(format!("invalid cell '{s}' (expected m,n)"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<Output, CliError> {
    match out {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::computation(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}

fn cmd_list(a: ListArgs) -> Result<Output, CliError> {
    let mut rows: Vec<(String, Stencil, String, String, bool)> =
        BUILTINS.iter().map(|b| (b.name.into(), b.stencil, b.expr.into(), b.description.into(), true)).collect();
    if let Some(path) = &a.rule_file {
        let r = read_rule_file(path)?;
        rows.push((r.name.clone(), r.stencil, r.expr.to_string(), format!("from {}", path.display()), false));
    }
    let format = if a.json { Format::Json } else { a.output };
    let text = match format {
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(name, st, rule, desc, builtin)| {
                    json!({"name": name, "stencil": st, "rule": rule, "description": desc, "builtin": builtin})
                })
                .collect(),
        )),
        Format::Csv => {
            let mut s = String::from("name,stencil,rule,description\n");
            for (name, st, rule, desc, _) in &rows {
                s.push_str(&format!("{name},{st},\"{rule}\",\"{desc}\"\n"));
            }
            s
        }
        Format::Table => {
            let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
            let rw = rows.iter().map(|r| r.2.len()).max().unwrap_or(0);
            rows.iter()
                .map(|(name, st, rule, desc, _)| format!("{name:<w$}  {:<4}  {rule:<rw$}  {desc}\n", st.to_string()))
                .collect()
        }
    };
    Ok(Output::ok(text))
}

fn coefficient_grid(a: &TableArgs, seed: u64) -> Result<CoefficientGrid, CliError> {
    let seq = |v: &Option<Vec<i64>>, fallback: CoefficientGrid, pick: fn(&CoefficientGrid) -> Sequence| match v {
        Some(v) => Sequence::Values(v.clone()),
        None => pick(&fallback),
    };
    let f_of = |g: &CoefficientGrid| match g {
        CoefficientGrid::Sum { f, .. } | CoefficientGrid::Product { f, .. } => f.clone(),
        _ => unreachable!("sum or product grid"),
    };
    let g_of = |g: &CoefficientGrid| match g {
        CoefficientGrid::Sum { g, .. } | CoefficientGrid::Product { g, .. } | CoefficientGrid::RowOnly { g } => g.clone(),
        _ => unreachable!("sequence grid"),
    };
    if !matches!(a.coeff, CoeffMode::Sum | CoeffMode::Product | CoeffMode::RowOnly) && (a.f.is_some() || a.g.is_some())
    {
        return Err(CliError::usage("--f and --g apply only to sum, product and row-only grids"));
    }
    Ok(match a.coeff {
        CoeffMode::Constant => CoefficientGrid::Constant(a.z),
        CoeffMode::GenericSymbolic => CoefficientGrid::GenericSymbolic,
        CoeffMode::GenericRandom => CoefficientGrid::GenericRandom { seed },
        CoeffMode::Sum => {
            let base = CoefficientGrid::sum_random(seed);
            CoefficientGrid::Sum { f: seq(&a.f, base.clone(), f_of), g: seq(&a.g, base, g_of) }
        }
        CoeffMode::Product => {
            let base = CoefficientGrid::product_random(seed);
            CoefficientGrid::Product { f: seq(&a.f, base.clone(), f_of), g: seq(&a.g, base, g_of) }
        }
        CoeffMode::RowOnly => {
            if a.f.is_some() {
                return Err(CliError::usage("--f does not apply to row-only grids"));
            }
            CoefficientGrid::RowOnly { g: seq(&a.g, CoefficientGrid::row_only_random(seed), g_of) }
        }
    })
}

fn degenerate(e: &DegreeError) -> bool {
    matches!(e, DegreeError::AllTrialsDegenerate { .. } | DegreeError::Lattice(LatticeError::ZeroDenominator { .. }))
}

fn compute_table(a: &TableArgs) -> Result<(LatticeRule, DegreeTable), CliError> {
    let rule = load_rule(&a.source)?;
    let region = parse_region(&a.region)?;
    let scheme = match &a.init {
        Some(s) => s.parse::<InitScheme>().map_err(CliError::usage)?,
        None => InitScheme::default_for(rule.stencil),
    };
    if a.backend == Backend::Specialized && a.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let mut last = None;
    for seed in a.seed..=a.seed.saturating_add(a.retry) {
        let coeffs = coefficient_grid(a, seed)?;
        let result = match a.backend {
            Backend::Exact => degrees::exact_table(&rule, scheme, &coeffs, region),
            Backend::Specialized => degrees::degree_table_specialized(&rule, scheme, &coeffs, region, a.trials, seed),
        };
        match result {
            Ok(mut t) => {
                t.meta.seed = Some(seed);
                return Ok((rule, t));
            }
            Err(e) if degenerate(&e) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    let e = last.expect("at least one attempt");
    Err(CliError::computation(if a.retry > 0 {
        format!("{e} (seeds {}..={} all degenerate)", a.seed, a.seed.saturating_add(a.retry))
    } else {
        format!("{e}; rerun with --retry N to try following seeds")
    }))
}

fn cmd_degrees(a: DegreesArgs) -> Result<Output, CliError> {
    let (_, table) = compute_table(&a.table)?;
    let text = match a.output {
        Format::Table => table.to_text(),
        Format::Json => json_text(&table.to_json()),
        Format::Csv => table.to_csv(),
    };
    emit(text, &a.table.out)
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<Output, CliError> {
    if a.output == Format::Csv {
        return Err(CliError::usage("analyze supports --output table or json; use --entropy-csv for CSV"));
    }
    let (_, table) = compute_table(&a.table)?;
    let report = growth::analyze(&table)?;
    if let Some(path) = &a.entropy_csv {
        fs::write(path, growth::entropy_csv(&table))
            .map_err(|e| CliError::computation(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = match a.output {
        Format::Json => {
            let mut v = report.to_json();
            v["table"] = table.to_json();
            json_text(&v)
        }
        _ => format!("{}\n{}", table.to_text(), report.to_text()),
    };
    emit(text, &a.table.out)
}

/// Region used to locate the first discrepancy when no cell is given.
fn discovery_region(stencil: Stencil) -> Region {
    match stencil {
        Stencil::Quad => Region::new(4, 4),
        Stencil::Tri => Region::new(5, 4),
    }
}

fn cmd_derive(a: DeriveArgs) -> Result<Output, CliError> {
    let rule = load_rule(&a.source)?;
    let cell = match &a.cell {
        Some(s) => parse_cell(s)?,
        None => match deauto::first_discrepancy(&rule, discovery_region(rule.stencil))? {
            Some(d) => (d.m as i64, d.n as i64),
            None => {
                return Err(CliError::computation(format!(
                    "generic coefficients do not change the degrees of '{}' on {}",
                    rule.name,
                    discovery_region(rule.stencil)
                )))
            }
        },
    };
    let c = deauto::derive_constraint(&rule, cell)?;
    let family = deauto::matching_family(&c)?;
    let verified = match (&family, a.no_verify) {
        (Some(f), false) => Some(
            deauto::verify_constraint(&rule, f, Region::new(4, 4), reproduce::SEEDS, 0, BackendKind::Exact)?.pass,
        ),
        _ => None,
    };
    let text = match a.output {
        Format::Json => {
            let mut v = c.to_json();
            v["family"] = json!(family.as_ref().map(GridFamily::name));
            v["verified"] = json!(verified);
            json_text(&v)
        }
        Format::Table => {
            let mut s = format!(
                "constraint:     {}\ncell:           ({},{})\nmovable factor: {}\nfamily:         {}\n",
                c.poly,
                c.cell.0,
                c.cell.1,
                c.movable_factor,
                family.as_ref().map_or("none", GridFamily::name)
            );
            if let Some(v) = verified {
                s.push_str(&format!("verified:       {v}\n"));
            }
            s
        }
        Format::Csv => return Err(CliError::usage("deauto derive supports --output table or json")),
    };
    Ok(Output::ok(text))
}

fn cmd_verify(a: VerifyArgs) -> Result<Output, CliError> {
    let rule = load_rule(&a.source)?;
    let region = parse_region(&a.region)?;
    let family: GridFamily = a.coeff.into();
    let r = deauto::verify_constraint(&rule, &family, region, a.seeds, a.seed, a.backend.into())?;
    let text = match a.output {
        Format::Json => {
            let mut v = r.to_json();
            v["rule"] = json!(rule.name);
            v["family"] = json!(family.name());
            json_text(&v)
        }
        Format::Table => {
            let mut s = format!("{} {} on {}: {}\n", rule.name, family.name(), region, pass_word(r.pass));
            for t in &r.trials {
                match &t.comparison.first_discrepancy {
                    None => s.push_str(&format!("  seed {}: equal\n", t.seed)),
                    Some(d) => s.push_str(&format!(
                        "  seed {}: differs at ({},{}): autonomous {} vs {}\n",
                        t.seed, d.m, d.n, d.a, d.b
                    )),
                }
            }
            s
        }
        Format::Csv => return Err(CliError::usage("deauto verify supports --output table or json")),
    };
    Ok(Output::ok(text))
}

fn seed_results(
    seeds: usize,
    base: u64,
    check: impl Fn(u64) -> Result<bool, DeautoError>,
) -> Result<Vec<(u64, bool)>, CliError> {
    if seeds == 0 {
        return Err(CliError::usage("--seeds must be at least 1"));
    }
    (base..base + seeds as u64).map(|s| Ok((s, check(s)?))).collect()
}

fn check_report(title: String, results: &[(u64, bool)], format: Format, extra: Value) -> Result<Output, CliError> {
    let pass = results.iter().all(|r| r.1);
    let text = match format {
        Format::Json => {
            let mut v = json!({
                "pass": pass,
                "trials": results.iter().map(|(s, ok)| json!({"seed": s, "pass": ok})).collect::<Vec<_>>(),
            });
            if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
                m.extend(e);
            }
            json_text(&v)
        }
        Format::Table => {
            let mut s = format!("{title}: {}\n", pass_word(pass));
            for (seed, ok) in results {
                s.push_str(&format!("  seed {seed}: {}\n", pass_word(*ok)));
            }
            s
        }
        Format::Csv => return Err(CliError::usage("checks support --output table or json")),
    };
    Ok(Output::ok(text))
}

fn cmd_gauge(a: GaugeArgs) -> Result<Output, CliError> {
    let rule = LatticeRule::builtin(&a.rule)?;
    let region = parse_region(&a.region)?;
    let results =
        seed_results(a.seeds, a.seed, |s| deauto::check_gauge_with(&rule, region, &GaugeSpec::random(region, s), s))?;
    check_report(
        format!("{} gauge on {}", rule.name, region),
        &results,
        a.output,
        json!({"rule": rule.name, "region": [region.rows, region.cols]}),
    )
}

fn cmd_linearize(a: LinearizeArgs) -> Result<Output, CliError> {
    let region = parse_region(&a.region)?;
    let mode = match a.mode {
        Mode::Simple => LinearizationMode::Simple,
        Mode::General => LinearizationMode::General,
    };
    if a.unit_f && mode != LinearizationMode::Simple {
        return Err(CliError::usage("--unit-f applies only to --mode simple"));
    }
    let check = LinearizationCheck { unit_f: a.unit_f, ..LinearizationCheck::new(mode) };
    let results = seed_results(a.seeds, a.seed, |s| deauto::check_burgers_linearization_with(check, region, s))?;
    let name = if mode == LinearizationMode::Simple { "simple" } else { "general" };
    check_report(
        format!("burgers {name} linearisation on {region}"),
        &results,
        a.output,
        json!({"mode": name, "unit_f": a.unit_f, "region": [region.rows, region.cols]}),
    )
}

fn cmd_reproduce(a: ReproduceArgs) -> Result<Output, CliError> {
    let results = reproduce::run_all();
    let passed = results.iter().filter(|r| r.pass()).count();
    let text = match a.output {
        Format::Json => json_text(&json!({
            "pass": passed == results.len(),
            "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut s = String::new();
            for r in &results {
                s.push_str(&format!("{r}\n"));
            }
            s.push_str(&format!("{passed} of {} criteria pass\n", results.len()));
            s
        }
        Format::Csv => return Err(CliError::usage("reproduce-paper supports --output table or json")),
    };
    Ok(Output { text, failed: passed != results.len() })
}
