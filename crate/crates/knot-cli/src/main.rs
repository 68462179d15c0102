//! `knot` — command-line surface over the `knotkit` library.
//!
//! Subcommands: `parse` (diagram statistics), `pi1` (knot group and
//! peripheral system), `alexander` (two polynomial routes), `kch verify`
//! (randomized identity suites), `recover` (peripheral recovery from
//! isomorphism data), and `census` (list the knot table).
//!
//! Exit codes: 0 success, 1 usage or schema error, 2 input validation
//! failure, 3 route disagreement, 4 failed identity, 5 recovery match
//! failure, 6 recovery verification undecided.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use knotkit::alexander::{alexander_polynomial, fox_oracle, LaurentPoly, PolyWire};
use knotkit::fpgroup::{knot_group, BackendConfig, BackendKind};
use knotkit::groupring::{complementarity_check, RingContext};
use knotkit::knotio::{
    braid_closure, bundled_census, load_census, parse_braid, parse_gauss, parse_pd, CensusEntry,
    KnotDiagram,
};
use knotkit::recovery::{recover_peripheral, scenario_iso_data, IsoData, IsoDataWire, Scenario};
use knotkit::stringmod::{phi_invariance_check, product_check, skein_check, CheckLine};
use knotkit::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_IDENTITY: u8 = 4;
const EXIT_MATCH: u8 = 5;
const EXIT_UNKNOWN: u8 = 6;

/// Symbolic knot invariants: diagrams, groups, group rings, recovery.
#[derive(Parser, Debug)]
#[command(name = "knot", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Word-problem backend.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendOpt>,
    /// Backend budgets as `rules,length,degree` (default `200,32,4`).
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<Budget>,
    /// Seed for the randomized identity suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample count for the randomized identity suites.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// JSON config file; explicit flags take precedence over its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Census JSONL file (falls back to $KNOT_CENSUS, then the bundled
    /// table).
    #[arg(long, global = true)]
    census: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a knot input and print diagram statistics.
    Parse(InputArgs),
    /// Print the knot group presentation and peripheral system.
    Pi1(InputArgs),
    /// Compute the Alexander polynomial.
    Alexander(AlexanderArgs),
    /// Group-ring level identity checking.
    Kch {
        #[command(subcommand)]
        command: KchCommand,
    },
    /// Run the peripheral-recovery pipeline on isomorphism data.
    Recover(RecoverArgs),
    /// List the knot census in use.
    Census,
}

#[derive(Subcommand, Debug)]
enum KchCommand {
    /// Run the randomized identity suites against one knot.
    Verify(VerifyArgs),
}

/// Exactly one diagram source.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Census knot name, e.g. `3_1`.
    #[arg(long)]
    name: Option<String>,
    /// PD code, e.g. `PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]`.
    #[arg(long)]
    pd: Option<String>,
    /// Signed Gauss code.
    #[arg(long)]
    gauss: Option<String>,
    /// Braid word whose closure is the knot, e.g. `1 1 1`.
    #[arg(long)]
    braid: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct AlexanderArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Compute via the Fox-calculus route instead of the coloring matrix.
    #[arg(long, value_enum)]
    oracle: Option<OracleOpt>,
    /// Run both routes and report agreement.
    #[arg(long)]
    compare: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OracleOpt {
    /// Fox-calculus minor gcd over the Wirtinger presentation.
    Fox,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    /// Census knot name, e.g. `3_1`.
    name: Option<String>,
    /// PD code input instead of a census name.
    #[arg(long)]
    pd: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct RecoverArgs {
    /// Isomorphism-data JSON file.
    #[arg(long, conflicts_with_all = ["scenario", "name"], required_unless_present = "scenario")]
    file: Option<PathBuf>,
    /// Built-in self-isomorphism scenario.
    #[arg(long, value_parser = parse_scenario, requires = "name", required_unless_present = "file")]
    scenario: Option<Scenario>,
    /// Census knot the scenario is built on.
    #[arg(long)]
    name: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BackendOpt {
    #[value(name = "free_reduce")]
    FreeReduce,
    #[value(name = "knuth_bendix_bounded")]
    KnuthBendixBounded,
    #[value(name = "torus_knot_normal_form")]
    TorusKnotNormalForm,
    #[value(name = "finite_quotient_separator")]
    FiniteQuotientSeparator,
}

impl From<BackendOpt> for BackendKind {
    fn from(b: BackendOpt) -> BackendKind {
        match b {
            BackendOpt::FreeReduce => BackendKind::FreeReduce,
            BackendOpt::KnuthBendixBounded => BackendKind::KnuthBendixBounded,
            BackendOpt::TorusKnotNormalForm => BackendKind::TorusKnotNormalForm,
            BackendOpt::FiniteQuotientSeparator => BackendKind::FiniteQuotientSeparator,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Budget {
    rules: usize,
    length: usize,
    degree: usize,
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected `rules,length,degree`, e.g. `200,32,4`".into());
    }
    let parse = |p: &str, what: &str| -> Result<usize, String> {
        let v: usize = p
            .trim()
            .parse()
            .map_err(|e| format!("bad {what} budget {p:?}: {e}"))?;
        if v == 0 {
            return Err(format!("{what} budget must be positive"));
        }
        Ok(v)
    };
    Ok(Budget {
        rules: parse(parts[0], "rule")?,
        length: parse(parts[1], "length")?,
        degree: parse(parts[2], "degree")?,
    })
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Config file schema; every field optional, flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    backend: Option<BackendOpt>,
    rule_limit: Option<usize>,
    length_limit: Option<usize>,
    degree_bound: Option<usize>,
    samples: Option<u64>,
    seed: Option<u64>,
    census: Option<PathBuf>,
    format: Option<Format>,
}

/// A command failure carrying its exit code; message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

/// Default error → exit-code mapping; `recover` overrides the schema
/// cases itself.
impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::MatchFailure(_) => EXIT_MATCH,
            Error::Unknown(_) => EXIT_UNKNOWN,
            _ => EXIT_VALIDATION,
        };
        Failure::new(code, e.to_string())
    }
}

/// Flag/config/env resolution result.
struct Settings {
    format: Format,
    backend: BackendConfig,
    samples: u64,
    seed: u64,
    census: Census,
}

enum Census {
    Bundled,
    File(PathBuf, Vec<CensusEntry>),
}

impl Census {
    fn entries(&self) -> &[CensusEntry] {
        match self {
            Census::Bundled => bundled_census(),
            Census::File(_, entries) => entries,
        }
    }

    fn source(&self) -> String {
        match self {
            Census::Bundled => "bundled".to_string(),
            Census::File(path, _) => path.display().to_string(),
        }
    }

    fn lookup(&self, name: &str) -> Result<&CensusEntry, Failure> {
        self.entries().iter().find(|e| e.name == name).ok_or_else(|| {
            Failure::new(
                EXIT_VALIDATION,
                format!("unknown census knot {name:?} (source: {})", self.source()),
            )
        })
    }
}

impl Settings {
    fn resolve(opts: &GlobalOpts) -> Result<Settings, Failure> {
        let file: FileConfig = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::new(EXIT_USAGE, format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    Failure::new(EXIT_USAGE, format!("config {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        let defaults = BackendConfig::default();
        let kind = opts
            .backend
            .or(file.backend)
            .map(BackendKind::from)
            .unwrap_or(defaults.kind);
        let backend = match opts.budget {
            Some(b) => BackendConfig {
                kind,
                rule_limit: b.rules,
                length_limit: b.length,
                degree_bound: b.degree,
            },
            None => BackendConfig {
                kind,
                rule_limit: file.rule_limit.unwrap_or(defaults.rule_limit),
                length_limit: file.length_limit.unwrap_or(defaults.length_limit),
                degree_bound: file.degree_bound.unwrap_or(defaults.degree_bound),
            },
        };
        if backend.rule_limit == 0 || backend.length_limit == 0 || backend.degree_bound == 0 {
            return Err(Failure::new(EXIT_USAGE, "backend budgets must be positive"));
        }
        let census_path = opts
            .census
            .clone()
            .or_else(|| std::env::var_os("KNOT_CENSUS").map(PathBuf::from))
            .or(file.census);
        let census = match census_path {
            Some(path) => {
                let entries = load_census(&path)
                    .map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string()))?;
                Census::File(path, entries)
            }
            None => Census::Bundled,
        };
        Ok(Settings {
            format: opts.format.or(file.format).unwrap_or(Format::Text),
            backend,
            samples: opts.samples.or(file.samples).unwrap_or(100),
            seed: opts.seed.or(file.seed).unwrap_or(0),
            census,
        })
    }

    /// Diagram from exactly one input source.
    fn diagram(&self, input: &InputArgs) -> Result<(Option<String>, KnotDiagram), Failure> {
        if let Some(name) = &input.name {
            let entry = self.census.lookup(name)?;
            let d = parse_pd(&entry.pd)?;
            return Ok((Some(name.clone()), d));
        }
        if let Some(pd) = &input.pd {
            return Ok((None, parse_pd(pd)?));
        }
        if let Some(gauss) = &input.gauss {
            return Ok((None, parse_gauss(gauss)?));
        }
        if let Some(braid) = &input.braid {
            return Ok((None, braid_closure(&parse_braid(braid)?)?));
        }
        Err(Failure::new(EXIT_USAGE, "no input given"))
    }

    fn emit<T: Serialize>(&self, report: &T, text: String) -> Result<(), Failure> {
        match self.format {
            Format::Json => {
                let json = serde_json::to_string_pretty(report).map_err(|e| {
                    Failure::new(EXIT_VALIDATION, format!("report serialization: {e}"))
                })?;
                println!("{json}");
            }
            Format::Text => print!("{text}"),
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let settings = Settings::resolve(&cli.global)?;
    match &cli.command {
        Command::Parse(input) => cmd_parse(&settings, input),
        Command::Pi1(input) => cmd_pi1(&settings, input),
        Command::Alexander(args) => cmd_alexander(&settings, args),
        Command::Kch { command: KchCommand::Verify(args) } => cmd_kch_verify(&settings, args),
        Command::Recover(args) => cmd_recover(&settings, args),
        Command::Census => cmd_census(&settings),
    }
}

// ---------------------------------------------------------------------------
// parse
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ParseReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    crossings: usize,
    arcs: usize,
    writhe: i64,
    valid: bool,
}

fn cmd_parse(settings: &Settings, input: &InputArgs) -> Result<(), Failure> {
    let (name, d) = settings.diagram(input)?;
    let report = ParseReport {
        name,
        crossings: d.crossing_count(),
        arcs: d.arc_count(),
        writhe: d.writhe(),
        valid: true,
    };
    let mut text = String::new();
    if let Some(n) = &report.name {
        let _ = writeln!(text, "name: {n}");
    }
    let _ = writeln!(text, "crossings: {}", report.crossings);
    let _ = writeln!(text, "arcs: {}", report.arcs);
    let _ = writeln!(text, "writhe: {}", report.writhe);
    let _ = writeln!(text, "valid: {}", report.valid);
    settings.emit(&report, text)
}

// ---------------------------------------------------------------------------
// pi1
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Pi1Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    generators: usize,
    relators: Vec<Vec<i32>>,
    meridian: Vec<i32>,
    longitude: Vec<i32>,
}

fn cmd_pi1(settings: &Settings, input: &InputArgs) -> Result<(), Failure> {
    let (name, d) = settings.diagram(input)?;
    let g = knot_group(&d);
    let report = Pi1Report {
        name,
        generators: g.presentation.generator_count,
        relators: g.presentation.relators.iter().map(|r| r.letters().to_vec()).collect(),
        meridian: g.peripheral.meridian.letters().to_vec(),
        longitude: g.peripheral.longitude.letters().to_vec(),
    };
    let mut text = String::new();
    if let Some(n) = &report.name {
        let _ = writeln!(text, "name: {n}");
    }
    let _ = writeln!(text, "generators: {}", report.generators);
    for r in &g.presentation.relators {
        let _ = writeln!(text, "relator: {r}");
    }
    let _ = writeln!(text, "meridian: {}", g.peripheral.meridian);
    let _ = writeln!(text, "longitude: {}", g.peripheral.longitude);
    settings.emit(&report, text)
}

// ---------------------------------------------------------------------------
// alexander
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AlexanderReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    route: String,
    polynomial: PolyWire,
    #[serde(skip_serializing_if = "Option::is_none")]
    compare: Option<CompareReport>,
}

#[derive(Serialize)]
struct CompareReport {
    quandle: PolyWire,
    fox: PolyWire,
    agree: bool,
}

fn fox_route(d: &KnotDiagram) -> Result<LaurentPoly, Failure> {
    Ok(fox_oracle(&knot_group(d).wirtinger)?)
}

fn cmd_alexander(settings: &Settings, args: &AlexanderArgs) -> Result<(), Failure> {
    let (name, d) = settings.diagram(&args.input)?;
    let quandle = alexander_polynomial(&d)?;
    let (route, polynomial) = match args.oracle {
        Some(OracleOpt::Fox) => ("fox", fox_route(&d)?),
        None => ("quandle", quandle.clone()),
    };
    let compare = if args.compare {
        let fox = fox_route(&d)?;
        Some(CompareReport {
            quandle: quandle.to_wire(),
            agree: quandle == fox,
            fox: fox.to_wire(),
        })
    } else {
        None
    };
    let report = AlexanderReport {
        name,
        route: route.to_string(),
        polynomial: polynomial.to_wire(),
        compare,
    };
    let mut text = String::new();
    if let Some(n) = &report.name {
        let _ = writeln!(text, "name: {n}");
    }
    let _ = writeln!(text, "route: {}", report.route);
    let _ = writeln!(text, "alexander: {polynomial}");
    let _ = writeln!(text, "coeffs: {:?} (from t^{})", polynomial.coeffs(), polynomial.min_exp());
    if let Some(c) = &report.compare {
        let _ = writeln!(text, "agree: {}", c.agree);
    }
    let disagree = report.compare.as_ref().is_some_and(|c| !c.agree);
    settings.emit(&report, text)?;
    if disagree {
        return Err(Failure::new(
            EXIT_DISAGREE,
            "quandle and fox routes disagree (convention bug)",
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// kch verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    seed: u64,
    samples: u64,
    backend: BackendConfig,
    lines: Vec<CheckLine>,
    passes: u64,
    failures: u64,
    unknowns: u64,
}

fn cmd_kch_verify(settings: &Settings, args: &VerifyArgs) -> Result<(), Failure> {
    let input = InputArgs {
        name: args.name.clone(),
        pd: args.pd.clone(),
        gauss: None,
        braid: None,
    };
    let (name, d) = settings.diagram(&input)?;
    let ctx = RingContext::new(knot_group(&d), settings.backend)?;
    let (samples, seed) = (settings.samples, settings.seed);
    let mut lines: Vec<CheckLine> = Vec::new();
    if samples > 0 {
        for report in [
            skein_check(&ctx, samples, seed)?,
            phi_invariance_check(&ctx, samples, seed)?,
            product_check(&ctx, samples, seed)?,
            complementarity_check(&ctx, samples, seed)?,
        ] {
            lines.extend(report.lines);
        }
    }
    let passes = lines.iter().map(|l| l.pass).sum();
    let failures = lines.iter().map(|l| l.fail).sum();
    let unknowns = lines.iter().map(|l| l.unknown).sum();
    let report = VerifyReport {
        name,
        seed,
        samples,
        backend: settings.backend,
        lines,
        passes,
        failures,
        unknowns,
    };
    let mut text = String::new();
    if let Some(n) = &report.name {
        let _ = writeln!(text, "name: {n}");
    }
    let _ = writeln!(text, "seed: {seed}  samples: {samples}");
    for l in &report.lines {
        let _ = writeln!(
            text,
            "{}: {} pass, {} fail, {} unknown",
            l.name, l.pass, l.fail, l.unknown
        );
    }
    let _ = writeln!(
        text,
        "total: {} pass, {} fail, {} unknown",
        report.passes, report.failures, report.unknowns
    );
    settings.emit(&report, text)?;
    if report.failures > 0 {
        return Err(Failure::new(
            EXIT_IDENTITY,
            format!("{} identity check(s) failed", report.failures),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// recover
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RecoverReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    conjugator: Vec<i32>,
    sign_m: i8,
    sign_l: i8,
    n3_check: i64,
    psi_meridian: Vec<i32>,
    psi_longitude: Vec<i32>,
    verified: bool,
}

fn cmd_recover(settings: &Settings, args: &RecoverArgs) -> Result<(), Failure> {
    let (data, name, scenario, file): (IsoData, _, _, _) = match (&args.file, &args.scenario) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display()))
            })?;
            let wire: IsoDataWire = serde_json::from_str(&text).map_err(|e| {
                Failure::new(EXIT_USAGE, format!("{}: {e}", path.display()))
            })?;
            let data = IsoData::from_wire(&wire, settings.backend).map_err(|e| match e {
                Error::Validation(_) | Error::Syntax(_) | Error::ContextMismatch(_) => {
                    Failure::new(EXIT_USAGE, e.to_string())
                }
                other => Failure::from(other),
            })?;
            (data, None, None, Some(path.display().to_string()))
        }
        (None, Some(scenario)) => {
            let name = args.name.as_deref().expect("clap `requires` enforces --name");
            let entry = settings.census.lookup(name)?;
            let d = parse_pd(&entry.pd)?;
            let data = scenario_iso_data(&d, *scenario, settings.backend)?;
            (data, Some(name.to_string()), Some(scenario.to_string()), None)
        }
        (None, None) => {
            return Err(Failure::new(EXIT_USAGE, "need --file or --scenario/--name"))
        }
    };
    let result = recover_peripheral(&data)?;
    let report = RecoverReport {
        name,
        scenario,
        file,
        conjugator: result.conjugator.letters().to_vec(),
        sign_m: result.sign_m,
        sign_l: result.sign_l,
        n3_check: result.n3_check,
        psi_meridian: result.psi_meridian.letters().to_vec(),
        psi_longitude: result.psi_longitude.letters().to_vec(),
        verified: true,
    };
    let mut text = String::new();
    if let Some(n) = &report.name {
        let _ = writeln!(text, "name: {n}");
    }
    if let Some(s) = &report.scenario {
        let _ = writeln!(text, "scenario: {s}");
    }
    let _ = writeln!(text, "conjugator: {}", result.conjugator);
    let _ = writeln!(text, "sign_m: {:+}", report.sign_m);
    let _ = writeln!(text, "sign_l: {:+}", report.sign_l);
    let _ = writeln!(text, "psi(m): {}", result.psi_meridian);
    let _ = writeln!(text, "psi(l): {}", result.psi_longitude);
    let _ = writeln!(text, "verified: true");
    settings.emit(&report, text)
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CensusReport {
    source: String,
    count: usize,
    entries: Vec<CensusRow>,
}

#[derive(Serialize)]
struct CensusRow {
    name: String,
    crossings: usize,
    writhe: i64,
}

fn cmd_census(settings: &Settings) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for entry in settings.census.entries() {
        let d = parse_pd(&entry.pd)?;
        rows.push(CensusRow {
            name: entry.name.clone(),
            crossings: d.crossing_count(),
            writhe: d.writhe(),
        });
    }
    let report = CensusReport {
        source: settings.census.source(),
        count: rows.len(),
        entries: rows,
    };
    let mut text = String::new();
    let _ = writeln!(text, "source: {}", report.source);
    let _ = writeln!(text, "count: {}", report.count);
    for row in &report.entries {
        let _ = writeln!(
            text,
            "{}: {} crossings, writhe {}",
            row.name, row.crossings, row.writhe
        );
    }
    settings.emit(&report, text)
}
