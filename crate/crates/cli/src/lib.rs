//! Command-line front end: input loading, report formatting, exit codes.
//!
//! Exit code contract: 0 success, 1 check/suite failure, 2 input error,
//! 3 enumeration budget exceeded.

pub mod report;
pub mod suites;

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use curvecert_core::config::{Divisor, SurfaceConfiguration};
use curvecert_core::connectivity::{connectedness_number, EnumerationBudget, DEFAULT_MAX_CANDIDATES};
use curvecert_core::error::Error;
use curvecert_core::generators::{gen_chain, gen_cycle, gen_multiple_fiber, gen_star, sample_batch, InstanceFilter, SamplerSpec};
use curvecert_core::intersection::{arithmetic_genus, intersect};
use curvecert_core::order::box_size;
use curvecert_core::structure::{chain_decomposition_search, enumerate_subcurves, fixed_part_report, genus_spectrum};

use report::{
    csv, AnalyzeReport, CheckSuiteReport, ConnectReport, DecomposeReport, DecompositionJson, Envelope,
    GenReport, InstanceJson, RunManifest, SampleReport, SubcurveEntry, SubcurvesReport,
};
use suites::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("cannot access {path}: {detail}")]
    Io { path: String, detail: String },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "curvecert",
    version,
    about = "Exact intersection arithmetic, connectedness numbers, and fixed-part consistency reports for curve configurations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Enumeration budget (candidates per enumeration).
    #[arg(long, default_value_t = DEFAULT_MAX_CANDIDATES)]
    pub max_candidates: u64,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Configuration JSON file.
    #[arg(short = 'c', long = "config")]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    /// Divisor as comma-separated multiplicities.
    #[arg(short = 'd', long = "divisor")]
    pub divisor: Option<String>,
    /// Divisor as a JSON file {"mult": [...]}.
    #[arg(long)]
    pub divisor_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genus, intersection degrees, and connectedness number of a divisor.
    Analyze {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        divisor: DivisorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Connectedness number, with an optional m-connectedness query.
    Connect {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        divisor: DivisorArgs,
        /// Threshold for an m-connectedness verdict.
        #[arg(short = 'm', long, allow_hyphen_values = true)]
        m: Option<i64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate subcurves with their genera and the genus spectrum.
    Subcurves {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        divisor: DivisorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search a chain decomposition of a part A of D.
    Decompose {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        divisor: DivisorArgs,
        /// Part A as comma-separated multiplicities.
        #[arg(short = 'a', long = "part")]
        part: Option<String>,
        /// Part A as a JSON file {"mult": [...]}.
        #[arg(long)]
        part_file: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Consistency report for a fixed-part candidate Z inside D.
    Fixedpart {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        divisor: DivisorArgs,
        /// Fixed-part candidate Z as comma-separated multiplicities.
        #[arg(short = 'z', long = "fixed")]
        fixed: Option<String>,
        /// Fixed-part candidate Z as a JSON file {"mult": [...]}.
        #[arg(long)]
        fixed_file: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit a named fixture family.
    Gen {
        /// Fixture family.
        #[arg(long, value_enum)]
        family: Family,
        /// Component count (chain, cycle) or leaf count (star).
        #[arg(long)]
        n: usize,
        /// Self-intersection of chain components.
        #[arg(long = "self", default_value_t = -2, allow_hyphen_values = true)]
        self_int: i64,
        /// Canonical degree of chain components.
        #[arg(long = "k", default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        /// Scale the divisor into a multiple fibre (>= 2).
        #[arg(long)]
        scale: Option<i64>,
        /// Write the configuration document to this path.
        #[arg(short = 'o', long)]
        output_file: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw seeded random instances, smallest first.
    Sample {
        /// Reproducibility seed (required with --format json).
        #[arg(long)]
        seed: Option<u64>,
        /// Number of instances.
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// Maximum component count.
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Maximum multiplicity.
        #[arg(long, default_value_t = 3)]
        mult_max: i64,
        /// Probability of a positive off-diagonal.
        #[arg(long, default_value_t = 0.5)]
        edge_density: f64,
        /// Rejection filter: one_connected or all_subcurve_pa_nonpositive.
        #[arg(long)]
        filter: Option<String>,
        /// Write the instance list to this path.
        #[arg(short = 'o', long)]
        output_file: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a named invariant suite.
    Check {
        /// Suite: additivity, prop_go, lemma_b, split_conn, h1_nonneg.
        #[arg(long)]
        suite: String,
        /// Reproducibility seed (required with --format json for randomized suites).
        #[arg(long)]
        seed: Option<u64>,
        /// Suite scale: sample count for randomized suites, maximum
        /// component count for exhaustive ones.
        #[arg(long)]
        count: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Chain,
    Cycle,
    Star,
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn load_config(path: &Path) -> CliResult<Arc<SurfaceConfiguration>> {
    let text = read_file(path)?;
    Ok(Arc::new(SurfaceConfiguration::from_json_str(&text)?))
}

#[derive(serde::Deserialize)]
struct DivisorDoc {
    mult: Vec<i64>,
}

/// Resolve a divisor given inline CSV and/or a JSON file; inline wins on
/// conflict with a warning on stderr.
fn resolve_divisor(
    cfg: &Arc<SurfaceConfiguration>,
    inline: &Option<String>,
    file: &Option<PathBuf>,
    what: &str,
) -> CliResult<Divisor> {
    match (inline, file) {
        (Some(text), Some(path)) => {
            eprintln!(
                "warning: both inline {what} and file {} given; inline wins",
                path.display()
            );
            Ok(Divisor::from_csv(cfg.clone(), text)?)
        }
        (Some(text), None) => Ok(Divisor::from_csv(cfg.clone(), text)?),
        (None, Some(path)) => {
            let text = read_file(path)?;
            let doc: DivisorDoc =
                serde_json::from_str(&text).map_err(|e| CliError::Core(Error::Json(e.to_string())))?;
            Ok(Divisor::new(cfg.clone(), doc.mult)?)
        }
        (None, None) => Err(CliError::Input(format!("missing {what}: pass it inline or as a file"))),
    }
}

fn budget_from(max_candidates: u64) -> CliResult<EnumerationBudget> {
    Ok(EnumerationBudget::new(max_candidates)?)
}

/// Write to stdout, treating a closed pipe as a normal early exit.
fn print_or_exit(text: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = lock.write_all(text.as_bytes()).and_then(|_| lock.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(EXIT_OK);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(EXIT_INPUT);
    }
}

fn emit<T: Serialize>(output: &OutputArgs, mut manifest: RunManifest, report: &T, table: String, started: Instant) {
    manifest.wall_time_ms = Some(started.elapsed().as_millis() as u64);
    match output.format {
        Format::Json => {
            let envelope = Envelope { manifest, report };
            let text = serde_json::to_string_pretty(&envelope).expect("serializable report");
            print_or_exit(&format!("{text}\n"));
        }
        Format::Table => {
            let footer = format!(
                "({} | budget {} | v{} | {} ms)\n",
                manifest.command,
                manifest.max_candidates,
                manifest.version,
                manifest.wall_time_ms.unwrap_or(0)
            );
            print_or_exit(&format!("{table}{footer}"));
        }
    }
}

fn decomposition_json(dec: &curvecert_core::config::Decomposition) -> CliResult<DecompositionJson> {
    Ok(DecompositionJson {
        a: dec.a.mult().to_vec(),
        b: dec.b.mult().to_vec(),
        pairing: intersect(&dec.a, &dec.b)?,
    })
}

pub fn run(cli: Cli) -> CliResult<i32> {
    let started = Instant::now();
    match cli.command {
        Command::Analyze { config, divisor, output } => {
            let cfg = load_config(&config.config)?;
            let d = resolve_divisor(&cfg, &divisor.divisor, &divisor.divisor_file, "divisor")?;
            let budget = budget_from(output.max_candidates)?;
            let genus = arithmetic_genus(&d)?;
            let conn = connectedness_number(&d, &budget)?;
            let argmin = conn.argmin.as_ref().map(decomposition_json).transpose()?;
            let report = AnalyzeReport {
                config: cfg.name().to_string(),
                divisor: d.mult().to_vec(),
                pa: genus.pa,
                self_intersection: genus.self_int,
                k_degree: genus.k_degree,
                conn: conn.conn,
                argmin,
                candidates_examined: conn.candidates_examined,
            };
            let table = render_analyze(&report);
            let manifest = RunManifest::new("analyze", None, output.max_candidates);
            emit(&output, manifest, &report, table, started);
            Ok(EXIT_OK)
        }
        Command::Connect { config, divisor, m, output } => {
            let cfg = load_config(&config.config)?;
            let d = resolve_divisor(&cfg, &divisor.divisor, &divisor.divisor_file, "divisor")?;
            let budget = budget_from(output.max_candidates)?;
            let conn = connectedness_number(&d, &budget)?;
            let argmin = conn.argmin.as_ref().map(decomposition_json).transpose()?;
            let report = ConnectReport {
                config: cfg.name().to_string(),
                divisor: d.mult().to_vec(),
                conn: conn.conn,
                argmin,
                candidates_examined: conn.candidates_examined,
                m,
                m_connected: m.map(|m| conn.conn.at_least(m)),
            };
            let table = render_connect(&report);
            let manifest = RunManifest::new("connect", None, output.max_candidates);
            emit(&output, manifest, &report, table, started);
            Ok(EXIT_OK)
        }
        Command::Subcurves { config, divisor, output } => {
            let cfg = load_config(&config.config)?;
            let d = resolve_divisor(&cfg, &divisor.divisor, &divisor.divisor_file, "divisor")?;
            let budget = budget_from(output.max_candidates)?;
            let spectrum = genus_spectrum(&d, &budget)?;
            let mut entries = Vec::new();
            for sub in enumerate_subcurves(&d, &budget)? {
                let pa = arithmetic_genus(&sub)?.pa;
                entries.push(SubcurveEntry { mult: sub.mult().to_vec(), pa });
            }
            let report = SubcurvesReport {
                config: cfg.name().to_string(),
                divisor: d.mult().to_vec(),
                count: entries.len() as u64,
                max_pa: spectrum.max_pa,
                max_witness: spectrum.witness.mult().to_vec(),
                all_nonpositive: spectrum.all_nonpositive,
                subcurves: entries,
            };
            let table = render_subcurves(&report);
            let manifest = RunManifest::new("subcurves", None, output.max_candidates);
            emit(&output, manifest, &report, table, started);
            Ok(EXIT_OK)
        }
        Command::Decompose { config, divisor, part, part_file, output } => {
            let cfg = load_config(&config.config)?;
            let d = resolve_divisor(&cfg, &divisor.divisor, &divisor.divisor_file, "divisor")?;
            let a = resolve_divisor(&cfg, &part, &part_file, "part")?;
            let budget = budget_from(output.max_candidates)?;
            let complement = d.try_sub(&a)?;
            let pairing = intersect(&a, &complement)?;
            let chain = chain_decomposition_search(&d, &a, &budget)?;
            let report = DecomposeReport {
                config: cfg.name().to_string(),
                divisor: d.mult().to_vec(),
                part: a.mult().to_vec(),
                complement: complement.mult().to_vec(),
                pairing,
                found: chain.is_some(),
                chain: chain.map(|c| c.piece_mults()),
            };
            let table = render_decompose(&report);
            let manifest = RunManifest::new("decompose", None, output.max_candidates);
            emit(&output, manifest, &report, table, started);
            Ok(EXIT_OK)
        }
        Command::Fixedpart { config, divisor, fixed, fixed_file, output } => {
            let cfg = load_config(&config.config)?;
            let d = resolve_divisor(&cfg, &divisor.divisor, &divisor.divisor_file, "divisor")?;
            let z = resolve_divisor(&cfg, &fixed, &fixed_file, "fixed-part candidate")?;
            let budget = budget_from(output.max_candidates)?;
            let report = fixed_part_report(&d, &z, &budget)?;
            let table = report.render_table();
            let manifest = RunManifest::new("fixedpart", None, output.max_candidates);
            let exit = if report.consistent { EXIT_OK } else { EXIT_CHECK_FAILED };
            emit(&output, manifest, &report, table, started);
            Ok(exit)
        }
        Command::Gen { family, n, self_int, k, scale, output_file, output } => {
            let (cfg, mut d) = match family {
                Family::Chain => gen_chain(n, self_int, k)?,
                Family::Cycle => gen_cycle(n)?,
                Family::Star => gen_star(n)?,
            };
            if let Some(scale) = scale {
                d = gen_multiple_fiber(&d, scale)?;
            }
            let doc = cfg.to_document();
            if let Some(path) = &output_file {
                let text = serde_json::to_string_pretty(&doc).expect("serializable document");
                std::fs::write(path, text + "\n").map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    detail: e.to_string(),
                })?;
            }
            let family_name = match family {
                Family::Chain => "chain",
                Family::Cycle => "cycle",
                Family::Star => "star",
            };
            let report = GenReport {
                family: family_name.to_string(),
                config: doc,
                divisor: d.mult().to_vec(),
            };
            let table = render_gen(&report);
            let manifest = RunManifest::new("gen", None, output.max_candidates);
            emit(&output, manifest, &report, table, started);
            Ok(EXIT_OK)
        }
        Command::Sample { seed, count, n_max, mult_max, edge_density, filter, output_file, output } => {
            if output.format == Format::Json && seed.is_none() {
                return Err(CliError::Input(
                    "an explicit --seed is required with --format json (reproducible reports)".into(),
                ));
            }
            let seed = seed.unwrap_or(0);
            let filter_parsed = filter
                .as_deref()
                .map(|name| name.parse::<InstanceFilter>())
                .transpose()?;
            let spec = SamplerSpec {
                n_max,
                mult_max,
                edge_density,
                seed,
                filter: filter_parsed,
                ..SamplerSpec::default()
            };
            let instances = sample_batch(spec, count as usize)?;
            let mut rendered = Vec::with_capacity(instances.len());
            for (cfg, d) in &instances {
                rendered.push(InstanceJson {
                    config: cfg.to_document(),
                    divisor: d.mult().to_vec(),
                    box_size: u64::try_from(box_size(d.mult())?).unwrap_or(u64::MAX),
                });
            }
            if let Some(path) = &output_file {
                let text = serde_json::to_string_pretty(&rendered).expect("serializable instances");
                std::fs::write(path, text + "\n").map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    detail: e.to_string(),
                })?;
            }
            let report = SampleReport {
                count: rendered.len() as u64,
                filter: filter_parsed.map(|f| f.name().to_string()),
                instances: rendered,
            };
            let table = render_sample(&report);
            let manifest = RunManifest::new("sample", Some(seed), output.max_candidates);
            emit(&output, manifest, &report, table, started);
            Ok(EXIT_OK)
        }
        Command::Check { suite, seed, count, output } => {
            let Some(parsed) = Suite::parse(&suite) else {
                return Err(CliError::Input(format!(
                    "unknown suite {suite:?}; known suites: additivity, prop_go, lemma_b, split_conn, h1_nonneg"
                )));
            };
            if output.format == Format::Json && parsed.is_randomized() && seed.is_none() {
                return Err(CliError::Input(
                    "an explicit --seed is required with --format json for randomized suites".into(),
                ));
            }
            let seed_value = seed.unwrap_or(0);
            let count = count.unwrap_or_else(|| parsed.default_count());
            let budget = budget_from(output.max_candidates)?;
            let outcome = run_suite(parsed, seed_value, count, &budget)?;
            let report = CheckSuiteReport {
                suite: parsed.name().to_string(),
                scale: outcome.scale,
                seed: parsed.is_randomized().then_some(seed_value),
                checked: outcome.checked,
                violations: outcome.violations,
                witness: outcome.witness,
            };
            let table = render_check(&report);
            let manifest = RunManifest::new("check", report.seed, output.max_candidates);
            let exit = if report.violations == 0 { EXIT_OK } else { EXIT_CHECK_FAILED };
            emit(&output, manifest, &report, table, started);
            Ok(exit)
        }
    }
}

fn render_analyze(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("configuration: {}\n", r.config));
    out.push_str(&format!("divisor: {}\n", csv(&r.divisor)));
    out.push_str(&format!("pa = {}    D^2 = {}    K.D = {}\n", r.pa, r.self_intersection, r.k_degree));
    out.push_str(&format!("connectedness = {}\n", r.conn));
    match &r.argmin {
        Some(dec) => out.push_str(&format!(
            "argmin: {} | {}  (pairing {})\n",
            csv(&dec.a),
            csv(&dec.b),
            dec.pairing
        )),
        None => out.push_str("argmin: none (no decomposition exists)\n"),
    }
    out.push_str(&format!("candidates examined: {}\n", r.candidates_examined));
    out
}

fn render_connect(r: &ConnectReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("configuration: {}\n", r.config));
    out.push_str(&format!("divisor: {}\n", csv(&r.divisor)));
    out.push_str(&format!("connectedness = {}\n", r.conn));
    if let (Some(m), Some(ok)) = (r.m, r.m_connected) {
        out.push_str(&format!("{m}-connected: {ok}\n"));
    }
    match &r.argmin {
        Some(dec) => out.push_str(&format!(
            "argmin: {} | {}  (pairing {})\n",
            csv(&dec.a),
            csv(&dec.b),
            dec.pairing
        )),
        None => out.push_str("argmin: none (no decomposition exists)\n"),
    }
    out.push_str(&format!("candidates examined: {}\n", r.candidates_examined));
    out
}

fn render_subcurves(r: &SubcurvesReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("configuration: {}\n", r.config));
    out.push_str(&format!("divisor: {}    subcurves: {}\n", csv(&r.divisor), r.count));
    out.push_str(&format!(
        "max pa = {} at {}    all non-positive: {}\n\n",
        r.max_pa,
        csv(&r.max_witness),
        r.all_nonpositive
    ));
    let width = r.subcurves.iter().map(|e| csv(&e.mult).len()).max().unwrap_or(8).max(8);
    out.push_str(&format!("{:<width$}  pa\n", "subcurve", width = width));
    for entry in &r.subcurves {
        out.push_str(&format!("{:<width$}  {}\n", csv(&entry.mult), entry.pa, width = width));
    }
    out
}

fn render_decompose(r: &DecomposeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("configuration: {}\n", r.config));
    out.push_str(&format!(
        "D = {}    A = {}    D-A = {}    A.(D-A) = {}\n",
        csv(&r.divisor),
        csv(&r.part),
        csv(&r.complement),
        r.pairing
    ));
    match &r.chain {
        Some(chain) => {
            let rendered: Vec<String> = chain.iter().map(|p| csv(p)).collect();
            out.push_str(&format!("chain: [{}]\n", rendered.join("] + [")));
        }
        None => out.push_str("chain: none\n"),
    }
    out
}

fn render_gen(r: &GenReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("family: {}\n", r.family));
    out.push_str(&format!(
        "{}\n",
        serde_json::to_string_pretty(&r.config).expect("serializable document")
    ));
    out.push_str(&format!("divisor: {}\n", csv(&r.divisor)));
    out
}

fn render_sample(r: &SampleReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "sampled {} instance(s){}\n\n",
        r.count,
        r.filter.as_deref().map(|f| format!(" with filter {f}")).unwrap_or_default()
    ));
    out.push_str("index  n  box    divisor\n");
    for (i, inst) in r.instances.iter().enumerate() {
        out.push_str(&format!(
            "{:<5}  {}  {:<5}  {}\n",
            i,
            inst.config.components.len(),
            inst.box_size,
            csv(&inst.divisor)
        ));
    }
    out
}

fn render_check(r: &CheckSuiteReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("suite: {}\n", r.suite));
    out.push_str(&format!("scale: {}\n", r.scale));
    if let Some(seed) = r.seed {
        out.push_str(&format!("seed: {seed}\n"));
    }
    out.push_str(&format!("checked: {}    violations: {}\n", r.checked, r.violations));
    if let Some(witness) = &r.witness {
        out.push_str(&format!("witness: {}\n", witness.detail));
        for d in &witness.divisors {
            out.push_str(&format!("  divisor: {}\n", csv(d)));
        }
        if let Some(cfg) = &witness.config {
            out.push_str(&format!(
                "{}\n",
                serde_json::to_string_pretty(cfg).expect("serializable document")
            ));
        }
    }
    out
}
