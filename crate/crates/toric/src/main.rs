//! Command-line surface: analyze single fans, sweep parameter grids, run
//! the full verification suite, and export catalog fans to JSON.
//!
//! Exit codes: 0 on success, 1 when an input fan fails validation (or a
//! verification run has failures), 2 on usage errors.

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use toric::catalog::{self, BatyrevParams, BundleParams, Family, FamilyParams, GridBounds};
use toric::chern::{self, ChernError, PositivityReport};
use toric::fan::Fan;
use toric::json::{self, cone_names, format_rational, FanFile};
use toric::verify::{self, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "toric",
    about = "Exact intersection numbers and Chern character positivity for smooth complete toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify ch_k positivity of one fan, from a file or a catalog family.
    Analyze(AnalyzeArgs),
    /// Sweep a parameter grid and classify every member.
    Scan(ScanArgs),
    /// Run the complete verification suite over the fixed grids.
    VerifyPaper(VerifyPaperArgs),
    /// Write a catalog fan to the fan JSON format.
    ExportFan(ExportArgs),
}

#[derive(Args, Clone)]
struct FamilySelector {
    /// Catalog family: pn | kleinschmidt | example41 | batyrev3.
    #[arg(long)]
    family: Option<String>,
    /// Total dimension d.
    #[arg(long)]
    d: Option<usize>,
    /// Fiber parameter s (kleinschmidt): the fiber is P^{s-1}.
    #[arg(long)]
    s: Option<usize>,
    /// Twists: comma-separated, non-increasing (kleinschmidt); a single
    /// integer for example41.
    #[arg(long)]
    a: Option<String>,
    /// Block sizes p0,p1,p2,p3,p4 (batyrev3).
    #[arg(long)]
    p: Option<String>,
    /// Twist vector b, length p3 (batyrev3).
    #[arg(long)]
    b: Option<String>,
    /// Twist vector c, length p2-1 (batyrev3); omit when p2 = 1.
    #[arg(long)]
    c: Option<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Fan file in the fan JSON format.
    #[arg(long)]
    file: Option<String>,
    #[command(flatten)]
    selector: FamilySelector,
    /// Comma-separated k values (default: every k from 1 to d).
    #[arg(long)]
    k: Option<String>,
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
    /// Include the value of every invariant subvariety in the output.
    #[arg(long)]
    values: bool,
    /// Cross-check the closed-form surface oracle and the Fano predicates.
    #[arg(long)]
    check_oracles: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Catalog family: pn | kleinschmidt | example41 | batyrev3.
    #[arg(long)]
    family: String,
    /// The k to classify.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    min_d: usize,
    #[arg(long, default_value_t = 6)]
    max_d: usize,
    #[arg(long, default_value_t = 5)]
    max_s: usize,
    #[arg(long, default_value_t = 2)]
    max_twist: u32,
    #[arg(long, default_value_t = 3)]
    max_a: u32,
    #[arg(long, default_value_t = 2)]
    max_p: u32,
    #[arg(long, default_value_t = 3)]
    max_p2: u32,
    #[arg(long, default_value_t = 3)]
    max_b: u32,
    #[arg(long, default_value_t = 3)]
    max_c: u32,
    /// Emit one JSON record per line instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyPaperArgs {
    /// Emit machine-readable JSON records.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 2)]
    max_p: u32,
    #[arg(long, default_value_t = 3)]
    max_p2: u32,
    #[arg(long, default_value_t = 3)]
    max_b: u32,
    #[arg(long, default_value_t = 3)]
    max_c: u32,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    selector: FamilySelector,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<String>,
}

/// Error carrying the process exit code.
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let run = || match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Scan(args) => cmd_scan(args),
        Command::VerifyPaper(args) => cmd_verify_paper(args),
        Command::ExportFan(args) => cmd_export_fan(args),
    };
    let result = match cli.workers {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool");
            pool.install(run)
        }
        None => run(),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| CliError::usage(format!("cannot parse {what} entry {t:?}")))
        })
        .collect()
}

impl FamilySelector {
    fn family_params(&self) -> Result<FamilyParams, CliError> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| CliError::usage("missing --family"))?;
        let family = Family::from_cli_name(name)
            .ok_or_else(|| CliError::usage(format!("unknown family {name:?}")))?;
        let need_d = || self.d.ok_or_else(|| CliError::usage("missing --d"));
        match family {
            Family::ProjectiveSpace => Ok(FamilyParams::ProjectiveSpace { d: need_d()? }),
            Family::Kleinschmidt => {
                let d = need_d()?;
                let s = self.s.ok_or_else(|| CliError::usage("missing --s"))?;
                let twists = parse_list(
                    self.a
                        .as_deref()
                        .ok_or_else(|| CliError::usage("missing --a"))?,
                    "--a",
                )?;
                let params =
                    BundleParams::new(d, s, twists).map_err(|e| CliError::usage(e.to_string()))?;
                Ok(FamilyParams::Kleinschmidt(params))
            }
            Family::Example41 => {
                let d = need_d()?;
                let twists: Vec<u32> = parse_list(
                    self.a
                        .as_deref()
                        .ok_or_else(|| CliError::usage("missing --a"))?,
                    "--a",
                )?;
                if twists.len() != 1 {
                    return Err(CliError::usage("--a takes a single twist for example41"));
                }
                Ok(FamilyParams::Example41 { d, a: twists[0] })
            }
            Family::Batyrev3 => {
                let p: Vec<u32> = parse_list(
                    self.p
                        .as_deref()
                        .ok_or_else(|| CliError::usage("missing --p"))?,
                    "--p",
                )?;
                let p: [u32; 5] = p
                    .try_into()
                    .map_err(|_| CliError::usage("--p takes exactly five block sizes"))?;
                let b = parse_list(
                    self.b
                        .as_deref()
                        .ok_or_else(|| CliError::usage("missing --b"))?,
                    "--b",
                )?;
                let c = parse_list(self.c.as_deref().unwrap_or(""), "--c")?;
                let params =
                    BatyrevParams::new(p, b, c).map_err(|e| CliError::usage(e.to_string()))?;
                Ok(FamilyParams::Batyrev3(params))
            }
        }
    }

    fn is_empty(&self) -> bool {
        self.family.is_none()
    }
}

/// Build a fan from exactly one source: a file or a family selector.
fn resolve_fan(
    file: &Option<String>,
    selector: &FamilySelector,
) -> Result<(Fan, String), CliError> {
    match (file, selector.is_empty()) {
        (Some(path), true) => {
            let fan = json::load_fan(path).map_err(|e| CliError::validation(e.to_string()))?;
            Ok((fan, path.clone()))
        }
        (None, false) => {
            let params = selector.family_params()?;
            let fan = params.construct().map_err(|e| match e {
                catalog::CatalogError::InvalidParams(_) => CliError::usage(e.to_string()),
                _ => CliError::validation(e.to_string()),
            })?;
            Ok((fan, params.label()))
        }
        (Some(_), false) => Err(CliError::usage("give either --file or --family, not both")),
        (None, true) => Err(CliError::usage("give a fan via --file or --family")),
    }
}

fn classify_or_exit(fan: &Fan, k: usize) -> Result<PositivityReport, CliError> {
    chern::classify(fan, k).map_err(|e| match e {
        ChernError::KOutOfRange { .. } => CliError::usage(e.to_string()),
        _ => CliError::validation(e.to_string()),
    })
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let (fan, label) = resolve_fan(&args.file, &args.selector)?;
    let ks: Vec<usize> = match &args.k {
        Some(text) => {
            let ks = parse_list(text, "--k")?;
            for &k in &ks {
                if k < 1 || k > fan.rank() {
                    return Err(CliError::usage(format!(
                        "k = {k} is out of range 1..={}",
                        fan.rank()
                    )));
                }
            }
            ks
        }
        None => (1..=fan.rank()).collect(),
    };
    let reports: Vec<PositivityReport> = ks
        .par_iter()
        .map(|&k| classify_or_exit(&fan, k))
        .collect::<Result<_, _>>()?;
    let oracle_summary = if args.check_oracles {
        Some(run_oracle_checks(&fan)?)
    } else {
        None
    };

    if args.json {
        let mut doc = serde_json::Map::new();
        doc.insert(
            "fan".into(),
            serde_json::json!({
                "source": label,
                "rank": fan.rank(),
                "rays": fan.rays().len(),
                "maximal_cones": fan.maximal_cones().len(),
            }),
        );
        doc.insert(
            "reports".into(),
            serde_json::Value::Array(
                reports
                    .iter()
                    .map(|r| json::report_json(&fan, r, args.values))
                    .collect(),
            ),
        );
        if let Some(summary) = oracle_summary {
            doc.insert("oracle_checks".into(), summary);
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Object(doc)).expect("serializable")
        );
    } else {
        println!(
            "fan: {label}  (rank {}, {} rays, {} maximal cones)",
            fan.rank(),
            fan.rays().len(),
            fan.maximal_cones().len()
        );
        for report in &reports {
            println!(
                "k={}: {}  min value {}  witness [{}]",
                report.k,
                report.classification,
                format_rational(&report.min_value),
                cone_names(&fan, &report.witness).join(",")
            );
            if args.values {
                for cv in &report.values {
                    println!(
                        "    [{}] = {}",
                        cone_names(&fan, &cv.cone).join(","),
                        format_rational(&cv.value)
                    );
                }
            }
        }
        if let Some(summary) = oracle_summary {
            println!("oracle checks: {summary}");
        }
    }
    Ok(())
}

/// Cross-check the closed-form surface value on every 4-cone star against
/// the engine, and the ch_1 report against the Fano predicates.
fn run_oracle_checks(fan: &Fan) -> Result<serde_json::Value, CliError> {
    let mut surface_cones = 0usize;
    if fan.rank() >= 2 {
        let report = classify_or_exit(fan, 2)?;
        for cv in &report.values {
            match chern::hirzebruch_wall_data(fan, cv.cone) {
                Ok(data) => {
                    surface_cones += 1;
                    if data.ch2_value() != cv.value {
                        return Err(CliError::validation(format!(
                            "surface oracle mismatch on cone {:?}: closed form {} vs engine {}",
                            cv.cone.ids(),
                            format_rational(&data.ch2_value()),
                            format_rational(&cv.value)
                        )));
                    }
                }
                Err(ChernError::NotHirzebruchType(_)) => {}
                Err(e) => return Err(CliError::validation(e.to_string())),
            }
        }
    }
    let ch1 = chern::ch1_report(fan).map_err(|e| CliError::validation(e.to_string()))?;
    let fano_agrees = (ch1.classification == chern::Positivity::Positive) == fan.is_fano();
    if !fano_agrees {
        return Err(CliError::validation(
            "ch_1 classification disagrees with the Fano predicate",
        ));
    }
    Ok(serde_json::json!({
        "hirzebruch_cones_checked": surface_cones,
        "ch1_matches_fano": true,
        "status": "ok",
    }))
}

fn cmd_scan(args: &ScanArgs) -> Result<(), CliError> {
    let family = Family::from_cli_name(&args.family)
        .ok_or_else(|| CliError::usage(format!("unknown family {:?}", args.family)))?;
    if args.k < 1 {
        return Err(CliError::usage("k must be at least 1"));
    }
    let bounds = GridBounds {
        d_min: args.min_d,
        d_max: args.max_d,
        s_max: args.max_s,
        twist_max: args.max_twist,
        a_max: args.max_a,
        p_max: args.max_p,
        p2_max: args.max_p2,
        b_max: args.max_b,
        c_max: args.max_c,
    };
    let grid = catalog::grid(family, &bounds);
    struct Row {
        label: String,
        json_params: serde_json::Value,
        report: Option<PositivityReport>,
        fan: Fan,
    }
    let rows: Vec<Row> = grid
        .par_iter()
        .map(|fp| -> Result<Row, CliError> {
            let fan = fp
                .construct()
                .map_err(|e| CliError::validation(format!("{}: {e}", fp.label())))?;
            let report = if args.k <= fan.rank() {
                Some(classify_or_exit(&fan, args.k)?)
            } else {
                None
            };
            Ok(Row {
                label: fp.label(),
                json_params: params_json(fp),
                report,
                fan,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut counts = std::collections::BTreeMap::<&'static str, usize>::new();
    let mut skipped = 0usize;
    for row in &rows {
        match &row.report {
            Some(r) => *counts.entry(r.classification.as_str()).or_insert(0) += 1,
            None => skipped += 1,
        }
    }
    if args.json {
        for row in &rows {
            let record = match &row.report {
                Some(report) => serde_json::json!({
                    "family": family.cli_name(),
                    "params": row.json_params,
                    "k": args.k,
                    "classification": report.classification.as_str(),
                    "min_value": format_rational(&report.min_value),
                    "witness_cone": cone_names(&row.fan, &report.witness),
                }),
                None => serde_json::json!({
                    "family": family.cli_name(),
                    "params": row.json_params,
                    "k": args.k,
                    "skipped": "k exceeds the fan dimension",
                }),
            };
            println!("{}", serde_json::to_string(&record).expect("serializable"));
        }
        let summary = serde_json::json!({
            "summary": counts,
            "skipped": skipped,
            "total": rows.len(),
        });
        println!("{}", serde_json::to_string(&summary).expect("serializable"));
    } else {
        for row in &rows {
            match &row.report {
                Some(report) => println!(
                    "{:<44} {:<16} min {:>8}  witness [{}]",
                    row.label,
                    report.classification.to_string(),
                    format_rational(&report.min_value),
                    cone_names(&row.fan, &report.witness).join(",")
                ),
                None => println!("{:<44} skipped (k > d)", row.label),
            }
        }
        let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        println!(
            "scanned {} fans (k={}): {}{}",
            rows.len(),
            args.k,
            summary.join(", "),
            if skipped > 0 {
                format!(", skipped: {skipped}")
            } else {
                String::new()
            }
        );
    }
    Ok(())
}

fn params_json(fp: &FamilyParams) -> serde_json::Value {
    match fp {
        FamilyParams::ProjectiveSpace { d } => serde_json::json!({ "d": d }),
        FamilyParams::Kleinschmidt(p) => {
            serde_json::json!({ "d": p.d, "s": p.s, "a": p.twists })
        }
        FamilyParams::Example41 { d, a } => serde_json::json!({ "d": d, "a": a }),
        FamilyParams::Batyrev3(p) => {
            serde_json::json!({ "p": p.p.to_vec(), "b": p.b, "c": p.c })
        }
    }
}

fn cmd_verify_paper(args: &VerifyPaperArgs) -> Result<(), CliError> {
    let config = VerifyConfig {
        batyrev_p_max: args.max_p,
        batyrev_p2_max: args.max_p2,
        batyrev_b_max: args.max_b,
        batyrev_c_max: args.max_c,
    };
    let records = verify::run_all(&config);
    let all_pass = records.iter().all(|r| r.passed());
    if args.json {
        let list: Vec<serde_json::Value> = records
            .iter()
            .map(|r| {
                serde_json::json!({
                    "id": r.id,
                    "anchor": r.anchor,
                    "status": if r.passed() { "pass" } else { "fail" },
                    "details": r.details,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(list)).expect("serializable")
        );
    } else {
        for r in &records {
            println!(
                "{}  {:<28} {}  ({})",
                if r.passed() { "PASS" } else { "FAIL" },
                r.id,
                r.anchor,
                r.details
            );
        }
        println!(
            "{} of {} checks passed",
            records.iter().filter(|r| r.passed()).count(),
            records.len()
        );
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::validation("verification failures"))
    }
}

fn cmd_export_fan(args: &ExportArgs) -> Result<(), CliError> {
    let params = args.selector.family_params()?;
    let fan = params.construct().map_err(|e| match e {
        catalog::CatalogError::InvalidParams(_) => CliError::usage(e.to_string()),
        _ => CliError::validation(e.to_string()),
    })?;
    let file = FanFile::from_fan(&fan).map_err(|e| CliError::validation(e.to_string()))?;
    let text = serde_json::to_string_pretty(&file).expect("serializable");
    match &args.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::validation(format!("cannot write {path}: {e}")))?,
        None => println!("{text}"),
    }
    Ok(())
}
