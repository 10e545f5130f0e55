//! `barter`: command-line front end for the bargaining solver.
//!
//! Exit codes: 0 success (including no-trade results), 1 domain failure
//! (a verification check found a counterexample or a certificate was
//! contradicted), 2 usage or parse errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use barter_core::enumeration::{
    cloud_csv, collapse_ratio, enumerate_cloud, lottery_hull, Candidates, EnumOptions, PointCloud,
    DEFAULT_LIMIT,
};
use barter_core::invariance::{
    apply_scale, apply_translation, check_scale_invariance, find_translation_counterexample,
    ScaleTransform, TranslationTransform,
};
use barter_core::json as report_json;
use barter_core::lab::{
    agreement_csv, compare_algorithms, generate, greedy_one_for_one, median_dislike_scale_probe,
    Condition, GeneratorConfig,
};
use barter_core::model::{Instance, OutcomePoint, PlayerId};
use barter_core::notrade::certify_no_trade;
use barter_core::rational::{format_rat, format_rat_decimal, parse_rat, rat_to_f64, Rat};
use barter_core::solvers::{
    constant_sum_product_table, solve, Algorithm, ChosenPoint, ObjectiveValue, PathVariant,
    SolutionReport,
};
use barter_core::svg::{
    hull_polyline, plot_points, plot_points_raw, render_svg, PlotMarker, SvgOptions,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "barter", version, about = "Two-player barter bargaining solver")]
struct Cli {
    /// Emit a single JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Enumeration limit on p+q (overrides BARTER_LIMIT).
    #[arg(long, global = true)]
    limit: Option<usize>,
    /// Enumerate even past the limit.
    #[arg(long, global = true)]
    force: bool,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Render rationals as fixed six-digit decimals.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with one or all algorithms.
    Solve(SolveArgs),
    /// Enumerate the exchange space and dump the point cloud.
    Enumerate(EnumerateArgs),
    /// Apply utility transforms; optionally verify invariance claims.
    Transform(TransformArgs),
    /// Run the no-trade detectors and certify the verdict.
    Check { file: PathBuf },
    /// Seeded generation and experiments.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Emit an SVG scatter of the outcome plane.
    Plot(PlotArgs),
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value = "all", value_parser = parse_algorithm_arg)]
    algorithm: AlgorithmArg,
    #[arg(long, default_value = "adjacent-chain", value_parser = parse_path_variant)]
    path_variant: PathVariant,
    /// Treat the file as a raw point list {"points": [...]} instead of an
    /// instance (table-level input; no exchanges to report).
    #[arg(long)]
    points: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    file: PathBuf,
    /// Report distinct points with aggregated counts only; skip the
    /// per-point exchange listings in JSON output.
    #[arg(long)]
    points_only: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    file: PathBuf,
    /// Scale a player's utilities: PLAYER:FACTOR (repeatable).
    #[arg(long, value_parser = parse_player_rat)]
    scale: Vec<(PlayerId, Rat)>,
    /// Translate a player's utilities: PLAYER:OFFSET (repeatable).
    #[arg(long, value_parser = parse_player_rat)]
    translate: Vec<(PlayerId, Rat)>,
    /// Verify scale invariance of every trade decision (exit 1 on failure).
    #[arg(long)]
    check: bool,
    /// Scan for the cheapest translation that flips an accepted trade.
    #[arg(long)]
    find_flip: bool,
    /// Reject translations that push a utility below zero.
    #[arg(long)]
    strict_nonnegative: bool,
    /// Write the transformed instance here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LabCommand {
    /// Generate a seeded instance.
    Generate(GenArgs),
    /// The constant-sum product table.
    Gravity(GravityArgs),
    /// Run all solvers over generated instances and tabulate agreement.
    Compare(CompareArgs),
    /// Run the greedy one-for-one baseline on an instance.
    Greedy { file: PathBuf },
    /// Verify the median-vs-nash split is scale independent.
    ProbeMedian(ProbeArgs),
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, default_value_t = 3)]
    p: usize,
    #[arg(long, default_value_t = 3)]
    q: usize,
    #[arg(long, default_value = "0", value_parser = parse_rat_arg)]
    min: Rat,
    #[arg(long, default_value = "10", value_parser = parse_rat_arg)]
    max: Rat,
    #[arg(long, default_value_t = 1)]
    grid: u32,
    #[arg(long, default_value = "unconstrained", value_parser = parse_condition)]
    condition: Condition,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GravityArgs {
    #[arg(long, default_value = "10", value_parser = parse_rat_arg)]
    total: Rat,
    #[arg(long, default_value = "1", value_parser = parse_rat_arg)]
    step: Rat,
    #[arg(long, default_value = "6.674e-11", value_parser = parse_rat_arg)]
    g: Rat,
    #[arg(long, default_value = "10", value_parser = parse_rat_arg)]
    distance: Rat,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[command(flatten)]
    gen: GenArgs,
    /// Write the agreement matrix CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    file: PathBuf,
    /// Scale factors to probe (repeatable).
    #[arg(long = "factor", value_parser = parse_rat_arg, default_values = ["1/2", "1", "3", "100"])]
    factors: Vec<Rat>,
}

#[derive(Args)]
struct PlotArgs {
    file: PathBuf,
    #[arg(short, long, default_value = "plot.svg")]
    output: PathBuf,
    /// Draw the lottery hull polyline.
    #[arg(long)]
    hull: bool,
    /// Mark the nash and median choices.
    #[arg(long)]
    annotate: bool,
    /// Treat the file as a raw point list {"points": [...]}.
    #[arg(long)]
    points: bool,
}

#[derive(Clone)]
enum AlgorithmArg {
    All,
    One(Algorithm),
}

fn parse_algorithm_arg(s: &str) -> Result<AlgorithmArg, String> {
    if s == "all" {
        return Ok(AlgorithmArg::All);
    }
    Algorithm::parse(s).map(AlgorithmArg::One).ok_or_else(|| {
        format!("unknown algorithm `{s}` (nash|sum|median|eq-sum|eq-diagonal|eq-arc|hull-nash|all)")
    })
}

fn parse_path_variant(s: &str) -> Result<PathVariant, String> {
    match s {
        "adjacent-chain" => Ok(PathVariant::AdjacentChain),
        "hull" => Ok(PathVariant::Hull),
        _ => Err(format!("unknown path variant `{s}` (adjacent-chain|hull)")),
    }
}

fn parse_condition(s: &str) -> Result<Condition, String> {
    Condition::parse(s).ok_or_else(|| {
        format!("unknown condition `{s}` (unconstrained|identical-valuation|mutual-dominance|insufficient-compensation)")
    })
}

fn parse_rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn parse_player_rat(s: &str) -> Result<(PlayerId, Rat), String> {
    let (player, value) = s
        .split_once(':')
        .ok_or_else(|| format!("expected PLAYER:VALUE, got `{s}`"))?;
    let player = PlayerId::parse(player).ok_or_else(|| format!("unknown player `{player}`"))?;
    let value = parse_rat(value).map_err(|e| e.to_string())?;
    Ok((player, value))
}

/// Failures mapped onto the exit-code contract.
enum AppError {
    /// Exit 2: bad input or usage.
    Usage(String),
    /// Exit 1: a domain check failed.
    Domain(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Domain(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("barter: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(cli, args),
        Command::Enumerate(args) => cmd_enumerate(cli, args),
        Command::Transform(args) => cmd_transform(cli, args),
        Command::Check { file } => cmd_check(cli, file),
        Command::Lab(lab) => cmd_lab(cli, lab),
        Command::Plot(args) => cmd_plot(cli, args),
    }
}

fn enum_options(cli: &Cli) -> EnumOptions {
    let limit = cli
        .limit
        .or_else(|| std::env::var("BARTER_LIMIT").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_LIMIT);
    EnumOptions { limit, force: cli.force }
}

fn read_instance(path: &PathBuf) -> Result<Instance, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Instance::from_json(&text).map_err(usage)
}

fn read_points(path: &PathBuf) -> Result<Vec<OutcomePoint>, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(usage)?;
    let arr = doc
        .get("points")
        .and_then(|v| v.as_array())
        .ok_or_else(|| AppError::Usage("expected {\"points\": [...]}".into()))?;
    let mut points = Vec::with_capacity(arr.len());
    for (i, entry) in arr.iter().enumerate() {
        let coord = |field: &str| -> Result<Rat, AppError> {
            let raw = entry
                .get(field)
                .ok_or_else(|| AppError::Usage(format!("points[{i}]: missing {field}")))?;
            let text = match raw {
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            parse_rat(&text).map_err(|e| AppError::Usage(format!("points[{i}].{field}: {e}")))
        };
        points.push(OutcomePoint::new(coord("u_x")?, coord("u_y")?));
    }
    Ok(points)
}

fn emit(cli: &Cli, value: serde_json::Value, human: String) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        print!("{human}");
    }
}

fn fmt_rat(cli: &Cli, r: &Rat) -> String {
    if cli.decimal {
        format_rat_decimal(r)
    } else {
        format_rat(r)
    }
}

fn fmt_point(cli: &Cli, p: &OutcomePoint) -> String {
    format!("({}, {})", fmt_rat(cli, &p.u_x), fmt_rat(cli, &p.u_y))
}

fn describe_solution(cli: &Cli, report: &SolutionReport) -> String {
    let headline = match report.headline() {
        ChosenPoint::Exact(p) => fmt_point(cli, p),
        ChosenPoint::Approx { u_x, u_y } => format!("({u_x:.6}, {u_y:.6})"),
    };
    let objective = match &report.objective {
        Some(ObjectiveValue::Exact(r)) => format!(" objective {}", fmt_rat(cli, r)),
        Some(ObjectiveValue::Approx(f)) => format!(" objective {f:.6}"),
        None => String::new(),
    };
    let lottery = if report.is_lottery { " [lottery]" } else { "" };
    let ties = if report.tie_count() > 1 {
        format!(" ties: {}", report.tie_count())
    } else {
        String::new()
    };
    format!("{:<12} {}{}{}{}\n", report.algorithm.name(), headline, objective, lottery, ties)
}

fn cmd_solve(cli: &Cli, args: &SolveArgs) -> Result<(), AppError> {
    let opts = enum_options(cli);
    let (candidates, resolver): (Candidates, Option<(Instance, PointCloud)>) = if args.points {
        let points = read_points(&args.file)?;
        (Candidates::from_points(&points), None)
    } else {
        let inst = read_instance(&args.file)?;
        let cloud = enumerate_cloud(&inst, &opts).map_err(usage)?;
        (Candidates::from_cloud(&cloud), Some((inst, cloud)))
    };

    let algorithms: Vec<Algorithm> = match args.algorithm {
        AlgorithmArg::All => Algorithm::ALL.to_vec(),
        AlgorithmArg::One(a) => vec![a],
    };

    let no_trade = candidates.periphery.is_empty();
    let certificate = match (&resolver, no_trade) {
        (Some((inst, _)), true) => {
            Some(certify_no_trade(inst, &opts).map_err(|e| AppError::Domain(e.to_string()))?)
        }
        _ => None,
    };

    let mut solutions = Vec::new();
    let mut human = String::new();
    if no_trade {
        let kind = certificate.as_ref().map_or("none", |c| c.kind_name());
        human.push_str(&format!("no trade (certificate: {kind})\n"));
    }
    for alg in &algorithms {
        let report = solve(&candidates, *alg, args.path_variant);
        if let Some(report) = &report {
            human.push_str(&describe_solution(cli, report));
        }
        solutions.push(report_json::solution_json(
            *alg,
            report.as_ref(),
            resolver.as_ref().map(|(i, c)| (i, c)),
            cli.decimal,
        ));
    }

    let value = serde_json::json!({
        "no_trade": no_trade,
        "certificate": certificate.as_ref().map(|c| report_json::certificate_json(c, cli.decimal)),
        "solutions": solutions,
    });
    emit(cli, value, human);
    Ok(())
}

fn cmd_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<(), AppError> {
    let opts = enum_options(cli);
    let inst = read_instance(&args.file)?;
    let cloud = enumerate_cloud(&inst, &opts).map_err(usage)?;
    let candidates = Candidates::from_cloud(&cloud);
    let csv = cloud_csv(&cloud, &candidates.periphery);
    let ratio = collapse_ratio(&cloud);

    if let Some(path) = &args.csv {
        fs::write(path, &csv)
            .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    if cli.json {
        let points: Vec<serde_json::Value> = cloud
            .iter()
            .map(|(point, exchanges)| {
                let mut v = serde_json::json!({
                    "u_x": report_json::rat_json(&point.u_x, cli.decimal),
                    "u_y": report_json::rat_json(&point.u_y, cli.decimal),
                    "count": exchanges.len(),
                    "acceptable": point.is_acceptable(),
                    "on_periphery": candidates.periphery.contains(point),
                });
                if !args.points_only {
                    v["exchanges"] = serde_json::Value::Array(
                        exchanges
                            .iter()
                            .map(|ex| report_json::exchange_json(&inst, ex))
                            .collect(),
                    );
                }
                v
            })
            .collect();
        let value = serde_json::json!({
            "total_exchanges": cloud.total_exchanges() as u64,
            "distinct_points": cloud.distinct_count(),
            "collapse_ratio": report_json::rat_json(&ratio, cli.decimal),
            "acceptable_points": cloud.acceptable_point_count(),
            "acceptable_exchanges": cloud.acceptable_exchange_count() as u64,
            "periphery_size": candidates.periphery.len(),
            "points": points,
        });
        emit(cli, value, String::new());
    } else {
        let mut human = String::new();
        human.push_str(&format!(
            "{} exchanges, {} distinct points (collapse ratio {}), {} acceptable, periphery {}\n",
            cloud.total_exchanges(),
            cloud.distinct_count(),
            fmt_rat(cli, &ratio),
            cloud.acceptable_point_count(),
            candidates.periphery.len(),
        ));
        if args.csv.is_none() {
            human.push_str(&csv);
        }
        print!("{human}");
    }
    Ok(())
}

fn cmd_transform(cli: &Cli, args: &TransformArgs) -> Result<(), AppError> {
    if args.check && !args.translate.is_empty() {
        return Err(AppError::Usage(
            "--check verifies scale transforms; translations are not invariant by design".into(),
        ));
    }
    let opts = enum_options(cli);
    let original = read_instance(&args.file)?;

    let mut checks = Vec::new();
    let mut current = original.clone();
    for (player, factor) in &args.scale {
        let t = ScaleTransform::new(*player, factor.clone()).map_err(usage)?;
        if args.check {
            let report = check_scale_invariance(&current, &t, &opts).map_err(usage)?;
            let passed = report.passed();
            checks.push(report_json::scale_report_json(&report, &current, cli.decimal));
            if !passed {
                let value = serde_json::json!({ "checks": checks, "passed": false });
                emit(cli, value, "scale-invariance check FAILED\n".into());
                return Err(AppError::Domain("scale invariance violated".into()));
            }
        }
        current = apply_scale(&current, &t);
    }
    for (player, offset) in &args.translate {
        let t = TranslationTransform { player: *player, offset: offset.clone() };
        current = apply_translation(&current, &t, !args.strict_nonnegative).map_err(usage)?;
    }

    let flip = if args.find_flip {
        Some(find_translation_counterexample(&original, &opts).map_err(usage)?)
    } else {
        None
    };

    let instance_json = current.to_json();
    if let Some(path) = &args.output {
        fs::write(path, &instance_json)
            .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let mut human = String::new();
    if args.check {
        human.push_str(&format!(
            "scale-invariance check passed ({} transforms)\n",
            args.scale.len()
        ));
    }
    if let Some(found) = &flip {
        match found {
            Some(c) => human.push_str(&format!(
                "translation flip: player {} rejects an accepted trade at b* = {} (receives {}, gives {})\n",
                c.player,
                fmt_rat(cli, &c.threshold),
                c.received,
                c.given
            )),
            None => human.push_str("translation-robust: every accepted trade has m >= n\n"),
        }
    }
    if args.output.is_none() && !args.check && flip.is_none() {
        human.push_str(&instance_json);
        human.push('\n');
    }

    let value = serde_json::json!({
        "instance": serde_json::from_str::<serde_json::Value>(&instance_json).expect("valid"),
        "checks": checks,
        "passed": if args.check { serde_json::json!(true) } else { serde_json::Value::Null },
        "flip": flip.as_ref().map(|f| {
            report_json::translation_counterexample_json(f.as_ref(), &original, cli.decimal)
        }),
    });
    emit(cli, value, human);
    Ok(())
}

fn cmd_check(cli: &Cli, file: &PathBuf) -> Result<(), AppError> {
    let opts = enum_options(cli);
    let inst = read_instance(file)?;
    let cert = certify_no_trade(&inst, &opts).map_err(|e| AppError::Domain(e.to_string()))?;
    let human = match cert.kind {
        Some(_) => format!(
            "no trade: {} (brute-force verified: {}, {} exchanges)\n",
            cert.kind_name(),
            cert.brute_force_verified,
            cert.exchanges_checked
        ),
        None => "no certificate: the sufficient conditions do not apply\n".into(),
    };
    emit(cli, report_json::certificate_json(&cert, cli.decimal), human);
    Ok(())
}

fn gen_config(cli: &Cli, args: &GenArgs) -> GeneratorConfig {
    GeneratorConfig {
        seed: cli.seed,
        p: args.p,
        q: args.q,
        value_min: args.min.clone(),
        value_max: args.max.clone(),
        value_grid: args.grid,
        condition: args.condition,
    }
}

fn cmd_lab(cli: &Cli, lab: &LabCommand) -> Result<(), AppError> {
    match lab {
        LabCommand::Generate(args) => {
            let cfg = gen_config(cli, args);
            let inst = generate(&cfg).map_err(usage)?;
            let text = inst.to_json();
            if let Some(path) = &args.output {
                fs::write(path, &text)
                    .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?;
                emit(
                    cli,
                    serde_json::json!({ "written": path.display().to_string() }),
                    format!("wrote {}\n", path.display()),
                );
            } else {
                println!("{text}");
            }
            Ok(())
        }
        LabCommand::Gravity(args) => {
            let table =
                constant_sum_product_table(&args.total, &args.step, &args.g, &args.distance)
                    .map_err(usage)?;
            let mut human = String::from("m1\tm2\tproduct\tforce\n");
            for row in &table.rows {
                human.push_str(&format!(
                    "{}\t{}\t{}\t{:.3e}\n",
                    fmt_rat(cli, &row.m1),
                    fmt_rat(cli, &row.m2),
                    fmt_rat(cli, &row.product),
                    rat_to_f64(&row.force)
                ));
            }
            let best = &table.rows[table.argmax[0]];
            human.push_str(&format!(
                "max product {} at ({}, {})\n",
                fmt_rat(cli, &best.product),
                fmt_rat(cli, &best.m1),
                fmt_rat(cli, &best.m2)
            ));
            emit(cli, report_json::gravity_json(&table, cli.decimal), human);
            Ok(())
        }
        LabCommand::Compare(args) => {
            let cfg = gen_config(cli, &args.gen);
            let opts = enum_options(cli);
            let stats = compare_algorithms(&cfg, args.runs, &opts).map_err(usage)?;
            if let Some(path) = &args.csv {
                fs::write(path, agreement_csv(&stats))
                    .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let human = format!(
                "{} instances ({} no-trade), nash-median disagreements {}, mean collapse ratio {:.4}, greedy strict gaps {}\n",
                stats.instances_run,
                stats.no_trade_instances,
                stats.median_nash_disagreements,
                stats.collapse_mean,
                stats.greedy_strict_gaps,
            );
            emit(cli, report_json::stats_json(&stats), human);
            Ok(())
        }
        LabCommand::Greedy { file } => {
            let inst = read_instance(file)?;
            let outcome = greedy_one_for_one(&inst);
            let mut human = String::new();
            for step in &outcome.steps {
                human.push_str(&format!(
                    "swap {} for {}  (+{}, +{})\n",
                    step.x_gives,
                    step.y_gives,
                    fmt_rat(cli, &step.delta_x),
                    fmt_rat(cli, &step.delta_y)
                ));
            }
            human.push_str(&format!("final point {}\n", fmt_point(cli, &outcome.final_point)));
            emit(cli, report_json::greedy_json(&outcome, cli.decimal), human);
            Ok(())
        }
        LabCommand::ProbeMedian(args) => {
            let inst = read_instance(&args.file)?;
            let opts = enum_options(cli);
            let report = median_dislike_scale_probe(&inst, &args.factors, &opts)
                .map_err(|e| AppError::Usage(e.to_string()))?;
            let human = format!(
                "median dislike scale probe: {} ({} checks)\n",
                if report.all_pass { "pass" } else { "FAIL" },
                report.entries.len()
            );
            let all_pass = report.all_pass;
            emit(cli, report_json::probe_json(&report, cli.decimal), human);
            if !all_pass {
                return Err(AppError::Domain("median/nash choices moved under rescaling".into()));
            }
            Ok(())
        }
    }
}

fn cmd_plot(cli: &Cli, args: &PlotArgs) -> Result<(), AppError> {
    let opts = enum_options(cli);
    let (points, candidates, caption) = if args.points {
        let raw = read_points(&args.file)?;
        let candidates = Candidates::from_points(&raw);
        let caption = candidates.periphery.is_empty().then(|| "no trade".to_string());
        (plot_points_raw(&raw, &candidates), candidates, caption)
    } else {
        let inst = read_instance(&args.file)?;
        let cloud = enumerate_cloud(&inst, &opts).map_err(usage)?;
        let candidates = Candidates::from_cloud(&cloud);
        let caption = if candidates.periphery.is_empty() {
            let cert =
                certify_no_trade(&inst, &opts).map_err(|e| AppError::Domain(e.to_string()))?;
            Some(format!("no trade: {}", cert.kind_name()))
        } else {
            None
        };
        (plot_points(&cloud, &candidates), candidates, caption)
    };

    let hull = if args.hull {
        lottery_hull(&candidates.periphery, &candidates.anchors).map(|h| hull_polyline(&h))
    } else {
        None
    };

    let mut markers = Vec::new();
    if args.annotate {
        for alg in [Algorithm::Nash, Algorithm::Median] {
            if let Some(report) = solve(&candidates, alg, PathVariant::AdjacentChain) {
                let (x, y) = report.headline().to_f64();
                let label = match report.headline() {
                    ChosenPoint::Exact(p) => format!("{} {}", alg.name(), fmt_point(cli, p)),
                    ChosenPoint::Approx { u_x, u_y } => {
                        format!("{} ({u_x:.3}, {u_y:.3})", alg.name())
                    }
                };
                markers.push(PlotMarker { label, x, y });
            }
        }
    }

    let svg = render_svg(
        &points,
        hull.as_deref(),
        &markers,
        caption.as_deref(),
        &SvgOptions { show_hull: args.hull, ..Default::default() },
    );
    fs::write(&args.output, &svg)
        .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", args.output.display())))?;
    emit(
        cli,
        serde_json::json!({ "written": args.output.display().to_string(), "bytes": svg.len() }),
        format!("wrote {} ({} bytes)\n", args.output.display(), svg.len()),
    );
    Ok(())
}
