use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};

use hitset::bbd::{validate, BbdTree};
use hitset::error::Error;
use hitset::generators::{generate, GenKind, GenSpec};
use hitset::geometry::{Point, SimplePolygon};
use hitset::homothet::MultiHitterState;
use hitset::instance::{Instance, Mode, RunReport};
use hitset::offline::{
    competitive_ratio, reduce_homothets, reduce_rects, solve_min_hitting_set, HittingInstance,
    OptOutcome,
};
use hitset::online::HitterState;

const EXIT_FAILURE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(name = "hitset", about = "Online hitting set for rectangles and polygon homothets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a problem instance.
    Gen {
        /// uniform-squares | one-point-nest | homothet-random
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Maximum aspect ratio of generated rectangles.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// JSON file with polygon vertices [[x, y], ...].
        #[arg(long)]
        polygon: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the online algorithm on an instance.
    Run {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write one JSON round report per line.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Compute the exact offline optimum.
    Opt {
        #[arg(short, long)]
        input: PathBuf,
        /// Time limit in seconds; exceeding it yields UNPROVEN.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Run + opt + ratio as one CSV row.
    Ratio {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Build the BBD tree and print the validation report.
    ValidateTree {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Batch of ratio rows from a suite file (JSON list of generator specs).
    Bench {
        #[arg(long)]
        suite: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InfeasibleObject(_) => EXIT_INFEASIBLE,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read_file(path)?;
    Instance::from_json(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_polygon(path: &Path) -> Result<SimplePolygon, Failure> {
    let text = read_file(path)?;
    let verts: Vec<[f64; 2]> = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    SimplePolygon::new(verts.iter().map(|&[x, y]| Point::new(x, y)).collect())
        .map_err(Failure::from)
}

struct RunOutcome {
    report: RunReport,
    round_log: Vec<String>,
}

fn execute_run(inst: &Instance) -> Result<RunOutcome, Failure> {
    let points = inst.points();
    let start = Instant::now();
    let (alg_size, depth, sub_depths, max_per_round, max_unhit, round_log) = match inst.mode {
        Mode::Rects => {
            let tree = Arc::new(BbdTree::build(&points)?);
            let mut st = HitterState::init(tree.clone());
            let mut log = Vec::new();
            for (idx, r) in inst.rect_objects()?.iter().enumerate() {
                let report = st.process(*r).map_err(|e| infeasible_at(e, idx))?;
                log.push(serde_json::to_string(&report).unwrap());
            }
            st.check_invariants()
                .map_err(|e| Failure::new(EXIT_FAILURE, e))?;
            let max_unhit = st.unhit_round_counts().into_iter().max().unwrap_or(0);
            (
                st.hitting_set().len(),
                tree.depth(),
                None,
                st.max_points_per_round(),
                max_unhit,
                log,
            )
        }
        Mode::Homothets => {
            let poly = inst
                .polygon()?
                .ok_or_else(|| Failure::new(EXIT_PARSE, "homothets mode requires a polygon"))?;
            let mut st = MultiHitterState::init(&points, &poly, true)?;
            let mut log = Vec::new();
            for (idx, h) in inst.homothet_objects()?.iter().enumerate() {
                let report = st.process_homothet(*h).map_err(|e| infeasible_at(e, idx))?;
                log.push(serde_json::to_string(&report).unwrap());
            }
            st.check_invariants()
                .map_err(|e| Failure::new(EXIT_FAILURE, e))?;
            let depths: Vec<usize> = st.sub_states().iter().map(|s| s.tree().depth()).collect();
            let depth = depths.iter().copied().max().unwrap_or(0);
            let max_per_round = st
                .log()
                .iter()
                .map(|r| r.added_points.len())
                .max()
                .unwrap_or(0);
            let max_unhit = st
                .sub_states()
                .iter()
                .flat_map(|s| s.unhit_round_counts())
                .max()
                .unwrap_or(0);
            (
                st.global_hitting_set().len(),
                depth,
                Some(depths),
                max_per_round,
                max_unhit,
                log,
            )
        }
    };
    let wall_time_ms = start.elapsed().as_millis() as u64;
    if max_unhit > depth + 1 {
        return Err(Failure::new(
            EXIT_FAILURE,
            format!("unhit-round bound violated: {max_unhit} > depth {depth} + 1"),
        ));
    }
    Ok(RunOutcome {
        report: RunReport {
            alg_size,
            opt_size: None,
            ratio: None,
            tree_depth: depth,
            sub_tree_depths: sub_depths,
            max_points_per_round: max_per_round,
            per_point_max_unhit_rounds: max_unhit,
            wall_time_ms,
            round_log_path: None,
        },
        round_log,
    })
}

fn infeasible_at(e: Error, idx: usize) -> Failure {
    match e {
        Error::InfeasibleObject(_) => Failure::new(
            EXIT_INFEASIBLE,
            format!("infeasible object at index {idx}"),
        ),
        other => other.into(),
    }
}

fn reduce_instance(inst: &Instance) -> Result<HittingInstance, Failure> {
    let points = inst.points();
    match inst.mode {
        Mode::Rects => Ok(reduce_rects(&inst.rect_objects()?, &points)?),
        Mode::Homothets => {
            let poly = inst
                .polygon()?
                .ok_or_else(|| Failure::new(EXIT_PARSE, "homothets mode requires a polygon"))?;
            Ok(reduce_homothets(&poly, &inst.homothet_objects()?, &points)?)
        }
    }
}

fn csv_row(inst: &Instance, run: &RunReport, opt: &OptOutcome) -> String {
    let meta = &inst.meta;
    let (opt_field, ratio_field) = if opt.is_proven() {
        let ratio = competitive_ratio(run.alg_size, opt.set().len())
            .map(|r| format!("{r:.6}"))
            .unwrap_or_else(|_| "nan".into());
        (opt.set().len().to_string(), ratio)
    } else {
        ("unproven".into(), "nan".into())
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        meta.seed,
        meta.n,
        meta.m,
        meta.rho,
        run.tree_depth,
        run.alg_size,
        opt_field,
        ratio_field,
        run.max_points_per_round,
        run.wall_time_ms
    )
}

const CSV_HEADER: &str = "seed,n,m,rho,depth,alg,opt,ratio,max_per_round,ms";

fn cmd_gen(
    kind: &str,
    seed: u64,
    n: usize,
    m: usize,
    rho: f64,
    polygon: Option<PathBuf>,
    output: &Path,
) -> Result<(), Failure> {
    let kind = GenKind::parse(kind)
        .ok_or_else(|| Failure::new(EXIT_PARSE, format!("unknown generator kind `{kind}`")))?;
    let polygon = polygon.as_deref().map(load_polygon).transpose()?;
    let spec = GenSpec { kind, seed, n, m, rho, polygon };
    let inst = generate(&spec)?;
    write_file(output, &inst.to_json())?;
    Ok(())
}

fn cmd_run(input: &Path, output: Option<&Path>, log: Option<&Path>) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let mut outcome = execute_run(&inst)?;
    if let Some(log_path) = log {
        write_file(log_path, &(outcome.round_log.join("\n") + "\n"))?;
        outcome.report.round_log_path = Some(log_path.display().to_string());
    }
    let text = serde_json::to_string_pretty(&outcome.report).unwrap();
    match output {
        Some(path) => write_file(path, &text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_opt(input: &Path, time_limit: Option<f64>) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let reduced = reduce_instance(&inst)?;
    let limit = time_limit.map(Duration::from_secs_f64);
    match solve_min_hitting_set(&reduced, limit)? {
        OptOutcome::Proven(set) => println!("OPT {} {:?}", set.len(), set),
        OptOutcome::Unproven(set) => println!("UNPROVEN (best found = {})", set.len()),
    }
    Ok(())
}

fn cmd_ratio(input: &Path) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let outcome = execute_run(&inst)?;
    let reduced = reduce_instance(&inst)?;
    let opt = solve_min_hitting_set(&reduced, None)?;
    println!("{CSV_HEADER}");
    println!("{}", csv_row(&inst, &outcome.report, &opt));
    Ok(())
}

fn cmd_validate_tree(input: &Path) -> Result<(), Failure> {
    let inst = load_instance(input)?;
    let tree = BbdTree::build(&inst.points())?;
    let report = validate(&tree);
    print!("{report}");
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_FAILURE, "tree validation failed"))
    }
}

#[derive(serde::Deserialize)]
struct SuiteEntry {
    kind: String,
    seed: u64,
    n: usize,
    m: usize,
    #[serde(default = "one")]
    rho: f64,
    #[serde(default)]
    polygon: Option<Vec<[f64; 2]>>,
}

fn one() -> f64 {
    1.0
}

fn cmd_bench(suite: &Path) -> Result<(), Failure> {
    let text = read_file(suite)?;
    let entries: Vec<SuiteEntry> = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", suite.display())))?;
    println!("{CSV_HEADER}");
    for entry in &entries {
        let kind = GenKind::parse(&entry.kind).ok_or_else(|| {
            Failure::new(EXIT_PARSE, format!("unknown generator kind `{}`", entry.kind))
        })?;
        let polygon = entry
            .polygon
            .as_ref()
            .map(|vs| {
                SimplePolygon::new(vs.iter().map(|&[x, y]| Point::new(x, y)).collect())
            })
            .transpose()?;
        let spec = GenSpec {
            kind,
            seed: entry.seed,
            n: entry.n,
            m: entry.m,
            rho: entry.rho,
            polygon,
        };
        let inst = generate(&spec)?;
        let outcome = execute_run(&inst)?;
        let reduced = reduce_instance(&inst)?;
        let opt = solve_min_hitting_set(&reduced, None)?;
        println!("{}", csv_row(&inst, &outcome.report, &opt));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen { kind, seed, n, m, rho, polygon, output } => {
            cmd_gen(&kind, seed, n, m, rho, polygon, &output)
        }
        Cmd::Run { input, output, log } => cmd_run(&input, output.as_deref(), log.as_deref()),
        Cmd::Opt { input, time_limit } => cmd_opt(&input, time_limit),
        Cmd::Ratio { input } => cmd_ratio(&input),
        Cmd::ValidateTree { input } => cmd_validate_tree(&input),
        Cmd::Bench { suite } => cmd_bench(&suite),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
