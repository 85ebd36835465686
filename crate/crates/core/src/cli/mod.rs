//! The `fracube` command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 parse error, 3 memory budget,
//! 4 survey cap, 5 verification mismatch.

mod report;
mod survey;

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use report::{
    verification_text, AnalysisReport, GdReport, IcUpper, InputEcho, ReductionSummary, Timings, SCHEMA,
};
pub use survey::{
    candidate_count, dihedral_images, run_survey, SurveyError, SurveyParams, SurveyRecord, SurveySummary,
    DEFAULT_CAP,
};

use crate::approx::{build_grid, render_pbm, Budget, MAX_BYTES_ENV};
use crate::bounds::bounds_report;
use crate::error::Error;
use crate::gd::{gd_dimension, verify_decomposition, MWGraph};
use crate::model::{parse_digitset, reduce_full_rank, th_prescreen, DigitSet};
use crate::topology::default_k_max;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "fracube",
    version,
    about = "Island detection and dimension bounds for fractal cubes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one digit set.
    Analyze(AnalyzeArgs),
    /// Write the level-k approximation as a PBM bitmap.
    Render(RenderArgs),
    /// Enumerate and analyze all digit sets of a given size.
    Survey(SurveyArgs),
    /// Dimension of a graph-directed system, optionally checked against a digit set.
    Gd(GdArgs),
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Largest allowed grid allocation in bytes.
    #[arg(long, env = MAX_BYTES_ENV)]
    pub max_bytes: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        self.max_bytes.map(Budget::new).unwrap_or_default()
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub path: PathBuf,
    /// Highest level scanned for islands (default depends on d).
    #[arg(long)]
    pub kmax: Option<u32>,
    #[arg(long)]
    pub json: bool,
    /// Graph file describing a graph-directed decomposition.
    #[arg(long, value_name = "GRAPHFILE")]
    pub gd: Option<PathBuf>,
    /// Node of the graph to compare against a component.
    #[arg(long, requires = "gd")]
    pub node: Option<String>,
    /// Level-1 cell seeding the component, e.g. `0,0`.
    #[arg(long, requires = "node")]
    pub cell: Option<String>,
    #[arg(long, default_value_t = 4, requires = "node")]
    pub levels: u32,
    /// Omit wall-clock timings from the report.
    #[arg(long)]
    pub no_timings: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub path: PathBuf,
    #[arg(short = 'k', long = "level")]
    pub level: u32,
    /// Output file (standard output if omitted).
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
    /// Fixed coordinates for d > 2, e.g. `2=0` or `2=3,3=1`.
    #[arg(long)]
    pub slice: Option<String>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub cells: usize,
    #[arg(long)]
    pub kmax: Option<u32>,
    /// Keep one representative per dihedral class (d = 2 only).
    #[arg(long)]
    pub mod_symmetry: bool,
    /// JSONL output file (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip digit sets already recorded in the output file.
    #[arg(long, requires = "out")]
    pub resume: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Largest number of candidate sets before symmetry reduction.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Args)]
pub struct GdArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Digit-set file to compare the graph against.
    #[arg(long, value_name = "CUBE")]
    pub verify: Option<PathBuf>,
    #[arg(long, requires = "verify")]
    pub node: Option<String>,
    #[arg(long, requires = "verify")]
    pub cell: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_parse_error() {
            EXIT_PARSE
        } else if e.is_budget_error() {
            EXIT_BUDGET
        } else {
            EXIT_FAILURE
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }
}

impl From<SurveyError> for Failure {
    fn from(e: SurveyError) -> Self {
        match e {
            SurveyError::CapExceeded { .. } => Self {
                code: EXIT_CAP,
                message: e.to_string(),
            },
            SurveyError::Analysis(e) => e.into(),
            SurveyError::Io(e) => e.into(),
            SurveyError::Pool(_) => Self {
                code: EXIT_FAILURE,
                message: e.to_string(),
            },
        }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(a, stdout),
        Command::Render(a) => render(a, stdout),
        Command::Survey(a) => survey(a, stdout, stderr),
        Command::Gd(a) => gd(a, stdout, stderr),
    };
    let result = result.and_then(|code| stdout.flush().map(|_| code).map_err(Failure::from));
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_digitset(path: &Path) -> Result<DigitSet, Failure> {
    let bytes = std::fs::read(path).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    parse_digitset(&bytes).map_err(|e| {
        let f = Failure::from(e);
        fail(f.code, format!("{}: {}", path.display(), f.message))
    })
}

fn read_graph(path: &Path) -> Result<MWGraph, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
    MWGraph::from_json(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn parse_cell(text: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| fail(EXIT_PARSE, format!("invalid cell `{text}`")))
}

fn parse_slice(text: &str) -> Result<Vec<(usize, u64)>, Failure> {
    text.split(',')
        .map(|part| {
            let (axis, value) = part
                .split_once('=')
                .ok_or_else(|| fail(EXIT_PARSE, format!("invalid slice `{part}`, expected axis=value")))?;
            match (axis.trim().parse(), value.trim().parse()) {
                (Ok(a), Ok(v)) => Ok((a, v)),
                _ => Err(fail(EXIT_PARSE, format!("invalid slice `{part}`"))),
            }
        })
        .collect()
}

fn analyze(args: AnalyzeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let start = Instant::now();
    let budget = args.budget.budget();
    let digits = read_digitset(&args.path)?;
    let graph = args.gd.as_deref().map(read_graph).transpose()?;
    let cell = args.cell.as_deref().map(parse_cell).transpose()?;

    let reduction = reduce_full_rank(&digits);
    let k_max = args
        .kmax
        .unwrap_or_else(|| default_k_max(reduction.reduced.dim()));
    let gd = match &graph {
        Some(g) => {
            let dimension = gd_dimension(g)?;
            let verification = match &args.node {
                Some(node) => {
                    let cell = cell.unwrap_or_else(|| vec![0; digits.dim()]);
                    Some(verify_decomposition(
                        &digits,
                        g,
                        node,
                        &cell,
                        args.levels,
                        &budget,
                    )?)
                }
                None => None,
            };
            Some(GdReport {
                dimension,
                verification,
            })
        }
        None => None,
    };
    let bounds = bounds_report(&digits, k_max, gd.as_ref().map(|g| g.dimension.value), &budget)?;
    // the product and Latin screens are only defined for fractal squares
    let prescreen = if digits.dim() == 2 || bounds.verdict.island_level().is_some() {
        Some(th_prescreen(&digits, &bounds.verdict)?)
    } else {
        None
    };
    let mut report = AnalysisReport::new(&digits, &reduction, k_max, bounds, prescreen, gd);
    if !args.no_timings {
        report.timings = Some(Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    if args.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        out.write_all(report.to_text().as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn render(args: RenderArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let digits = read_digitset(&args.path)?;
    let slice = args
        .slice
        .as_deref()
        .map(parse_slice)
        .transpose()?
        .unwrap_or_default();
    let grid = build_grid(&digits, args.level, &args.budget.budget())?;
    let pbm = render_pbm(&grid, &slice)?;
    match &args.out {
        Some(path) => std::fs::write(path, pbm)?,
        None => out.write_all(&pbm)?,
    }
    Ok(EXIT_OK)
}

/// Drops a trailing partial line and returns the digit sets already present.
fn resume_state(file: &mut File) -> Result<HashSet<Vec<Vec<u64>>>, Failure> {
    let mut seen = HashSet::new();
    let mut valid_len = 0u64;
    let mut reader = BufReader::new(&mut *file);
    let mut line = String::new();
    loop {
        line.clear();
        let read = reader.read_line(&mut line)?;
        if read == 0 || !line.ends_with('\n') {
            break;
        }
        match serde_json::from_str::<SurveyRecord>(&line) {
            Ok(record) => {
                seen.insert(record.digits);
                valid_len += read as u64;
            }
            Err(_) => break,
        }
    }
    drop(reader);
    file.set_len(valid_len)?;
    file.seek(SeekFrom::End(0))?;
    Ok(seen)
}

fn survey(args: SurveyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let params = SurveyParams {
        base: args.n,
        dim: args.d,
        cells: args.cells,
        k_max: args.kmax.unwrap_or_else(|| default_k_max(args.d)),
        mod_symmetry: args.mod_symmetry,
        cap: args.cap,
        budget: args.budget.budget(),
        jobs: args.jobs,
    };
    let mut skip = HashSet::new();
    let mut file_sink: Option<BufWriter<File>> = None;
    if let Some(path) = &args.out {
        let mut file = if args.resume {
            OpenOptions::new()
                .read(true)
                .write(true)
                .create(true)
                .truncate(false)
                .open(path)?
        } else {
            File::create(path)?
        };
        if args.resume {
            skip = resume_state(&mut file)?;
        }
        file_sink = Some(BufWriter::new(file));
    }

    let result = run_survey(&params, &skip, |record| {
        let line = serde_json::to_string(record).expect("record serializes");
        let sink: &mut dyn Write = match file_sink.as_mut() {
            Some(f) => f,
            None => &mut *stdout,
        };
        writeln!(sink, "{line}")
    });
    if let Some(mut f) = file_sink {
        f.flush()?;
    }
    let summary = result?;
    writeln!(
        stderr,
        "survey n={} d={} cells={}: {} candidates, {} records, {} resumed",
        params.base, params.dim, params.cells, summary.candidates, summary.emitted, summary.skipped
    )?;
    for (verdict, count) in &summary.by_verdict {
        writeln!(stderr, "  {verdict}: {count}")?;
    }
    Ok(EXIT_OK)
}

#[derive(serde::Serialize)]
struct GdOutput<'a> {
    schema: &'static str,
    base: u64,
    dim: usize,
    dimension: &'a crate::gd::GdDimension,
    verification: Option<&'a crate::gd::GdVerification>,
}

fn gd(args: GdArgs, out: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let graph = read_graph(&args.graph)?;
    let dimension = gd_dimension(&graph)?;
    let verification = match &args.verify {
        Some(path) => {
            let digits = read_digitset(path)?;
            let node = match &args.node {
                Some(n) => n.clone(),
                None => graph.nodes()[0].clone(),
            };
            let cell = match &args.cell {
                Some(c) => parse_cell(c)?,
                None => vec![0; digits.dim()],
            };
            Some(verify_decomposition(
                &digits,
                &graph,
                &node,
                &cell,
                args.levels,
                &args.budget.budget(),
            )?)
        }
        None => None,
    };
    if args.json {
        let doc = GdOutput {
            schema: SCHEMA,
            base: graph.base(),
            dim: graph.dim(),
            dimension: &dimension,
            verification: verification.as_ref(),
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("gd output serializes")
        )?;
    } else {
        writeln!(
            out,
            "graph-directed dimension: {:.12} in [{:.12}, {:.12}]",
            dimension.value, dimension.lo, dimension.hi
        )?;
        writeln!(
            out,
            "spectral radius in [{:.12}, {:.12}]",
            dimension.radius.lo, dimension.radius.hi
        )?;
        if let Some(v) = &verification {
            out.write_all(verification_text(v).as_bytes())?;
        }
    }
    if let Some(mismatch) = verification.as_ref().and_then(|v| v.first_mismatch()) {
        if let crate::gd::LevelOutcome::Mismatch { cell, in_component } = &mismatch.outcome {
            writeln!(
                stderr,
                "verification failed at level {}: cell {:?} only in {}",
                mismatch.level,
                cell,
                if *in_component {
                    "the component"
                } else {
                    "the graph cells"
                }
            )?;
        }
        return Ok(EXIT_MISMATCH);
    }
    Ok(EXIT_OK)
}
