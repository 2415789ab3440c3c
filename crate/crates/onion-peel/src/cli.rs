//! Command-line front door: `generate`, `peel`, `detect`, and `eval`
//! subcommands over the library API. Results go to stdout and output files;
//! diagnostics go to stderr. Exit codes: 0 success, 2 usage or data errors,
//! 1 internal faults.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::builder::PossibleValue;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::datagen::{generate, load_points, save_points, DataSet, FileFormat, GenSpec};
use crate::detector::{detect, DetectionConfig, Removal, Scoring};
use crate::error::{Error, Result};
use crate::eval::{run_experiment, summarize, Scenario};
use crate::geometry::{onion_peel, Point2};
use crate::metrics::{MetricKind, Variances2};
use crate::svg::{scatter_svg, SvgOptions};

impl ValueEnum for MetricKind {
    fn value_variants<'a>() -> &'a [Self] {
        &[
            MetricKind::Euclidean,
            MetricKind::StandardizedEuclidean,
            MetricKind::Mahalanobis,
        ]
    }

    fn to_possible_value(&self) -> Option<PossibleValue> {
        Some(match self {
            MetricKind::Euclidean => PossibleValue::new("euclidean"),
            MetricKind::StandardizedEuclidean => PossibleValue::new("std-euclidean"),
            MetricKind::Mahalanobis => PossibleValue::new("mahalanobis"),
        })
    }
}

impl ValueEnum for Scoring {
    fn value_variants<'a>() -> &'a [Self] {
        &[Scoring::SumToAll, Scoring::DistanceToCenter]
    }

    fn to_possible_value(&self) -> Option<PossibleValue> {
        Some(match self {
            Scoring::SumToAll => PossibleValue::new("sum"),
            Scoring::DistanceToCenter => PossibleValue::new("center"),
        })
    }
}

impl ValueEnum for Removal {
    fn value_variants<'a>() -> &'a [Self] {
        &[Removal::SinglePoint, Removal::WholeHull]
    }

    fn to_possible_value(&self) -> Option<PossibleValue> {
        Some(match self {
            Removal::SinglePoint => PossibleValue::new("point"),
            Removal::WholeHull => PossibleValue::new("hull"),
        })
    }
}

impl ValueEnum for FileFormat {
    fn value_variants<'a>() -> &'a [Self] {
        &[FileFormat::Csv, FileFormat::Json]
    }

    fn to_possible_value(&self) -> Option<PossibleValue> {
        Some(match self {
            FileFormat::Csv => PossibleValue::new("csv"),
            FileFormat::Json => PossibleValue::new("json"),
        })
    }
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected two comma-separated numbers, got {s:?}"));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("invalid number {:?}", parts[0]))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("invalid number {:?}", parts[1]))?;
    Ok((a, b))
}

#[derive(Debug, Parser)]
#[command(
    name = "onion-peel",
    version,
    about = "Convex-layer outlier detection toolkit for 2-D point sets"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic Gaussian dataset, optionally with planted outliers
    Generate(GenerateArgs),
    /// Decompose a dataset into nested convex layers
    Peel(PeelArgs),
    /// Run top-k outlier detection on a dataset
    Detect(DetectArgs),
    /// Run the scenario-by-seed evaluation grid
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Number of points
    #[arg(long)]
    n: usize,
    /// Mean as "x,y"
    #[arg(long, value_parser = parse_pair, default_value = "0,0")]
    mean: (f64, f64),
    /// Per-dimension variances as "vx,vy"
    #[arg(long, value_parser = parse_pair, default_value = "1,1")]
    var: (f64, f64),
    /// Fraction of points planted as outliers, in [0, 1)
    #[arg(long, default_value_t = 0.0)]
    contamination: f64,
    /// Minimum Mahalanobis radius of planted outliers
    #[arg(long, default_value_t = 4.0)]
    multiplier: f64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    /// Output format (defaults to the output extension, then csv)
    #[arg(long)]
    format: Option<FileFormat>,
}

#[derive(Debug, Args)]
struct PeelArgs {
    /// Input dataset (csv or json, by extension)
    input: PathBuf,
    /// Write layer membership to this path
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Output format (defaults to the output extension, then csv)
    #[arg(long)]
    format: Option<FileFormat>,
    /// Write a plot of the nested rings
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Re-check that layers plus residual partition the index set
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// Input dataset (csv or json, by extension)
    input: PathBuf,
    /// Outlier budget
    #[arg(long)]
    k: usize,
    /// Distance metric
    #[arg(long, value_enum, default_value = "euclidean")]
    metric: MetricKind,
    /// Vertex scoring rule
    #[arg(long, value_enum, default_value = "sum")]
    scoring: Scoring,
    /// Removal rule applied after each pick
    #[arg(long, value_enum, default_value = "point")]
    removal: Removal,
    /// Rescale to unit variance per dimension before peeling
    #[arg(long)]
    standardize: bool,
    /// Report path (json report, or csv of ranked ids with --format csv)
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Output format (defaults to the output extension, then json)
    #[arg(long)]
    format: Option<FileFormat>,
    /// Write a scatter plot with outliers marked
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Overlay the convex-layer rings on the plot
    #[arg(long, requires = "svg")]
    rings: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Experiment config file; omit for the built-in benchmark grid
    #[arg(long)]
    config: Option<PathBuf>,
    /// Summary output path
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
    /// Output format (defaults to the output extension, then csv)
    #[arg(long)]
    format: Option<FileFormat>,
}

/// Parse argv, execute, and map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Peel(args) => cmd_peel(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Eval(args) => cmd_eval(args),
    }
}

fn resolve_format(flag: Option<FileFormat>, path: &Path, fallback: FileFormat) -> FileFormat {
    flag.or_else(|| FileFormat::from_path(path))
        .unwrap_or(fallback)
}

fn input_format(path: &Path) -> FileFormat {
    FileFormat::from_path(path).unwrap_or(FileFormat::Csv)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    file.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn load_dataset(path: &Path) -> Result<DataSet> {
    load_points(path, input_format(path))
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let spec = GenSpec {
        n: args.n,
        mean: Point2::new(args.mean.0, args.mean.1),
        variances: Variances2::new(args.var.0, args.var.1)?,
        contamination: args.contamination,
        outlier_radius_multiplier: args.multiplier,
        seed: args.seed,
    };
    let ds = generate(&spec)?;
    let format = resolve_format(args.format, &args.out, FileFormat::Csv);
    save_points(&ds, &args.out, format)?;
    println!(
        "generated {} points (contamination {}, {} planted outliers), seed {} -> {}",
        ds.n(),
        spec.contamination,
        ds.truth_outlier_ids.len(),
        spec.seed,
        args.out.display()
    );
    Ok(())
}

fn cmd_peel(args: PeelArgs) -> Result<()> {
    let ds = load_dataset(&args.input)?;
    let peel = onion_peel(&ds.points)?;
    if peel.layers.is_empty() {
        return Err(Error::DegenerateInput {
            reason: "all points collinear; no convex layer exists".into(),
        });
    }

    for (i, layer) in peel.layers.iter().enumerate() {
        println!(
            "layer {}: {} vertices, area {}",
            i,
            layer.vertex_ids.len(),
            layer.area
        );
    }
    println!("residual: {} point(s)", peel.residual_ids.len());

    if args.verify {
        let mut all: Vec<usize> = peel
            .layers
            .iter()
            .flat_map(|l| l.vertex_ids.iter().copied())
            .chain(peel.residual_ids.iter().copied())
            .collect();
        all.sort_unstable();
        if all == (0..ds.n()).collect::<Vec<_>>() {
            println!("PASS");
        } else {
            return Err(Error::Internal(
                "peel layers and residual do not partition the index set".into(),
            ));
        }
    }

    if let Some(out) = &args.out {
        let format = resolve_format(args.format, out, FileFormat::Csv);
        match format {
            FileFormat::Csv => {
                let mut text = String::from("point_id,layer\n");
                let mut rows: Vec<(usize, String)> = Vec::with_capacity(ds.n());
                for (i, layer) in peel.layers.iter().enumerate() {
                    for &id in &layer.vertex_ids {
                        rows.push((id, i.to_string()));
                    }
                }
                for &id in &peel.residual_ids {
                    rows.push((id, "residual".to_string()));
                }
                rows.sort_unstable();
                for (id, layer) in rows {
                    text.push_str(&format!("{id},{layer}\n"));
                }
                write_text(out, &text)?;
            }
            FileFormat::Json => {
                let mut text = serde_json::to_string_pretty(&peel)
                    .map_err(|e| Error::Internal(format!("layer serialization failed: {e}")))?;
                text.push('\n');
                write_text(out, &text)?;
            }
        }
    }

    if let Some(svg_path) = &args.svg {
        let rings: Vec<Vec<Point2>> = peel
            .layers
            .iter()
            .map(|l| l.vertex_ids.iter().map(|&id| ds.points[id]).collect())
            .collect();
        let svg = scatter_svg(&ds.points, &[], &rings, &SvgOptions::default());
        write_text(svg_path, &svg)?;
    }
    Ok(())
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let ds = load_dataset(&args.input)?;
    let config = DetectionConfig {
        k: args.k,
        metric: args.metric,
        scoring: args.scoring,
        removal: args.removal,
        standardize_first: args.standardize,
    };
    let report = detect(&ds.points, &config)?;

    println!(
        "detected {} outlier(s) over {} iteration(s), early_termination: {}",
        report.outlier_ids.len(),
        report.volumes.len(),
        report.early_termination
    );

    if let Some(out) = &args.out {
        let format = resolve_format(args.format, out, FileFormat::Json);
        match format {
            FileFormat::Json => {
                let mut text = serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::Internal(format!("report serialization failed: {e}")))?;
                text.push('\n');
                write_text(out, &text)?;
            }
            FileFormat::Csv => {
                let mut text = String::from("rank,point_id,score\n");
                for (rank, (&id, &score)) in
                    report.outlier_ids.iter().zip(&report.scores).enumerate()
                {
                    text.push_str(&format!("{},{},{}\n", rank + 1, id, score));
                }
                write_text(out, &text)?;
            }
        }
    }

    if let Some(svg_path) = &args.svg {
        let rings: Vec<Vec<Point2>> = if args.rings {
            onion_peel(&ds.points)?
                .layers
                .iter()
                .map(|l| l.vertex_ids.iter().map(|&id| ds.points[id]).collect())
                .collect()
        } else {
            Vec::new()
        };
        let svg = scatter_svg(
            &ds.points,
            &report.outlier_ids,
            &rings,
            &SvgOptions::default(),
        );
        write_text(svg_path, &svg)?;
    }
    Ok(())
}

/// Everything `eval` needs: a generator spec, a budget, seeds, and scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub gen: GenSpec,
    pub k: usize,
    pub seeds: Vec<u64>,
    pub scenarios: Vec<Scenario>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            gen: GenSpec::benchmark_default(0),
            k: 15,
            seeds: (1..=10).collect(),
            scenarios: Scenario::standard_three(15),
        }
    }
}

/// Parse the flat `key = value` config format with repeated `scenario`
/// blocks. Keys before the first block configure the generator and grid;
/// keys inside a block configure that scenario's detector.
pub fn parse_eval_config(text: &str, path: &str) -> Result<EvalConfig> {
    struct ScenarioProto {
        label: String,
        metric: MetricKind,
        scoring: Scoring,
        removal: Removal,
        standardize: bool,
    }

    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_string(),
        line: line as u64,
        message,
    };

    let mut n = 1500usize;
    let mut mean = (0.0, 0.0);
    let mut var = (1.0, 100.0);
    let mut contamination = 0.01;
    let mut multiplier = 4.0;
    let mut k = 15usize;
    let mut seeds: Vec<u64> = (1..=10).collect();
    let mut protos: Vec<ScenarioProto> = Vec::new();
    let mut in_scenario = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(label) = line.strip_prefix("scenario") {
            let label = label.trim();
            if label.is_empty() {
                return Err(parse_err(line_no, "scenario block needs a label".into()));
            }
            protos.push(ScenarioProto {
                label: label.to_string(),
                metric: MetricKind::Euclidean,
                scoring: Scoring::SumToAll,
                removal: Removal::SinglePoint,
                standardize: false,
            });
            in_scenario = true;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected key = value, got {line:?}")))?;
        let key = key.trim();
        let value = value.trim();
        let bad_value = |what: &str| parse_err(line_no, format!("invalid {what} value {value:?}"));

        if in_scenario {
            let proto = protos.last_mut().unwrap();
            match key {
                "metric" => {
                    proto.metric =
                        MetricKind::from_str(value, false).map_err(|_| bad_value("metric"))?;
                }
                "scoring" => {
                    proto.scoring =
                        Scoring::from_str(value, false).map_err(|_| bad_value("scoring"))?;
                }
                "removal" => {
                    proto.removal =
                        Removal::from_str(value, false).map_err(|_| bad_value("removal"))?;
                }
                "standardize" => {
                    proto.standardize = value.parse().map_err(|_| bad_value("standardize"))?;
                }
                _ => return Err(parse_err(line_no, format!("unknown scenario key {key:?}"))),
            }
        } else {
            match key {
                "n" => n = value.parse().map_err(|_| bad_value("n"))?,
                "mean" => mean = parse_pair(value).map_err(|m| parse_err(line_no, m))?,
                "var" => var = parse_pair(value).map_err(|m| parse_err(line_no, m))?,
                "contamination" => {
                    contamination = value.parse().map_err(|_| bad_value("contamination"))?
                }
                "multiplier" => multiplier = value.parse().map_err(|_| bad_value("multiplier"))?,
                "k" => k = value.parse().map_err(|_| bad_value("k"))?,
                "seeds" => {
                    seeds = value
                        .split(',')
                        .map(|s| s.trim().parse())
                        .collect::<std::result::Result<Vec<u64>, _>>()
                        .map_err(|_| bad_value("seeds"))?;
                }
                _ => return Err(parse_err(line_no, format!("unknown key {key:?}"))),
            }
        }
    }

    let gen = GenSpec {
        n,
        mean: Point2::new(mean.0, mean.1),
        variances: Variances2::new(var.0, var.1)?,
        contamination,
        outlier_radius_multiplier: multiplier,
        seed: 0,
    };
    let scenarios = if protos.is_empty() {
        Scenario::standard_three(k)
    } else {
        protos
            .into_iter()
            .map(|p| {
                Scenario::new(
                    p.label,
                    DetectionConfig {
                        k,
                        metric: p.metric,
                        scoring: p.scoring,
                        removal: p.removal,
                        standardize_first: p.standardize,
                    },
                )
            })
            .collect()
    };
    Ok(EvalConfig {
        gen,
        k,
        seeds,
        scenarios,
    })
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            parse_eval_config(&text, &path.display().to_string())?
        }
        None => EvalConfig::default(),
    };

    let matrix = run_experiment(&config.gen, &config.scenarios, &config.seeds)?;
    let summary = summarize(&matrix, &config.gen)?;
    print!("{}", summary.to_text_table());

    if let Some(out) = &args.out {
        let format = resolve_format(args.format, out, FileFormat::Csv);
        match format {
            FileFormat::Csv => write_text(out, &summary.to_csv())?,
            FileFormat::Json => {
                let mut text = serde_json::to_string_pretty(&summary)
                    .map_err(|e| Error::Internal(format!("summary serialization failed: {e}")))?;
                text.push('\n');
                write_text(out, &text)?;
            }
        }
    }
    Ok(())
}
