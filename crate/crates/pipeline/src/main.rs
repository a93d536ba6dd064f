use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clustat_core::{DistanceMetric, KMeansConfig, Linkage};
use clustat_pipeline::analysis::{AlgorithmConfig, AnalysisConfig, Stages, ValidationConfig};
use clustat_pipeline::report::{self, Format};
use clustat_pipeline::{
    ingest_csv, run_analysis, synthesize_records, Dataset, PipelineError, Result,
};

#[derive(Parser)]
#[command(
    name = "clustat",
    version,
    about = "Correlation, clustering and cluster validation for municipality tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a table and print its fingerprint, or its canonical CSV form.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        /// Only validate; print row count and content hash.
        #[arg(long)]
        check: bool,
        /// Write the canonical CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pearson, Spearman and Kendall coefficients of each variable against the target.
    Correlate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "MHR")]
        target: String,
        /// Compare the population coefficient with the published value; exit 3 on mismatch.
        #[arg(long)]
        paper_data: bool,
    },
    /// Least-squares line and LOWESS curve of the target against one variable.
    Regress {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "MHR")]
        y: String,
        #[arg(long, default_value_t = clustat_core::stats::DEFAULT_FRACTION)]
        lowess_frac: f64,
        #[arg(long, default_value_t = clustat_core::stats::DEFAULT_ROBUSTNESS_ITERATIONS)]
        lowess_iter: usize,
    },
    /// Cluster the municipalities.
    Cluster {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        seed: u64,
    },
    /// Silhouette, gap statistic and SSW over a range of k, with the k each rule selects.
    Validate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        #[arg(long, default_value_t = 50)]
        gap_b: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Every stage in one report.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long, default_value = "MHR")]
        target: String,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        #[arg(long, default_value_t = 50)]
        gap_b: usize,
        #[arg(long, default_value_t = clustat_core::stats::DEFAULT_FRACTION)]
        lowess_frac: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Write a synthetic table with planted groups.
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Distance between group centers, in group standard deviations.
        #[arg(long, default_value_t = 8.0)]
        separation: f64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the planted labels (`NOISE` for noise rows).
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Render a saved run report.
    Report {
        #[arg(long)]
        run: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated clustering columns; all 16 by default.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    metric: MetricArg,
    /// Cluster on raw values instead of z-scores.
    #[arg(long)]
    no_standardize: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long, value_enum, default_value_t = AlgoArg::Kmeans)]
    algo: AlgoArg,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_enum, default_value_t = LinkageArg::Single)]
    linkage: LinkageArg,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    min_pts: Option<usize>,
    #[arg(long, default_value_t = 25)]
    restarts: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Kmeans,
    #[value(alias = "hierarchical")]
    Hier,
    Dbscan,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Manhattan,
    Canberra,
    Pearson,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkageArg {
    Single,
    Complete,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Svg,
}

impl From<MetricArg> for DistanceMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Euclidean => DistanceMetric::Euclidean,
            MetricArg::Manhattan => DistanceMetric::Manhattan,
            MetricArg::Canberra => DistanceMetric::Canberra,
            MetricArg::Pearson => DistanceMetric::Pearson,
        }
    }
}

impl AlgoArgs {
    fn config(&self) -> Result<AlgorithmConfig> {
        Ok(match self.algo {
            AlgoArg::Kmeans => {
                let d = KMeansConfig::<f64>::new(self.k);
                AlgorithmConfig::Kmeans {
                    k: self.k,
                    restarts: self.restarts,
                    max_iterations: d.max_iterations,
                    tolerance: d.tolerance,
                }
            }
            AlgoArg::Hier => AlgorithmConfig::Hierarchical {
                k: self.k,
                linkage: match self.linkage {
                    LinkageArg::Single => Linkage::Single,
                    LinkageArg::Complete => Linkage::Complete,
                },
            },
            AlgoArg::Dbscan => match (self.eps, self.min_pts) {
                (Some(eps), Some(min_pts)) => AlgorithmConfig::Dbscan { eps, min_pts },
                _ => return Err(PipelineError::config("dbscan needs --eps and --min-pts")),
            },
        })
    }
}

fn base_config(common: &Common, stages: Stages) -> AnalysisConfig {
    AnalysisConfig {
        input: Some(common.input.display().to_string()),
        stages,
        columns: common.columns.clone(),
        standardize: !common.no_standardize,
        metric: common.metric.into(),
        ..AnalysisConfig::default()
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| PipelineError::Io {
            path: path.into(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analyze(common: &Common, config: AnalysisConfig) -> Result<clustat_pipeline::RunReport> {
    let data: Dataset = ingest_csv(&common.input)?;
    let report = run_analysis(&config, &data)?;
    write_output(common.out.as_deref(), &report::to_json(&report))?;
    Ok(report)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { input, check, out } => {
            let data = ingest_csv(&input)?;
            if check {
                let f = data.fingerprint();
                println!(
                    "ok: {} rows, {} columns, sha256 {}",
                    f.rows,
                    f.columns.len(),
                    f.sha256
                );
            } else {
                write_output(out.as_deref(), &data.to_csv())?;
            }
        }
        Command::Correlate {
            common,
            target,
            paper_data,
        } => {
            let mut config = base_config(
                &common,
                Stages {
                    correlate: true,
                    ..Stages::NONE
                },
            );
            config.target = target;
            config.reference_check = paper_data;
            let report = analyze(&common, config)?;
            if let Some(check) = report
                .correlations
                .as_ref()
                .and_then(|c| c.reference_check.as_ref())
            {
                eprintln!(
                    "{}: pearson({}, MHR) = {:.7}, published {:.7}, tolerance {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.variable,
                    check.observed,
                    check.expected,
                    check.tolerance
                );
                if !check.pass {
                    return Err(PipelineError::Numeric {
                        context: "published coefficient not reproduced".into(),
                        source: clustat_core::Error::Numeric(format!(
                            "{} vs {}",
                            check.observed, check.expected
                        )),
                    });
                }
            }
        }
        Command::Regress {
            common,
            x,
            y,
            lowess_frac,
            lowess_iter,
        } => {
            let mut config = base_config(
                &common,
                Stages {
                    regress: true,
                    ..Stages::NONE
                },
            );
            config.target = y;
            config.regression.x = Some(x);
            config.regression.lowess_fraction = lowess_frac;
            config.regression.lowess_iterations = lowess_iter;
            analyze(&common, config)?;
        }
        Command::Cluster { common, algo, seed } => {
            let mut config = base_config(
                &common,
                Stages {
                    cluster: true,
                    ..Stages::NONE
                },
            );
            config.algorithm = algo.config()?;
            config.seed = seed;
            analyze(&common, config)?;
        }
        Command::Validate {
            common,
            algo,
            k_min,
            k_max,
            gap_b,
            seed,
        } => {
            let mut config = base_config(
                &common,
                Stages {
                    validate: true,
                    ..Stages::NONE
                },
            );
            config.algorithm = algo.config()?;
            config.validation = ValidationConfig {
                k_min,
                k_max,
                gap_b,
            };
            config.seed = seed;
            analyze(&common, config)?;
        }
        Command::Analyze {
            common,
            algo,
            target,
            k_min,
            k_max,
            gap_b,
            lowess_frac,
            seed,
        } => {
            let mut config = base_config(&common, Stages::ALL);
            config.algorithm = algo.config()?;
            config.target = target;
            config.validation = ValidationConfig {
                k_min,
                k_max,
                gap_b,
            };
            config.regression.lowess_fraction = lowess_frac;
            config.seed = seed;
            analyze(&common, config)?;
        }
        Command::Synth {
            seed,
            n,
            k,
            separation,
            noise,
            out,
            truth,
        } => {
            let (data, labels) = synthesize_records(seed, n, k, separation, noise)?;
            write_output(Some(&out), &data.to_csv())?;
            if let Some(path) = truth {
                let mut text = String::from("NAME,GROUP\n");
                for (r, l) in data.records.iter().zip(labels) {
                    let l = l.map(|l| l.to_string()).unwrap_or_else(|| "NOISE".into());
                    text.push_str(&format!("{},{l}\n", r.name));
                }
                write_output(Some(&path), &text)?;
            }
        }
        Command::Report { run, format, out } => {
            let text = std::fs::read_to_string(&run).map_err(|source| PipelineError::Io {
                path: run.clone(),
                source,
            })?;
            let report = report::from_json(&text)?;
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
                FormatArg::Svg => Format::Svg,
            };
            for path in report::emit_report(&report, format, &out)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
