use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use iterft::degrade::{degrade, DegradeSpec};
use iterft::denoise::{self, LansConfig, Method, MethodParams, DEFAULT_MAX_ITERATIONS};
use iterft::graph_models::{Directedness, ModelKind, ModelSpec};
use iterft::harness::config::SweepConfig;
use iterft::harness::example::run_example;
use iterft::harness::io::{load_matrix, read_aggregates, save_matrix};
use iterft::harness::render::{write_curves, write_heatmaps, Metric};
use iterft::harness::sweep::{curve_series, run_sweep, write_outputs, Axis};
use iterft::metrics::{f1_score, mse};
use iterft::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "iterft", version, about = "Network adjacency matrix denoising experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a ground-truth network and write its adjacency matrix.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Prune edges and add Gaussian noise to a matrix.
    Degrade {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        degrade: DegradeArgs,
        /// Treat the matrix as directed even if it is symmetric.
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one denoising method on a matrix.
    Denoise {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        method: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print F1 and MSE of a denoised matrix against the truth.
    Score {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        denoised: PathBuf,
    },
    /// Run the replicated parameter sweep and write tables and charts.
    Sweep {
        /// Flat `key = value` configuration; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Degrade one network, denoise it with every method and draw the
    /// eight adjacency heatmaps.
    RenderExample {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        degrade: DegradeArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw one metric along one axis from an aggregate table.
    RenderCurves {
        #[arg(long)]
        aggregates: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long)]
        metric: String,
        #[arg(long)]
        axis: String,
        /// Value of the other axis held fixed along the curve.
        #[arg(long, default_value_t = 0.25)]
        fixed: f64,
        /// Position of the dashed reference line.
        #[arg(long, default_value_t = 0.25)]
        default_line: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Model choice; unset parameters take the model's default.
#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    model: String,
    /// Kautz alphabet parameter M.
    #[arg(long)]
    kautz_m: Option<usize>,
    /// Kautz string length parameter N.
    #[arg(long)]
    kautz_n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Vertex count for the tree and preferential attachment models.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    children: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    power: Option<f64>,
    #[arg(long)]
    zero_appeal: Option<f64>,
    /// Seed for the preferential attachment model.
    #[arg(long)]
    model_seed: Option<u64>,
}

#[derive(Debug, Args)]
struct DegradeArgs {
    #[arg(long, default_value_t = DegradeSpec::DEFAULT_PRUNE)]
    prune: f64,
    #[arg(long, default_value_t = DegradeSpec::DEFAULT_NOISE_SD)]
    noise_sd: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    i_max: usize,
    /// LANS significance level.
    #[arg(long, default_value_t = LansConfig::DEFAULT_ALPHA)]
    alpha: f64,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec> {
        let kind: ModelKind = self.model.parse()?;
        let spec = match ModelSpec::default_for(kind) {
            ModelSpec::Kautz { m, n } => ModelSpec::Kautz {
                m: self.kautz_m.unwrap_or(m),
                n: self.kautz_n.unwrap_or(n),
            },
            ModelSpec::Lattice { rows, cols } => ModelSpec::Lattice {
                rows: self.rows.unwrap_or(rows),
                cols: self.cols.unwrap_or(cols),
            },
            ModelSpec::Tree { n, children } => ModelSpec::Tree {
                n: self.vertices.unwrap_or(n),
                children: self.children.unwrap_or(children),
            },
            ModelSpec::FullBipartite { n1, n2 } => ModelSpec::FullBipartite {
                n1: self.n1.unwrap_or(n1),
                n2: self.n2.unwrap_or(n2),
            },
            ModelSpec::PreferentialAttachment { n, power, zero_appeal, seed } => {
                ModelSpec::PreferentialAttachment {
                    n: self.vertices.unwrap_or(n),
                    power: self.power.unwrap_or(power),
                    zero_appeal: self.zero_appeal.unwrap_or(zero_appeal),
                    seed: self.model_seed.unwrap_or(seed),
                }
            }
        };
        Ok(spec)
    }
}

impl DegradeArgs {
    fn spec(&self) -> Result<DegradeSpec> {
        DegradeSpec::new(self.prune, self.noise_sd, self.seed)
    }
}

impl ParamArgs {
    fn params(&self) -> Result<MethodParams> {
        if self.i_max == 0 {
            return Err(Error::Config("--i-max must be at least 1".into()));
        }
        Ok(MethodParams { i_max: self.i_max, lans: LansConfig::new(self.alpha)? })
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { model, out } => save_matrix(&out, &model.spec()?.build()?),
        Command::Degrade { input, degrade: args, directed, out } => {
            let x = load_matrix(&input)?;
            let directedness = if directed || !x.is_symmetric() {
                Directedness::Directed
            } else {
                Directedness::Undirected
            };
            let instance = degrade(&x, directedness, &args.spec()?)?;
            save_matrix(&out, &instance.observed)
        }
        Command::Denoise { input, method, params, out } => {
            let method: Method = method.parse()?;
            let x = load_matrix(&input)?;
            let result = denoise::run(method, &x, &params.params()?)?;
            save_matrix(&out, &result.output)?;
            if method == Method::IterativeFt {
                eprintln!("iterations={} converged={}", result.iterations, result.converged);
            }
            Ok(())
        }
        Command::Score { truth, denoised } => {
            let (t, d) = (load_matrix(&truth)?, load_matrix(&denoised)?);
            println!("f1={}", f1_score(&t, &d)?);
            println!("mse={}", mse(&t, &d)?);
            Ok(())
        }
        Command::Sweep { config, out_dir } => {
            let config = match config {
                Some(path) => SweepConfig::parse(&std::fs::read_to_string(path)?)?,
                None => SweepConfig::default(),
            };
            let output = run_sweep(&config)?;
            let written = write_outputs(&out_dir, &output)?;
            eprintln!("{} trials, {} files written to {}", output.trials.len(), written.len(), out_dir.display());
            Ok(())
        }
        Command::RenderExample { model, degrade, params, out } => {
            let panels = run_example(&model.spec()?, &degrade.spec()?, &params.params()?)?;
            write_heatmaps(&panels, &out)
        }
        Command::RenderCurves { aggregates, model, metric, axis, fixed, default_line, out } => {
            let model: ModelKind = model.parse()?;
            let metric: Metric = metric.parse()?;
            let axis: Axis = axis.parse()?;
            let text = std::fs::read_to_string(&aggregates)?;
            let series = curve_series(&read_aggregates(text.as_bytes())?, model, axis, fixed);
            if series.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "no {model} aggregates along {axis} with the other axis at {fixed}"
                )));
            }
            write_curves(&series, metric, axis, default_line, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
