// Domain guards are written `!(x > 0.0)` so that NaN lands on the
// rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Command-line front end: simulate paths, print invariant-density
//! oracles, run the density estimator, drive the experiment suites and
//! validate kernels. All outputs are UTF-8 CSV with `#`-prefixed metadata
//! and 17-significant-digit numbers, so reruns with identical flags and
//! seed are byte-identical.

mod config;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use voldens::deconv::{
    bandwidth_schedule, default_grid, estimate, uniform_grid, DeconvKernel, EstimatorVariant,
};
use voldens::experiments::{
    exp_bias_expansion, exp_bound_diagnostics, exp_expectation_identity, exp_full_pipeline, fmt17,
    summary_csv, BiasConfig, BoundsConfig, IdentityConfig, PipelineConfig, TruthSpec,
    PIPELINE_FINAL_MISE_GOLDEN,
};
use voldens::kernels::{validate_condition_w, KernelSpec};
use voldens::simmodel::{observe, simulate_path, ModelSpec, ObservationSeries};

use config::{parse_params, FileConfig};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes: 2 argument/config, 3 numeric/domain, 4 I/O.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl AppError {
    fn code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Numeric(_) => 3,
            AppError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Numeric(m) | AppError::Io(m) => m,
        }
    }
}

impl From<voldens::Error> for AppError {
    fn from(e: voldens::Error) -> Self {
        match e {
            voldens::Error::InvalidConfig(_) | voldens::Error::InvalidKernel(_) => {
                AppError::Usage(e.to_string())
            }
            other => AppError::Numeric(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "voldens",
    version,
    about = "Volatility density estimation by Fourier deconvolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Master seed for anything stochastic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = automatic).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Flat key = value config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a volatility model and write normalized increments.
    Simulate {
        #[command(flatten)]
        common: CommonFlags,
        /// Built-in model name (expou, cir).
        #[arg(long)]
        model: Option<String>,
        /// Model parameter, repeatable: --param key=value.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Number of increments to record.
        #[arg(long)]
        n: Option<usize>,
        /// Sampling gap (mutually exclusive with --delta-exp).
        #[arg(long, conflicts_with = "delta_exp")]
        delta: Option<f64>,
        /// Exponent d in Delta = n^-d.
        #[arg(long = "delta-exp")]
        delta_exp: Option<f64>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the invariant density of log sigma^2 on a grid.
    Oracle {
        #[command(flatten)]
        common: CommonFlags,
        #[arg(long)]
        model: Option<String>,
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long = "grid-min", allow_negative_numbers = true)]
        grid_min: Option<f64>,
        #[arg(long = "grid-max", allow_negative_numbers = true)]
        grid_max: Option<f64>,
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the deconvolution estimator on an observation file.
    Estimate {
        #[command(flatten)]
        common: CommonFlags,
        /// Observation CSV (header with an `increment` column).
        #[arg(long)]
        input: PathBuf,
        /// Bandwidth; mutually exclusive with --gamma/--delta.
        #[arg(long, conflicts_with_all = ["gamma", "delta"])]
        h: Option<f64>,
        /// Bandwidth schedule constant; needs --delta.
        #[arg(long, requires = "delta")]
        gamma: Option<f64>,
        /// Sampling exponent d for the schedule; needs --gamma.
        #[arg(long, requires = "gamma")]
        delta: Option<f64>,
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long = "grid-min", allow_negative_numbers = true)]
        grid_min: Option<f64>,
        #[arg(long = "grid-max", allow_negative_numbers = true)]
        grid_max: Option<f64>,
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
        /// Estimator form: direct or ecf.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run one experiment suite and write its CSV plus a summary.
    Experiment {
        #[command(flatten)]
        common: CommonFlags,
        /// identity, bias, pipeline or bounds.
        #[arg(long)]
        suite: String,
        #[arg(long = "output-dir")]
        output_dir: PathBuf,
    },
    /// Check Condition W for a kernel and print the report.
    ValidateKernel {
        #[command(flatten)]
        common: CommonFlags,
        #[arg(long)]
        kernel: Option<String>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; keep its exit code for help and
            // version, force 2 for genuine usage errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Simulate {
            common,
            model,
            params,
            n,
            delta,
            delta_exp,
            output,
        } => {
            let cfg = setup(&common)?;
            cmd_simulate(&common, &cfg, model, params, n, delta, delta_exp, &output)
        }
        Command::Oracle {
            common,
            model,
            params,
            grid_min,
            grid_max,
            grid_points,
            output,
        } => {
            let cfg = setup(&common)?;
            cmd_oracle(
                &cfg,
                model,
                params,
                grid_min,
                grid_max,
                grid_points,
                &output,
            )
        }
        Command::Estimate {
            common,
            input,
            h,
            gamma,
            delta,
            kernel,
            grid_min,
            grid_max,
            grid_points,
            variant,
            output,
        } => {
            let cfg = setup(&common)?;
            cmd_estimate(
                &cfg,
                &input,
                h,
                gamma,
                delta,
                kernel,
                grid_min,
                grid_max,
                grid_points,
                variant,
                &output,
            )
        }
        Command::Experiment {
            common,
            suite,
            output_dir,
        } => {
            let cfg = setup(&common)?;
            cmd_experiment(&common, &cfg, &suite, &output_dir)
        }
        Command::ValidateKernel { common, kernel } => {
            let cfg = setup(&common)?;
            cmd_validate_kernel(&cfg, kernel)
        }
    }
}

fn setup(common: &CommonFlags) -> Result<FileConfig, AppError> {
    let cfg = FileConfig::load(common.config.as_deref())?;
    let threads = match common.threads {
        Some(t) => t,
        None => cfg.get_usize("threads")?.unwrap_or(0),
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| AppError::Usage(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(cfg)
}

fn seed_of(common: &CommonFlags, cfg: &FileConfig) -> Result<u64, AppError> {
    Ok(match common.seed {
        Some(s) => s,
        None => cfg.get_u64("seed")?.unwrap_or(1),
    })
}

fn resolve_model(
    name_flag: Option<String>,
    param_flags: &[String],
    cfg: &FileConfig,
) -> Result<(ModelSpec, BTreeMap<String, f64>), AppError> {
    let name = name_flag
        .or_else(|| cfg.get("model").map(str::to_string))
        .unwrap_or_else(|| "expou".to_string());
    let params = parse_params(param_flags, cfg)?;
    let model = ModelSpec::by_name(&name, &params)?;
    Ok((model, params))
}

fn resolve_kernel(name_flag: Option<String>, cfg: &FileConfig) -> Result<KernelSpec, AppError> {
    if let Some(coeffs) = cfg.get_f64_list("kernel_coeffs")? {
        let name = name_flag
            .or_else(|| cfg.get("kernel").map(str::to_string))
            .unwrap_or_else(|| "custom".to_string());
        return Ok(KernelSpec::from_poly(&name, &coeffs)?);
    }
    let name = name_flag
        .or_else(|| cfg.get("kernel").map(str::to_string))
        .unwrap_or_else(|| "poly3".to_string());
    Ok(KernelSpec::by_name(&name)?)
}

fn write_file(path: &Path, content: &str) -> Result<(), AppError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| AppError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))
}

fn params_comment(params: &BTreeMap<String, f64>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("# param.{k} = {}\n", fmt17(*v)))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    common: &CommonFlags,
    cfg: &FileConfig,
    model_flag: Option<String>,
    param_flags: Vec<String>,
    n_flag: Option<usize>,
    delta_flag: Option<f64>,
    delta_exp_flag: Option<f64>,
    output: &Path,
) -> Result<(), AppError> {
    let seed = seed_of(common, cfg)?;
    let (model, params) = resolve_model(model_flag, &param_flags, cfg)?;
    let n = match n_flag {
        Some(n) => n,
        None => cfg.get_usize("n")?.unwrap_or(1000),
    };
    if n < 2 {
        return Err(AppError::Usage(format!("--n must be at least 2, got {n}")));
    }
    let delta_exp = match delta_exp_flag {
        Some(d) => Some(d),
        None => cfg.get_f64("delta_exp")?,
    };
    let delta = match (delta_flag, delta_exp) {
        (Some(d), _) => {
            if !(d > 0.0) {
                return Err(AppError::Usage(format!(
                    "--delta must be positive, got {d}"
                )));
            }
            d
        }
        (None, Some(exp)) => bandwidth_schedule(n, exp, 8.5)?.delta,
        (None, None) => match cfg.get_f64("delta")? {
            Some(d) => d,
            None => return Err(AppError::Usage("need --delta or --delta-exp".into())),
        },
    };
    let substeps = cfg.get_usize("substeps")?.unwrap_or(50);
    let fine = delta / substeps as f64;
    let horizon = n as f64 * delta;

    let path = simulate_path(&model, horizon, fine, seed)?;
    let obs = observe(&path, delta, n)?;

    let mut out = String::new();
    out.push_str(&format!("# voldens {VERSION}\n# command = simulate\n"));
    out.push_str(&format!("# model = {}\n", model.name()));
    out.push_str(&params_comment(&params));
    out.push_str(&format!("# n = {n}\n# delta = {}\n", fmt17(delta)));
    if let Some(exp) = delta_exp_flag {
        out.push_str(&format!("# delta_exp = {}\n", fmt17(exp)));
    }
    out.push_str(&format!(
        "# fine_step = {}\n# horizon = {}\n# seed = {seed}\n# dropped = {}\n",
        fmt17(fine),
        fmt17(horizon),
        obs.dropped
    ));
    out.push_str("i,increment,log_square\n");
    for (i, &x) in obs.increments.iter().enumerate() {
        if x == 0.0 {
            out.push_str(&format!("{},{},\n", i + 1, fmt17(x)));
        } else {
            out.push_str(&format!("{},{},{}\n", i + 1, fmt17(x), fmt17((x * x).ln())));
        }
    }
    write_file(output, &out)?;
    println!(
        "simulate: {} increments (dropped {}) from '{}' at delta = {delta:.6} -> {}",
        obs.n,
        obs.dropped,
        model.name(),
        output.display()
    );
    Ok(())
}

fn cmd_oracle(
    cfg: &FileConfig,
    model_flag: Option<String>,
    param_flags: Vec<String>,
    grid_min: Option<f64>,
    grid_max: Option<f64>,
    grid_points: Option<usize>,
    output: &Path,
) -> Result<(), AppError> {
    let (model, params) = resolve_model(model_flag, &param_flags, cfg)?;
    let min = match grid_min {
        Some(v) => v,
        None => cfg.get_f64("grid_min")?.unwrap_or(-4.0),
    };
    let max = match grid_max {
        Some(v) => v,
        None => cfg.get_f64("grid_max")?.unwrap_or(4.0),
    };
    let points = match grid_points {
        Some(v) => v,
        None => cfg.get_usize("grid_points")?.unwrap_or(101),
    };
    let grid = uniform_grid(min, max, points)?;
    let mut out = String::new();
    out.push_str(&format!("# voldens {VERSION}\n# command = oracle\n"));
    out.push_str(&format!("# model = {}\n", model.name()));
    out.push_str(&params_comment(&params));
    out.push_str(&format!("# grid = {min},{max},{points}\n"));
    out.push_str("x,f_true\n");
    for &x in &grid {
        out.push_str(&format!(
            "{},{}\n",
            fmt17(x),
            fmt17(model.log_sigma2_density(x)?)
        ));
    }
    write_file(output, &out)?;
    println!(
        "oracle: invariant log-variance density of '{}' on [{min}, {max}] -> {}",
        model.name(),
        output.display()
    );
    Ok(())
}

struct ObservationsFile {
    series: ObservationSeries,
    seed: Option<u64>,
}

fn read_observations(path: &Path) -> Result<ObservationsFile, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut delta_meta: Option<f64> = None;
    let mut seed_meta: Option<u64> = None;
    let mut increment_col: Option<usize> = None;
    let mut increments = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "delta" => delta_meta = value.trim().parse().ok(),
                    "seed" => seed_meta = value.trim().parse().ok(),
                    _ => {}
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match increment_col {
            None => {
                let col = fields.iter().position(|f| *f == "increment");
                match col {
                    Some(c) => increment_col = Some(c),
                    None => {
                        return Err(AppError::Usage(format!(
                            "{}:{}: expected a header naming an 'increment' column",
                            path.display(),
                            lineno + 1
                        )))
                    }
                }
            }
            Some(col) => {
                let Some(field) = fields.get(col) else {
                    return Err(AppError::Usage(format!(
                        "{}:{}: row has no column {col}",
                        path.display(),
                        lineno + 1
                    )));
                };
                let x = field.parse::<f64>().map_err(|_| {
                    AppError::Usage(format!(
                        "{}:{}: bad increment '{field}'",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                increments.push(x);
            }
        }
    }
    if increments.is_empty() {
        return Err(AppError::Usage(format!(
            "{}: no observations found",
            path.display()
        )));
    }
    let series = ObservationSeries::from_increments(increments, delta_meta.unwrap_or(0.0));
    Ok(ObservationsFile {
        series,
        seed: seed_meta,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_estimate(
    cfg: &FileConfig,
    input: &Path,
    h_flag: Option<f64>,
    gamma_flag: Option<f64>,
    delta_flag: Option<f64>,
    kernel_flag: Option<String>,
    grid_min: Option<f64>,
    grid_max: Option<f64>,
    grid_points: Option<usize>,
    variant_flag: Option<String>,
    output: &Path,
) -> Result<(), AppError> {
    let obs_file = read_observations(input)?;
    let data = &obs_file.series;
    let spec = resolve_kernel(kernel_flag, cfg)?;
    let variant = match variant_flag.or_else(|| cfg.get("variant").map(str::to_string)) {
        Some(v) => EstimatorVariant::from_str(&v)?,
        None => EstimatorVariant::Ecf,
    };

    // An explicit --h wins outright (clap already rejects mixing it with
    // --gamma/--delta flags); otherwise the schedule pair, flags patched
    // over config values; otherwise a config-file h.
    let gamma = gamma_flag.or(cfg.get_f64("gamma")?);
    let delta_exp = delta_flag.or(cfg.get_f64("delta")?);
    let mut schedule_echo = None;
    let h = if let Some(h) = h_flag {
        h
    } else if let (Some(gamma), Some(delta_exp)) = (gamma, delta_exp) {
        let sched = bandwidth_schedule(data.n, delta_exp, gamma)?;
        if !sched.in_regime {
            eprintln!(
                "warning: gamma = {gamma} is not above 4/delta = {}; proceeding outside the \
                 guaranteed regime",
                4.0 / delta_exp
            );
        }
        schedule_echo = Some(sched);
        sched.h
    } else if let Some(h) = cfg.get_f64("h")? {
        h
    } else {
        return Err(AppError::Usage(
            "need --h or --gamma together with --delta".into(),
        ));
    };
    if !(h > 0.0) {
        return Err(AppError::Usage(format!(
            "bandwidth must be positive, got {h}"
        )));
    }

    let grid = match (grid_min, grid_max) {
        (None, None) if cfg.get("grid_min").is_none() && cfg.get("grid_max").is_none() => {
            let mut g = default_grid(data)?;
            if let Some(points) = grid_points {
                let (lo, hi) = (g[0], *g.last().unwrap());
                g = uniform_grid(lo, hi, points)?;
            }
            g
        }
        _ => {
            let lo = match grid_min {
                Some(v) => v,
                None => cfg.get_f64("grid_min")?.ok_or_else(|| {
                    AppError::Usage("--grid-min and --grid-max go together".into())
                })?,
            };
            let hi = match grid_max {
                Some(v) => v,
                None => cfg.get_f64("grid_max")?.ok_or_else(|| {
                    AppError::Usage("--grid-min and --grid-max go together".into())
                })?,
            };
            let points = match grid_points {
                Some(v) => v,
                None => cfg.get_usize("grid_points")?.unwrap_or(101),
            };
            uniform_grid(lo, hi, points)?
        }
    };

    let kernel = DeconvKernel::new(spec, h)?;
    let mut est = estimate(data, &kernel, &grid, variant)?;
    est.meta.seed = obs_file.seed;

    let mut out = String::new();
    out.push_str(&format!("# voldens {VERSION}\n# command = estimate\n"));
    out.push_str(&format!("# input = {}\n", input.display()));
    out.push_str(&format!(
        "# n = {}\n# dropped = {}\n# delta = {}\n",
        est.meta.n,
        est.meta.dropped,
        fmt17(est.meta.delta)
    ));
    out.push_str(&format!("# h = {}\n", fmt17(est.meta.h)));
    if let Some(s) = schedule_echo {
        out.push_str(&format!(
            "# gamma = {}\n# delta_exp = {}\n# in_regime = {}\n",
            fmt17(s.gamma),
            fmt17(s.delta_exp),
            s.in_regime
        ));
    }
    out.push_str(&format!(
        "# kernel = {}\n# variant = {}\n",
        est.meta.kernel, est.meta.variant
    ));
    if let Some(seed) = est.meta.seed {
        out.push_str(&format!("# seed = {seed}\n"));
    }
    out.push_str(&format!(
        "# grid = {},{},{}\n",
        fmt17(grid[0]),
        fmt17(*grid.last().unwrap()),
        grid.len()
    ));
    out.push_str("x,f_hat\n");
    for (x, v) in est.grid.iter().zip(&est.values) {
        out.push_str(&format!("{},{}\n", fmt17(*x), fmt17(*v)));
    }
    write_file(output, &out)?;
    println!(
        "estimate: {} points at h = {h:.6} ({}) -> {}",
        grid.len(),
        est.meta.variant,
        output.display()
    );
    Ok(())
}

fn truth_from_config(cfg: &FileConfig) -> Result<TruthSpec, AppError> {
    match cfg.get("truth").unwrap_or("gaussian") {
        "gaussian" => Ok(TruthSpec::Gaussian {
            mean: cfg.get_f64("truth_mean")?.unwrap_or(0.0),
            sd: cfg.get_f64("truth_sd")?.unwrap_or(1.0),
        }),
        "point" => Ok(TruthSpec::PointMass {
            at: cfg.get_f64("truth_at")?.unwrap_or(0.0),
        }),
        other => Err(AppError::Usage(format!(
            "config key 'truth': expected gaussian|point, got '{other}'"
        ))),
    }
}

fn cmd_experiment(
    common: &CommonFlags,
    cfg: &FileConfig,
    suite: &str,
    output_dir: &Path,
) -> Result<(), AppError> {
    let seed = seed_of(common, cfg)?;
    std::fs::create_dir_all(output_dir)
        .map_err(|e| AppError::Io(format!("cannot create {}: {e}", output_dir.display())))?;
    let variant = match cfg.get("variant") {
        Some(v) => EstimatorVariant::from_str(v)?,
        None => EstimatorVariant::Ecf,
    };
    let kernel = resolve_kernel(None, cfg)?;

    let (csv, checks) = match suite {
        "identity" => {
            let defaults = IdentityConfig::default_gaussian(seed);
            let grid = match (cfg.get_f64("grid_min")?, cfg.get_f64("grid_max")?) {
                (Some(lo), Some(hi)) => {
                    uniform_grid(lo, hi, cfg.get_usize("grid_points")?.unwrap_or(5))?
                }
                _ => defaults.grid.clone(),
            };
            let config = IdentityConfig {
                truth: truth_from_config(cfg)?,
                n: cfg.get_usize("n")?.unwrap_or(defaults.n),
                replicates: cfg.get_usize("replicates")?.unwrap_or(defaults.replicates),
                h: cfg.get_f64("h")?.unwrap_or(defaults.h),
                kernel,
                grid,
                variant,
                seed,
            };
            let report = exp_expectation_identity(&config)?;
            println!("identity: max |z| = {:.3}", report.max_abs_z);
            (report.to_csv(VERSION, seed), report.checks())
        }
        "bias" => {
            let defaults = BiasConfig::default();
            let config = BiasConfig {
                h_schedule: cfg
                    .get_f64_list("h_schedule")?
                    .unwrap_or(defaults.h_schedule),
                x: cfg.get_f64("x")?.unwrap_or(defaults.x),
                inflection_x: cfg
                    .get_f64("inflection_x")?
                    .unwrap_or(defaults.inflection_x),
                kernel,
            };
            let report = exp_bias_expansion(&config)?;
            for r in &report.rows {
                println!("bias: h = {}: ratio = {:.4}", r.h, r.ratio);
            }
            (report.to_csv(VERSION), report.checks())
        }
        "pipeline" => {
            let defaults = PipelineConfig::default_expou(seed)?;
            let params = parse_params(&[], cfg)?;
            let model = match cfg.get("model") {
                Some(name) => ModelSpec::by_name(name, &params)?,
                None => defaults.model.clone(),
            };
            let config = PipelineConfig {
                model,
                n_schedule: cfg
                    .get_usize_list("n_schedule")?
                    .unwrap_or(defaults.n_schedule),
                delta_exp: cfg.get_f64("delta_exp")?.unwrap_or(defaults.delta_exp),
                gamma: cfg.get_f64("gamma")?.unwrap_or(defaults.gamma),
                kernel,
                grid_min: cfg.get_f64("grid_min")?.unwrap_or(defaults.grid_min),
                grid_max: cfg.get_f64("grid_max")?.unwrap_or(defaults.grid_max),
                grid_points: cfg
                    .get_usize("grid_points")?
                    .unwrap_or(defaults.grid_points),
                replicates: cfg.get_usize("replicates")?.unwrap_or(defaults.replicates),
                variant,
                seed,
                substeps: cfg.get_usize("substeps")?.unwrap_or(defaults.substeps),
            };
            let report = exp_full_pipeline(&config)?;
            for m in &report.mise {
                println!("pipeline: n = {}: mise = {:.6e}", m.n, m.mise);
            }
            (
                report.to_csv(VERSION, seed),
                report.checks(PIPELINE_FINAL_MISE_GOLDEN),
            )
        }
        "bounds" => {
            let defaults = BoundsConfig::default();
            let config = BoundsConfig {
                h_schedule: cfg
                    .get_f64_list("h_schedule")?
                    .unwrap_or(defaults.h_schedule),
                kernel,
                sample_points: cfg
                    .get_usize("sample_points")?
                    .unwrap_or(defaults.sample_points),
            };
            let report = exp_bound_diagnostics(&config)?;
            for r in &report.rows {
                println!(
                    "bounds: h = {}: gamma0 = {:.4}, sup ratio = {:.4}",
                    r.h, r.gamma0, r.sup_ratio
                );
            }
            (report.to_csv(VERSION), report.checks())
        }
        other => {
            return Err(AppError::Usage(format!(
                "unknown suite '{other}' (identity|bias|pipeline|bounds)"
            )))
        }
    };

    write_file(&output_dir.join(format!("{suite}.csv")), &csv)?;
    let summary = summary_csv(VERSION, &format!("seed = {seed}"), &checks);
    write_file(&output_dir.join("summary.csv"), &summary)?;
    for c in &checks {
        println!(
            "{}: {} = {:.6e} ({}) -> {}",
            c.suite,
            c.check,
            c.value,
            c.bound,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}

fn cmd_validate_kernel(cfg: &FileConfig, kernel_flag: Option<String>) -> Result<(), AppError> {
    let spec = resolve_kernel(kernel_flag, cfg)?;
    let report = validate_condition_w(&spec);
    println!(
        "kernel '{}': A = {}, alpha = {}, second moment = {}",
        spec.name(),
        spec.tail_a(),
        spec.tail_alpha(),
        spec.second_moment()
    );
    for (name, check) in report.items() {
        println!(
            "  {:18} {}  measured = {:.9e}  ({})",
            name,
            if check.pass { "pass" } else { "FAIL" },
            check.measured,
            check.detail
        );
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(AppError::Numeric(format!(
            "kernel '{}' violates Condition W",
            spec.name()
        )))
    }
}
