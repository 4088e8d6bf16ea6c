//! Command line front end.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 data error
//! (unreadable or invalid wave/series files, unmapped labels), 3 I/O error
//! while writing outputs. Data goes to files or stdout, progress to stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use coevonet_core::clustering::cluster_quality;
use coevonet_core::metrics::{cluster_opinion, inner_connectivity, metrics_row, opinion_spread};
use coevonet_core::stats::{percent_error, pooled_samples, trend_test};
use coevonet_core::synth::synth_initial;
use coevonet_core::{
    best_partition, Bounds, ClusterAverages, Direction,
    DynamicNetwork, Parameter, Partition, SimulationConfig, TrendTest,
};

use crate::config::{load_run_config, load_synth_config, ConfigError, RunConfig};
use crate::manifest::{FileDigest, RunManifest};
use crate::series::{format_series, read_series, SeriesError};
use crate::wave::{format_wave, load_wave, network_to_wave, wave_to_network, WaveError};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "coevonet", version, about = "Coevolving opinion and friendship network simulator")]
pub struct Cli {
    /// Master seed; overrides the config's `master_seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (for `synth`, the output file).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads, 0 = one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Suppress progress messages.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run replicates of one configuration from an initial wave.
    Simulate(RunArgs),
    /// Run one configuration per value of a single parameter.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// `name=v1,v2,...` with name one of w, k (k_amp), c.
        #[arg(long)]
        vary: String,
    },
    /// Detect clusters in a wave and print per-cluster metrics.
    Cluster {
        #[arg(long)]
        wave: PathBuf,
    },
    /// Compare a simulated series with observed waves.
    Validate {
        #[arg(long)]
        series: PathBuf,
        /// Observed waves, in any order.
        #[arg(long = "wave", required = true)]
        waves: Vec<PathBuf>,
        /// `label=step,...` pairing each wave label with a model step.
        #[arg(long)]
        map: String,
        /// Regress per-wave averages instead of pooled per-cluster values.
        #[arg(long)]
        averaged: bool,
    },
    /// Generate a synthetic initial wave.
    Synth {
        /// JSON generator spec; the built-in first-wave preset if omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "")]
        label: String,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Initial network.
    #[arg(long)]
    pub wave: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<coevonet_core::Error> for CliError {
    fn from(e: coevonet_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<WaveError> for CliError {
    fn from(e: WaveError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Data(e.to_string())
    }
}

struct Ctx {
    quiet: bool,
    started: Instant,
}

impl Ctx {
    fn log(&self, msg: &str) {
        if !self.quiet {
            eprintln!("[{:>7.2}s] {msg}", self.started.elapsed().as_secs_f64());
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(io_err(path))
}

fn out_dir(cli_out: &Option<PathBuf>) -> Result<PathBuf, CliError> {
    let dir = cli_out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    Ok(dir)
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let ctx = Ctx {
        quiet: cli.quiet,
        started: Instant::now(),
    };
    let result = pool.install(|| match &cli.command {
        Command::Simulate(args) => cmd_simulate(&cli, &ctx, args),
        Command::Sweep { run, vary } => cmd_sweep(&cli, &ctx, run, vary),
        Command::Cluster { wave } => cmd_cluster(wave),
        Command::Validate {
            series,
            waves,
            map,
            averaged,
        } => cmd_validate(series, waves, map, *averaged),
        Command::Synth { spec, label } => cmd_synth(&cli, spec.as_deref(), label),
    });
    ctx.log("done");
    result
}

fn load_run(cli: &Cli, args: &RunArgs) -> Result<(SimulationConfig, DynamicNetwork, Vec<FileDigest>), CliError> {
    let rc = load_run_config(&args.config)?;
    let mut cfg = rc.to_simulation()?;
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    let wave = load_wave(&args.wave)?;
    let (net, _) = wave_to_network(&wave, cfg.params.bounds);
    let inputs = [&args.config, &args.wave]
        .into_iter()
        .map(|p| FileDigest::of_file(p).map_err(io_err(p)))
        .collect::<Result<_, _>>()?;
    Ok((cfg, net, inputs))
}

fn cmd_simulate(cli: &Cli, ctx: &Ctx, args: &RunArgs) -> Result<(), CliError> {
    let (cfg, net, inputs) = load_run(cli, args)?;
    let dir = out_dir(&cli.out)?;
    ctx.log(&format!(
        "simulating {} replicates x {} steps on {} nodes",
        cfg.replicates,
        cfg.horizon,
        net.len()
    ));
    let result = parallel::run(&net, &cfg)?;
    let text = format_series(&result);
    write_file(&dir.join("series.csv"), &text)?;
    let mut manifest = RunManifest::new("simulate", cfg.master_seed, RunConfig::from_simulation(&cfg));
    manifest.inputs = inputs;
    manifest.outputs.push(FileDigest::of_bytes("series.csv", text.as_bytes()));
    manifest.write(&dir).map_err(io_err(&dir))?;
    Ok(())
}

/// Parses `name=v1,v2,...`.
pub fn parse_vary(spec: &str) -> Result<(Parameter, Vec<f64>), CliError> {
    let bad = || CliError::Config(format!("bad --vary `{spec}`, expected name=v1,v2,..."));
    let (name, values) = spec.split_once('=').ok_or_else(bad)?;
    let param = Parameter::parse(name.trim())
        .ok_or_else(|| CliError::Config(format!("unknown sweep parameter `{name}`")))?;
    let values = values
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((param, values))
}

#[derive(Serialize)]
struct SweepConfig {
    base: RunConfig,
    vary: &'static str,
    values: Vec<f64>,
}

fn cmd_sweep(cli: &Cli, ctx: &Ctx, args: &RunArgs, vary: &str) -> Result<(), CliError> {
    let (param, values) = parse_vary(vary)?;
    let (cfg, net, inputs) = load_run(cli, args)?;
    let dir = out_dir(&cli.out)?;
    coevonet_core::engine::sweep_configs(&cfg, param, &values)?;
    let mut manifest = RunManifest::new(
        "sweep",
        cfg.master_seed,
        SweepConfig {
            base: RunConfig::from_simulation(&cfg),
            vary: param.name(),
            values: values.clone(),
        },
    );
    manifest.inputs = inputs;
    for (v, result) in parallel::sweep(&net, &cfg, param, &values)? {
        let name = format!("series_{}_{v}.csv", param.name());
        ctx.log(&format!("{}={v} finished", param.name()));
        let text = format_series(&result);
        write_file(&dir.join(&name), &text)?;
        manifest.outputs.push(FileDigest::of_bytes(&name, text.as_bytes()));
    }
    manifest.write(&dir).map_err(io_err(&dir))?;
    Ok(())
}

/// Per-cluster table, unclustered nodes and averages for one network.
pub fn cluster_report(net: &DynamicNetwork, ids: &[u64], partition: &Partition) -> String {
    let graph = net.undirected_projection();
    let mut out = String::from("cluster,size,m,opinion,spread,connectivity,members\n");
    for (k, c) in partition.clusters().iter().enumerate() {
        let members: Vec<String> = c.members().iter().map(|&i| ids[i].to_string()).collect();
        let _ = writeln!(
            out,
            "{k},{},{},{},{},{},{}",
            c.len(),
            cluster_quality(&graph, c.members()),
            cluster_opinion(net, c),
            opinion_spread(net, c),
            inner_connectivity(net, c),
            members.join(" ")
        );
    }
    let un: Vec<String> = partition.unclustered_nodes().iter().map(|&i| ids[i].to_string()).collect();
    let _ = writeln!(out, "\nunclustered\n{}", un.join(" "));
    let row = metrics_row(net, partition, 0);
    out.push_str("\navg_cluster_opinion,avg_opinion_spread,avg_inner_connectivity,avg_cluster_size,cluster_count\n");
    match row.averages {
        Some(a) => {
            let _ = writeln!(out, "{},{},{},{},{}", a.opinion, a.spread, a.connectivity, a.size, row.cluster_count);
        }
        None => {
            let _ = writeln!(out, ",,,,0");
        }
    }
    out
}

fn cmd_cluster(wave: &Path) -> Result<(), CliError> {
    let wave = load_wave(wave)?;
    let (net, ids) = wave_to_network(&wave, Bounds::default());
    let partition = best_partition(&net.undirected_projection());
    print!("{}", cluster_report(&net, &ids, &partition));
    Ok(())
}

/// Parses `label=step,...`.
pub fn parse_map(spec: &str) -> Result<BTreeMap<String, usize>, CliError> {
    spec.split(',')
        .map(|pair| {
            let (l, s) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("bad --map entry `{pair}`, expected label=step")))?;
            let step = s
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad step `{s}` in --map")))?;
            Ok((l.trim().to_string(), step))
        })
        .collect()
}

/// Months since year 0 for `YYYY.MM` labels.
pub fn label_months(label: &str) -> Option<i64> {
    let (y, m) = label.split_once('.')?;
    let (y, m): (i64, i64) = (y.parse().ok()?, m.parse().ok()?);
    (1..=12).contains(&m).then_some(y * 12 + m - 1)
}

/// Metric name, hypothesized direction and accessor, as the survey trends
/// were stated.
pub const TRENDS: [(&str, Direction, fn(&ClusterAverages) -> f64); 4] = [
    ("avg_cluster_opinion", Direction::Increasing, |a| a.opinion),
    ("avg_opinion_spread", Direction::Decreasing, |a| a.spread),
    ("avg_inner_connectivity", Direction::Increasing, |a| a.connectivity),
    ("avg_cluster_size", Direction::Decreasing, |a| a.size),
];

struct Observed {
    label: String,
    step: usize,
    averages: Option<ClusterAverages>,
    clusters: Vec<ClusterAverages>,
}

fn observe(net: &DynamicNetwork) -> (Option<ClusterAverages>, Vec<ClusterAverages>) {
    let p = best_partition(&net.undirected_projection());
    let per_cluster = p
        .clusters()
        .iter()
        .map(|c| ClusterAverages {
            opinion: cluster_opinion(net, c),
            spread: opinion_spread(net, c),
            connectivity: inner_connectivity(net, c),
            size: c.len() as f64,
        })
        .collect();
    (metrics_row(net, &p, 0).averages, per_cluster)
}

/// Trend tests on observed waves. Times are months since the earliest label
/// when every label reads as `YYYY.MM`, otherwise the mapped model steps.
pub fn observed_trends(
    times: &[f64],
    waves: &[(Option<ClusterAverages>, Vec<ClusterAverages>)],
    averaged: bool,
) -> Vec<(&'static str, Result<TrendTest, coevonet_core::Error>)> {
    TRENDS
        .iter()
        .map(|&(name, dir, f)| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = if averaged {
                times
                    .iter()
                    .zip(waves)
                    .filter_map(|(&t, (a, _))| a.as_ref().map(|a| (t, f(a))))
                    .unzip()
            } else {
                let groups: Vec<Vec<f64>> = waves.iter().map(|(_, cs)| cs.iter().map(f).collect()).collect();
                pooled_samples(times, &groups)
            };
            (name, trend_test(&xs, &ys, dir))
        })
        .collect()
}

fn cmd_validate(series: &Path, waves: &[PathBuf], map: &str, averaged: bool) -> Result<(), CliError> {
    let mapping = parse_map(map)?;
    let series = read_series(series)?;
    let mut observed = Vec::new();
    for path in waves {
        let wave = load_wave(path)?;
        let step = *mapping.get(&wave.label).ok_or_else(|| {
            CliError::Data(format!("{}: wave label `{}` has no --map entry", path.display(), wave.label))
        })?;
        let (net, _) = wave_to_network(&wave, Bounds::default());
        let (averages, clusters) = observe(&net);
        observed.push(Observed {
            label: wave.label,
            step,
            averages,
            clusters,
        });
    }
    observed.sort_by(|a, b| a.step.cmp(&b.step).then_with(|| a.label.cmp(&b.label)));

    let mut out = String::from("label,step,metric,observed,model,percent_error\n");
    let mut errors: Vec<Vec<f64>> = vec![Vec::new(); TRENDS.len()];
    for o in &observed {
        let model = series
            .mean_at(o.step)
            .ok_or_else(|| CliError::Data(format!("series has no mean row at step {}", o.step)))?;
        for (k, &(name, _, f)) in TRENDS.iter().enumerate() {
            let obs = o.averages.as_ref().map(f);
            let sim = model.averages.as_ref().map(f);
            let pe = match (sim, obs) {
                (Some(s), Some(d)) => percent_error(s, d),
                _ => None,
            };
            if let Some(pe) = pe {
                errors[k].push(pe);
            }
            let show = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{name},{},{},{}", o.label, o.step, show(obs), show(sim), show(pe));
        }
    }

    out.push_str("\nmetric,mean_percent_error\n");
    for (k, &(name, _, _)) in TRENDS.iter().enumerate() {
        let mean = (!errors[k].is_empty()).then(|| errors[k].iter().sum::<f64>() / errors[k].len() as f64);
        let _ = writeln!(out, "{name},{}", mean.map(|m| m.to_string()).unwrap_or_default());
    }

    let months: Option<Vec<i64>> = observed.iter().map(|o| label_months(&o.label)).collect();
    let times: Vec<f64> = match months {
        Some(m) => {
            let first = m.iter().copied().min().unwrap_or(0);
            m.iter().map(|&x| (x - first) as f64).collect()
        }
        None => observed.iter().map(|o| o.step as f64).collect(),
    };
    let waves: Vec<_> = observed.iter().map(|o| (o.averages, o.clusters.clone())).collect();
    out.push_str("\nmetric,direction,slope,t_statistic,p_value,n\n");
    for (name, test) in observed_trends(&times, &waves, averaged) {
        match test {
            Ok(t) => {
                let _ = writeln!(out, "{name},{},{},{},{},{}", t.direction.as_str(), t.slope, t.t_statistic, t.p_value, t.n);
            }
            Err(e) => {
                let _ = writeln!(out, "{name},,,,,0 # {e}");
            }
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_synth(cli: &Cli, spec: Option<&Path>, label: &str) -> Result<(), CliError> {
    let spec = match spec {
        Some(p) => load_synth_config(p)?.to_spec()?,
        None => coevonet_core::SynthSpec::first_wave(),
    };
    let net = synth_initial(&spec, cli.seed.unwrap_or(0))?;
    let text = format_wave(&network_to_wave(&net, label));
    match &cli.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
