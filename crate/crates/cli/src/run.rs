//! Command dispatch: merge explicit flags with an optional config file,
//! execute the experiment, and write the output files plus a run manifest.
//!
//! Precedence for every parameter is flag > config file > default; the
//! manifest records the fully resolved values, so re-running it needs no
//! defaults at all.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use meshsna_core::attack::{
    run_attack_experiment, AttackConfig, RankingMode, DEFAULT_RANDOM_TRIALS,
};
use meshsna_core::centrality::{self, CentralityMetric};
use meshsna_core::generate::random_geometric_graph;
use meshsna_core::stdma::{
    simulate, Flow, SchedulingMode, StdmaConfig, StdmaResult, DEFAULT_FRAME_SIZE,
    DEFAULT_TICKET_SCALE,
};
use serde::de::DeserializeOwned;

use crate::csvout::{write_csv, Cell};
use crate::manifest::{
    AttackRecord, CentralityRecord, GenTopoRecord, RunManifest, StdmaRecord,
};
use crate::topo;
use crate::{Cli, Command};

/// Argument-level problem detected after clap parsing (missing required
/// parameter, malformed config file, contradictory command names). Mapped
/// to the same exit code as clap's own errors.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn progress(quiet: bool, msg: std::fmt::Arguments<'_>) {
    if !quiet {
        eprintln!("{msg}");
    }
}

macro_rules! note {
    ($quiet:expr, $($arg:tt)*) => { progress($quiet, format_args!($($arg)*)) };
}

/// Config file content: either a full run manifest or a bare parameter
/// record for the subcommand given on the command line.
struct LoadedConfig {
    command: Option<String>,
    record: serde_json::Value,
    seed: Option<u64>,
    output_dir: Option<String>,
}

fn load_config(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    if value.get("command").is_some() {
        let m: RunManifest = serde_json::from_value(value)
            .map_err(|e| usage(format!("config {} is not a valid manifest: {e}", path.display())))?;
        Ok(LoadedConfig {
            command: Some(m.command),
            record: m.config,
            seed: Some(m.seed),
            output_dir: Some(m.output_dir),
        })
    } else {
        Ok(LoadedConfig {
            command: None,
            record: value,
            seed: None,
            output_dir: None,
        })
    }
}

fn record_from<T: DeserializeOwned + Default>(loaded: &Option<LoadedConfig>) -> Result<T> {
    match loaded {
        Some(l) => serde_json::from_value(l.record.clone())
            .map_err(|e| usage(format!("config parameters do not fit the command: {e}"))),
        None => Ok(T::default()),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Centrality { .. } => "centrality",
        Command::Attack { .. } => "attack",
        Command::Stdma { .. } => "stdma",
        Command::GenTopo { .. } => "gen-topo",
    }
}

/// Resolve the command, execute it, write outputs and the manifest.
pub fn dispatch(cli: Cli) -> Result<()> {
    let Cli {
        out,
        config,
        quiet,
        command,
    } = cli;
    let loaded = config.as_deref().map(load_config).transpose()?;

    let cmd = match (command, &loaded) {
        (Some(c), Some(l)) => {
            if let Some(cfg_cmd) = &l.command {
                let given = command_name(&c);
                if cfg_cmd != given {
                    return Err(usage(format!(
                        "--config describes a {cfg_cmd:?} run but the command line says {given:?}"
                    )));
                }
            }
            Some(c)
        }
        (c, _) => c,
    };
    let cmd_name = match (&cmd, &loaded) {
        (Some(c), _) => command_name(c).to_string(),
        (None, Some(l)) => l
            .command
            .clone()
            .ok_or_else(|| usage("--config holds bare parameters; a subcommand is required"))?,
        (None, None) => return Err(usage("no command given; try --help")),
    };

    let out_dir: PathBuf = out
        .or_else(|| loaded.as_ref().and_then(|l| l.output_dir.clone().map(PathBuf::from)))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let manifest_seed = loaded.as_ref().and_then(|l| l.seed);

    let ctx = RunContext {
        out_dir,
        quiet,
        manifest_seed,
    };
    match cmd_name.as_str() {
        "centrality" => run_centrality(cmd, record_from(&loaded)?, &ctx),
        "attack" => run_attack(cmd, record_from(&loaded)?, &ctx),
        "stdma" => run_stdma(cmd, record_from(&loaded)?, &ctx),
        "gen-topo" => run_gen_topo(cmd, record_from(&loaded)?, &ctx),
        other => Err(usage(format!("unknown command {other:?} in config"))),
    }
}

struct RunContext {
    out_dir: PathBuf,
    quiet: bool,
    manifest_seed: Option<u64>,
}

impl RunContext {
    fn finish(&self, command: &str, config: impl serde::Serialize, seed: u64) -> Result<()> {
        RunManifest {
            command: command.into(),
            config: serde_json::to_value(config).context("serializing run parameters")?,
            seed,
            output_dir: self.out_dir.display().to_string(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
        .write(&self.out_dir)
    }
}

fn parse_metrics(spec: &str) -> Result<BTreeSet<CentralityMetric>> {
    if spec.trim() == "all" {
        return Ok(CentralityMetric::ALL.into_iter().collect());
    }
    spec.split(',')
        .map(|s| CentralityMetric::from_str(s.trim()).map_err(|e| usage(e.to_string())))
        .collect()
}

fn canonical_metrics(metrics: &BTreeSet<CentralityMetric>) -> String {
    metrics
        .iter()
        .map(|m| m.name())
        .collect::<Vec<_>>()
        .join(",")
}

fn load_graph(topo: &str, quiet: bool) -> Result<meshsna_core::Graph> {
    let g = topo::load_topology(Path::new(topo))?;
    note!(quiet, "loaded {topo}: {} nodes, {} edges", g.node_count(), g.edge_count());
    Ok(g)
}

fn run_centrality(cmd: Option<Command>, rec: CentralityRecord, ctx: &RunContext) -> Result<()> {
    let (flag_topo, flag_metrics) = match cmd {
        Some(Command::Centrality { topo, metrics }) => (topo, metrics),
        None => (None, None),
        _ => unreachable!("dispatch matched the command name"),
    };
    let topo = flag_topo
        .map(|p| p.display().to_string())
        .or(rec.topo)
        .ok_or_else(|| usage("--topo is required"))?;
    let spec = flag_metrics.or(rec.metrics).unwrap_or_else(|| "all".into());
    let metrics = parse_metrics(&spec)?;
    let g = load_graph(&topo, ctx.quiet)?;

    let mut rows = Vec::new();
    for &metric in &metrics {
        let scores = centrality::compute(&g, metric)?;
        for (node, value) in scores.iter() {
            rows.push(vec![
                Cell::text(g.label_or_id(node)),
                Cell::text(metric.name()),
                Cell::Real(value),
            ]);
        }
    }
    let path = ctx.out_dir.join("centrality.csv");
    write_csv(&path, &["node_label", "metric", "value"], rows)
        .with_context(|| format!("writing {}", path.display()))?;
    note!(ctx.quiet, "wrote {}", path.display());

    ctx.finish(
        "centrality",
        CentralityRecord {
            topo: Some(topo),
            metrics: Some(canonical_metrics(&metrics)),
        },
        0,
    )
}

fn run_attack(cmd: Option<Command>, rec: AttackRecord, ctx: &RunContext) -> Result<()> {
    let (flag_topo, flag_metrics, flag_removals, flag_trials, flag_seed, flag_recompute) =
        match cmd {
            Some(Command::Attack {
                topo,
                metrics,
                removals,
                trials,
                seed,
                recompute,
            }) => (topo, metrics, removals, trials, seed, recompute),
            None => (None, None, None, None, None, false),
            _ => unreachable!("dispatch matched the command name"),
        };
    let topo = flag_topo
        .map(|p| p.display().to_string())
        .or(rec.topo)
        .ok_or_else(|| usage("--topo is required"))?;
    let spec = flag_metrics
        .or(rec.metrics)
        .ok_or_else(|| usage("--metrics is required"))?;
    let metrics = parse_metrics(&spec)?;
    let removals = flag_removals
        .or(rec.removals)
        .ok_or_else(|| usage("--removals is required"))?;
    let trials = flag_trials.or(rec.trials).unwrap_or(DEFAULT_RANDOM_TRIALS);
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let seed = flag_seed
        .or(rec.seed)
        .or(ctx.manifest_seed)
        .ok_or_else(|| usage("--seed is required"))?;
    let recompute = flag_recompute || rec.recompute.unwrap_or(false);

    let g = load_graph(&topo, ctx.quiet)?;
    let mut cfg = AttackConfig::new(g, metrics.clone(), removals, seed);
    cfg.random_trials = trials;
    cfg.ranking_mode = if recompute {
        RankingMode::Recompute
    } else {
        RankingMode::Static
    };
    let result = run_attack_experiment(&cfg)?;
    note!(
        ctx.quiet,
        "attack: {} metric curves + random baseline over {} removals",
        result.per_metric.len(),
        removals
    );

    let mut rows = Vec::new();
    for (metric, curve) in &result.per_metric {
        for p in curve {
            rows.push(vec![
                Cell::text(metric.name()),
                Cell::Int(p.removed as i64),
                Cell::opt_real(p.avg_hops),
                Cell::Int(p.connected_pairs as i64),
                Cell::Int(p.disconnected_pairs as i64),
                Cell::Empty,
            ]);
        }
    }
    for p in &result.random_baseline {
        rows.push(vec![
            Cell::text("random"),
            Cell::Int(p.removed as i64),
            Cell::opt_real(p.avg_hops),
            Cell::Real(p.mean_connected_pairs),
            Cell::Real(p.mean_disconnected_pairs),
            if p.avg_hops.is_some() {
                Cell::Real(p.stddev)
            } else {
                Cell::Empty
            },
        ]);
    }
    let path = ctx.out_dir.join("attack.csv");
    write_csv(
        &path,
        &["metric", "removed", "avg_hops", "connected_pairs", "disconnected_pairs", "stddev"],
        rows,
    )
    .with_context(|| format!("writing {}", path.display()))?;
    note!(ctx.quiet, "wrote {}", path.display());

    ctx.finish(
        "attack",
        AttackRecord {
            topo: Some(topo),
            metrics: Some(canonical_metrics(&metrics)),
            removals: Some(removals),
            trials: Some(trials),
            recompute: Some(recompute),
            seed: None,
        },
        seed,
    )
}

/// Rates swept by `stdma --sweep`, in bits per second.
const SWEEP_RATES: std::ops::RangeInclusive<u32> = 650..=1350;
/// Sweep step between rates, in bits per second.
const SWEEP_STEP: usize = 100;

fn run_stdma(cmd: Option<Command>, rec: StdmaRecord, ctx: &RunContext) -> Result<()> {
    let (flag_topo, flag_mode, flag_rate, flag_frame, flag_scale, flag_duration, flag_seed, flag_flows, flag_sweep) =
        match cmd {
            Some(Command::Stdma {
                topo,
                mode,
                rate,
                frame,
                scale,
                duration,
                seed,
                flows,
                sweep,
            }) => (topo, mode, rate, frame, scale, duration, seed, flows, sweep),
            None => (None, None, None, None, None, None, None, None, false),
            _ => unreachable!("dispatch matched the command name"),
        };
    let topo = flag_topo
        .map(|p| p.display().to_string())
        .or(rec.topo)
        .ok_or_else(|| usage("--topo is required"))?;
    let sweep = flag_sweep || rec.sweep.unwrap_or(false);
    let rate = flag_rate.or(rec.rate);
    let frame = flag_frame.or(rec.frame).unwrap_or(DEFAULT_FRAME_SIZE);
    let scale = flag_scale.or(rec.scale).unwrap_or(DEFAULT_TICKET_SCALE);
    let duration = flag_duration
        .or(rec.duration)
        .ok_or_else(|| usage("--duration is required"))?;
    let seed = flag_seed
        .or(rec.seed)
        .or(ctx.manifest_seed)
        .ok_or_else(|| usage("--seed is required"))?;
    let flows_spec = flag_flows.or(rec.flows).unwrap_or_else(|| "all-pairs".into());

    let g = load_graph(&topo, ctx.quiet)?;
    // for file-based flows in a sweep the per-line rates are irrelevant:
    // every job rewrites them with its swept rate
    let file_default_rate = if sweep { rate.or(Some(1.0)) } else { rate };
    let base_flows: Option<Vec<Flow>> = if flows_spec == "all-pairs" {
        None
    } else {
        let text = std::fs::read_to_string(&flows_spec)
            .with_context(|| format!("reading flow file {flows_spec}"))?;
        Some(topo::parse_flows(&text, &g, file_default_rate).map_err(|e| usage(format!("{e:#}")))?)
    };
    let flows_at = |r: f64| -> Vec<Flow> {
        match &base_flows {
            None => topo::all_pairs_flows(&g, r),
            Some(fs) => fs.iter().map(|f| Flow { rate_bps: r, ..*f }).collect(),
        }
    };

    let header = ["mode", "rate", "throughput_bps", "mean_delay_s", "p95_delay_s", "delivered", "generated"];
    let rows: Vec<Vec<Cell>>;
    let mode_record: Option<String>;
    if sweep {
        mode_record = None;
        // independent simulations: fan out, one thread per (mode, rate)
        let jobs: Vec<(SchedulingMode, f64)> = [
            SchedulingMode::SociallyAware,
            SchedulingMode::RandomBaseline,
        ]
        .into_iter()
        .flat_map(|m| SWEEP_RATES.clone().step_by(SWEEP_STEP).map(move |r| (m, f64::from(r))))
        .collect();
        rows = std::thread::scope(|scope| {
            let handles: Vec<_> = jobs
                .iter()
                .map(|&(mode, r)| {
                    let g = &g;
                    let flows = flows_at(r);
                    scope.spawn(move || -> Result<Vec<Cell>> {
                        let mut cfg = StdmaConfig::new(g.clone(), mode, flows, duration, seed);
                        cfg.frame_size = frame;
                        cfg.ticket_scale = scale;
                        let result = simulate(&cfg)?;
                        note!(
                            ctx.quiet,
                            "stdma {} @ {r} bit/s: {}/{} packets delivered",
                            mode.name(),
                            result.delivered,
                            result.generated
                        );
                        Ok(stdma_row(mode, Cell::Real(r), &result))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation thread panicked"))
                .collect::<Result<Vec<_>>>()
        })?;
    } else {
        let mode: SchedulingMode = flag_mode
            .or(rec.mode)
            .ok_or_else(|| usage("--mode is required"))?
            .parse()
            .map_err(|e: meshsna_core::Error| usage(e.to_string()))?;
        mode_record = Some(mode.name().into());
        let flows = match (&base_flows, rate) {
            (None, Some(r)) => flows_at(r),
            (None, None) => return Err(usage("--rate is required with all-pairs flows")),
            (Some(fs), _) => fs.clone(),
        };
        let mut cfg = StdmaConfig::new(g.clone(), mode, flows, duration, seed);
        cfg.frame_size = frame;
        cfg.ticket_scale = scale;
        let result = simulate(&cfg)?;
        note!(
            ctx.quiet,
            "stdma {}: {}/{} packets delivered",
            mode.name(),
            result.delivered,
            result.generated
        );
        rows = vec![stdma_row(mode, Cell::opt_real(rate), &result)];
    }

    let path = ctx.out_dir.join("stdma.csv");
    write_csv(&path, &header, rows).with_context(|| format!("writing {}", path.display()))?;
    note!(ctx.quiet, "wrote {}", path.display());

    ctx.finish(
        "stdma",
        StdmaRecord {
            topo: Some(topo),
            mode: mode_record,
            rate: if sweep { None } else { rate },
            frame: Some(frame),
            scale: Some(scale),
            duration: Some(duration),
            flows: Some(flows_spec),
            sweep: Some(sweep),
            seed: None,
        },
        seed,
    )
}

fn stdma_row(mode: SchedulingMode, rate: Cell, r: &StdmaResult) -> Vec<Cell> {
    vec![
        Cell::text(mode.name()),
        rate,
        Cell::Real(r.aggregate_throughput_bps),
        Cell::opt_real(r.mean_delay_s),
        Cell::opt_real(r.p95_delay_s),
        Cell::Int(r.delivered as i64),
        Cell::Int(r.generated as i64),
    ]
}

fn run_gen_topo(cmd: Option<Command>, rec: GenTopoRecord, ctx: &RunContext) -> Result<()> {
    let (flag_n, flag_degree, flag_seed) = match cmd {
        Some(Command::GenTopo { n, degree, seed }) => (n, degree, seed),
        None => (None, None, None),
        _ => unreachable!("dispatch matched the command name"),
    };
    let n = flag_n.or(rec.n).ok_or_else(|| usage("--n is required"))?;
    let degree = flag_degree
        .or(rec.degree)
        .ok_or_else(|| usage("--degree is required"))?;
    let seed = flag_seed
        .or(rec.seed)
        .or(ctx.manifest_seed)
        .ok_or_else(|| usage("--seed is required"))?;

    let g = random_geometric_graph(n, degree, seed)?;
    let path = ctx.out_dir.join("topology.txt");
    std::fs::write(&path, topo::edge_list_text(&g))
        .with_context(|| format!("writing {}", path.display()))?;
    note!(
        ctx.quiet,
        "generated {} nodes, {} edges -> {}",
        g.node_count(),
        g.edge_count(),
        path.display()
    );

    ctx.finish(
        "gen-topo",
        GenTopoRecord {
            n: Some(n),
            degree: Some(degree),
            seed: None,
        },
        seed,
    )
}
