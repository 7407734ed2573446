//! Experiment configuration and the `run`, `oracle` and `compare` commands.
//!
//! Configs are TOML files (`key = value` lines under `[section]` headers);
//! unknown keys are rejected. Every command is deterministic: identical
//! configs produce byte-identical CSV files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::decoder::{decode, format_path, is_valid_cycle, DecodeMode};
use crate::error::{Error, Result};
use crate::graph::{hexagon_graph, random_graph, square_graph, TimedGraph};
use crate::loss::{sample_loss, total_loss, CostMode, LossConfig, TabooMode, TabooSign};
use crate::optimizer::{minimize_with, random_init, MinimizeOptions, TrialRecord};
use crate::oracle::{path_length, shortest_cycle};
use crate::par;
use crate::vqe::{vqe_decode, VqeModel, VqeProblem};
use crate::vqkan::{forward, num_parameters, LayerSnapshots, VqkanParams};

// ---------------------------------------------------------------------------
// raw file schema

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    graph: RawGraph,
    #[serde(default)]
    model: RawModel,
    #[serde(default)]
    loss: RawLoss,
    #[serde(default)]
    optimizer: RawOptimizer,
    #[serde(default)]
    vqe: RawVqe,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    kind: String,
    t: Option<Vec<f64>>,
    seed: Option<u64>,
    sites: Option<usize>,
    steps: Option<usize>,
    path: Option<PathBuf>,
    samples: Option<Vec<usize>>,
    per_leg: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    layers: Option<usize>,
    start: Option<usize>,
    decode: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLoss {
    cost: Option<CostMode>,
    taboo: Option<TabooMode>,
    taboo_sign: Option<TabooSign>,
    lambda: Option<f64>,
    weights: Option<RawWeights>,
    joint: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawWeights {
    Named(String),
    Explicit(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptimizer {
    budget: Option<usize>,
    seeds: Option<Vec<u64>>,
    init_scale: Option<f64>,
    step: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVqe {
    layers: Option<usize>,
    budget: Option<usize>,
    seed: Option<u64>,
    init_scale: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// resolved config

/// One optimisation target: a graph with the input fed to the ansatz.
#[derive(Debug, Clone)]
pub struct Sample {
    pub graph: TimedGraph,
    pub input: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct VqeSettings {
    pub layers: usize,
    pub budget: usize,
    pub seed: u64,
    pub init_scale: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub samples: Vec<Sample>,
    pub num_sites: usize,
    pub layers: usize,
    pub start: usize,
    pub decode_modes: Vec<DecodeMode>,
    pub loss: LossConfig,
    /// One parameter vector for all samples, or one optimisation per sample.
    pub joint: bool,
    pub budget: usize,
    pub seeds: Vec<u64>,
    pub init_scale: f64,
    pub step: f64,
    pub vqe: VqeSettings,
    pub output_dir: PathBuf,
}

/// Ansatz input for a sample: `0.5` on the start site (fully occupied) and
/// `0` elsewhere (`⟨Z⟩ = 0`).
pub fn start_input(num_sites: usize, start: usize) -> Vec<f64> {
    (0..num_sites).map(|j| if j == start { 0.5 } else { 0.0 }).collect()
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(field, format!("{v} is not finite")))
    }
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base)
    }

    /// Parses a config; relative graph file paths resolve against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            Error::config("config", e.message().to_string())
        })?;
        Self::resolve(raw, base)
    }

    fn resolve(raw: RawConfig, base: &Path) -> Result<Self> {
        let g = &raw.graph;
        let forbid = |present: bool, key: &str| -> Result<()> {
            if present {
                Err(Error::config(
                    format!("graph.{key}"),
                    format!("not used by graph kind {:?}", g.kind),
                ))
            } else {
                Ok(())
            }
        };
        let graphs: Vec<TimedGraph> = match g.kind.as_str() {
            "square" => {
                forbid(g.seed.is_some(), "seed")?;
                forbid(g.sites.is_some(), "sites")?;
                forbid(g.steps.is_some(), "steps")?;
                forbid(g.path.is_some(), "path")?;
                forbid(g.samples.is_some(), "samples")?;
                forbid(g.per_leg.is_some(), "per_leg")?;
                let ts = g.t.clone().unwrap_or_else(|| vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5]);
                if ts.is_empty() {
                    return Err(Error::config("graph.t", "needs at least one time value"));
                }
                ts.iter()
                    .map(|&t| finite("graph.t", t).map(square_graph))
                    .collect::<Result<_>>()?
            }
            "hexagon6" => {
                for (present, key) in [
                    (g.t.is_some(), "t"),
                    (g.seed.is_some(), "seed"),
                    (g.sites.is_some(), "sites"),
                    (g.steps.is_some(), "steps"),
                    (g.path.is_some(), "path"),
                    (g.samples.is_some(), "samples"),
                    (g.per_leg.is_some(), "per_leg"),
                ] {
                    forbid(present, key)?;
                }
                vec![hexagon_graph()]
            }
            "random" | "file" => {
                forbid(g.t.is_some(), "t")?;
                let full = if g.kind == "random" {
                    forbid(g.path.is_some(), "path")?;
                    let sites = g.sites.ok_or_else(|| Error::config("graph.sites", "required for random graphs"))?;
                    let steps = g.steps.unwrap_or(1);
                    if steps == 0 {
                        return Err(Error::config("graph.steps", "must be at least 1"));
                    }
                    random_graph(g.seed.unwrap_or(0), sites, steps)
                        .map_err(|e| Error::config("graph.sites", e.to_string()))?
                } else {
                    forbid(g.seed.is_some(), "seed")?;
                    forbid(g.sites.is_some(), "sites")?;
                    forbid(g.steps.is_some(), "steps")?;
                    let p = g.path.as_ref().ok_or_else(|| Error::config("graph.path", "required for file graphs"))?;
                    TimedGraph::load(base.join(p))?
                };
                if g.per_leg.unwrap_or(false) {
                    forbid(g.samples.is_some(), "samples")?;
                    vec![full]
                } else {
                    let steps = g.samples.clone().unwrap_or_else(|| (0..full.num_steps()).collect());
                    if steps.is_empty() {
                        return Err(Error::config("graph.samples", "needs at least one step"));
                    }
                    steps
                        .iter()
                        .map(|&s| full.slice(s).map_err(|e| Error::config("graph.samples", e.to_string())))
                        .collect::<Result<_>>()?
                }
            }
            other => {
                return Err(Error::config(
                    "graph.kind",
                    format!("unknown kind {other:?}; expected square, random, hexagon6 or file"),
                ))
            }
        };

        let num_sites = graphs[0].num_sites();
        if num_sites < 3 {
            return Err(Error::config("graph", "need at least 3 sites"));
        }
        let start = raw.model.start.unwrap_or(0);
        if start >= num_sites {
            return Err(Error::config("model.start", format!("site {start} does not exist in a {num_sites}-site graph")));
        }
        let layers = raw.model.layers.unwrap_or(num_sites);
        if layers < num_sites {
            return Err(Error::config(
                "model.layers",
                format!("{layers} layers cannot hold a {num_sites}-leg tour; need >= {num_sites}"),
            ));
        }
        let decode_modes = match raw.model.decode.as_deref().unwrap_or("sum") {
            "sum" => vec![DecodeMode::Sum],
            "product" => vec![DecodeMode::Product],
            "both" => vec![DecodeMode::Sum, DecodeMode::Product],
            other => {
                return Err(Error::config(
                    "model.decode",
                    format!("unknown mode {other:?}; expected sum, product or both"),
                ))
            }
        };

        let m = graphs.len();
        let sample_weights = match &raw.loss.weights {
            None => vec![1.0 / m as f64; m],
            Some(RawWeights::Named(s)) if s == "uniform" => vec![1.0 / m as f64; m],
            Some(RawWeights::Named(s)) => {
                return Err(Error::config("loss.weights", format!("expected \"uniform\" or a list, got {s:?}")))
            }
            Some(RawWeights::Explicit(w)) if w.len() != m => {
                return Err(Error::config("loss.weights", format!("{} weights for {m} samples", w.len())))
            }
            Some(RawWeights::Explicit(w)) => w.clone(),
        };
        let loss = LossConfig {
            cost_mode: raw.loss.cost.unwrap_or_default(),
            taboo_mode: raw.loss.taboo.unwrap_or_default(),
            taboo_sign: raw.loss.taboo_sign.unwrap_or_default(),
            taboo_weight: raw.loss.lambda.unwrap_or(1.0),
            sample_weights,
        };
        loss.validate().map_err(|e| Error::config("loss", e.to_string()))?;

        let budget = raw
            .optimizer
            .budget
            .unwrap_or(if num_sites <= 4 { 500 } else { 2000 });
        if budget < 1 {
            return Err(Error::config("optimizer.budget", "must be at least 1"));
        }
        let seeds = raw.optimizer.seeds.unwrap_or_else(|| vec![0]);
        if seeds.is_empty() {
            return Err(Error::config("optimizer.seeds", "needs at least one seed"));
        }
        let init_scale = raw.optimizer.init_scale.unwrap_or(0.1);
        if !(init_scale > 0.0 && init_scale.is_finite()) {
            return Err(Error::config("optimizer.init_scale", "must be positive"));
        }
        let step = raw.optimizer.step.unwrap_or(0.5);
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::config("optimizer.step", "must be positive"));
        }

        let vqe = VqeSettings {
            layers: raw.vqe.layers.unwrap_or(1),
            budget: raw.vqe.budget.unwrap_or(100),
            seed: raw.vqe.seed.unwrap_or(0),
            init_scale: raw.vqe.init_scale.unwrap_or(0.1),
        };
        if vqe.layers < 1 {
            return Err(Error::config("vqe.layers", "must be at least 1"));
        }
        if vqe.budget < 1 {
            return Err(Error::config("vqe.budget", "must be at least 1"));
        }
        if !(vqe.init_scale > 0.0 && vqe.init_scale.is_finite()) {
            return Err(Error::config("vqe.init_scale", "must be positive"));
        }

        let input = start_input(num_sites, start);
        Ok(Self {
            samples: graphs
                .into_iter()
                .map(|graph| Sample {
                    graph,
                    input: input.clone(),
                })
                .collect(),
            num_sites,
            layers,
            start,
            decode_modes,
            loss,
            joint: raw.loss.joint.unwrap_or(true),
            budget,
            seeds,
            init_scale,
            step,
            vqe,
            output_dir: raw.output.dir.map_or_else(|| base.join("out"), |d| base.join(d)),
        })
    }

    pub fn num_parameters(&self) -> usize {
        num_parameters(self.num_sites, self.layers)
    }

    fn optimizer_options(&self, seed: u64) -> MinimizeOptions {
        MinimizeOptions {
            budget: self.budget,
            seed,
            initial_step: self.step,
            ..Default::default()
        }
    }

    fn params(&self, flat: &[f64]) -> VqkanParams {
        VqkanParams::from_flat(self.num_sites, self.layers, flat.to_vec())
            .expect("parameter count fixed by the config")
    }

    fn snapshots(&self, params: &VqkanParams, sample: &Sample) -> LayerSnapshots {
        forward(params, &sample.input).expect("input length fixed by the config")
    }

    /// Joint loss of all samples for a flat parameter vector.
    pub fn joint_loss(&self, flat: &[f64]) -> f64 {
        let params = self.params(flat);
        let snaps: Vec<LayerSnapshots> = self.samples.iter().map(|s| self.snapshots(&params, s)).collect();
        let graphs: Vec<TimedGraph> = self.samples.iter().map(|s| s.graph.clone()).collect();
        total_loss(&snaps, &graphs, &self.loss).expect("shapes fixed by the config")
    }

    fn single_loss(&self, flat: &[f64], sample: &Sample) -> f64 {
        let snaps = self.snapshots(&self.params(flat), sample);
        sample_loss(&snaps, &sample.graph, &self.loss).expect("shapes fixed by the config")
    }
}

// ---------------------------------------------------------------------------
// outputs

/// Decimal rendering with 15 significant digits and trailing zeros trimmed;
/// scientific notation outside `[1e-5, 1e15)`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.14e}");
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub seed: u64,
    pub sample: usize,
    pub mode: DecodeMode,
    pub path: Vec<usize>,
    pub derived_length: f64,
    pub oracle_length: f64,
}

impl ResultRow {
    pub fn gap(&self) -> f64 {
        self.derived_length - self.oracle_length
    }

    /// Within rounding of the exact optimum.
    pub fn is_optimal(&self) -> bool {
        self.gap().abs() <= 1e-9
    }
}

/// One optimisation history; `sample` is set in per-sample mode.
#[derive(Debug, Clone)]
pub struct TrialLog {
    pub seed: u64,
    pub sample: Option<usize>,
    pub trials: Vec<TrialRecord>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub results: Vec<ResultRow>,
    pub logs: Vec<TrialLog>,
}

pub const TRIALS_HEADER: &str = "seed,trial,loss,best_so_far";
pub const RESULTS_HEADER: &str = "seed,sample,decode_mode,path,derived_length,oracle_length,gap";
pub const ORACLE_HEADER: &str = "sample,path,length";
pub const COMPARE_HEADER: &str = "sample,sum_path,sum_valid,product_path,product_valid,vqe_path,vqe_valid";

fn trials_csv<'a>(logs: impl Iterator<Item = &'a TrialLog>) -> String {
    let mut out = format!("{TRIALS_HEADER}\n");
    for log in logs {
        for r in &log.trials {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                log.seed,
                r.trial_index,
                format_number(r.loss),
                format_number(r.best_so_far)
            );
        }
    }
    out
}

fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = format!("{RESULTS_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.seed,
            r.sample,
            r.mode.as_str(),
            format_path(&r.path),
            format_number(r.derived_length),
            format_number(r.oracle_length),
            format_number(r.gap())
        );
    }
    out
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// commands

struct SeedRun {
    logs: Vec<TrialLog>,
    // best parameters per sample (the same vector repeated in joint mode)
    params: Vec<Vec<f64>>,
}

fn optimize_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedRun> {
    let x0 = random_init(cfg.num_parameters(), seed, cfg.init_scale)?;
    let opts = cfg.optimizer_options(seed);
    if cfg.joint {
        let m = minimize_with(|p| cfg.joint_loss(p), &x0, &opts)?;
        Ok(SeedRun {
            logs: vec![TrialLog {
                seed,
                sample: None,
                trials: m.history,
            }],
            params: vec![m.params; cfg.samples.len()],
        })
    } else {
        let mut logs = Vec::new();
        let mut params = Vec::new();
        for (i, sample) in cfg.samples.iter().enumerate() {
            let m = minimize_with(|p| cfg.single_loss(p, sample), &x0, &opts)?;
            logs.push(TrialLog {
                seed,
                sample: Some(i),
                trials: m.history,
            });
            params.push(m.params);
        }
        Ok(SeedRun { logs, params })
    }
}

/// Optimises every seed, decodes every sample and scores it against the
/// exact oracle. Nothing is written to disk.
pub fn execute_run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let oracle: Vec<f64> = cfg
        .samples
        .iter()
        .map(|s| shortest_cycle(&s.graph, cfg.start).map(|r| r.best_length))
        .collect::<Result<_>>()?;
    let runs = par::map(&cfg.seeds, |&seed| optimize_seed(cfg, seed));

    let mut results = Vec::new();
    let mut logs = Vec::new();
    for (&seed, run) in cfg.seeds.iter().zip(runs) {
        let run = run?;
        for (i, (sample, flat)) in cfg.samples.iter().zip(&run.params).enumerate() {
            let snaps = cfg.snapshots(&cfg.params(flat), sample);
            for &mode in &cfg.decode_modes {
                let decoded = decode(&snaps, cfg.num_sites, cfg.start, mode)?;
                results.push(ResultRow {
                    seed,
                    sample: i,
                    mode,
                    derived_length: path_length(&sample.graph, &decoded.path)?,
                    oracle_length: oracle[i],
                    path: decoded.path,
                });
            }
        }
        logs.extend(run.logs);
    }
    Ok(RunOutcome { results, logs })
}

/// `run` command: writes `results.csv` plus `trials.csv` (joint mode) or
/// one `trials_sample<m>.csv` per sample (per-sample mode).
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let outcome = execute_run(cfg)?;
    let dir = &cfg.output_dir;
    if cfg.joint {
        write_file(dir, "trials.csv", &trials_csv(outcome.logs.iter()))?;
    } else {
        for i in 0..cfg.samples.len() {
            let logs = outcome.logs.iter().filter(|l| l.sample == Some(i));
            write_file(dir, &format!("trials_sample{i}.csv"), &trials_csv(logs))?;
        }
    }
    write_file(dir, "results.csv", &results_csv(&outcome.results))?;
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub sample: usize,
    pub path: Vec<usize>,
    pub length: f64,
}

/// `oracle` command: exact shortest tour per sample into `oracle.csv`.
pub fn oracle(cfg: &ExperimentConfig) -> Result<Vec<OracleRow>> {
    let rows: Vec<OracleRow> = cfg
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            shortest_cycle(&s.graph, cfg.start).map(|r| OracleRow {
                sample: i,
                path: r.best_path,
                length: r.best_length,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = format!("{ORACLE_HEADER}\n");
    for r in &rows {
        let _ = writeln!(out, "{},{},{}", r.sample, format_path(&r.path), format_number(r.length));
    }
    write_file(&cfg.output_dir, "oracle.csv", &out)?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodedPath {
    pub path: Vec<usize>,
    pub valid: bool,
    /// Tour length when the path is a valid cycle.
    pub length: Option<f64>,
}

impl DecodedPath {
    fn new(path: Vec<usize>, graph: &TimedGraph, start: usize) -> Self {
        let valid = is_valid_cycle(&path, graph.num_sites(), start);
        let length = if valid { path_length(graph, &path).ok() } else { None };
        Self { path, valid, length }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub sample: usize,
    pub sum: DecodedPath,
    pub product: DecodedPath,
    pub vqe: DecodedPath,
}

/// `compare` command: VQKAN (sum and product decoding, first seed, joint
/// optimisation) against the one-hot VQE baseline, into `compare.csv`.
pub fn compare(cfg: &ExperimentConfig) -> Result<Vec<CompareRow>> {
    if cfg.num_sites != 4 {
        return Err(Error::Size(format!(
            "compare runs the 16-qubit VQE baseline and needs 4 sites, got {}",
            cfg.num_sites
        )));
    }
    let seed = cfg.seeds[0];
    let x0 = random_init(cfg.num_parameters(), seed, cfg.init_scale)?;
    let best = minimize_with(|p| cfg.joint_loss(p), &x0, &cfg.optimizer_options(seed))?;
    let params = cfg.params(&best.params);

    let vqe_paths = cfg
        .samples
        .iter()
        .map(|s| {
            let model = VqeModel::with_default_penalties(&s.graph, cfg.vqe.layers)?;
            let problem = VqeProblem::new(model.clone(), &s.graph)?;
            let v0 = random_init(model.num_parameters(), cfg.vqe.seed, cfg.vqe.init_scale)?;
            let opts = MinimizeOptions {
                budget: cfg.vqe.budget,
                seed: cfg.vqe.seed,
                initial_step: cfg.step,
                ..Default::default()
            };
            let m = minimize_with(
                |p| problem.energy(p).expect("parameter count fixed by the model"),
                &v0,
                &opts,
            )?;
            let state = model.prepare_state(&m.params)?;
            vqe_decode(&model, &state, cfg.start)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (i, (sample, vqe)) in cfg.samples.iter().zip(vqe_paths).enumerate() {
        let snaps = cfg.snapshots(&params, sample);
        let sum = decode(&snaps, cfg.num_sites, cfg.start, DecodeMode::Sum)?;
        let product = decode(&snaps, cfg.num_sites, cfg.start, DecodeMode::Product)?;
        rows.push(CompareRow {
            sample: i,
            sum: DecodedPath::new(sum.path, &sample.graph, cfg.start),
            product: DecodedPath::new(product.path, &sample.graph, cfg.start),
            vqe: DecodedPath::new(vqe.path, &sample.graph, cfg.start),
        });
    }

    let mut out = format!("{COMPARE_HEADER}\n");
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.sample,
            format_path(&r.sum.path),
            r.sum.valid,
            format_path(&r.product.path),
            r.product.valid,
            format_path(&r.vqe.path),
            r.vqe.valid
        );
    }
    write_file(&cfg.output_dir, "compare.csv", &out)?;
    Ok(rows)
}
