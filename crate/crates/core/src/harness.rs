//! Seeded Monte-Carlo sweeps over sample sizes with exact risk measurement.
//!
//! Every trial is a pure function of the configuration and its cell seed
//! `mix(base_seed, m, trial)`, so sweeps may run cells in parallel and still
//! reproduce their CSV output byte for byte.
//!
//! The lower-bound distributions are run against Algorithm 1 itself, which
//! knows less than the idealized learner of the lower-bound argument, so
//! their measured risks show trends rather than bounds.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::concepts::{Concept, ConceptClass};
use crate::error::{Error, Result};
use crate::graph::{independence_number, DirectedGraph, VertexId};
use crate::hardness::{
    gen_bichromatic_instance, gen_shattered_instance, sample_sign_string, BichromaticLBInstance, ShatteredISInstance,
};
use crate::learner::{choose_k, fit_algorithm1, fit_amplified, fit_erm};
use crate::measure::{draw_sample, risk, Distribution};
use crate::params::{alpha1, alpha2_class, theoretical_sample_bound};

/// Search budget used when neither the configuration nor `CONDAVG_BUDGET` sets one.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `CONDAVG_BUDGET` if set and valid, else [`DEFAULT_BUDGET`].
pub fn default_budget() -> u64 {
    std::env::var("CONDAVG_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceSource {
    Edgeless {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Tournament {
        n: usize,
        seed: u64,
    },
    Star {
        leaves: usize,
        #[serde(default = "yes")]
        bidirected: bool,
    },
    Path {
        n: usize,
    },
    Random {
        n: usize,
        p: f64,
        seed: u64,
    },
    File {
        path: PathBuf,
    },
}

fn yes() -> bool {
    true
}

impl InstanceSource {
    fn build(&self) -> Result<DirectedGraph> {
        Ok(match self {
            InstanceSource::Edgeless { n } => DirectedGraph::edgeless(*n),
            InstanceSource::Complete { n } => DirectedGraph::complete(*n),
            InstanceSource::Tournament { n, seed } => DirectedGraph::tournament(*n, *seed),
            InstanceSource::Star { leaves, bidirected } => DirectedGraph::star(*leaves, *bidirected),
            InstanceSource::Path { n } => DirectedGraph::path(*n),
            InstanceSource::Random { n, p, seed } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::arg(format!("edge probability {p} outside [0, 1]")));
                }
                DirectedGraph::random(*n, *p, *seed)
            }
            InstanceSource::File { path } => DirectedGraph::from_json_file(path)?,
        })
    }

    fn label(&self) -> String {
        match self {
            InstanceSource::Edgeless { n } => format!("edgeless{n}"),
            InstanceSource::Complete { n } => format!("complete{n}"),
            InstanceSource::Tournament { n, .. } => format!("tournament{n}"),
            InstanceSource::Star { leaves, .. } => format!("star{leaves}"),
            InstanceSource::Path { n } => format!("path{n}"),
            InstanceSource::Random { n, .. } => format!("random{n}"),
            InstanceSource::File { path } => path
                .file_stem()
                .map_or_else(|| "file".to_string(), |s| s.to_string_lossy().into_owned()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassSelector {
    Full,
    Thresholds,
    Explicit {
        concepts: Vec<Concept>,
    },
    Singleton {
        labels: Concept,
    },
    /// The singleton class of each trial's target concept.
    TargetSingleton,
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConceptSelector {
    /// Member at this position of the class enumeration.
    Index {
        index: u64,
    },
    Labels {
        labels: Concept,
    },
    /// Labeled 1 exactly on the listed vertices.
    Indicator {
        vertices: Vec<VertexId>,
    },
    /// A uniformly random member per trial (uniform labels for `target_singleton`).
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DistributionSelector {
    Uniform,
    Weights {
        weights: Vec<f64>,
    },
    File {
        path: PathBuf,
    },
    /// Perturbed bichromatic lower-bound family; a fresh sign string per trial.
    Bichromatic {
        eps: f64,
    },
    /// Skewed shattered-set family; the target gets a fresh random pattern
    /// on the set per trial, so the concept selector must be `random`.
    Shattered {
        eps_prime: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LearnerMode {
    Algorithm1,
    /// Median of `choose_k(delta)` Algorithm 1 models on contiguous blocks.
    Amplified {
        delta: f64,
    },
    /// ERM on the first `⌊split·m⌋` points, averaging over the rest.
    Erm {
        #[serde(default = "half")]
        split: f64,
    },
}

fn half() -> f64 {
    0.5
}

impl LearnerMode {
    pub fn name(&self) -> &'static str {
        match self {
            LearnerMode::Algorithm1 => "algorithm1",
            LearnerMode::Amplified { .. } => "amplified",
            LearnerMode::Erm { .. } => "erm",
        }
    }
}

fn default_eps() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Label for the `family` column; derived from the instance when absent.
    #[serde(default)]
    pub family: Option<String>,
    pub instance: InstanceSource,
    pub class: ClassSelector,
    pub concept: ConceptSelector,
    pub distribution: DistributionSelector,
    /// Total sample sizes, strictly increasing.
    pub m_grid: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub mode: LearnerMode,
    /// Accuracy and confidence for the sample-bound overlay.
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_eps")]
    pub delta: f64,
    /// Fill the `runtime_ms` column (which makes output machine dependent).
    #[serde(default)]
    pub record_runtime: bool,
    #[serde(default)]
    pub budget: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::arg("trials must be at least 1"));
        }
        if self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::arg("m_grid must be strictly increasing"));
        }
        for (name, v) in [("eps", self.eps), ("delta", self.delta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::arg(format!("{name} = {v} outside (0, 1)")));
            }
        }
        match self.mode {
            LearnerMode::Amplified { delta } => {
                choose_k(delta)?;
            }
            LearnerMode::Erm { split } if !(0.0..=1.0).contains(&split) => {
                return Err(Error::arg(format!("erm split {split} outside [0, 1]")));
            }
            _ => {}
        }
        if matches!(self.distribution, DistributionSelector::Shattered { .. })
            && self.concept != ConceptSelector::Random
        {
            return Err(Error::arg("the shattered distribution requires a random concept"));
        }
        Ok(())
    }

    /// Hex SHA-256 prefix of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(canonical.as_bytes())[..8])
    }

    pub fn family_label(&self) -> String {
        self.family.clone().unwrap_or_else(|| self.instance.label())
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or_else(default_budget)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `splitmix64(splitmix64(splitmix64(base) ^ m) ^ trial)`.
pub fn cell_seed(base_seed: u64, m: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ m as u64) ^ trial as u64)
}

// independent sub-streams of one cell seed
fn sub_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ stream.wrapping_mul(0xa076_1d64_78bd_642f))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub fingerprint: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub seed: u64,
    pub mode: String,
    pub risk: f64,
    pub alpha: usize,
    pub alpha1: usize,
    pub alpha2: usize,
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug)]
enum DistPlan {
    Fixed(Distribution),
    Bichromatic(BichromaticLBInstance),
    Shattered(ShatteredISInstance),
}

/// A configuration with its graph, class and fixed parameters resolved.
#[derive(Debug)]
pub struct Experiment {
    cfg: ExperimentConfig,
    fingerprint: String,
    graph: DirectedGraph,
    /// `None` for `target_singleton`.
    class: Option<ConceptClass>,
    fixed_concept: Option<Concept>,
    dist: DistPlan,
    alpha: usize,
    /// `(alpha1, alpha2)` when independent of the trial.
    fixed_params: Option<(usize, usize)>,
}

impl Experiment {
    pub fn prepare(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let budget = cfg.budget();
        let graph = cfg.instance.build()?;
        let n = graph.order();
        let class = match &cfg.class {
            ClassSelector::Full => Some(ConceptClass::full(n)),
            ClassSelector::Thresholds => Some(ConceptClass::thresholds(n)),
            ClassSelector::Explicit { concepts } => Some(ConceptClass::explicit(concepts.clone())?),
            ClassSelector::Singleton { labels } => Some(ConceptClass::singleton(labels.clone())),
            ClassSelector::TargetSingleton => None,
            ClassSelector::File { path } => Some(ConceptClass::from_json_file(path)?),
        };
        if let Some(cc) = &class {
            if cc.domain_size() != n {
                return Err(Error::arg(format!(
                    "class is over {} points but the graph has {n} vertices",
                    cc.domain_size()
                )));
            }
        }
        let fixed_concept = match &cfg.concept {
            ConceptSelector::Index { index } => match &class {
                Some(cc) => Some(cc.get(*index)?),
                None => return Err(Error::arg("target_singleton needs labels, an indicator or random")),
            },
            ConceptSelector::Labels { labels } => Some(labels.clone()),
            ConceptSelector::Indicator { vertices } => {
                let mut c = Concept::zeros(n);
                for &v in vertices {
                    graph.check_vertex(v)?;
                    c.set(v, true);
                }
                Some(c)
            }
            ConceptSelector::Random => None,
        };
        if let Some(c) = &fixed_concept {
            if c.len() != n {
                return Err(Error::arg(format!("concept has length {} for {n} vertices", c.len())));
            }
            if let Some(cc) = &class {
                if !cc.contains(c) {
                    return Err(Error::arg(format!("concept {c} is not a member of the class")));
                }
            }
        }
        let dist = match &cfg.distribution {
            DistributionSelector::Uniform => DistPlan::Fixed(Distribution::uniform(n)?),
            DistributionSelector::Weights { weights } => DistPlan::Fixed(Distribution::new(weights.clone())?),
            DistributionSelector::File { path } => DistPlan::Fixed(Distribution::from_json_file(path)?),
            DistributionSelector::Bichromatic { eps } => {
                let c = fixed_concept
                    .as_ref()
                    .ok_or_else(|| Error::arg("the bichromatic distribution needs a fixed concept"))?;
                DistPlan::Bichromatic(gen_bichromatic_instance(&graph, c, *eps, budget)?)
            }
            DistributionSelector::Shattered { eps_prime } => {
                let cc = class
                    .as_ref()
                    .ok_or_else(|| Error::arg("the shattered distribution needs an explicit class"))?;
                DistPlan::Shattered(gen_shattered_instance(&graph, cc, *eps_prime, budget)?)
            }
        };
        if let DistPlan::Fixed(d) = &dist {
            if d.len() != n {
                return Err(Error::arg(format!(
                    "distribution has {} weights for {n} vertices",
                    d.len()
                )));
            }
        }
        let alpha = independence_number(&graph, budget)?.size;
        let fixed_params = match (&class, &fixed_concept) {
            (Some(cc), _) => Some((alpha1(&graph, cc, budget)?.size, alpha2_class(&graph, cc, budget)?.size)),
            (None, Some(c)) => {
                let cc = ConceptClass::singleton(c.clone());
                Some((0, alpha2_class(&graph, &cc, budget)?.size))
            }
            (None, None) => None,
        };
        Ok(Experiment {
            cfg: cfg.clone(),
            fingerprint: cfg.fingerprint(),
            graph,
            class,
            fixed_concept,
            dist,
            alpha,
            fixed_params,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    fn random_member(&self, cc: &ConceptClass, seed: u64) -> Result<Concept> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match cc {
            ConceptClass::Full { n } => Ok(BitString::from_bools((0..*n).map(|_| rng.gen::<bool>()))),
            _ => {
                let size = u64::try_from(cc.size()).map_err(|_| Error::arg("class too large to index"))?;
                cc.get(rng.gen_range(0..size))
            }
        }
    }

    /// Target concept, class and distribution for the cell seed.
    fn resolve(&self, seed: u64) -> Result<(Concept, ConceptClass, Distribution)> {
        let n = self.graph.order();
        let concept = match (&self.dist, &self.fixed_concept) {
            (DistPlan::Shattered(inst), _) => {
                let cc = self.class.as_ref().expect("checked at preparation");
                inst.random_target(cc, sub_seed(seed, 2))?
            }
            (_, Some(c)) => c.clone(),
            (_, None) => match &self.class {
                Some(cc) => self.random_member(cc, sub_seed(seed, 2))?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 2));
                    BitString::from_bools((0..n).map(|_| rng.gen::<bool>()))
                }
            },
        };
        let class = match &self.class {
            Some(cc) => cc.clone(),
            None => ConceptClass::singleton(concept.clone()),
        };
        let dist = match &self.dist {
            DistPlan::Fixed(d) => d.clone(),
            DistPlan::Bichromatic(inst) => {
                let s = sample_sign_string(inst.k(), sub_seed(seed, 1))?;
                inst.perturbed_distribution(&s)?
            }
            DistPlan::Shattered(inst) => inst.distribution(),
        };
        Ok((concept, class, dist))
    }

    pub fn run_trial(&self, m: usize, trial: usize) -> Result<TrialRecord> {
        let seed = cell_seed(self.cfg.base_seed, m, trial);
        self.trial_inner(m, trial, seed).map_err(|e| Error::Trial {
            m,
            trial,
            seed,
            source: Box::new(e),
        })
    }

    fn trial_inner(&self, m: usize, trial: usize, seed: u64) -> Result<TrialRecord> {
        let start = Instant::now();
        let (c, cc, d) = self.resolve(seed)?;
        let sample = draw_sample(&d, &c, m, seed)?;
        let g = &self.graph;
        let risk = match &self.cfg.mode {
            LearnerMode::Algorithm1 => risk(g, &d, &c, &fit_algorithm1(g, &cc, &sample)?)?,
            LearnerMode::Amplified { delta } => {
                let k = choose_k(*delta)?;
                risk(g, &d, &c, &fit_amplified(g, &cc, &sample, k)?)?
            }
            LearnerMode::Erm { split } => {
                let cut = ((m as f64) * split).floor() as usize;
                let (s1, s2) = (sample.slice(0, cut), sample.slice(cut, m));
                risk(g, &d, &c, &fit_erm(g, &cc, &s1, &s2)?)?
            }
        };
        let (alpha1, alpha2) = match self.fixed_params {
            Some(p) => p,
            None => (0, alpha2_class(g, &cc, self.cfg.budget())?.size),
        };
        Ok(TrialRecord {
            fingerprint: self.fingerprint.clone(),
            family: self.cfg.family_label(),
            n: g.order(),
            m,
            trial,
            seed,
            mode: self.cfg.mode.name().to_string(),
            risk,
            alpha: self.alpha,
            alpha1,
            alpha2,
            runtime_ms: self.cfg.record_runtime.then(|| start.elapsed().as_secs_f64() * 1e3),
        })
    }
}

/// Prepares the experiment and runs a single cell.
pub fn run_trial(cfg: &ExperimentConfig, m: usize, trial: usize) -> Result<TrialRecord> {
    Experiment::prepare(cfg)?.run_trial(m, trial)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub m: usize,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q10: f64,
    pub q90: f64,
    pub stderr: f64,
    pub alpha1: usize,
    pub alpha2: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub fingerprint: String,
    pub mode: String,
    pub eps: f64,
    pub delta: f64,
    /// Sorted by `(m, trial)`.
    pub records: Vec<TrialRecord>,
    /// One row per grid value, in grid order.
    pub aggregates: Vec<Aggregate>,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn aggregate(m: usize, records: &[TrialRecord]) -> Aggregate {
    let mut risks: Vec<f64> = records.iter().map(|r| r.risk).collect();
    risks.sort_by(f64::total_cmp);
    let count = risks.len();
    let mean = risks.iter().sum::<f64>() / count as f64;
    let stderr = if count > 1 {
        let var = risks.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
        (var / count as f64).sqrt()
    } else {
        0.0
    };
    Aggregate {
        m,
        count,
        mean,
        median: quantile(&risks, 0.5),
        q10: quantile(&risks, 0.1),
        q90: quantile(&risks, 0.9),
        stderr,
        alpha1: records.iter().map(|r| r.alpha1).max().unwrap_or(0),
        alpha2: records.iter().map(|r| r.alpha2).max().unwrap_or(0),
    }
}

/// Runs every `(m, trial)` cell on up to `workers` threads (0 = rayon's
/// default). Any failing cell aborts the sweep with the first failure in
/// `(m, trial)` order.
pub fn run_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<SweepResult> {
    let exp = Experiment::prepare(cfg)?;
    let cells: Vec<(usize, usize)> = cfg
        .m_grid
        .iter()
        .flat_map(|&m| (0..cfg.trials).map(move |t| (m, t)))
        .collect();
    let results: Vec<Result<TrialRecord>> = if workers == 1 {
        cells.iter().map(|&(m, t)| exp.run_trial(m, t)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::arg(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(|&(m, t)| exp.run_trial(m, t)).collect())
    };
    let mut records = results.into_iter().collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.m, r.trial));
    let aggregates = cfg
        .m_grid
        .iter()
        .map(|&m| {
            let start = records.partition_point(|r| r.m < m);
            let end = records.partition_point(|r| r.m <= m);
            aggregate(m, &records[start..end])
        })
        .collect();
    Ok(SweepResult {
        fingerprint: exp.fingerprint.clone(),
        mode: cfg.mode.name().to_string(),
        eps: cfg.eps,
        delta: cfg.delta,
        records,
        aggregates,
    })
}

pub const CSV_HEADER: [&str; 11] = [
    "family",
    "n",
    "m",
    "trial",
    "seed",
    "mode",
    "risk",
    "alpha",
    "alpha1",
    "alpha2",
    "runtime_ms",
];

pub fn write_csv<W: std::io::Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.family.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.mode.clone(),
            r.risk.to_string(),
            r.alpha.to_string(),
            r.alpha1.to_string(),
            r.alpha2.to_string(),
            r.runtime_ms.map_or_else(String::new, |t| format!("{t:.3}")),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[TrialRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Writes through a temporary file in the target directory, then renames, so
/// a failed write never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub const PLOT_HEADER: &str = "m mean_risk q10 q90 bound";

/// Plain-text plot data: a `# mode <name>` line and a header per series,
/// then one row per grid value. With no rows at all only the header is written.
pub fn emit_plot_data(sweeps: &[&SweepResult]) -> Result<String> {
    let mut out = String::new();
    if sweeps.iter().all(|s| s.aggregates.is_empty()) {
        out.push_str(PLOT_HEADER);
        out.push('\n');
        return Ok(out);
    }
    for (i, s) in sweeps.iter().filter(|s| !s.aggregates.is_empty()).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# mode {}", s.mode);
        let _ = writeln!(out, "{PLOT_HEADER}");
        for a in &s.aggregates {
            let bound = theoretical_sample_bound(a.alpha1, a.alpha2, s.eps, s.delta)?;
            let _ = writeln!(out, "{} {} {} {} {}", a.m, a.mean, a.q10, a.q90, bound);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotRow {
    pub m: usize,
    pub mean_risk: f64,
    pub q10: f64,
    pub q90: f64,
    pub bound: u64,
}

/// Inverse of [`emit_plot_data`]: `(mode, rows)` per series.
pub fn parse_plot_data(text: &str) -> Result<Vec<(String, Vec<PlotRow>)>> {
    let mut series: Vec<(String, Vec<PlotRow>)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line == PLOT_HEADER {
            continue;
        }
        if let Some(mode) = line.strip_prefix("# mode ") {
            series.push((mode.to_string(), Vec::new()));
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("plot row {line:?}"));
        if f.len() != 5 {
            return Err(bad());
        }
        let row = PlotRow {
            m: f[0].parse().map_err(|_| bad())?,
            mean_risk: f[1].parse().map_err(|_| bad())?,
            q10: f[2].parse().map_err(|_| bad())?,
            q90: f[3].parse().map_err(|_| bad())?,
            bound: f[4].parse().map_err(|_| bad())?,
        };
        series.last_mut().ok_or_else(bad)?.1.push(row);
    }
    Ok(series)
}
