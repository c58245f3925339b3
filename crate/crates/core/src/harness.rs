//! Verification campaigns over enumerated, random and corpus graphs, with
//! JSON reports.
//!
//! Every campaign is deterministic given its configuration: work is sharded
//! with rayon and merged in input order, and random graphs are drawn from a
//! ChaCha stream selected by the item index.

use crate::certifier::{certify_with, check_lemma_2_3_with, sweep_family, CertifierError, CheckStatus, Outcome};
use crate::extremal::{build_a, make_member, ExtremalError, ExtremalParams};
use crate::graph::{
    enumerate_labeled_graphs, graph6_string, par_map_labeled_graphs, parse_graph6, EnumerationMode, Graph, GraphError,
};
use crate::spectral::{q_index, q_upper_bound_edges};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

pub const REPORT_SCHEMA: u32 = 1;

/// Attempts allowed to [`random_graph`] before it gives up.
pub const RANDOM_GRAPH_ATTEMPTS: usize = 1000;

/// Campaigns larger than this keep only non-passing items in the report.
pub const ITEM_LIMIT: u64 = 10_000;

/// Slack allowed on the edge-count bound for the Q-index.
const EDGE_BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no graph met the floor after {attempts} attempts")]
    BudgetExhausted { attempts: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error(transparent)]
    Certifier(#[from] CertifierError),
}

impl HarnessError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignMode {
    /// Q-index against `2m/(n-1) + n - 2`.
    Lemma22,
    /// Density criterion for k-connectivity.
    Lemma23,
    /// Verdicts over enumerated or corpus graphs.
    Theorem15,
    /// All family checks at each order in the range.
    FamilySweep,
    /// Verdicts on seeded random dense graphs.
    Counterexample,
    /// Verdicts on every corpus graph.
    CertifyOne,
}

impl std::str::FromStr for CampaignMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lemma22" => CampaignMode::Lemma22,
            "lemma23" => CampaignMode::Lemma23,
            "theorem15" => CampaignMode::Theorem15,
            "family-sweep" => CampaignMode::FamilySweep,
            "counterexample" => CampaignMode::Counterexample,
            "certify-one" => CampaignMode::CertifyOne,
            other => return Err(HarnessError::Config(format!("unknown mode {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub mode: CampaignMode,
    pub k: usize,
    pub delta: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Number of random graphs, or the complement budget for `lemma23`
    /// (`None` derives it from the density bound).
    pub budget: Option<u64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Skip malformed corpus lines instead of aborting.
    pub lenient: bool,
}

impl CampaignConfig {
    pub fn new(mode: CampaignMode) -> Self {
        CampaignConfig {
            mode,
            k: 3,
            delta: 3,
            n_min: 2,
            n_max: 7,
            tolerance: 1e-9,
            seed: 0,
            budget: None,
            input: None,
            output: None,
            lenient: false,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.n_min > self.n_max {
            return bad(format!("empty order range {}..={}", self.n_min, self.n_max));
        }
        if self.mode == CampaignMode::CertifyOne && self.input.is_none() {
            return bad("certify-one needs an input corpus".into());
        }
        if let Some(path) = &self.input {
            if !path.is_file() {
                return bad(format!("corpus {} does not exist", path.display()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemStatus {
    Passed,
    Failed,
    Skipped,
    Undecided,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub tested: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub undecided: u64,
}

impl Counters {
    pub fn add(&mut self, status: ItemStatus) {
        self.tested += 1;
        match status {
            ItemStatus::Passed => self.passed += 1,
            ItemStatus::Failed => self.failed += 1,
            ItemStatus::Skipped => self.skipped += 1,
            ItemStatus::Undecided => self.undecided += 1,
        }
    }

    fn merge(&mut self, other: &Counters) {
        self.tested += other.tested;
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        self.undecided += other.undecided;
    }

    pub fn balanced(&self) -> bool {
        self.tested == self.passed + self.failed + self.skipped + self.undecided
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemResult {
    pub index: u64,
    pub n: usize,
    pub status: ItemStatus,
    pub outcome: String,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub detail: Value,
}

/// A failing graph, replayable through `certify-one`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: u64,
    pub n: usize,
    pub graph6: String,
    pub k: usize,
    /// Verdict of the certifier on this graph at the campaign's `k`.
    pub verdict: Outcome,
    pub finding: String,
}

/// Counters per order, with the smallest slack seen where one applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub n: usize,
    pub counters: Counters,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub config: CampaignConfig,
    pub counters: Counters,
    pub by_order: Vec<OrderSummary>,
    /// `false` when only non-passing items are listed.
    pub all_items: bool,
    pub items: Vec<ItemResult>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl Report {
    fn new(config: &CampaignConfig) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            config: config.clone(),
            counters: Counters::default(),
            by_order: Vec::new(),
            all_items: true,
            items: Vec::new(),
            violations: Vec::new(),
            notes: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    /// No failures and no violations.
    pub fn clean(&self) -> bool {
        self.counters.failed == 0 && self.violations.is_empty()
    }

    /// The report with its timing field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Report {
        Report {
            wall_clock_seconds: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    fn absorb(&mut self, n: usize, items: Vec<(ItemResult, Option<Violation>)>, min_slack: Option<f64>) {
        let mut counters = Counters::default();
        for (item, violation) in items {
            counters.add(item.status);
            if self.all_items || item.status != ItemStatus::Passed {
                self.items.push(item);
            }
            self.violations.extend(violation);
        }
        self.counters.merge(&counters);
        self.by_order.push(OrderSummary { n, counters, min_slack });
    }
}

/// Outcome of streaming a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub delivered: usize,
    /// `(line, message)` for every skipped line.
    pub errors: Vec<(usize, String)>,
}

/// Parses a file of graph6 lines and hands each graph to `consumer` in order.
///
/// Blank lines are ignored. A malformed line aborts with its 1-based line
/// number unless `lenient` is set, in which case it is logged and skipped.
pub fn stream_corpus<F>(path: &Path, lenient: bool, mut consumer: F) -> Result<CorpusSummary, HarnessError>
where
    F: FnMut(usize, Graph),
{
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut summary = CorpusSummary::default();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        let text = line.trim_end_matches('\r');
        if text.trim().is_empty() {
            continue;
        }
        match parse_graph6(text.as_bytes()) {
            Ok(g) => {
                summary.delivered += 1;
                consumer(i + 1, g);
            }
            Err(e) if lenient => {
                log::warn!("{}:{}: {e}", path.display(), i + 1);
                summary.errors.push((i + 1, e.to_string()));
            }
            Err(e) => {
                return Err(HarnessError::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })
            }
        }
    }
    Ok(summary)
}

fn gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Independent edges with probability `p`, redrawn until the graph is
/// connected with minimum degree at least `floor`.
pub fn random_graph(n: usize, p: f64, floor: usize, seed: u64) -> Result<Graph, HarnessError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(HarnessError::Config(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_GRAPH_ATTEMPTS {
        let g = gnp(&mut rng, n, p);
        if g.is_connected() && g.min_degree() >= floor {
            return Ok(g);
        }
    }
    Err(HarnessError::BudgetExhausted {
        attempts: RANDOM_GRAPH_ATTEMPTS,
    })
}

fn item_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Dense graph with a few vertices cut down to degree near `floor`.
fn planted_graph(rng: &mut ChaCha8Rng, n: usize, floor: usize) -> Option<Graph> {
    for _ in 0..100 {
        let p = rng.gen_range(0.9..=1.0);
        let mut g = gnp(rng, n, p);
        let low = rng.gen_range(1..=3.min(n));
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let (planted, rest) = order.split_at(low);
        for &v in planted {
            for u in 0..n {
                if u != v {
                    g.remove_edge(u, v);
                }
            }
            let d = rng.gen_range(floor..=floor + 2).min(rest.len());
            for &u in rest.choose_multiple(rng, d) {
                g.add_edge(u, v);
            }
        }
        if g.is_connected() && g.min_degree() >= floor {
            return Some(g);
        }
    }
    None
}

/// `A(n,k,δ)` minus a random `E′`, plus a few random edges out of `X`,
/// randomly relabelled.
fn perturbed_family_graph(rng: &mut ChaCha8Rng, p: &ExtremalParams) -> Result<Graph, HarnessError> {
    let (_, part) = build_a(p);
    let yz: Vec<usize> = part.y.iter().chain(&part.z).copied().collect();
    let size = rng.gen_range(0..=p.family_bound() + 1);
    let mut removed: Vec<(usize, usize)> = Vec::new();
    while removed.len() < size {
        let pair = yz.choose_multiple(rng, 2).copied().collect::<Vec<_>>();
        let e = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if !removed.contains(&e) {
            removed.push(e);
        }
    }
    let mut g = make_member(p, &removed)?.graph;
    for _ in 0..rng.gen_range(0..=2) {
        let x = *part.x.choose(rng).expect("X is nonempty");
        let z = *part.z.choose(rng).expect("Z is nonempty");
        g.add_edge(x, z);
    }
    let mut perm: Vec<usize> = (0..p.n).collect();
    perm.shuffle(rng);
    Ok(g.relabel(&perm))
}

fn verdict_status(outcome: Outcome) -> ItemStatus {
    match outcome {
        Outcome::KConnectedCertified | Outcome::ExceptionalFamily | Outcome::ConditionNotMet => ItemStatus::Passed,
        Outcome::HypothesisFailed => ItemStatus::Skipped,
        Outcome::UndecidedNumeric => ItemStatus::Undecided,
        Outcome::TheoremViolation => ItemStatus::Failed,
    }
}

fn outcome_name(outcome: Outcome) -> String {
    serde_json::to_value(outcome)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn violation(index: u64, g: &Graph, cfg: &CampaignConfig, verdict: Option<Outcome>, finding: String) -> Violation {
    let verdict = verdict.unwrap_or_else(|| certify_with(g, cfg.k, cfg.tolerance).outcome);
    Violation {
        index,
        n: g.order(),
        graph6: graph6_string(g).unwrap_or_default(),
        k: cfg.k,
        verdict,
        finding,
    }
}

type Entry = (ItemResult, Option<Violation>);

fn certify_entry(index: u64, g: &Graph, cfg: &CampaignConfig) -> Entry {
    let v = certify_with(g, cfg.k, cfg.tolerance);
    let status = verdict_status(v.outcome);
    let detail = json!({
        "q_lower": v.q_lower,
        "q_upper": v.q_upper,
        "threshold": v.threshold,
        "min_degree": v.min_degree,
    });
    let flagged = (status == ItemStatus::Failed).then(|| {
        violation(index, g, cfg, Some(v.outcome), "not k-connected and not in the first exceptional family".into())
    });
    let item = ItemResult {
        index,
        n: g.order(),
        status,
        outcome: outcome_name(v.outcome),
        detail,
    };
    (item, flagged)
}

/// Edge-count bound on one graph; returns the entry and the slack `bound - upper`.
fn lemma22_entry(index: u64, g: &Graph, cfg: &CampaignConfig) -> (Entry, f64) {
    let n = g.order();
    let bound = q_upper_bound_edges(g).expect("order at least 2");
    let est = q_index(g, cfg.tolerance).expect("positive tolerance");
    let slack = bound - est.upper;
    let status = if est.upper <= bound + EDGE_BOUND_SLACK {
        ItemStatus::Passed
    } else if est.lower > bound + EDGE_BOUND_SLACK {
        ItemStatus::Failed
    } else {
        ItemStatus::Undecided
    };
    let flagged = (status == ItemStatus::Failed)
        .then(|| violation(index, g, cfg, None, format!("q in [{}, {}] exceeds bound {bound}", est.lower, est.upper)));
    let item = ItemResult {
        index,
        n,
        status,
        outcome: format!("{status:?}").to_lowercase(),
        detail: json!({ "bound": bound, "q_lower": est.lower, "q_upper": est.upper }),
    };
    ((item, flagged), slack)
}

fn lemma23_entry(index: u64, g: &Graph, cfg: &CampaignConfig) -> Entry {
    let r = check_lemma_2_3_with(g, cfg.k, cfg.delta, false);
    let status = match r.status {
        CheckStatus::Pass => ItemStatus::Passed,
        CheckStatus::Fail => ItemStatus::Failed,
        CheckStatus::Skipped | CheckStatus::Vacuous => ItemStatus::Skipped,
    };
    let flagged = (status == ItemStatus::Failed).then(|| violation(index, g, cfg, None, r.findings.join("; ")));
    let item = ItemResult {
        index,
        n: g.order(),
        status,
        outcome: format!("{:?}", r.status).to_lowercase(),
        detail: Value::Null,
    };
    (item, flagged)
}

fn corpus_graphs(cfg: &CampaignConfig, report: &mut Report) -> Result<Vec<Graph>, HarnessError> {
    let path = cfg.input.as_ref().expect("checked by caller");
    let mut graphs = Vec::new();
    let summary = stream_corpus(path, cfg.lenient, |_, g| graphs.push(g))?;
    for (line, message) in summary.errors {
        report.notes.push(format!("skipped corpus line {line}: {message}"));
    }
    Ok(graphs)
}

/// Runs a corpus through `f` in parallel and files results by order.
fn run_corpus<F>(cfg: &CampaignConfig, report: &mut Report, f: F) -> Result<(), HarnessError>
where
    F: Fn(u64, &Graph) -> Entry + Sync,
{
    let graphs = corpus_graphs(cfg, report)?;
    let entries: Vec<Entry> = graphs.par_iter().enumerate().map(|(i, g)| f(i as u64, g)).collect();
    report.all_items = entries.len() as u64 <= ITEM_LIMIT;
    let mut orders: Vec<usize> = graphs.iter().map(Graph::order).collect();
    orders.sort_unstable();
    orders.dedup();
    for n in orders {
        let of_order = entries.iter().filter(|(item, _)| item.n == n).cloned().collect();
        report.absorb(n, of_order, None);
    }
    report.items.sort_by_key(|item| item.index);
    report.violations.sort_by_key(|v| v.index);
    Ok(())
}

/// Runs every enumerated graph of each order through `f`; only
/// hypothesis-relevant graphs are materialised as entries.
fn run_enumeration<F>(
    cfg: &CampaignConfig,
    report: &mut Report,
    mode: impl Fn(usize) -> EnumerationMode,
    keep: impl Fn(&Graph) -> bool + Sync,
    f: F,
) -> Result<(), HarnessError>
where
    F: Fn(u64, &Graph) -> (Entry, Option<f64>) + Sync,
{
    report.all_items = false;
    for n in cfg.n_min..=cfg.n_max {
        let mode = mode(n);
        let rejected = AtomicU64::new(0);
        let results = par_map_labeled_graphs(n, mode, |index, g| {
            if keep(g) {
                let (entry, slack) = f(index, g);
                // Passing entries are only counted; dropping them keeps memory flat.
                let entry = if entry.0.status == ItemStatus::Passed { (light(&entry.0), None) } else { entry };
                Some((entry, slack))
            } else {
                rejected.fetch_add(1, Ordering::Relaxed);
                None
            }
        })?;
        let min_slack = results.iter().filter_map(|(_, s)| *s).reduce(f64::min);
        let entries: Vec<Entry> = results.into_iter().map(|(e, _)| e).collect();
        report.absorb(n, entries, min_slack);
        let summary = report.by_order.last_mut().expect("just pushed");
        let rejected = rejected.into_inner();
        summary.counters.tested += rejected;
        summary.counters.skipped += rejected;
        report.counters.tested += rejected;
        report.counters.skipped += rejected;
    }
    Ok(())
}

fn light(item: &ItemResult) -> ItemResult {
    ItemResult {
        detail: Value::Null,
        outcome: String::new(),
        ..item.clone()
    }
}

fn lemma23_budget(cfg: &CampaignConfig, n: usize) -> usize {
    if let Some(b) = cfg.budget {
        return b as usize;
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let removed = (cfg.delta + 3).saturating_sub(cfg.k) * n.saturating_sub(cfg.delta + 2);
    // m > pairs - removed, so at most removed - 1 edges are missing.
    removed.min(pairs + 1).saturating_sub(1)
}

fn run_counterexample(cfg: &CampaignConfig, report: &mut Report) -> Result<(), HarnessError> {
    let budget = cfg.budget.unwrap_or(ITEM_LIMIT);
    report.all_items = budget <= ITEM_LIMIT;
    let family = ExtremalParams::new(cfg.n_min, cfg.k, cfg.delta).ok();
    let sources = if family.is_some() { 3 } else { 2 };
    report.notes.push(format!(
        "graph sources by index mod {sources}: 0 dense G(n,p) with p in [0.9, 1]; 1 planted low-degree vertices{}",
        if family.is_some() { "; 2 A(n,k,delta) minus random E' plus X-Z edges, relabelled" } else { "" }
    ));
    let n = cfg.n_min;
    let entries: Vec<Result<Option<Entry>, HarnessError>> = (0..budget)
        .into_par_iter()
        .map(|index| {
            let mut rng = item_rng(cfg.seed, index);
            let g = match index % sources {
                0 => {
                    let p = rng.gen_range(0.9..=1.0);
                    random_graph(n, p, cfg.delta, rng.gen()).ok()
                }
                1 => planted_graph(&mut rng, n, cfg.delta),
                _ => Some(perturbed_family_graph(&mut rng, family.as_ref().expect("source enabled"))?),
            };
            Ok(g.map(|g| certify_entry(index, &g, cfg)))
        })
        .collect();
    let mut kept = Vec::new();
    let mut missing = 0u64;
    for e in entries {
        match e? {
            Some(entry) => kept.push(entry),
            None => missing += 1,
        }
    }
    report.absorb(n, kept, None);
    if missing > 0 {
        report.notes.push(format!("{missing} draws met no graph within their attempt budget"));
    }
    Ok(())
}

fn run_family_sweep(cfg: &CampaignConfig, report: &mut Report) -> Result<(), HarnessError> {
    for n in cfg.n_min..=cfg.n_max {
        let p = ExtremalParams::new(n, cfg.k, cfg.delta)?;
        let sweep = sweep_family(&p, cfg.tolerance)?;
        let mut entries = Vec::new();
        let mut index = 0u64;
        let mut push = |status: ItemStatus, outcome: String, detail: Value| {
            entries.push((
                ItemResult {
                    index,
                    n,
                    status,
                    outcome,
                    detail,
                },
                None,
            ));
            index += 1;
        };
        for r in sweep.reports() {
            let status = match r.status {
                CheckStatus::Pass | CheckStatus::Vacuous => ItemStatus::Passed,
                CheckStatus::Fail => ItemStatus::Failed,
                CheckStatus::Skipped => ItemStatus::Skipped,
            };
            let edges = r.member.as_ref().map(|m| m.removed_edges.clone());
            let failing: Vec<&str> = r.margins.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            push(
                status,
                format!("{} {:?}", r.lemma, r.status).to_lowercase(),
                json!({ "removed": edges, "failing": failing, "maximizer": r.maximizer, "findings": r.findings }),
            );
        }
        for (edges, outcome) in &sweep.certifications {
            let status = if *outcome == Outcome::ExceptionalFamily { ItemStatus::Passed } else { ItemStatus::Failed };
            push(status, format!("certify {}", outcome_name(*outcome)), json!({ "removed": edges }));
        }
        let chain = &sweep.proof_chain;
        let status = if chain.chain_holds { ItemStatus::Passed } else { ItemStatus::Failed };
        push(status, "proof chain".into(), serde_json::to_value(chain).expect("serializes"));
        report.absorb(n, entries, None);
    }
    Ok(())
}

/// Runs the configured campaign and writes the report to `config.output` when set.
pub fn run_campaign(config: &CampaignConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let mut report = Report::new(config);
    let cfg = config;
    match (cfg.mode, cfg.input.is_some()) {
        (CampaignMode::Lemma22, true) => run_corpus(cfg, &mut report, |i, g| {
            if g.order() >= 2 {
                lemma22_entry(i, g, cfg).0
            } else {
                skipped_entry(i, g)
            }
        })?,
        (CampaignMode::Lemma22, false) => {
            if cfg.n_min < 2 {
                return Err(HarnessError::Config("lemma22 needs n >= 2".into()));
            }
            run_enumeration(
                cfg,
                &mut report,
                |_| EnumerationMode::All,
                |g| g.is_connected(),
                |i, g| {
                    let (entry, slack) = lemma22_entry(i, g, cfg);
                    (entry, Some(slack))
                },
            )?
        }
        (CampaignMode::Lemma23, true) => run_corpus(cfg, &mut report, |i, g| lemma23_entry(i, g, cfg))?,
        (CampaignMode::Lemma23, false) => run_enumeration(
            cfg,
            &mut report,
            |n| EnumerationMode::ComplementBudget(lemma23_budget(cfg, n)),
            |g| g.is_connected() && g.min_degree() >= cfg.delta,
            |i, g| (lemma23_entry(i, g, cfg), None),
        )?,
        (CampaignMode::Theorem15 | CampaignMode::CertifyOne, true) => {
            run_corpus(cfg, &mut report, |i, g| certify_entry(i, g, cfg))?
        }
        (CampaignMode::Theorem15, false) => run_enumeration(
            cfg,
            &mut report,
            |_| EnumerationMode::All,
            |_| true,
            |i, g| (certify_entry(i, g, cfg), None),
        )?,
        (CampaignMode::CertifyOne, false) => unreachable!("validated"),
        (CampaignMode::FamilySweep, _) => run_family_sweep(cfg, &mut report)?,
        (CampaignMode::Counterexample, _) => run_counterexample(cfg, &mut report)?,
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &cfg.output {
        std::fs::write(path, report.to_json()).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(report)
}

fn skipped_entry(index: u64, g: &Graph) -> Entry {
    let item = ItemResult {
        index,
        n: g.order(),
        status: ItemStatus::Skipped,
        outcome: "skipped".into(),
        detail: Value::Null,
    };
    (item, None)
}

/// Counts graphs of one order for which `predicate` holds, without materialising them.
pub fn count_graphs(n: usize, mode: EnumerationMode, predicate: impl Fn(&Graph) -> bool + Sync) -> Result<u64, HarnessError> {
    Ok(enumerate_labeled_graphs(n, mode, predicate, |_| {})?.accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn random_graph_contract() {
        let g = random_graph(10, 1.0, 3, 99).unwrap();
        assert_eq!(g.edge_count(), 45);
        assert!(matches!(random_graph(10, 0.0, 0, 1), Err(HarnessError::BudgetExhausted { .. })));
        let a = graph6_string(&random_graph(30, 0.5, 2, 7).unwrap()).unwrap();
        let b = graph6_string(&random_graph(30, 0.5, 2, 7).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(random_graph(5, 1.5, 0, 0).is_err());
    }

    #[test]
    fn corpus_streaming() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "Bw\nBg\nD??").unwrap();
        let mut seen = Vec::new();
        let s = stream_corpus(f.path(), false, |line, g| seen.push((line, g.order()))).unwrap();
        assert_eq!(s.delivered, 3);
        assert_eq!(seen, vec![(1, 3), (2, 3), (3, 5)]);

        let empty = tempfile::NamedTempFile::new().unwrap();
        assert_eq!(stream_corpus(empty.path(), false, |_, _| {}).unwrap().delivered, 0);

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "Bw\nB\u{7f}\nBg").unwrap();
        let s = stream_corpus(bad.path(), true, |_, _| {}).unwrap();
        assert_eq!((s.delivered, s.errors.len()), (2, 1));
        assert_eq!(s.errors[0].0, 2);
        assert!(matches!(stream_corpus(bad.path(), false, |_, _| {}), Err(HarnessError::Parse { line: 2, .. })));
    }

    #[test]
    fn lemma22_small_orders() {
        let mut cfg = CampaignConfig::new(CampaignMode::Lemma22);
        cfg.n_max = 5;
        let r = run_campaign(&cfg).unwrap();
        assert!(r.counters.balanced());
        // Connected labelled graphs on 2..=5 vertices plus the disconnected ones, skipped.
        assert_eq!(r.counters.tested, 2 + 8 + 64 + 1024);
        assert_eq!(r.counters.passed, 1 + 4 + 38 + 728);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn budget_from_density_bound() {
        let cfg = CampaignConfig::new(CampaignMode::Lemma23);
        assert_eq!(lemma23_budget(&cfg, 8), 8);
    }

    #[test]
    fn counterexample_is_reproducible() {
        let mut cfg = CampaignConfig::new(CampaignMode::Counterexample);
        cfg.n_min = 40;
        cfg.n_max = 40;
        cfg.delta = 3;
        cfg.budget = Some(12);
        cfg.seed = 5;
        let a = run_campaign(&cfg).unwrap();
        let b = run_campaign(&cfg).unwrap();
        assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
        assert_eq!(a.counters.tested, 12);
        assert!(a.clean());
    }

    #[test]
    fn config_errors() {
        let mut cfg = CampaignConfig::new(CampaignMode::CertifyOne);
        assert!(matches!(run_campaign(&cfg), Err(HarnessError::Config(_))));
        cfg.input = Some("/nonexistent/corpus.g6".into());
        assert!(matches!(run_campaign(&cfg), Err(HarnessError::Config(_))));
        let mut cfg = CampaignConfig::new(CampaignMode::Lemma22);
        cfg.tolerance = 0.0;
        assert!(run_campaign(&cfg).is_err());
        assert_eq!("family-sweep".parse::<CampaignMode>().unwrap(), CampaignMode::FamilySweep);
        assert!("lemma99".parse::<CampaignMode>().is_err());
    }
}
