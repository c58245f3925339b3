//! `qconn`: command-line front end for Q-index certification of k-connectivity.
//!
//! Exit codes: 0 when everything checked passed, 1 when a failure or
//! violation was recorded, 2 on configuration or I/O errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qconn_core::certifier::{
    certify_with, check_lemma_2_3, check_lemma_3_1_with, check_lemma_3_2_with, check_lemma_3_3_with,
    check_lemma_3_7_with, check_lemma_3_8_with, check_orderings_with, find_maximizer, verify_theorem_proof_chain,
    LemmaReport, MemberRole, Outcome, EIGENVECTOR_TOLERANCE,
};
use qconn_core::connectivity::{brute_force_connectivity, vertex_connectivity};
use qconn_core::extremal::{build_a, build_l, build_m, make_member, ExtremalParams};
use qconn_core::graph::{graph6_string, parse_graph6, Graph};
use qconn_core::harness::{run_campaign, CampaignConfig, CampaignMode};
use qconn_core::spectral::{perron_root, Operator, PowerOptions};
use serde_json::json;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qconn", version, about = "Signless-Laplacian certification of k-connectivity")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Width of the certified eigenvalue bracket.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    /// Signless Laplacian D + A.
    Q,
    /// Adjacency matrix.
    A,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    A,
    M,
    L,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    #[value(name = "2.3")]
    Density,
    #[value(name = "3.1")]
    FirstFamily,
    #[value(name = "3.2")]
    SecondFamily,
    #[value(name = "3.3")]
    XEntries,
    #[value(name = "3.4")]
    Orderings,
    #[value(name = "3.7")]
    Spread,
    #[value(name = "3.8")]
    UpperBound,
    /// Edge-count chain behind the main verdict.
    #[value(name = "chain")]
    Chain,
}

#[derive(Subcommand)]
enum Command {
    /// Certified bracket on the Perron root of Q (or A).
    ComputeQ {
        /// graph6 file, one graph per line; standard input when omitted.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "q")]
        operator: OperatorArg,
    },
    /// Vertex connectivity with a minimum cut.
    Kappa {
        input: Option<PathBuf>,
        /// Use the subset-enumeration oracle (n ≤ 12).
        #[arg(long)]
        brute: bool,
    },
    /// Verdict for each input graph.
    Certify {
        input: Option<PathBuf>,
        #[arg(long, short)]
        k: usize,
    },
    /// Print an extremal graph as graph6.
    Construct {
        #[arg(value_enum)]
        which: Construction,
        #[arg(long, short)]
        n: usize,
        #[arg(long, short)]
        k: usize,
        #[arg(long, short, default_value_t = 0)]
        delta: usize,
        /// Edges removed from A(n,k,δ), as "u-v,u-v".
        #[arg(long, default_value = "")]
        remove: String,
    },
    /// Run one lemma check.
    Verify {
        #[arg(value_enum)]
        lemma: Lemma,
        #[arg(long, short)]
        n: Option<usize>,
        #[arg(long, short)]
        k: usize,
        #[arg(long, short)]
        delta: usize,
        #[arg(long, default_value = "")]
        remove: String,
        /// Graphs for the density check (2.3); standard input when omitted.
        input: Option<PathBuf>,
    },
    /// Run a verification campaign and write its report.
    Sweep {
        #[arg(value_enum)]
        mode: ModeArg,
        #[arg(long, short, default_value_t = 3)]
        k: usize,
        #[arg(long, short, default_value_t = 3)]
        delta: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random graph count, or complement budget for lemma23.
        #[arg(long)]
        budget: Option<u64>,
        /// graph6 corpus.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Report path; the report is printed when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Skip malformed corpus lines.
        #[arg(long)]
        lenient: bool,
    },
    /// Edge list ("n" then "u v" per line) to graph6.
    Encode { input: Option<PathBuf> },
    /// graph6 to edge list.
    Decode { input: Option<PathBuf> },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lemma22,
    Lemma23,
    Theorem15,
    FamilySweep,
    Counterexample,
    CertifyOne,
}

impl From<ModeArg> for CampaignMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Lemma22 => CampaignMode::Lemma22,
            ModeArg::Lemma23 => CampaignMode::Lemma23,
            ModeArg::Theorem15 => CampaignMode::Theorem15,
            ModeArg::FamilySweep => CampaignMode::FamilySweep,
            ModeArg::Counterexample => CampaignMode::Counterexample,
            ModeArg::CertifyOne => CampaignMode::CertifyOne,
        }
    }
}

fn read_text(input: &Option<PathBuf>) -> Result<String> {
    let mut text = String::new();
    match input {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        }
    }
    Ok(text)
}

fn read_graphs(input: &Option<PathBuf>) -> Result<Vec<Graph>> {
    let text = read_text(input)?;
    let mut graphs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line.as_bytes()).map_err(|e| anyhow!("line {}: {e}", i + 1))?;
        graphs.push(g);
    }
    if graphs.is_empty() {
        return Err(anyhow!("no graphs in input"));
    }
    Ok(graphs)
}

fn parse_edges(spec: &str) -> Result<Vec<(usize, usize)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (u, v) = pair.split_once('-').ok_or_else(|| anyhow!("edge {pair:?} is not u-v"))?;
            let u = u.trim().parse()?;
            let v = v.trim().parse()?;
            Ok((u, v))
        })
        .collect()
}

/// Prints to stdout; a closed pipe is not an error.
fn out(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn emit(json: bool, value: serde_json::Value, text: impl FnOnce() -> String) {
    if json {
        out(&serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        out(&text());
    }
}

fn params(n: Option<usize>, k: usize, delta: usize) -> Result<ExtremalParams> {
    let n = n.ok_or_else(|| anyhow!("--n is required for this lemma"))?;
    Ok(ExtremalParams::new(n, k, delta)?)
}

fn report_text(r: &LemmaReport) -> String {
    let mut out = format!("lemma {}: {:?}", r.lemma, r.status);
    if let (Some(lo), Some(hi)) = (r.q_lower, r.q_upper) {
        out += &format!("\n  q in [{lo}, {hi}]");
    }
    if let Some(id) = r.identity_value {
        out += &format!("\n  identity value {id}");
    }
    for c in &r.margins {
        out += &format!(
            "\n  {} {}: {} {} {} (margin {:e})",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.lhs,
            c.relation,
            c.rhs,
            c.margin
        );
    }
    for f in &r.findings {
        out += &format!("\n  note: {f}");
    }
    out
}

/// Runs the command; `Ok(false)` means a failure was recorded.
fn run(cli: Cli) -> Result<bool> {
    let tol = cli.tol;
    if !(tol > 0.0) {
        return Err(anyhow!("--tol must be positive"));
    }
    let json = cli.json;
    match cli.command {
        Command::ComputeQ { input, operator } => {
            let op = match operator {
                OperatorArg::Q => Operator::SignlessLaplacian,
                OperatorArg::A => Operator::Adjacency,
            };
            for g in read_graphs(&input)? {
                let est = perron_root(&g, op, &PowerOptions::new(tol))?;
                emit(
                    json,
                    json!({ "lower": est.lower, "upper": est.upper, "iterations": est.iterations, "converged": est.converged }),
                    || format!("[{}, {}] after {} iterations{}", est.lower, est.upper, est.iterations, if est.converged { "" } else { " (not converged)" }),
                );
            }
            Ok(true)
        }
        Command::Kappa { input, brute } => {
            for g in read_graphs(&input)? {
                let r = if brute { brute_force_connectivity(&g)? } else { vertex_connectivity(&g) };
                emit(json, serde_json::to_value(&r)?, || format!("kappa {} cut {:?}", r.kappa, r.cut));
            }
            Ok(true)
        }
        Command::Certify { input, k } => {
            let mut clean = true;
            for g in read_graphs(&input)? {
                let v = certify_with(&g, k, tol);
                clean &= v.outcome != Outcome::TheoremViolation;
                let outcome = serde_json::to_value(v.outcome)?;
                emit(json, serde_json::to_value(&v)?, || {
                    let mut s = format!(
                        "{} (n = {}, min degree {}, threshold {}, q in [{}, {}])",
                        outcome.as_str().unwrap_or_default(),
                        v.n,
                        v.min_degree,
                        v.threshold,
                        v.q_lower,
                        v.q_upper
                    );
                    if let Some(kappa) = v.kappa {
                        s += &format!("\n  kappa {kappa}, cut {:?}", v.cut.clone().unwrap_or_default());
                    }
                    if let Some(m) = &v.member {
                        s += &format!("\n  member {:?} removing {:?}", m.family_class, m.removed_edges);
                    }
                    s
                });
            }
            Ok(clean)
        }
        Command::Construct { which, n, k, delta, remove } => {
            let removed = parse_edges(&remove)?;
            let (g, member) = match which {
                Construction::A => {
                    let p = ExtremalParams::new(n, k, delta)?;
                    if removed.is_empty() {
                        (build_a(&p).0, Some(make_member(&p, &[])?))
                    } else {
                        let m = make_member(&p, &removed)?;
                        (m.graph.clone(), Some(m))
                    }
                }
                Construction::M => (build_m(n, k)?, None),
                Construction::L => (build_l(n, k)?, None),
            };
            let g6 = graph6_string(&g)?;
            emit(json, json!({ "graph6": g6, "member": member }), || g6.clone());
            Ok(true)
        }
        Command::Verify { lemma, n, k, delta, remove, input } => {
            let removed = parse_edges(&remove)?;
            let reports: Vec<LemmaReport> = match lemma {
                Lemma::Density => read_graphs(&input)?.iter().map(|g| check_lemma_2_3(g, k, delta)).collect(),
                Lemma::FirstFamily => vec![check_lemma_3_1_with(&params(n, k, delta)?, &removed, tol)?],
                Lemma::SecondFamily => vec![check_lemma_3_2_with(&params(n, k, delta)?, &removed, tol)?],
                Lemma::XEntries => {
                    let m = make_member(&params(n, k, delta)?, &removed)?;
                    vec![check_lemma_3_3_with(&m, tol.min(EIGENVECTOR_TOLERANCE))?]
                }
                Lemma::Orderings | Lemma::Spread => {
                    let p = params(n, k, delta)?;
                    let m = make_member(&p, &removed)?;
                    let (_, spectra) = check_lemma_3_8_with(&p, tol)?;
                    let role = match find_maximizer(&p, &spectra) {
                        Some(i) if spectra[i].edges == m.removed_edges => MemberRole::EmpiricalMaximizer {
                            representatives: spectra.iter().filter(|s| !s.skipped).count(),
                        },
                        _ => MemberRole::Other,
                    };
                    let etol = tol.min(EIGENVECTOR_TOLERANCE);
                    if matches!(lemma, Lemma::Orderings) {
                        vec![check_orderings_with(&m, role, etol)?]
                    } else {
                        vec![check_lemma_3_7_with(&m, role, etol)?]
                    }
                }
                Lemma::UpperBound => vec![check_lemma_3_8_with(&params(n, k, delta)?, tol)?.0],
                Lemma::Chain => {
                    let r = verify_theorem_proof_chain(&params(n, k, delta)?);
                    emit(json, serde_json::to_value(&r)?, || {
                        format!(
                            "chain {} (order threshold {:?}, margin {}, chain from n = {})",
                            if r.chain_holds { "holds" } else { "breaks" },
                            r.order_threshold,
                            r.margin,
                            r.smallest_order_for_chain
                        )
                    });
                    return Ok(r.chain_holds);
                }
            };
            let clean = reports.iter().all(|r| r.passed() || r.status == qconn_core::certifier::CheckStatus::Skipped);
            for r in &reports {
                let mut value = serde_json::to_value(r)?;
                if let Some(obj) = value.as_object_mut() {
                    obj.remove("eigenvector");
                }
                emit(json, value, || report_text(r));
            }
            Ok(clean)
        }
        Command::Sweep { mode, k, delta, n_min, n_max, seed, budget, input, output, lenient } => {
            let config = CampaignConfig {
                mode: mode.into(),
                k,
                delta,
                n_min,
                n_max,
                tolerance: tol,
                seed,
                budget,
                input,
                output: output.clone(),
                lenient,
            };
            let report = run_campaign(&config)?;
            let c = report.counters;
            if output.is_none() && json {
                out(&report.to_json());
            } else {
                out(&format!(
                    "tested {} passed {} failed {} skipped {} undecided {} violations {} ({:.1}s)",
                    c.tested,
                    c.passed,
                    c.failed,
                    c.skipped,
                    c.undecided,
                    report.violations.len(),
                    report.wall_clock_seconds
                ));
                for v in &report.violations {
                    out(&format!("  violation {} n={} {}: {}", v.graph6, v.n, serde_json::to_value(v.verdict)?, v.finding));
                }
            }
            Ok(report.clean())
        }
        Command::Encode { input } => {
            let text = read_text(&input)?;
            let mut tokens = text.split_whitespace().map(|t| t.parse::<usize>());
            let n = tokens.next().ok_or_else(|| anyhow!("missing vertex count"))??;
            let rest: Vec<usize> = tokens.collect::<Result<_, _>>()?;
            if rest.len() % 2 != 0 {
                bail!("odd number of endpoints");
            }
            let g = Graph::from_edges(n, rest.chunks(2).map(|c| (c[0], c[1])))?;
            let g6 = graph6_string(&g)?;
            emit(json, json!({ "graph6": g6 }), || g6.clone());
            Ok(true)
        }
        Command::Decode { input } => {
            for g in read_graphs(&input)? {
                let edges: Vec<(usize, usize)> = g.edges().collect();
                emit(json, json!({ "n": g.order(), "edges": edges }), || {
                    let mut s = g.order().to_string();
                    for (u, v) in &edges {
                        s += &format!("\n{u} {v}");
                    }
                    s
                });
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qconn: {e:#}");
            ExitCode::from(2)
        }
    }
}
