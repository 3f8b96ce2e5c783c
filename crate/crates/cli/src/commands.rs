//! Subcommands. Each returns its standard output, diagnostic output and exit
//! code so that tests can drive them without a process.

use std::fmt::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sumgraph_core::confounding::{audit_edge, audit_summary_edge, ConfoundingReport, ConfoundingStatus};
use sumgraph_core::gaussian_oracle::verify_structural_zeros;
use sumgraph_core::graph_model::classify;
use sumgraph_core::queries::{equivalence_obstruction, implies_independence, IndependenceQuery, Verdict};
use sumgraph_core::transform::{mag_from_summary, stepwise, summary_from_parent, summary_from_summary, Step};
use sumgraph_core::{EdgeKind, MarginalConditionSpec, NodeId, SummaryGraph};

use crate::document::{emit_summary, parse_graph, Graph, GraphDocument};

#[derive(Debug, Parser)]
#[command(name = "sumgraph", version, about = "Summary graphs, MAGs and confounding audits for generating DAGs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Reduction {
    /// Nodes to condition on, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub condition: Vec<usize>,
    /// Nodes to marginalise over, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub marginalise: Vec<usize>,
}

impl Reduction {
    fn spec(&self) -> MarginalConditionSpec {
        MarginalConditionSpec::new(ids(&self.condition), ids(&self.marginalise))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summary graph after conditioning and marginalising.
    Transform {
        file: PathBuf,
        #[command(flatten)]
        reduce: Reduction,
        /// Go one node at a time and print each intermediate graph to the
        /// diagnostic stream.
        #[arg(long)]
        stepwise: bool,
    },
    /// Whether the graph implies `alpha _||_ beta | given`. Exit code 0 if it
    /// does, 1 if not.
    Query {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        given: Vec<usize>,
        #[command(flatten)]
        reduce: Reduction,
    },
    /// Maximal ancestral graph of the (reduced) graph.
    Mag {
        file: PathBuf,
        #[command(flatten)]
        reduce: Reduction,
    },
    /// Regression graph or not, semi-directed cycles and double edges.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        reduce: Reduction,
    },
    /// Distortion of generating dependences in the MAG model.
    Audit {
        file: PathBuf,
        #[command(flatten)]
        reduce: Reduction,
        /// Single arrow `i,k` read `i <- k`; all arrows by default.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        edge: Option<Vec<usize>>,
        /// Generating order of `u` for a summary graph file, comma separated.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Structural zeros of the summary graph against sampled linear systems.
    /// Exit code 0 iff there is no violation.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        reduce: Reduction,
    },
    /// Searches for configurations that rule out Markov equivalence to a DAG.
    Equivalence {
        file: PathBuf,
        #[command(flatten)]
        reduce: Reduction,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }

    fn error(msg: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: 2 }
    }
}

type Failure = String;

fn ids(xs: &[usize]) -> Vec<NodeId> {
    xs.iter().map(|&x| NodeId(x)).collect()
}

fn load(path: &PathBuf) -> Result<GraphDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn reduce(doc: &GraphDocument, spec: &MarginalConditionSpec) -> Result<SummaryGraph, Failure> {
    let out = match &doc.graph {
        Graph::Parent(g) => summary_from_parent(g, spec),
        Graph::Summary(s) if spec.is_empty() => Ok(s.clone()),
        Graph::Summary(s) => summary_from_summary(s, spec),
    };
    out.map_err(|e| e.to_string())
}

fn step_label(step: Step) -> String {
    match step {
        Step::Condition(n) => format!("condition on {n}"),
        Step::Marginalise(n) => format!("marginalise over {n}"),
    }
}

fn transform(doc: &GraphDocument, spec: &MarginalConditionSpec, by_steps: bool) -> Result<Outcome, Failure> {
    if !by_steps {
        return Ok(Outcome::ok(emit_summary(&reduce(doc, spec)?)));
    }
    let mut log = String::new();
    let start = doc.graph.to_summary();
    let out = stepwise(&start, spec, None, |step, g| {
        writeln!(log, "# after: {}", step_label(step)).unwrap();
        log.push_str(&emit_summary(g));
    })
    .map_err(|e| e.to_string())?;
    Ok(Outcome { stdout: emit_summary(&out), stderr: log, code: 0 })
}

fn query(doc: &GraphDocument, q: IndependenceQuery, spec: &MarginalConditionSpec) -> Result<Outcome, Failure> {
    let g = reduce(doc, spec)?;
    Ok(match implies_independence(&g, &q).map_err(|e| e.to_string())? {
        Verdict::Implied => Outcome::ok("IMPLIED\n".into()),
        Verdict::NotImplied(w) => Outcome { stdout: format!("NOT IMPLIED via {w}\n"), stderr: String::new(), code: 1 },
    })
}

fn classify_text(g: &SummaryGraph) -> String {
    let c = classify(g);
    let mut out = String::new();
    let class = if c.is_regression_graph() { "regression graph" } else { "summary graph" };
    writeln!(out, "class: {class}").unwrap();
    let more = if c.cycles_truncated { " (list truncated)" } else { "" };
    writeln!(out, "semi-directed cycles: {}{more}", c.semi_directed_cycles.len()).unwrap();
    for cycle in &c.semi_directed_cycles {
        writeln!(out, "  {cycle}").unwrap();
    }
    writeln!(out, "double edges: {}", c.double_edges.len()).unwrap();
    for (i, k) in &c.double_edges {
        writeln!(out, "  {i} <- {k} and {i} ~~ {k}").unwrap();
    }
    out
}

/// `STATUS`, followed by the witnesses of a distortion.
pub fn audit_line(r: &ConfoundingReport) -> String {
    let mut s = r.status.to_string();
    let ws: Vec<String> = r.witnesses().map(|w| w.to_string()).collect();
    if !ws.is_empty() {
        write!(s, " via {}", ws.join(" and ")).unwrap();
    } else if r.status == ConfoundingStatus::DirectlyConfounded && r.double_edge {
        write!(s, " via double edge {} <- {} and {} ~~ {}", r.edge.0, r.edge.1, r.edge.0, r.edge.1).unwrap();
    }
    s
}

fn audit(doc: &GraphDocument, spec: &MarginalConditionSpec, edge: Option<(NodeId, NodeId)>, order: Option<Vec<NodeId>>) -> Result<Outcome, Failure> {
    let reports: Vec<ConfoundingReport> = match &doc.graph {
        Graph::Parent(g) => {
            let edges = match edge {
                Some(e) => vec![e],
                None => g.arrows(),
            };
            edges.into_iter().map(|e| audit_edge(g, spec, e)).collect::<Result<_, _>>().map_err(|e| e.to_string())?
        }
        Graph::Summary(_) => {
            let mut s = reduce(doc, spec)?;
            if let Some(order) = order {
                s = reorder(&s, &order)?;
            }
            let arrows: Vec<(NodeId, NodeId)> = match edge {
                Some(e) => vec![e],
                None => {
                    let u = s.u_nodes();
                    s.to_edge_list()
                        .edges
                        .into_iter()
                        .filter(|e| e.kind == EdgeKind::Arrow && u.contains(&e.tail))
                        .map(|e| (e.head, e.tail))
                        .collect()
                }
            };
            arrows.into_iter().map(|e| audit_summary_edge(&s, e)).collect::<Result<_, _>>().map_err(|e| e.to_string())?
        }
    };
    let mut out = String::new();
    for r in &reports {
        if edge.is_some() {
            writeln!(out, "{}", audit_line(r)).unwrap();
        } else {
            writeln!(out, "{} <- {}: {}", r.edge.0, r.edge.1, audit_line(r)).unwrap();
        }
    }
    Ok(Outcome::ok(out))
}

/// Same graph with `u` stored in the given order, which must list `u` and
/// put every node before the nodes it points from.
fn reorder(s: &SummaryGraph, order: &[NodeId]) -> Result<SummaryGraph, Failure> {
    let mut a = order.to_vec();
    let mut b = s.u_nodes().to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err("--order must list exactly the nodes of u".into());
    }
    let pos = |x: NodeId| order.iter().position(|&y| y == x);
    for e in s.to_edge_list().edges {
        if e.kind == EdgeKind::Arrow && pos(e.tail).is_some() && pos(e.tail) < pos(e.head) {
            return Err(format!("--order puts {} before {}, against the arrow {e}", e.tail, e.head));
        }
    }
    SummaryGraph::from_edge_list(&s.to_edge_list(), order, s.v_nodes()).map_err(|e| e.to_string())
}

fn verify(doc: &GraphDocument, spec: &MarginalConditionSpec, draws: usize, seed: u64) -> Result<Outcome, Failure> {
    let Graph::Parent(g) = &doc.graph else {
        return Err("verify needs a parent graph".into());
    };
    let report = verify_structural_zeros(g, spec, draws, seed).map_err(|e| e.to_string())?;
    let code = if report.is_clean() { 0 } else { 1 };
    Ok(Outcome { stdout: format!("{report}\n"), stderr: String::new(), code })
}

fn equivalence(g: &SummaryGraph) -> Result<Outcome, Failure> {
    Ok(Outcome::ok(match equivalence_obstruction(g).map_err(|e| e.to_string())? {
        Some(o) => format!("obstruction: {o}\n"),
        None => "no obstruction found\n".into(),
    }))
}

fn pair(xs: &[usize], flag: &str) -> Result<(NodeId, NodeId), Failure> {
    match xs {
        [i, k] => Ok((NodeId(*i), NodeId(*k))),
        _ => Err(format!("{flag} takes two nodes `i,k`")),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Transform { file, reduce: r, stepwise } => transform(&load(file)?, &r.spec(), *stepwise),
        Command::Query { file, alpha, beta, given, reduce: r } => {
            query(&load(file)?, IndependenceQuery::new(ids(alpha), ids(beta), ids(given)), &r.spec())
        }
        Command::Mag { file, reduce: r } => {
            let g = reduce(&load(file)?, &r.spec())?;
            let mag = mag_from_summary(&g).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(emit_summary(&mag)))
        }
        Command::Classify { file, reduce: r } => Ok(Outcome::ok(classify_text(&reduce(&load(file)?, &r.spec())?))),
        Command::Audit { file, reduce: r, edge, order } => {
            let edge = edge.as_deref().map(|e| pair(e, "--edge")).transpose()?;
            audit(&load(file)?, &r.spec(), edge, order.as_deref().map(ids))
        }
        Command::Verify { file, draws, seed, reduce: r } => verify(&load(file)?, &r.spec(), *draws, *seed),
        Command::Equivalence { file, reduce: r } => equivalence(&reduce(&load(file)?, &r.spec())?),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    dispatch(cli).unwrap_or_else(Outcome::error)
}
