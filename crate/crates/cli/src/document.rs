//! Line-oriented graph documents.
//!
//! ```text
//! # generating graph with coefficients
//! nodes: 1 2 3 4
//! 1 <- 2 : 0.4
//! 1 <- 4 : 0.5
//! 2 <- 3
//! var 3 : 1.5
//! ```
//!
//! `nodes:` gives the generating order (responses first). A document with
//! `u:`/`v:` lines, dashed lines or full lines is a summary graph; one with
//! arrows only is a parent graph. Arrows may carry a `: <real>` coefficient
//! and nodes a `var <id> : <real>` residual variance, in which case the
//! document also carries a linear triangular system.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use sumgraph_core::gaussian_oracle::TriangularSystem;
use sumgraph_core::graph_model::{Edge, EdgeKind, EdgeList};
use sumgraph_core::{NodeId, ParentGraph, SummaryGraph};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DocumentError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Graph(#[from] sumgraph_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> DocumentError {
    DocumentError::Syntax { line, msg: msg.into() }
}

#[derive(Debug, Clone)]
pub enum Graph {
    Parent(ParentGraph),
    Summary(SummaryGraph),
}

impl Graph {
    /// The graph as a summary graph; a parent graph becomes one with every
    /// node in `u`.
    pub fn to_summary(&self) -> SummaryGraph {
        match self {
            Graph::Parent(g) => g.to_summary(),
            Graph::Summary(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub graph: Graph,
    /// Present when the document annotates coefficients or variances.
    pub system: Option<TriangularSystem>,
}

fn parse_node(tok: &str, line: usize) -> Result<NodeId, DocumentError> {
    tok.parse::<usize>().map(NodeId).map_err(|_| syntax(line, format!("bad node id `{tok}`")))
}

fn parse_nodes(rest: &str, line: usize) -> Result<Vec<NodeId>, DocumentError> {
    rest.split_whitespace().map(|t| parse_node(t, line)).collect()
}

fn parse_real(tok: &str, line: usize) -> Result<f64, DocumentError> {
    match tok.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(syntax(line, format!("bad number `{}`", tok.trim()))),
    }
}

#[derive(Default)]
struct Raw {
    nodes: Option<(usize, Vec<NodeId>)>,
    u: Option<(usize, Vec<NodeId>)>,
    v: Option<(usize, Vec<NodeId>)>,
    edges: Vec<(usize, Edge, Option<f64>)>,
    vars: Vec<(usize, NodeId, f64)>,
}

fn header(slot: &mut Option<(usize, Vec<NodeId>)>, name: &str, rest: &str, line: usize) -> Result<(), DocumentError> {
    if slot.is_some() {
        return Err(syntax(line, format!("second `{name}:` line")));
    }
    *slot = Some((line, parse_nodes(rest, line)?));
    Ok(())
}

fn lex(text: &str) -> Result<Raw, DocumentError> {
    let mut raw = Raw::default();
    let mut seen: BTreeMap<Edge, usize> = BTreeMap::new();
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, rest)) = content.split_once(':') {
            match key.trim() {
                "nodes" => {
                    header(&mut raw.nodes, "nodes", rest, line)?;
                    continue;
                }
                "u" => {
                    header(&mut raw.u, "u", rest, line)?;
                    continue;
                }
                "v" => {
                    header(&mut raw.v, "v", rest, line)?;
                    continue;
                }
                _ => {}
            }
        }
        if let Some(rest) = content.strip_prefix("var ") {
            let (id, value) = rest.split_once(':').ok_or_else(|| syntax(line, "expected `var <id> : <real>`"))?;
            raw.vars.push((line, parse_node(id.trim(), line)?, parse_real(value, line)?));
            continue;
        }
        let (body, coef) = match content.split_once(':') {
            Some((b, c)) => (b, Some(parse_real(c, line)?)),
            None => (content, None),
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let [a, sym, b] = toks[..] else {
            return Err(syntax(line, format!("cannot read `{content}`")));
        };
        let (a, b) = (parse_node(a, line)?, parse_node(b, line)?);
        if a == b {
            return Err(syntax(line, format!("self-loop at {a}")));
        }
        let edge = match sym {
            "<-" => Edge::arrow(a, b),
            "->" => Edge::arrow(b, a),
            "--" => Edge::full(a, b),
            "~~" => Edge::dashed(a, b),
            _ => return Err(syntax(line, format!("unknown edge symbol `{sym}`"))),
        };
        if coef.is_some() && edge.kind != EdgeKind::Arrow {
            return Err(syntax(line, "only arrows carry coefficients"));
        }
        if let Some(first) = seen.insert(edge.normalized(), line) {
            return Err(syntax(line, format!("duplicate edge {} (first on line {first})", edge.normalized())));
        }
        raw.edges.push((line, edge, coef));
    }
    Ok(raw)
}

/// Parses a graph document.
pub fn parse_graph(text: &str) -> Result<GraphDocument, DocumentError> {
    let raw = lex(text)?;
    let declared: Option<Vec<NodeId>> = raw.nodes.as_ref().map(|(_, n)| n.clone());
    let is_summary = raw.u.is_some() || raw.v.is_some() || raw.edges.iter().any(|(_, e, _)| e.kind != EdgeKind::Arrow);

    // every edge endpoint must be declared when a node list is given
    let known: BTreeSet<NodeId> = declared
        .iter()
        .flatten()
        .chain(raw.u.iter().flat_map(|(_, n)| n))
        .chain(raw.v.iter().flat_map(|(_, n)| n))
        .copied()
        .collect();
    if !known.is_empty() {
        for (line, e, _) in &raw.edges {
            for x in [e.head, e.tail] {
                if !known.contains(&x) {
                    return Err(syntax(*line, format!("node {x} is not declared")));
                }
            }
        }
        for (line, x, _) in &raw.vars {
            if !known.contains(x) {
                return Err(syntax(*line, format!("node {x} is not declared")));
            }
        }
    }

    if is_summary {
        if let Some((line, _, _)) = raw.edges.iter().find(|(_, _, c)| c.is_some()) {
            return Err(syntax(*line, "coefficients are only allowed in parent graphs"));
        }
        if let Some((line, _, _)) = raw.vars.first() {
            return Err(syntax(*line, "variances are only allowed in parent graphs"));
        }
        let u_line = raw.u.as_ref().map(|(l, _)| *l).unwrap_or(0);
        let (u, v) = match (raw.u, raw.v) {
            (Some((_, u)), Some((_, v))) => (u, v),
            (Some((_, u)), None) => (u, Vec::new()),
            (None, Some((_, v))) => {
                let rest = declared.clone().unwrap_or_default().into_iter().filter(|x| !v.contains(x)).collect();
                (rest, v)
            }
            (None, None) => {
                if let Some((line, _, _)) = raw.edges.iter().find(|(_, e, _)| e.kind == EdgeKind::Full) {
                    return Err(syntax(*line, "full lines need a `u:`/`v:` partition"));
                }
                (match declared.clone() {
                    Some(d) => d,
                    None => endpoints(&raw.edges)?,
                }, Vec::new())
            }
        };
        if let Some(nodes) = &declared {
            let a: BTreeSet<NodeId> = nodes.iter().copied().collect();
            let b: BTreeSet<NodeId> = u.iter().chain(&v).copied().collect();
            if a != b {
                return Err(syntax(u_line.max(1), "`u:` and `v:` do not partition `nodes:`"));
            }
        }
        let list = EdgeList::new(raw.edges.iter().map(|(_, e, _)| *e).collect());
        let g = SummaryGraph::from_edge_list(&list, &u, &v)?;
        return Ok(GraphDocument { graph: Graph::Summary(g), system: None });
    }

    let order = match declared {
        Some(d) => d,
        None => endpoints(&raw.edges)?,
    };
    let arrows: Vec<(NodeId, NodeId)> = raw.edges.iter().map(|(_, e, _)| (e.head, e.tail)).collect();
    let g = match ParentGraph::from_arrows(order.clone(), &arrows) {
        Ok(g) => g,
        Err(e) => {
            let pos = |x: NodeId| order.iter().position(|&y| y == x);
            let bad = raw.edges.iter().find(|(_, e, _)| pos(e.tail) < pos(e.head));
            return Err(match bad {
                Some((line, e, _)) => syntax(*line, format!("arrow {e} points against the order of `nodes:`")),
                None => e.into(),
            });
        }
    };
    let annotated = raw.edges.iter().filter(|(_, _, c)| c.is_some()).count();
    let system = if annotated == 0 && raw.vars.is_empty() {
        None
    } else {
        let mut seen = BTreeSet::new();
        for (line, x, var) in &raw.vars {
            if !seen.insert(*x) {
                return Err(syntax(*line, format!("second variance for {x}")));
            }
            if *var <= 0.0 {
                return Err(syntax(*line, format!("variance of {x} must be positive")));
            }
        }
        if annotated != raw.edges.len() {
            let line = raw.edges.iter().find(|(_, _, c)| c.is_none()).map(|(l, _, _)| *l).unwrap_or(0);
            return Err(syntax(line, "either every arrow carries a coefficient or none does"));
        }
        if let Some((line, _, _)) = raw.edges.iter().find(|(_, _, c)| *c == Some(0.0)) {
            return Err(syntax(*line, "a zero coefficient contradicts the arrow"));
        }
        let coefs: Vec<(NodeId, NodeId, f64)> = raw.edges.iter().map(|(_, e, c)| (e.head, e.tail, c.unwrap_or(0.0))).collect();
        let vars: Vec<(NodeId, f64)> = raw.vars.iter().map(|(_, x, v)| (*x, *v)).collect();
        Some(TriangularSystem::from_coefficients(&g, &coefs, &vars)?)
    };
    Ok(GraphDocument { graph: Graph::Parent(g), system })
}

/// Edge endpoints in a generating order: each node after every node it
/// points into, smallest id first among the free ones.
fn endpoints(edges: &[(usize, Edge, Option<f64>)]) -> Result<Vec<NodeId>, DocumentError> {
    let mut left: BTreeSet<NodeId> = edges.iter().flat_map(|(_, e, _)| [e.head, e.tail]).collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let free = left.iter().copied().find(|&x| !edges.iter().any(|(_, e, _)| e.tail == x && left.contains(&e.head)));
        let Some(x) = free else {
            return Err(sumgraph_core::Error::Cyclic.into());
        };
        left.remove(&x);
        out.push(x);
    }
    Ok(out)
}

fn node_line(out: &mut String, key: &str, nodes: &[NodeId]) {
    out.push_str(key);
    out.push(':');
    for n in nodes {
        write!(out, " {n}").unwrap();
    }
    out.push('\n');
}

/// Sort key of the canonical listing: `(min, max, kind)`.
fn edge_key(e: &Edge) -> (NodeId, NodeId, EdgeKind) {
    (e.head.min(e.tail), e.head.max(e.tail), e.kind)
}

fn sorted(mut edges: Vec<Edge>) -> Vec<Edge> {
    edges.iter_mut().for_each(|e| *e = e.normalized());
    edges.sort_by_key(edge_key);
    edges
}

/// Canonical text of a parent graph: `nodes:` in generating order, then
/// arrows sorted by `(min, max)`, then variances in node order.
pub fn emit_parent(g: &ParentGraph, system: Option<&TriangularSystem>) -> String {
    let mut out = String::new();
    node_line(&mut out, "nodes", g.order());
    let edges = sorted(g.arrows().into_iter().map(|(h, t)| Edge::arrow(h, t)).collect());
    for e in edges {
        match system.and_then(|s| s.coefficient(e.head, e.tail)) {
            Some(b) => writeln!(out, "{e} : {b}").unwrap(),
            None => writeln!(out, "{e}").unwrap(),
        }
    }
    if let Some(s) = system {
        for (x, var) in s.order().iter().zip(s.delta()) {
            writeln!(out, "var {x} : {var}").unwrap();
        }
    }
    out
}

/// Canonical text of a summary graph: nodes, `u` and `v` ascending, edges
/// sorted by `(min, max, kind)`.
pub fn emit_summary(g: &SummaryGraph) -> String {
    let mut out = String::new();
    let asc = |xs: &[NodeId]| {
        let mut v = xs.to_vec();
        v.sort_unstable();
        v
    };
    node_line(&mut out, "nodes", &asc(&g.nodes()));
    node_line(&mut out, "u", &asc(g.u_nodes()));
    node_line(&mut out, "v", &asc(g.v_nodes()));
    for e in sorted(g.to_edge_list().edges) {
        writeln!(out, "{e}").unwrap();
    }
    out
}

pub fn emit_document(doc: &GraphDocument) -> String {
    match &doc.graph {
        Graph::Parent(g) => emit_parent(g, doc.system.as_ref()),
        Graph::Summary(s) => emit_summary(s),
    }
}
