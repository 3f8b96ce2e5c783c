//! Parent graphs, summary graphs and MAGs, their validation and conversion
//! between edge lists and edge-matrix components.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use crate::edge_matrix::BinaryMatrix;
use crate::error::{Error, Result};
use crate::mixed::Mixed;
use crate::transform::{MarginalConditionSpec, SplitRecord};

/// Node label. Graphs refer to nodes by id; matrix rows follow each graph's
/// stored node order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge types. The derived order (arrow, full, dashed) is the tie-break order
/// used for witnesses and canonical listings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Arrow,
    Full,
    Dashed,
}

/// One edge. For arrows the edge reads `head <- tail`; for full and dashed
/// lines the two ends are interchangeable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub head: NodeId,
    pub tail: NodeId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn arrow(head: NodeId, tail: NodeId) -> Self {
        Edge { head, tail, kind: EdgeKind::Arrow }
    }

    pub fn full(a: NodeId, b: NodeId) -> Self {
        Edge { head: a, tail: b, kind: EdgeKind::Full }
    }

    pub fn dashed(a: NodeId, b: NodeId) -> Self {
        Edge { head: a, tail: b, kind: EdgeKind::Dashed }
    }

    /// Same edge with undirected ends ordered by id.
    pub fn normalized(self) -> Self {
        match self.kind {
            EdgeKind::Arrow => self,
            _ if self.head <= self.tail => self,
            _ => Edge { head: self.tail, tail: self.head, kind: self.kind },
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.kind {
            EdgeKind::Arrow => "<-",
            EdgeKind::Full => "--",
            EdgeKind::Dashed => "~~",
        };
        write!(f, "{} {} {}", self.head, sym, self.tail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeList {
    pub edges: Vec<Edge>,
}

impl EdgeList {
    pub fn new(edges: Vec<Edge>) -> Self {
        EdgeList { edges }
    }

    /// Normalized, sorted and de-duplicated copy of the edges.
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().map(|e| e.normalized()).collect()
    }
}

/// How two consecutive path nodes are joined, read from the earlier node to
/// the later one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    /// `a <- b`
    IntoPrev,
    /// `a -> b`
    IntoNext,
    Full,
    Dashed,
}

impl Link {
    pub fn symbol(self) -> &'static str {
        match self {
            Link::IntoPrev => "<-",
            Link::IntoNext => "->",
            Link::Full => "--",
            Link::Dashed => "~~",
        }
    }

    pub fn kind(self) -> EdgeKind {
        match self {
            Link::IntoPrev | Link::IntoNext => EdgeKind::Arrow,
            Link::Full => EdgeKind::Full,
            Link::Dashed => EdgeKind::Dashed,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Link::IntoPrev => Link::IntoNext,
            Link::IntoNext => Link::IntoPrev,
            l => l,
        }
    }

    /// Whether the end of this link at the earlier node is an arrowhead or a dash.
    pub(crate) fn head_at_prev(self) -> bool {
        matches!(self, Link::IntoPrev | Link::Dashed)
    }

    /// Whether the end of this link at the later node is an arrowhead or a dash.
    pub(crate) fn head_at_next(self) -> bool {
        matches!(self, Link::IntoNext | Link::Dashed)
    }
}

/// Sequence of nodes joined by edges, `links.len() == nodes.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub links: Vec<Link>,
}

impl Path {
    pub fn reversed(&self) -> Path {
        Path {
            nodes: self.nodes.iter().rev().copied().collect(),
            links: self.links.iter().rev().map(|l| l.reversed()).collect(),
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, n) in self.nodes.iter().enumerate() {
            if j > 0 {
                write!(f, " {} ", self.links[j - 1].symbol())?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BelowDiagonal { matrix: &'static str, row: NodeId, col: NodeId },
    DiagonalNotUnit { matrix: &'static str, node: NodeId },
    Asymmetric { matrix: &'static str, row: NodeId, col: NodeId },
    DuplicateNode(NodeId),
    Shape(String),
    Placement(Edge),
    UnknownEndpoint(Edge),
    DirectedCycle,
    Provenance(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BelowDiagonal { matrix, row, col } => {
                write!(f, "{matrix}: one below the diagonal at ({row},{col})")
            }
            Violation::DiagonalNotUnit { matrix, node } => write!(f, "{matrix}: diagonal entry of {node} is not one"),
            Violation::Asymmetric { matrix, row, col } => write!(f, "{matrix}: asymmetric at ({row},{col})"),
            Violation::DuplicateNode(n) => write!(f, "node {n} listed twice"),
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::Placement(e) => write!(f, "edge {e} is not allowed between its endpoints' blocks"),
            Violation::UnknownEndpoint(e) => write!(f, "edge {e} has an endpoint outside the node set"),
            Violation::DirectedCycle => write!(f, "arrows within u form a directed cycle"),
            Violation::Provenance(s) => write!(f, "provenance: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Set for parent graphs only.
    pub connected: Option<bool>,
    /// Conditions that structure alone cannot confirm.
    pub assumptions: Vec<&'static str>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidInput(format!("{v}"))),
        }
    }
}

fn duplicates(nodes: &[NodeId]) -> Vec<NodeId> {
    let mut seen = BTreeSet::new();
    nodes.iter().filter(|n| !seen.insert(**n)).copied().collect()
}

/// Directed acyclic generating graph with a fixed generating order. Index 0
/// of the order is the first response; parents always come later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentGraph {
    order: Vec<NodeId>,
    amat: BinaryMatrix,
}

impl ParentGraph {
    /// Wraps an edge matrix over `order`. Only shape and node uniqueness are
    /// checked here; see [`validate_parent`] for the rest.
    pub fn from_matrix(order: Vec<NodeId>, amat: BinaryMatrix) -> Result<Self> {
        if amat.rows() != order.len() || amat.cols() != order.len() {
            return Err(Error::Shape(format!(
                "edge matrix is {}x{} for {} nodes",
                amat.rows(),
                amat.cols(),
                order.len()
            )));
        }
        if let Some(&d) = duplicates(&order).first() {
            return Err(Error::InvalidInput(format!("node {d} listed twice")));
        }
        Ok(ParentGraph { order, amat })
    }

    /// Builds the graph from arrows `(head, tail)`, i.e. `head <- tail`.
    /// Self-edges are dropped; an arrow whose tail comes before its head in
    /// `order` is rejected.
    pub fn from_arrows(order: Vec<NodeId>, arrows: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut amat = BinaryMatrix::identity(order.len());
        let pos = |n: NodeId| order.iter().position(|&x| x == n).ok_or(Error::UnknownNode(n));
        for &(head, tail) in arrows {
            let (i, k) = (pos(head)?, pos(tail)?);
            if i == k {
                continue;
            }
            if k < i {
                return Err(Error::InvalidInput(format!(
                    "arrow {head} <- {tail} points against the generating order"
                )));
            }
            amat.set(i, k, true);
        }
        Self::from_matrix(order, amat)
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn amat(&self) -> &BinaryMatrix {
        &self.amat
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    pub fn position(&self, n: NodeId) -> Option<usize> {
        self.order.iter().position(|&x| x == n)
    }

    pub fn has_arrow(&self, head: NodeId, tail: NodeId) -> bool {
        match (self.position(head), self.position(tail)) {
            (Some(i), Some(k)) => i != k && self.amat.get(i, k),
            _ => false,
        }
    }

    /// Arrows as `(head, tail)` pairs in row-major order.
    pub fn arrows(&self) -> Vec<(NodeId, NodeId)> {
        self.amat.off_diagonal_ones().map(|(i, k)| (self.order[i], self.order[k])).collect()
    }

    #[allow(clippy::needless_range_loop)]
    pub fn is_connected(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for k in 0..n {
                if !seen[k] && (self.amat.get(i, k) || self.amat.get(k, i)) {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_parent(self)
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        validate_parent(self).into_result()
    }

    /// The graph read as a summary graph with `u` = all nodes and no dashed edges.
    pub fn to_summary(&self) -> SummaryGraph {
        let n = self.dim();
        SummaryGraph {
            u: self.order.clone(),
            v: Vec::new(),
            h_uu: self.amat.clone(),
            h_uv: BinaryMatrix::zeros(n, 0),
            w_uu: BinaryMatrix::identity(n),
            s_vv: BinaryMatrix::zeros(0, 0),
            provenance: None,
        }
    }
}

pub fn validate_parent(g: &ParentGraph) -> ValidationReport {
    let mut report = ValidationReport {
        connected: Some(g.is_connected()),
        assumptions: vec!["edge-minimality of the generating distribution is assumed, not checked"],
        ..Default::default()
    };
    for i in 0..g.dim() {
        if !g.amat.get(i, i) {
            report.violations.push(Violation::DiagonalNotUnit { matrix: "A", node: g.order[i] });
        }
        for k in 0..i {
            if g.amat.get(i, k) {
                report.violations.push(Violation::BelowDiagonal { matrix: "A", row: g.order[i], col: g.order[k] });
            }
        }
    }
    report
}

/// Where a summary graph came from: the generating graph, the combined
/// conditioning/marginalising sets applied to it, and the resulting split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub parent: ParentGraph,
    pub spec: MarginalConditionSpec,
    pub split: SplitRecord,
}

/// Graph on `N = (u, v)`: arrows and dashed lines within `u`, arrows from `v`
/// into `u`, full lines within `v`. A pair in `u` carrying both an arrow and
/// a dashed line is a double edge.
#[derive(Debug, Clone)]
pub struct SummaryGraph {
    pub(crate) u: Vec<NodeId>,
    pub(crate) v: Vec<NodeId>,
    pub(crate) h_uu: BinaryMatrix,
    pub(crate) h_uv: BinaryMatrix,
    pub(crate) w_uu: BinaryMatrix,
    pub(crate) s_vv: BinaryMatrix,
    pub(crate) provenance: Option<Box<Provenance>>,
}

impl SummaryGraph {
    /// Wraps the four components. Only shapes and node uniqueness are checked;
    /// see [`validate_summary`] for the remaining invariants.
    pub fn from_components(
        u: Vec<NodeId>,
        v: Vec<NodeId>,
        h_uu: BinaryMatrix,
        h_uv: BinaryMatrix,
        w_uu: BinaryMatrix,
        s_vv: BinaryMatrix,
    ) -> Result<Self> {
        let (du, dv) = (u.len(), v.len());
        let shapes = [
            ("h_uu", &h_uu, du, du),
            ("h_uv", &h_uv, du, dv),
            ("w_uu", &w_uu, du, du),
            ("s_vv", &s_vv, dv, dv),
        ];
        for (name, m, r, c) in shapes {
            if m.rows() != r || m.cols() != c {
                return Err(Error::Shape(format!("{name} is {}x{}, expected {r}x{c}", m.rows(), m.cols())));
            }
        }
        let all: Vec<NodeId> = u.iter().chain(&v).copied().collect();
        if let Some(&d) = duplicates(&all).first() {
            return Err(Error::InvalidInput(format!("node {d} listed twice")));
        }
        Ok(SummaryGraph { u, v, h_uu, h_uv, w_uu, s_vv, provenance: None })
    }

    /// Builds a graph from an edge list. The u-order is the given one when it
    /// is topological for the arrows, otherwise the nearest topological order.
    pub fn from_edge_list(list: &EdgeList, u_nodes: &[NodeId], v_nodes: &[NodeId]) -> Result<Self> {
        let report = validate_placement(list, u_nodes, v_nodes);
        if let Some(v) = report.violations.first() {
            return Err(match v {
                Violation::DuplicateNode(n) => Error::InvalidInput(format!("node {n} listed twice")),
                Violation::UnknownEndpoint(e) => {
                    let all: Vec<NodeId> = u_nodes.iter().chain(v_nodes).copied().collect();
                    Error::UnknownNode(if all.contains(&e.head) { e.tail } else { e.head })
                }
                other => Error::Placement(format!("{other}")),
            });
        }
        let mixed = Mixed::from_edges(u_nodes, v_nodes, &list.edges);
        mixed.to_summary()
    }

    pub fn to_edge_list(&self) -> EdgeList {
        let mut edges = Vec::new();
        for (i, k) in self.h_uu.off_diagonal_ones() {
            edges.push(Edge::arrow(self.u[i], self.u[k]));
        }
        for i in 0..self.u.len() {
            for k in 0..self.v.len() {
                if self.h_uv.get(i, k) {
                    edges.push(Edge::arrow(self.u[i], self.v[k]));
                }
            }
        }
        for (i, k) in self.w_uu.off_diagonal_ones().filter(|(i, k)| i < k) {
            edges.push(Edge::dashed(self.u[i], self.u[k]));
        }
        for (i, k) in self.s_vv.off_diagonal_ones().filter(|(i, k)| i < k) {
            edges.push(Edge::full(self.v[i], self.v[k]));
        }
        EdgeList { edges }
    }

    pub fn u_nodes(&self) -> &[NodeId] {
        &self.u
    }

    pub fn v_nodes(&self) -> &[NodeId] {
        &self.v
    }

    /// Nodes in positional order: `u` then `v`.
    pub fn nodes(&self) -> Vec<NodeId> {
        self.u.iter().chain(&self.v).copied().collect()
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.u.contains(&n) || self.v.contains(&n)
    }

    pub fn h_uu(&self) -> &BinaryMatrix {
        &self.h_uu
    }

    pub fn h_uv(&self) -> &BinaryMatrix {
        &self.h_uv
    }

    pub fn w_uu(&self) -> &BinaryMatrix {
        &self.w_uu
    }

    pub fn s_vv(&self) -> &BinaryMatrix {
        &self.s_vv
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_deref()
    }

    pub fn with_provenance(mut self, p: Option<Provenance>) -> Self {
        self.provenance = p.map(Box::new);
        self
    }

    /// Normalized set of all edges.
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.to_edge_list().edge_set()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edge_set().contains(&e.normalized())
    }

    /// Pairs joined by both an arrow and a dashed line, as `(head, tail)` of the arrow.
    pub fn double_edges(&self) -> Vec<(NodeId, NodeId)> {
        self.h_uu
            .off_diagonal_ones()
            .filter(|&(i, k)| self.w_uu.get(i, k))
            .map(|(i, k)| (self.u[i], self.u[k]))
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_summary(self)
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        validate_summary(self).into_result()
    }

    pub(crate) fn mixed(&self) -> Mixed {
        Mixed::from_summary(self)
    }
}

/// Structural equality: same `u` and `v` as sets and the same edges.
/// Stored order and provenance are ignored.
impl PartialEq for SummaryGraph {
    fn eq(&self, other: &Self) -> bool {
        let set = |x: &[NodeId]| x.iter().copied().collect::<BTreeSet<_>>();
        set(&self.u) == set(&other.u) && set(&self.v) == set(&other.v) && self.edge_set() == other.edge_set()
    }
}

impl Eq for SummaryGraph {}

pub fn validate_summary(g: &SummaryGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let all = g.nodes();
    for d in duplicates(&all) {
        report.violations.push(Violation::DuplicateNode(d));
    }
    let (du, dv) = (g.u.len(), g.v.len());
    let shapes_ok = g.h_uu.rows() == du
        && g.h_uu.cols() == du
        && g.h_uv.rows() == du
        && g.h_uv.cols() == dv
        && g.w_uu.rows() == du
        && g.w_uu.cols() == du
        && g.s_vv.rows() == dv
        && g.s_vv.cols() == dv;
    if !shapes_ok {
        report.violations.push(Violation::Shape("component shapes do not match u and v".into()));
        return report;
    }
    for i in 0..du {
        if !g.h_uu.get(i, i) {
            report.violations.push(Violation::DiagonalNotUnit { matrix: "h_uu", node: g.u[i] });
        }
        for k in 0..i {
            if g.h_uu.get(i, k) {
                report.violations.push(Violation::BelowDiagonal { matrix: "h_uu", row: g.u[i], col: g.u[k] });
            }
        }
    }
    for (name, m, nodes) in [("w_uu", &g.w_uu, &g.u), ("s_vv", &g.s_vv, &g.v)] {
        for i in 0..nodes.len() {
            if !m.get(i, i) {
                report.violations.push(Violation::DiagonalNotUnit { matrix: name, node: nodes[i] });
            }
            for k in 0..i {
                if m.get(i, k) != m.get(k, i) {
                    report.violations.push(Violation::Asymmetric { matrix: name, row: nodes[i], col: nodes[k] });
                }
            }
        }
    }
    if let Some(p) = g.provenance() {
        check_provenance(g, p, &mut report);
    }
    report
}

fn check_provenance(g: &SummaryGraph, p: &Provenance, report: &mut ValidationReport) {
    let set = |x: &[NodeId]| x.iter().copied().collect::<BTreeSet<_>>();
    if set(&g.u) != set(&p.split.u) || set(&g.v) != set(&p.split.v) {
        report.violations.push(Violation::Provenance("u/v differ from the recorded split".into()));
    }
    // every ancestor of a conditioned or v node must itself be conditioned or foster
    let keep: BTreeSet<NodeId> = p.spec.conditioning.iter().chain(&p.split.foster).copied().collect();
    let parent = &p.parent;
    let Ok(anc) = crate::edge_matrix::ancestor_closure(parent.amat()) else {
        report.violations.push(Violation::Provenance("recorded parent graph is not triangular".into()));
        return;
    };
    let seeds: Vec<NodeId> = p.spec.conditioning.iter().chain(&g.v).copied().collect();
    for s in seeds {
        let Some(i) = parent.position(s) else {
            report.violations.push(Violation::Provenance(format!("node {s} is not in the parent graph")));
            continue;
        };
        for k in 0..parent.dim() {
            let a = parent.order()[k];
            if k != i && anc.get(i, k) && !keep.contains(&a) {
                report.violations.push(Violation::Provenance(format!(
                    "ancestor {a} of {s} is neither conditioned nor a foster node"
                )));
            }
        }
    }
}

/// Checks an edge list against the block rules: arrows point into `u`,
/// dashed lines stay in `u`, full lines stay in `v`.
pub fn validate_placement(list: &EdgeList, u_nodes: &[NodeId], v_nodes: &[NodeId]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let all: Vec<NodeId> = u_nodes.iter().chain(v_nodes).copied().collect();
    for d in duplicates(&all) {
        report.violations.push(Violation::DuplicateNode(d));
    }
    let in_u = |n: NodeId| u_nodes.contains(&n);
    let in_v = |n: NodeId| v_nodes.contains(&n);
    for &e in &list.edges {
        if !(in_u(e.head) || in_v(e.head)) || !(in_u(e.tail) || in_v(e.tail)) {
            report.violations.push(Violation::UnknownEndpoint(e));
            continue;
        }
        if e.head == e.tail {
            continue;
        }
        let ok = match e.kind {
            EdgeKind::Arrow => in_u(e.head),
            EdgeKind::Dashed => in_u(e.head) && in_u(e.tail),
            EdgeKind::Full => in_v(e.head) && in_v(e.tail),
        };
        if !ok {
            report.violations.push(Violation::Placement(e));
        }
    }
    if report.violations.is_empty() && Mixed::from_edges(u_nodes, v_nodes, &list.edges).topological_u().is_none() {
        report.violations.push(Violation::DirectedCycle);
    }
    report
}

/// Summary graph with at most one edge per node pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mag(SummaryGraph);

impl Mag {
    pub fn new(g: SummaryGraph) -> Result<Self> {
        let d = g.double_edges();
        if d.is_empty() {
            Ok(Mag(g))
        } else {
            Err(Error::DoubleEdges(d))
        }
    }

    pub fn into_summary(self) -> SummaryGraph {
        self.0
    }
}

impl Deref for Mag {
    type Target = SummaryGraph;

    fn deref(&self) -> &SummaryGraph {
        &self.0
    }
}

/// A cycle listed from its first node back to it; `path.nodes` repeats the
/// first node at the end.
pub type Cycle = Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    RegressionGraph,
    SummaryGraphProper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: GraphClass,
    pub semi_directed_cycles: Vec<Cycle>,
    /// True when the cycle listing stopped at its cap.
    pub cycles_truncated: bool,
    pub double_edges: Vec<(NodeId, NodeId)>,
    pub independence_graph_candidate: bool,
}

impl Classification {
    pub fn is_regression_graph(&self) -> bool {
        self.class == GraphClass::RegressionGraph
    }
}

/// Upper bound on the number of semi-directed cycles listed by [`classify`].
pub const CYCLE_LIST_CAP: usize = 256;

pub fn classify(g: &SummaryGraph) -> Classification {
    let m = g.mixed();
    let regression = !m.has_semi_directed_cycle();
    let (cycles, truncated) = if regression { (Vec::new(), false) } else { m.semi_directed_cycles(CYCLE_LIST_CAP) };
    let double_edges = g.double_edges();
    Classification {
        class: if regression { GraphClass::RegressionGraph } else { GraphClass::SummaryGraphProper },
        semi_directed_cycles: cycles,
        cycles_truncated: truncated,
        independence_graph_candidate: double_edges.is_empty(),
        double_edges,
    }
}
