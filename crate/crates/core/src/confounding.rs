//! Direct and indirect confounding of generating dependences when a parent
//! graph model is reduced to its MAG model.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::edge_matrix::reflexive_closure;
use crate::error::{Error, Result};
use crate::graph_model::{Link, NodeId, ParentGraph, SummaryGraph};
use crate::mixed::Mixed;
use crate::queries::{all_paths, shortest_path, Criterion, PathWitness};
use crate::transform::{summary_from_parent, MarginalConditionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfoundingStatus {
    Undistorted,
    DirectlyConfounded,
    IndirectlyConfounded,
    Both,
    /// An endpoint is conditioned on, marginalised over or lands in `v`.
    OutOfScope,
}

impl fmt::Display for ConfoundingStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfoundingStatus::Undistorted => "UNDISTORTED",
            ConfoundingStatus::DirectlyConfounded => "DIRECTLY CONFOUNDED",
            ConfoundingStatus::IndirectlyConfounded => "INDIRECTLY CONFOUNDED",
            ConfoundingStatus::Both => "DIRECTLY AND INDIRECTLY CONFOUNDED",
            ConfoundingStatus::OutOfScope => "OUT OF SCOPE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfoundingReport {
    /// The generating arrow `(i, k)`, read `i <- k`.
    pub edge: (NodeId, NodeId),
    pub status: ConfoundingStatus,
    /// Shortest active path besides the edge, in the parent graph.
    pub direct_witnesses: Vec<PathWitness>,
    /// Shortest active path besides the edge, in the summary graph.
    pub indirect_witnesses: Vec<PathWitness>,
    /// The summary graph has both an arrow and a dashed line at the pair.
    pub double_edge: bool,
    pub spec: MarginalConditionSpec,
    /// Ancestors of `i` within `u`.
    pub c_i: Vec<NodeId>,
    /// Nodes of `u` implicitly marginalised when regressing `Y_i` on `c_i` and `v`.
    pub m_i: Vec<NodeId>,
}

impl ConfoundingReport {
    /// Every witness, direct ones first.
    pub fn witnesses(&self) -> impl Iterator<Item = &PathWitness> {
        self.direct_witnesses.iter().chain(&self.indirect_witnesses)
    }
}

fn status_of(direct: bool, indirect: bool) -> ConfoundingStatus {
    match (direct, indirect) {
        (false, false) => ConfoundingStatus::Undistorted,
        (true, false) => ConfoundingStatus::DirectlyConfounded,
        (false, true) => ConfoundingStatus::IndirectlyConfounded,
        (true, true) => ConfoundingStatus::Both,
    }
}

/// Active path between `i` and `k` in `s`, other than a single edge, relative
/// to `c_i ∪ v` (conditioned) and the remaining `u` nodes (marginalised).
/// Returns the witness together with `c_i` and `m_i`.
fn indirect_check(s: &SummaryGraph, i: NodeId, k: NodeId) -> (Option<PathWitness>, Vec<NodeId>, Vec<NodeId>) {
    let m = s.mixed();
    let pi = m.pos(i).expect("i is in u");
    let pk = m.pos(k).expect("k is in u");
    let anc = m.ancestors();
    let n = m.len();
    let in_c: Vec<bool> = (0..n).map(|x| m.in_v[x] || (x != pi && anc.get(pi, x))).collect();
    let mut crit = Criterion::conditioning(&m, &in_c);
    crit.transmit_ok = (0..n).map(|x| !m.in_v[x] && !in_c[x]).collect();
    crit.min_edges = 2;
    let mut to = vec![false; n];
    to[pk] = true;
    let witness = shortest_path(&m, &[pi], &to, &crit).map(PathWitness::from_path);
    let c_i = (0..n).filter(|&x| !m.in_v[x] && in_c[x]).map(|x| m.nodes[x]).collect();
    let m_i = (0..n).filter(|&x| x != pi && crit.transmit_ok[x]).map(|x| m.nodes[x]).collect();
    (witness, c_i, m_i)
}

/// Audits the generating arrow `i <- k` of `g` for distortion in the MAG
/// model after conditioning on `C` and marginalising over `M`.
///
/// Direct confounding: an active path between `i` and `k` in `g` relative to
/// `{C, M}` other than the edge itself. Indirect confounding: such a path in
/// the summary graph relative to `c_i` and `m_i`.
pub fn audit_edge(g: &ParentGraph, spec: &MarginalConditionSpec, edge: (NodeId, NodeId)) -> Result<ConfoundingReport> {
    let (i, k) = edge;
    if !g.has_arrow(i, k) {
        return Err(Error::EdgeAbsent(i, k));
    }
    let s = summary_from_parent(g, spec)?;
    let mut report = ConfoundingReport {
        edge,
        status: ConfoundingStatus::OutOfScope,
        direct_witnesses: Vec::new(),
        indirect_witnesses: Vec::new(),
        double_edge: false,
        spec: spec.clone(),
        c_i: Vec::new(),
        m_i: Vec::new(),
    };
    if !s.u_nodes().contains(&i) || !s.u_nodes().contains(&k) {
        return Ok(report);
    }

    let pm = Mixed::from_summary(&g.to_summary());
    let n = pm.len();
    let in_c: Vec<bool> = (0..n).map(|x| spec.conditioning.contains(&pm.nodes[x])).collect();
    let mut crit = Criterion::conditioning(&pm, &in_c);
    crit.transmit_ok = (0..n).map(|x| spec.marginalising.contains(&pm.nodes[x])).collect();
    crit.min_edges = 2;
    let pi = pm.pos(i).expect("checked");
    let mut to = vec![false; n];
    to[pm.pos(k).expect("checked")] = true;
    let direct = shortest_path(&pm, &[pi], &to, &crit).map(PathWitness::from_path);

    let (indirect, c_i, m_i) = indirect_check(&s, i, k);
    report.double_edge = s.double_edges().contains(&(i, k));
    report.status = status_of(direct.is_some(), indirect.is_some());
    report.direct_witnesses = direct.into_iter().collect();
    report.indirect_witnesses = indirect.into_iter().collect();
    report.c_i = c_i;
    report.m_i = m_i;
    Ok(report)
}

/// Audits an arrow `i <- k` of a summary graph without a parent graph at
/// hand. A double edge stands in for the direct check; `u` must be stored in
/// generating order (see [`SummaryGraph::from_edge_list`]).
pub fn audit_summary_edge(s: &SummaryGraph, edge: (NodeId, NodeId)) -> Result<ConfoundingReport> {
    let (i, k) = edge;
    if !s.has_edge(crate::graph_model::Edge::arrow(i, k)) || !s.u_nodes().contains(&k) {
        return Err(Error::EdgeAbsent(i, k));
    }
    let double_edge = s.double_edges().contains(&(i, k));
    let (indirect, c_i, m_i) = indirect_check(s, i, k);
    Ok(ConfoundingReport {
        edge,
        status: status_of(double_edge, indirect.is_some()),
        direct_witnesses: Vec::new(),
        indirect_witnesses: indirect.into_iter().collect(),
        double_edge,
        spec: s.provenance().map(|p| p.spec.clone()).unwrap_or_default(),
        c_i,
        m_i,
    })
}

/// Collision paths between `i` and `k` whose inner nodes are all forefathers
/// of `i` (ancestors that are not parents), of the forms `i ~~ ... ~~ k` and
/// `i ~~ ... <- k`. Only defined for graphs without double edges.
pub fn indirect_paths(s: &SummaryGraph, edge: (NodeId, NodeId)) -> Result<Vec<PathWitness>> {
    let doubles = s.double_edges();
    if !doubles.is_empty() {
        return Err(Error::DoubleEdges(doubles));
    }
    let (i, k) = edge;
    let m = s.mixed();
    let pi = m.pos(i).ok_or(Error::UnknownNode(i))?;
    let pk = m.pos(k).ok_or(Error::UnknownNode(k))?;
    let anc = reflexive_closure(&m.arrow);
    let n = m.len();
    let forefather: Vec<bool> = (0..n).map(|x| x != pi && anc.get(pi, x) && !m.arrow.get(pi, x)).collect();
    let crit = Criterion { transmit_ok: vec![false; n], collide_ok: forefather, min_edges: 2 };
    let mut to = vec![false; n];
    to[pk] = true;
    Ok(all_paths(&m, &[pi], &to, &crit)
        .into_iter()
        .filter(|p| p.links.first() == Some(&Link::Dashed))
        .map(PathWitness::from_path)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentificationHint {
    /// Sufficient for identification of the linear summary model.
    NoDoubleEdges,
    /// Inconclusive; listed as `(i, k)` for `i <- k` with `i ~~ k`.
    HasDoubleEdges(Vec<(NodeId, NodeId)>),
}

pub fn identification_hint(s: &SummaryGraph) -> IdentificationHint {
    let d = s.double_edges();
    if d.is_empty() {
        IdentificationHint::NoDoubleEdges
    } else {
        IdentificationHint::HasDoubleEdges(d)
    }
}
