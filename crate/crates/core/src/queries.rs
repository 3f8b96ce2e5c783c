//! Independence queries answered by path criteria, undirected separation,
//! local Markov statements and obstructions to Markov equivalence with a DAG.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::edge_matrix::{reflexive_closure, BinaryMatrix, NodeSubset};
use crate::error::{Error, Result};
use crate::graph_model::{classify, Link, NodeId, Path, SummaryGraph};
use crate::mixed::Mixed;

/// `alpha ⊥ beta | given`; every other node is marginalised over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceQuery {
    pub alpha: Vec<NodeId>,
    pub beta: Vec<NodeId>,
    pub given: Vec<NodeId>,
}

impl IndependenceQuery {
    pub fn new(alpha: Vec<NodeId>, beta: Vec<NodeId>, given: Vec<NodeId>) -> Self {
        IndependenceQuery { alpha, beta, given }
    }

    pub fn pair(i: NodeId, k: NodeId, given: Vec<NodeId>) -> Self {
        IndependenceQuery { alpha: vec![i], beta: vec![k], given }
    }

    fn check(&self, g: &SummaryGraph) -> Result<()> {
        if self.alpha.is_empty() || self.beta.is_empty() {
            return Err(Error::InvalidInput("alpha and beta must be non-empty".into()));
        }
        let mut seen = BTreeSet::new();
        for &n in self.alpha.iter().chain(&self.beta).chain(&self.given) {
            if !g.contains(n) {
                return Err(Error::UnknownNode(n));
            }
            if !seen.insert(n) {
                return Err(Error::InvalidInput(alloc::format!("node {n} appears in more than one set")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InnerRole {
    Collision,
    Transmitting,
}

/// A path together with the role of each inner node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathWitness {
    pub path: Path,
    pub roles: Vec<InnerRole>,
}

impl PathWitness {
    pub(crate) fn from_path(path: Path) -> Self {
        let roles = path
            .links
            .windows(2)
            .map(|w| if w[0].head_at_next() && w[1].head_at_prev() { InnerRole::Collision } else { InnerRole::Transmitting })
            .collect();
        PathWitness { path, roles }
    }
}

impl fmt::Display for PathWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.path.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Implied,
    NotImplied(PathWitness),
}

impl Verdict {
    pub fn is_implied(&self) -> bool {
        matches!(self, Verdict::Implied)
    }
}

/// Which inner nodes may carry a path: transmitting nodes need `transmit_ok`,
/// collision nodes need `collide_ok`.
pub(crate) struct Criterion {
    pub transmit_ok: Vec<bool>,
    pub collide_ok: Vec<bool>,
    /// Paths shorter than this many edges are ignored.
    pub min_edges: usize,
}

impl Criterion {
    /// Active paths relative to conditioning set `c`: collision nodes in `c`
    /// or with a descendant in `c`, transmitting nodes outside `c`.
    pub fn conditioning(m: &Mixed, in_c: &[bool]) -> Self {
        let anc = m.ancestors();
        let n = m.len();
        let collide_ok = (0..n).map(|x| (0..n).any(|c| in_c[c] && anc.get(c, x))).collect();
        Criterion { transmit_ok: in_c.iter().map(|c| !c).collect(), collide_ok, min_edges: 1 }
    }

    fn allows(&self, x: usize, head_in: bool, out: Link) -> bool {
        if head_in && out.head_at_prev() {
            self.collide_ok[x]
        } else {
            self.transmit_ok[x]
        }
    }
}

/// Whether some walk satisfying the criterion joins `from` to `to`. Every
/// qualifying path is such a walk, so `false` rules paths out.
fn walk_reachable(m: &Mixed, from: &[usize], to: &[bool], crit: &Criterion) -> bool {
    let n = m.len();
    let endpoint: Vec<bool> = (0..n).map(|x| to[x] || from.contains(&x)).collect();
    let cap = crit.min_edges.max(1);
    // state: node, arrowhead at node on arrival, edges used (capped)
    let idx = |x: usize, h: bool, len: usize| (x * 2 + h as usize) * (cap + 1) + len;
    let mut seen = vec![false; n * 2 * (cap + 1)];
    let mut queue: VecDeque<(usize, Option<bool>, usize)> = from.iter().map(|&a| (a, None, 0)).collect();
    while let Some((x, head_in, len)) = queue.pop_front() {
        for y in 0..n {
            if y == x || !m.adjacent(x, y) {
                continue;
            }
            for link in m.links(x, y) {
                if let Some(h) = head_in {
                    if !crit.allows(x, h, link) {
                        continue;
                    }
                }
                let nl = (len + 1).min(cap);
                if to[y] && len + 1 >= crit.min_edges {
                    return true;
                }
                if endpoint[y] {
                    continue;
                }
                let st = (y, link.head_at_next(), nl);
                let key = idx(st.0, st.1, st.2);
                if !seen[key] {
                    seen[key] = true;
                    queue.push_back((st.0, Some(st.1), st.2));
                }
            }
        }
    }
    false
}

struct Dfs<'a> {
    m: &'a Mixed,
    to: &'a [bool],
    endpoint: Vec<bool>,
    crit: &'a Criterion,
    nodes: Vec<usize>,
    links: Vec<Link>,
    on_path: Vec<bool>,
}

impl Dfs<'_> {
    /// Extends the current path by exactly `left` more edges; calls `found`
    /// for each complete path and stops when it returns true.
    fn extend(&mut self, left: usize, found: &mut dyn FnMut(&[usize], &[Link]) -> bool) -> bool {
        let x = *self.nodes.last().expect("path has a start");
        for y in 0..self.m.len() {
            if y == x || self.on_path[y] || !self.m.adjacent(x, y) {
                continue;
            }
            let links: Vec<Link> = self.m.links(x, y).collect();
            for link in links {
                if let Some(&prev) = self.links.last() {
                    if !self.crit.allows(x, prev.head_at_next(), link) {
                        continue;
                    }
                }
                if left == 1 {
                    if self.to[y] {
                        self.nodes.push(y);
                        self.links.push(link);
                        let stop = found(&self.nodes, &self.links);
                        self.nodes.pop();
                        self.links.pop();
                        if stop {
                            return true;
                        }
                    }
                    continue;
                }
                if self.endpoint[y] {
                    continue;
                }
                self.nodes.push(y);
                self.links.push(link);
                self.on_path[y] = true;
                let stop = self.extend(left - 1, found);
                self.on_path[y] = false;
                self.nodes.pop();
                self.links.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

fn to_path(m: &Mixed, nodes: &[usize], links: &[Link]) -> Path {
    Path { nodes: nodes.iter().map(|&i| m.nodes[i]).collect(), links: links.to_vec() }
}

/// Visits qualifying simple paths from `from` to `to` by increasing length,
/// starts and neighbours in position order, links in tie-break order.
/// Stops as soon as `found` returns true.
fn visit_paths(
    m: &Mixed,
    from: &[usize],
    to: &[bool],
    crit: &Criterion,
    max_edges: usize,
    found: &mut dyn FnMut(&[usize], &[Link]) -> bool,
) {
    let n = m.len();
    let mut starts = from.to_vec();
    starts.sort_unstable();
    let endpoint: Vec<bool> = (0..n).map(|x| to[x] || from.contains(&x)).collect();
    for len in crit.min_edges.max(1)..=max_edges.min(n.saturating_sub(1)) {
        for &a in &starts {
            let mut dfs = Dfs {
                m,
                to,
                endpoint: endpoint.clone(),
                crit,
                nodes: vec![a],
                links: Vec::new(),
                on_path: (0..n).map(|x| x == a).collect(),
            };
            if dfs.extend(len, found) {
                return;
            }
        }
    }
}

/// Shortest qualifying path, ties broken by node positions then link kinds.
pub(crate) fn shortest_path(m: &Mixed, from: &[usize], to: &[bool], crit: &Criterion) -> Option<Path> {
    if !walk_reachable(m, from, to, crit) {
        return None;
    }
    let mut out = None;
    visit_paths(m, from, to, crit, m.len(), &mut |nodes, links| {
        out = Some(to_path(m, nodes, links));
        true
    });
    out
}

/// Every qualifying path, shortest first.
pub(crate) fn all_paths(m: &Mixed, from: &[usize], to: &[bool], crit: &Criterion) -> Vec<Path> {
    let mut out = Vec::new();
    visit_paths(m, from, to, crit, m.len(), &mut |nodes, links| {
        out.push(to_path(m, nodes, links));
        false
    });
    out
}

fn mask(m: &Mixed, nodes: &[NodeId]) -> Vec<bool> {
    let mut out = vec![false; m.len()];
    for n in nodes {
        if let Some(i) = m.pos(*n) {
            out[i] = true;
        }
    }
    out
}

/// Decides whether `g` implies `alpha ⊥ beta | given`. It does unless some
/// path between the two sets has every collision node in `given` or an
/// ancestor of it and every other inner node outside `given`; the shortest
/// such path is returned as the witness.
pub fn implies_independence(g: &SummaryGraph, q: &IndependenceQuery) -> Result<Verdict> {
    q.check(g)?;
    let m = g.mixed();
    Ok(implies_on_mixed(&m, q))
}

pub(crate) fn implies_on_mixed(m: &Mixed, q: &IndependenceQuery) -> Verdict {
    let crit = Criterion::conditioning(m, &mask(m, &q.given));
    let from: Vec<usize> = q.alpha.iter().filter_map(|n| m.pos(*n)).collect();
    match shortest_path(m, &from, &mask(m, &q.beta), &crit) {
        None => Verdict::Implied,
        Some(p) => Verdict::NotImplied(PathWitness::from_path(p)),
    }
}

#[allow(clippy::needless_range_loop)]
fn separated(g: &BinaryMatrix, alpha: &NodeSubset, beta: &NodeSubset, blocked: &NodeSubset) -> Result<bool> {
    if !g.is_square() {
        return Err(Error::Shape("separation needs a square matrix".into()));
    }
    let n = g.rows();
    let sets = [alpha, beta, blocked];
    for (i, s) in sets.iter().enumerate() {
        if s.members().iter().any(|&x| x >= n) {
            return Err(Error::InvalidInput("subset index out of range".into()));
        }
        for t in &sets[i + 1..] {
            if let Some(&x) = s.members().iter().find(|&&x| t.contains(x)) {
                return Err(Error::InvalidInput(alloc::format!("index {x} is in two of the sets")));
            }
        }
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = alpha.members().to_vec();
    for &a in &stack {
        seen[a] = true;
    }
    while let Some(x) = stack.pop() {
        if beta.contains(x) {
            return Ok(false);
        }
        for y in 0..n {
            if !seen[y] && y != x && (g.get(x, y) || g.get(y, x)) && !blocked.contains(y) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    Ok(true)
}

/// Concentration-graph separation: every path from `alpha` to `beta` has a
/// node in `c`, so `alpha ⊥ beta | c`.
pub fn separate_concentration(g: &BinaryMatrix, alpha: &NodeSubset, beta: &NodeSubset, c: &NodeSubset) -> Result<bool> {
    separated(g, alpha, beta, c)
}

/// Covariance-graph separation: every path from `alpha` to `beta` has a node
/// in the marginalised set `m`, so `alpha ⊥ beta | rest`.
pub fn separate_covariance(g: &BinaryMatrix, alpha: &NodeSubset, beta: &NodeSubset, m: &NodeSubset) -> Result<bool> {
    separated(g, alpha, beta, m)
}

/// Statement families of the local Markov property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkovFamily {
    /// Pairs within `v`, given the rest of `v`.
    WithinV,
    /// A `u` node and a `v` node.
    UToV,
    /// Two `u` nodes, neither an ancestor of the other.
    UPair,
    /// A `u` node and one of its ancestors.
    UToAncestor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovStatement {
    pub family: MarkovFamily,
    pub i: NodeId,
    pub k: NodeId,
    /// Conditioning set within the graph; the graph's own conditioning set
    /// is implicit.
    pub given: Vec<NodeId>,
    /// Verdict of the edge-matrix condition, where the family has one.
    pub matrix_condition: Option<bool>,
}

impl fmt::Display for MarkovStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} _||_ {} |", self.i, self.k)?;
        for g in &self.given {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

/// Pairwise statements of the local Markov property, each emitted only when
/// the path criterion confirms it.
pub fn local_markov(g: &SummaryGraph) -> Result<Vec<MarkovStatement>> {
    g.ensure_valid()?;
    let m = g.mixed();
    let (du, dv) = (g.u.len(), g.v.len());
    let u = &g.u;
    let v = &g.v;
    let anc = reflexive_closure(&g.h_uu);
    let mut out = Vec::new();
    let mut emit = |family, i: NodeId, k: NodeId, given: Vec<NodeId>, matrix_condition| {
        let q = IndependenceQuery::pair(i, k, given.clone());
        if implies_on_mixed(&m, &q).is_implied() {
            out.push(MarkovStatement { family, i, k, given, matrix_condition });
            true
        } else {
            false
        }
    };

    for i in 0..dv {
        for k in (i + 1)..dv {
            if g.s_vv.get(i, k) {
                continue;
            }
            let given = v.iter().copied().filter(|&x| x != v[i] && x != v[k]).collect();
            emit(MarkovFamily::WithinV, v[i], v[k], given, Some(true));
        }
    }

    for i in 0..du {
        let c_i: Vec<NodeId> = (0..du).filter(|&x| x != i && anc.get(i, x)).map(|x| u[x]).collect();
        for k in 0..dv {
            if g.h_uv.get(i, k) {
                continue;
            }
            let rest_v: Vec<NodeId> = v.iter().copied().filter(|&x| x != v[k]).collect();
            if !emit(MarkovFamily::UToV, u[i], v[k], rest_v.clone(), None) {
                let with_c = c_i.iter().copied().chain(rest_v).collect();
                emit(MarkovFamily::UToV, u[i], v[k], with_c, None);
            }
        }
    }

    for i in 0..du {
        for l in (i + 1)..du {
            if anc.get(i, l) || g.w_uu.get(i, l) {
                continue;
            }
            let e: Vec<usize> = (0..du).filter(|&x| x != i && x != l && (anc.get(i, x) || anc.get(l, x))).collect();
            let w_ee = reflexive_closure(&g.w_uu.select(&e, &e));
            let via = g.w_uu.select(&[i], &e).mul(&w_ee).mul(&g.w_uu.select(&e, &[l]));
            let cond = via.count_ones() == 0;
            let given = e.iter().map(|&x| u[x]).chain(v.iter().copied()).collect();
            emit(MarkovFamily::UPair, u[i], u[l], given, Some(cond));
        }
    }

    for i in 0..du {
        let c: Vec<usize> = (0..du).filter(|&x| x != i && anc.get(i, x)).collect();
        let w_cc = reflexive_closure(&g.w_uu.select(&c, &c));
        let through = g.w_uu.select(&[i], &c).mul(&w_cc).mul(&g.h_uu.select(&c, &c));
        for (j, &k) in c.iter().enumerate() {
            if g.h_uu.get(i, k) || g.w_uu.get(i, k) {
                continue;
            }
            let cond = !through.get(0, j);
            let given = c.iter().filter(|&&x| x != k).map(|&x| u[x]).chain(v.iter().copied()).collect();
            emit(MarkovFamily::UToAncestor, u[i], u[k], given, Some(cond));
        }
    }
    Ok(out)
}

/// Configuration that rules out Markov equivalence to any DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Four-node path with collision inner nodes and uncoupled `a,c` and `b,d`.
    CollisionPath(Path),
    /// Chordless cycle of four or more full lines; `nodes` repeats its start.
    ChordlessCycle(Path),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::CollisionPath(p) => write!(f, "chordless collision path {p}"),
            Obstruction::ChordlessCycle(p) => write!(f, "chordless cycle {p}"),
        }
    }
}

/// Searches a regression graph for a chordless collision path in four nodes
/// or a chordless cycle of four or more nodes within `v`. Finding none does
/// not prove equivalence to a DAG.
pub fn equivalence_obstruction(g: &SummaryGraph) -> Result<Option<Obstruction>> {
    g.ensure_valid()?;
    if !classify(g).is_regression_graph() {
        return Err(Error::NotRegressionGraph);
    }
    let m = g.mixed();
    let n = m.len();
    for b in 0..n {
        for c in 0..n {
            if b == c || !m.adjacent(b, c) {
                continue;
            }
            for a in (0..n).filter(|&a| a != b && a != c && m.adjacent(a, b) && !m.adjacent(a, c)) {
                for d in (0..n).filter(|&d| d != a && d != b && d != c && m.adjacent(c, d) && !m.adjacent(b, d)) {
                    for l1 in m.links(a, b) {
                        for l2 in m.links(b, c) {
                            for l3 in m.links(c, d) {
                                let at_b = l1.head_at_next() && l2.head_at_prev();
                                let at_c = l2.head_at_next() && l3.head_at_prev();
                                if at_b && at_c {
                                    return Ok(Some(Obstruction::CollisionPath(to_path(&m, &[a, b, c, d], &[l1, l2, l3]))));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(chordless_cycle(&m).map(Obstruction::ChordlessCycle))
}

/// Chordless cycle of length four or more in the full-line graph.
fn chordless_cycle(m: &Mixed) -> Option<Path> {
    let n = m.len();
    let nb = |x: usize, y: usize| x != y && m.full.get(x, y);
    for x in 0..n {
        for y in 0..n {
            for z in (y + 1)..n {
                if !nb(x, y) || !nb(x, z) || nb(y, z) {
                    continue;
                }
                // shortest y..z path avoiding x and x's other neighbours
                let blocked: Vec<bool> = (0..n).map(|w| w == x || (nb(x, w) && w != y && w != z)).collect();
                let mut prev = vec![usize::MAX; n];
                let mut queue = VecDeque::from([y]);
                prev[y] = y;
                while let Some(w) = queue.pop_front() {
                    if w == z {
                        break;
                    }
                    for t in 0..n {
                        if nb(w, t) && !blocked[t] && prev[t] == usize::MAX {
                            prev[t] = w;
                            queue.push_back(t);
                        }
                    }
                }
                if prev[z] == usize::MAX {
                    continue;
                }
                let mut cyc = vec![z];
                while *cyc.last().expect("non-empty") != y {
                    let w = *cyc.last().expect("non-empty");
                    cyc.push(prev[w]);
                }
                cyc.reverse();
                let mut nodes = vec![x];
                nodes.extend(cyc);
                nodes.push(x);
                let links = vec![Link::Full; nodes.len() - 1];
                return Some(to_path(m, &nodes, &links));
            }
        }
    }
    None
}
