//! Working form shared by the path searches and the one-node-at-a-time
//! operators: one adjacency matrix per edge type over a single node list.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::edge_matrix::{reflexive_closure, BinaryMatrix};
use crate::error::{Error, Result};
use crate::graph_model::{Edge, EdgeKind, Link, NodeId, Path, SummaryGraph};

#[derive(Debug, Clone)]
pub(crate) struct Mixed {
    pub nodes: Vec<NodeId>,
    pub in_v: Vec<bool>,
    /// `arrow[i][k]` is `i <- k`; diagonal always zero.
    pub arrow: BinaryMatrix,
    /// Symmetric, zero diagonal.
    pub dashed: BinaryMatrix,
    /// Symmetric, zero diagonal.
    pub full: BinaryMatrix,
}

impl Mixed {
    pub fn empty(nodes: Vec<NodeId>, in_v: Vec<bool>) -> Self {
        let n = nodes.len();
        Mixed {
            nodes,
            in_v,
            arrow: BinaryMatrix::zeros(n, n),
            dashed: BinaryMatrix::zeros(n, n),
            full: BinaryMatrix::zeros(n, n),
        }
    }

    pub fn from_summary(g: &SummaryGraph) -> Self {
        let (du, dv) = (g.u.len(), g.v.len());
        let mut m = Self::empty(g.nodes(), (0..du + dv).map(|i| i >= du).collect());
        for (i, k) in g.h_uu.off_diagonal_ones() {
            m.arrow.set(i, k, true);
        }
        for i in 0..du {
            for k in 0..dv {
                if g.h_uv.get(i, k) {
                    m.arrow.set(i, du + k, true);
                }
            }
        }
        for (i, k) in g.w_uu.off_diagonal_ones() {
            m.dashed.set(i, k, true);
        }
        for (i, k) in g.s_vv.off_diagonal_ones() {
            m.full.set(du + i, du + k, true);
        }
        m
    }

    /// Endpoints outside `u ∪ v` and self-edges are skipped.
    pub fn from_edges(u: &[NodeId], v: &[NodeId], edges: &[Edge]) -> Self {
        let nodes: Vec<NodeId> = u.iter().chain(v).copied().collect();
        let in_v = (0..nodes.len()).map(|i| i >= u.len()).collect();
        let mut m = Self::empty(nodes, in_v);
        for e in edges {
            let (Some(h), Some(t)) = (m.pos(e.head), m.pos(e.tail)) else { continue };
            if h == t {
                continue;
            }
            m.add(h, t, e.kind);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn pos(&self, n: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&x| x == n)
    }

    /// Adds `h <- t`, `h -- t` or `h ~~ t`.
    pub fn add(&mut self, h: usize, t: usize, kind: EdgeKind) {
        debug_assert!(h != t);
        match kind {
            EdgeKind::Arrow => self.arrow.set(h, t, true),
            EdgeKind::Full => {
                self.full.set(h, t, true);
                self.full.set(t, h, true);
            }
            EdgeKind::Dashed => {
                self.dashed.set(h, t, true);
                self.dashed.set(t, h, true);
            }
        }
    }

    /// Adds an edge described from `a`'s side.
    pub fn add_link(&mut self, a: usize, b: usize, link: Link) {
        match link {
            Link::IntoPrev => self.add(a, b, EdgeKind::Arrow),
            Link::IntoNext => self.add(b, a, EdgeKind::Arrow),
            Link::Full => self.add(a, b, EdgeKind::Full),
            Link::Dashed => self.add(a, b, EdgeKind::Dashed),
        }
    }

    /// Edges between `a` and `b`, described from `a`'s side, in tie-break order.
    pub fn links(&self, a: usize, b: usize) -> impl Iterator<Item = Link> {
        let present = [
            (Link::IntoPrev, self.arrow.get(a, b)),
            (Link::IntoNext, self.arrow.get(b, a)),
            (Link::Full, self.full.get(a, b)),
            (Link::Dashed, self.dashed.get(a, b)),
        ];
        present.into_iter().filter(|(_, p)| *p).map(|(l, _)| l)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && (self.arrow.get(a, b) || self.arrow.get(b, a) || self.full.get(a, b) || self.dashed.get(a, b))
    }

    /// `anc[i][k]` is one iff `k` is `i` or an ancestor of `i` along arrows.
    pub fn ancestors(&self) -> BinaryMatrix {
        reflexive_closure(&self.arrow)
    }

    /// Positions of `u` nodes ordered so that every arrow `i <- k` has `i`
    /// before `k`; keeps the stored order where it can.
    pub fn topological_u(&self) -> Option<Vec<usize>> {
        let u: Vec<usize> = (0..self.len()).filter(|&i| !self.in_v[i]).collect();
        let mut placed = vec![false; self.len()];
        let mut out = Vec::with_capacity(u.len());
        while out.len() < u.len() {
            let next = u.iter().copied().find(|&i| {
                !placed[i] && u.iter().all(|&j| placed[j] || j == i || !self.arrow.get(j, i))
            })?;
            placed[next] = true;
            out.push(next);
        }
        Some(out)
    }

    pub fn to_summary(&self) -> Result<SummaryGraph> {
        for i in 0..self.len() {
            for k in 0..self.len() {
                let bad = (self.arrow.get(i, k) && self.in_v[i])
                    || (self.dashed.get(i, k) && (self.in_v[i] || self.in_v[k]))
                    || (self.full.get(i, k) && !(self.in_v[i] && self.in_v[k]));
                if bad {
                    return Err(Error::Internal(alloc::format!(
                        "edge between {} and {} violates the block rules",
                        self.nodes[i],
                        self.nodes[k]
                    )));
                }
            }
        }
        let u = self.topological_u().ok_or(Error::Cyclic)?;
        let v: Vec<usize> = (0..self.len()).filter(|&i| self.in_v[i]).collect();
        let mut h_uu = self.arrow.select(&u, &u);
        let mut w_uu = self.dashed.select(&u, &u);
        let mut s_vv = self.full.select(&v, &v);
        for i in 0..u.len() {
            h_uu.set(i, i, true);
            w_uu.set(i, i, true);
        }
        for i in 0..v.len() {
            s_vv.set(i, i, true);
        }
        let h_uv = self.arrow.select(&u, &v);
        SummaryGraph::from_components(
            u.iter().map(|&i| self.nodes[i]).collect(),
            v.iter().map(|&i| self.nodes[i]).collect(),
            h_uu,
            h_uv,
            w_uu,
            s_vv,
        )
    }

    /// Successors in the digraph where arrows run tail to head and undirected
    /// edges run both ways.
    fn forward(&self, i: usize) -> impl Iterator<Item = (usize, Link)> + '_ {
        (0..self.len()).flat_map(move |k| {
            let step = [
                (Link::IntoNext, self.arrow.get(k, i)),
                (Link::Full, self.full.get(i, k)),
                (Link::Dashed, self.dashed.get(i, k)),
            ];
            step.into_iter().filter(|(_, p)| *p).map(move |(l, _)| (k, l))
        })
    }

    /// Some arrow `i <- k` lies on a cycle of the digraph where undirected
    /// edges count both ways. Arrows alone are acyclic, so such a cycle always
    /// carries an undirected edge.
    pub fn has_semi_directed_cycle(&self) -> bool {
        let n = self.len();
        let mut reach = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            for (k, _) in self.forward(i) {
                reach.set(i, k, true);
            }
        }
        let reach = reflexive_closure(&reach);
        self.arrow.off_diagonal_ones().any(|(i, k)| reach.get(i, k))
    }

    /// Lists semi-directed cycles, each starting at its earliest node, up to
    /// `cap` of them; the flag is set when the cap was hit.
    pub fn semi_directed_cycles(&self, cap: usize) -> (Vec<Path>, bool) {
        let mut found: BTreeSet<Vec<(usize, Link)>> = BTreeSet::new();
        let mut truncated = false;
        'arrows: for (head, tail) in self.arrow.off_diagonal_ones().collect::<Vec<_>>() {
            // cycle: tail -> head ... -> tail
            let mut stack: Vec<(usize, Link)> = vec![(tail, Link::IntoNext)];
            let mut on_path = vec![false; self.len()];
            on_path[tail] = true;
            let mut frames: Vec<Vec<(usize, Link)>> = Vec::new();
            on_path[head] = true;
            stack.push((head, Link::IntoNext));
            frames.push(self.forward(head).collect());
            while let Some(frame) = frames.last_mut() {
                let Some((k, l)) = frame.pop() else {
                    frames.pop();
                    let (x, _) = stack.pop().expect("stack holds the frame's node");
                    on_path[x] = false;
                    continue;
                };
                if k == tail {
                    // stack entries: (node, link into node); rebuild as (node, link out of node)
                    let mut cyc: Vec<(usize, Link)> = Vec::with_capacity(stack.len());
                    for w in 0..stack.len() {
                        let out = if w + 1 < stack.len() { stack[w + 1].1 } else { l };
                        cyc.push((stack[w].0, out));
                    }
                    let start = (0..cyc.len()).min_by_key(|&j| cyc[j].0).unwrap_or(0);
                    cyc.rotate_left(start);
                    found.insert(cyc);
                    if found.len() >= cap {
                        truncated = true;
                        break 'arrows;
                    }
                    continue;
                }
                if on_path[k] {
                    continue;
                }
                on_path[k] = true;
                stack.push((k, l));
                frames.push(self.forward(k).collect());
            }
        }
        let cycles = found
            .into_iter()
            .map(|cyc| {
                let mut nodes: Vec<NodeId> = cyc.iter().map(|(i, _)| self.nodes[*i]).collect();
                nodes.push(nodes[0]);
                Path { nodes, links: cyc.iter().map(|(_, l)| *l).collect() }
            })
            .collect();
        (cycles, truncated)
    }

    /// Copy without node `x`.
    pub fn without(&self, x: usize) -> Mixed {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != x).collect();
        Mixed {
            nodes: keep.iter().map(|&i| self.nodes[i]).collect(),
            in_v: keep.iter().map(|&i| self.in_v[i]).collect(),
            arrow: self.arrow.select(&keep, &keep),
            dashed: self.dashed.select(&keep, &keep),
            full: self.full.select(&keep, &keep),
        }
    }
}
