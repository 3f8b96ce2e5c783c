//! Marginalising over or conditioning on one node at a time.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph_model::{Link, NodeId, SummaryGraph};
use crate::mixed::Mixed;

use super::{extended_provenance, MarginalConditionSpec};

/// Edge induced between `i` and `k` when marginalising over the inner node
/// `t` of the path `i - t - k`. `left` is the `i,t` edge read from `i`,
/// `right` the `t,k` edge read from `t`; the result is read from `i`.
pub fn marginalising_rule(left: Link, right: Link) -> Option<Link> {
    use Link::*;
    match (left, right) {
        (IntoPrev, IntoNext) => Some(Dashed),
        (IntoPrev, Full) => Some(IntoPrev),
        (IntoPrev, IntoPrev) => Some(IntoPrev),
        (IntoPrev, Dashed) => Some(Dashed),
        (Full, Full) => Some(Full),
        (Full, IntoPrev) => Some(Full),
        (Full, Dashed) => Some(IntoNext),
        // mirrored cells
        (Full, IntoNext) => Some(IntoNext),
        (IntoNext, IntoNext) => Some(IntoNext),
        (Dashed, IntoNext) => Some(Dashed),
        (IntoNext, Full) => Some(Full),
        (Dashed, Full) => Some(IntoPrev),
        // t is a collision node
        (IntoNext, IntoPrev) | (IntoNext, Dashed) | (Dashed, IntoPrev) | (Dashed, Dashed) => None,
    }
}

/// Edge induced between `i` and `k` when conditioning on the inner node `s`
/// of `i - s - k` (or on a descendant of `s`). Only collision nodes induce.
pub fn conditioning_rule(left: Link, right: Link) -> Option<Link> {
    use Link::*;
    match (left, right) {
        (IntoNext, IntoPrev) => Some(Full),
        (IntoNext, Dashed) => Some(IntoNext),
        (Dashed, IntoPrev) => Some(IntoPrev),
        (Dashed, Dashed) => Some(Dashed),
        _ => None,
    }
}

/// Edges within `v` become full lines and edges between `u` and `v` become
/// arrows pointing from `v` into `u`.
fn retype(m: &mut Mixed) {
    let n = m.len();
    for i in 0..n {
        for k in 0..n {
            if i == k || !m.adjacent(i, k) {
                continue;
            }
            match (m.in_v[i], m.in_v[k]) {
                (true, true) => {
                    m.arrow.set(i, k, false);
                    m.arrow.set(k, i, false);
                    m.dashed.set(i, k, false);
                    m.dashed.set(k, i, false);
                    m.full.set(i, k, true);
                    m.full.set(k, i, true);
                }
                (false, true) => {
                    m.arrow.set(k, i, false);
                    m.dashed.set(i, k, false);
                    m.dashed.set(k, i, false);
                    m.full.set(i, k, false);
                    m.full.set(k, i, false);
                    m.arrow.set(i, k, true);
                }
                _ => {}
            }
        }
    }
}

fn induce_at(m: &Mixed, x: usize, rule: fn(Link, Link) -> Option<Link>) -> Vec<(usize, usize, Link)> {
    let n = m.len();
    let mut out = Vec::new();
    for i in (0..n).filter(|&i| i != x && m.adjacent(i, x)) {
        for k in (0..n).filter(|&k| k != x && k != i && m.adjacent(x, k)) {
            for left in m.links(i, x) {
                for right in m.links(x, k) {
                    if let Some(link) = rule(left, right) {
                        out.push((i, k, link));
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn marginalise_mixed(m: &Mixed, t: usize) -> Mixed {
    let mut out = m.clone();
    for (i, k, link) in induce_at(m, t, marginalising_rule) {
        out.add_link(i, k, link);
    }
    let mut out = out.without(t);
    retype(&mut out);
    out
}

pub(crate) fn condition_mixed(m: &Mixed, s: usize) -> Mixed {
    let mut out = m.clone();
    if !m.in_v[s] {
        let anc = m.ancestors();
        let targets: Vec<usize> = (0..m.len()).filter(|&x| anc.get(s, x)).collect();
        // induced edges can open further collisions at the same nodes
        loop {
            let mut changed = false;
            for &x in &targets {
                for (i, k, link) in induce_at(&out, x, conditioning_rule) {
                    let before = out.links(i, k).any(|l| l == link);
                    if !before {
                        out.add_link(i, k, link);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for &x in &targets {
            out.in_v[x] = true;
        }
    }
    let mut out = out.without(s);
    retype(&mut out);
    out
}

fn locate(g: &SummaryGraph, x: NodeId) -> Result<(Mixed, usize)> {
    let m = g.mixed();
    let i = m.pos(x).ok_or(Error::UnknownNode(x))?;
    Ok((m, i))
}

fn finish(m: Mixed) -> Result<SummaryGraph> {
    m.to_summary().map_err(|e| match e {
        Error::Cyclic => Error::Internal("induced arrows within u form a directed cycle".into()),
        e => e,
    })
}

/// Marginalises over the single node `t`, inducing edges between pairs of
/// its neighbours.
pub fn step_marginalise(g: &SummaryGraph, t: NodeId) -> Result<SummaryGraph> {
    let (m, i) = locate(g, t)?;
    let out = finish(marginalise_mixed(&m, i))?;
    Ok(out.with_provenance(extended_provenance(g, &MarginalConditionSpec::new(vec![], vec![t]))))
}

/// Conditions on the single node `s`: collision paths through `s` and its
/// ancestors are closed, the ancestors of `s` within `u` move to `v`, and `s`
/// is removed.
pub fn step_condition(g: &SummaryGraph, s: NodeId) -> Result<SummaryGraph> {
    let (m, i) = locate(g, s)?;
    let out = finish(condition_mixed(&m, i))?;
    Ok(out.with_provenance(extended_provenance(g, &MarginalConditionSpec::new(vec![s], vec![]))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Condition(NodeId),
    Marginalise(NodeId),
}

/// Applies a sequence of single-node steps. Without an explicit sequence the
/// conditioning nodes go first, then the marginalised ones, each in the
/// order listed in `spec`. The callback sees every intermediate graph.
pub fn stepwise(
    g: &SummaryGraph,
    spec: &MarginalConditionSpec,
    order: Option<&[Step]>,
    mut on_step: impl FnMut(Step, &SummaryGraph),
) -> Result<SummaryGraph> {
    spec.check(&g.nodes())?;
    let default: Vec<Step> = spec
        .conditioning
        .iter()
        .map(|&n| Step::Condition(n))
        .chain(spec.marginalising.iter().map(|&n| Step::Marginalise(n)))
        .collect();
    let steps = match order {
        Some(s) => {
            let mut a: Vec<Step> = s.to_vec();
            let mut b = default.clone();
            let key = |st: &Step| match *st {
                Step::Condition(n) => (0, n),
                Step::Marginalise(n) => (1, n),
            };
            a.sort_by_key(key);
            b.sort_by_key(key);
            if a != b {
                return Err(Error::InvalidInput("step sequence does not match the spec".into()));
            }
            s.to_vec()
        }
        None => default,
    };
    let mut cur = g.clone();
    for st in steps {
        cur = match st {
            Step::Condition(n) => step_condition(&cur, n)?,
            Step::Marginalise(n) => step_marginalise(&cur, n)?,
        };
        on_step(st, &cur);
    }
    Ok(cur)
}
