//! Compact fixtures for unit tests.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::graph_model::{Edge, EdgeList, NodeId, ParentGraph, SummaryGraph};
use crate::transform::MarginalConditionSpec;

pub fn n(x: usize) -> NodeId {
    NodeId(x)
}

pub fn ids(xs: &[usize]) -> Vec<NodeId> {
    xs.iter().map(|&x| NodeId(x)).collect()
}

/// Parses `"1<-2, 1~~2, 3--4"`.
pub fn edges(text: &str) -> Vec<Edge> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            for (sym, make) in [("<-", Edge::arrow as fn(NodeId, NodeId) -> Edge), ("--", Edge::full), ("~~", Edge::dashed)] {
                if let Some((a, b)) = t.split_once(sym) {
                    return make(n(a.trim().parse().unwrap()), n(b.trim().parse().unwrap()));
                }
            }
            panic!("bad edge {t}")
        })
        .collect()
}

pub fn summary(u: &[usize], v: &[usize], text: &str) -> SummaryGraph {
    SummaryGraph::from_edge_list(&EdgeList::new(edges(text)), &ids(u), &ids(v)).unwrap()
}

/// Parent graph with order `order` and arrows `"1<-2, ..."`.
pub fn parent(order: &[usize], text: &str) -> ParentGraph {
    let arrows: Vec<(NodeId, NodeId)> = edges(text).into_iter().map(|e| (e.head, e.tail)).collect();
    ParentGraph::from_arrows(ids(order), &arrows).unwrap()
}

pub fn spec(c: &[usize], m: &[usize]) -> MarginalConditionSpec {
    MarginalConditionSpec::new(ids(c), ids(m))
}

/// Edge set as display strings, for readable assertions.
pub fn edge_strings(g: &SummaryGraph) -> BTreeSet<String> {
    g.edge_set().iter().map(|e| e.to_string()).collect()
}

pub fn strings(text: &str) -> BTreeSet<String> {
    edges(text).into_iter().map(|e| e.normalized().to_string()).collect()
}
