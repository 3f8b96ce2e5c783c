//! Random graphs, specs and matrices for tests and benchmarks.

use alloc::vec::Vec;

use rand::Rng;

use crate::edge_matrix::{BinaryMatrix, RealMatrix};
use crate::error::Result;
use crate::graph_model::{NodeId, ParentGraph, SummaryGraph};
use crate::transform::{summary_from_parent, MarginalConditionSpec};

/// Parent graph on nodes `1..=n` in that order, each admissible arrow present
/// with probability `p`. With `connected`, every node after the first also
/// gets an arrow into a random younger node.
pub fn random_parent_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64, connected: bool) -> ParentGraph {
    let mut amat = BinaryMatrix::identity(n);
    for k in 1..n {
        for i in 0..k {
            if rng.random_bool(p) {
                amat.set(i, k, true);
            }
        }
        if connected {
            let j = rng.random_range(0..k);
            amat.set(j, k, true);
        }
    }
    let order = (1..=n).map(NodeId).collect();
    ParentGraph::from_matrix(order, amat).expect("unit upper-triangular by construction")
}

/// Each node goes into `C` with probability `pc`, otherwise into `M` with
/// probability `pm`.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, nodes: &[NodeId], pc: f64, pm: f64) -> MarginalConditionSpec {
    let mut spec = MarginalConditionSpec::default();
    for &x in nodes {
        if rng.random_bool(pc) {
            spec.conditioning.push(x);
        } else if rng.random_bool(pm) {
            spec.marginalising.push(x);
        }
    }
    spec
}

/// Summary graph of a random parent graph under a random spec.
pub fn random_summary_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Result<SummaryGraph> {
    let g = random_parent_graph(rng, n, p, false);
    let spec = random_spec(rng, g.order(), 0.2, 0.3);
    summary_from_parent(&g, &spec)
}

pub fn random_binary<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, p: f64) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(rows, cols);
    for i in 0..rows {
        for k in 0..cols {
            m.set(i, k, rng.random_bool(p));
        }
    }
    m
}

/// Symmetric, strictly diagonally dominant matrix with entries in `[-1, 1]`
/// off the diagonal; positive definite and far from singular.
pub fn random_well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealMatrix {
    let mut m = RealMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..i {
            let x = rng.random_range(-1.0..=1.0);
            m[(i, k)] = x;
            m[(k, i)] = x;
        }
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&k| k != i).map(|k| libm::fabs(m[(i, k)])).sum();
        m[(i, i)] = off + rng.random_range(1.0..=2.0);
    }
    m
}

/// Distinct random subset of `0..n`, sorted.
pub fn random_indices<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.random_bool(p)).collect()
}
