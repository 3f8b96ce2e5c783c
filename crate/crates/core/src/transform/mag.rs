//! The maximal ancestral graph of a summary graph.

use alloc::vec::Vec;

use crate::edge_matrix::{partial_close, reflexive_closure, BinaryMatrix, NodeSubset};
use crate::error::Result;
use crate::graph_model::{Mag, SummaryGraph};

/// Builds the MAG that is Markov equivalent to `g`.
///
/// Nodes are taken in the stored u-order, in which every ancestor of node `i`
/// comes after `i`. With `c_i` the ancestors of `i` within `u`:
/// - arrow `i <- k` for `k` in `c_i ∪ v` iff `Y_i` depends on `Y_k` given the
///   rest of `c_i ∪ v`;
/// - dashed `i ~~ l` for a later non-ancestor `l` iff `Y_i`, `Y_l` stay
///   associated given `c_i ∪ c_l` (and `v`).
///
/// The concentration graph of `v` is kept.
pub fn mag_from_summary(g: &SummaryGraph) -> Result<Mag> {
    g.ensure_valid()?;
    let (du, dv) = (g.u.len(), g.v.len());
    let dn = du + dv;
    let anc = reflexive_closure(&g.h_uu);
    let all_u: Vec<usize> = (0..du).collect();
    let all_v: Vec<usize> = (du..dn).collect();

    // H_N = [[H_uu, H_uv], [0, S_vv]], W_N = blockdiag(W_uu, S_vv)
    let mut h_n = BinaryMatrix::zeros(dn, dn);
    h_n.put(&all_u, &all_u, &g.h_uu);
    h_n.put(&all_u, &all_v, &g.h_uv);
    h_n.put(&all_v, &all_v, &g.s_vv);
    let mut w_n = BinaryMatrix::zeros(dn, dn);
    w_n.put(&all_u, &all_u, &g.w_uu);
    w_n.put(&all_v, &all_v, &g.s_vv);

    let mut h_uu = BinaryMatrix::identity(du);
    let mut h_uv = BinaryMatrix::zeros(du, dv);
    let mut w_uu = BinaryMatrix::identity(du);

    for i in 0..du {
        let c_i: Vec<usize> = (0..du).filter(|&k| k != i && anc.get(i, k)).collect();
        let b: Vec<usize> = c_i.iter().copied().chain(all_v.iter().copied()).collect();
        let a = NodeSubset::new(dn, (0..du).filter(|k| !c_i.contains(k)))?;
        let k = partial_close(&h_n, &a)?;
        let q = partial_close(&w_n, &NodeSubset::new(dn, b.iter().copied())?)?;
        let ai = a.members();
        let i_in_a = ai.iter().position(|&x| x == i).expect("i is in a");
        let k_ab = k.select(ai, &b);
        let p = k_ab.or(&k.select(ai, ai).mul(&q.select(ai, &b)).mul(&k.select(&b, &b)));
        for (j, &x) in b.iter().enumerate() {
            if p.get(i_in_a, j) {
                if x < du {
                    h_uu.set(i, x, true);
                } else {
                    h_uv.set(i, x - du, true);
                }
            }
        }
    }

    for i in 0..du {
        for l in (i + 1)..du {
            if anc.get(i, l) {
                continue;
            }
            let e: Vec<usize> = (0..du).filter(|&x| x != i && x != l && (anc.get(i, x) || anc.get(l, x))).collect();
            let a = NodeSubset::new(du, (0..du).filter(|x| !e.contains(x)))?;
            let k = partial_close(&g.h_uu, &a)?;
            let q = partial_close(&g.w_uu, &NodeSubset::new(du, e.iter().copied())?)?;
            let ai = a.members();
            let k_aa = k.select(ai, ai);
            let s = k_aa.mul(&q.select(ai, ai)).mul(&k_aa.transpose());
            let (pi, pl) = (
                ai.iter().position(|&x| x == i).expect("i is in a"),
                ai.iter().position(|&x| x == l).expect("l is in a"),
            );
            if s.get(pi, pl) {
                w_uu.set(i, l, true);
                w_uu.set(l, i, true);
            }
        }
    }

    let out = SummaryGraph::from_components(g.u.clone(), g.v.clone(), h_uu, h_uv, w_uu, g.s_vv.clone())?;
    Mag::new(out.with_provenance(g.provenance().cloned()))
}
