//! Graph derivations: summary graphs from parent graphs or from other summary
//! graphs, the one-node-at-a-time route, induced covariance/concentration and
//! regression graphs, and the MAG of a summary graph.

mod mag;
mod stepwise;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

pub use mag::mag_from_summary;
pub use stepwise::{conditioning_rule, marginalising_rule, step_condition, step_marginalise, stepwise, Step};

use crate::edge_matrix::{ancestor_closure, partial_close, reflexive_closure, BinaryMatrix, NodeSubset};
use crate::error::{Error, Result};
use crate::graph_model::{NodeId, ParentGraph, Provenance, SummaryGraph};

/// Nodes to condition on (`C`) and to marginalise over (`M`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarginalConditionSpec {
    pub conditioning: Vec<NodeId>,
    pub marginalising: Vec<NodeId>,
}

impl MarginalConditionSpec {
    pub fn new(conditioning: Vec<NodeId>, marginalising: Vec<NodeId>) -> Self {
        MarginalConditionSpec { conditioning, marginalising }
    }

    pub fn is_empty(&self) -> bool {
        self.conditioning.is_empty() && self.marginalising.is_empty()
    }

    /// Checks membership in `nodes`, duplicates and overlap.
    pub fn check(&self, nodes: &[NodeId]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &n in &self.conditioning {
            if !nodes.contains(&n) {
                return Err(Error::UnknownNode(n));
            }
            seen.insert(n);
        }
        let mut seen_m = BTreeSet::new();
        for &n in &self.marginalising {
            if !nodes.contains(&n) {
                return Err(Error::UnknownNode(n));
            }
            if seen.contains(&n) {
                return Err(Error::OverlappingSpec(n));
            }
            seen_m.insert(n);
        }
        Ok(())
    }

    /// Union of two specs, keeping first-seen order.
    pub fn combined(&self, other: &Self) -> Self {
        let merge = |a: &[NodeId], b: &[NodeId]| {
            let mut out: Vec<NodeId> = Vec::new();
            for &n in a.iter().chain(b) {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
            out
        };
        MarginalConditionSpec {
            conditioning: merge(&self.conditioning, &other.conditioning),
            marginalising: merge(&self.marginalising, &other.marginalising),
        }
    }
}

/// Partition of a parent graph's nodes induced by a spec. All lists follow
/// the generating order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitRecord {
    /// Nodes with no descendant in `C ∪ F`.
    pub outsiders: Vec<NodeId>,
    /// Ancestors of `C` outside `C`.
    pub foster: Vec<NodeId>,
    pub u: Vec<NodeId>,
    pub v: Vec<NodeId>,
    /// Marginalised outsiders.
    pub p: Vec<NodeId>,
    /// Marginalised foster nodes.
    pub q: Vec<NodeId>,
}

/// Index form of a split, positions in the parent's order.
struct SplitIdx {
    c: Vec<usize>,
    o: Vec<usize>,
    f: Vec<usize>,
    u: Vec<usize>,
    v: Vec<usize>,
    p: Vec<usize>,
    q: Vec<usize>,
}

fn split_indices(g: &ParentGraph, spec: &MarginalConditionSpec) -> Result<SplitIdx> {
    spec.check(g.order())?;
    let n = g.dim();
    let pos = |x: &NodeId| g.position(*x).ok_or(Error::UnknownNode(*x));
    let mut in_c = alloc::vec![false; n];
    let mut in_m = alloc::vec![false; n];
    for x in &spec.conditioning {
        in_c[pos(x)?] = true;
    }
    for x in &spec.marginalising {
        in_m[pos(x)?] = true;
    }
    let anc = ancestor_closure(g.amat())?;
    let in_f: Vec<bool> = (0..n).map(|k| !in_c[k] && (0..n).any(|c| in_c[c] && anc.get(c, k))).collect();
    let pick = |pred: &dyn Fn(usize) -> bool| (0..n).filter(|&i| pred(i)).collect::<Vec<_>>();
    Ok(SplitIdx {
        c: pick(&|i| in_c[i]),
        o: pick(&|i| !in_c[i] && !in_f[i]),
        f: pick(&|i| in_f[i]),
        u: pick(&|i| !in_c[i] && !in_f[i] && !in_m[i]),
        v: pick(&|i| in_f[i] && !in_m[i]),
        p: pick(&|i| !in_c[i] && !in_f[i] && in_m[i]),
        q: pick(&|i| in_f[i] && in_m[i]),
    })
}

impl SplitRecord {
    pub fn compute(g: &ParentGraph, spec: &MarginalConditionSpec) -> Result<Self> {
        let s = split_indices(g, spec)?;
        let ids = |xs: &[usize]| xs.iter().map(|&i| g.order()[i]).collect::<Vec<_>>();
        Ok(SplitRecord {
            outsiders: ids(&s.o),
            foster: ids(&s.f),
            u: ids(&s.u),
            v: ids(&s.v),
            p: ids(&s.p),
            q: ids(&s.q),
        })
    }
}

/// Positions of `sub` inside `within`; every member must be present.
pub(crate) fn positions_in(within: &[usize], sub: &[usize]) -> Vec<usize> {
    sub.iter().map(|x| within.iter().position(|y| y == x).expect("subset member")).collect()
}

/// Summary graph obtained from a parent graph after conditioning on `C` and
/// marginalising over `M`, computed by partial closure of the edge matrix.
pub fn summary_from_parent(g: &ParentGraph, spec: &MarginalConditionSpec) -> Result<SummaryGraph> {
    g.ensure_valid()?;
    let s = split_indices(g, spec)?;
    let n = g.dim();
    let amat = g.amat();

    // D = zer_p(A) over all of V
    let d = partial_close(amat, &NodeSubset::new(n, s.p.iter().copied())?)?;

    // concentration graph of F given C, then closed over q
    let mut r: Vec<usize> = s.c.iter().chain(&s.f).copied().collect();
    r.sort_unstable();
    let a_rr = amat.select(&r, &r);
    let conc_rr = a_rr.transpose().mul(&a_rr);
    let f_in_r = positions_in(&r, &s.f);
    let s_ff = conc_rr.select(&f_in_r, &f_in_r);
    let q_in_f = positions_in(&s.f, &s.q);
    let v_in_f = positions_in(&s.f, &s.v);
    let z = partial_close(&s_ff, &NodeSubset::new(s.f.len(), q_in_f.iter().copied())?)?;
    let s_qq = z.select(&q_in_f, &q_in_f);
    let p_qv = z.select(&q_in_f, &v_in_f);
    let s_vv = z.select(&v_in_f, &v_in_f);

    let h_uu = d.select(&s.u, &s.u);
    let d_uq = d.select(&s.u, &s.q);
    let h_uv = d.select(&s.u, &s.v).or(&d_uq.mul(&p_qv));
    let d_up = d.select(&s.u, &s.p);
    let w_uu = BinaryMatrix::identity(s.u.len())
        .or(&d_up.mul(&d_up.transpose()))
        .or(&d_uq.mul(&s_qq).mul(&d_uq.transpose()));

    let ids = |xs: &[usize]| xs.iter().map(|&i| g.order()[i]).collect::<Vec<_>>();
    let out = SummaryGraph::from_components(ids(&s.u), ids(&s.v), h_uu, h_uv, w_uu, s_vv)?;
    let split = SplitRecord::compute(g, spec)?;
    Ok(out.with_provenance(Some(Provenance { parent: g.clone(), spec: spec.clone(), split })))
}

/// Provenance for a graph derived from `g` by the further spec `extra`.
pub(crate) fn extended_provenance(g: &SummaryGraph, extra: &MarginalConditionSpec) -> Option<Provenance> {
    let p = g.provenance()?;
    let spec = p.spec.combined(extra);
    let split = SplitRecord::compute(&p.parent, &spec).ok()?;
    Some(Provenance { parent: p.parent.clone(), spec, split })
}

/// Summary graph obtained from another summary graph after conditioning on
/// `C` and marginalising over `M`, computed on its edge-matrix components.
pub fn summary_from_summary(g: &SummaryGraph, spec: &MarginalConditionSpec) -> Result<SummaryGraph> {
    g.ensure_valid()?;
    let nodes = g.nodes();
    spec.check(&nodes)?;
    let (du, dv) = (g.u.len(), g.v.len());
    let dn = du + dv;
    let pos = |x: &NodeId| nodes.iter().position(|y| y == x).expect("checked");
    let mut in_c = alloc::vec![false; dn];
    let mut in_m = alloc::vec![false; dn];
    for x in &spec.conditioning {
        in_c[pos(x)] = true;
    }
    for x in &spec.marginalising {
        in_m[pos(x)] = true;
    }

    // split of mu = u: r = conditioned nodes of u and their ancestors in u
    let anc = reflexive_closure(&g.h_uu);
    let in_r: Vec<bool> = (0..du).map(|k| (0..du).any(|c| in_c[c] && anc.get(c, k))).collect();
    let r: Vec<usize> = (0..du).filter(|&i| in_r[i]).collect();
    let o: Vec<usize> = (0..du).filter(|&i| !in_r[i]).collect();
    let h: Vec<usize> = o.iter().copied().filter(|&i| in_m[i]).collect();
    // psi = r then nu; phi = psi without C
    let psi: Vec<usize> = r.iter().copied().chain(du..dn).collect();
    let phi: Vec<usize> = psi.iter().copied().filter(|&i| !in_c[i]).collect();
    let l: Vec<usize> = phi.iter().copied().filter(|&i| in_m[i]).collect();
    let u_new: Vec<usize> = o.iter().copied().filter(|&i| !in_m[i]).collect();
    let v_new: Vec<usize> = phi.iter().copied().filter(|&i| !in_m[i]).collect();

    // B = [H_uu H_uv] over all of N
    let mut b = BinaryMatrix::zeros(du, dn);
    let all_u: Vec<usize> = (0..du).collect();
    let all_v: Vec<usize> = (du..dn).collect();
    b.put(&all_u, &all_u, &g.h_uu);
    b.put(&all_u, &all_v, &g.h_uv);

    let q = partial_close(&g.w_uu, &NodeSubset::new(du, r.iter().copied())?)?;
    let b_rpsi = b.select(&r, &psi);
    let c_opsi = b.select(&o, &psi).or(&q.select(&o, &r).mul(&b_rpsi));
    let mut s_psi = b_rpsi.transpose().mul(&q.select(&r, &r)).mul(&b_rpsi);
    let nu_in_psi: Vec<usize> = (r.len()..psi.len()).collect();
    let s_nu = s_psi.select(&nu_in_psi, &nu_in_psi).or(&g.s_vv);
    s_psi.put(&nu_in_psi, &nu_in_psi, &s_nu);

    let phi_in_psi = positions_in(&psi, &phi);
    let s_phi = s_psi.select(&phi_in_psi, &phi_in_psi);
    let c_ophi = c_opsi.select(&(0..o.len()).collect::<Vec<_>>(), &phi_in_psi);

    // T over (o, phi) = [[B_oo, C_ophi], [0, S_phiphi]], closed over h and l
    let t_nodes: Vec<usize> = o.iter().chain(&phi).copied().collect();
    let o_in_t: Vec<usize> = (0..o.len()).collect();
    let phi_in_t: Vec<usize> = (o.len()..t_nodes.len()).collect();
    let mut t = BinaryMatrix::zeros(t_nodes.len(), t_nodes.len());
    t.put(&o_in_t, &o_in_t, &g.h_uu.select(&o, &o));
    t.put(&o_in_t, &phi_in_t, &c_ophi);
    t.put(&phi_in_t, &phi_in_t, &s_phi);
    let hl_in_t: Vec<usize> = positions_in(&t_nodes, &h).into_iter().chain(positions_in(&t_nodes, &l)).collect();
    let k = partial_close(&t, &NodeSubset::new(t_nodes.len(), hl_in_t)?)?;

    let u_in_t = positions_in(&t_nodes, &u_new);
    let v_in_t = positions_in(&t_nodes, &v_new);
    let h_in_t = positions_in(&t_nodes, &h);
    let l_in_t = positions_in(&t_nodes, &l);
    let k_uh = k.select(&u_in_t, &h_in_t);
    let k_ul = k.select(&u_in_t, &l_in_t);
    let s_ll = k.select(&l_in_t, &l_in_t);
    let q_uu = q.select(&u_new, &u_new);
    let q_uh = q.select(&u_new, &h);
    let q_hh = q.select(&h, &h);
    let w_uu = q_uu
        .or(&k_uh.mul(&q_uh.transpose()))
        .or(&q_uh.mul(&k_uh.transpose()))
        .or(&k_uh.mul(&q_hh).mul(&k_uh.transpose()))
        .or(&k_ul.mul(&s_ll).mul(&k_ul.transpose()));

    let ids = |xs: &[usize]| xs.iter().map(|&i| nodes[i]).collect::<Vec<_>>();
    let out = SummaryGraph::from_components(
        ids(&u_new),
        ids(&v_new),
        k.select(&u_in_t, &u_in_t),
        k.select(&u_in_t, &v_in_t),
        w_uu,
        k.select(&v_in_t, &v_in_t),
    )?;
    Ok(out.with_provenance(extended_provenance(g, spec)))
}

/// Covariance graph induced by a parent graph, `In[A⁻ A⁻ᵀ]`: a zero at
/// (i,k) means the graph implies `i ⊥ k`.
pub fn induced_covariance_graph(g: &ParentGraph) -> Result<BinaryMatrix> {
    let anc = ancestor_closure(g.amat())?;
    Ok(anc.mul(&anc.transpose()))
}

/// Concentration graph induced by a parent graph, `In[Aᵀ A]`: a zero at
/// (i,k) means the graph implies `i ⊥ k | rest`.
pub fn induced_concentration_graph(g: &ParentGraph) -> Result<BinaryMatrix> {
    g.ensure_valid()?;
    Ok(g.amat().transpose().mul(g.amat()))
}

/// Edge matrices of the regression graph for `Y_a` given `Y_b` and for `Y_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegressionGraph {
    /// Covariance graph of `a` given `b`, `S_aa|b`.
    pub s_aa_b: BinaryMatrix,
    /// Dependence of `a` on `b`, `P_a|b`.
    pub p_a_b: BinaryMatrix,
    /// Concentration graph of `b`, `S^{bb.a}`.
    pub s_bb_a: BinaryMatrix,
}

/// Regression graph for the split of the generating order after its first
/// `da` nodes: `a` = responses, `b` = the rest.
pub fn regression_graph_from_parent(g: &ParentGraph, da: usize) -> Result<RegressionGraph> {
    g.ensure_valid()?;
    let n = g.dim();
    if da > n {
        return Err(Error::InvalidInput(alloc::format!("split after {da} of {n} nodes")));
    }
    let a: Vec<usize> = (0..da).collect();
    let b: Vec<usize> = (da..n).collect();
    let amat = g.amat();
    let k = partial_close(amat, &NodeSubset::new(n, a.iter().copied())?)?;
    let k_aa = k.select(&a, &a);
    let a_bb = amat.select(&b, &b);
    Ok(RegressionGraph {
        s_aa_b: k_aa.mul(&k_aa.transpose()),
        p_a_b: k.select(&a, &b),
        s_bb_a: a_bb.transpose().mul(&a_bb),
    })
}
