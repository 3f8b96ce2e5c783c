//! Gaussian linear triangular systems used as a numeric oracle for the graph
//! derivations: implied covariances, regressions, linear summary models and
//! least-squares coefficients of the MAG model.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::edge_matrix::{
    indicator_with_tol, invert, partial_invert, put, reflexive_closure, select, BinaryMatrix, NodeSubset, RealMatrix,
};
use crate::error::{Error, Result};
use crate::graph_model::{NodeId, ParentGraph};
use crate::transform::{positions_in, summary_from_parent, MarginalConditionSpec, SplitRecord};

/// Magnitude below which a parameter counts as a structural zero.
pub const STRUCTURAL_ZERO_TOL: f64 = 1e-9;
/// Magnitude a structurally non-zero parameter must exceed in some draw.
pub const GENERIC_TOL: f64 = 1e-6;
/// Tolerance for exact linear-algebra identities.
pub const IDENTITY_TOL: f64 = 1e-10;

/// `A Y = ε` with `A` unit upper-triangular and `cov(ε) = Δ` diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularSystem {
    order: Vec<NodeId>,
    a: RealMatrix,
    delta: Vec<f64>,
}

impl TriangularSystem {
    pub fn new(order: Vec<NodeId>, a: RealMatrix, delta: Vec<f64>) -> Result<Self> {
        let n = order.len();
        if a.nrows() != n || a.ncols() != n || delta.len() != n {
            return Err(Error::Shape(format!("system over {n} nodes has A {}x{} and {} variances", a.nrows(), a.ncols(), delta.len())));
        }
        for i in 0..n {
            if (a[(i, i)] - 1.0).abs() > IDENTITY_TOL {
                return Err(Error::InvalidInput(format!("A has {} on the diagonal at {}", a[(i, i)], order[i])));
            }
            for k in 0..i {
                if a[(i, k)] != 0.0 {
                    return Err(Error::InvalidInput(format!("A is not upper-triangular at ({},{})", order[i], order[k])));
                }
            }
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("A has non-finite entries".into()));
        }
        if let Some(i) = delta.iter().position(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::InvalidInput(format!("residual variance of {} is not positive", order[i])));
        }
        Ok(TriangularSystem { order, a, delta })
    }

    /// System on `g` from equation coefficients `(i, k, β)` meaning
    /// `Y_i = β Y_k + ...`, so `A_ik = -β`. Unlisted variances are one.
    pub fn from_coefficients(g: &ParentGraph, coefficients: &[(NodeId, NodeId, f64)], variances: &[(NodeId, f64)]) -> Result<Self> {
        let n = g.dim();
        let mut a = RealMatrix::identity(n, n);
        for &(i, k, beta) in coefficients {
            if !g.has_arrow(i, k) {
                return Err(Error::EdgeAbsent(i, k));
            }
            let (pi, pk) = (g.position(i).expect("arrow"), g.position(k).expect("arrow"));
            a[(pi, pk)] = -beta;
        }
        let mut delta = alloc::vec![1.0; n];
        for &(x, var) in variances {
            delta[g.position(x).ok_or(Error::UnknownNode(x))?] = var;
        }
        Self::new(g.order().to_vec(), a, delta)
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn a(&self) -> &RealMatrix {
        &self.a
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    /// Equation coefficient of `Y_k` in the equation for `Y_i`, `-A_ik`.
    pub fn coefficient(&self, i: NodeId, k: NodeId) -> Option<f64> {
        let pi = self.order.iter().position(|&x| x == i)?;
        let pk = self.order.iter().position(|&x| x == k)?;
        Some(-self.a[(pi, pk)])
    }

    /// Parent graph given by the non-zero pattern of `A`.
    pub fn graph(&self) -> ParentGraph {
        let amat = indicator_with_tol(&self.a, 0.0).expect("entries are finite");
        ParentGraph::from_matrix(self.order.clone(), amat).expect("shape checked")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    /// Range of coefficient magnitudes; signs are random.
    pub coef_range: (f64, f64),
    pub var_range: (f64, f64),
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions { coef_range: (0.3, 0.9), var_range: (0.5, 1.5) }
    }
}

/// Draws a system over `g`: one non-zero coefficient per arrow, deterministic
/// in `seed`.
pub fn sample_system(g: &ParentGraph, seed: u64, opts: &SamplingOptions) -> Result<TriangularSystem> {
    g.ensure_valid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.dim();
    let mut a = RealMatrix::identity(n, n);
    for (i, k) in g.amat().off_diagonal_ones() {
        let mag = rng.random_range(opts.coef_range.0..=opts.coef_range.1);
        a[(i, k)] = if rng.random_bool(0.5) { mag } else { -mag };
    }
    let delta = (0..n).map(|_| rng.random_range(opts.var_range.0..=opts.var_range.1)).collect();
    TriangularSystem::new(g.order().to_vec(), a, delta)
}

/// Covariance and concentration matrices of one distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariancePair {
    pub sigma: RealMatrix,
    pub concentration: RealMatrix,
}

impl CovariancePair {
    pub fn from_covariance(sigma: RealMatrix) -> Result<Self> {
        let all: Vec<usize> = (0..sigma.nrows()).collect();
        let concentration = invert(&sigma, &all)?;
        Ok(CovariancePair { sigma, concentration })
    }
}

/// `Σ = A⁻¹ Δ A⁻ᵀ` and `Σ⁻¹ = Aᵀ Δ⁻¹ A`.
pub fn implied_covariance(sys: &TriangularSystem) -> Result<CovariancePair> {
    let all: Vec<usize> = (0..sys.order.len()).collect();
    let a_inv = invert(&sys.a, &all)?;
    let delta = RealMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&sys.delta));
    let delta_inv = RealMatrix::from_diagonal(&nalgebra::DVector::from_iterator(sys.delta.len(), sys.delta.iter().map(|d| 1.0 / d)));
    let sigma = &a_inv * &delta * a_inv.transpose();
    let concentration = sys.a.transpose() * delta_inv * &sys.a;
    Ok(CovariancePair { sigma, concentration })
}

/// Same system for variables rescaled to unit variance: `A' = D⁻¹ A D`,
/// `Δ' = D⁻¹ Δ D⁻¹` with `D` the marginal standard deviations.
pub fn standardize(sys: &TriangularSystem) -> Result<TriangularSystem> {
    let cov = implied_covariance(sys)?;
    let n = sys.order.len();
    let sd: Vec<f64> = (0..n).map(|i| libm::sqrt(cov.sigma[(i, i)])).collect();
    let a = RealMatrix::from_fn(n, n, |i, k| sys.a[(i, k)] * sd[k] / sd[i]);
    let delta = (0..n).map(|i| sys.delta[i] / (sd[i] * sd[i])).collect();
    TriangularSystem::new(sys.order.clone(), a, delta)
}

/// Blocks of `inv_a(Σ⁻¹)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regression {
    /// Regression coefficients of `Y_a` on `Y_b`, `Π_a|b`.
    pub pi: RealMatrix,
    /// Conditional covariance `Σ_aa|b`.
    pub sigma_aa_b: RealMatrix,
    /// Marginal concentration of `Y_b`, `Σ^{bb.a}`.
    pub conc_bb_a: RealMatrix,
}

/// Regression of `Y_a` on `Y_b` by partial inversion of the concentration
/// matrix on `a`; `a` and `b` partition the variables.
pub fn regress(cov: &CovariancePair, a: &NodeSubset, b: &NodeSubset) -> Result<Regression> {
    let n = cov.sigma.nrows();
    let mut all: Vec<usize> = a.members().iter().chain(b.members()).copied().collect();
    all.sort_unstable();
    if all != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidInput("a and b must partition the variables".into()));
    }
    let swept = partial_invert(&cov.concentration, a)?;
    let (ai, bi) = (a.members(), b.members());
    Ok(Regression {
        pi: select(&swept, ai, bi),
        sigma_aa_b: select(&swept, ai, ai),
        conc_bb_a: select(&swept, bi, bi),
    })
}

/// Partial correlation of variables `i` and `k` given `given`.
pub fn partial_correlation(cov: &CovariancePair, i: usize, k: usize, given: &NodeSubset) -> Result<f64> {
    let n = cov.sigma.nrows();
    if i == k || i >= n || k >= n || given.contains(i) || given.contains(k) {
        return Err(Error::InvalidInput("i, k must be distinct and outside the conditioning set".into()));
    }
    if given.members().iter().any(|&g| g >= n) {
        return Err(Error::InvalidInput("conditioning index out of range".into()));
    }
    let idx: Vec<usize> = [i, k].into_iter().chain(given.members().iter().copied()).collect();
    let sub = CovariancePair::from_covariance(select(&cov.sigma, &idx, &idx))?;
    let m = idx.len();
    let r = regress(&sub, &NodeSubset::new(m, [0, 1])?, &NodeSubset::new(m, 2..m)?)?;
    let s = &r.sigma_aa_b;
    Ok(s[(0, 1)] / libm::sqrt(s[(0, 0)] * s[(1, 1)]))
}

/// `Σ_aa - Σ_ab Σ_bb⁻¹ Σ_ba`.
fn conditional_covariance(sigma: &RealMatrix, a: &[usize], b: &[usize]) -> Result<RealMatrix> {
    let s_aa = select(sigma, a, a);
    if b.is_empty() {
        return Ok(s_aa);
    }
    let s_ab = select(sigma, a, b);
    let s_bb_inv = invert(&select(sigma, b, b), b)?;
    Ok(s_aa - &s_ab * s_bb_inv * s_ab.transpose())
}

/// `H_uu Y_u + H_uv Y_v = η_u` with `cov(η_u) = W_uu`, `η_u` uncorrelated
/// with `Y_v`, and `Y_v` with concentration matrix `conc_vv`; everything
/// conditional on the conditioning set.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSummaryModel {
    pub u: Vec<NodeId>,
    pub v: Vec<NodeId>,
    pub h_uu: RealMatrix,
    pub h_uv: RealMatrix,
    pub w_uu: RealMatrix,
    pub conc_vv: RealMatrix,
}

impl LinearSummaryModel {
    pub fn nodes(&self) -> Vec<NodeId> {
        self.u.iter().chain(&self.v).copied().collect()
    }

    fn blocks(&self) -> Result<(RealMatrix, RealMatrix)> {
        let (du, dv) = (self.u.len(), self.v.len());
        let all_u: Vec<usize> = (0..du).collect();
        let all_v: Vec<usize> = (du..du + dv).collect();
        let mut h = RealMatrix::identity(du + dv, du + dv);
        put(&mut h, &all_u, &all_u, &self.h_uu);
        put(&mut h, &all_u, &all_v, &self.h_uv);
        let mut w = RealMatrix::zeros(du + dv, du + dv);
        put(&mut w, &all_u, &all_u, &self.w_uu);
        let local: Vec<usize> = (0..dv).collect();
        put(&mut w, &all_v, &all_v, &invert(&self.conc_vv, &local)?);
        Ok((h, w))
    }

    /// Covariance and concentration of `(Y_u, Y_v)`, `Σ⁻¹ = H_Nᵀ W_N⁻¹ H_N`.
    pub fn joint(&self) -> Result<CovariancePair> {
        let (h, w) = self.blocks()?;
        let all: Vec<usize> = (0..h.nrows()).collect();
        let conc = h.transpose() * invert(&w, &all)? * &h;
        let sigma = invert(&conc, &all)?;
        Ok(CovariancePair { sigma, concentration: conc })
    }

    /// `Π_u|v = -H_uu⁻¹ H_uv`.
    pub fn reduced_form(&self) -> Result<RealMatrix> {
        let all: Vec<usize> = (0..self.u.len()).collect();
        Ok(-invert(&self.h_uu, &all)? * &self.h_uv)
    }

    /// Ancestor relation within `u` read from the non-zeros of `H_uu`.
    fn ancestors(&self) -> BinaryMatrix {
        reflexive_closure(&indicator_with_tol(&self.h_uu, STRUCTURAL_ZERO_TOL).expect("finite"))
    }
}

fn close_enough(a: &RealMatrix, b: &RealMatrix, tol: f64) -> bool {
    let scale = a.amax().max(b.amax()).max(1.0);
    (a - b).amax() <= tol * scale
}

/// Linear summary model of `sys` after conditioning on `C` and marginalising
/// over `M`. Checks `H_uu⁻¹ W_uu H_uu⁻ᵀ = Σ_uu|vC` against the implied
/// covariance.
pub fn derive_linear_summary(sys: &TriangularSystem, spec: &MarginalConditionSpec) -> Result<LinearSummaryModel> {
    let g = sys.graph();
    let split = SplitRecord::compute(&g, spec)?;
    let pos = |xs: &[NodeId]| xs.iter().map(|x| g.position(*x).expect("split node")).collect::<Vec<_>>();
    let (u, v, p, q, f) = (pos(&split.u), pos(&split.v), pos(&split.p), pos(&split.q), pos(&split.foster));
    let c = pos(&spec.conditioning);
    let n = g.dim();

    let d = partial_invert(&sys.a, &NodeSubset::new(n, p.iter().copied())?)?;

    let mut r: Vec<usize> = c.iter().chain(&f).copied().collect();
    r.sort_unstable();
    let a_rr = select(&sys.a, &r, &r);
    let delta_rr_inv = RealMatrix::from_diagonal(&nalgebra::DVector::from_iterator(r.len(), r.iter().map(|&i| 1.0 / sys.delta[i])));
    let conc_rr = a_rr.transpose() * delta_rr_inv * &a_rr;
    let f_in_r = positions_in(&r, &f);
    let conc_ff = select(&conc_rr, &f_in_r, &f_in_r);
    let q_in_f = positions_in(&f, &q);
    let v_in_f = positions_in(&f, &v);
    let z = partial_invert(&conc_ff, &NodeSubset::new(f.len(), q_in_f.iter().copied())?)?;
    let sigma_qq = select(&z, &q_in_f, &q_in_f);
    let pi_qv = select(&z, &q_in_f, &v_in_f);
    let conc_vv = select(&z, &v_in_f, &v_in_f);

    let h_uu = select(&d, &u, &u);
    let d_uq = select(&d, &u, &q);
    let h_uv = select(&d, &u, &v) + &d_uq * pi_qv;
    let d_up = select(&d, &u, &p);
    let delta = |idx: &[usize]| RealMatrix::from_diagonal(&nalgebra::DVector::from_iterator(idx.len(), idx.iter().map(|&i| sys.delta[i])));
    let w_uu = delta(&u) + &d_up * delta(&p) * d_up.transpose() + &d_uq * sigma_qq * d_uq.transpose();

    let model = LinearSummaryModel { u: split.u.clone(), v: split.v.clone(), h_uu, h_uv, w_uu, conc_vv };

    let cov = implied_covariance(sys)?;
    let given: Vec<usize> = v.iter().chain(&c).copied().collect();
    let target = conditional_covariance(&cov.sigma, &u, &given)?;
    let all_u: Vec<usize> = (0..u.len()).collect();
    let h_inv = invert(&model.h_uu, &all_u)?;
    let got = &h_inv * &model.w_uu * h_inv.transpose();
    if !close_enough(&got, &target, 1e-9) {
        return Err(Error::Internal(format!(
            "summary model misses the conditional covariance of u by {:e}",
            (got - target).amax()
        )));
    }
    Ok(model)
}

/// Linear summary model of an existing model after further conditioning on
/// `C` and marginalising over `M`.
pub fn derive_linear_summary_from_summary(model: &LinearSummaryModel, spec: &MarginalConditionSpec) -> Result<LinearSummaryModel> {
    let nodes = model.nodes();
    spec.check(&nodes)?;
    let (du, dv) = (model.u.len(), model.v.len());
    let dn = du + dv;
    let in_c: Vec<bool> = nodes.iter().map(|x| spec.conditioning.contains(x)).collect();
    let in_m: Vec<bool> = nodes.iter().map(|x| spec.marginalising.contains(x)).collect();

    let anc = model.ancestors();
    let r: Vec<usize> = (0..du).filter(|&k| (0..du).any(|c| in_c[c] && anc.get(c, k))).collect();
    let o: Vec<usize> = (0..du).filter(|k| !r.contains(k)).collect();
    let h: Vec<usize> = o.iter().copied().filter(|&i| in_m[i]).collect();
    let psi: Vec<usize> = r.iter().copied().chain(du..dn).collect();
    let phi: Vec<usize> = psi.iter().copied().filter(|&i| !in_c[i]).collect();
    let l: Vec<usize> = phi.iter().copied().filter(|&i| in_m[i]).collect();
    let u_new: Vec<usize> = o.iter().copied().filter(|&i| !in_m[i]).collect();
    let v_new: Vec<usize> = phi.iter().copied().filter(|&i| !in_m[i]).collect();

    let all_u: Vec<usize> = (0..du).collect();
    let all_v: Vec<usize> = (du..dn).collect();
    let mut b = RealMatrix::zeros(du, dn);
    put(&mut b, &all_u, &all_u, &model.h_uu);
    put(&mut b, &all_u, &all_v, &model.h_uv);

    let q = partial_invert(&model.w_uu, &NodeSubset::new(du, r.iter().copied())?)?;
    let b_rpsi = select(&b, &r, &psi);
    let c_opsi = select(&b, &o, &psi) - select(&q, &o, &r) * &b_rpsi;
    let mut conc_psi = b_rpsi.transpose() * select(&q, &r, &r) * &b_rpsi;
    let nu_in_psi: Vec<usize> = (r.len()..psi.len()).collect();
    let nu_block = select(&conc_psi, &nu_in_psi, &nu_in_psi) + &model.conc_vv;
    put(&mut conc_psi, &nu_in_psi, &nu_in_psi, &nu_block);

    let phi_in_psi = positions_in(&psi, &phi);
    let conc_phi = select(&conc_psi, &phi_in_psi, &phi_in_psi);
    let o_local: Vec<usize> = (0..o.len()).collect();
    let c_ophi = select(&c_opsi, &o_local, &phi_in_psi);

    let t_nodes: Vec<usize> = o.iter().chain(&phi).copied().collect();
    let phi_in_t: Vec<usize> = (o.len()..t_nodes.len()).collect();
    let mut t = RealMatrix::zeros(t_nodes.len(), t_nodes.len());
    put(&mut t, &o_local, &o_local, &select(&model.h_uu, &o, &o));
    put(&mut t, &o_local, &phi_in_t, &c_ophi);
    put(&mut t, &phi_in_t, &phi_in_t, &conc_phi);
    let hl: Vec<usize> = positions_in(&t_nodes, &h).into_iter().chain(positions_in(&t_nodes, &l)).collect();
    let k = partial_invert(&t, &NodeSubset::new(t_nodes.len(), hl)?)?;

    let u_t = positions_in(&t_nodes, &u_new);
    let v_t = positions_in(&t_nodes, &v_new);
    let h_t = positions_in(&t_nodes, &h);
    let l_t = positions_in(&t_nodes, &l);
    let k_uh = select(&k, &u_t, &h_t);
    let k_ul = select(&k, &u_t, &l_t);
    let q_uh = select(&q, &u_new, &h);
    let l_in_phi = positions_in(&phi, &l);
    let conc_ll = select(&conc_phi, &l_in_phi, &l_in_phi);
    let w_uu = select(&q, &u_new, &u_new) - &k_uh * q_uh.transpose() - &q_uh * k_uh.transpose()
        + &k_uh * select(&q, &h, &h) * k_uh.transpose()
        + &k_ul * conc_ll * k_ul.transpose();

    Ok(LinearSummaryModel {
        u: u_new.iter().map(|&i| nodes[i]).collect(),
        v: v_new.iter().map(|&i| nodes[i]).collect(),
        h_uu: select(&k, &u_t, &u_t),
        h_uv: select(&k, &u_t, &v_t),
        w_uu,
        conc_vv: select(&k, &v_t, &v_t),
    })
}

/// Least-squares coefficients of the MAG model: row `i` holds the regression
/// of `Y_i` on its ancestors within `u` and on `Y_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagCoefficients {
    pub rows: Vec<NodeId>,
    /// `u` then `v`.
    pub cols: Vec<NodeId>,
    /// Zero outside each row's regressors.
    pub coef: RealMatrix,
}

impl MagCoefficients {
    pub fn get(&self, i: NodeId, k: NodeId) -> Option<f64> {
        let r = self.rows.iter().position(|&x| x == i)?;
        let c = self.cols.iter().position(|&x| x == k)?;
        Some(self.coef[(r, c)])
    }
}

/// Computes the MAG regression coefficients from the implied joint
/// covariance and checks each row against the block formula
/// `K_ab + K_aa Q_ab K_bb` with `K = inv_a H_N`, `Q = inv_b W_N`.
pub fn mag_coefficients(model: &LinearSummaryModel) -> Result<MagCoefficients> {
    let (du, dv) = (model.u.len(), model.v.len());
    let dn = du + dv;
    let (h_n, w_n) = model.blocks()?;
    let joint = model.joint()?;
    let anc = model.ancestors();
    let mut coef = RealMatrix::zeros(du, dn);
    for i in 0..du {
        let b: Vec<usize> = (0..du).filter(|&k| k != i && anc.get(i, k)).chain(du..dn).collect();
        let a: Vec<usize> = (0..dn).filter(|k| !b.contains(k)).collect();
        let s_ib = select(&joint.sigma, &[i], &b);
        let direct = if b.is_empty() { RealMatrix::zeros(1, 0) } else { s_ib * invert(&select(&joint.sigma, &b, &b), &b)? };

        let kk = partial_invert(&h_n, &NodeSubset::new(dn, a.iter().copied())?)?;
        let qq = partial_invert(&w_n, &NodeSubset::new(dn, b.iter().copied())?)?;
        let blockwise = select(&kk, &a, &b) + select(&kk, &a, &a) * select(&qq, &a, &b) * select(&kk, &b, &b);
        let ia = a.iter().position(|&x| x == i).expect("i is a response");
        let row = blockwise.rows(ia, 1).into_owned();
        if !close_enough(&row, &direct, 1e-8) {
            return Err(Error::Internal(format!(
                "block formula for the regression of {} differs by {:e}",
                model.u[i],
                (row - &direct).amax()
            )));
        }
        for (j, &x) in b.iter().enumerate() {
            coef[(i, x)] = direct[(0, j)];
        }
    }
    Ok(MagCoefficients { rows: model.u.clone(), cols: model.nodes(), coef })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Edge-matrix zero but parameter not negligible.
    NonZero,
    /// Edge-matrix one but parameter negligible in every draw.
    NeverNonZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationViolation {
    pub seed: u64,
    pub matrix: &'static str,
    pub row: NodeId,
    pub col: NodeId,
    pub value: f64,
    pub kind: ViolationKind,
}

impl fmt::Display for VerificationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::NonZero => "structural-zero",
            ViolationKind::NeverNonZero => "never-nonzero",
        };
        write!(f, "seed={} matrix={} cell=({},{}) value={:e} {}", self.seed, self.matrix, self.row, self.col, self.value, what)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub draws: usize,
    pub cells_checked: usize,
    pub violations: Vec<VerificationViolation>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        write!(f, "draws={} cells={} violations={}", self.draws, self.cells_checked, self.violations.len())
    }
}

/// Samples `draws` systems over `g` with seeds `seed, seed+1, ...` and
/// checks every edge-matrix component of the derived summary graph against
/// the parameters of the derived linear summary model.
pub fn verify_structural_zeros(g: &ParentGraph, spec: &MarginalConditionSpec, draws: usize, seed: u64) -> Result<VerificationReport> {
    let s = summary_from_parent(g, spec)?;
    let mut report = VerificationReport { draws, ..Default::default() };
    let comps: [(&'static str, &BinaryMatrix, &[NodeId], &[NodeId]); 4] = [
        ("H_uu", s.h_uu(), s.u_nodes(), s.u_nodes()),
        ("H_uv", s.h_uv(), s.u_nodes(), s.v_nodes()),
        ("W_uu", s.w_uu(), s.u_nodes(), s.u_nodes()),
        ("S_vv", s.s_vv(), s.v_nodes(), s.v_nodes()),
    ];
    let mut largest: Vec<RealMatrix> = comps.iter().map(|(_, m, _, _)| RealMatrix::zeros(m.rows(), m.cols())).collect();
    let mut last_seed = seed;
    for j in 0..draws {
        let sd = seed.wrapping_add(j as u64);
        last_seed = sd;
        let sys = sample_system(g, sd, &SamplingOptions::default())?;
        let model = derive_linear_summary(&sys, spec)?;
        if model.u != s.u_nodes() || model.v != s.v_nodes() {
            return Err(Error::Internal("numeric and structural splits differ".into()));
        }
        let params = [&model.h_uu, &model.h_uv, &model.w_uu, &model.conc_vv];
        for (c, ((name, edges, rows, cols), p)) in comps.iter().zip(params).enumerate() {
            for r in 0..edges.rows() {
                for k in 0..edges.cols() {
                    let x = p[(r, k)];
                    report.cells_checked += 1;
                    largest[c][(r, k)] = largest[c][(r, k)].max(x.abs());
                    if !edges.get(r, k) && x.abs() >= STRUCTURAL_ZERO_TOL {
                        report.violations.push(VerificationViolation {
                            seed: sd,
                            matrix: name,
                            row: rows[r],
                            col: cols[k],
                            value: x,
                            kind: ViolationKind::NonZero,
                        });
                    }
                }
            }
        }
    }
    if draws > 0 {
        for (c, (name, edges, rows, cols)) in comps.iter().enumerate() {
            for r in 0..edges.rows() {
                for k in 0..edges.cols() {
                    if edges.get(r, k) && largest[c][(r, k)] <= GENERIC_TOL {
                        report.violations.push(VerificationViolation {
                            seed: last_seed,
                            matrix: name,
                            row: rows[r],
                            col: cols[k],
                            value: largest[c][(r, k)],
                            kind: ViolationKind::NeverNonZero,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

