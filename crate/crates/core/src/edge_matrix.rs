//! Binary edge matrices and the two block operators built on them:
//! partial inversion of real matrices and partial closure of binary ones.
//!
//! Row/column `i` of every matrix here is bound to a node through an ordered
//! node list held by the caller; this module only sees indices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Dense real matrix used for parameters, covariances and concentrations.
pub type RealMatrix = nalgebra::DMatrix<f64>;

/// Default magnitude below which a real entry counts as a structural zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Dense 0/1 matrix. Square in almost every use; `h_uv` components are the
/// rectangular exception.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix { rows, cols, data: vec![false; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            for (k, &x) in row.iter().enumerate() {
                match x {
                    0 => {}
                    1 => m.set(i, k, true),
                    _ => return Err(Error::InvalidInput(format!("entry ({i},{k}) is {x}, not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> bool {
        assert!(i < self.rows && k < self.cols, "index ({i},{k}) out of bounds");
        self.data[i * self.cols + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, k: usize, value: bool) {
        assert!(i < self.rows && k < self.cols, "index ({i},{k}) out of bounds");
        self.data[i * self.cols + k] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    t.set(k, i, true);
                }
            }
        }
        t
    }

    /// Boolean product: entry is 1 iff some `j` has `self[i,j] = other[j,k] = 1`.
    /// This is `In[self * other]` for non-negative matrices.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.get(i, j) {
                    continue;
                }
                for k in 0..other.cols {
                    if other.get(j, k) {
                        out.set(i, k, true);
                    }
                }
            }
        }
        out
    }

    /// Boolean sum, `In[self + other]`.
    pub fn or(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "shapes differ");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| *a || *b).collect();
        BinaryMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Submatrix on the given row and column indices, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &k) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, k));
            }
        }
        out
    }

    /// Writes `block` into the positions `rows × cols`.
    pub fn put(&mut self, rows: &[usize], cols: &[usize], block: &Self) {
        assert!(block.rows == rows.len() && block.cols == cols.len(), "block shape differs");
        for (a, &i) in rows.iter().enumerate() {
            for (b, &k) in cols.iter().enumerate() {
                self.set(i, k, block.get(a, b));
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|k| self.get(i, k) == self.get(k, i)))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| self.get(i, i))
    }

    /// First cell strictly below the diagonal that holds a one.
    pub fn first_lower_one(&self) -> Option<(usize, usize)> {
        (0..self.rows).flat_map(|i| (0..i.min(self.cols)).map(move |k| (i, k))).find(|&(i, k)| self.get(i, k))
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        self.has_unit_diagonal() && self.first_lower_one().is_none()
    }

    /// Off-diagonal cells holding a one, row-major.
    pub fn off_diagonal_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |i| (0..self.cols).map(move |k| (i, k)))
            .filter(move |&(i, k)| i != k && self.get(i, k))
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|x| **x).count()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                f.write_str(if self.get(i, k) { "1" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Set of indices into `0..dim`, kept sorted so blocks stay in original order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NodeSubset {
    members: Vec<usize>,
}

impl NodeSubset {
    /// Validates range and duplicates.
    pub fn new(dim: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput(format!("index {} appears twice in subset", w[0])));
            }
        }
        if let Some(&last) = v.last() {
            if last >= dim {
                return Err(Error::InvalidInput(format!("index {last} out of range 0..{dim}")));
            }
        }
        Ok(NodeSubset { members: v })
    }

    pub fn empty() -> Self {
        NodeSubset { members: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        NodeSubset { members: (0..dim).collect() }
    }

    /// Builds a subset from a membership mask.
    pub fn from_mask(mask: &[bool]) -> Self {
        NodeSubset { members: (0..mask.len()).filter(|&i| mask[i]).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self, dim: usize) -> Self {
        NodeSubset { members: (0..dim).filter(|&i| !self.contains(i)).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v: Vec<usize> = self.members.iter().chain(&other.members).copied().collect();
        v.sort_unstable();
        v.dedup();
        NodeSubset { members: v }
    }

    fn check(&self, dim: usize) -> Result<()> {
        match self.members.last() {
            Some(&last) if last >= dim => {
                Err(Error::InvalidInput(format!("index {last} out of range 0..{dim}")))
            }
            _ => Ok(()),
        }
    }
}

/// Replaces every entry with magnitude above `tol` by one, everything else by zero.
pub fn indicator_with_tol(m: &RealMatrix, tol: f64) -> Result<BinaryMatrix> {
    let mut out = BinaryMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for k in 0..m.ncols() {
            let x = m[(i, k)];
            if !x.is_finite() {
                return Err(Error::InvalidInput(format!("entry ({i},{k}) is not finite")));
            }
            if x.abs() > tol {
                out.set(i, k, true);
            }
        }
    }
    Ok(out)
}

/// [`indicator_with_tol`] at [`DEFAULT_ZERO_TOL`].
pub fn indicator(m: &RealMatrix) -> Result<BinaryMatrix> {
    indicator_with_tol(m, DEFAULT_ZERO_TOL)
}

/// Real submatrix on the given rows and columns, in the order given.
pub fn select(m: &RealMatrix, rows: &[usize], cols: &[usize]) -> RealMatrix {
    RealMatrix::from_fn(rows.len(), cols.len(), |a, b| m[(rows[a], cols[b])])
}

/// Writes `block` into the positions `rows × cols` of `m`.
pub fn put(m: &mut RealMatrix, rows: &[usize], cols: &[usize], block: &RealMatrix) {
    for (a, &i) in rows.iter().enumerate() {
        for (b, &k) in cols.iter().enumerate() {
            m[(i, k)] = block[(a, b)];
        }
    }
}

/// Inverse that reports the index subset it was taken over when singular.
pub(crate) fn invert(m: &RealMatrix, subset: &[usize]) -> Result<RealMatrix> {
    let singular = || Error::Singular { subset: subset.to_vec() };
    let inv = m.clone().try_inverse().ok_or_else(singular)?;
    if inv.iter().all(|x| x.is_finite()) {
        Ok(inv)
    } else {
        Err(singular())
    }
}

/// Partial inversion of `f` on `a`: sweeps the `a` rows and columns and keeps
/// every block in its original position.
pub fn partial_invert(f: &RealMatrix, a: &NodeSubset) -> Result<RealMatrix> {
    if !f.is_square() {
        return Err(Error::Shape(format!("partial inversion needs a square matrix, got {}x{}", f.nrows(), f.ncols())));
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let dim = f.nrows();
    a.check(dim)?;
    if a.is_empty() {
        return Ok(f.clone());
    }
    let b = a.complement(dim);
    let (ai, bi) = (a.members(), b.members());
    let faa_inv = invert(&select(f, ai, ai), ai)?;
    let fab = select(f, ai, bi);
    let fba = select(f, bi, ai);
    let fbb = select(f, bi, bi);

    let mut out = RealMatrix::zeros(dim, dim);
    let top_right = -&faa_inv * &fab;
    let bottom_left = &fba * &faa_inv;
    let bottom_right = &fbb - &bottom_left * &fab;
    put(&mut out, ai, ai, &faa_inv);
    put(&mut out, ai, bi, &top_right);
    put(&mut out, bi, ai, &bottom_left);
    put(&mut out, bi, bi, &bottom_right);
    Ok(out)
}

/// Reflexive-transitive closure of a square binary matrix by Warshall's
/// reachability sweep: entry (i,k) is one iff i = k or a walk i, ..., k
/// follows ones of `b`.
pub fn reflexive_closure(b: &BinaryMatrix) -> BinaryMatrix {
    assert!(b.is_square(), "closure needs a square matrix");
    let n = b.rows();
    let mut c = b.clone();
    for i in 0..n {
        c.set(i, i, true);
    }
    for j in 0..n {
        for i in 0..n {
            if !c.get(i, j) {
                continue;
            }
            for k in 0..n {
                if c.get(j, k) {
                    c.set(i, k, true);
                }
            }
        }
    }
    c
}

/// Partial closure of `b` on `a`. Closes every path whose inner nodes all lie
/// in `a`; idempotent and commutative in `a`, but cannot be undone.
pub fn partial_close(b: &BinaryMatrix, a: &NodeSubset) -> Result<BinaryMatrix> {
    if !b.is_square() {
        return Err(Error::Shape(format!("partial closure needs a square matrix, got {}x{}", b.rows(), b.cols())));
    }
    let dim = b.rows();
    a.check(dim)?;
    if a.is_empty() {
        return Ok(b.clone());
    }
    let c = a.complement(dim);
    let (ai, bi) = (a.members(), c.members());
    let faa = reflexive_closure(&b.select(ai, ai));
    let fab = b.select(ai, bi);
    let fba = b.select(bi, ai);
    let fbb = b.select(bi, bi);

    let top_right = faa.mul(&fab);
    let bottom_left = fba.mul(&faa);
    let bottom_right = fbb.or(&bottom_left.mul(&fab));
    let mut out = BinaryMatrix::zeros(dim, dim);
    out.put(ai, ai, &faa);
    out.put(ai, bi, &top_right);
    out.put(bi, ai, &bottom_left);
    out.put(bi, bi, &bottom_right);
    Ok(out)
}

/// Ancestor matrix of a parent-graph edge matrix: one at (i,k) iff k = i or k
/// is an ancestor of i.
pub fn ancestor_closure(b: &BinaryMatrix) -> Result<BinaryMatrix> {
    if !b.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", b.rows(), b.cols())));
    }
    if let Some((i, k)) = b.first_lower_one() {
        return Err(Error::InvalidInput(format!("one below the diagonal at ({i},{k})")));
    }
    if !b.has_unit_diagonal() {
        return Err(Error::InvalidInput("diagonal is not all ones".into()));
    }
    partial_close(b, &NodeSubset::full(b.rows()))
}
