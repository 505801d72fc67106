use std::fmt;

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::rational::Rational;
use super::vector::Vector;
use crate::error::{check_dim, Error, Result};

/// Incremental reduced row-echelon builder.
///
/// Rows are kept fully reduced after every insertion, so membership tests
/// and residuals are a single pass over the pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        Echelon {
            dim: s.ambient_dim,
            pivots: s.basis.iter().map(|r| r.leading_index().unwrap()).collect(),
            rows: s.basis.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Residual of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut w = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let c = -w[p].clone();
                w.axpy(&c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &Vector) -> bool {
        debug_assert_eq!(v.dim(), self.dim);
        let w = self.reduce(v);
        let Some(p) = w.leading_index() else {
            return false;
        };
        let w = w.normalized();
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                row.axpy(&c, &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace {
            ambient_dim: self.dim,
            basis: self.rows,
        }
    }
}

/// A linear subspace of `Q^n`, stored by its RREF basis.
///
/// Because the representation is canonical, `==` and `Hash` are subspace
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: (0..n).map(|i| Vector::unit(n, i)).collect(),
        }
    }

    /// Span of standard basis vectors at the given positions.
    pub fn coordinate(n: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut e = Echelon::new(n);
        for i in positions {
            e.insert(&Vector::unit(n, i));
        }
        e.into_subspace()
    }

    pub fn span(generators: &[Vector], n: usize) -> Result<Self> {
        let mut e = Echelon::new(n);
        for g in generators {
            check_dim(n, g.dim())?;
            e.insert(g);
        }
        Ok(e.into_subspace())
    }

    /// Accepts a basis only if it is already in reduced row-echelon form.
    pub fn from_rref(n: usize, rows: Vec<Vector>) -> Result<Self> {
        let mut last: Option<usize> = None;
        let mut pivots = Vec::with_capacity(rows.len());
        for (k, r) in rows.iter().enumerate() {
            check_dim(n, r.dim())?;
            let p = r
                .leading_index()
                .ok_or_else(|| Error::input(format!("basis row {k} is zero")))?;
            if last.is_some_and(|l| p <= l) {
                return Err(Error::input(format!("basis row {k}: pivots not strictly increasing")));
            }
            if !r[p].is_one() {
                return Err(Error::input(format!("basis row {k}: pivot entry is not 1")));
            }
            last = Some(p);
            pivots.push(p);
        }
        for (k, &p) in pivots.iter().enumerate() {
            if rows.iter().enumerate().any(|(j, r)| j != k && !r[p].is_zero()) {
                return Err(Error::input(format!("pivot column {p} is not cleared")));
            }
        }
        Ok(Subspace {
            ambient_dim: n,
            basis: rows,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.leading_index().unwrap()).collect()
    }

    /// Basis as the rows of a `dim x ambient_dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.basis, self.ambient_dim).expect("basis rows have ambient length")
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        check_dim(self.ambient_dim, other.ambient_dim)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let mut e = Echelon::from_subspace(big);
        for v in &small.basis {
            e.insert(v);
        }
        Ok(e.into_subspace())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        if self.is_subspace_of(other)? {
            return Ok(self.clone());
        }
        if other.is_subspace_of(self)? {
            return Ok(other.clone());
        }
        // x in A ∩ B  iff  x is killed by the annihilators of both.
        let a = self.annihilator();
        let b = other.annihilator();
        let rows: Vec<Vector> = a.basis.iter().chain(&b.basis).cloned().collect();
        Ok(kernel(&Matrix::from_rows(&rows, self.ambient_dim)?))
    }

    pub fn member(&self, v: &Vector) -> Result<bool> {
        check_dim(self.ambient_dim, v.dim())?;
        Ok(self.contains(v))
    }

    /// Unchecked membership; dimensions must already agree.
    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.dim() <= other.dim() && self.basis.iter().all(|v| other.contains(v)))
    }

    /// `{y : b . y = 0 for every basis row b}` under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        kernel(&self.basis_matrix())
    }

    /// Canonical representative of `v` modulo this subspace.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut w = v.clone();
        for row in &self.basis {
            let p = row.leading_index().unwrap();
            if !w[p].is_zero() {
                let c = -w[p].clone();
                w.axpy(&c, row);
            }
        }
        w
    }

    /// Vectors from `sup`'s basis, reduced modulo `self`, that complete a
    /// basis of `self` to one of `sup`.
    pub fn complement_in(&self, sup: &Subspace) -> Result<Vec<Vector>> {
        self.same_ambient(sup)?;
        let mut e = Echelon::from_subspace(self);
        let mut out = Vec::new();
        for v in &sup.basis {
            if e.insert(v) {
                out.push(self.reduce(v));
            }
        }
        Ok(out)
    }

    /// Coefficients of `v` in the RREF basis, or `None` when `v` is outside.
    pub fn coordinates(&self, v: &Vector) -> Option<Vec<Rational>> {
        let coeffs: Vec<Rational> = self
            .basis
            .iter()
            .map(|r| v[r.leading_index().unwrap()].clone())
            .collect();
        let mut recon = Vector::zeros(self.ambient_dim);
        for (c, r) in coeffs.iter().zip(&self.basis) {
            recon.axpy(c, r);
        }
        (recon == *v).then_some(coeffs)
    }

    /// Image under `x -> x * A^T`, i.e. applying `A` to every basis vector.
    pub fn image(&self, a: &Matrix) -> Subspace {
        let mut e = Echelon::new(a.rows());
        for v in &self.basis {
            e.insert(&a.apply(v));
        }
        e.into_subspace()
    }

    /// Embeds into a larger coordinate space by sending coordinate `i` to
    /// position `positions[i]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Subspace {
        assert_eq!(positions.len(), self.ambient_dim);
        let mut e = Echelon::new(n);
        for v in &self.basis {
            let mut coords = vec![Rational::zero(); n];
            for (i, c) in v.iter().enumerate() {
                coords[positions[i]] = c.clone();
            }
            e.insert(&Vector::new(coords));
        }
        e.into_subspace()
    }

    /// Restricts to the coordinates in `positions`: the subspace of vectors
    /// supported there, expressed in those coordinates.
    pub fn restrict(&self, positions: &[usize]) -> Subspace {
        let n = self.ambient_dim;
        let outside: Vec<usize> = (0..n).filter(|i| !positions.contains(i)).collect();
        let window = Subspace::coordinate(n, positions.iter().copied());
        let inside = if outside.is_empty() {
            self.clone()
        } else {
            self.intersect(&window).expect("same ambient")
        };
        let mut e = Echelon::new(positions.len());
        for v in &inside.basis {
            e.insert(&positions.iter().map(|&p| v[p].clone()).collect());
        }
        e.into_subspace()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, [", self.ambient_dim)?;
        for (k, r) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", xs.join(" "))?;
        }
        write!(f, "])")
    }
}

/// Null space `{x : M x = 0}` in canonical form.
pub fn kernel(m: &Matrix) -> Subspace {
    let n = m.cols();
    let mut e = Echelon::new(n);
    for i in 0..m.rows() {
        e.insert(&m.row(i));
    }
    let pivots = e.pivots().to_vec();
    let rows = e.into_subspace().basis;
    let mut out = Echelon::new(n);
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = Vector::unit(n, f).into_coords();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        out.insert(&Vector::new(v));
    }
    out.into_subspace()
}

pub fn rank(m: &Matrix) -> usize {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.insert(&m.row(i));
    }
    e.rank()
}

/// One solution of `A x = b` (free variables set to zero), if any.
pub fn solve(a: &Matrix, b: &Vector) -> Option<Vector> {
    assert_eq!(a.rows(), b.dim());
    let n = a.cols();
    // Row-reduce the augmented system [A | b].
    let mut e = Echelon::new(n + 1);
    for i in 0..a.rows() {
        let mut r = a.row(i).into_coords();
        r.push(b[i].clone());
        e.insert(&Vector::new(r));
    }
    if e.pivots().contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[n].clone();
    }
    Some(Vector::new(x))
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    assert!(a.is_square());
    let n = a.rows();
    let mut e = Echelon::new(2 * n);
    for i in 0..n {
        let mut r = a.row(i).into_coords();
        r.extend(Vector::unit(n, i).into_coords());
        e.insert(&Vector::new(r));
    }
    if e.pivots().iter().take(n).copied().ne(0..n) {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for (i, row) in e.rows.iter().take(n).enumerate() {
        for j in 0..n {
            inv[(i, j)] = row[n + j].clone();
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn span_is_rref() {
        let s = Subspace::span(&[v(&[1, 1, 0]), v(&[0, 1, 1]), v(&[1, 2, 1])], 3).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 0, -1]), v(&[0, 1, 1])]);
        assert_eq!(Subspace::span(&[], 3).unwrap(), Subspace::zero(3));
    }

    #[test]
    fn span_rejects_mixed_dims() {
        assert!(Subspace::span(&[v(&[1, 0]), v(&[1, 0, 0])], 2).is_err());
    }

    #[test]
    fn sum_and_intersection() {
        let a = Subspace::span(&[v(&[1, 0, 0]), v(&[0, 1, 0])], 3).unwrap();
        let b = Subspace::span(&[v(&[0, 1, 0]), v(&[0, 0, 1])], 3).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Subspace::span(&[v(&[0, 1, 0])], 3).unwrap());
        let c = Subspace::span(&[v(&[1, 1])], 2).unwrap();
        let d = Subspace::span(&[v(&[1, -1])], 2).unwrap();
        assert_eq!(c.sum(&d).unwrap(), Subspace::full(2));
        assert!(c.intersect(&d).unwrap().is_zero());
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::identity(3)).is_zero());
        assert_eq!(kernel(&Matrix::zeros(2, 3)), Subspace::full(3));
        let k = kernel(&Matrix::from_ints(&[&[1, 1, 0]]));
        assert_eq!(k, Subspace::span(&[v(&[1, -1, 0]), v(&[0, 0, 1])], 3).unwrap());
    }

    #[test]
    fn rref_validation() {
        assert!(Subspace::from_rref(3, vec![v(&[1, 0, -1]), v(&[0, 1, 1])]).is_ok());
        assert!(Subspace::from_rref(3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]).is_err());
        assert!(Subspace::from_rref(3, vec![v(&[2, 0, 0])]).is_err());
    }

    #[test]
    fn solve_and_inverse() {
        let a = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let x = solve(&a, &v(&[3, 2])).unwrap();
        assert_eq!(x, v(&[1, 1]));
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(inverse(&Matrix::from_ints(&[&[1, 2], &[2, 4]])).is_none());
        assert!(solve(&Matrix::from_ints(&[&[1, 2], &[2, 4]]), &v(&[1, 0])).is_none());
    }

    #[test]
    fn restrict_and_embed() {
        let s = Subspace::span(&[v(&[1, 0, 1]), v(&[0, 1, 0])], 3).unwrap();
        assert_eq!(s.restrict(&[0, 1]), Subspace::span(&[v(&[0, 1])], 2).unwrap());
        let t = Subspace::span(&[v(&[1, 2])], 2).unwrap();
        assert_eq!(t.embed(3, &[0, 2]), Subspace::span(&[v(&[1, 0, 2])], 3).unwrap());
    }
}
