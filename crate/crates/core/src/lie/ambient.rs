use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::tensor::TensorKind;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{bracket, kernel, Echelon, Matrix, Subspace, Vector};
use crate::pairing::{Pairing, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientKind {
    Gl,
    Sl,
    So,
    Sp,
    Extension,
}

impl AmbientKind {
    pub fn name(self) -> &'static str {
        match self {
            AmbientKind::Gl => "gl",
            AmbientKind::Sl => "sl",
            AmbientKind::So => "so",
            AmbientKind::Sp => "sp",
            AmbientKind::Extension => "extension",
        }
    }
}

impl fmt::Display for AmbientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A matrix Lie algebra acting on `Q^n`, stored as a subspace of the
/// `n^2`-dimensional space of matrices (row-major coordinates).
#[derive(Clone, Debug)]
pub struct Ambient {
    kind: AmbientKind,
    n: usize,
    form: Pairing,
    base: Option<Arc<Ambient>>,
    extra: Vec<Matrix>,
    /// Coordinates of `Q^n` an embedded algebra lives on, if it is not all.
    window: Option<Vec<usize>>,
    space: Subspace,
    basis: Vec<Matrix>,
}

impl PartialEq for Ambient {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n && self.form == other.form && self.space == other.space
    }
}

impl Eq for Ambient {}

fn matrices_of(n: usize, s: &Subspace) -> Vec<Matrix> {
    s.basis().iter().map(|v| Matrix::from_flat(n, v)).collect()
}

impl Ambient {
    fn build(
        kind: AmbientKind,
        n: usize,
        form: Pairing,
        base: Option<Arc<Ambient>>,
        extra: Vec<Matrix>,
        window: Option<Vec<usize>>,
        space: Subspace,
    ) -> Self {
        let basis = matrices_of(n, &space);
        Ambient {
            kind,
            n,
            form,
            base,
            extra,
            window,
            space,
            basis,
        }
    }

    pub fn gl(n: usize) -> Self {
        Self::build(AmbientKind::Gl, n, Pairing::standard_dual(n), None, vec![], None, Subspace::full(n * n))
    }

    pub fn sl(n: usize) -> Self {
        let trace: Vector = (0..n * n)
            .map(|k| if k / n == k % n { crate::linalg::one() } else { crate::linalg::zero() })
            .collect();
        let space = kernel(&Matrix::from_rows(&[trace], n * n).unwrap());
        Self::build(AmbientKind::Sl, n, Pairing::standard_dual(n), None, vec![], None, space)
    }

    /// `so` of a symmetric form or `sp` of an antisymmetric one:
    /// `{Z : Z^T G + G Z = 0}`.
    pub fn with_form(kind: AmbientKind, form: Pairing) -> Result<Self> {
        let want = match kind {
            AmbientKind::So => Symmetry::Symmetric,
            AmbientKind::Sp => Symmetry::Antisymmetric,
            AmbientKind::Gl | AmbientKind::Sl => {
                if form.left_dim() != form.right_dim() {
                    return Err(Error::input("gl/sl need a square pairing"));
                }
                let n = form.left_dim();
                let mut a = if kind == AmbientKind::Gl { Self::gl(n) } else { Self::sl(n) };
                a.form = form;
                return Ok(a);
            }
            AmbientKind::Extension => return Err(Error::input("build extensions with extend_ambient")),
        };
        match form.symmetry() {
            Some(s) if s == want => {}
            _ => {
                return Err(Error::input(format!(
                    "{kind} needs a {} form",
                    if want == Symmetry::Symmetric { "symmetric" } else { "antisymmetric" }
                )))
            }
        }
        let n = form.left_dim();
        let g = form.gram();
        // Row (i, j) of the constraint: sum_k Z_ki G_kj + sum_k G_ik Z_kj.
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut r = vec![crate::linalg::zero(); n * n];
                for k in 0..n {
                    r[k * n + i] += &g[(k, j)];
                    r[k * n + j] += &g[(i, k)];
                }
                rows.push(Vector::new(r));
            }
        }
        let space = kernel(&Matrix::from_rows(&rows, n * n)?);
        Ok(Self::build(kind, n, form, None, vec![], None, space))
    }

    pub fn so(dim: usize) -> Self {
        Self::with_form(AmbientKind::So, Pairing::split_symmetric(dim)).expect("split form is symmetric")
    }

    pub fn sp(dim: usize) -> Result<Self> {
        Self::with_form(AmbientKind::Sp, Pairing::split_symplectic(dim)?)
    }

    /// A gl or sl ambient placed on the coordinates `positions` of
    /// `Q^outer_n`; matrix units `E_ij` go to `E_{p_i p_j}`.
    pub fn embedded(inner: &Ambient, outer_n: usize, positions: &[usize]) -> Result<Self> {
        if !matches!(inner.kind, AmbientKind::Gl | AmbientKind::Sl) || inner.window.is_some() {
            return Err(Error::input("only plain gl/sl ambients can be embedded"));
        }
        check_dim(inner.n, positions.len())?;
        if positions.iter().any(|&p| p >= outer_n) {
            return Err(Error::input("embedding position out of range"));
        }
        let mut e = Echelon::new(outer_n * outer_n);
        for m in &inner.basis {
            let mut big = Matrix::zeros(outer_n, outer_n);
            for i in 0..inner.n {
                for j in 0..inner.n {
                    big[(positions[i], positions[j])] = m[(i, j)].clone();
                }
            }
            e.insert(&big.flatten());
        }
        Ok(Self::build(
            inner.kind,
            outer_n,
            Pairing::standard_dual(outer_n),
            None,
            vec![],
            Some(positions.to_vec()),
            e.into_subspace(),
        ))
    }

    /// `base + span(extra)`, which must be bracket-closed.
    pub fn extend(base: &Arc<Ambient>, extra: Vec<Matrix>) -> Result<Self> {
        let n = base.n;
        for (k, x) in extra.iter().enumerate() {
            if x.rows() != n || x.cols() != n {
                return Err(Error::input(format!("extra matrix {k} is not {n}x{n}")));
            }
        }
        let mut e = Echelon::from_subspace(&base.space);
        for x in &extra {
            e.insert(&x.flatten());
        }
        let space = e.into_subspace();
        for (k, x) in extra.iter().enumerate() {
            for (j, b) in base.basis.iter().enumerate() {
                if !space.contains(&bracket(x, b).flatten()) {
                    return Err(Error::input(format!(
                        "[extra {k}, base basis {j}] leaves base + span(extra)"
                    )));
                }
            }
            for (j, y) in extra.iter().enumerate().skip(k + 1) {
                if !space.contains(&bracket(x, y).flatten()) {
                    return Err(Error::input(format!("[extra {k}, extra {j}] leaves base + span(extra)")));
                }
            }
        }
        Ok(Self::build(
            AmbientKind::Extension,
            n,
            base.form.clone(),
            Some(base.clone()),
            extra,
            base.window.clone(),
            space,
        ))
    }

    pub fn kind(&self) -> AmbientKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> &Pairing {
        &self.form
    }

    pub fn base(&self) -> Option<&Arc<Ambient>> {
        self.base.as_ref()
    }

    pub fn extra(&self) -> &[Matrix] {
        &self.extra
    }

    pub fn window(&self) -> Option<&[usize]> {
        self.window.as_deref()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis_matrices(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.n && m.cols() == self.n && self.space.contains(&m.flatten())
    }

    /// Tensor type of the stabilizer formulas, for the four classical kinds
    /// acting on all of `Q^n`.
    pub fn tensor_kind(&self) -> Option<TensorKind> {
        if self.window.is_some() {
            return None;
        }
        match self.kind {
            AmbientKind::Gl | AmbientKind::Sl => Some(TensorKind::Otimes),
            AmbientKind::So => Some(TensorKind::Wedge),
            AmbientKind::Sp => Some(TensorKind::Amp),
            AmbientKind::Extension => None,
        }
    }

    pub fn describe(&self) -> String {
        match (&self.base, &self.window) {
            (Some(b), _) => format!("{} + span of {} extra matrices", b.describe(), self.extra.len()),
            (None, Some(w)) => format!("{}_{} on {} of {} coordinates", self.kind, w.len(), w.len(), self.n),
            (None, None) => format!("{}_{}", self.kind, self.n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(Ambient::gl(3).dim(), 9);
        assert_eq!(Ambient::sl(2).dim(), 3);
        assert_eq!(Ambient::so(4).dim(), 6);
        assert_eq!(Ambient::so(5).dim(), 10);
        assert_eq!(Ambient::sp(4).unwrap().dim(), 10);
        assert_eq!(Ambient::sp(6).unwrap().dim(), 21);
    }

    #[test]
    fn wrong_parity_rejected() {
        assert!(Ambient::with_form(AmbientKind::So, Pairing::split_symplectic(4).unwrap()).is_err());
        assert!(Ambient::with_form(AmbientKind::Sp, Pairing::split_symmetric(4)).is_err());
    }

    #[test]
    fn extensions() {
        let sl = Arc::new(Ambient::sl(3));
        let gl = Ambient::extend(&sl, vec![Matrix::identity(3)]).unwrap();
        assert_eq!(gl.space(), Ambient::gl(3).space());
        let so = Arc::new(Ambient::so(4));
        assert!(Ambient::extend(&so, vec![Matrix::unit(4, 0, 0)]).is_err());
    }
}
