use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::linalg::{Echelon, Matrix, Subspace, Vector};
use crate::pairing::Pairing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorKind {
    /// `v ⊗ w`
    Otimes,
    /// `v ⊗ w - w ⊗ v`
    Wedge,
    /// `v ⊗ w + w ⊗ v`
    Amp,
}

/// `v ⊗ w` acting by `u -> <u, w> v`, i.e. the matrix `v (G w)^T`.
fn otimes(v: &Vector, w: &Vector, p: &Pairing) -> Matrix {
    Matrix::outer(v, &p.functional_right(w))
}

pub fn embed_tensor(kind: TensorKind, v: &Vector, w: &Vector, p: &Pairing) -> Result<Matrix> {
    check_dim(p.left_dim(), v.dim())?;
    check_dim(p.right_dim(), w.dim())?;
    Ok(match kind {
        TensorKind::Otimes => otimes(v, w, p),
        TensorKind::Wedge | TensorKind::Amp => {
            check_dim(p.left_dim(), w.dim())?;
            check_dim(p.right_dim(), v.dim())?;
            let a = otimes(v, w, p);
            let b = otimes(w, v, p);
            if kind == TensorKind::Wedge {
                a.sub(&b)
            } else {
                a.add(&b)
            }
        }
    })
}

/// Span of `a ⊗ b` (or `∧`, `&`) over basis vectors, in flattened matrix
/// coordinates.
pub fn tensor_space(kind: TensorKind, a: &Subspace, b: &Subspace, p: &Pairing) -> Result<Subspace> {
    let n = p.left_dim();
    let mut e = Echelon::new(n * p.left_dim().max(p.right_dim()));
    for v in a.basis() {
        for w in b.basis() {
            e.insert(&embed_tensor(kind, v, w, p)?.flatten());
        }
    }
    Ok(e.into_subspace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::pairing::signed_unit;

    #[test]
    fn otimes_is_matrix_unit() {
        let p = Pairing::standard_dual(2);
        let m = embed_tensor(TensorKind::Otimes, &Vector::unit(2, 0), &Vector::unit(2, 0), &p).unwrap();
        assert_eq!(m, Matrix::unit(2, 0, 0));
    }

    #[test]
    fn wedge_of_equal_vectors_vanishes() {
        let p = Pairing::split_symmetric(4);
        let e1 = signed_unit(4, 1);
        assert!(embed_tensor(TensorKind::Wedge, &e1, &e1, &p).unwrap().is_zero());
    }

    #[test]
    fn amp_sign_under_symplectic_gram() {
        // (e_1 & e_1) e_{-1} = 2 <e_{-1}, e_1> e_1 = -2 e_1.
        let p = Pairing::split_symplectic(2).unwrap();
        let e1 = signed_unit(2, 1);
        let m = embed_tensor(TensorKind::Amp, &e1, &e1, &p).unwrap();
        assert_eq!(m.apply(&signed_unit(2, -1)), e1.scale(&q(-2)));
    }
}
