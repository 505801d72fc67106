use serde::{Deserialize, Serialize};

use crate::linalg::{charpoly, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementType {
    Semisimple,
    Nilpotent,
    Mixed,
}

/// Nilpotent iff `Z^n = 0`; otherwise semisimple iff the squarefree part of
/// the characteristic polynomial kills `Z`. Zero counts as nilpotent.
pub fn element_type(z: &Matrix) -> ElementType {
    assert!(z.is_square());
    if z.pow(z.rows()).is_zero() {
        return ElementType::Nilpotent;
    }
    if charpoly(z).squarefree_part().eval_matrix(z).is_zero() {
        ElementType::Semisimple
    } else {
        ElementType::Mixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(element_type(&Matrix::unit(2, 0, 1)), ElementType::Nilpotent);
        assert_eq!(element_type(&Matrix::from_ints(&[&[1, 0], &[0, -1]])), ElementType::Semisimple);
        assert_eq!(element_type(&Matrix::from_ints(&[&[1, 1], &[0, 1]])), ElementType::Mixed);
        let idem = Matrix::unit(2, 0, 0).add(&Matrix::unit(2, 0, 1));
        assert_eq!(idem.mul(&idem), idem);
        assert_eq!(element_type(&idem), ElementType::Semisimple);
        // Rotation by 90 degrees: semisimple without rational eigenvalues.
        assert_eq!(element_type(&Matrix::from_ints(&[&[0, -1], &[1, 0]])), ElementType::Semisimple);
    }
}
