use std::sync::Arc;

use num_traits::Zero;

use super::ambient::{Ambient, AmbientKind};
use super::subalgebra::LieSubalgebra;
use super::tensor::tensor_space;
use crate::error::{check_dim, Error, Result};
use crate::flagkit::GeneralizedFlag;
use crate::linalg::{frac, solve, Echelon, Matrix, Subspace, Vector};
use crate::pairing::Pairing;

/// Lines `L_γ ⊂ V` and `M_γ` with `<L_γ, M_c> = δ_{γc}`; for orthogonal and
/// symplectic ambients the `M_γ` are also mutually orthogonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSystem {
    pub lines_l: Vec<(usize, Subspace)>,
    pub lines_m: Vec<(usize, Subspace)>,
}

fn line_vector(s: &Subspace, gamma: usize, which: &str) -> Result<Vector> {
    if s.dim() != 1 {
        return Err(Error::input(format!("{which}_{gamma} has dimension {}, not 1", s.dim())));
    }
    Ok(s.basis()[0].clone())
}

impl LineSystem {
    pub fn len(&self) -> usize {
        self.lines_l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines_l.is_empty()
    }

    fn vectors(&self) -> Result<Vec<(usize, Vector, Vector)>> {
        if self.lines_l.len() != self.lines_m.len()
            || self.lines_l.iter().zip(&self.lines_m).any(|((a, _), (b, _))| a != b)
        {
            return Err(Error::input("L and M lines must carry the same indices in the same order"));
        }
        self.lines_l
            .iter()
            .zip(&self.lines_m)
            .map(|((g, l), (_, m))| Ok((*g, line_vector(l, *g, "L")?, line_vector(m, *g, "M")?)))
            .collect()
    }

    pub fn validate(&self, p: &Pairing, kind: AmbientKind) -> Result<()> {
        let v = self.vectors()?;
        for (g, l, _) in &v {
            check_dim(p.left_dim(), l.dim())?;
            for (c, _, m) in &v {
                check_dim(p.right_dim(), m.dim())?;
                if p.eval(l, m).is_zero() == (g == c) {
                    return Err(Error::input(format!("<L_{g}, M_{c}> violates the duality condition at (γ, c) = ({g}, {c})")));
                }
            }
        }
        if matches!(kind, AmbientKind::So | AmbientKind::Sp) {
            for (g, _, mg) in &v {
                for (c, _, mc) in &v {
                    if !p.eval(mg, mc).is_zero() {
                        return Err(Error::input(format!("<M_{g}, M_{c}> is nonzero at (γ, c) = ({g}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One line system adapted to a maximal flag (gl/sl) or a maximal isotropic
/// flag (so/sp): `L_γ` is the reduced representative of the first basis
/// vector of `F″_γ` outside `F′_γ`, and `M_γ` solves the duality equations,
/// corrected to be mutually orthogonal for forms.
pub fn canonical_line_system(flag: &GeneralizedFlag, ambient: &Ambient) -> Result<LineSystem> {
    check_dim(ambient.n(), flag.ambient_dim())?;
    let p = ambient.form();
    let mut ls = Vec::with_capacity(flag.len());
    for (g, pair) in flag.pairs().iter().enumerate() {
        if pair.codim() != 1 {
            return Err(Error::precondition(format!("pair {g} has codimension {}, not 1", pair.codim())));
        }
        ls.push(pair.pred.complement_in(&pair.succ)?.remove(0));
    }
    let k = ls.len();
    let lg = Matrix::from_rows(&ls, p.left_dim())?.mul(p.gram());
    let mut ms = Vec::with_capacity(k);
    for c in 0..k {
        ms.push(solve(&lg, &Vector::unit(k, c)).ok_or_else(|| Error::precondition("flag lines are dependent"))?);
    }
    if matches!(ambient.kind(), AmbientKind::So | AmbientKind::Sp) {
        for l in &ls {
            for l2 in &ls {
                if !p.eval(l, l2).is_zero() {
                    return Err(Error::precondition("flag is not isotropic"));
                }
            }
        }
        let half = frac(1, 2);
        let fixed: Vec<Vector> = ms
            .iter()
            .map(|m| {
                let mut out = m.clone();
                for (l, mc) in ls.iter().zip(&ms) {
                    let c = -(&half * p.eval(m, mc));
                    out.axpy(&c, l);
                }
                out
            })
            .collect();
        ms = fixed;
    }
    let line = |v: &Vector| Subspace::span(std::slice::from_ref(v), v.dim());
    let out = LineSystem {
        lines_l: ls.iter().enumerate().map(|(g, v)| Ok((g, line(v)?))).collect::<Result<_>>()?,
        lines_m: ms.iter().enumerate().map(|(g, v)| Ok((g, line(v)?))).collect::<Result<_>>()?,
    };
    out.validate(p, ambient.kind()).map_err(|e| Error::Invariant(format!("canonical line system: {e}")))?;
    Ok(out)
}

/// `⊕_γ L_γ ⊗ M_γ` (or `∧`, `&`), cut down to the ambient for `sl`.
pub fn toral_subalgebra(ls: &LineSystem, ambient: &Arc<Ambient>) -> Result<LieSubalgebra> {
    let kind = ambient
        .tensor_kind()
        .ok_or_else(|| Error::input(format!("no toral formula for {}", ambient.describe())))?;
    ls.validate(ambient.form(), ambient.kind())?;
    let n = ambient.n();
    let mut e = Echelon::new(n * n);
    for ((_, l), (_, m)) in ls.lines_l.iter().zip(&ls.lines_m) {
        for v in tensor_space(kind, l, m, ambient.form())?.basis() {
            e.insert(v);
        }
    }
    let mut space = e.into_subspace();
    if ambient.kind() == AmbientKind::Sl {
        space = space.intersect(ambient.space())?;
    }
    Ok(LieSubalgebra::new_unchecked(ambient.clone(), space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::element::{element_type, ElementType};
    use crate::lie::stabilizer::{nilpotent_subalgebra, stabilizer, StabMode};
    use crate::pairing::signed_unit;

    fn coord_ls(n: usize) -> LineSystem {
        LineSystem {
            lines_l: (0..n).map(|g| (g, Subspace::coordinate(n, [g]))).collect(),
            lines_m: (0..n).map(|g| (g, Subspace::coordinate(n, [g]))).collect(),
        }
    }

    #[test]
    fn diagonal_tori() {
        let gl2 = Arc::new(Ambient::gl(2));
        let t = toral_subalgebra(&coord_ls(2), &gl2).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(t.basis_matrices().iter().all(|z| z == &Matrix::diag(&[z[(0, 0)].clone(), z[(1, 1)].clone()])));
        let sl2 = Arc::new(Ambient::sl(2));
        assert_eq!(toral_subalgebra(&coord_ls(2), &sl2).unwrap().dim(), 1);
    }

    #[test]
    fn so4_torus_completes_stabilizer() {
        let so4 = Arc::new(Ambient::so(4));
        let line = |i| Subspace::span(&[signed_unit(4, i)], 4).unwrap();
        let ls = LineSystem {
            lines_l: vec![(1, line(1)), (2, line(2))],
            lines_m: vec![(1, line(-1)), (2, line(-2))],
        };
        let t = toral_subalgebra(&ls, &so4).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(t.basis_matrices().iter().all(|z| element_type(z) == ElementType::Semisimple));
        let f = GeneralizedFlag::from_members(4, &[line(1), line(1).sum(&line(2)).unwrap()]).unwrap();
        let n = nilpotent_subalgebra(&f, &so4).unwrap();
        let b = stabilizer(&f, &so4, StabMode::Formula).unwrap();
        assert_eq!(t.space().sum(n.space()).unwrap(), *b.space());
        assert_eq!(canonical_line_system(&f, &so4).unwrap().len(), 2);
    }

    #[test]
    fn invariant_violation_names_pair() {
        let bad = LineSystem {
            lines_l: vec![(0, Subspace::coordinate(2, [0])), (1, Subspace::coordinate(2, [1]))],
            lines_m: vec![(0, Subspace::coordinate(2, [0])), (1, Subspace::span(&[Vector::from_ints(&[1, 1])], 2).unwrap())],
        };
        let err = toral_subalgebra(&bad, &Arc::new(Ambient::gl(2))).unwrap_err();
        assert!(err.to_string().contains("(0, 1)"), "{err}");
    }
}
