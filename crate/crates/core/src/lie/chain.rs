use super::ambient::AmbientKind;
use super::subalgebra::{bracket_span, LieSubalgebra};
use crate::error::{check_dim, Error, Result};
use crate::flagkit::{Chain, GeneralizedFlag};
use crate::linalg::{charpoly, kernel, Echelon, Matrix, Subspace, Vector};

/// Action of `z` on `hi/lo` restricted to the subspace `s` of reduced
/// representatives, as a matrix in the RREF basis of `s`.
fn restricted_action(z: &Matrix, lo: &Subspace, s: &Subspace) -> Result<Matrix> {
    let r = s.dim();
    let mut m = Matrix::zeros(r, r);
    for (j, v) in s.basis().iter().enumerate() {
        let image = lo.reduce(&z.apply(v));
        let coords = s
            .coordinates(&image)
            .ok_or_else(|| Error::precondition("subspace is not stable under the algebra"))?;
        for (i, c) in coords.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    Ok(m)
}

fn lift(s: &Subspace, coeffs: &Subspace) -> Subspace {
    let mut e = Echelon::new(s.ambient_dim());
    for c in coeffs.basis() {
        let mut v = Vector::zeros(s.ambient_dim());
        for (ci, b) in c.iter().zip(s.basis()) {
            v.axpy(ci, b);
        }
        e.insert(&v);
    }
    e.into_subspace()
}

/// Joint rational eigenspaces of `b` on `hi/lo`, as subspaces of reduced
/// representatives.
fn weight_spaces(b: &LieSubalgebra, lo: &Subspace, hi: &Subspace) -> Result<Vec<Subspace>> {
    let n = lo.ambient_dim();
    let reps = lo.complement_in(hi)?;
    let quotient = Subspace::span(&reps, n)?;
    // Common eigenvectors are killed by [b, b].
    let derived = bracket_span(b.basis_matrices(), b.basis_matrices(), n);
    let mut start = quotient.clone();
    for z in derived.basis() {
        let z = Matrix::from_flat(n, z);
        let a = restricted_action(&z, lo, &start)?;
        start = lift(&start, &kernel(&a));
        if start.is_zero() {
            return Ok(vec![]);
        }
    }
    let mut spaces = vec![start];
    for x in b.basis_matrices() {
        let mut next = Vec::new();
        for s in &spaces {
            let a = restricted_action(x, lo, s)?;
            let roots = charpoly(&a)
                .rational_roots()
                .ok_or_else(|| Error::precondition("eigenvalue search exceeded the divisor bound"))?;
            for lambda in roots {
                let shifted = a.sub(&Matrix::identity(a.rows()).scale(&lambda));
                let w = lift(s, &kernel(&shifted));
                if !w.is_zero() {
                    next.push(w);
                }
            }
        }
        spaces = next;
        if spaces.is_empty() {
            break;
        }
    }
    Ok(spaces)
}

/// A maximal chain of `b`-stable subspaces from `lo` to `hi`, one common
/// eigenvector of `b` on `hi/lo` at a time. Among all common eigenvectors
/// (as reduced representatives, first nonzero coordinate 1) the
/// lexicographically least is taken: in each joint eigenspace that is its
/// last RREF row.
pub fn stable_maximal_chain(b: &LieSubalgebra, lo: &Subspace, hi: &Subspace) -> Result<Chain> {
    let n = b.ambient().n();
    check_dim(n, lo.ambient_dim())?;
    check_dim(n, hi.ambient_dim())?;
    if !lo.is_subspace_of(hi)? {
        return Err(Error::precondition("lo is not contained in hi"));
    }
    if !b.stabilizes(lo) || !b.stabilizes(hi) {
        return Err(Error::precondition("lo and hi must be stable under the algebra"));
    }
    if !b.is_solvable_by_traces() {
        return Err(Error::precondition("subalgebra is not solvable"));
    }
    let mut members = vec![lo.clone()];
    let mut cur = lo.clone();
    while cur != *hi {
        let spaces = weight_spaces(b, &cur, hi)?;
        let v: Vector = spaces
            .iter()
            .map(|s| s.basis().last().unwrap().clone())
            .min()
            .ok_or_else(|| Error::precondition("no rational common eigenvector on the quotient"))?;
        let mut e = Echelon::from_subspace(&cur);
        e.insert(&v);
        cur = e.into_subspace();
        members.push(cur.clone());
    }
    Chain::new(n, members)
}

/// A flag whose stabilizer should be the Borel subalgebra `b`: the maximal
/// `b`-stable chain through `V`, cut to its isotropic part for forms.
pub fn flag_of_borel(b: &LieSubalgebra) -> Result<GeneralizedFlag> {
    let a = b.ambient();
    let n = a.n();
    let chain = stable_maximal_chain(b, &Subspace::zero(n), &Subspace::full(n))?;
    let flag = GeneralizedFlag::from_members(n, &chain.members()[1..])?;
    match a.kind() {
        AmbientKind::So | AmbientKind::Sp => flag.iso_part(a.form()),
        _ => Ok(flag),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lie::ambient::Ambient;
    use crate::lie::stabilizer::{stabilizer, StabMode};
    use crate::lie::subalgebra::generated_subalgebra;

    #[test]
    fn upper_triangular_chain() {
        let gl3 = Arc::new(Ambient::gl(3));
        let mut gens = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                gens.push(Matrix::unit(3, i, j));
            }
        }
        let b = generated_subalgebra(&gens, &gl3).unwrap();
        let c = stable_maximal_chain(&b, &Subspace::zero(3), &Subspace::full(3)).unwrap();
        let want: Vec<Subspace> = (0..=3).map(|k| Subspace::coordinate(3, 0..k)).collect();
        assert_eq!(c.members(), &want[..]);
    }

    #[test]
    fn zero_algebra_gives_coordinate_flag() {
        let b = LieSubalgebra::zero(Arc::new(Ambient::gl(2)));
        let c = stable_maximal_chain(&b, &Subspace::zero(2), &Subspace::full(2)).unwrap();
        assert_eq!(c.members()[1], Subspace::coordinate(2, [1]));
    }

    #[test]
    fn sl2_is_rejected() {
        let b = LieSubalgebra::full(Arc::new(Ambient::sl(2)));
        assert!(matches!(
            stable_maximal_chain(&b, &Subspace::zero(2), &Subspace::full(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn borel_flag_round_trip() {
        let so5 = Arc::new(Ambient::so(5));
        let e = |i| crate::pairing::signed_unit(5, i);
        let f = GeneralizedFlag::from_members(
            5,
            &[Subspace::span(&[e(2)], 5).unwrap(), Subspace::span(&[e(2), e(-1)], 5).unwrap()],
        )
        .unwrap();
        let b = stabilizer(&f, &so5, StabMode::Formula).unwrap();
        let g = flag_of_borel(&b).unwrap();
        assert_eq!(g, f);
    }
}
