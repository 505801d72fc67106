//! Seeded random inputs shared by the integration suites.
#![allow(dead_code)]

use flagstab::flagkit::{signed_coordinate_flags, GeneralizedFlag};
use flagstab::lie::Ambient;
use flagstab::linalg::{frac, inverse, rank, Matrix, Rational, Subspace, Vector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small numerators, denominators up to 3, zero a third of the time.
pub fn rational(r: &mut impl Rng) -> Rational {
    if r.gen_ratio(1, 3) {
        return frac(0, 1);
    }
    frac(r.gen_range(-4..=4), r.gen_range(1..=3))
}

pub fn vector(r: &mut impl Rng, n: usize) -> Vector {
    (0..n).map(|_| rational(r)).collect()
}

pub fn invertible(r: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let rows: Vec<Vector> = (0..n).map(|_| vector(r, n)).collect();
        let m = Matrix::from_rows(&rows, n).unwrap();
        if rank(&m) == n {
            return m;
        }
    }
}

/// `span(c_1) ⊂ span(c_1, c_2) ⊂ ...` over the columns of an invertible matrix.
pub fn maximal_flag(r: &mut impl Rng, n: usize) -> GeneralizedFlag {
    let a = invertible(r, n);
    let members: Vec<Subspace> = (1..=n)
        .map(|k| Subspace::span(&(0..k).map(|j| a.col(j)).collect::<Vec<_>>(), n).unwrap())
        .collect();
    GeneralizedFlag::from_members(n, &members).unwrap()
}

/// Subspace of random dimension; about half the time spanned by sparse vectors.
pub fn subspace(r: &mut impl Rng, n: usize) -> Subspace {
    let k = r.gen_range(0..=n);
    let sparse = r.gen_bool(0.5);
    let vs: Vec<Vector> = (0..k)
        .map(|_| {
            if sparse {
                let mut c = vec![frac(0, 1); n];
                for _ in 0..2 {
                    c[r.gen_range(0..n)] = rational(r);
                }
                Vector::new(c)
            } else {
                vector(r, n)
            }
        })
        .collect();
    Subspace::span(&vs, n).unwrap()
}

/// Cayley transform `(I - X)^{-1} (I + X)` of a random `X` in the algebra:
/// an isometry of its form.
pub fn isometry(r: &mut impl Rng, a: &Ambient) -> Matrix {
    let n = a.n();
    loop {
        let mut x = Matrix::zeros(n, n);
        for b in a.basis_matrices() {
            if r.gen_ratio(1, 3) {
                x = x.add(&b.scale(&frac(r.gen_range(-2..=2), r.gen_range(1..=2))));
            }
        }
        let id = Matrix::identity(n);
        let Some(inv) = inverse(&id.sub(&x)) else { continue };
        let g = inv.mul(&id.add(&x));
        let gram = a.form().gram();
        assert_eq!(&g.transpose().mul(gram).mul(&g), gram, "Cayley transform is an isometry");
        return g;
    }
}

/// A basis-aligned maximal isotropic flag moved by a random isometry.
pub fn isotropic_flag(r: &mut impl Rng, a: &Ambient) -> GeneralizedFlag {
    let dim = a.n();
    let base = signed_coordinate_flags(dim).choose(r).unwrap().clone();
    let g = isometry(r, a);
    let members: Vec<Subspace> = base.successors().map(|s| s.image(&g)).collect();
    GeneralizedFlag::from_members(dim, &members).unwrap()
}

/// Random flags of the kind of `a`, of all sizes handled by its tests.
pub fn flag_for(r: &mut impl Rng, a: &Ambient) -> GeneralizedFlag {
    match a.kind() {
        flagstab::lie::AmbientKind::So | flagstab::lie::AmbientKind::Sp => isotropic_flag(r, a),
        _ => maximal_flag(r, a.n()),
    }
}
