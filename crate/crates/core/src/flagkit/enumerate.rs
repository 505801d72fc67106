use itertools::Itertools;

use super::GeneralizedFlag;
use crate::linalg::{Echelon, Subspace, Vector};
use crate::pairing::signed_unit;

/// Flags built from successive spans of a sequence of vectors.
fn flag_of_sequence(dim: usize, vs: impl IntoIterator<Item = Vector>) -> GeneralizedFlag {
    let mut e = Echelon::new(dim);
    let mut members: Vec<Subspace> = Vec::new();
    for v in vs {
        e.insert(&v);
        members.push(e.clone().into_subspace());
    }
    GeneralizedFlag::from_members(dim, &members).expect("spans of a growing sequence form a chain")
}

/// The `n!` maximal flags spanned by standard basis vectors, in
/// lexicographic order of the permutation.
pub fn coordinate_flags(n: usize) -> Vec<GeneralizedFlag> {
    (0..n)
        .permutations(n)
        .map(|perm| flag_of_sequence(n, perm.into_iter().map(|i| Vector::unit(n, i))))
        .collect()
}

/// Sequences `(i_1, ..., i_m)` of signed indices with distinct absolute
/// values drawn from `1..=m`: the `2^m m!` signed permutations.
#[derive(Clone, Debug)]
pub struct SignedPermutations {
    m: usize,
}

impl SignedPermutations {
    pub fn new(m: usize) -> Self {
        SignedPermutations { m }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let m = self.m;
        (1..=m as i64).permutations(m).flat_map(move |perm| {
            (0..1u64 << m).map(move |signs| {
                perm.iter()
                    .enumerate()
                    .map(|(k, &i)| if signs >> k & 1 == 1 { -i } else { i })
                    .collect()
            })
        })
    }
}

/// Basis-aligned maximal isotropic flags of a split form of dimension
/// `dim`: `0 ⊂ <e_{i_1}> ⊂ <e_{i_1}, e_{i_2}> ⊂ ...` over signed
/// permutations.
pub fn signed_coordinate_flags(dim: usize) -> Vec<GeneralizedFlag> {
    SignedPermutations::new(dim / 2)
        .iter()
        .map(|seq| flag_of_sequence(dim, seq.into_iter().map(|i| signed_unit(dim, i))))
        .collect()
}
