use serde::{Deserialize, Serialize};

use super::index::{IndexDomain, IndexSet};
use super::template::{Family, FamilyKind, Template};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Echelon, Matrix, Subspace, Vector};
use crate::pairing::Pairing;

/// Anything with a finite generating set inside each level.
pub trait Descriptor {
    fn domain(&self) -> IndexDomain;

    /// Generators supported within level `n`, in level-`n` coordinates.
    fn generators(&self, n: usize) -> Result<Vec<Vector>>;

    /// Span of the generators supported within level `n`.
    fn truncate(&self, n: usize) -> Result<Subspace> {
        let dim = self.domain().level_dim(n);
        let mut e = Echelon::new(dim);
        for g in self.generators(n)? {
            e.insert(&g);
        }
        Ok(e.into_subspace())
    }
}

/// An index-aligned subspace `span{e_i : i ∈ I}` plus finitely many extra
/// generators. Such subspaces are closed under the standard pairing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableSubspace {
    pub index_part: IndexSet,
    pub extra: Vec<Template>,
}

impl StableSubspace {
    pub fn new(index_part: IndexSet, extra: Vec<Template>) -> Result<Self> {
        for t in &extra {
            t.check(index_part.domain())?;
        }
        Ok(StableSubspace { index_part, extra })
    }

    pub fn indexed(index_part: IndexSet) -> Self {
        StableSubspace {
            index_part,
            extra: vec![],
        }
    }

    pub fn zero(domain: IndexDomain) -> Self {
        Self::indexed(IndexSet::empty(domain))
    }

    pub fn full(domain: IndexDomain) -> Self {
        Self::indexed(IndexSet::full(domain))
    }

    /// Lowest level at which every extra generator is visible.
    pub fn normalization_level(&self) -> usize {
        self.extra
            .iter()
            .map(|t| t.level(self.index_part.domain()))
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Same subspace at every level: equal index parts and equal
    /// truncations once all extras are visible.
    pub fn same_as(&self, other: &StableSubspace) -> Result<bool> {
        if self.index_part != other.index_part {
            return Ok(false);
        }
        let m = self.normalization_level().max(other.normalization_level());
        Ok(self.truncate(m)? == other.truncate(m)?)
    }

    pub fn with_indices(&self, more: &IndexSet) -> Result<StableSubspace> {
        Ok(StableSubspace {
            index_part: self.index_part.union(more)?,
            extra: self.extra.clone(),
        })
    }

    /// Whether the quotient `other / self` is infinite-dimensional; extras
    /// are finite so only the index parts matter.
    pub fn gap_is_infinite(&self, other: &StableSubspace) -> Result<bool> {
        Ok(!other.index_part.difference_is_finite(&self.index_part)?)
    }

    pub fn describe(&self) -> String {
        if self.extra.is_empty() {
            format!("span{{e_i : i ∈ {}}}", self.index_part)
        } else {
            let xs: Vec<String> = self.extra.iter().map(|t| t.to_string()).collect();
            format!("span{{e_i : i ∈ {}}} + span{{{}}}", self.index_part, xs.join(", "))
        }
    }
}

impl Descriptor for StableSubspace {
    fn domain(&self) -> IndexDomain {
        self.index_part.domain()
    }

    fn generators(&self, n: usize) -> Result<Vec<Vector>> {
        let d = self.domain();
        if n < self.normalization_level() {
            return Err(Error::input(format!(
                "level {n} is below the normalization level {}",
                self.normalization_level()
            )));
        }
        let mut out: Vec<Vector> = self
            .index_part
            .at_level(n)
            .into_iter()
            .map(|i| Vector::unit(d.level_dim(n), d.position(n, i).unwrap()))
            .collect();
        out.extend(self.extra.iter().filter_map(|t| t.at_level(d, n)));
        Ok(out)
    }
}

/// Explicit vectors plus template families, such as
/// `e(k) - e(k+1) for k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeqSubspace {
    pub domain: IndexDomain,
    pub explicit: Vec<Template>,
    pub families: Vec<Family>,
}

impl SeqSubspace {
    pub fn new(domain: IndexDomain, explicit: Vec<Template>, families: Vec<Family>) -> Result<Self> {
        for t in &explicit {
            t.check(domain)?;
        }
        for f in &families {
            if !matches!(f.kind()?, FamilyKind::Vector { .. }) {
                return Err(Error::input("subspace families must describe vectors"));
            }
        }
        Ok(SeqSubspace {
            domain,
            explicit,
            families,
        })
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.explicit.iter().map(|t| t.to_string()).collect();
        parts.extend(self.families.iter().map(|f| f.to_string()));
        format!("span{{{}}}", parts.join("; "))
    }
}

impl Descriptor for SeqSubspace {
    fn domain(&self) -> IndexDomain {
        self.domain
    }

    fn generators(&self, n: usize) -> Result<Vec<Vector>> {
        let mut out: Vec<Vector> = self.explicit.iter().filter_map(|t| t.at_level(self.domain, n)).collect();
        for f in &self.families {
            out.extend(f.vectors_within(self.domain, n)?);
        }
        Ok(out)
    }
}

impl Descriptor for Box<dyn Descriptor + Send + Sync> {
    fn domain(&self) -> IndexDomain {
        (**self).domain()
    }

    fn generators(&self, n: usize) -> Result<Vec<Vector>> {
        (**self).generators(n)
    }
}

/// The pairing on the whole index domain, extended index-wise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingDescriptor {
    StandardDual,
    SplitSymmetric,
    SplitSymplectic,
}

impl PairingDescriptor {
    pub fn name(self) -> &'static str {
        match self {
            PairingDescriptor::StandardDual => "standard_dual",
            PairingDescriptor::SplitSymmetric => "split_symmetric",
            PairingDescriptor::SplitSymplectic => "split_symplectic",
        }
    }

    pub fn at_level(self, domain: IndexDomain, n: usize) -> Result<Pairing> {
        let d = domain.level_dim(n);
        match (self, domain) {
            (PairingDescriptor::StandardDual, _) => Ok(Pairing::standard_dual(d)),
            (PairingDescriptor::SplitSymmetric, IndexDomain::Signed) => Ok(Pairing::split_symmetric(d)),
            (PairingDescriptor::SplitSymplectic, IndexDomain::Signed) => Pairing::split_symplectic(d),
            _ => Err(Error::input(format!("{} needs the signed domain", self.name()))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub level: usize,
    pub lookahead: usize,
    /// The answer does not change when the lookahead grows by one.
    pub stable: bool,
}

/// `{y ∈ level n : <g, y> = 0}` for the vectors `g` given at level `m ≥ n`,
/// with `y` padded by zeros.
fn annihilated(gens: &[Vector], p: &Pairing, domain: IndexDomain, n: usize, m: usize, left: bool) -> Result<Subspace> {
    let d = domain.level_dim(n);
    let positions: Vec<usize> = domain.indices(n).iter().map(|&i| domain.position(m, i).unwrap()).collect();
    let g = if left { p.gram().clone() } else { p.gram().transpose() };
    let mut rows = Vec::with_capacity(gens.len());
    for v in gens {
        // <v, y> = v^T G y, restricted to the level-n coordinates of y.
        let full = g.transpose().apply(v);
        rows.push(positions.iter().map(|&q| full[q].clone()).collect::<Vector>());
    }
    if rows.is_empty() {
        return Ok(Subspace::full(d));
    }
    Ok(kernel(&Matrix::from_rows(&rows, d)?))
}

fn perp_raw(d: &dyn Descriptor, p: PairingDescriptor, n: usize, l: usize) -> Result<Subspace> {
    let m = n + l;
    let gens = d.generators(m)?;
    annihilated(&gens, &p.at_level(d.domain(), m)?, d.domain(), n, m, true)
}

fn closure_raw(d: &dyn Descriptor, p: PairingDescriptor, n: usize, l: usize) -> Result<Subspace> {
    let m = n + l;
    let perp = perp_raw(d, p, m, l)?;
    // <z, y> = z^T G y = y^T G^T z.
    annihilated(perp.basis(), &p.at_level(d.domain(), m)?, d.domain(), n, m, false)
}

/// The right perp at level `n` from the generators within level `n + l`.
pub fn perp_certified(d: &dyn Descriptor, p: PairingDescriptor, n: usize, l: usize) -> Result<(Subspace, Certificate)> {
    let s = perp_raw(d, p, n, l)?;
    let stable = perp_raw(d, p, n, l + 1)? == s;
    Ok((s, Certificate { level: n, lookahead: l, stable }))
}

/// The perp of the perp, each computed with lookahead `l`.
pub fn closure_certified(d: &dyn Descriptor, p: PairingDescriptor, n: usize, l: usize) -> Result<(Subspace, Certificate)> {
    let s = closure_raw(d, p, n, l)?;
    let stable = closure_raw(d, p, n, l + 1)? == s;
    Ok((s, Certificate { level: n, lookahead: l, stable }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::index::{Direction, Ray};
    use crate::limits::template::{Cmp, FamilyTerm, IndexExpr, Symbol};
    use crate::linalg::q;

    pub(crate) fn dense_hyperplane() -> SeqSubspace {
        let t = |c, off| FamilyTerm {
            coeff: q(c),
            symbol: Symbol::E,
            index: IndexExpr::Var { negated: false, offset: off },
            tensor: None,
        };
        let f = Family {
            var: "k".into(),
            cmp: Cmp::Ge,
            bound: 1,
            terms: vec![t(1, 0), t(-1, 1)],
        };
        SeqSubspace::new(IndexDomain::Positive, vec![], vec![f]).unwrap()
    }

    #[test]
    fn truncations() {
        let f1 = StableSubspace::indexed(IndexSet::ray(IndexDomain::Signed, Direction::Down, 1).unwrap());
        let s = f1.truncate(3).unwrap();
        assert_eq!(s, Subspace::coordinate(6, [0, 1, 2, 3]));
        assert!(StableSubspace::zero(IndexDomain::Signed).truncate(4).unwrap().is_zero());
        assert_eq!(dense_hyperplane().truncate(4).unwrap().dim(), 3);
    }

    #[test]
    fn dense_hyperplane_is_not_closed() {
        let d = dense_hyperplane();
        let (p, c) = perp_certified(&d, PairingDescriptor::StandardDual, 4, 1).unwrap();
        assert!(p.is_zero() && c.stable);
        let (cl, c) = closure_certified(&d, PairingDescriptor::StandardDual, 4, 1).unwrap();
        assert!(cl.is_full() && c.stable);
    }

    #[test]
    fn stable_subspaces_are_closed() {
        let idx = IndexSet::new(IndexDomain::Signed, [2], [Ray { dir: Direction::Down, start: -2 }]).unwrap();
        let s = StableSubspace::new(idx, vec![Template::new([(1, q(1)), (-1, q(1))])]).unwrap();
        for p in [PairingDescriptor::StandardDual, PairingDescriptor::SplitSymmetric] {
            let (perp, c) = perp_certified(&s, p, 3, 0).unwrap();
            assert!(c.stable);
            assert_eq!(perp.dim(), 6 - s.truncate(3).unwrap().dim());
            let (cl, _) = closure_certified(&s, p, 3, 0).unwrap();
            assert_eq!(cl, s.truncate(3).unwrap());
        }
    }

    #[test]
    fn coherence() {
        let idx = IndexSet::new(IndexDomain::Signed, [1], [Ray { dir: Direction::Up, start: 3 }]).unwrap();
        let s = StableSubspace::new(idx, vec![Template::new([(-2, q(1)), (2, q(5))])]).unwrap();
        let d = IndexDomain::Signed;
        for n in 2..5 {
            for m in n..6 {
                let big = s.truncate(m).unwrap();
                let window: Vec<usize> = d.indices(n).iter().map(|&i| d.position(m, i).unwrap()).collect();
                assert_eq!(big.restrict(&window), s.truncate(n).unwrap());
            }
        }
    }
}
