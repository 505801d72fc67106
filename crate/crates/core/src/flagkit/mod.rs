//! Chains and generalized flags at finite level.

mod enumerate;

pub use enumerate::{coordinate_flags, signed_coordinate_flags, SignedPermutations};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{Subspace, Vector};
use crate::pairing::{Pairing, Side, Symmetry};

/// A set of subspaces totally ordered by strict inclusion, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    ambient_dim: usize,
    members: Vec<Subspace>,
}

impl Chain {
    /// Sorts and deduplicates `members`; fails unless they form a chain.
    pub fn new(ambient_dim: usize, mut members: Vec<Subspace>) -> Result<Self> {
        for m in &members {
            check_dim(ambient_dim, m.ambient_dim())?;
        }
        members.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        members.dedup();
        for w in members.windows(2) {
            if !w[0].is_subspace_of(&w[1])? {
                return Err(Error::input(format!(
                    "not a chain: a member of dimension {} is not contained in one of dimension {}",
                    w[0].dim(),
                    w[1].dim()
                )));
            }
        }
        Ok(Chain {
            ambient_dim,
            members,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// An immediate predecessor-successor pair.
///
/// `inf_marker` flags a pair that stands for an infinite-codimension gap of
/// a flag this one truncates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagPair {
    pub pred: Subspace,
    pub succ: Subspace,
    pub inf_marker: bool,
}

impl FlagPair {
    pub fn new(pred: Subspace, succ: Subspace) -> Self {
        FlagPair {
            pred,
            succ,
            inf_marker: false,
        }
    }

    pub fn codim(&self) -> usize {
        self.succ.dim() - self.pred.dim()
    }
}

/// A finite-level generalized flag, stored as its ordered pair list.
///
/// Pairs are consecutive: the first predecessor is `0` and each successor is
/// the next predecessor, so every nonzero vector of the support (the last
/// successor) lies in exactly one `succ \ pred`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralizedFlag {
    ambient_dim: usize,
    pairs: Vec<FlagPair>,
}

impl GeneralizedFlag {
    pub fn new(ambient_dim: usize, pairs: Vec<FlagPair>) -> Result<Self> {
        for (k, p) in pairs.iter().enumerate() {
            check_dim(ambient_dim, p.pred.ambient_dim())?;
            check_dim(ambient_dim, p.succ.ambient_dim())?;
            if !p.pred.is_subspace_of(&p.succ)? || p.pred == p.succ {
                return Err(Error::input(format!("pair {k}: pred is not a proper subspace of succ")));
            }
        }
        if let Some(first) = pairs.first() {
            if !first.pred.is_zero() {
                return Err(Error::input("pair 0: the first predecessor must be 0"));
            }
        }
        for (k, w) in pairs.windows(2).enumerate() {
            if w[0].succ != w[1].pred {
                return Err(Error::input(format!(
                    "pairs {k} and {}: successor and next predecessor differ",
                    k + 1
                )));
            }
        }
        Ok(GeneralizedFlag { ambient_dim, pairs })
    }

    /// The flag `0 = M_0 ⊂ M_1 ⊂ ... ⊂ M_k` with pairs `(M_i, M_{i+1})`.
    pub fn from_members(ambient_dim: usize, members: &[Subspace]) -> Result<Self> {
        let chain = Chain::new(ambient_dim, members.to_vec())?;
        let mut ms = chain.members;
        if ms.first().map_or(true, |m| !m.is_zero()) {
            ms.insert(0, Subspace::zero(ambient_dim));
        }
        let pairs = ms
            .windows(2)
            .map(|w| FlagPair::new(w[0].clone(), w[1].clone()))
            .collect();
        GeneralizedFlag::new(ambient_dim, pairs)
    }

    pub fn empty(ambient_dim: usize) -> Self {
        GeneralizedFlag {
            ambient_dim,
            pairs: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pairs(&self) -> &[FlagPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Union of the successors.
    pub fn support(&self) -> Subspace {
        self.pairs
            .last()
            .map_or_else(|| Subspace::zero(self.ambient_dim), |p| p.succ.clone())
    }

    /// Distinct members in increasing order, starting with `0`.
    pub fn members(&self) -> Vec<Subspace> {
        let mut out = vec![Subspace::zero(self.ambient_dim)];
        out.extend(self.pairs.iter().map(|p| p.succ.clone()));
        out
    }

    pub fn successors(&self) -> impl Iterator<Item = &Subspace> {
        self.pairs.iter().map(|p| &p.succ)
    }

    pub fn with_markers(mut self, markers: &[bool]) -> Self {
        for (p, &m) in self.pairs.iter_mut().zip(markers) {
            p.inf_marker = m;
        }
        self
    }

    /// Index of the pair with `x ∈ succ \ pred`.
    pub fn locate_index(&self, x: &Vector) -> Result<usize> {
        check_dim(self.ambient_dim, x.dim())?;
        if x.is_zero() {
            return Err(Error::input("cannot locate the zero vector"));
        }
        self.pairs
            .iter()
            .position(|p| p.succ.contains(x))
            .ok_or_else(|| Error::input("vector lies outside the flag's support"))
    }

    pub fn locate(&self, x: &Vector) -> Result<(Subspace, Subspace)> {
        let p = &self.pairs[self.locate_index(x)?];
        Ok((p.pred.clone(), p.succ.clone()))
    }

    /// Whether `self` refines `coarse`: each pair of `self` sits inside a
    /// pair of `coarse`, which is the per-vector condition
    /// `F'_x ⊂ G'_x ⊂ G''_x ⊂ F''_x`.
    pub fn is_refinement_of(&self, coarse: &GeneralizedFlag) -> Result<bool> {
        check_dim(coarse.ambient_dim, self.ambient_dim)?;
        if self.support() != coarse.support() {
            return Err(Error::input("flags have different supports"));
        }
        for g in &self.pairs {
            let mut inside = false;
            for f in &coarse.pairs {
                if f.pred.is_subspace_of(&g.pred)? && g.succ.is_subspace_of(&f.succ)? {
                    inside = true;
                    break;
                }
            }
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn report(&self, p: &Pairing) -> Result<FlagReport> {
        check_dim(p.left_dim(), self.ambient_dim)?;
        let mut is_closed = true;
        let mut good_pairs = Vec::new();
        let mut is_bivalent = true;
        for (k, pair) in self.pairs.iter().enumerate() {
            let succ_closed = p.is_closed(&pair.succ, Side::Left)?;
            let pred_bar = p.closure(&pair.pred, Side::Left)?;
            let pred_closed = pred_bar == pair.pred;
            if !succ_closed || !(pred_closed || pred_bar == pair.succ) {
                is_closed = false;
            }
            if pred_closed {
                good_pairs.push(k);
                if pair.codim() != 1 && !pair.inf_marker {
                    is_bivalent = false;
                }
            }
        }
        Ok(FlagReport {
            is_maximal: self.pairs.iter().all(|p| p.codim() == 1),
            is_closed,
            is_bivalent,
            good_pairs,
        })
    }

    /// The pairs whose successor is isotropic.
    pub fn iso_part(&self, p: &Pairing) -> Result<GeneralizedFlag> {
        let mut pairs = Vec::new();
        for pair in &self.pairs {
            if p.is_isotropic(&pair.succ)? {
                pairs.push(pair.clone());
            }
        }
        GeneralizedFlag::new(self.ambient_dim, pairs)
    }

    /// Maximal closed isotropic: closed, codimension-1 pairs, isotropic
    /// members, and a maximal isotropic support.
    pub fn is_maximal_closed_isotropic(&self, p: &Pairing) -> Result<bool> {
        check_dim(p.left_dim(), self.ambient_dim)?;
        if !p.is_form() {
            return Err(Error::input("isotropic flags need a form"));
        }
        if self.pairs.iter().any(|q| q.codim() != 1) {
            return Ok(false);
        }
        for pair in &self.pairs {
            if !p.is_isotropic(&pair.succ)? || !p.is_closed(&pair.succ, Side::Left)? {
                return Ok(false);
            }
        }
        Ok(p.classify(&self.support())?.is_maximal_isotropic)
    }

    /// Whether the flag has a twin: a last pair whose predecessor is closed
    /// and whose successor is its own perpendicular.
    pub fn has_twin(&self, p: &Pairing) -> Result<bool> {
        let Some(last) = self.pairs.last() else {
            return Ok(false);
        };
        Ok(p.is_closed(&last.pred, Side::Left)? && p.perp(&last.succ, Side::Left)? == last.succ)
    }

    /// `tw(F)`: the final successor swapped for the other maximal isotropic
    /// subspace through the final predecessor; `None` without a twin.
    pub fn twin(&self, p: &Pairing) -> Result<Option<GeneralizedFlag>> {
        if p.symmetry() != Some(Symmetry::Symmetric) {
            return Err(Error::precondition("twins need a symmetric form"));
        }
        if !self.is_maximal_closed_isotropic(p)? {
            return Err(Error::precondition("flag is not maximal closed isotropic"));
        }
        if !self.has_twin(p)? {
            return Ok(None);
        }
        let last = self.pairs.last().unwrap();
        let [a, b] = p.maximal_isotropic_extensions(&last.pred)?;
        let other = if a == last.succ { b } else { a };
        let mut pairs = self.pairs.clone();
        pairs.last_mut().unwrap().succ = other;
        Ok(Some(GeneralizedFlag::new(self.ambient_dim, pairs)?))
    }

    /// Borel refinement of a bivalent closed flag, at finite level.
    ///
    /// Outside marked pairs the two flags must agree pair for pair. Inside
    /// a marked good pair `F' ⊂ F''`, the refining pairs must have
    /// codimension 1 and predecessors that are dense in `F''` under
    /// `closure`; the lowest refining pair, whose predecessor is `F'`
    /// itself, is exempt because a truncation cannot see the missing
    /// infinite descent above `F'`.
    pub fn is_borel_refinement_of(
        &self,
        coarse: &GeneralizedFlag,
        closure: &dyn Fn(&Subspace) -> Result<Subspace>,
    ) -> Result<bool> {
        if !self.is_refinement_of(coarse)? {
            return Ok(false);
        }
        for f in &coarse.pairs {
            let inner: Vec<&FlagPair> = self
                .pairs
                .iter()
                .filter(|g| {
                    f.pred.is_subspace_of(&g.pred).unwrap_or(false)
                        && g.succ.is_subspace_of(&f.succ).unwrap_or(false)
                })
                .collect();
            let good = closure(&f.pred)? == f.pred;
            if good && f.inf_marker {
                for g in inner {
                    if g.codim() != 1 {
                        return Ok(false);
                    }
                    if g.pred != f.pred && closure(&g.pred)? != f.succ {
                        return Ok(false);
                    }
                }
            } else if inner.len() != 1 || inner[0].pred != f.pred || inner[0].succ != f.succ {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `fl(C)` for a chain containing `0` and `ambient`: each nonzero `x`
/// yields the pair (union of members missing `x`, intersection of members
/// containing `x`), which for a finite chain are consecutive members.
pub fn fl_from_chain(c: &Chain, ambient: &Subspace) -> Result<GeneralizedFlag> {
    check_dim(c.ambient_dim, ambient.ambient_dim())?;
    let zero = Subspace::zero(c.ambient_dim);
    if !c.members.contains(&zero) {
        return Err(Error::input("chain must contain the zero subspace"));
    }
    if !c.members.contains(ambient) {
        return Err(Error::input("chain must contain the ambient subspace"));
    }
    for m in &c.members {
        if !m.is_subspace_of(ambient)? {
            return Err(Error::input("chain member not contained in the ambient subspace"));
        }
    }
    let ms: Vec<Subspace> = c
        .members
        .iter()
        .filter(|m| m.is_subspace_of(ambient).unwrap_or(false))
        .cloned()
        .collect();
    let pairs = ms
        .windows(2)
        .map(|w| FlagPair::new(w[0].clone(), w[1].clone()))
        .collect();
    GeneralizedFlag::new(c.ambient_dim, pairs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagReport {
    pub is_maximal: bool,
    pub is_closed: bool,
    pub is_bivalent: bool,
    pub good_pairs: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::signed_unit;

    fn coord(n: usize, ps: &[usize]) -> Subspace {
        Subspace::coordinate(n, ps.iter().copied())
    }

    fn sgn(dim: usize, is: &[i64]) -> Subspace {
        let vs: Vec<Vector> = is.iter().map(|&i| signed_unit(dim, i)).collect();
        Subspace::span(&vs, dim).unwrap()
    }

    #[test]
    fn fl_of_flag_and_gapped_chain() {
        let c = Chain::new(
            3,
            vec![Subspace::zero(3), coord(3, &[0]), coord(3, &[0, 1]), Subspace::full(3)],
        )
        .unwrap();
        let f = fl_from_chain(&c, &Subspace::full(3)).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.pairs()[1].pred, coord(3, &[0]));
        let c = Chain::new(3, vec![Subspace::zero(3), coord(3, &[0]), coord(3, &[0]), Subspace::full(3)])
            .unwrap();
        let f = fl_from_chain(&c, &Subspace::full(3)).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.pairs()[1], FlagPair::new(coord(3, &[0]), Subspace::full(3)));
        let bad = Chain::new(3, vec![coord(3, &[0]), Subspace::full(3)]).unwrap();
        assert!(fl_from_chain(&bad, &Subspace::full(3)).is_err());
    }

    #[test]
    fn locate_examples() {
        let f = GeneralizedFlag::from_members(2, &[coord(2, &[0]), Subspace::full(2)]).unwrap();
        assert_eq!(f.locate(&Vector::from_ints(&[1, 0])).unwrap().1, coord(2, &[0]));
        assert_eq!(f.locate(&Vector::from_ints(&[1, 1])).unwrap().0, coord(2, &[0]));
        let iso = GeneralizedFlag::from_members(4, &[sgn(4, &[1])]).unwrap();
        assert!(iso.locate(&signed_unit(4, 2)).is_err());
        assert!(f.locate(&Vector::zeros(2)).is_err());
    }

    #[test]
    fn refinement_examples() {
        let full = GeneralizedFlag::from_members(3, &[coord(3, &[0]), coord(3, &[0, 1]), Subspace::full(3)])
            .unwrap();
        let coarse = GeneralizedFlag::from_members(3, &[coord(3, &[0]), Subspace::full(3)]).unwrap();
        assert!(full.is_refinement_of(&coarse).unwrap());
        assert!(full.is_refinement_of(&full).unwrap());
        assert!(!coarse.is_refinement_of(&full).unwrap());
        let a = GeneralizedFlag::from_members(2, &[coord(2, &[1]), Subspace::full(2)]).unwrap();
        let b = GeneralizedFlag::from_members(2, &[coord(2, &[0]), Subspace::full(2)]).unwrap();
        assert!(!a.is_refinement_of(&b).unwrap());
    }

    #[test]
    fn reports() {
        let p = Pairing::standard_dual(2);
        let full = GeneralizedFlag::from_members(2, &[coord(2, &[0]), Subspace::full(2)]).unwrap();
        let r = full.report(&p).unwrap();
        assert!(r.is_maximal && r.is_closed && r.is_bivalent);
        assert_eq!(r.good_pairs, vec![0, 1]);
        let one = GeneralizedFlag::from_members(2, &[Subspace::full(2)]).unwrap();
        let r = one.report(&p).unwrap();
        assert!(r.is_closed && !r.is_maximal && !r.is_bivalent);
    }

    #[test]
    fn iso_part_of_full_flag() {
        let p = Pairing::split_symmetric(4);
        let f = GeneralizedFlag::from_members(
            4,
            &[sgn(4, &[1]), sgn(4, &[1, 2]), sgn(4, &[1, 2, -2]), Subspace::full(4)],
        )
        .unwrap();
        let iso = f.iso_part(&p).unwrap();
        assert_eq!(iso, GeneralizedFlag::from_members(4, &[sgn(4, &[1]), sgn(4, &[1, 2])]).unwrap());
        assert_eq!(iso.iso_part(&p).unwrap(), iso);
    }

    #[test]
    fn twins() {
        let p = Pairing::split_symmetric(4);
        let f = GeneralizedFlag::from_members(4, &[sgn(4, &[1]), sgn(4, &[1, 2])]).unwrap();
        let t = f.twin(&p).unwrap().unwrap();
        assert_eq!(t.support(), sgn(4, &[1, -2]));
        assert_eq!(t.twin(&p).unwrap().unwrap(), f);
        let p5 = Pairing::split_symmetric(5);
        let g = GeneralizedFlag::from_members(5, &[sgn(5, &[1]), sgn(5, &[1, 2])]).unwrap();
        assert_eq!(g.twin(&p5).unwrap(), None);
        let short = GeneralizedFlag::from_members(4, &[sgn(4, &[1])]).unwrap();
        assert!(matches!(short.twin(&p), Err(Error::Precondition(_))));
    }
}
