use super::descriptor::{Descriptor, StableSubspace};
use super::index::{Direction, IndexDomain, IndexSet};
use crate::error::{Error, Result};
use crate::flagkit::{Chain, FlagPair, GeneralizedFlag};
use crate::linalg::Subspace;

/// How the members of a one-parameter chain family move with `s = 0, 1, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Moving {
    /// `fixed ∪ {anchor, ..., anchor moved s steps}`: increasing, with union
    /// `fixed ∪ ray(anchor)`.
    Grow { anchor: i64, dir: Direction },
    /// `fixed ∪ ray(start moved s steps)`: decreasing, with intersection
    /// `fixed`.
    Tail { start: i64, dir: Direction },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MemberFamily {
    pub fixed: StableSubspace,
    pub moving: Moving,
}

impl MemberFamily {
    pub fn new(fixed: StableSubspace, moving: Moving) -> Result<Self> {
        let d = fixed.domain();
        let (i, dir) = match moving {
            Moving::Grow { anchor, dir } => (anchor, dir),
            Moving::Tail { start, dir } => (start, dir),
        };
        d.check(i)?;
        if !d.unbounded(dir) {
            return Err(Error::input("a chain family must move in an unbounded direction"));
        }
        Ok(MemberFamily { fixed, moving })
    }

    fn domain(&self) -> IndexDomain {
        self.fixed.domain()
    }

    pub fn increasing(&self) -> bool {
        matches!(self.moving, Moving::Grow { .. })
    }

    pub fn member(&self, s: usize) -> Result<StableSubspace> {
        let d = self.domain();
        let part = match self.moving {
            Moving::Grow { anchor, dir } => {
                let end = d.step(anchor, s, dir).unwrap();
                let (a, b) = if dir == Direction::Up { (anchor, end) } else { (end, anchor) };
                IndexSet::interval(d, a, b)?
            }
            Moving::Tail { start, dir } => IndexSet::ray(d, dir, d.step(start, s, dir).unwrap())?,
        };
        self.fixed.with_indices(&part)
    }

    /// The union (growing) or intersection (tail) of all members.
    pub fn limit(&self) -> Result<StableSubspace> {
        match self.moving {
            Moving::Grow { anchor, dir } => self.fixed.with_indices(&IndexSet::ray(self.domain(), dir, anchor)?),
            Moving::Tail { .. } => Ok(self.fixed.clone()),
        }
    }

    /// Members `s = 0..` until they stop changing at level `n`.
    fn span(&self, n: usize) -> usize {
        let reach = match self.moving {
            Moving::Grow { anchor, .. } | Moving::Tail { start: anchor, .. } => self.domain().level_of(anchor),
        };
        self.domain().level_dim(n) + reach + 2
    }

    /// Smallest member in the chain order and largest.
    fn ends(&self) -> Result<(StableSubspace, StableSubspace)> {
        if self.increasing() {
            Ok((self.member(0)?, self.limit()?))
        } else {
            Ok((self.limit()?, self.member(0)?))
        }
    }

    pub fn describe(&self) -> String {
        match self.moving {
            Moving::Grow { anchor, dir } => format!(
                "{} ∪ {{{anchor} .. {anchor}{}s}} for s >= 0",
                self.fixed.describe(),
                if dir == Direction::Up { "+" } else { "-" }
            ),
            Moving::Tail { start, dir } => format!(
                "{} ∪ {{{start}{}s .. {}}} for s >= 0",
                self.fixed.describe(),
                if dir == Direction::Up { "+" } else { "-" },
                if dir == Direction::Up { "inf" } else { "-inf" }
            ),
        }
    }
}

/// A piece of a chain of descriptors, listed in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainBlock {
    Single(StableSubspace),
    Family(MemberFamily),
}

impl ChainBlock {
    fn domain(&self) -> IndexDomain {
        match self {
            ChainBlock::Single(s) => s.domain(),
            ChainBlock::Family(f) => f.domain(),
        }
    }

    fn normalization_level(&self) -> usize {
        match self {
            ChainBlock::Single(s) => s.normalization_level(),
            ChainBlock::Family(f) => f.fixed.normalization_level(),
        }
    }

    fn ends(&self) -> Result<(StableSubspace, StableSubspace)> {
        match self {
            ChainBlock::Single(s) => Ok((s.clone(), s.clone())),
            ChainBlock::Family(f) => f.ends(),
        }
    }

    /// Level-`n` truncations of the members in increasing order.
    fn members_at(&self, n: usize) -> Result<Vec<Subspace>> {
        match self {
            ChainBlock::Single(s) => Ok(vec![s.truncate(n)?]),
            ChainBlock::Family(f) => {
                let mut out = (0..f.span(n)).map(|s| f.member(s)?.truncate(n)).collect::<Result<Vec<_>>>()?;
                if !f.increasing() {
                    out.reverse();
                }
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DescPair {
    pub pred: StableSubspace,
    pub succ: StableSubspace,
    pub inf_marker: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PairBlock {
    Single(DescPair),
    /// Pairs of consecutive members of the family.
    Family(MemberFamily),
}

/// A generalized flag given by finitely many pair blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagDescriptor {
    pub domain: IndexDomain,
    pub blocks: Vec<PairBlock>,
}

impl FlagDescriptor {
    /// The level-`n` flag: every pair whose two sides still differ there,
    /// carrying its infinite-gap marker.
    pub fn truncate(&self, n: usize) -> Result<GeneralizedFlag> {
        let dim = self.domain.level_dim(n);
        let mut pairs = Vec::new();
        for b in &self.blocks {
            match b {
                PairBlock::Single(p) => {
                    let (a, c) = (p.pred.truncate(n)?, p.succ.truncate(n)?);
                    if a != c {
                        pairs.push(FlagPair {
                            pred: a,
                            succ: c,
                            inf_marker: p.inf_marker,
                        });
                    }
                }
                PairBlock::Family(f) => {
                    let ms = ChainBlock::Family(f.clone()).members_at(n)?;
                    for w in ms.windows(2) {
                        if w[0] != w[1] {
                            pairs.push(FlagPair::new(w[0].clone(), w[1].clone()));
                        }
                    }
                }
            }
        }
        GeneralizedFlag::new(dim, pairs)
    }

    pub fn describe(&self) -> Vec<String> {
        self.blocks
            .iter()
            .map(|b| match b {
                PairBlock::Single(p) => format!(
                    "({}, {}){}",
                    p.pred.describe(),
                    p.succ.describe(),
                    if p.inf_marker { " [infinite gap]" } else { "" }
                ),
                PairBlock::Family(f) => format!("consecutive members of {}", f.describe()),
            })
            .collect()
    }
}

fn check_chain(blocks: &[ChainBlock], n: usize) -> Result<()> {
    let mut prev: Option<Subspace> = None;
    for b in blocks {
        for m in b.members_at(n)? {
            if let Some(p) = &prev {
                if !p.is_subspace_of(&m)? {
                    return Err(Error::input(format!("chain blocks are not increasing at level {n}")));
                }
            }
            prev = Some(m);
        }
    }
    Ok(())
}

/// `fl(C)` for a chain given as increasing blocks. Each nonzero `x` gets
/// (union of members missing `x`, intersection of members containing `x`):
/// consecutive members inside a family, and between neighbouring blocks the
/// pair (upper end of one, lower end of the next) exactly when the two
/// differ. `0` and `V` close the chain at both ends.
pub fn fl_stable(blocks: &[ChainBlock], domain: IndexDomain) -> Result<FlagDescriptor> {
    if blocks.iter().any(|b| b.domain() != domain) {
        return Err(Error::input("chain blocks over different domains"));
    }
    let norm = blocks.iter().map(ChainBlock::normalization_level).max().unwrap_or(1);
    for n in norm..norm + 3 {
        check_chain(blocks, n)?;
    }
    let mut out = Vec::new();
    let mut below = StableSubspace::zero(domain);
    let push_gap = |out: &mut Vec<PairBlock>, a: &StableSubspace, b: &StableSubspace| -> Result<()> {
        if !a.same_as(b)? {
            out.push(PairBlock::Single(DescPair {
                pred: a.clone(),
                succ: b.clone(),
                inf_marker: a.gap_is_infinite(b)?,
            }));
        }
        Ok(())
    };
    for b in blocks {
        let (lo, hi) = b.ends()?;
        push_gap(&mut out, &below, &lo)?;
        if let ChainBlock::Family(f) = b {
            out.push(PairBlock::Family(f.clone()));
        }
        below = hi;
    }
    push_gap(&mut out, &below, &StableSubspace::full(domain))?;
    Ok(FlagDescriptor { domain, blocks: out })
}

/// Level-`n` truncation of every member, with `0` and `V` added.
pub fn truncate_chain(blocks: &[ChainBlock], domain: IndexDomain, n: usize) -> Result<Chain> {
    let dim = domain.level_dim(n);
    let mut ms = vec![Subspace::zero(dim), Subspace::full(dim)];
    for b in blocks {
        ms.extend(b.members_at(n)?);
    }
    Chain::new(dim, ms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagkit::fl_from_chain;

    use Direction::*;
    use IndexDomain::Signed;

    fn negatives() -> StableSubspace {
        StableSubspace::indexed(IndexSet::ray(Signed, Down, -1).unwrap())
    }

    /// `V_i = span{e_{-i}, ..., e_{-1}}` below `W_j = negatives + span{e_k : k >= j}`.
    fn paired_chain(with_e1: bool) -> Vec<ChainBlock> {
        let v = MemberFamily::new(StableSubspace::zero(Signed), Moving::Grow { anchor: -1, dir: Down }).unwrap();
        let (fixed, start) = if with_e1 {
            (negatives().with_indices(&IndexSet::singleton(Signed, 1).unwrap()).unwrap(), 2)
        } else {
            (negatives(), 1)
        };
        let w = MemberFamily::new(fixed, Moving::Tail { start, dir: Up }).unwrap();
        vec![ChainBlock::Family(v), ChainBlock::Family(w)]
    }

    fn singles(d: &FlagDescriptor) -> Vec<&DescPair> {
        d.blocks
            .iter()
            .filter_map(|b| match b {
                PairBlock::Single(p) => Some(p),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn equal_limits_insert_no_pair() {
        let d = fl_stable(&paired_chain(false), Signed).unwrap();
        // Only (0, V_1) is explicit; everything else comes from the families.
        let s = singles(&d);
        assert_eq!(s.len(), 1);
        assert!(s[0].pred.index_part.is_empty());
    }

    #[test]
    fn distinct_limits_insert_pair() {
        let d = fl_stable(&paired_chain(true), Signed).unwrap();
        let gap: Vec<_> = singles(&d).into_iter().filter(|p| p.pred.same_as(&negatives()).unwrap()).collect();
        assert_eq!(gap.len(), 1);
        assert!(!gap[0].inf_marker);
        assert_eq!(gap[0].succ.index_part, IndexSet::new(Signed, [1], [crate::limits::index::Ray { dir: Down, start: -1 }]).unwrap());
    }

    #[test]
    fn truncation_commutes() {
        for with_e1 in [false, true] {
            let c = paired_chain(with_e1);
            let d = fl_stable(&c, Signed).unwrap();
            for n in 3..=6 {
                let direct = fl_from_chain(&truncate_chain(&c, Signed, n).unwrap(), &Subspace::full(2 * n)).unwrap();
                assert_eq!(d.truncate(n).unwrap(), direct);
            }
        }
    }

    #[test]
    fn trivial_chain_and_markers() {
        let d = fl_stable(&[], Signed).unwrap();
        assert_eq!(d.blocks.len(), 1);
        let d = fl_stable(&[ChainBlock::Single(negatives())], Signed).unwrap();
        assert!(singles(&d).iter().all(|p| p.inf_marker));
        assert!(d.truncate(3).unwrap().pairs().iter().all(|p| p.inf_marker));
    }

    #[test]
    fn rejects_non_chains() {
        let pos = StableSubspace::indexed(IndexSet::ray(Signed, Up, 1).unwrap());
        assert!(fl_stable(&[ChainBlock::Single(negatives()), ChainBlock::Single(pos)], Signed).is_err());
    }
}
