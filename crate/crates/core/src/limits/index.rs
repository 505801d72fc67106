use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The index set of a countable basis: `1, 2, 3, ...` or
/// `... < -2 < -1 < 1 < 2 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexDomain {
    Positive,
    Signed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

impl IndexDomain {
    pub fn name(self) -> &'static str {
        match self {
            IndexDomain::Positive => "positive",
            IndexDomain::Signed => "signed",
        }
    }

    pub fn is_index(self, i: i64) -> bool {
        match self {
            IndexDomain::Positive => i >= 1,
            IndexDomain::Signed => i != 0,
        }
    }

    pub fn check(self, i: i64) -> Result<()> {
        if self.is_index(i) {
            Ok(())
        } else {
            Err(Error::input(format!("{i} is not an index of the {} domain", self.name())))
        }
    }

    /// Dimension of the level-`n` coordinate space.
    pub fn level_dim(self, n: usize) -> usize {
        match self {
            IndexDomain::Positive => n,
            IndexDomain::Signed => 2 * n,
        }
    }

    /// Indices of level `n` in coordinate order.
    pub fn indices(self, n: usize) -> Vec<i64> {
        let n = n as i64;
        match self {
            IndexDomain::Positive => (1..=n).collect(),
            IndexDomain::Signed => (-n..=-1).chain(1..=n).collect(),
        }
    }

    /// Coordinate of index `i` at level `n`.
    pub fn position(self, n: usize, i: i64) -> Option<usize> {
        let m = n as i64;
        match self {
            IndexDomain::Positive => (1..=m).contains(&i).then(|| (i - 1) as usize),
            IndexDomain::Signed => {
                if (-m..=-1).contains(&i) {
                    Some((i + m) as usize)
                } else if (1..=m).contains(&i) {
                    Some((i + m - 1) as usize)
                } else {
                    None
                }
            }
        }
    }

    /// The smallest level containing `i`.
    pub fn level_of(self, i: i64) -> usize {
        i.unsigned_abs() as usize
    }

    pub fn succ(self, i: i64) -> i64 {
        if self == IndexDomain::Signed && i == -1 {
            1
        } else {
            i + 1
        }
    }

    pub fn pred(self, i: i64) -> Option<i64> {
        match self {
            IndexDomain::Positive => (i > 1).then(|| i - 1),
            IndexDomain::Signed => Some(if i == 1 { -1 } else { i - 1 }),
        }
    }

    /// `i` moved `s` steps in direction `dir`.
    pub fn step(self, i: i64, s: usize, dir: Direction) -> Option<i64> {
        let mut j = i;
        for _ in 0..s {
            j = match dir {
                Direction::Up => self.succ(j),
                Direction::Down => self.pred(j)?,
            };
        }
        Some(j)
    }

    /// Whether rays in `dir` are infinite.
    pub fn unbounded(self, dir: Direction) -> bool {
        !(self == IndexDomain::Positive && dir == Direction::Down)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ray {
    pub dir: Direction,
    pub start: i64,
}

/// A set of indices: finitely many singletons plus at most one ray in each
/// direction, kept in a canonical form so that equal sets compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    domain: IndexDomain,
    singletons: BTreeSet<i64>,
    up: Option<i64>,
    down: Option<i64>,
}

impl IndexSet {
    pub fn empty(domain: IndexDomain) -> Self {
        IndexSet {
            domain,
            singletons: BTreeSet::new(),
            up: None,
            down: None,
        }
    }

    pub fn full(domain: IndexDomain) -> Self {
        Self::new(
            domain,
            [],
            [
                Ray { dir: Direction::Up, start: 1 },
                Ray { dir: Direction::Down, start: -1 },
            ]
            .into_iter()
            .filter(|r| domain.is_index(r.start)),
        )
        .expect("valid rays")
    }

    pub fn new(
        domain: IndexDomain,
        singletons: impl IntoIterator<Item = i64>,
        rays: impl IntoIterator<Item = Ray>,
    ) -> Result<Self> {
        let mut s = IndexSet::empty(domain);
        for i in singletons {
            domain.check(i)?;
            s.singletons.insert(i);
        }
        for r in rays {
            domain.check(r.start)?;
            match r.dir {
                Direction::Up => s.up = Some(s.up.map_or(r.start, |u| u.min(r.start))),
                Direction::Down => s.down = Some(s.down.map_or(r.start, |d| d.max(r.start))),
            }
        }
        s.normalize();
        Ok(s)
    }

    pub fn singleton(domain: IndexDomain, i: i64) -> Result<Self> {
        Self::new(domain, [i], [])
    }

    pub fn ray(domain: IndexDomain, dir: Direction, start: i64) -> Result<Self> {
        Self::new(domain, [], [Ray { dir, start }])
    }

    /// `{a, ..., b}` in domain order.
    pub fn interval(domain: IndexDomain, a: i64, b: i64) -> Result<Self> {
        domain.check(a)?;
        domain.check(b)?;
        let mut xs = Vec::new();
        let mut i = a;
        while i <= b {
            xs.push(i);
            i = domain.succ(i);
        }
        Self::new(domain, xs, [])
    }

    fn normalize(&mut self) {
        let d = self.domain;
        if let Some(top) = self.down.take() {
            if d.unbounded(Direction::Down) {
                self.down = Some(top);
            } else {
                self.singletons.extend(1..=top);
            }
        }
        if let Some(mut u) = self.up {
            while let Some(p) = d.pred(u).filter(|p| self.singletons.contains(p)) {
                u = p;
            }
            self.singletons.retain(|&i| i < u);
            self.up = Some(u);
        }
        if let Some(mut dn) = self.down {
            while self.singletons.contains(&d.succ(dn)) {
                dn = d.succ(dn);
            }
            self.singletons.retain(|&i| i > dn);
            self.down = Some(dn);
        }
        let covers_all = match (self.down, self.up) {
            (Some(dn), Some(u)) => d.succ(dn) >= u,
            (None, Some(u)) => d.pred(u).is_none(),
            _ => false,
        };
        if covers_all {
            self.singletons.clear();
            self.up = Some(1);
            self.down = d.unbounded(Direction::Down).then_some(-1);
        }
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn singletons(&self) -> &BTreeSet<i64> {
        &self.singletons
    }

    pub fn rays(&self) -> Vec<Ray> {
        let mut out = Vec::new();
        if let Some(start) = self.down {
            out.push(Ray { dir: Direction::Down, start });
        }
        if let Some(start) = self.up {
            out.push(Ray { dir: Direction::Up, start });
        }
        out
    }

    pub fn contains(&self, i: i64) -> bool {
        self.domain.is_index(i)
            && (self.singletons.contains(&i) || self.up.is_some_and(|u| i >= u) || self.down.is_some_and(|d| i <= d))
    }

    pub fn is_empty(&self) -> bool {
        self.singletons.is_empty() && self.up.is_none() && self.down.is_none()
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.domain)
    }

    pub fn is_finite(&self) -> bool {
        self.up.is_none() && self.down.is_none()
    }

    /// Largest `|i|` among the finite data; membership beyond it is decided
    /// by the rays alone.
    pub fn horizon(&self) -> usize {
        self.singletons
            .iter()
            .chain(self.up.iter())
            .chain(self.down.iter())
            .map(|&i| self.domain.level_of(i))
            .max()
            .unwrap_or(0)
    }

    /// Members inside level `n`, in coordinate order.
    pub fn at_level(&self, n: usize) -> Vec<i64> {
        self.domain.indices(n).into_iter().filter(|&i| self.contains(i)).collect()
    }

    fn same_domain(&self, other: &IndexSet) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::input("index sets over different domains"))
        }
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        self.same_domain(other)?;
        let mut s = self.clone();
        s.singletons.extend(other.singletons.iter().copied());
        s.up = match (self.up, other.up) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        s.down = match (self.down, other.down) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        s.normalize();
        Ok(s)
    }

    pub fn intersect(&self, other: &IndexSet) -> Result<IndexSet> {
        self.same_domain(other)?;
        let h = self.horizon().max(other.horizon()) + 1;
        let mut s = IndexSet::empty(self.domain);
        s.singletons = self
            .domain
            .indices(h)
            .into_iter()
            .filter(|&i| self.contains(i) && other.contains(i))
            .collect();
        if let (Some(a), Some(b)) = (self.up, other.up) {
            s.up = Some(a.max(b));
        }
        if let (Some(a), Some(b)) = (self.down, other.down) {
            s.down = Some(a.min(b));
        }
        s.normalize();
        Ok(s)
    }

    pub fn is_subset(&self, other: &IndexSet) -> Result<bool> {
        Ok(self.intersect(other)? == *self)
    }

    /// Whether `self \ other` is finite.
    pub fn difference_is_finite(&self, other: &IndexSet) -> Result<bool> {
        self.same_domain(other)?;
        Ok(!(self.up.is_some() && other.up.is_none() || self.down.is_some() && other.down.is_none()))
    }
}

impl fmt::Display for IndexSet {
    /// `{-inf..-3} | {1} | {5..inf}`; the empty set prints as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(d) = self.down {
            parts.push(format!("{{-inf..{d}}}"));
        }
        for i in &self.singletons {
            parts.push(format!("{{{i}}}"));
        }
        if let Some(u) = self.up {
            parts.push(format!("{{{u}..inf}}"));
        }
        if parts.is_empty() {
            f.write_str("{}")
        } else {
            f.write_str(&parts.join(" | "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use IndexDomain::*;

    #[test]
    fn positions() {
        assert_eq!(Signed.indices(2), vec![-2, -1, 1, 2]);
        assert_eq!(Signed.position(2, -2), Some(0));
        assert_eq!(Signed.position(2, 1), Some(2));
        assert_eq!(Signed.position(2, 3), None);
        assert_eq!(Positive.position(3, 3), Some(2));
    }

    #[test]
    fn canonical_forms() {
        let a = IndexSet::new(Signed, [-1, 4], [Ray { dir: Direction::Up, start: 5 }]).unwrap();
        assert_eq!(a, IndexSet::new(Signed, [-1], [Ray { dir: Direction::Up, start: 4 }]).unwrap());
        let all = IndexSet::new(Signed, [1], [Ray { dir: Direction::Down, start: -1 }, Ray { dir: Direction::Up, start: 2 }])
            .unwrap();
        assert!(all.is_full());
        let p = IndexSet::ray(Positive, Direction::Down, 3).unwrap();
        assert!(p.is_finite());
        assert_eq!(p.at_level(5), vec![1, 2, 3]);
        assert!(IndexSet::ray(Positive, Direction::Up, 1).unwrap().is_full());
        assert!(IndexSet::singleton(Signed, 0).is_err());
    }

    #[test]
    fn set_algebra() {
        let neg = IndexSet::ray(Signed, Direction::Down, -1).unwrap();
        let tail = IndexSet::ray(Signed, Direction::Up, 3).unwrap();
        let u = neg.union(&tail).unwrap();
        assert!(u.contains(-7) && u.contains(3) && !u.contains(1));
        assert_eq!(u.intersect(&neg).unwrap(), neg);
        assert!(neg.is_subset(&u).unwrap());
        assert!(!u.difference_is_finite(&neg).unwrap());
        let w = IndexSet::interval(Signed, -2, 2).unwrap();
        assert_eq!(w.intersect(&neg).unwrap(), IndexSet::new(Signed, [-2, -1], []).unwrap());
        assert_eq!(u.to_string(), "{-inf..-1} | {3..inf}");
    }
}
