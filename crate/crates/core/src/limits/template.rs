use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::index::{Direction, IndexDomain};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Matrix, Rational, Vector};

/// A finite formal combination `Σ c_i e_i` over domain indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Template(BTreeMap<i64, Rational>);

impl Template {
    pub fn new(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut m: BTreeMap<i64, Rational> = BTreeMap::new();
        for (i, c) in terms {
            *m.entry(i).or_insert_with(Rational::zero) += c;
        }
        m.retain(|_, c| !c.is_zero());
        Template(m)
    }

    pub fn unit(i: i64) -> Self {
        Self::new([(i, Rational::one())])
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, domain: IndexDomain) -> Result<()> {
        self.0.keys().try_for_each(|&i| domain.check(i))
    }

    /// Smallest level containing the support.
    pub fn level(&self, domain: IndexDomain) -> usize {
        self.0.keys().map(|&i| domain.level_of(i)).max().unwrap_or(0)
    }

    /// Coordinates at level `n`, or `None` if the support leaves it.
    pub fn at_level(&self, domain: IndexDomain, n: usize) -> Option<Vector> {
        let mut v = vec![Rational::zero(); domain.level_dim(n)];
        for (&i, c) in &self.0 {
            v[domain.position(n, i)?] = c.clone();
        }
        Some(Vector::new(v))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, c)) in self.0.iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if !mag.is_one() {
                write!(f, "{} ", format_rational(&mag))?;
            }
            write!(f, "e({i})")?;
        }
        Ok(())
    }
}

/// Basis symbols: `e`/`x` for vectors of `V`, `x*` for the dual basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    E,
    X,
    XStar,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::E => "e",
            Symbol::X => "x",
            Symbol::XStar => "x*",
        }
    }

    pub fn is_dual(self) -> bool {
        self == Symbol::XStar
    }
}

/// Index of a family term: `±k + offset` or a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexExpr {
    Var { negated: bool, offset: i64 },
    Const(i64),
}

impl IndexExpr {
    pub fn eval(self, k: i64) -> i64 {
        match self {
            IndexExpr::Var { negated, offset } => (if negated { -k } else { k }) + offset,
            IndexExpr::Const(c) => c,
        }
    }

    fn reach(self) -> i64 {
        match self {
            IndexExpr::Var { offset, .. } => offset.abs(),
            IndexExpr::Const(c) => c.abs(),
        }
    }

    fn render(self, var: &str) -> String {
        match self {
            IndexExpr::Const(c) => c.to_string(),
            IndexExpr::Var { negated, offset } => {
                let base = if negated { format!("-{var}") } else { var.to_string() };
                match offset.cmp(&0) {
                    std::cmp::Ordering::Equal => base,
                    std::cmp::Ordering::Greater => format!("{base}+{offset}"),
                    std::cmp::Ordering::Less => format!("{base}-{}", -offset),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyTerm {
    pub coeff: Rational,
    pub symbol: Symbol,
    pub index: IndexExpr,
    /// Right-hand factor of `sym(i) ⊗ (expr)`.
    pub tensor: Option<Vec<FamilyTerm>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    Ge,
    Le,
}

/// `expr for k >= b` (or `<=`): one generator per parameter value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub var: String,
    pub cmp: Cmp,
    pub bound: i64,
    pub terms: Vec<FamilyTerm>,
}

/// What a family's members are.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Vectors of `V` (`dual = false`) or of `V_*`.
    Vector { dual: bool },
    /// Operators `V -> V` written as sums of `x(i) ⊗ (Σ c x*(j))`.
    Matrix,
}

fn render_terms(terms: &[FamilyTerm], var: &str) -> String {
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        let mag = t.coeff.abs();
        if k == 0 {
            if t.coeff.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if t.coeff.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format_rational(&mag));
            out.push(' ');
        }
        out.push_str(&format!("{}({})", t.symbol.as_str(), t.index.render(var)));
        if let Some(inner) = &t.tensor {
            out.push_str(&format!(" ⊗ ({})", render_terms(inner, var)));
        }
    }
    out
}

impl Family {
    pub fn kind(&self) -> Result<FamilyKind> {
        if self.terms.is_empty() {
            return Err(Error::input("family has no terms"));
        }
        if self.terms.iter().all(|t| t.tensor.is_some()) {
            for t in &self.terms {
                if t.symbol.is_dual() {
                    return Err(Error::input("left tensor factor must be a vector of V"));
                }
                for u in t.tensor.as_ref().unwrap() {
                    if !u.symbol.is_dual() || u.tensor.is_some() {
                        return Err(Error::input("right tensor factor must be a combination of x*"));
                    }
                }
            }
            return Ok(FamilyKind::Matrix);
        }
        if self.terms.iter().any(|t| t.tensor.is_some()) {
            return Err(Error::input("cannot mix tensor and vector terms"));
        }
        let dual = self.terms[0].symbol.is_dual();
        if self.terms.iter().any(|t| t.symbol.is_dual() != dual) {
            return Err(Error::input("cannot mix vectors of V and V_* in one family"));
        }
        Ok(FamilyKind::Vector { dual })
    }

    fn reach(&self) -> i64 {
        fn go(ts: &[FamilyTerm]) -> i64 {
            ts.iter()
                .map(|t| t.index.reach().max(t.tensor.as_deref().map_or(0, go)))
                .max()
                .unwrap_or(0)
        }
        go(&self.terms)
    }

    /// Parameter values whose instances can meet level `n`, in increasing
    /// distance from the bound.
    pub fn parameters(&self, n: usize) -> Vec<i64> {
        let lim = n as i64 + self.reach() + 1;
        match self.cmp {
            Cmp::Ge => (self.bound..=lim.max(self.bound)).collect(),
            Cmp::Le => (-lim.max(-self.bound)..=self.bound).rev().collect(),
        }
    }

    pub fn direction(&self) -> Direction {
        match self.cmp {
            Cmp::Ge => Direction::Up,
            Cmp::Le => Direction::Down,
        }
    }

    /// The vector instance at parameter `k` as a template; errors on
    /// indices outside the domain.
    pub fn vector_at(&self, domain: IndexDomain, k: i64) -> Result<Template> {
        let mut terms = Vec::new();
        for t in &self.terms {
            let i = t.index.eval(k);
            domain.check(i)?;
            terms.push((i, t.coeff.clone()));
        }
        Ok(Template::new(terms))
    }

    /// Vector instances supported within level `n`.
    pub fn vectors_within(&self, domain: IndexDomain, n: usize) -> Result<Vec<Vector>> {
        let mut out = Vec::new();
        for k in self.parameters(n) {
            if let Some(v) = self.vector_at(domain, k)?.at_level(domain, n) {
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    /// The operator instance at `k` at level `n`, or `None` if its support
    /// leaves the level. `x(i) ⊗ x*(j)` is the matrix unit sending `x_j` to
    /// `x_i`.
    pub fn matrix_at(&self, domain: IndexDomain, k: i64, n: usize) -> Result<Option<Matrix>> {
        let d = domain.level_dim(n);
        let mut m = Matrix::zeros(d, d);
        for t in &self.terms {
            let i = t.index.eval(k);
            domain.check(i)?;
            let Some(r) = domain.position(n, i) else { return Ok(None) };
            for u in t.tensor.as_deref().unwrap_or(&[]) {
                let j = u.index.eval(k);
                domain.check(j)?;
                let Some(c) = domain.position(n, j) else { return Ok(None) };
                m[(r, c)] += &t.coeff * &u.coeff;
            }
        }
        Ok(Some(m))
    }

    /// The formal sum of all operator instances, truncated to level `n`:
    /// the sum of the instances supported within the level.
    pub fn matrix_sum(&self, domain: IndexDomain, n: usize) -> Result<Matrix> {
        if self.kind()? != FamilyKind::Matrix {
            return Err(Error::input("family does not describe operators"));
        }
        let d = domain.level_dim(n);
        let mut acc = Matrix::zeros(d, d);
        for k in self.parameters(n) {
            if let Some(m) = self.matrix_at(domain, k, n)? {
                acc = acc.add(&m);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cmp = match self.cmp {
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
        };
        write!(f, "{} for {} {cmp} {}", render_terms(&self.terms, &self.var), self.var, self.bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn term(c: i64, symbol: Symbol, index: IndexExpr) -> FamilyTerm {
        FamilyTerm {
            coeff: q(c),
            symbol,
            index,
            tensor: None,
        }
    }

    fn var(offset: i64) -> IndexExpr {
        IndexExpr::Var { negated: false, offset }
    }

    #[test]
    fn dense_hyperplane_instances() {
        let f = Family {
            var: "k".into(),
            cmp: Cmp::Ge,
            bound: 1,
            terms: vec![term(1, Symbol::E, var(0)), term(-1, Symbol::E, var(1))],
        };
        assert_eq!(f.kind().unwrap(), FamilyKind::Vector { dual: false });
        let vs = f.vectors_within(IndexDomain::Positive, 4).unwrap();
        assert_eq!(vs.len(), 3);
        assert_eq!(vs[0], Vector::from_ints(&[1, -1, 0, 0]));
        assert_eq!(f.to_string(), "e(k) - e(k+1) for k >= 1");
    }

    #[test]
    fn operator_sum() {
        let dual = vec![
            term(1, Symbol::XStar, var(0)),
            term(1, Symbol::XStar, IndexExpr::Var { negated: true, offset: 0 }),
        ];
        let f = Family {
            var: "i".into(),
            cmp: Cmp::Ge,
            bound: 1,
            terms: vec![FamilyTerm {
                coeff: q(1),
                symbol: Symbol::X,
                index: var(0),
                tensor: Some(dual),
            }],
        };
        let m = f.matrix_sum(IndexDomain::Signed, 1).unwrap();
        // Coordinates (-1, 1): x_1 ⊗ (x*_1 + x*_{-1}).
        assert_eq!(m, Matrix::from_ints(&[&[0, 0], &[1, 1]]));
        assert_eq!(f.to_string(), "x(i) ⊗ (x*(i) + x*(-i)) for i >= 1");
    }

    #[test]
    fn template_display() {
        let t = Template::new([(1, q(1)), (2, q(-3))]);
        assert_eq!(t.to_string(), "e(1) - 3 e(2)");
    }
}
