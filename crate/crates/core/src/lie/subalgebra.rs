use std::sync::Arc;

use num_traits::Zero;

use super::ambient::{Ambient, AmbientKind};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{bracket, Echelon, Matrix, Subspace, Vector};

#[derive(Clone, Debug)]
pub struct LieSubalgebra {
    ambient: Arc<Ambient>,
    space: Subspace,
    basis: Vec<Matrix>,
}

impl PartialEq for LieSubalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && *self.ambient == *other.ambient
    }
}

impl Eq for LieSubalgebra {}

impl LieSubalgebra {
    pub(crate) fn new_unchecked(ambient: Arc<Ambient>, space: Subspace) -> Self {
        let n = ambient.n();
        let basis = space.basis().iter().map(|v| Matrix::from_flat(n, v)).collect();
        LieSubalgebra { ambient, space, basis }
    }

    /// Checks containment in the ambient and bracket closure on basis pairs.
    pub fn new(ambient: Arc<Ambient>, space: Subspace) -> Result<Self> {
        check_dim(ambient.n() * ambient.n(), space.ambient_dim())?;
        if !space.is_subspace_of(ambient.space())? {
            return Err(Error::input("subspace is not inside the ambient algebra"));
        }
        let s = Self::new_unchecked(ambient, space);
        for (i, a) in s.basis.iter().enumerate() {
            for (j, b) in s.basis.iter().enumerate().skip(i + 1) {
                if !s.space.contains(&bracket(a, b).flatten()) {
                    return Err(Error::input(format!("basis elements {i} and {j} bracket outside the span")));
                }
            }
        }
        Ok(s)
    }

    pub fn zero(ambient: Arc<Ambient>) -> Self {
        let n = ambient.n();
        Self::new_unchecked(ambient, Subspace::zero(n * n))
    }

    pub fn full(ambient: Arc<Ambient>) -> Self {
        let space = ambient.space().clone();
        Self::new_unchecked(ambient, space)
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn basis_matrices(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.ambient.n() && m.cols() == self.ambient.n() && self.space.contains(&m.flatten())
    }

    pub fn is_subalgebra_of(&self, other: &LieSubalgebra) -> bool {
        self.space.is_subspace_of(&other.space).unwrap_or(false)
    }

    /// `[self, other]` as a subspace.
    pub fn bracket_space(&self, other: &LieSubalgebra) -> Subspace {
        bracket_span(&self.basis, &other.basis, self.ambient.n())
    }

    pub fn derived(&self) -> LieSubalgebra {
        Self::new_unchecked(self.ambient.clone(), bracket_span(&self.basis, &self.basis, self.ambient.n()))
    }

    /// `g, [g,g], ...`, stopping at the first term equal to its predecessor
    /// or at `0`.
    pub fn derived_series(&self) -> Vec<LieSubalgebra> {
        let mut out = vec![self.clone()];
        loop {
            let last = out.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = last.derived();
            if next.dim() == last.dim() {
                break;
            }
            out.push(next);
        }
        out
    }

    /// Solvable iff the derived series reaches `0`.
    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_zero()
    }

    /// Cartan's criterion: a matrix algebra `s` is solvable iff
    /// `tr(x y) = 0` for `x ∈ [s,s]`, `y ∈ s`.
    pub fn is_solvable_by_traces(&self) -> bool {
        cartan_solvable(&self.basis, self.ambient.n())
    }

    pub fn orbit(&self, u: &Vector) -> Result<Subspace> {
        check_dim(self.ambient.n(), u.dim())?;
        let mut e = Echelon::new(u.dim());
        for z in &self.basis {
            e.insert(&z.apply(u));
        }
        Ok(e.into_subspace())
    }

    /// Whether `self` stabilizes the subspace `s`.
    pub fn stabilizes(&self, s: &Subspace) -> bool {
        s.ambient_dim() == self.ambient.n()
            && self.basis.iter().all(|z| s.basis().iter().all(|v| s.contains(&z.apply(v))))
    }

    pub fn intersect(&self, other: &LieSubalgebra) -> Result<LieSubalgebra> {
        Ok(Self::new_unchecked(self.ambient.clone(), self.space.intersect(&other.space)?))
    }
}

pub(crate) fn bracket_span(a: &[Matrix], b: &[Matrix], n: usize) -> Subspace {
    let mut e = Echelon::new(n * n);
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            // Skip the mirrored half when both lists are the same.
            if std::ptr::eq(a, b) && j <= i {
                continue;
            }
            e.insert(&bracket(x, y).flatten());
        }
    }
    e.into_subspace()
}

/// Solutions `c` of the homogeneous system whose equations are `rows`.
pub(crate) fn null_combinations(rows: impl IntoIterator<Item = Vector>, ncols: usize) -> Subspace {
    let mut e = Echelon::new(ncols);
    for r in rows {
        if !r.is_zero() {
            e.insert(&r);
        }
    }
    e.into_subspace().annihilator()
}

/// `span{Σ c_k basis_k : c ∈ coeffs}` in flattened coordinates.
pub(crate) fn combine(basis: &[Matrix], coeffs: &Subspace, n: usize) -> Subspace {
    let mut e = Echelon::new(n * n);
    for c in coeffs.basis() {
        let mut v = Vector::zeros(n * n);
        for (ck, b) in c.iter().zip(basis) {
            if !ck.is_zero() {
                v.axpy(ck, &b.flatten());
            }
        }
        e.insert(&v);
    }
    e.into_subspace()
}

fn cartan_solvable(basis: &[Matrix], n: usize) -> bool {
    let d = bracket_span(basis, basis, n);
    d.basis().iter().all(|x| {
        let x = Matrix::from_flat(n, x);
        basis.iter().all(|y| x.trace_product(y).is_zero())
    })
}

#[derive(Clone)]
struct Saturation {
    n: usize,
    echelon: Echelon,
    elements: Vec<Matrix>,
    derived: Echelon,
    derived_elements: Vec<Matrix>,
}

/// Outcome of saturating a generating set.
enum Saturated {
    Algebra(Subspace),
    /// Saturation stopped once Cartan's criterion failed.
    NotSolvable,
}

impl Saturation {
    fn new(n: usize) -> Self {
        Saturation {
            n,
            echelon: Echelon::new(n * n),
            elements: Vec::new(),
            derived: Echelon::new(n * n),
            derived_elements: Vec::new(),
        }
    }

    /// Starts from a subalgebra already known to be closed and solvable,
    /// so only brackets involving new elements are formed.
    fn seeded(b: &LieSubalgebra) -> Self {
        let n = b.ambient.n();
        let derived = b.derived();
        Saturation {
            n,
            echelon: Echelon::from_subspace(&b.space),
            elements: b.basis.iter().map(Matrix::primitive).collect(),
            derived: Echelon::from_subspace(&derived.space),
            derived_elements: derived.basis,
        }
    }

    /// Brackets every new element with everything seen so far until nothing
    /// new appears. With `watch_solvable`, keeps the derived algebra
    /// alongside and bails out when a trace `tr([a,b] c)` is nonzero.
    fn run(mut self, gens: &[Matrix], watch_solvable: bool) -> Saturated {
        let mut queue: Vec<Matrix> = gens.iter().map(Matrix::primitive).collect();
        while let Some(x) = queue.pop() {
            // Keep the unreduced matrix: it spans the same and stays sparse.
            if !self.echelon.insert(&x.flatten()) {
                continue;
            }
            if watch_solvable && self.derived_elements.iter().any(|d| !d.trace_product(&x).is_zero()) {
                return Saturated::NotSolvable;
            }
            for y in &self.elements {
                let z = bracket(&x, y).primitive();
                if z.is_zero() {
                    continue;
                }
                if watch_solvable {
                    if self.derived.insert(&z.flatten()) {
                        if self.elements.iter().chain([&x]).any(|e| !z.trace_product(e).is_zero()) {
                            return Saturated::NotSolvable;
                        }
                        self.derived_elements.push(z.clone());
                    }
                }
                queue.push(z);
            }
            self.elements.push(x);
        }
        if watch_solvable {
            // Every new element was checked against derived elements found
            // before it and vice versa; the remaining pairs are covered above.
            debug_assert!(cartan_solvable(&self.elements, self.n));
        }
        Saturated::Algebra(self.echelon.into_subspace())
    }
}

pub fn generated_subalgebra(gens: &[Matrix], ambient: &Arc<Ambient>) -> Result<LieSubalgebra> {
    for (k, g) in gens.iter().enumerate() {
        if !ambient.contains(g) {
            return Err(Error::input(format!("generator {k} is not in the ambient algebra")));
        }
    }
    match Saturation::new(ambient.n()).run(gens, false) {
        Saturated::Algebra(s) => Ok(LieSubalgebra::new_unchecked(ambient.clone(), s)),
        Saturated::NotSolvable => unreachable!(),
    }
}

/// Whether the subalgebra generated by `gens` is solvable, stopping early
/// when it is not.
pub fn generates_solvable(gens: &[Matrix], n: usize) -> bool {
    matches!(Saturation::new(n).run(gens, true), Saturated::Algebra(_))
}

/// Dimension of a Borel subalgebra of the classical ambients, where every
/// form is split after extending scalars.
pub fn borel_dimension(a: &Ambient) -> Option<usize> {
    if a.window().is_some() {
        return None;
    }
    let n = a.n();
    let m = n / 2;
    match a.kind() {
        AmbientKind::Gl => Some(n * (n + 1) / 2),
        AmbientKind::Sl => Some((n * (n + 1) / 2).saturating_sub(1)),
        AmbientKind::So if n % 2 == 0 => Some(m * m),
        AmbientKind::So => Some(m * m + m),
        AmbientKind::Sp => Some(m * m + m),
        AmbientKind::Extension => None,
    }
}

/// A complement vector `x` with `<b, x>` solvable, if any.
pub fn solvable_extension(b: &LieSubalgebra) -> Result<Option<Matrix>> {
    if !b.is_solvable_by_traces() {
        return Err(Error::precondition("subalgebra is not solvable"));
    }
    // Complement taken from the ambient's own (sparse) basis.
    let mut e = Echelon::from_subspace(&b.space);
    let seed = Saturation::seeded(b);
    for x in b.ambient.basis_matrices() {
        if !e.insert(&x.flatten()) {
            continue;
        }
        if matches!(seed.clone().run(std::slice::from_ref(x), true), Saturated::Algebra(_)) {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// The complement-basis extension test: no single complement basis vector
/// extends `b` to a solvable subalgebra. For the classical ambients the
/// answer is cross-checked against the Borel dimension.
pub fn is_maximal_solvable(b: &LieSubalgebra) -> Result<bool> {
    let ext = solvable_extension(b)?;
    if let Some(bd) = borel_dimension(&b.ambient) {
        if b.dim() > bd || (b.dim() == bd && ext.is_some()) {
            return Err(Error::Invariant(format!(
                "solvable subalgebra of dimension {} conflicts with Borel dimension {bd}",
                b.dim()
            )));
        }
    }
    Ok(ext.is_none())
}

/// `{Z ∈ A : [Z, b] ⊆ b}`. `b` need not lie in `A`.
pub fn normalizer(b: &LieSubalgebra, ambient: &Arc<Ambient>) -> Result<LieSubalgebra> {
    check_dim(ambient.n(), b.ambient.n())?;
    let n = ambient.n();
    let abasis = ambient.basis_matrices();
    let db = Echelon::from_subspace(&b.space);
    // Column k: residuals of [A_k, b_j] modulo b, stacked over j.
    let cols: Vec<Vec<Vector>> = abasis
        .iter()
        .map(|ak| b.basis.iter().map(|bj| db.reduce(&bracket(ak, bj).flatten())).collect())
        .collect();
    let mut rows = Vec::new();
    for j in 0..b.basis.len() {
        for p in 0..n * n {
            if cols.iter().all(|c| c[j][p].is_zero()) {
                continue;
            }
            rows.push(cols.iter().map(|c| c[j][p].clone()).collect::<Vector>());
        }
    }
    let coeffs = null_combinations(rows, abasis.len());
    Ok(LieSubalgebra::new_unchecked(ambient.clone(), combine(abasis, &coeffs, n)))
}
