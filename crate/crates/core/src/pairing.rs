//! Bilinear pairings and forms, perpendiculars, closures and isotropy.
//!
//! Named kinds use signed indices. Coordinates are ordered
//! `-n, ..., -1, (0), 1, ..., n`; the middle slot exists only in odd
//! dimension. `split_symmetric` pairs `e_i` with `e_{-i}` with value 1 (and
//! `<e_0, e_0> = 1`); `split_symplectic` has `<e_i, e_{-i}> = 1` for `i > 0`
//! and `-1` for `i < 0`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{kernel, q, Matrix, Rational, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingKind {
    Explicit,
    StandardDual,
    SplitSymmetric,
    SplitSymplectic,
}

impl PairingKind {
    pub fn name(self) -> &'static str {
        match self {
            PairingKind::Explicit => "explicit",
            PairingKind::StandardDual => "standard_dual",
            PairingKind::SplitSymmetric => "split_symmetric",
            PairingKind::SplitSymplectic => "split_symplectic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Parity of a form (a square pairing whose gram is symmetric or
/// antisymmetric).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pairing {
    kind: PairingKind,
    gram: Matrix,
}

/// Position of signed index `i` among the coordinates of a split space of
/// dimension `dim`.
pub fn signed_position(dim: usize, i: i64) -> Option<usize> {
    let n = (dim / 2) as i64;
    let odd = dim % 2 == 1;
    if i.abs() > n || (i == 0 && !odd) {
        return None;
    }
    let p = if i < 0 || odd { n + i } else { n + i - 1 };
    Some(p as usize)
}

/// Signed index sitting at coordinate position `p`.
pub fn signed_index(dim: usize, p: usize) -> i64 {
    let n = (dim / 2) as i64;
    let p = p as i64;
    if dim % 2 == 1 {
        p - n
    } else if p < n {
        p - n
    } else {
        p - n + 1
    }
}

/// The signed labels of a split space, in coordinate order.
pub fn signed_labels(dim: usize) -> Vec<i64> {
    (0..dim).map(|p| signed_index(dim, p)).collect()
}

/// `e_i` in a split space of dimension `dim`.
pub fn signed_unit(dim: usize, i: i64) -> Vector {
    Vector::unit(dim, signed_position(dim, i).expect("signed index in range"))
}

impl Pairing {
    pub fn standard_dual(n: usize) -> Self {
        Pairing {
            kind: PairingKind::StandardDual,
            gram: Matrix::identity(n),
        }
    }

    pub fn split_symmetric(dim: usize) -> Self {
        let mut g = Matrix::zeros(dim, dim);
        for p in 0..dim {
            let i = signed_index(dim, p);
            g[(p, signed_position(dim, -i).unwrap())] = q(1);
        }
        Pairing {
            kind: PairingKind::SplitSymmetric,
            gram: g,
        }
    }

    pub fn split_symplectic(dim: usize) -> Result<Self> {
        if dim % 2 != 0 {
            return Err(Error::input(format!("split_symplectic needs even dimension, got {dim}")));
        }
        let mut g = Matrix::zeros(dim, dim);
        for p in 0..dim {
            let i = signed_index(dim, p);
            g[(p, signed_position(dim, -i).unwrap())] = q(i.signum());
        }
        Ok(Pairing {
            kind: PairingKind::SplitSymplectic,
            gram: g,
        })
    }

    /// Any gram matrix, degenerate ones included.
    pub fn explicit(gram: Matrix) -> Self {
        Pairing {
            kind: PairingKind::Explicit,
            gram,
        }
    }

    pub fn named(kind: PairingKind, dim: usize) -> Result<Self> {
        match kind {
            PairingKind::StandardDual => Ok(Self::standard_dual(dim)),
            PairingKind::SplitSymmetric => Ok(Self::split_symmetric(dim)),
            PairingKind::SplitSymplectic => Self::split_symplectic(dim),
            PairingKind::Explicit => Err(Error::input("explicit pairings need a gram matrix")),
        }
    }

    pub fn kind(&self) -> PairingKind {
        self.kind
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn left_dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn right_dim(&self) -> usize {
        self.gram.cols()
    }

    pub fn dim_of(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_dim(),
            Side::Right => self.right_dim(),
        }
    }

    pub fn symmetry(&self) -> Option<Symmetry> {
        match self.kind {
            PairingKind::SplitSymmetric => Some(Symmetry::Symmetric),
            PairingKind::SplitSymplectic => Some(Symmetry::Antisymmetric),
            _ if self.gram.is_symmetric() => Some(Symmetry::Symmetric),
            _ if self.gram.is_antisymmetric() => Some(Symmetry::Antisymmetric),
            _ => None,
        }
    }

    pub fn is_form(&self) -> bool {
        self.symmetry().is_some()
    }

    fn require_form(&self) -> Result<Symmetry> {
        self.symmetry().ok_or_else(|| {
            Error::input(format!(
                "isotropy needs a symmetric or antisymmetric form; got a {}x{} {} pairing",
                self.left_dim(),
                self.right_dim(),
                self.kind.name()
            ))
        })
    }

    /// `<x, y>` with `x` on the left and `y` on the right.
    pub fn eval(&self, x: &Vector, y: &Vector) -> Rational {
        x.dot(&self.gram.apply(y))
    }

    /// `G y`: the linear functional `x -> <x, y>` as a coordinate vector.
    pub fn functional_right(&self, y: &Vector) -> Vector {
        self.gram.apply(y)
    }

    pub fn perp(&self, s: &Subspace, side: Side) -> Result<Subspace> {
        check_dim(self.dim_of(side), s.ambient_dim())?;
        if s.is_zero() {
            return Ok(Subspace::full(self.dim_of(side.opposite())));
        }
        let b = s.basis_matrix();
        let m = match side {
            Side::Left => b.mul(&self.gram),
            Side::Right => b.mul(&self.gram.transpose()),
        };
        Ok(kernel(&m))
    }

    pub fn closure(&self, s: &Subspace, side: Side) -> Result<Subspace> {
        let p = self.perp(s, side)?;
        self.perp(&p, side.opposite())
    }

    pub fn is_closed(&self, s: &Subspace, side: Side) -> Result<bool> {
        Ok(self.closure(s, side)? == *s)
    }

    pub fn is_isotropic(&self, s: &Subspace) -> Result<bool> {
        self.require_form()?;
        s.is_subspace_of(&self.perp(s, Side::Left)?)
    }

    pub fn classify(&self, s: &Subspace) -> Result<IsotropyReport> {
        let is_closed = self.is_closed(s, Side::Left)?;
        let sym = self.require_form()?;
        let p = self.perp(s, Side::Left)?;
        let is_isotropic = s.is_subspace_of(&p)?;
        let is_coisotropic = p.is_subspace_of(s)?;
        let is_maximal_isotropic = match sym {
            Symmetry::Symmetric => is_isotropic && is_closed && p.dim() - s.dim() <= 1,
            Symmetry::Antisymmetric => *s == p,
        };
        Ok(IsotropyReport {
            is_closed,
            is_isotropic,
            is_coisotropic,
            is_maximal_isotropic,
        })
    }

    /// The two maximal isotropic subspaces containing a closed isotropic `L`
    /// with `dim L^perp / L = 2`, in canonical order.
    pub fn maximal_isotropic_extensions(&self, l: &Subspace) -> Result<[Subspace; 2]> {
        if self.symmetry() != Some(Symmetry::Symmetric) {
            return Err(Error::precondition("form is not symmetric"));
        }
        check_dim(self.left_dim(), l.ambient_dim())?;
        let p = self.perp(l, Side::Left)?;
        if !l.is_subspace_of(&p)? {
            return Err(Error::precondition("L is not isotropic"));
        }
        if !self.is_closed(l, Side::Left)? {
            return Err(Error::precondition("L is not closed"));
        }
        if p.dim() - l.dim() != 2 {
            return Err(Error::precondition(format!(
                "dim L^perp/L = {}, expected 2",
                p.dim() - l.dim()
            )));
        }
        let c = l.complement_in(&p)?;
        let (a, b) = (&c[0], &c[1]);
        let (fa, fb, fc) = (self.eval(a, a), self.eval(a, b), self.eval(b, b));
        // Isotropic s*a + t*b:  fa s^2 + 2 fb s t + fc t^2 = 0.
        let disc = &fb * &fb - &fa * &fc;
        if disc.is_zero() {
            return Err(Error::precondition("the induced form on L^perp/L is degenerate"));
        }
        let (u, v) = if fa.is_zero() {
            (a.clone(), a.scale(&fc).sub(&b.scale(&(q(2) * &fb))))
        } else {
            let r = rational_sqrt(&disc).ok_or_else(|| {
                Error::precondition("the induced plane is anisotropic over the rationals")
            })?;
            let s1 = (-&fb + &r) / &fa;
            let s2 = (-&fb - &r) / &fa;
            (a.scale(&s1).add(b), a.scale(&s2).add(b))
        };
        let mut out = [
            l.sum(&Subspace::span(&[u], l.ambient_dim())?)?,
            l.sum(&Subspace::span(&[v], l.ambient_dim())?)?,
        ];
        out.sort();
        Ok(out)
    }

    /// Convention line for reports.
    pub fn convention(&self) -> String {
        match self.kind {
            PairingKind::StandardDual => "standard_dual: <x_i, x_j*> = delta_ij".into(),
            PairingKind::SplitSymmetric => {
                "split_symmetric: <e_i, e_-i> = 1, <e_0, e_0> = 1 (odd dim); order -n..-1,(0),1..n".into()
            }
            PairingKind::SplitSymplectic => {
                "split_symplectic: <e_i, e_-i> = 1 for i > 0, -1 for i < 0; order -n..-1,1..n".into()
            }
            PairingKind::Explicit => "explicit gram: <x, y> = x^T G y".into(),
        }
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let isqrt = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rational::new(isqrt(r.numer())?, isqrt(r.denom())?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyReport {
    pub is_closed: bool,
    pub is_isotropic: bool,
    pub is_coisotropic: bool,
    pub is_maximal_isotropic: bool,
}
