//! Dense univariate polynomials over Q, just enough for Jordan-type tests
//! and rational eigenvalues.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix;
use super::rational::{common_denominator, q, Rational};

/// Coefficients, lowest degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        Poly(self.0.iter().map(|c| c * &inv).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); r.len() - dd];
        let inv = d.lead().recip();
        for k in (0..quot.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        r.truncate(dd);
        (Poly::new(quot), Poly::new(r))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
        }
        acc
    }

    /// Distinct rational roots in increasing order, by the rational root
    /// test. `None` if the constant or leading coefficient is too large to
    /// enumerate divisors of.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.is_zero() {
            return Some(vec![]);
        }
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.0[0].is_zero() {
            roots.push(Rational::zero());
            let k = p.0.iter().position(|c| !c.is_zero()).unwrap();
            p = Poly::new(p.0[k..].to_vec());
        }
        if p.degree() == Some(0) {
            return Some(roots);
        }
        let den = common_denominator(&p.0);
        let ints: Vec<BigInt> = p
            .0
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let a0 = divisors(&ints[0].abs())?;
        let an = divisors(&ints.last().unwrap().abs())?;
        let mut cands: Vec<Rational> = Vec::new();
        for num in &a0 {
            for d in &an {
                let r = Rational::new(num.clone(), d.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        roots.extend(cands.into_iter().filter(|r| p.eval(r).is_zero()));
        roots.sort();
        Some(roots)
    }
}

const DIVISOR_CAP: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let v = n.to_u64().filter(|&v| v <= DIVISOR_CAP)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Characteristic polynomial `det(tI - M)` via Faddeev–LeVerrier.
pub fn charpoly(m: &Matrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    // c[n] = 1; M_k = M * M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(M M_k)/k
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&Matrix::identity(n).scale(&c[n - k + 1]));
        c[n - k] = -m.trace_product(&mk) / q(k as i64);
    }
    Poly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::frac;

    fn p(xs: &[i64]) -> Poly {
        Poly::new(xs.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn charpoly_of_2x2() {
        let m = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(charpoly(&m), p(&[-2, -5, 1]));
        assert!(charpoly(&m).eval_matrix(&m).is_zero());
    }

    #[test]
    fn squarefree() {
        // (t-1)^2 (t+2)
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(f.squarefree_part(), p(&[-2, 1, 1]));
    }

    #[test]
    fn rational_roots_found() {
        // (2t - 1)(t + 3) t
        let f = p(&[0, -3, 5, 2]);
        assert_eq!(f.rational_roots().unwrap(), vec![q(-3), q(0), frac(1, 2)]);
        assert_eq!(p(&[-2, 0, 1]).rational_roots().unwrap(), vec![]);
    }
}
