//! Exact linear algebra over the rationals.

mod matrix;
mod poly;
mod rational;
mod subspace;
mod vector;

pub use matrix::{bracket, Matrix};
pub use poly::{charpoly, Poly};
pub use rational::{format_rational, frac, one, parse_rational, q, zero, Rational, RationalStr};
pub use subspace::{inverse, kernel, rank, solve, Echelon, Subspace};
pub use vector::Vector;
