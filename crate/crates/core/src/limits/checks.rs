//! Finite-level checks of the flag/stabilizer correspondence. Each returns
//! an [`Outcome`] rather than an error when the mathematics fails, so a
//! report can show what went wrong.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flagkit::{FlagPair, GeneralizedFlag};
use crate::lie::{
    borel_dimension, canonical_line_system, element_type, is_maximal_solvable, nilpotent_subalgebra, stabilizer,
    toral_subalgebra, Ambient, AmbientKind, ElementType, LieSubalgebra, StabMode,
};
use crate::linalg::{Subspace, Vector};
use crate::pairing::Side;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            passed: true,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn fail(detail: impl Into<String>, witness: impl Into<String>) -> Self {
        Outcome {
            passed: false,
            detail: detail.into(),
            witness: Some(witness.into()),
        }
    }
}

/// Compact rendering of a flag as its successor dimensions and bases.
pub fn render_flag(f: &GeneralizedFlag) -> String {
    let parts: Vec<String> = f
        .pairs()
        .iter()
        .map(|p| {
            format!(
                "{}{}",
                render_subspace(&p.succ),
                if p.inf_marker { "*" } else { "" }
            )
        })
        .collect();
    format!("0 ⊂ {}", parts.join(" ⊂ "))
}

pub fn render_subspace(s: &Subspace) -> String {
    let vs: Vec<String> = s
        .basis()
        .iter()
        .map(|v| {
            let cs: Vec<String> = v.iter().map(crate::linalg::format_rational).collect();
            format!("({})", cs.join(","))
        })
        .collect();
    format!("<{}>", vs.join(", "))
}

/// Brute force equals the formula, the result is solvable and maximal
/// solvable, and its dimension is that of a Borel subalgebra.
pub fn borel_check(flag: &GeneralizedFlag, ambient: &Arc<Ambient>) -> Result<Outcome> {
    let formula = stabilizer(flag, ambient, StabMode::Formula)?;
    let brute = stabilizer(flag, ambient, StabMode::Brute)?;
    let w = || render_flag(flag);
    if formula != brute {
        return Ok(Outcome::fail(
            format!("formula dim {} differs from brute force dim {}", formula.dim(), brute.dim()),
            w(),
        ));
    }
    if !formula.is_solvable() {
        return Ok(Outcome::fail("stabilizer is not solvable", w()));
    }
    if !is_maximal_solvable(&formula)? {
        return Ok(Outcome::fail("a complement element extends the stabilizer to a solvable algebra", w()));
    }
    if let Some(bd) = borel_dimension(ambient) {
        if formula.dim() != bd {
            return Ok(Outcome::fail(format!("dim {} but Borel dimension is {bd}", formula.dim()), w()));
        }
    }
    Ok(Outcome::pass(format!(
        "dim {} in {} (brute = formula, solvable, maximal solvable)",
        formula.dim(),
        ambient.describe()
    )))
}

fn strip(f: &GeneralizedFlag) -> Vec<(Subspace, Subspace)> {
    f.pairs().iter().map(|p| (p.pred.clone(), p.succ.clone())).collect()
}

/// Groups `flags` by stabilizer; every fiber must be `{F, tw F}`, or `{F}`
/// when `F` has no twin.
pub fn twin_fibers(flags: &[GeneralizedFlag], ambient: &Arc<Ambient>) -> Result<Outcome> {
    let form = ambient.form();
    let mut fibers: BTreeMap<Subspace, Vec<usize>> = BTreeMap::new();
    for (k, f) in flags.iter().enumerate() {
        fibers.entry(stabilizer(f, ambient, StabMode::Formula)?.space().clone()).or_default().push(k);
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for members in fibers.values() {
        *sizes.entry(members.len()).or_default() += 1;
        for &k in members {
            let f = &flags[k];
            let mut expected = vec![strip(f)];
            if let Some(t) = f.twin(form)? {
                expected.push(strip(&t));
            }
            expected.sort();
            let mut got: Vec<_> = members.iter().map(|&j| strip(&flags[j])).collect();
            got.sort();
            if got != expected {
                return Ok(Outcome::fail(
                    format!("fiber of size {} is not {{F, tw F}}", members.len()),
                    render_flag(f),
                ));
            }
        }
    }
    let hist: Vec<String> = sizes.iter().map(|(s, c)| format!("{c} of size {s}")).collect();
    Ok(Outcome::pass(format!("{} flags, fibers: {}", flags.len(), hist.join(", "))))
}

/// Distinct flags have distinct stabilizers.
pub fn injectivity(flags: &[GeneralizedFlag], ambient: &Arc<Ambient>) -> Result<Outcome> {
    let mut seen: BTreeMap<Subspace, usize> = BTreeMap::new();
    for (k, f) in flags.iter().enumerate() {
        let s = stabilizer(f, ambient, StabMode::Formula)?.space().clone();
        if let Some(&j) = seen.get(&s) {
            return Ok(Outcome::fail(
                "two flags share a stabilizer",
                format!("{} and {}", render_flag(&flags[j]), render_flag(f)),
            ));
        }
        seen.insert(s, k);
    }
    Ok(Outcome::pass(format!("{} flags, {} distinct stabilizers", flags.len(), seen.len())))
}

/// `b = t + n` with the canonical line system: the sum is the stabilizer,
/// `t ∩ n = 0`, `t` is spanned by semisimple and `n` by nilpotent elements.
pub fn figure1(flag: &GeneralizedFlag, ambient: &Arc<Ambient>) -> Result<Outcome> {
    let ls = canonical_line_system(flag, ambient)?;
    let t = toral_subalgebra(&ls, ambient)?;
    let n = nilpotent_subalgebra(flag, ambient)?;
    let b = stabilizer(flag, ambient, StabMode::Formula)?;
    let w = || render_flag(flag);
    if t.space().sum(n.space())? != *b.space() {
        return Ok(Outcome::fail("t + n differs from the stabilizer", w()));
    }
    if !t.space().intersect(n.space())?.is_zero() {
        return Ok(Outcome::fail("t ∩ n is nonzero", w()));
    }
    if t.dim() + n.dim() != b.dim() {
        return Ok(Outcome::fail("dimensions do not add up", w()));
    }
    if let Some(k) = t.basis_matrices().iter().position(|z| element_type(z) != ElementType::Semisimple) {
        return Ok(Outcome::fail(format!("toral basis element {k} is not semisimple"), w()));
    }
    if let Some(k) = n.basis_matrices().iter().position(|z| element_type(z) != ElementType::Nilpotent) {
        return Ok(Outcome::fail(format!("nilpotent basis element {k} is not nilpotent"), w()));
    }
    Ok(Outcome::pass(format!("dim b = {} = {} + {}", b.dim(), t.dim(), n.dim())))
}

/// The case table for `St_F · u`.
pub fn predicted_orbit(flag: &GeneralizedFlag, ambient: &Ambient, u: &Vector) -> Result<Subspace> {
    let p = ambient.form();
    let k = flag.locate_index(u)?;
    let FlagPair { pred, succ, .. } = &flag.pairs()[k];
    let pred_bar = p.closure(pred, Side::Left)?;
    if pred_bar == *succ {
        return Ok(pred.clone());
    }
    match ambient.kind() {
        AmbientKind::Sl if flag.report(p)?.good_pairs == [k] => Ok(pred.clone()),
        AmbientKind::So | AmbientKind::Sp if pred_bar != *pred => {
            Err(Error::precondition("pair is neither good nor dense"))
        }
        _ => Ok(succ.clone()),
    }
}

/// Orbits of the support's basis vectors and of the flag's line vectors
/// against the case table.
pub fn orbit_table(flag: &GeneralizedFlag, ambient: &Arc<Ambient>) -> Result<Outcome> {
    let b = stabilizer(flag, ambient, StabMode::Brute)?;
    let mut us: Vec<Vector> = flag.support().basis().to_vec();
    for p in flag.pairs() {
        us.extend(p.pred.complement_in(&p.succ)?);
    }
    for u in &us {
        let got = b.orbit(u)?;
        let want = predicted_orbit(flag, ambient, u)?;
        if got != want {
            return Ok(Outcome::fail(
                format!("orbit has dim {}, table predicts dim {}", got.dim(), want.dim()),
                format!("{} at u = {}", render_flag(flag), render_subspace(&Subspace::span(&[u.clone()], u.dim())?)),
            ));
        }
    }
    Ok(Outcome::pass(format!("{} vectors match the table", us.len())))
}

/// Completes a maximal isotropic flag `F_1 ⊂ ... ⊂ M` to the full flag
/// `... ⊂ M ⊆ M^⊥ ⊂ ... ⊂ F_1^⊥ ⊂ V`.
pub fn perp_completion(flag: &GeneralizedFlag, ambient: &Ambient) -> Result<GeneralizedFlag> {
    let p = ambient.form();
    let mut members: Vec<Subspace> = flag.successors().cloned().collect();
    for s in flag.members().iter().rev() {
        let q = p.perp(s, Side::Left)?;
        if members.last() != Some(&q) {
            members.push(q);
        }
    }
    GeneralizedFlag::from_members(ambient.n(), &members)
}

/// A full flag through `M` and its isotropic part have the same stabilizer.
pub fn iso_part_stabilizer(flag: &GeneralizedFlag, ambient: &Arc<Ambient>) -> Result<Outcome> {
    let full = perp_completion(flag, ambient)?;
    let iso = full.iso_part(ambient.form())?;
    if strip(&iso) != strip(flag) {
        return Ok(Outcome::fail("isotropic part of the completion is not the flag", render_flag(&full)));
    }
    let a = stabilizer(&full, ambient, StabMode::Brute)?;
    let b = stabilizer(&iso, ambient, StabMode::Formula)?;
    if a != b {
        return Ok(Outcome::fail(
            format!("full flag stabilizer dim {} vs isotropic part dim {}", a.dim(), b.dim()),
            render_flag(&full),
        ));
    }
    Ok(Outcome::pass(format!("{} members, common stabilizer dim {}", full.len(), a.dim())))
}

pub(crate) fn all_pass(outcomes: Vec<Outcome>, what: &str) -> Outcome {
    let total = outcomes.len();
    match outcomes.into_iter().find(|o| !o.passed) {
        Some(o) => o,
        None => Outcome::pass(format!("{total} {what} pass")),
    }
}

/// Whether `b` sits inside the algebra spanned by `a`.
pub(crate) fn inside(b: &LieSubalgebra, a: &Subspace) -> bool {
    b.space().is_subspace_of(a).unwrap_or(false)
}
