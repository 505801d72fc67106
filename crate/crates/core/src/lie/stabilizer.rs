use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ambient::{Ambient, AmbientKind};
use super::subalgebra::{combine, null_combinations, LieSubalgebra};
use super::tensor::{tensor_space, TensorKind};
use crate::error::{check_dim, Error, Result};
use crate::flagkit::GeneralizedFlag;
use crate::linalg::{Echelon, Subspace, Vector};
use crate::pairing::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabMode {
    Brute,
    Formula,
}

/// `{Z ∈ A : Z F ⊆ F for every member F}`.
fn brute(flag: &GeneralizedFlag, ambient: &Arc<Ambient>) -> LieSubalgebra {
    let n = ambient.n();
    let abasis = ambient.basis_matrices();
    let mut rows = Echelon::new(abasis.len());
    for s in flag.successors() {
        if s.is_full() {
            continue;
        }
        // a^T Z f = 0 for f in s and a in its annihilator.
        for a in s.annihilator().basis() {
            for f in s.basis() {
                let row: Vector = abasis
                    .iter()
                    .map(|z| {
                        let zf = z.apply(f);
                        a.dot(&zf)
                    })
                    .collect();
                if !row.is_zero() {
                    rows.insert(&row);
                }
            }
        }
    }
    let coeffs = null_combinations(rows.into_subspace().basis().to_vec(), abasis.len());
    LieSubalgebra::new_unchecked(ambient.clone(), combine(abasis, &coeffs, n))
}

fn formula_kind(flag: &GeneralizedFlag, ambient: &Ambient) -> Result<TensorKind> {
    check_dim(ambient.n(), flag.ambient_dim())?;
    let kind = ambient
        .tensor_kind()
        .ok_or_else(|| Error::input(format!("no stabilizer formula for {}", ambient.describe())))?;
    match ambient.kind() {
        AmbientKind::Gl | AmbientKind::Sl => {
            if !flag.support().is_full() {
                return Err(Error::precondition("formula mode in gl/sl needs a flag with support V"));
            }
        }
        _ => {
            for (k, p) in flag.pairs().iter().enumerate() {
                if !ambient.form().is_isotropic(&p.succ)? {
                    return Err(Error::precondition(format!("flag member {} is not isotropic", k + 1)));
                }
            }
        }
    }
    Ok(kind)
}

/// `Σ_α F″_α ⊗ right(α)` with the tensor type of the ambient, cut down to
/// the ambient for `sl`.
fn assemble(
    flag: &GeneralizedFlag,
    ambient: &Arc<Ambient>,
    right: impl Fn(&crate::flagkit::FlagPair) -> Result<Subspace>,
) -> Result<LieSubalgebra> {
    let kind = formula_kind(flag, ambient)?;
    let n = ambient.n();
    let form = ambient.form();
    let mut e = Echelon::new(n * n);
    for p in flag.pairs() {
        for v in tensor_space(kind, &p.succ, &right(p)?, form)?.basis() {
            e.insert(v);
        }
    }
    let mut space = e.into_subspace();
    if ambient.kind() == AmbientKind::Sl {
        space = space.intersect(ambient.space())?;
    }
    Ok(LieSubalgebra::new_unchecked(ambient.clone(), space))
}

pub fn stabilizer(flag: &GeneralizedFlag, ambient: &Arc<Ambient>, mode: StabMode) -> Result<LieSubalgebra> {
    check_dim(ambient.n(), flag.ambient_dim())?;
    match mode {
        StabMode::Brute => Ok(brute(flag, ambient)),
        StabMode::Formula => assemble(flag, ambient, |p| ambient.form().perp(&p.pred, Side::Left)),
    }
}

/// `Σ_α F″_α ⊗ (F″_α)^⊥` (or `∧`, `&`).
pub fn nilpotent_subalgebra(flag: &GeneralizedFlag, ambient: &Arc<Ambient>) -> Result<LieSubalgebra> {
    assemble(flag, ambient, |p| ambient.form().perp(&p.succ, Side::Left))
}
