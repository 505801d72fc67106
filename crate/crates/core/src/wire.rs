//! JSON documents for subspaces, pairings, flags, matrices, ambients and
//! subalgebras. Every reader validates and reports the offending field.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagkit::{FlagPair, GeneralizedFlag};
use crate::lie::{Ambient, AmbientKind, LieSubalgebra};
use crate::linalg::{Matrix, RationalStr, Subspace, Vector};
use crate::pairing::{Pairing, PairingKind};

fn field_err(field: &str, e: Error) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("{field}: {m}")),
        Error::DimensionMismatch { expected, found } => {
            Error::Input(format!("{field}: dimension mismatch (expected {expected}, found {found})"))
        }
        other => other,
    }
}

fn row(v: &[crate::linalg::Rational]) -> Vec<RationalStr> {
    v.iter().map(RationalStr::from).collect()
}

fn vector(r: Vec<RationalStr>) -> Vector {
    r.into_iter().map(|x| x.0).collect()
}

pub type MatrixJson = Vec<Vec<RationalStr>>;

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows()).map(|i| row(m.row_slice(i))).collect()
}

pub fn matrix_from_json(m: MatrixJson, field: &str) -> Result<Matrix> {
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::input(format!("{field}: rows have different lengths")));
    }
    let rows: Vec<Vector> = m.into_iter().map(vector).collect();
    Matrix::from_rows(&rows, cols).map_err(|e| field_err(field, e))
}

fn square_from_json(m: MatrixJson, field: &str) -> Result<Matrix> {
    let m = matrix_from_json(m, field)?;
    if !m.is_square() {
        return Err(Error::input(format!("{field}: matrix is not square")));
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<RationalStr>>,
}

impl From<&Subspace> for SubspaceJson {
    fn from(s: &Subspace) -> Self {
        SubspaceJson {
            ambient_dim: s.ambient_dim(),
            basis: s.basis().iter().map(|v| row(v)).collect(),
        }
    }
}

impl SubspaceJson {
    pub fn load(self, field: &str) -> Result<Subspace> {
        let rows = self.basis.into_iter().map(vector).collect();
        Subspace::from_rref(self.ambient_dim, rows).map_err(|e| field_err(&format!("{field}.basis"), e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingJson {
    pub kind: PairingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<MatrixJson>,
}

impl From<&Pairing> for PairingJson {
    fn from(p: &Pairing) -> Self {
        match p.kind() {
            PairingKind::Explicit => PairingJson {
                kind: PairingKind::Explicit,
                dim: None,
                gram: Some(matrix_to_json(p.gram())),
            },
            k => PairingJson {
                kind: k,
                dim: Some(p.left_dim()),
                gram: None,
            },
        }
    }
}

impl PairingJson {
    pub fn load(self, field: &str) -> Result<Pairing> {
        match (self.kind, self.dim, self.gram) {
            (PairingKind::Explicit, None, Some(g)) => Ok(Pairing::explicit(matrix_from_json(g, &format!("{field}.gram"))?)),
            (PairingKind::Explicit, _, _) => Err(Error::input(format!("{field}: explicit pairings take exactly a gram"))),
            (k, Some(d), None) if d > 0 => Pairing::named(k, d).map_err(|e| field_err(&format!("{field}.dim"), e)),
            (k, _, _) => Err(Error::input(format!("{field}: {} takes exactly a positive dim", k.name()))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub pred: SubspaceJson,
    pub succ: SubspaceJson,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inf_marker: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagJson {
    pub ambient_dim: usize,
    pub pairs: Vec<PairJson>,
}

impl From<&GeneralizedFlag> for FlagJson {
    fn from(f: &GeneralizedFlag) -> Self {
        FlagJson {
            ambient_dim: f.ambient_dim(),
            pairs: f
                .pairs()
                .iter()
                .map(|p| PairJson {
                    pred: (&p.pred).into(),
                    succ: (&p.succ).into(),
                    inf_marker: p.inf_marker,
                })
                .collect(),
        }
    }
}

impl FlagJson {
    pub fn load(self, field: &str) -> Result<GeneralizedFlag> {
        let pairs = self
            .pairs
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                let f = format!("{field}.pairs[{k}]");
                let mut fp = FlagPair::new(p.pred.load(&format!("{f}.pred"))?, p.succ.load(&format!("{f}.succ"))?);
                fp.inf_marker = p.inf_marker;
                Ok(fp)
            })
            .collect::<Result<Vec<_>>>()?;
        GeneralizedFlag::new(self.ambient_dim, pairs).map_err(|e| field_err(field, e))
    }
}

/// `{"kind": "gl"|"sl", "n"}`, `{"kind": "so"|"sp", "n", "form"?}` (the
/// split form by default), a `window` of positions for an embedded gl/sl,
/// or `{"kind": "extension", "base", "extra"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientJson {
    pub kind: AmbientKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<PairingJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<AmbientJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra: Option<Vec<MatrixJson>>,
}

impl From<&Ambient> for AmbientJson {
    fn from(a: &Ambient) -> Self {
        let mut j = AmbientJson {
            kind: a.kind(),
            n: a.n(),
            form: None,
            window: None,
            base: None,
            extra: None,
        };
        match a.kind() {
            AmbientKind::So | AmbientKind::Sp => j.form = Some(a.form().into()),
            AmbientKind::Extension => {
                j.base = a.base().map(|b| Box::new(AmbientJson::from(&**b)));
                j.extra = Some(a.extra().iter().map(matrix_to_json).collect());
            }
            AmbientKind::Gl | AmbientKind::Sl => j.window = a.window().map(<[usize]>::to_vec),
        }
        j
    }
}

impl AmbientJson {
    pub fn load(self, field: &str) -> Result<Ambient> {
        let unexpected = |name: &str| Error::input(format!("{field}.{name}: not allowed for {}", self.kind));
        match self.kind {
            AmbientKind::Gl | AmbientKind::Sl => {
                if self.form.is_some() {
                    return Err(unexpected("form"));
                }
                if self.base.is_some() || self.extra.is_some() {
                    return Err(unexpected("base"));
                }
                let inner = |k: usize| if self.kind == AmbientKind::Gl { Ambient::gl(k) } else { Ambient::sl(k) };
                match &self.window {
                    None => Ok(inner(self.n)),
                    Some(w) => Ambient::embedded(&inner(w.len()), self.n, w)
                        .map_err(|e| field_err(&format!("{field}.window"), e)),
                }
            }
            AmbientKind::So | AmbientKind::Sp => {
                if self.window.is_some() || self.base.is_some() || self.extra.is_some() {
                    return Err(unexpected("window"));
                }
                let form = match self.form {
                    Some(f) => f.load(&format!("{field}.form"))?,
                    None if self.kind == AmbientKind::So => Pairing::split_symmetric(self.n),
                    None => Pairing::split_symplectic(self.n).map_err(|e| field_err(&format!("{field}.n"), e))?,
                };
                if form.left_dim() != self.n || form.right_dim() != self.n {
                    return Err(Error::input(format!("{field}.form: dimension differs from n = {}", self.n)));
                }
                Ambient::with_form(self.kind, form).map_err(|e| field_err(&format!("{field}.form"), e))
            }
            AmbientKind::Extension => {
                let base = self.base.ok_or_else(|| Error::input(format!("{field}.base: missing")))?;
                let base = Arc::new(base.load(&format!("{field}.base"))?);
                if base.n() != self.n {
                    return Err(Error::input(format!("{field}.base: size differs from n = {}", self.n)));
                }
                let extra = self
                    .extra
                    .unwrap_or_default()
                    .into_iter()
                    .enumerate()
                    .map(|(k, m)| square_from_json(m, &format!("{field}.extra[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Ambient::extend(&base, extra).map_err(|e| field_err(&format!("{field}.extra"), e))
            }
        }
    }
}

/// A subalgebra as its canonical (RREF) basis, reshaped into matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubalgebraJson {
    pub ambient: AmbientJson,
    pub dim: usize,
    pub basis: Vec<MatrixJson>,
}

impl From<&LieSubalgebra> for SubalgebraJson {
    fn from(b: &LieSubalgebra) -> Self {
        SubalgebraJson {
            ambient: (&**b.ambient()).into(),
            dim: b.dim(),
            basis: b.basis_matrices().iter().map(matrix_to_json).collect(),
        }
    }
}

impl SubalgebraJson {
    pub fn load(self, field: &str) -> Result<LieSubalgebra> {
        let ambient = Arc::new(self.ambient.load(&format!("{field}.ambient"))?);
        let n = ambient.n();
        if self.dim != self.basis.len() {
            return Err(Error::input(format!("{field}.dim: basis has {} elements", self.basis.len())));
        }
        let rows = self
            .basis
            .into_iter()
            .enumerate()
            .map(|(k, m)| {
                let f = format!("{field}.basis[{k}]");
                let m = square_from_json(m, &f)?;
                if m.rows() != n {
                    return Err(Error::input(format!("{f}: not {n}x{n}")));
                }
                Ok(m.flatten())
            })
            .collect::<Result<Vec<_>>>()?;
        let space = Subspace::from_rref(n * n, rows).map_err(|e| field_err(&format!("{field}.basis"), e))?;
        LieSubalgebra::new(ambient, space).map_err(|e| field_err(field, e))
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("wire types always serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(s: &str, what: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::input(format!("{what}: {e}")))
}
