use std::fs;

use flagstab::wire::{from_json, SubspaceJson};
use flagstab::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// Collects every argument and document the command sees, in order, so the
/// report can name exactly what it was computed from.
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn new(verb: &str) -> Self {
        let mut hasher = Sha256::new();
        field(&mut hasher, "verb", verb.as_bytes());
        Inputs { hasher }
    }

    pub fn arg(&mut self, name: &str, value: impl AsRef<str>) {
        field(&mut self.hasher, name, value.as_ref().as_bytes());
    }

    /// Inline JSON when the value starts with `{` or `[`, a file path
    /// otherwise. Only the document bytes enter the digest, so the same
    /// file under another name digests the same.
    pub fn document<T: DeserializeOwned>(&mut self, name: &str, value: &str) -> Result<T> {
        let text = if value.trim_start().starts_with(['{', '[']) {
            value.to_string()
        } else {
            fs::read_to_string(value).map_err(|e| Error::Input(format!("--{name}: cannot read {value}: {e}")))?
        };
        field(&mut self.hasher, name, text.as_bytes());
        from_json(&text, &format!("--{name}"))
    }

    pub fn digest(self) -> String {
        format!("sha256:{}", hex::encode(self.hasher.finalize()))
    }
}

fn field(h: &mut Sha256, name: &str, bytes: &[u8]) {
    h.update((name.len() as u64).to_le_bytes());
    h.update(name.as_bytes());
    h.update((bytes.len() as u64).to_le_bytes());
    h.update(bytes);
}

/// `{"ambient_dim", "vectors"}`: any generating set.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorsJson {
    pub ambient_dim: usize,
    pub vectors: Vec<Vec<flagstab::linalg::RationalStr>>,
}

/// `{"ambient_dim", "members"}`: a chain of subspaces, in any order.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainJson {
    pub ambient_dim: usize,
    pub members: Vec<SubspaceJson>,
}

/// `a..b`, inclusive.
pub fn parse_levels(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Input(format!("--levels: expected `a..b` with 1 <= a <= b, found `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}
