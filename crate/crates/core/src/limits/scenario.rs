//! Built-in direct-limit scenarios and their registered checks.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::checks::{
    all_pass, borel_check, figure1, injectivity, inside, iso_part_stabilizer, orbit_table, render_flag,
    render_subspace, twin_fibers, Outcome,
};
use super::descriptor::{closure_certified, Descriptor, PairingDescriptor, SeqSubspace, StableSubspace};
use super::flag::{fl_stable, truncate_chain, ChainBlock, MemberFamily, Moving};
use super::index::{Direction, IndexDomain, IndexSet};
use super::template::{Cmp, Family, FamilyTerm, IndexExpr, Symbol};
use crate::error::{Error, Result};
use crate::flagkit::{coordinate_flags, fl_from_chain, signed_coordinate_flags, GeneralizedFlag};
use crate::lie::{normalizer, stabilizer, Ambient, AmbientKind, StabMode};
use crate::linalg::{bracket, Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    StabilizerIsBorel,
    NormalizerForcesAZero,
    TwinFiber,
    Injectivity,
    Figure1Decomposition,
    OrbitTable,
    IsoPartStabilizer,
    ClosureIsFull,
    FlCommutes,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::StabilizerIsBorel,
        Check::NormalizerForcesAZero,
        Check::TwinFiber,
        Check::Injectivity,
        Check::Figure1Decomposition,
        Check::OrbitTable,
        Check::IsoPartStabilizer,
        Check::ClosureIsFull,
        Check::FlCommutes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::StabilizerIsBorel => "stabilizer-is-borel",
            Check::NormalizerForcesAZero => "normalizer-forces-a-zero",
            Check::TwinFiber => "twin-fiber",
            Check::Injectivity => "injectivity",
            Check::Figure1Decomposition => "figure1-decomposition",
            Check::OrbitTable => "orbit-table",
            Check::IsoPartStabilizer => "iso-part-stabilizer",
            Check::ClosureIsFull => "closure-is-full",
            Check::FlCommutes => "fl-commutes",
        }
    }

    pub fn parse(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::input(format!("unregistered check '{s}'")))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family of finite-level problems indexed by `n`.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    pub domain: IndexDomain,
    pub pairing: PairingDescriptor,
    pub kind: AmbientKind,
    /// A chain whose `fl` gives the flag at each level; without one, every
    /// coordinate flag of the level is used.
    pub chain: Option<Vec<ChainBlock>>,
    /// An operator family adjoined to the ambient (`a · X`).
    pub operator: Option<Family>,
    pub subspace: Option<SeqSubspace>,
    pub checks: Vec<Check>,
    pub default_levels: (usize, usize),
}

pub const BUILTIN_NAMES: [&str; 8] = [
    "paper_example_1",
    "paper_example_2",
    "dense_hyperplane",
    "fl_chain_equal",
    "fl_chain_gap",
    "sl_coordinate",
    "so_coordinate",
    "sp_coordinate",
];

fn negatives() -> StableSubspace {
    StableSubspace::indexed(IndexSet::ray(IndexDomain::Signed, Direction::Down, -1).expect("valid ray"))
}

/// `F_i = span{e_j : j <= i}` for `i < 0`, then `negatives + span{e_1..e_i}`.
fn example_chain() -> Vec<ChainBlock> {
    use Direction::*;
    let low = MemberFamily::new(StableSubspace::zero(IndexDomain::Signed), Moving::Tail { start: -1, dir: Down });
    let high = MemberFamily::new(negatives(), Moving::Grow { anchor: 1, dir: Up });
    vec![ChainBlock::Family(low.expect("valid family")), ChainBlock::Family(high.expect("valid family"))]
}

/// `span{e_{-1}, ..., e_{-i}}` below `W_j`, where `W_j` runs down to
/// `negatives` (or to `negatives + e_1` when `gap`).
fn paired_chain(gap: bool) -> Vec<ChainBlock> {
    use Direction::*;
    let d = IndexDomain::Signed;
    let v = MemberFamily::new(StableSubspace::zero(d), Moving::Grow { anchor: -1, dir: Down });
    let (fixed, start) = if gap {
        let e1 = IndexSet::singleton(d, 1).expect("valid index");
        (negatives().with_indices(&e1).expect("same domain"), 2)
    } else {
        (negatives(), 1)
    };
    let w = MemberFamily::new(fixed, Moving::Tail { start, dir: Up });
    vec![ChainBlock::Family(v.expect("valid family")), ChainBlock::Family(w.expect("valid family"))]
}

fn term(coeff: i64, symbol: Symbol, negated: bool, tensor: Option<Vec<FamilyTerm>>) -> FamilyTerm {
    FamilyTerm {
        coeff: crate::linalg::q(coeff),
        symbol,
        index: IndexExpr::Var { negated, offset: 0 },
        tensor,
    }
}

/// `x(i) ⊗ (x*(i) + x*(-i)) for i >= 1`.
fn example_operator() -> Family {
    let inner = vec![term(1, Symbol::XStar, false, None), term(1, Symbol::XStar, true, None)];
    Family {
        var: "i".into(),
        cmp: Cmp::Ge,
        bound: 1,
        terms: vec![term(1, Symbol::X, false, Some(inner))],
    }
}

/// `e(k) - e(k+1) for k >= 1`.
fn dense_hyperplane() -> SeqSubspace {
    let t = |c, offset| FamilyTerm {
        coeff: crate::linalg::q(c),
        symbol: Symbol::E,
        index: IndexExpr::Var { negated: false, offset },
        tensor: None,
    };
    let f = Family {
        var: "k".into(),
        cmp: Cmp::Ge,
        bound: 1,
        terms: vec![t(1, 0), t(-1, 1)],
    };
    SeqSubspace::new(IndexDomain::Positive, vec![], vec![f]).expect("vector family")
}

pub fn builtin(name: &str) -> Result<Scenario> {
    use Check::*;
    let base = |name, summary, domain, pairing, kind, checks: Vec<Check>, levels| Scenario {
        name,
        summary,
        domain,
        pairing,
        kind,
        chain: None,
        operator: None,
        subspace: None,
        checks,
        default_levels: levels,
    };
    let s = match name {
        "paper_example_1" => Scenario {
            chain: Some(example_chain()),
            ..base(
                "paper_example_1",
                "sl over the signed basis; flag fl of the chain F_i = <e_j : j <= i> (i < 0), <e_j : j < 0 or 1 <= j <= i> (i > 0)",
                IndexDomain::Signed,
                PairingDescriptor::StandardDual,
                AmbientKind::Sl,
                vec![StabilizerIsBorel, Figure1Decomposition, OrbitTable, FlCommutes],
                (2, 5),
            )
        },
        "paper_example_2" => Scenario {
            chain: Some(example_chain()),
            operator: Some(example_operator()),
            ..base(
                "paper_example_2",
                "the chain of paper_example_1 with the operator X = sum over i >= 1 of x(i) ⊗ (x*(i) + x*(-i)) adjoined",
                IndexDomain::Signed,
                PairingDescriptor::StandardDual,
                AmbientKind::Sl,
                vec![StabilizerIsBorel, NormalizerForcesAZero, FlCommutes],
                (2, 4),
            )
        },
        "dense_hyperplane" => Scenario {
            subspace: Some(dense_hyperplane()),
            ..base(
                "dense_hyperplane",
                "span{e(k) - e(k+1) : k >= 1} under the standard dual pairing",
                IndexDomain::Positive,
                PairingDescriptor::StandardDual,
                AmbientKind::Gl,
                vec![ClosureIsFull],
                (3, 8),
            )
        },
        "fl_chain_equal" | "fl_chain_gap" => {
            let gap = name == "fl_chain_gap";
            Scenario {
                chain: Some(paired_chain(gap)),
                ..base(
                    if gap { "fl_chain_gap" } else { "fl_chain_equal" },
                    if gap {
                        "growing <e_-1..e_-i> below tails <negatives, e_1, e_j : j >= i>: limits differ by e_1"
                    } else {
                        "growing <e_-1..e_-i> below tails <negatives, e_j : j >= i>: both limits are the negatives"
                    },
                    IndexDomain::Signed,
                    PairingDescriptor::StandardDual,
                    AmbientKind::Gl,
                    vec![FlCommutes],
                    (3, 6),
                )
            }
        }
        "sl_coordinate" => base(
            "sl_coordinate",
            "all coordinate maximal flags in sl(n)",
            IndexDomain::Positive,
            PairingDescriptor::StandardDual,
            AmbientKind::Sl,
            vec![StabilizerIsBorel, Injectivity, Figure1Decomposition, OrbitTable],
            (1, 4),
        ),
        "so_coordinate" => base(
            "so_coordinate",
            "all coordinate maximal isotropic flags in so(2n)",
            IndexDomain::Signed,
            PairingDescriptor::SplitSymmetric,
            AmbientKind::So,
            vec![StabilizerIsBorel, TwinFiber, Figure1Decomposition, OrbitTable, IsoPartStabilizer],
            (2, 3),
        ),
        "sp_coordinate" => base(
            "sp_coordinate",
            "all coordinate maximal isotropic flags in sp(2n)",
            IndexDomain::Signed,
            PairingDescriptor::SplitSymplectic,
            AmbientKind::Sp,
            vec![StabilizerIsBorel, Injectivity, Figure1Decomposition, OrbitTable, IsoPartStabilizer],
            (1, 3),
        ),
        _ => {
            return Err(Error::input(format!(
                "unknown scenario '{name}' (known: {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    Ok(s)
}

impl Scenario {
    pub fn ambient(&self, n: usize) -> Result<Arc<Ambient>> {
        let d = self.domain.level_dim(n);
        let a = match self.kind {
            AmbientKind::Gl => Ambient::gl(d),
            AmbientKind::Sl => Ambient::sl(d),
            k => Ambient::with_form(k, self.pairing.at_level(self.domain, n)?)?,
        };
        Ok(Arc::new(a))
    }

    /// The level-`n` flag of the chain, when there is one.
    pub fn flag(&self, n: usize) -> Result<Option<GeneralizedFlag>> {
        match &self.chain {
            Some(c) => Ok(Some(fl_stable(c, self.domain)?.truncate(n)?)),
            None => Ok(None),
        }
    }

    pub fn flags(&self, n: usize) -> Result<Vec<GeneralizedFlag>> {
        if let Some(f) = self.flag(n)? {
            return Ok(vec![f]);
        }
        let d = self.domain.level_dim(n);
        Ok(match self.domain {
            IndexDomain::Positive => coordinate_flags(d),
            IndexDomain::Signed => signed_coordinate_flags(d),
        })
    }

    pub fn describe(&self) -> Vec<String> {
        let mut out = vec![
            format!("domain: {}", self.domain.name()),
            format!("pairing: {}", self.pairing.name()),
            format!("algebra: {}", self.kind.name()),
        ];
        if let Some(c) = &self.chain {
            if let Ok(d) = fl_stable(c, self.domain) {
                out.extend(d.describe().into_iter().map(|l| format!("flag: {l}")));
            }
        }
        if let Some(f) = &self.operator {
            out.push(format!("operator: {f}"));
        }
        if let Some(s) = &self.subspace {
            out.push(format!("subspace: {}", s.describe()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelOutcome {
    pub level: usize,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub check: Check,
    pub levels: Vec<LevelOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.passed)
    }
}

/// Runs one registered check at one level.
pub fn verify_level(s: &Scenario, check: Check, n: usize) -> Result<LevelOutcome> {
    if !s.checks.contains(&check) {
        return Err(Error::input(format!("check '{check}' is not registered for scenario '{}'", s.name)));
    }
    if n == 0 {
        return Err(Error::input("levels start at 1"));
    }
    let o = run(s, check, n)?;
    Ok(LevelOutcome {
        level: n,
        passed: o.passed,
        detail: o.detail,
        witness: o.witness,
    })
}

pub fn verify_levels(s: &Scenario, check: Check, levels: impl IntoIterator<Item = usize>) -> Result<VerifyReport> {
    let levels = levels.into_iter().map(|n| verify_level(s, check, n)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        scenario: s.name.to_string(),
        check,
        levels,
    })
}

fn run(s: &Scenario, check: Check, n: usize) -> Result<Outcome> {
    let per_flag = |f: fn(&GeneralizedFlag, &Arc<Ambient>) -> Result<Outcome>, what: &str| -> Result<Outcome> {
        let a = s.ambient(n)?;
        let outs = s.flags(n)?.iter().map(|fl| f(fl, &a)).collect::<Result<Vec<_>>>()?;
        Ok(all_pass(outs, what))
    };
    match check {
        Check::StabilizerIsBorel => per_flag(borel_check, "stabilizers"),
        Check::Figure1Decomposition => per_flag(figure1, "decompositions"),
        Check::OrbitTable => per_flag(orbit_table, "orbit tables"),
        Check::IsoPartStabilizer => per_flag(iso_part_stabilizer, "completions"),
        Check::TwinFiber => twin_fibers(&s.flags(n)?, &s.ambient(n)?),
        Check::Injectivity => injectivity(&s.flags(n)?, &s.ambient(n)?),
        Check::NormalizerForcesAZero => normalizer_forces_a_zero(s, n),
        Check::ClosureIsFull => closure_is_full(s, n),
        Check::FlCommutes => fl_commutes(s, n),
    }
}

fn closure_is_full(s: &Scenario, n: usize) -> Result<Outcome> {
    let sub = s.subspace.as_ref().ok_or_else(|| Error::input("scenario has no subspace"))?;
    let t = sub.truncate(n)?;
    let (c, cert) = closure_certified(sub, s.pairing, n, 1)?;
    let detail = format!(
        "truncation dim {} of {}, closure dim {} (lookahead {}, stable: {})",
        t.dim(),
        c.ambient_dim(),
        c.dim(),
        cert.lookahead,
        cert.stable
    );
    if c.is_full() && cert.stable {
        Ok(Outcome::pass(detail))
    } else {
        Ok(Outcome::fail(detail, render_subspace(&c)))
    }
}

fn fl_commutes(s: &Scenario, n: usize) -> Result<Outcome> {
    let chain = s.chain.as_ref().ok_or_else(|| Error::input("scenario has no chain"))?;
    let stable = fl_stable(chain, s.domain)?.truncate(n)?;
    let direct = fl_from_chain(&truncate_chain(chain, s.domain, n)?, &Subspace::full(s.domain.level_dim(n)))?;
    let strip = |f: &GeneralizedFlag| f.pairs().iter().map(|p| (p.pred.clone(), p.succ.clone())).collect::<Vec<_>>();
    if strip(&stable) == strip(&direct) {
        Ok(Outcome::pass(format!("{} pairs agree", stable.len())))
    } else {
        Ok(Outcome::fail(
            "truncating fl of the chain differs from fl of the truncated chain",
            format!("{} vs {}", render_flag(&stable), render_flag(&direct)),
        ))
    }
}

/// Embeds an `n x n` matrix space at `positions` of `Q^big`.
fn embed_matrices(s: &Subspace, n: usize, big: usize, positions: &[usize]) -> Subspace {
    let flat: Vec<usize> = (0..n * n).map(|k| positions[k / n] * big + positions[k % n]).collect();
    s.embed(big * big, &flat)
}

/// Finite model at level `n`, viewed inside level `N = n + 2`: the ambient
/// is the level-`n` window of sl plus the level-`N` partial sum `X`. Its
/// normalizer of the level-`N` stabilizer `b_N` must be the level-`n`
/// stabilizer, so `X` never appears. The witness is `Z = E(n+1,n+1) -
/// E(n+2,n+2) ∈ b_N`: it commutes with the window while `[X, Z]` leaves
/// `b_N`.
fn normalizer_forces_a_zero(s: &Scenario, n: usize) -> Result<Outcome> {
    let op = s.operator.as_ref().ok_or_else(|| Error::input("scenario has no operator"))?;
    let d = s.domain;
    let big = n + 2;
    let bd = d.level_dim(big);
    let positions: Vec<usize> = d.indices(n).iter().map(|&i| d.position(big, i).expect("inner index")).collect();
    let window = Arc::new(Ambient::embedded(&*s.ambient(n)?, bd, &positions)?);
    let x = op.matrix_sum(d, big)?;
    let w = Arc::new(Ambient::extend(&window, vec![x.clone()])?);

    let flag_big = s.flag(big)?.ok_or_else(|| Error::input("scenario has no chain"))?;
    let b_big = stabilizer(&flag_big, &s.ambient(big)?, StabMode::Formula)?;
    let flag_n = s.flag(n)?.expect("chain present");
    let b_n = stabilizer(&flag_n, &s.ambient(n)?, StabMode::Formula)?;

    let pos = |i: i64| d.position(big, i).expect("level index");
    let unit = |i: i64, j: i64| Matrix::unit(bd, pos(i), pos(j));
    let m = n as i64;
    let z = unit(m + 1, m + 1).sub(&unit(m + 2, m + 2));
    let xz = bracket(&x, &z);
    let expected = unit(m + 2, -m - 2).sub(&unit(m + 1, -m - 1));
    if xz != expected {
        return Ok(Outcome::fail("[X, Z] is not -E(n+1,-n-1) + E(n+2,-n-2)", format!("{xz:?}")));
    }
    if !b_big.contains(&z) || b_big.contains(&xz) {
        return Ok(Outcome::fail("Z must lie in b_N and [X, Z] outside it", format!("level {big}")));
    }
    if let Some(k) = window.basis_matrices().iter().position(|y| !bracket(y, &z).is_zero()) {
        return Ok(Outcome::fail(format!("window basis element {k} does not commute with Z"), format!("level {big}")));
    }
    let nb = normalizer(&b_big, &w)?;
    let want = embed_matrices(b_n.space(), d.level_dim(n), bd, &positions);
    if !inside(&nb, window.space()) {
        return Ok(Outcome::fail("the normalizer has a nonzero X coefficient", format!("dim {}", nb.dim())));
    }
    if *nb.space() != want {
        return Ok(Outcome::fail(
            format!("normalizer dim {} differs from the level-{n} stabilizer dim {}", nb.dim(), want.dim()),
            format!("level {big}"),
        ));
    }
    Ok(Outcome::pass(format!(
        "normalizer in window + <X> (dim {}) is the level-{n} stabilizer (dim {}); [X, Z] = E({},{}) - E({},{}) leaves b_{big}",
        w.dim(),
        nb.dim(),
        m + 2,
        -m - 2,
        m + 1,
        -m - 1
    )))
}
