use std::sync::Arc;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use flagstab::flagkit::{fl_from_chain, Chain, GeneralizedFlag};
use flagstab::lie::{
    borel_dimension, canonical_line_system, element_type, flag_of_borel, is_maximal_solvable, nilpotent_subalgebra,
    solvable_extension, stabilizer, toral_subalgebra, Ambient, ElementType, LieSubalgebra, StabMode,
};
use flagstab::limits::checks::{render_flag, render_subspace};
use flagstab::limits::{
    builtin, closure_certified, perp_certified, verify_level, Certificate, Check, Descriptor, IndexDomain,
    IndexSet, PairingDescriptor, SeqSubspace, StableSubspace,
};
use flagstab::linalg::{Matrix, RationalStr, Subspace, Vector};
use flagstab::pairing::{Pairing, Side};
use flagstab::wire::{matrix_to_json, AmbientJson, FlagJson, PairingJson, SubalgebraJson, SubspaceJson};
use flagstab::{Error, Result};

use crate::dsl;
use crate::input::{parse_levels, ChainJson, Inputs, VectorsJson};
use crate::report::Builder;

// ---- argument records ----

#[derive(Args, Debug)]
pub struct SpanArgs {
    /// `{"ambient_dim": n, "vectors": [[...], ...]}`
    #[arg(long)]
    pub input: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Args, Debug)]
pub struct PerpArgs {
    /// Pairing document, or an ambient document whose form is used.
    #[arg(long)]
    pub form: String,
    #[arg(long)]
    pub subspace: String,
    /// Which argument of the pairing the subspace occupies.
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
}

#[derive(Args, Debug)]
pub struct FlagArgs {
    #[arg(long, required_unless_present = "chain", conflicts_with = "chain")]
    pub flag: Option<String>,
    /// `{"ambient_dim": n, "members": [subspace, ...]}`; reports fl(C).
    #[arg(long)]
    pub chain: Option<String>,
    /// Pairing for closedness and isotropy (default: standard dual).
    #[arg(long)]
    pub form: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Brute,
    Formula,
    Both,
}

#[derive(Args, Debug)]
pub struct StabArgs {
    #[arg(long)]
    pub flag: String,
    #[arg(long)]
    pub ambient: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
}

#[derive(Args, Debug)]
pub struct BorelArgs {
    #[arg(long, requires = "ambient", required_unless_present = "subalgebra", conflicts_with = "subalgebra")]
    pub flag: Option<String>,
    #[arg(long)]
    pub ambient: Option<String>,
    /// A subalgebra document; reports the flag it stabilizes.
    #[arg(long)]
    pub subalgebra: Option<String>,
}

#[derive(Args, Debug)]
pub struct ToralArgs {
    #[arg(long)]
    pub flag: String,
    #[arg(long)]
    pub ambient: String,
}

#[derive(Args, Debug)]
pub struct TwinArgs {
    #[arg(long)]
    pub flag: String,
    /// Pairing document, or an ambient document whose form is used.
    #[arg(long)]
    pub form: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DomainArg {
    Positive,
    Signed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PairingArg {
    #[value(name = "standard_dual")]
    StandardDual,
    #[value(name = "split_symmetric")]
    SplitSymmetric,
    #[value(name = "split_symplectic")]
    SplitSymplectic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    /// The closure is the whole level.
    Full,
    /// The truncation equals its closure.
    Closed,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    #[arg(long, value_enum)]
    pub pairing: PairingArg,
    /// Inclusive level range `a..b`.
    #[arg(long)]
    pub levels: String,
    /// A template family, e.g. `e(k) - e(k+1) for k >= 1`. Repeatable.
    #[arg(long = "family")]
    pub families: Vec<String>,
    /// An explicit vector, e.g. `e(1) - 3 e(2)`. Repeatable.
    #[arg(long = "vector")]
    pub vectors: Vec<String>,
    /// Index set whose basis vectors are added, e.g. `{-inf..-1} | {1}`.
    #[arg(long)]
    pub indices: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub lookahead: usize,
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    /// A builtin scenario name.
    pub name: String,
    /// Inclusive level range `a..b` (default: the scenario's own).
    #[arg(long)]
    pub levels: Option<String>,
    /// A registered check to run. Repeatable; all registered checks by default.
    #[arg(long = "check")]
    pub checks: Vec<String>,
}

// ---- loading and emitting ----

fn load_flag(inp: &mut Inputs, value: &str) -> Result<GeneralizedFlag> {
    inp.document::<FlagJson>("flag", value)?.load("--flag")
}

fn load_ambient(inp: &mut Inputs, value: &str) -> Result<Arc<Ambient>> {
    Ok(Arc::new(inp.document::<AmbientJson>("ambient", value)?.load("--ambient")?))
}

/// A pairing document, or an ambient document standing for its form.
fn load_form(inp: &mut Inputs, value: &str) -> Result<Pairing> {
    let v: Value = inp.document("form", value)?;
    let kind = v.get("kind").and_then(Value::as_str).unwrap_or_default();
    if ["gl", "sl", "so", "sp", "extension"].contains(&kind) {
        let a: AmbientJson = serde_json::from_value(v).map_err(|e| Error::Input(format!("--form: {e}")))?;
        Ok(a.load("--form")?.form().clone())
    } else {
        let p: PairingJson = serde_json::from_value(v).map_err(|e| Error::Input(format!("--form: {e}")))?;
        p.load("--form")
    }
}

fn matching(flag: &GeneralizedFlag, a: &Ambient) -> Result<()> {
    if flag.ambient_dim() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: flag.ambient_dim() });
    }
    Ok(())
}

fn reload_failed(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Invariant(format!("emitted {what} does not reload to itself: {e}"))
}

// Every document we emit is read back and compared before it is written.

fn subspace_doc(s: &Subspace) -> Result<SubspaceJson> {
    let j = SubspaceJson::from(s);
    match j.clone().load("result") {
        Ok(back) if back == *s => Ok(j),
        Ok(_) => Err(reload_failed("subspace", "values differ")),
        Err(e) => Err(reload_failed("subspace", e)),
    }
}

fn flag_doc(f: &GeneralizedFlag) -> Result<FlagJson> {
    let j = FlagJson::from(f);
    match j.clone().load("result") {
        Ok(back) if back == *f => Ok(j),
        Ok(_) => Err(reload_failed("flag", "values differ")),
        Err(e) => Err(reload_failed("flag", e)),
    }
}

fn subalgebra_doc(b: &LieSubalgebra) -> Result<SubalgebraJson> {
    let j = SubalgebraJson::from(b);
    match j.clone().load("result") {
        Ok(back) if back.space() == b.space() => Ok(j),
        Ok(_) => Err(reload_failed("subalgebra", "values differ")),
        Err(e) => Err(reload_failed("subalgebra", e)),
    }
}

fn vector_doc(v: &Vector) -> Vec<RationalStr> {
    v.coords().iter().map(RationalStr::from).collect()
}

fn matrix_text(m: &Matrix) -> String {
    serde_json::to_string(&matrix_to_json(m)).expect("matrices serialize")
}

/// A basis element of `x` outside `y`.
fn outside(x: &LieSubalgebra, y: &LieSubalgebra) -> Option<String> {
    x.basis_matrices().iter().find(|m| !y.contains(m)).map(matrix_text)
}

fn ambient_conventions(b: &mut Builder, a: &Ambient) {
    b.convention(format!("algebra: {}", a.describe()));
    b.convention("matrices act on column vectors; x ⊗ y acts by u -> <u, y> x");
    b.convention(a.form().convention());
}

// ---- verbs ----

pub fn span(args: &SpanArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    let doc: VectorsJson = inp.document("input", &args.input)?;
    let n = doc.ambient_dim;
    let vs = doc
        .vectors
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            if r.len() != n {
                return Err(Error::Input(format!("--input.vectors[{k}]: {} entries, ambient_dim is {n}", r.len())));
            }
            Ok(r.into_iter().map(|x| x.0).collect::<Vector>())
        })
        .collect::<Result<Vec<_>>>()?;
    let s = Subspace::span(&vs, n)?;
    b.result("dim", s.dim());
    b.result("subspace", subspace_doc(&s)?);
    Ok(())
}

fn side_of(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

pub fn perp(args: &PerpArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    inp.arg("side", format!("{:?}", args.side));
    let p = load_form(inp, &args.form)?;
    let s = inp.document::<SubspaceJson>("subspace", &args.subspace)?.load("--subspace")?;
    b.convention(p.convention());
    let r = p.perp(&s, side_of(args.side))?;
    b.result("dim", r.dim());
    b.result("perp", subspace_doc(&r)?);
    Ok(())
}

pub fn closure(args: &PerpArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    inp.arg("side", format!("{:?}", args.side));
    let p = load_form(inp, &args.form)?;
    let s = inp.document::<SubspaceJson>("subspace", &args.subspace)?.load("--subspace")?;
    b.convention(p.convention());
    let c = p.closure(&s, side_of(args.side))?;
    b.result("closed", c == s);
    b.result("dim", c.dim());
    b.result("closure", subspace_doc(&c)?);
    if p.is_form() {
        let r = p.classify(&s)?;
        b.result(
            "classification",
            json!({
                "is_closed": r.is_closed,
                "is_isotropic": r.is_isotropic,
                "is_coisotropic": r.is_coisotropic,
                "is_maximal_isotropic": r.is_maximal_isotropic,
            }),
        );
    }
    Ok(())
}

pub fn flag(args: &FlagArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    let f = match (&args.flag, &args.chain) {
        (Some(v), _) => load_flag(inp, v)?,
        (None, Some(c)) => {
            let doc: ChainJson = inp.document("chain", c)?;
            let members = doc
                .members
                .into_iter()
                .enumerate()
                .map(|(k, m)| m.load(&format!("--chain.members[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let chain = Chain::new(doc.ambient_dim, members)?;
            let f = fl_from_chain(&chain, &Subspace::full(doc.ambient_dim))?;
            b.result("fl", flag_doc(&f)?);
            f
        }
        (None, None) => return Err(Error::Input("give --flag or --chain".into())),
    };
    let given = args.form.as_deref().map(|v| load_form(inp, v)).transpose()?;
    let p = given.clone().unwrap_or_else(|| Pairing::standard_dual(f.ambient_dim()));
    b.convention(p.convention());
    let r = f.report(&p)?;
    b.result(
        "report",
        json!({
            "pairs": f.len(),
            "is_maximal": r.is_maximal,
            "is_closed": r.is_closed,
            "is_bivalent": r.is_bivalent,
            "good_pairs": r.good_pairs,
        }),
    );
    b.result("flag_text", render_flag(&f));
    if let Some(p) = given.filter(Pairing::is_form) {
        let iso = f.iso_part(&p)?;
        b.result("iso_part", flag_doc(&iso)?);
        b.result("is_maximal_closed_isotropic", f.is_maximal_closed_isotropic(&p)?);
    }
    Ok(())
}

pub fn stab(args: &StabArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    inp.arg("mode", format!("{:?}", args.mode));
    let f = load_flag(inp, &args.flag)?;
    let a = load_ambient(inp, &args.ambient)?;
    matching(&f, &a)?;
    ambient_conventions(b, &a);
    match args.mode {
        ModeArg::Brute | ModeArg::Formula => {
            let m = if args.mode == ModeArg::Brute { StabMode::Brute } else { StabMode::Formula };
            let s = stabilizer(&f, &a, m)?;
            b.result("dim", s.dim());
            b.result("stabilizer", subalgebra_doc(&s)?);
        }
        ModeArg::Both => {
            let (x, y) = rayon::join(|| stabilizer(&f, &a, StabMode::Brute), || stabilizer(&f, &a, StabMode::Formula));
            let (x, y) = (x?, y?);
            let witness = outside(&x, &y)
                .map(|m| format!("in the brute-force stabilizer only: {m}"))
                .or_else(|| outside(&y, &x).map(|m| format!("in the formula only: {m}")));
            b.check(
                "brute = formula",
                witness.is_none(),
                format!("dim {} (brute) vs {} (formula)", x.dim(), y.dim()),
                witness,
            );
            b.result("equal", x.space() == y.space());
            b.result("brute", subalgebra_doc(&x)?);
            b.result("formula", subalgebra_doc(&y)?);
        }
    }
    Ok(())
}

fn solvability_checks(b: &mut Builder, s: &LieSubalgebra) -> Result<()> {
    let solvable = s.is_solvable();
    let series = s.derived_series();
    let lengths: Vec<String> = series.iter().map(|d| d.dim().to_string()).collect();
    let witness = match series.last() {
        Some(last) if !solvable => last
            .basis_matrices()
            .first()
            .map(|m| format!("the derived series stops at dimension {}, containing {}", last.dim(), matrix_text(m))),
        _ => None,
    };
    b.check("solvable", solvable, format!("derived series dimensions {}", lengths.join(" > ")), witness);
    if solvable {
        let maximal = is_maximal_solvable(s)?;
        let witness = if maximal {
            None
        } else {
            solvable_extension(s)?.map(|m| format!("solvable extension by {}", matrix_text(&m)))
        };
        b.check("maximal solvable", maximal, format!("dim {} inside dim {}", s.dim(), s.ambient().dim()), witness);
    }
    Ok(())
}

pub fn borel(args: &BorelArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    if let Some(v) = &args.subalgebra {
        let s = inp.document::<SubalgebraJson>("subalgebra", v)?.load("--subalgebra")?;
        ambient_conventions(b, s.ambient());
        let f = flag_of_borel(&s)?;
        let back = stabilizer(&f, s.ambient(), StabMode::Formula)?;
        b.check(
            "stabilizer of the flag = input",
            back.space() == s.space(),
            format!("dim {} vs {}", back.dim(), s.dim()),
            outside(&back, &s).or_else(|| outside(&s, &back)),
        );
        solvability_checks(b, &s)?;
        b.result("flag", flag_doc(&f)?);
        b.result("flag_text", render_flag(&f));
        return Ok(());
    }
    let (Some(fv), Some(av)) = (&args.flag, &args.ambient) else {
        return Err(Error::Input("give --flag with --ambient, or --subalgebra".into()));
    };
    let f = load_flag(inp, fv)?;
    let a = load_ambient(inp, av)?;
    matching(&f, &a)?;
    ambient_conventions(b, &a);
    let (x, y) = rayon::join(|| stabilizer(&f, &a, StabMode::Brute), || stabilizer(&f, &a, StabMode::Formula));
    let (x, y) = (x?, y?);
    b.check(
        "brute = formula",
        x.space() == y.space(),
        format!("dim {} (brute) vs {} (formula)", x.dim(), y.dim()),
        outside(&x, &y).or_else(|| outside(&y, &x)),
    );
    solvability_checks(b, &y)?;
    if let Some(d) = borel_dimension(&a) {
        b.check("Borel dimension", y.dim() == d, format!("dim {} against {d}", y.dim()), None);
    }
    b.result("stabilizer", subalgebra_doc(&y)?);
    Ok(())
}

pub fn toral(args: &ToralArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    let f = load_flag(inp, &args.flag)?;
    let a = load_ambient(inp, &args.ambient)?;
    matching(&f, &a)?;
    ambient_conventions(b, &a);
    let ls = canonical_line_system(&f, &a)?;
    let t = toral_subalgebra(&ls, &a)?;
    let n = nilpotent_subalgebra(&f, &a)?;
    let s = stabilizer(&f, &a, StabMode::Formula)?;
    let sum = t.space().sum(n.space())?;
    b.check("t + n = b", sum == *s.space(), format!("dim {} vs {}", sum.dim(), s.dim()), None);
    let meet = t.space().intersect(n.space())?;
    b.check("t ∩ n = 0", meet.is_zero(), format!("dim {}", meet.dim()), None);
    let odd = |x: &LieSubalgebra, want: ElementType| x.basis_matrices().iter().find(|m| element_type(m) != want).map(matrix_text);
    let w = odd(&t, ElementType::Semisimple);
    b.check("t is semisimple", w.is_none(), format!("{} basis elements", t.dim()), w);
    let w = odd(&n, ElementType::Nilpotent);
    b.check("n is nilpotent", w.is_none(), format!("{} basis elements", n.dim()), w);
    b.check(
        "dim b = dim t + dim n",
        s.dim() == t.dim() + n.dim(),
        format!("{} = {} + {}", s.dim(), t.dim(), n.dim()),
        None,
    );
    let lines: Vec<Value> = ls
        .lines_l
        .iter()
        .zip(&ls.lines_m)
        .map(|((g, l), (_, m))| json!({"gamma": g, "l": vector_doc(&l.basis()[0]), "m": vector_doc(&m.basis()[0])}))
        .collect();
    b.result("lines", lines);
    b.result("t", subalgebra_doc(&t)?);
    b.result("n", subalgebra_doc(&n)?);
    Ok(())
}

pub fn twin(args: &TwinArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    let f = load_flag(inp, &args.flag)?;
    let p = load_form(inp, &args.form)?;
    b.convention(p.convention());
    match f.twin(&p)? {
        None => b.result("twin", "none"),
        Some(t) => {
            b.result("twin", flag_doc(&t)?);
            b.result("twin_text", render_flag(&t));
        }
    }
    b.result("flag_text", render_flag(&f));
    Ok(())
}

/// The span of several descriptors.
struct Sum(Vec<Box<dyn Descriptor + Send + Sync>>, IndexDomain);

impl Descriptor for Sum {
    fn domain(&self) -> IndexDomain {
        self.1
    }

    fn generators(&self, n: usize) -> Result<Vec<Vector>> {
        let mut out = Vec::new();
        for d in &self.0 {
            out.extend(d.generators(n)?);
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct LevelResult {
    level: usize,
    level_dim: usize,
    truncation_dim: usize,
    perp_dim: usize,
    closure_dim: usize,
    perp_certificate: Certificate,
    closure_certificate: Certificate,
    #[serde(skip)]
    expectation: Option<(bool, String, Option<String>)>,
}

fn verify_one(d: &Sum, p: PairingDescriptor, n: usize, l: usize, expect: Option<Expect>) -> Result<LevelResult> {
    let t = d.truncate(n)?;
    let (perp, pc) = perp_certified(d, p, n, l)?;
    let (c, cc) = closure_certified(d, p, n, l)?;
    if !t.is_subspace_of(&c)? {
        return Err(Error::Invariant(format!("level {n}: the truncation is not inside its closure")));
    }
    let expectation = match expect {
        None => None,
        Some(Expect::Full) => Some((
            c.is_full(),
            format!("closure dim {} of {}", c.dim(), c.ambient_dim()),
            (!c.is_full()).then(|| format!("closure = {}", render_subspace(&c))),
        )),
        Some(Expect::Closed) => {
            let extra = t.complement_in(&c)?;
            let witness = match extra.first() {
                Some(v) => Some(format!(
                    "in the closure but not the truncation: {}",
                    render_subspace(&Subspace::span(std::slice::from_ref(v), v.dim())?)
                )),
                None => None,
            };
            Some((extra.is_empty(), format!("truncation dim {}, closure dim {}", t.dim(), c.dim()), witness))
        }
    };
    Ok(LevelResult {
        level: n,
        level_dim: d.domain().level_dim(n),
        truncation_dim: t.dim(),
        perp_dim: perp.dim(),
        closure_dim: c.dim(),
        perp_certificate: pc,
        closure_certificate: cc,
        expectation,
    })
}

pub fn limits_verify(args: &VerifyArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    let domain = match args.domain {
        DomainArg::Positive => IndexDomain::Positive,
        DomainArg::Signed => IndexDomain::Signed,
    };
    let pairing = match args.pairing {
        PairingArg::StandardDual => PairingDescriptor::StandardDual,
        PairingArg::SplitSymmetric => PairingDescriptor::SplitSymmetric,
        PairingArg::SplitSymplectic => PairingDescriptor::SplitSymplectic,
    };
    inp.arg("domain", domain.name());
    inp.arg("pairing", pairing.name());
    inp.arg("levels", &args.levels);
    for f in &args.families {
        inp.arg("family", f);
    }
    for v in &args.vectors {
        inp.arg("vector", v);
    }
    if let Some(s) = &args.indices {
        inp.arg("indices", s);
    }
    inp.arg("lookahead", args.lookahead.to_string());
    if let Some(e) = args.expect {
        inp.arg("expect", format!("{e:?}"));
    }
    let (lo, hi) = parse_levels(&args.levels)?;
    let families = args.families.iter().map(|s| dsl::parse_family(s)).collect::<std::result::Result<Vec<_>, _>>()?;
    let vectors = args.vectors.iter().map(|s| dsl::parse_vector(s)).collect::<std::result::Result<Vec<_>, _>>()?;
    let indices: Option<IndexSet> = args.indices.as_deref().map(|s| dsl::parse_index_set(s, domain)).transpose()?;
    if families.is_empty() && vectors.is_empty() && indices.is_none() {
        return Err(Error::Input("describe the subspace with --family, --vector or --indices".into()));
    }
    pairing.at_level(domain, 1)?;
    let seq = SeqSubspace::new(domain, vectors, families)?;
    let mut described = vec![];
    if !(seq.explicit.is_empty() && seq.families.is_empty()) {
        described.push(seq.describe());
    }
    let mut parts: Vec<Box<dyn Descriptor + Send + Sync>> = vec![Box::new(seq)];
    if let Some(s) = indices {
        described.push(format!("span{{e(i) : i in {s}}}"));
        parts.push(Box::new(StableSubspace::indexed(s)));
    }
    let d = Sum(parts, domain);

    b.convention(format!("index domain: {}", domain.name()));
    b.convention(pairing.at_level(domain, 1)?.convention());
    b.convention(format!(
        "certificates: level n is computed from generators within level n + {}, and is stable when lookahead {} agrees",
        args.lookahead,
        args.lookahead + 1
    ));
    let levels: Vec<usize> = (lo..=hi).collect();
    let outs = levels
        .par_iter()
        .map(|&n| verify_one(&d, pairing, n, args.lookahead, args.expect))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    for r in &outs {
        let stable = r.perp_certificate.stable && r.closure_certificate.stable;
        b.check(
            format!("level {}: certificate stable", r.level),
            stable,
            format!("perp dim {}, closure dim {}, lookahead {}", r.perp_dim, r.closure_dim, args.lookahead),
            None,
        );
        if let (Some((ok, detail, w)), Some(e)) = (&r.expectation, args.expect) {
            let what = match e {
                Expect::Full => "closure is full",
                Expect::Closed => "truncation is closed",
            };
            b.check(format!("level {}: {what}", r.level), *ok, detail.clone(), w.clone());
        }
    }
    b.result("descriptor", described.join(" + "));
    b.result("levels", &outs);
    Ok(())
}

pub fn example(args: &ExampleArgs, inp: &mut Inputs, b: &mut Builder) -> Result<()> {
    inp.arg("name", &args.name);
    if let Some(l) = &args.levels {
        inp.arg("levels", l);
    }
    for c in &args.checks {
        inp.arg("check", c);
    }
    let s = builtin(&args.name)?;
    let (lo, hi) = match &args.levels {
        Some(l) => parse_levels(l)?,
        None => s.default_levels,
    };
    let checks: Vec<Check> = if args.checks.is_empty() {
        s.checks.clone()
    } else {
        args.checks.iter().map(|c| Check::parse(c)).collect::<Result<_>>()?
    };
    for c in &checks {
        if !s.checks.contains(c) {
            let known: Vec<&str> = s.checks.iter().map(|c| c.name()).collect();
            return Err(Error::Input(format!(
                "--check: '{c}' is not registered for {} (registered: {})",
                s.name,
                known.join(", ")
            )));
        }
    }
    b.convention(format!("index domain: {}", s.domain.name()));
    b.convention(s.pairing.at_level(s.domain, 1)?.convention());
    let jobs: Vec<(Check, usize)> = checks.iter().flat_map(|&c| (lo..=hi).map(move |n| (c, n))).collect();
    let outs = jobs
        .par_iter()
        .map(|&(c, n)| verify_level(&s, c, n))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    for ((c, _), o) in jobs.iter().zip(&outs) {
        b.check(format!("{c} @ level {}", o.level), o.passed, o.detail.clone(), o.witness.clone());
    }
    b.result("scenario", s.name);
    b.result("summary", s.summary);
    b.result("description", s.describe());
    b.result("levels", [lo, hi]);
    b.result("checks", checks.iter().map(|c| c.name()).collect::<Vec<_>>());
    Ok(())
}
