use flagstab::limits::{Cmp, Direction, Family, FamilyTerm, IndexDomain, IndexExpr, IndexSet, Symbol, Template};
use flagstab::linalg::Rational;
use flagstab_cli::dsl::{parse_family, parse_index_set, parse_vector, ErrorKind};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn index() -> impl Strategy<Value = IndexExpr> {
    prop_oneof![
        (any::<bool>(), -5i64..=5).prop_map(|(negated, offset)| IndexExpr::Var { negated, offset }),
        (-7i64..=7).prop_map(IndexExpr::Const),
    ]
}

fn symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![Just(Symbol::E), Just(Symbol::X), Just(Symbol::XStar)]
}

fn leaf() -> impl Strategy<Value = FamilyTerm> {
    (coeff(), symbol(), index()).prop_map(|(coeff, symbol, index)| FamilyTerm { coeff, symbol, index, tensor: None })
}

/// Terms with distinct keys, as the parser's normal form has.
fn distinct(terms: Vec<FamilyTerm>) -> Vec<FamilyTerm> {
    let mut out: Vec<FamilyTerm> = Vec::new();
    for t in terms {
        if !out.iter().any(|u| u.symbol == t.symbol && u.index == t.index && u.tensor == t.tensor) {
            out.push(t);
        }
    }
    out
}

fn term() -> impl Strategy<Value = FamilyTerm> {
    (leaf(), prop::option::of(prop::collection::vec(leaf(), 1..4))).prop_map(|(mut t, inner)| {
        t.tensor = inner.map(distinct);
        t
    })
}

fn family() -> impl Strategy<Value = Family> {
    (
        prop::collection::vec(term(), 1..5),
        prop_oneof![Just("k"), Just("i"), Just("j"), Just("idx")],
        any::<bool>(),
        -6i64..=6,
    )
        .prop_map(|(terms, var, ge, bound)| Family {
            var: var.to_string(),
            cmp: if ge { Cmp::Ge } else { Cmp::Le },
            bound,
            terms: distinct(terms),
        })
}

fn index_set(domain: IndexDomain) -> impl Strategy<Value = IndexSet> {
    (
        prop::option::of(-9i64..=-1),
        prop::collection::vec(-12i64..=12, 0..5),
        prop::option::of(1i64..=9),
    )
        .prop_map(move |(down, singles, up)| {
            let mut s = IndexSet::empty(domain);
            let mut add = |part: flagstab::Result<IndexSet>| {
                if let Ok(p) = part {
                    s = s.union(&p).unwrap();
                }
            };
            if let Some(d) = down.filter(|_| domain == IndexDomain::Signed) {
                add(IndexSet::ray(domain, Direction::Down, d));
            }
            for i in singles {
                add(IndexSet::singleton(domain, i));
            }
            if let Some(u) = up {
                add(IndexSet::ray(domain, Direction::Up, u + 3));
            }
            s
        })
}

proptest! {
    #[test]
    fn families_round_trip(f in family()) {
        let text = f.to_string();
        let parsed = parse_family(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&parsed, &f, "{}", text);
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn ascii_tensor_spellings_agree(f in family()) {
        let text = f.to_string();
        let a = parse_family(&text.replace('⊗', "ox")).unwrap();
        let b = parse_family(&text.replace('⊗', "(x)")).unwrap();
        prop_assert_eq!(&a, &f);
        prop_assert_eq!(&b, &f);
    }

    #[test]
    fn vectors_round_trip(terms in prop::collection::btree_map(-9i64..=9, coeff(), 1..5)) {
        let t = Template::new(terms);
        let text = t.to_string();
        prop_assert_eq!(parse_vector(&text).unwrap(), t);
    }

    #[test]
    fn index_sets_round_trip(s in index_set(IndexDomain::Signed), p in index_set(IndexDomain::Positive)) {
        prop_assert_eq!(&parse_index_set(&s.to_string(), IndexDomain::Signed).unwrap(), &s);
        prop_assert_eq!(&parse_index_set(&p.to_string(), IndexDomain::Positive).unwrap(), &p);
    }

    #[test]
    fn garbage_never_panics(src in "[ekx*()+\\-0-9/ ⊗<>=fori{}|.]{0,30}") {
        let _ = parse_family(&src);
        let _ = parse_vector(&src);
        let _ = parse_index_set(&src, IndexDomain::Signed);
    }
}

#[test]
fn exemplars() {
    let f = parse_family("e(k) - e(k+1) for k >= 1").unwrap();
    assert_eq!(f.to_string(), "e(k) - e(k+1) for k >= 1");
    let x = parse_family("x(i) ⊗ (x*(i) + x*(-i)) for i >= 1").unwrap();
    assert_eq!(x.terms.len(), 1);
    assert_eq!(x.terms[0].tensor.as_ref().unwrap().len(), 2);
    let e = parse_family("e(k*k)").unwrap_err();
    assert_eq!(e.kind, ErrorKind::Unsupported);
    for bad in ["e(k^2) for k >= 1", "e(2*k) for k >= 1", "e(k/2) for k >= 1", "e(k+k) for k >= 1"] {
        assert_eq!(parse_family(bad).unwrap_err().kind, ErrorKind::Unsupported, "{bad}");
    }
}
