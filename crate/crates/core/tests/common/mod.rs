#![allow(dead_code)]

use std::path::PathBuf;

use dln::model::{Axiom, Concept, DefeasibleCI, KnowledgeBase};
use dln::parser::parse_kb;
use proptest::prelude::*;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/kb")
}

/// Every `.kb` file of the example corpus, sorted by name.
pub fn corpus() -> Vec<(String, KnowledgeBase)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "kb"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let kb = parse_kb(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, kb)
        })
        .collect()
}

/// Small classical KBs whose models, if any, need at most four elements.
/// The flag is the expected consistency.
pub const CURATED: &[(&str, bool)] = &[
    ("", true),
    ("A <= B", true),
    ("Top <= Bot", false),
    ("a : Bot", false),
    ("a : A\na : not A", false),
    ("a : A and not A", false),
    ("a : A or not A", true),
    ("A <= B\nB <= C\na : A\na : not C", false),
    ("A <= B\nB <= C\na : A\na : C", true),
    ("A <= not A", true),
    ("A <= not A\na : A", false),
    ("Top <= A\nTop <= not A", false),
    ("Top <= A or B\na : not A", true),
    ("Top <= A or B\na : not A and not B", false),
    ("a : some r.A\nA <= Bot", false),
    ("a : some r.A\nb : only r.A", true),
    ("a : some r.A\na : only r.not A", false),
    ("(a, b) : r\na : only r.B\nb : not B", false),
    ("(a, b) : r\na : only r.B\nb : B", true),
    ("(a, b) : r\n(b, c) : r\na : only r.only r.Bot", false),
    ("(a, b) : r\n(b, c) : r\na : only r.only r.A\nc : A", true),
    ("Top <= some r.Top", true),
    ("Top <= some r.A\nA <= some r.B\nB <= not A", true),
    ("A <= some r.A\na : A", true),
    ("A <= some r.not A\nnot A <= some r.A\na : A", true),
    ("A <= some r.B\nB <= some r.C\nC <= Bot\na : A", false),
    ("A <= some r.B\nB <= some s.C\na : A\na : only r.only s.not C", false),
    ("some r.Top <= A\n(a, b) : r\na : not A", false),
    ("some r.Top <= A\n(a, b) : r\nb : not A", true),
    ("only r.A <= B\na : not B\na : only r.A", false),
    ("only r.A <= B\na : not B", true),
    ("A and B <= Bot\na : A\na : B", false),
    ("A and B <= Bot\na : A\nb : B", true),
    ("A or B <= C\na : A\na : not C", false),
    ("A or B <= C\nb : B\nb : C", true),
    ("a : (A or B) and (not A or B) and (A or not B) and (not A or not B)", false),
    ("a : (A or B) and (not A or B) and (A or not B)", true),
    ("Top <= (A or B) and (not A or C)\na : not B\na : not C", false),
    ("Top <= (A or B) and (not A or C)\na : not B", true),
    ("a : some r.(A and B)\na : only r.(not A or not B)", false),
    ("a : some r.A and some r.B\na : only r.(not A or not B)", true),
    ("a : some r.A and some r.B and some r.C\nTop <= not A or not B\nTop <= not B or not C\nTop <= not A or not C", true),
    ("a : some r.some r.some r.A\nTop <= only r.not A", false),
    ("a : some r.some r.some r.A\nb : only r.not A", true),
    ("A <= only r.B\nA <= some r.not B\na : A", false),
    ("A <= only r.B\nA <= some r.not B", true),
    ("A <= only r.B\nA <= some r.not B\nTop <= A", false),
    ("Top <= A or B\nA <= some r.C\nB <= some r.C\nC <= Bot", false),
    ("Top <= A or B\nA <= some r.C\nB <= some r.D\nC <= Bot", true),
    ("(a, a) : r\na : only r.not A\na : A", false),
    ("(a, a) : r\na : only r.A\na : A", true),
    ("(a, b) : r\n(a, b) : s\na : only r.A\na : only s.not A", false),
    ("(a, b) : r\n(c, d) : s\na : only r.A\nc : only s.not A", true),
    ("some r.A <= B\nB <= Bot\n(a, b) : r\nb : A", false),
    ("A <= some r.A\nTop <= A\nTop <= only r.B\nB <= Bot", false),
    ("a : not (A and B)\na : A\na : B", false),
    ("a : not (some r.A)\n(a, b) : r\nb : A", false),
    ("a : not (only r.A)\nTop <= A", false),
    ("a : not (only r.A)", true),
    ("A <= B or C\nB <= Bot\nC <= Bot\na : A", false),
    ("A <= B or C\nB <= Bot\na : A", true),
];

pub const CONCEPT_NAMES: &[&str] = &["A", "B", "C", "D"];
pub const ROLE_NAMES: &[&str] = &["r", "s"];
pub const INDIVIDUAL_NAMES: &[&str] = &["a", "b", "c"];

fn leaf(normality: bool) -> BoxedStrategy<Concept> {
    let names = prop::sample::select(CONCEPT_NAMES).prop_map(Concept::atomic);
    if normality {
        prop_oneof![
            6 => names.clone(),
            1 => Just(Concept::Top),
            1 => Just(Concept::Bottom),
            1 => names.prop_map(Concept::normal),
        ]
        .boxed()
    } else {
        prop_oneof![6 => names, 1 => Just(Concept::Top), 1 => Just(Concept::Bottom)].boxed()
    }
}

/// Concepts up to `depth` levels of constructors.
pub fn concept(depth: u32, normality: bool) -> BoxedStrategy<Concept> {
    leaf(normality)
        .prop_recursive(depth, 64, 2, move |inner| {
            let role = prop::sample::select(ROLE_NAMES);
            let mut options = vec![
                inner.clone().prop_map(Concept::not).boxed(),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Concept::and(a, b))
                    .boxed(),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Concept::or(a, b))
                    .boxed(),
                (role.clone(), inner.clone())
                    .prop_map(|(r, c)| Concept::exists(r, c))
                    .boxed(),
                (role, inner.clone())
                    .prop_map(|(r, c)| Concept::forall(r, c))
                    .boxed(),
            ];
            if normality {
                options.push(inner.prop_map(Concept::normal).boxed());
            }
            prop::strategy::Union::new(options)
        })
        .boxed()
}

pub fn strict_axiom(depth: u32, normality: bool) -> impl Strategy<Value = Axiom> {
    let ind = prop::sample::select(INDIVIDUAL_NAMES);
    prop_oneof![
        3 => (concept(depth, normality), concept(depth, normality))
            .prop_map(|(l, r)| Axiom::strict(l, r)),
        2 => (ind.clone(), concept(depth, normality)).prop_map(|(a, c)| Axiom::instance(a, c)),
        1 => (ind.clone(), prop::sample::select(ROLE_NAMES), ind)
            .prop_map(|(a, r, b)| Axiom::role(a, r, b)),
    ]
}

/// Any axiom, defeasible inclusions with optional ranks included.
pub fn axiom(depth: u32) -> impl Strategy<Value = Axiom> {
    prop_oneof![
        3 => strict_axiom(depth, true),
        1 => (concept(depth, true), concept(depth, true), prop::option::of(0u32..20)).prop_map(
            |(l, r, rank)| Axiom::DefeasibleCI(DefeasibleCI { lhs: l, rhs: r, rank })
        ),
    ]
}

/// Small classical KBs for oracle comparisons.
pub fn classical_kb() -> impl Strategy<Value = Vec<Axiom>> {
    prop::collection::vec(strict_axiom(2, false), 0..5)
}

/// Every linearization of a strict partial order on `0..n`, given as
/// `precedes(i, j)`.
pub fn all_linearizations(n: usize, precedes: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    fn go(
        n: usize,
        precedes: &dyn Fn(usize, usize) -> bool,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if prefix.contains(&i) {
                continue;
            }
            let ready = (0..n).all(|j| !precedes(j, i) || prefix.contains(&j));
            if ready {
                prefix.push(i);
                go(n, precedes, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, precedes, &mut Vec::new(), &mut out);
    out
}

/// Queries `N X <= Y` and `N X <= not Y` over the concept names of `kb`.
pub fn query_battery(kb: &KnowledgeBase) -> Vec<Axiom> {
    let names: Vec<Concept> = dln::model::signature(kb)
        .concepts
        .into_iter()
        .filter(|n| !dln::model::is_normal_atom(n))
        .map(Concept::Atomic)
        .collect();
    let mut out = Vec::new();
    for x in &names {
        out.push(Axiom::strict(Concept::normal(x.clone()), Concept::Bottom));
        for y in &names {
            out.push(Axiom::strict(Concept::normal(x.clone()), y.clone()));
            out.push(Axiom::strict(Concept::normal(x.clone()), Concept::not(y.clone())));
        }
    }
    out
}
