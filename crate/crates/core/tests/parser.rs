mod common;

use dln::model::{Axiom, Concept, KnowledgeBase};
use dln::parser::{
    is_identifier, parse_concept, parse_document, parse_kb, parse_query, print_axiom,
    print_concept, print_concept_with, print_kb, Style, KEYWORDS,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn axiom_round_trip(a in common::axiom(5)) {
        let text = print_axiom(&a);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(&back[0].value, &a, "{}", text);
    }

    #[test]
    fn concept_round_trip(c in common::concept(5, true)) {
        let text = print_concept(&c);
        prop_assert_eq!(parse_concept(&text).unwrap(), c);
    }

    #[test]
    fn printing_is_a_fixpoint(c in common::concept(4, true)) {
        let once = print_concept(&c);
        prop_assert_eq!(print_concept(&parse_concept(&once).unwrap()), once);
    }

    #[test]
    fn kb_round_trip(axioms in prop::collection::vec(common::axiom(3), 0..8)) {
        let kb = KnowledgeBase::from_axioms(axioms);
        prop_assert_eq!(parse_kb(&print_kb(&kb)).unwrap(), kb);
    }

    #[test]
    fn identifiers(name in "[A-Za-z_][A-Za-z0-9_]{0,6}") {
        let keyword = KEYWORDS.contains(&name.as_str());
        prop_assert_eq!(is_identifier(&name), !keyword);
        if !keyword {
            let c = Concept::atomic(name.clone());
            prop_assert_eq!(parse_concept(&name).unwrap(), c);
        }
    }

    #[test]
    fn unicode_printing_has_no_ascii_keywords(c in common::concept(3, false)) {
        let text = print_concept_with(&c, Style::Unicode);
        for kw in ["not ", " and ", " or ", "some ", "only "] {
            prop_assert!(!text.contains(kw), "{}", text);
        }
    }
}

#[test]
fn comments_and_blank_lines() {
    let kb = parse_kb("# header\n\nA <= B # trailing\n\n  a : A\n").unwrap();
    assert_eq!(kb.strong().len(), 2);
}

#[test]
fn document_locations() {
    let doc = parse_document("# c\nA <= B\n\nA <~ C\n").unwrap();
    let lines: Vec<usize> = doc.iter().map(|l| l.location.line).collect();
    assert_eq!(lines, vec![2, 4]);
}

#[test]
fn error_reports_line_and_column() {
    let err = parse_kb("A <= B\nA <= and\n").unwrap_err();
    assert_eq!(err.location.line, 2);
    assert_eq!(err.location.column, 6);
    let err = parse_kb("A <= B C\n").unwrap_err();
    assert_eq!((err.location.line, err.location.column), (1, 8));
}

#[test]
fn defeasible_queries_are_rejected() {
    let err = parse_query("A <~ B").unwrap_err();
    assert_eq!(err.location.column, 3);
}

#[test]
fn precedence_and_parentheses() {
    let c = parse_concept("not A and B or C").unwrap();
    let expected = Concept::or(
        Concept::and(Concept::not(Concept::atomic("A")), Concept::atomic("B")),
        Concept::atomic("C"),
    );
    assert_eq!(c, expected);
    let q = parse_query("N(A and B) <= some r.(C or D)").unwrap();
    assert!(matches!(q, Axiom::StrictCI { .. }));
    assert_eq!(print_axiom(&q), "N(A and B) <= some r.(C or D)");
}

#[test]
fn seeded_round_trips() {
    // the same generator the postulate sweeps use
    for seed in 0..200 {
        let kb = dln::postulates::generate_random_kb(seed, &Default::default());
        assert_eq!(parse_kb(&print_kb(&kb)).unwrap(), kb, "seed {seed}");
    }
}
