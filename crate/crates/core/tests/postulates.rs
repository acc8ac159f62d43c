mod common;

use dln::defeasible::{Engine, Options};
use dln::parser::{parse_concept, parse_kb, parse_query, print_kb};
use dln::postulates::{
    check_internalized, check_meta, enumerate_instances, generate_random_kb, internalized_instance,
    replay, sweep, sweep_rules, Oracle, Profile, Rule,
};

fn c(s: &str) -> dln::model::Concept {
    parse_concept(s).unwrap()
}

#[test]
fn ref_n_holds_without_restriction_on_generated_kbs() {
    let summary = sweep(Rule::RefN, 0..60, &Profile::default(), &Options::default()).unwrap();
    assert_eq!(summary.kbs, 60);
    assert_eq!(summary.skipped, 0);
    assert_eq!(summary.fails, 0);
    assert!(summary.tested > 0);
}

#[test]
fn ref_n_holds_on_every_corpus_kb() {
    for (name, kb) in common::corpus() {
        let mut names: Vec<_> = dln::model::signature(&kb).concepts.into_iter().collect();
        names.sort();
        for n in names {
            let atom = dln::model::Concept::Atomic(n);
            let v = check_internalized(&kb, Rule::RefN, &atom, &atom, &atom, &Options::default()).unwrap();
            assert!(v.holds, "{name}: {atom:?}");
        }
    }
}

#[test]
fn cm_n_on_small_normality_free_kbs_over_all_name_triples() {
    let profile = Profile {
        defeasible: 3,
        ..Profile::normality_free()
    };
    let engine = Engine::default();
    let names: Vec<_> = ["A", "B", "C", "D"].iter().map(|n| c(n)).collect();
    let mut checked = 0;
    for seed in 0..12 {
        let kb = generate_random_kb(seed, &profile);
        if dln::postulates::first_inconsistent_prototype(&engine, &kb).unwrap().is_some() {
            continue;
        }
        for x in &names {
            for y in &names {
                for z in &names {
                    let v = check_internalized(&kb, Rule::CmN, x, y, z, &Options::default()).unwrap();
                    assert!(v.holds, "seed {seed}\n{}", print_kb(&kb));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn rw_n_on_situs_inversus() {
    let kb = common::corpus()
        .into_iter()
        .find(|(n, _)| n == "situs_inversus")
        .unwrap()
        .1;
    let v = check_internalized(
        &kb,
        Rule::RwN,
        &c("Human"),
        &c("some has_heart.LH"),
        &c("not some has_heart.RH"),
        &Options::default(),
    )
    .unwrap();
    assert!(v.holds && v.premises_hold);
}

#[test]
fn ct_on_situs_inversus() {
    let kb = common::corpus()
        .into_iter()
        .find(|(n, _)| n == "situs_inversus")
        .unwrap()
        .1;
    let inst = dln::postulates::ct_instance(
        parse_query("SI <= some has_heart.RH").unwrap(),
        parse_query("SI <= not N(Human)").unwrap(),
    );
    let v = check_meta(&kb, &inst, &Options::default()).unwrap();
    assert!(v.holds && v.premises_hold);
}

#[test]
fn counterexamples_replay_identically() {
    // outside the normality-free restriction LLE_N and CM_N can fail; every
    // failure must reproduce exactly
    let engine = Engine::default();
    for seed in 0..25 {
        let kb = generate_random_kb(seed, &Profile::default());
        let mut oracle = Oracle::new(&engine, &kb);
        for rule in [Rule::LleN, Rule::CmN] {
            for inst in enumerate_instances(&mut oracle, rule).unwrap() {
                let v = oracle.evaluate(&inst).unwrap();
                assert_eq!(v.holds, v.counterexample.is_none());
                let Some(cx) = v.counterexample else { continue };
                assert!(replay(&cx, &Options::default()).unwrap());
                let again = Oracle::new(&engine, &cx.kb).evaluate(&cx.instance).unwrap();
                assert_eq!(again.counterexample.as_ref(), Some(&cx));
            }
        }
    }
    // the fixed LLE_N counterexample too
    let kb = parse_kb("A <= B\nB <= A\na : N(A)\na : not E\nA <~ E\n").unwrap();
    let inst = internalized_instance(Rule::LleN, &c("B"), &c("A"), &c("E"));
    let cx = Oracle::new(&engine, &kb).evaluate(&inst).unwrap().counterexample.unwrap();
    assert_eq!(cx.failing_query, parse_query("N(A) <= E").unwrap());
    assert!(replay(&cx, &Options::default()).unwrap());
}

#[test]
fn checkers_do_not_mutate_the_kb() {
    let engine = Engine::default();
    for seed in 0..15 {
        let kb = generate_random_kb(seed, &Profile::default());
        let before = kb.clone();
        let printed = print_kb(&kb);
        let mut oracle = Oracle::new(&engine, &kb);
        for rule in Rule::META.iter().chain(Rule::INTERNALIZED.iter()) {
            for inst in enumerate_instances(&mut oracle, *rule).unwrap().into_iter().take(5) {
                oracle.evaluate(&inst).unwrap();
            }
        }
        drop(oracle);
        assert_eq!(kb, before);
        assert_eq!(print_kb(&kb), printed);
    }
}

#[test]
fn sweeps_are_deterministic() {
    let profile = Profile::normality_free();
    let a = sweep_rules(&[Rule::CtN, Rule::OrN], 0..20, &profile, &Options::default()).unwrap();
    let b = sweep_rules(&[Rule::CtN, Rule::OrN], 0..20, &profile, &Options::default()).unwrap();
    assert_eq!(a, b);
    let one = sweep(Rule::OrN, 0..20, &profile, &Options::default()).unwrap();
    assert_eq!(one, a[1]);
}

#[test]
fn generated_kbs_round_trip_through_the_printer() {
    for seed in 0..1000 {
        let kb = generate_random_kb(seed, &Profile::default());
        let text = print_kb(&kb);
        assert_eq!(parse_kb(&text).unwrap(), kb, "seed {seed}:\n{text}");
    }
}

#[test]
fn profiles_are_respected() {
    let classical = Profile {
        defeasible: 0,
        ..Profile::default()
    };
    for seed in 0..30 {
        assert!(generate_random_kb(seed, &classical).defeasible().is_empty());
        assert!(generate_random_kb(seed, &Profile::normality_free()).is_normality_free());
    }
    let huge = Profile {
        concept_names: 50,
        defeasible: 50,
        max_depth: 9,
        ..Profile::default()
    };
    for seed in 0..30 {
        let kb = generate_random_kb(seed, &huge);
        assert!(kb.defeasible().len() <= 6);
        assert!(dln::model::signature(&kb).concepts.len() <= 6);
    }
}
