//! Individual postulate instances, and a counterexample that appears once
//! normality concepts occur in the knowledge base.
//!
//! cargo run --example postulate_checks

use dln::defeasible::{Engine, Options};
use dln::parser::{parse_concept, parse_kb, parse_query};
use dln::postulates::{check_internalized, check_meta, ct_instance, internalized_instance, replay, Oracle, Rule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = parse_kb(include_str!("kb/situs_inversus.kb"))?;
    let ct = ct_instance(parse_query("SI <= some has_heart.RH")?, parse_query("SI <= not N(Human)")?);
    println!("{ct}\n  holds: {}", check_meta(&kb, &ct, &Options::default())?.holds);

    let c = |s: &str| parse_concept(s);
    let v = check_internalized(
        &kb,
        Rule::RwN,
        &c("Human")?,
        &c("some has_heart.LH")?,
        &c("not some has_heart.RH")?,
        &Options::default(),
    )?;
    println!("RW_N on the heart default holds: {}", v.holds);

    // LLE_N is only claimed for knowledge bases without N
    let kb = parse_kb("A <= B\nB <= A\na : N(A)\na : not E\nA <~ E\n")?;
    match check_internalized(&kb, Rule::LleN, &c("B")?, &c("A")?, &c("E")?, &Options::default()) {
        Err(e) => println!("\nprecondition: {e}"),
        Ok(v) => println!("\nunexpected verdict {}", v.holds),
    }
    let engine = Engine::default();
    let inst = internalized_instance(Rule::LleN, &c("B")?, &c("A")?, &c("E")?);
    let v = Oracle::new(&engine, &kb).evaluate(&inst)?;
    if let Some(cx) = v.counterexample {
        println!("{}\n  fails on {:?}; replays: {}", cx.instance, dln::parser::print_axiom(&cx.failing_query), replay(&cx, &Options::default())?);
    }
    Ok(())
}
