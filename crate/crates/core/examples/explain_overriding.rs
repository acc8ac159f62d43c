//! Walks through the reduction for one query: which instantiated defaults
//! were kept and which were overridden, and why.
//!
//! cargo run --example explain_overriding

use dln::defeasible::Engine;
use dln::parser::{parse_kb, parse_query, print_axiom, print_concept};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = parse_kb(include_str!("kb/situs_inversus_nose.kb"))?;
    let engine = Engine::default();
    let e = engine.n_entails(&kb, &parse_query("N(SI) <= some has_organ.Nose")?)?;
    let r = &e.reduction;

    let sigma: Vec<String> = r.sigma.iter().map(print_concept).collect();
    println!("sigma: {}", sigma.join(", "));
    println!("linearization: {:?}", r.linearization);
    for t in &r.selected {
        println!("kept        #{} {}", t.index, print_axiom(&t.axiom));
    }
    for o in &r.overridden {
        println!("overridden  #{} {}", o.translated.index, print_axiom(&o.translated.axiom));
        println!("    {} <= Bot follows from", print_concept(&o.reason.unsatisfiable));
        for a in &o.reason.checked {
            println!("      {}", print_axiom(a));
        }
    }
    println!("entailed: {} ({} consistency checks)", e.entailed, r.checks);
    Ok(())
}
