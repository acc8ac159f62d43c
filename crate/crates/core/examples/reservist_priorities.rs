//! Specificity between defaults and the resulting linearization.
//!
//! cargo run --example reservist_priorities

use dln::defeasible::{linearize, Engine};
use dln::model::{Concept, NormalitySet};
use dln::parser::{parse_kb, parse_query, print_axiom, print_concept};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = parse_kb(include_str!("kb/reservist.kb"))?;
    let engine = Engine::default();
    let prio = engine.priority_relation(&kb)?;
    let dis = kb.defeasible();
    for (i, j) in prio.pairs() {
        println!(
            "#{i} ({} <~ {}) has priority over #{j} ({} <~ {})",
            print_concept(dis[i].pre()),
            print_concept(dis[i].con()),
            print_concept(dis[j].pre()),
            print_concept(dis[j].con()),
        );
    }
    println!("linearization: {:?}", linearize(&kb, &prio));

    let mut sigma = NormalitySet::new();
    sigma.insert(Concept::normal(Concept::atomic("MaleCitizen")));
    let r = engine.build_kb_sigma(&kb, &sigma, &prio)?;
    for t in &r.selected {
        println!("kept for N MaleCitizen: {}", print_axiom(&t.axiom));
    }
    for q in ["N(MaleCitizen) <= Reservist", "N(MinorMaleCitizen) <= Reservist"] {
        println!("{q}: {}", engine.n_entails(&kb, &parse_query(q)?)?.entailed);
    }
    Ok(())
}
