//! Conflict detection: the Nixon diamond leaves republican quakers with an
//! empty prototype until a more specific default settles the question.
//!
//! cargo run --example nixon_prototypes

use dln::defeasible::Engine;
use dln::model::KnowledgeBase;
use dln::parser::{parse_kb, print_concept};

fn report(title: &str, kb: &KnowledgeBase) -> Result<(), Box<dyn std::error::Error>> {
    let r = Engine::default().inconsistent_prototypes(kb, None)?;
    println!("{title}");
    for n in &r.inconsistent {
        println!("  INCONSISTENT {}", print_concept(n));
    }
    for n in &r.consistent {
        println!("  consistent   {}", print_concept(n));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    report("nixon diamond:", &parse_kb(include_str!("kb/nixon.kb"))?)?;
    report("after adding RepQuaker <~ Pacifist:", &parse_kb(include_str!("kb/nixon_repaired.kb"))?)?;
    Ok(())
}
