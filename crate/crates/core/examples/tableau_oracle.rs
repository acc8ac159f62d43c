//! The classical layer: tableau answers cross-checked against the bounded
//! finite-model search.
//!
//! cargo run --example tableau_oracle

use dln::classical::{bounded_model_search, check_model, ClassicalKb, Reasoner};
use dln::parser::{parse_concept, parse_kb, parse_query};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reasoner = Reasoner::new();
    for text in [
        "A <= some r.B\nB <= not A\na : A",
        "A <= some r.B\nB <= some r.C\nC <= Bot\na : A",
        "(a, b) : r\na : only r.B\nb : not B",
    ] {
        let kb = ClassicalKb::from_axioms(parse_kb(text)?.strong())?;
        let tableau = reasoner.is_consistent(&kb)?;
        let model = bounded_model_search(&kb, 4);
        println!("{:?}\n  tableau: {tableau}, model: {}", text, model.is_some());
        if let Some(m) = model {
            println!("  size {} model, verified: {}", m.domain_size, check_model(&m, &kb));
            println!("  {:?}", m.concepts);
            println!("  {:?}", m.roles);
        }
    }

    let tbox = ClassicalKb::from_axioms(parse_kb("A <= B\nB <= some r.C")?.strong())?;
    println!("\nA <= some r.C: {}", reasoner.entails(&tbox, &parse_query("A <= some r.C")?)?);
    println!("B and only r.not C satisfiable: {}", reasoner.is_satisfiable(&tbox, &parse_concept("B and only r.not C")?)?);
    println!("{:?}", reasoner.stats());
    Ok(())
}
