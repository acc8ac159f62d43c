//! Defaults with exceptions: humans normally have the heart on the left, and
//! people with situs inversus are a known exception.
//!
//! cargo run --example situs_inversus

use dln::defeasible::{n_entails, Options};
use dln::parser::{parse_kb, parse_query, print_axiom};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = parse_kb(include_str!("kb/situs_inversus.kb"))?;
    let opts = Options::default();
    for q in [
        "N(Human) <= some has_heart.LH",
        "SI <= some has_heart.RH",
        "SI <= not some has_heart.LH",
        "SI <= not N(Human)",
        "N(SI) <= some has_heart.LH",
    ] {
        let e = n_entails(&kb, &parse_query(q)?, &opts)?;
        let verdict = if e.entailed { "entailed" } else { "not entailed" };
        println!("{:<14} {}", verdict, print_axiom(&e.query));
    }

    // an extra default about noses is inherited by the exception too
    let noses = parse_kb(include_str!("kb/situs_inversus_nose.kb"))?;
    let q = parse_query("N(SI) <= some has_organ.Nose")?;
    println!("\nwith the nose default: {} -> {}", print_axiom(&q), n_entails(&noses, &q, &opts)?.entailed);
    Ok(())
}
