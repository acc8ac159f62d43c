//! Asking for every consistent concept to have a normal instance turns an
//! unresolved conflict into a plain inconsistency.
//!
//! cargo run --example nonempty_prototypes

use dln::defeasible::{n_entails, Engine, Options};
use dln::parser::{parse_kb, parse_query, print_kb};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = Options {
        assume_nonempty_prototypes: true,
        ..Options::default()
    };
    let q = parse_query("Quaker <= Bot")?;
    for (name, text) in [
        ("nixon", include_str!("kb/nixon.kb")),
        ("nixon_repaired", include_str!("kb/nixon_repaired.kb")),
    ] {
        let kb = parse_kb(text)?;
        let plain = n_entails(&kb, &q, &Options::default())?.entailed;
        let witnessed = n_entails(&kb, &q, &opts)?.entailed;
        println!("{name}: Quaker <= Bot plain={plain} with witnesses={witnessed}");
    }
    let kb = parse_kb(include_str!("kb/nixon_repaired.kb"))?;
    println!("\nwitnessed KB:\n{}", print_kb(&Engine::new(opts).with_witnesses(&kb, None)?));
    Ok(())
}
