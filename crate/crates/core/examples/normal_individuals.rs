//! Individuals asserted to be normal inherit the defaults of their concept;
//! other individuals do not.
//!
//! cargo run --example normal_individuals

use dln::defeasible::{n_entails, Options};
use dln::parser::{parse_kb, parse_query};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dogs = parse_kb(include_str!("kb/witnesses.kb"))?;
    let birds = parse_kb(include_str!("kb/penguins.kb"))?;
    let opts = Options::default();
    for (kb, q) in [
        (&dogs, "rex : Barks"),
        (&dogs, "rex : some has.Tail"),
        (&dogs, "lisa : Barks"),
        (&birds, "N(Penguin) <= not Flies"),
        (&birds, "N(Penguin) <= some has.Wings"),
        (&birds, "tweety : Flies"),
    ] {
        println!("{q:<32} {}", n_entails(kb, &parse_query(q)?, &opts)?.entailed);
    }
    Ok(())
}
