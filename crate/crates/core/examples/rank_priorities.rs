//! Explicit ranks instead of specificity: two defaults with the same premise
//! conflict under specificity, while ranks let one of them win.
//!
//! cargo run --example rank_priorities

use dln::defeasible::{n_entails, Options, PriorityMode};
use dln::parser::{parse_kb, parse_query};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = parse_kb(include_str!("kb/ranked.kb"))?;
    let queries = ["N(Employee) <= Bot", "N(Employee) <= not some works_at.Office", "N(Remote) <= Bot"];
    for mode in [PriorityMode::Specificity, PriorityMode::Rank] {
        let opts = Options {
            priority: mode,
            ..Options::default()
        };
        println!("{mode:?}:");
        for q in queries {
            println!("  {q}: {}", n_entails(&kb, &parse_query(q)?, &opts)?.entailed);
        }
    }
    Ok(())
}
