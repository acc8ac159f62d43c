//! Sweeps KLM postulates over seeded random knowledge bases.
//!
//! ```text
//! cargo run --example klm_sweep -- [SEEDS] [RULE...]
//! ```

use std::time::Instant;

use dln::defeasible::Options;
use dln::postulates::{sweep_rules, Profile, Rule};

fn main() {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(50);
    let rules: Vec<Rule> = args.map(|r| r.parse().expect("unknown rule")).collect();
    let (meta, internal): (Vec<Rule>, Vec<Rule>) = if rules.is_empty() {
        (Rule::META.to_vec(), Rule::INTERNALIZED.to_vec())
    } else {
        rules.iter().partition(|r| r.is_meta())
    };
    for (rules, profile) in [
        (meta, Profile::default()),
        (internal, Profile::normality_free()),
    ] {
        if rules.is_empty() {
            continue;
        }
        let start = Instant::now();
        let summaries =
            sweep_rules(&rules, 0..seeds, &profile, &Options::default()).expect("sweep failed");
        for s in summaries {
            println!(
                "{:<6} kbs={:<4} skipped={:<4} instances={:<7} tested={:<6} fails={}",
                s.rule.unwrap(),
                s.kbs,
                s.skipped,
                s.instances,
                s.tested,
                s.fails,
            );
            if let Some(c) = s.first_counterexample {
                println!("  first counterexample: {}", c.instance);
                print!("{}", dln::parser::print_kb(&c.kb));
            }
        }
        println!("{:.2?}", start.elapsed());
    }
}
