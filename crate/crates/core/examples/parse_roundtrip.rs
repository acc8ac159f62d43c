//! The surface syntax: parsing, ASCII and Unicode printing, round trips and
//! validation warnings.
//!
//! cargo run --example parse_roundtrip

use dln::model::validate;
use dln::parser::{parse_document, parse_kb, print_axiom, print_axiom_with, Style};

const SOURCE: &str = "\
# comments run to the end of the line
SI <= Human and some has_heart.RH
Human <~ some has_heart.LH
Human and N(Adult) <~[3] Works
(rex, lisa) : owner
rex : N(Dog) or not Cat
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for located in parse_document(SOURCE)? {
        let a = &located.value;
        println!("{:>3}: {:<40} {}", located.location.line, print_axiom(a), print_axiom_with(a, Style::Unicode));
        let again = parse_document(&print_axiom(a))?;
        assert_eq!(&again[0].value, a);
    }
    for w in validate(&parse_kb(SOURCE)?) {
        println!("warning: {w}");
    }
    match parse_kb("A <= (B and") {
        Err(e) => println!("error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
