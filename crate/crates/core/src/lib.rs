//! Defeasible reasoning for ALC extended with normality concepts.
//!
//! A knowledge base holds strong axioms and defeasible inclusions
//! `C <~ D`, read as "normal instances of `C` are instances of `D` unless a
//! higher-priority inclusion says otherwise". Queries about normality
//! concepts `N(C)` are answered by building a classical knowledge base in
//! which every defeasible inclusion is either kept or overridden, and then
//! asking a tableau reasoner.
//!
//! ```
//! use dln::{parser, defeasible::{n_entails, Options}};
//!
//! let kb = parser::parse_kb(
//!     "Human <~ some has_heart.LH\n\
//!      SI <= Human\n\
//!      SI <= some has_heart.RH\n\
//!      some has_heart.LH <= not some has_heart.RH\n",
//! ).unwrap();
//! let q = parser::parse_query("SI <= not N(Human)").unwrap();
//! assert!(n_entails(&kb, &q, &Options::default()).unwrap().entailed);
//! ```

pub mod classical;
pub mod cli;
pub mod defeasible;
pub mod model;
pub mod parser;
pub mod postulates;

pub use model::{Axiom, Concept, DefeasibleCI, KnowledgeBase, NormalitySet};
