//! Classical ALC reasoning: consistency, subsumption and instance checking
//! through a tableau procedure, and an exhaustive finite-model search that
//! serves as an independent oracle at desk scale.

mod interpretation;
mod tableau;

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::model::{lower, lower_axiom, Assertion, Axiom, Concept, IndividualName, Signature};

pub use interpretation::{bounded_model_search, check_model, Element, FiniteInterpretation};

pub const DEFAULT_NODE_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassicalError {
    /// The tableau created more nodes than allowed; the answer is unknown.
    #[error("node budget of {budget} exceeded; result unknown")]
    ResourceLimit { budget: usize },
    #[error("defeasible inclusion cannot be part of a classical knowledge base")]
    Defeasible,
}

/// Strict inclusion `lhs ⊑ rhs` over lowered concepts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inclusion {
    pub lhs: Concept,
    pub rhs: Concept,
}

/// A classical TBox and ABox. Normality concepts are lowered to reserved
/// atomic names on construction, so no `Normal` constructor survives here.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassicalKb {
    tbox: Vec<Inclusion>,
    abox: Vec<Assertion>,
}

impl ClassicalKb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms<'a>(
        axioms: impl IntoIterator<Item = &'a Axiom>,
    ) -> Result<ClassicalKb, ClassicalError> {
        let mut kb = ClassicalKb::new();
        for a in axioms {
            kb.add(a)?;
        }
        Ok(kb)
    }

    /// Lowers and adds `axiom`; duplicates are ignored.
    pub fn add(&mut self, axiom: &Axiom) -> Result<(), ClassicalError> {
        match lower_axiom(axiom).ok_or(ClassicalError::Defeasible)? {
            Axiom::StrictCI { lhs, rhs } => self.add_inclusion(lhs, rhs),
            Axiom::ConceptAssertion {
                individual,
                concept,
            } => self.add_assertion(Assertion::Concept {
                individual,
                concept,
            }),
            Axiom::RoleAssertion {
                subject,
                object,
                role,
            } => self.add_assertion(Assertion::Role {
                subject,
                role,
                object,
            }),
            Axiom::DefeasibleCI(_) => unreachable!(),
        }
        Ok(())
    }

    pub fn add_inclusion(&mut self, lhs: Concept, rhs: Concept) {
        let inc = Inclusion {
            lhs: lower(&lhs),
            rhs: lower(&rhs),
        };
        if !self.tbox.contains(&inc) {
            self.tbox.push(inc);
        }
    }

    pub fn add_assertion(&mut self, assertion: Assertion) {
        let assertion = match assertion {
            Assertion::Concept {
                individual,
                concept,
            } => Assertion::Concept {
                individual,
                concept: lower(&concept),
            },
            role => role,
        };
        if !self.abox.contains(&assertion) {
            self.abox.push(assertion);
        }
    }

    pub fn tbox(&self) -> &[Inclusion] {
        &self.tbox
    }

    pub fn abox(&self) -> &[Assertion] {
        &self.abox
    }

    pub fn len(&self) -> usize {
        self.tbox.len() + self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for inc in &self.tbox {
            sig.extend(&Signature::of_concept(&inc.lhs));
            sig.extend(&Signature::of_concept(&inc.rhs));
        }
        for a in &self.abox {
            match a {
                Assertion::Concept {
                    individual,
                    concept,
                } => {
                    sig.extend(&Signature::of_concept(concept));
                    sig.individuals.insert(individual.clone());
                }
                Assertion::Role {
                    subject,
                    role,
                    object,
                } => {
                    sig.individuals.insert(subject.clone());
                    sig.individuals.insert(object.clone());
                    sig.roles.insert(role.clone());
                }
            }
        }
        sig
    }

    /// Individual name of the form `prefix`, `prefix_1`, ... unused in this KB.
    fn fresh_individual(&self, prefix: &str) -> IndividualName {
        let used: HashSet<&str> = self
            .abox()
            .iter()
            .flat_map(|a| match a {
                Assertion::Concept { individual, .. } => [Some(individual), None],
                Assertion::Role { subject, object, .. } => [Some(subject), Some(object)],
            })
            .flatten()
            .map(|i| i.as_str())
            .collect();
        let mut candidate = prefix.to_string();
        let mut n = 0;
        while used.contains(candidate.as_str()) {
            n += 1;
            candidate = format!("{prefix}_{n}");
        }
        IndividualName::new(candidate)
    }
}

/// Counters of reasoning calls issued through a [`Reasoner`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReasonerStats {
    pub consistency_checks: u64,
    pub subsumption_checks: u64,
}

/// Tableau-backed reasoner. The counters are atomic, so one engine can be
/// shared by concurrent calls.
#[derive(Debug)]
pub struct Reasoner {
    node_budget: usize,
    consistency_checks: AtomicU64,
    subsumption_checks: AtomicU64,
}

impl Default for Reasoner {
    fn default() -> Self {
        Self::new()
    }
}

impl Reasoner {
    pub fn new() -> Self {
        Self::with_node_budget(DEFAULT_NODE_BUDGET)
    }

    pub fn with_node_budget(node_budget: usize) -> Self {
        Self {
            node_budget,
            consistency_checks: AtomicU64::new(0),
            subsumption_checks: AtomicU64::new(0),
        }
    }

    pub fn node_budget(&self) -> usize {
        self.node_budget
    }

    pub fn stats(&self) -> ReasonerStats {
        ReasonerStats {
            consistency_checks: self.consistency_checks.load(Ordering::Relaxed),
            subsumption_checks: self.subsumption_checks.load(Ordering::Relaxed),
        }
    }

    fn run(&self, kb: &ClassicalKb, extra: Option<(IndividualName, Concept)>) -> Result<bool, ClassicalError> {
        tableau::satisfiable(kb, extra, self.node_budget)
    }

    /// True iff `kb` has a model.
    pub fn is_consistent(&self, kb: &ClassicalKb) -> Result<bool, ClassicalError> {
        self.consistency_checks.fetch_add(1, Ordering::Relaxed);
        self.run(kb, None)
    }

    /// True iff `c` has a nonempty extension in some model of `kb`,
    /// i.e. `kb ⊭ c ⊑ ⊥`. Counted as a consistency check.
    pub fn is_satisfiable(&self, kb: &ClassicalKb, c: &Concept) -> Result<bool, ClassicalError> {
        self.consistency_checks.fetch_add(1, Ordering::Relaxed);
        let x = kb.fresh_individual("_x");
        self.run(kb, Some((x, lower(c))))
    }

    /// True iff every model of `kb` satisfies `c ⊑ d`.
    pub fn entails_subsumption(
        &self,
        kb: &ClassicalKb,
        c: &Concept,
        d: &Concept,
    ) -> Result<bool, ClassicalError> {
        self.subsumption_checks.fetch_add(1, Ordering::Relaxed);
        let x = kb.fresh_individual("_x");
        let test = Concept::and(lower(c), Concept::not(lower(d)));
        Ok(!self.run(kb, Some((x, test)))?)
    }

    /// True iff every model of `kb` satisfies the assertion. Counted as a
    /// consistency check, since it is decided by one.
    pub fn entails_assertion(&self, kb: &ClassicalKb, a: &Assertion) -> Result<bool, ClassicalError> {
        self.consistency_checks.fetch_add(1, Ordering::Relaxed);
        match a {
            Assertion::Concept {
                individual,
                concept,
            } => {
                let negated = Concept::not(lower(concept));
                Ok(!self.run(kb, Some((individual.clone(), negated)))?)
            }
            // ALC cannot negate role atoms; a forest model never adds unasserted edges
            // between named individuals.
            Assertion::Role { .. } => {
                if kb.abox.contains(a) {
                    Ok(true)
                } else {
                    Ok(!self.run(kb, None)?)
                }
            }
        }
    }

    /// Classical entailment of a strict inclusion or an assertion.
    pub fn entails(&self, kb: &ClassicalKb, axiom: &Axiom) -> Result<bool, ClassicalError> {
        match axiom {
            Axiom::StrictCI { lhs, rhs } => self.entails_subsumption(kb, lhs, rhs),
            Axiom::ConceptAssertion {
                individual,
                concept,
            } => self.entails_assertion(
                kb,
                &Assertion::Concept {
                    individual: individual.clone(),
                    concept: concept.clone(),
                },
            ),
            Axiom::RoleAssertion {
                subject,
                object,
                role,
            } => self.entails_assertion(
                kb,
                &Assertion::Role {
                    subject: subject.clone(),
                    role: role.clone(),
                    object: object.clone(),
                },
            ),
            Axiom::DefeasibleCI(_) => Err(ClassicalError::Defeasible),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_concept, parse_kb};

    fn kb(src: &str) -> ClassicalKb {
        let parsed = parse_kb(src).unwrap();
        ClassicalKb::from_axioms(parsed.strong()).unwrap()
    }

    fn c(src: &str) -> Concept {
        parse_concept(src).unwrap()
    }

    const SITUS: &str = "SI <= Human\nSI <= some has_heart.RH\nsome has_heart.LH <= not some has_heart.RH\n";

    #[test]
    fn consistency_examples() {
        let r = Reasoner::new();
        assert!(!r.is_consistent(&kb("a : A and not A")).unwrap());
        assert!(r.is_consistent(&kb(SITUS)).unwrap());
        assert!(!r.is_consistent(&kb("Top <= Bot\na : Top")).unwrap());
        // domains are non-empty
        assert!(!r.is_consistent(&kb("Top <= Bot")).unwrap());
        assert!(r.is_consistent(&ClassicalKb::new()).unwrap());
    }

    #[test]
    fn subsumption_examples() {
        let r = Reasoner::new();
        let s = kb(SITUS);
        assert!(r.entails_subsumption(&s, &c("SI"), &c("some has_heart.RH")).unwrap());
        assert!(r.entails_subsumption(&s, &c("SI"), &c("not some has_heart.LH")).unwrap());
        assert!(!r.entails_subsumption(&s, &c("Human"), &c("SI")).unwrap());
        let empty = ClassicalKb::new();
        assert!(r.entails_subsumption(&empty, &c("A and B"), &c("A")).unwrap());
        assert!(!r.entails_subsumption(&empty, &c("A"), &c("A and B")).unwrap());
    }

    #[test]
    fn assertion_examples() {
        let r = Reasoner::new();
        let b = Assertion::Concept {
            individual: "a".into(),
            concept: c("B"),
        };
        assert!(r.entails_assertion(&kb("a : A\nA <= B"), &b).unwrap());
        assert!(!r.entails_assertion(&kb("a : A"), &b).unwrap());
        assert!(r.entails_assertion(&kb("a : A and not A"), &b).unwrap());

        let role = Assertion::Role {
            subject: "a".into(),
            role: "R".into(),
            object: "b".into(),
        };
        assert!(r.entails_assertion(&kb("(a, b) : R"), &role).unwrap());
        assert!(!r.entails_assertion(&kb("a : some R.B\nb : B"), &role).unwrap());
    }

    #[test]
    fn role_assertions_carry_universals() {
        let r = Reasoner::new();
        let k = kb("(a, b) : R\na : only R.B\nb : not B");
        assert!(!r.is_consistent(&k).unwrap());
    }

    #[test]
    fn cyclic_tbox_terminates() {
        let r = Reasoner::new();
        let k = kb("A <= some R.A\na : A");
        assert!(r.is_consistent(&k).unwrap());
        let k = kb("Top <= some R.Top and only R.(B or C)\nB <= not C\na : Top");
        assert!(r.is_consistent(&k).unwrap());
        let k = kb("A <= some R.A and only R.(not A or B)\nB <= Bot\na : A");
        assert!(!r.is_consistent(&k).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = Reasoner::with_node_budget(2);
        let k = kb("A <= some R.B\nB <= some R.C\nC <= some R.D\na : A");
        assert_eq!(
            r.is_consistent(&k),
            Err(ClassicalError::ResourceLimit { budget: 2 })
        );
    }

    #[test]
    fn stats_count_calls() {
        let r = Reasoner::new();
        assert_eq!(r.stats(), ReasonerStats::default());
        r.entails_subsumption(&ClassicalKb::new(), &c("A"), &c("A")).unwrap();
        assert_eq!(r.stats().subsumption_checks, 1);
        assert_eq!(r.stats().consistency_checks, 0);
        r.is_satisfiable(&ClassicalKb::new(), &c("A")).unwrap();
        assert_eq!(r.stats().consistency_checks, 1);
    }

    #[test]
    fn normality_is_lowered() {
        let k = ClassicalKb::from_axioms(&parse_kb("N(A) <= A\na : N(A)").unwrap().strong().to_vec())
            .unwrap();
        let r = Reasoner::new();
        let a = Assertion::Concept {
            individual: "a".into(),
            concept: c("A"),
        };
        assert!(r.entails_assertion(&k, &a).unwrap());
        assert!(k.signature().concepts.iter().any(crate::model::is_normal_atom));
    }
}
