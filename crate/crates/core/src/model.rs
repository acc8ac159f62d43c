//! Immutable data model for ALC concepts extended with normality concepts,
//! axioms and knowledge bases, plus the structural utilities the reasoners
//! share (negation normal form, signatures, normality collection, lowering).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            /// Panics if `token` is empty.
            pub fn new(token: impl Into<String>) -> Self {
                let token = token.into();
                assert!(!token.is_empty(), concat!(stringify!($name), " must not be empty"));
                Self(token)
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }
    };
}

name_type!(
    /// Atomic concept name.
    ConceptName
);
name_type!(
    /// Role name.
    RoleName
);
name_type!(
    /// Individual name.
    IndividualName
);

/// An ALC concept term, extended with the normality constructor `N(C)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(ConceptName),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Exists(RoleName, Box<Concept>),
    Forall(RoleName, Box<Concept>),
    Normal(Box<Concept>),
}

impl Concept {
    pub fn atomic(name: impl Into<String>) -> Concept {
        Concept::Atomic(ConceptName::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Concept {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Concept {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(role: impl Into<String>, c: Concept) -> Concept {
        Concept::Exists(RoleName::new(role), Box::new(c))
    }

    pub fn forall(role: impl Into<String>, c: Concept) -> Concept {
        Concept::Forall(RoleName::new(role), Box::new(c))
    }

    pub fn normal(c: Concept) -> Concept {
        Concept::Normal(Box::new(c))
    }

    /// Left-nested conjunction of `parts`; `Top` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Concept>) -> Concept {
        parts
            .into_iter()
            .reduce(Concept::and)
            .unwrap_or(Concept::Top)
    }

    /// True iff a `Normal` constructor occurs anywhere in the term.
    pub fn mentions_normality(&self) -> bool {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => false,
            Concept::Normal(_) => true,
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) => {
                c.mentions_normality()
            }
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.mentions_normality() || b.mentions_normality()
            }
        }
    }

    /// Nesting depth of constructors; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => 0,
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) | Concept::Normal(c) => {
                1 + c.depth()
            }
            Concept::And(a, b) | Concept::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn collect_normal(&self, out: &mut BTreeSet<Concept>) {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atomic(_) => {}
            Concept::Normal(inner) => {
                out.insert(self.clone());
                inner.collect_normal(out);
            }
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) => c.collect_normal(out),
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.collect_normal(out);
                b.collect_normal(out);
            }
        }
    }

    fn collect_names(&self, sig: &mut Signature) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Atomic(n) => {
                sig.concepts.insert(n.clone());
            }
            Concept::Not(c) | Concept::Normal(c) => c.collect_names(sig),
            Concept::Exists(r, c) | Concept::Forall(r, c) => {
                sig.roles.insert(r.clone());
                c.collect_names(sig);
            }
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.collect_names(sig);
                b.collect_names(sig);
            }
        }
    }
}

/// Negation normal form. `Not` ends up only directly above atomic or
/// normality subterms; normality concepts are opaque for negation pushing but
/// their arguments are normalized recursively.
pub fn nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atomic(_) => c.clone(),
        Concept::Normal(inner) => Concept::normal(nnf(inner)),
        Concept::And(a, b) => Concept::and(nnf(a), nnf(b)),
        Concept::Or(a, b) => Concept::or(nnf(a), nnf(b)),
        Concept::Exists(r, d) => Concept::Exists(r.clone(), Box::new(nnf(d))),
        Concept::Forall(r, d) => Concept::Forall(r.clone(), Box::new(nnf(d))),
        Concept::Not(inner) => negated_nnf(inner),
    }
}

fn negated_nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top => Concept::Bottom,
        Concept::Bottom => Concept::Top,
        Concept::Atomic(_) => Concept::not(c.clone()),
        Concept::Normal(inner) => Concept::not(Concept::normal(nnf(inner))),
        Concept::Not(inner) => nnf(inner),
        Concept::And(a, b) => Concept::or(negated_nnf(a), negated_nnf(b)),
        Concept::Or(a, b) => Concept::and(negated_nnf(a), negated_nnf(b)),
        Concept::Exists(r, d) => Concept::Forall(r.clone(), Box::new(negated_nnf(d))),
        Concept::Forall(r, d) => Concept::Exists(r.clone(), Box::new(negated_nnf(d))),
    }
}

/// A classical ABox statement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assertion {
    Concept {
        individual: IndividualName,
        concept: Concept,
    },
    Role {
        subject: IndividualName,
        role: RoleName,
        object: IndividualName,
    },
}

/// Strict or defeasible inclusion, or an assertion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    StrictCI {
        lhs: Concept,
        rhs: Concept,
    },
    DefeasibleCI(DefeasibleCI),
    ConceptAssertion {
        individual: IndividualName,
        concept: Concept,
    },
    RoleAssertion {
        subject: IndividualName,
        object: IndividualName,
        role: RoleName,
    },
}

impl Axiom {
    pub fn strict(lhs: Concept, rhs: Concept) -> Axiom {
        Axiom::StrictCI { lhs, rhs }
    }

    pub fn instance(individual: impl Into<String>, concept: Concept) -> Axiom {
        Axiom::ConceptAssertion {
            individual: IndividualName::new(individual),
            concept,
        }
    }

    pub fn role(
        subject: impl Into<String>,
        role: impl Into<String>,
        object: impl Into<String>,
    ) -> Axiom {
        Axiom::RoleAssertion {
            subject: IndividualName::new(subject),
            object: IndividualName::new(object),
            role: RoleName::new(role),
        }
    }

    pub fn is_defeasible(&self) -> bool {
        matches!(self, Axiom::DefeasibleCI(_))
    }

    /// Concepts occurring at the top level of the axiom.
    pub fn concepts(&self) -> Vec<&Concept> {
        match self {
            Axiom::StrictCI { lhs, rhs } => vec![lhs, rhs],
            Axiom::DefeasibleCI(d) => vec![&d.lhs, &d.rhs],
            Axiom::ConceptAssertion { concept, .. } => vec![concept],
            Axiom::RoleAssertion { .. } => vec![],
        }
    }

    pub fn mentions_normality(&self) -> bool {
        self.concepts().iter().any(|c| c.mentions_normality())
    }

    fn collect_names(&self, sig: &mut Signature) {
        for c in self.concepts() {
            c.collect_names(sig);
        }
        match self {
            Axiom::ConceptAssertion { individual, .. } => {
                sig.individuals.insert(individual.clone());
            }
            Axiom::RoleAssertion {
                subject,
                object,
                role,
            } => {
                sig.individuals.insert(subject.clone());
                sig.individuals.insert(object.clone());
                sig.roles.insert(role.clone());
            }
            _ => {}
        }
    }
}

/// Defeasible inclusion `lhs <~ rhs`, optionally carrying an explicit rank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DefeasibleCI {
    pub lhs: Concept,
    pub rhs: Concept,
    pub rank: Option<u32>,
}

impl DefeasibleCI {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Self {
            lhs,
            rhs,
            rank: None,
        }
    }

    pub fn ranked(lhs: Concept, rhs: Concept, rank: u32) -> Self {
        Self {
            lhs,
            rhs,
            rank: Some(rank),
        }
    }

    /// Premise.
    pub fn pre(&self) -> &Concept {
        &self.lhs
    }

    /// Consequence.
    pub fn con(&self) -> &Concept {
        &self.rhs
    }
}

/// Concept, role and individual names occurring in some syntax.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptName>,
    pub roles: BTreeSet<RoleName>,
    pub individuals: BTreeSet<IndividualName>,
}

impl Signature {
    pub fn of_axioms<'a>(axioms: impl IntoIterator<Item = &'a Axiom>) -> Signature {
        let mut sig = Signature::default();
        for a in axioms {
            a.collect_names(&mut sig);
        }
        sig
    }

    pub fn of_concept(c: &Concept) -> Signature {
        let mut sig = Signature::default();
        c.collect_names(&mut sig);
        sig
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
        self.individuals.extend(other.individuals.iter().cloned());
    }
}

/// A knowledge base: the strong part `S` and the defeasible part `D`.
///
/// Both parts keep input order and drop exact duplicates. Defeasible
/// inclusions can only live in `defeasible`, so the two parts are disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    strong: Vec<Axiom>,
    defeasible: Vec<DefeasibleCI>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut kb = Self::new();
        for a in axioms {
            kb.add(a);
        }
        kb
    }

    /// Adds `axiom` to the matching part. Returns false for duplicates.
    pub fn add(&mut self, axiom: Axiom) -> bool {
        match axiom {
            Axiom::DefeasibleCI(d) => {
                if self.defeasible.contains(&d) {
                    return false;
                }
                self.defeasible.push(d);
            }
            other => {
                if self.strong.contains(&other) {
                    return false;
                }
                self.strong.push(other);
            }
        }
        true
    }

    pub fn with(&self, axiom: Axiom) -> Self {
        let mut kb = self.clone();
        kb.add(axiom);
        kb
    }

    pub fn strong(&self) -> &[Axiom] {
        &self.strong
    }

    pub fn defeasible(&self) -> &[DefeasibleCI] {
        &self.defeasible
    }

    /// Strong axioms followed by defeasible ones, in input order.
    pub fn axioms(&self) -> impl Iterator<Item = Axiom> + '_ {
        self.strong
            .iter()
            .cloned()
            .chain(self.defeasible.iter().cloned().map(Axiom::DefeasibleCI))
    }

    pub fn is_empty(&self) -> bool {
        self.strong.is_empty() && self.defeasible.is_empty()
    }

    /// True iff `Normal` occurs nowhere in the knowledge base.
    pub fn is_normality_free(&self) -> bool {
        !self.axioms().any(|a| a.mentions_normality())
    }
}

/// Names occurring syntactically in `kb`.
pub fn signature(kb: &KnowledgeBase) -> Signature {
    let axioms: Vec<Axiom> = kb.axioms().collect();
    Signature::of_axioms(&axioms)
}

/// A set of normality concepts; every member has outermost constructor `Normal`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalitySet(BTreeSet<Concept>);

impl NormalitySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics if `c` is not a normality concept.
    pub fn insert(&mut self, c: Concept) -> bool {
        assert!(
            matches!(c, Concept::Normal(_)),
            "normality set members must be N(...) concepts"
        );
        self.0.insert(c)
    }

    pub fn contains(&self, c: &Concept) -> bool {
        self.0.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Concept> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_superset(&self, other: &NormalitySet) -> bool {
        self.0.is_superset(&other.0)
    }

    fn absorb(&mut self, c: &Concept) {
        c.collect_normal(&mut self.0);
    }
}

impl FromIterator<Concept> for NormalitySet {
    fn from_iter<T: IntoIterator<Item = Concept>>(iter: T) -> Self {
        let mut set = NormalitySet::new();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

/// Every `Normal(...)` subterm occurring in the knowledge base or the query.
pub fn normality_concepts(kb: &KnowledgeBase, query: &Axiom) -> NormalitySet {
    let mut set = NormalitySet::new();
    for a in kb.axioms().chain(std::iter::once(query.clone())) {
        for c in a.concepts() {
            set.absorb(c);
        }
    }
    set
}

/// True iff no defeasible premise contains a normality concept.
pub fn is_canonical(kb: &KnowledgeBase) -> bool {
    kb.defeasible().iter().all(|d| !d.lhs.mentions_normality())
}

/// Prefix shared by every concept name that stands for a normality concept.
/// Parentheses cannot occur in user identifiers, so lowered names never clash.
const NORMAL_ATOM_PREFIX: &str = "N(";

/// Reserved atomic name standing for `N(arg)`. Syntactically equal arguments
/// map to the same name.
pub fn normal_atom_name(arg: &Concept) -> ConceptName {
    ConceptName::new(format!(
        "{NORMAL_ATOM_PREFIX}{})",
        crate::parser::print_concept(arg)
    ))
}

/// True iff `name` was produced by [`normal_atom_name`].
pub fn is_normal_atom(name: &ConceptName) -> bool {
    name.as_str().starts_with(NORMAL_ATOM_PREFIX)
}

/// Replaces every normality concept by its reserved atomic name.
pub fn lower(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atomic(_) => c.clone(),
        Concept::Normal(arg) => Concept::Atomic(normal_atom_name(arg)),
        Concept::Not(d) => Concept::not(lower(d)),
        Concept::And(a, b) => Concept::and(lower(a), lower(b)),
        Concept::Or(a, b) => Concept::or(lower(a), lower(b)),
        Concept::Exists(r, d) => Concept::Exists(r.clone(), Box::new(lower(d))),
        Concept::Forall(r, d) => Concept::Forall(r.clone(), Box::new(lower(d))),
    }
}

/// Lowers a non-defeasible axiom; `None` for defeasible inclusions.
pub fn lower_axiom(a: &Axiom) -> Option<Axiom> {
    Some(match a {
        Axiom::StrictCI { lhs, rhs } => Axiom::StrictCI {
            lhs: lower(lhs),
            rhs: lower(rhs),
        },
        Axiom::ConceptAssertion {
            individual,
            concept,
        } => Axiom::ConceptAssertion {
            individual: individual.clone(),
            concept: lower(concept),
        },
        Axiom::RoleAssertion { .. } => a.clone(),
        Axiom::DefeasibleCI(_) => return None,
    })
}

/// Non-fatal observations about a knowledge base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// A defeasible premise mentions a normality concept.
    NonCanonical { index: usize },
    /// `N(...)` nested inside another `N(...)`.
    NestedNormality { axiom: Axiom },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NonCanonical { index } => write!(
                f,
                "defeasible inclusion #{} has a normality concept in its premise (KB is not canonical)",
                index + 1
            ),
            Warning::NestedNormality { axiom } => write!(
                f,
                "nested normality concept in `{}`",
                crate::parser::print_axiom(axiom)
            ),
        }
    }
}

fn has_nested_normality(c: &Concept, inside: bool) -> bool {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atomic(_) => false,
        Concept::Normal(d) => inside || has_nested_normality(d, true),
        Concept::Not(d) | Concept::Exists(_, d) | Concept::Forall(_, d) => {
            has_nested_normality(d, inside)
        }
        Concept::And(a, b) | Concept::Or(a, b) => {
            has_nested_normality(a, inside) || has_nested_normality(b, inside)
        }
    }
}

/// Validation never rejects; it reports non-canonical premises and nested normality.
pub fn validate(kb: &KnowledgeBase) -> Vec<Warning> {
    let mut out = Vec::new();
    for (index, d) in kb.defeasible().iter().enumerate() {
        if d.lhs.mentions_normality() {
            out.push(Warning::NonCanonical { index });
        }
    }
    for a in kb.axioms() {
        if a.concepts().iter().any(|c| has_nested_normality(c, false)) {
            out.push(Warning::NestedNormality { axiom: a });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Concept {
        Concept::atomic(n)
    }

    fn situs_inversus() -> KnowledgeBase {
        let lh = Concept::exists("has_heart", a("LH"));
        let rh = Concept::exists("has_heart", a("RH"));
        KnowledgeBase::from_axioms([
            Axiom::DefeasibleCI(DefeasibleCI::new(a("Human"), lh.clone())),
            Axiom::strict(a("SI"), a("Human")),
            Axiom::strict(a("SI"), rh.clone()),
            Axiom::strict(lh, Concept::not(rh)),
        ])
    }

    #[test]
    fn nnf_de_morgan_and_duality() {
        assert_eq!(
            nnf(&Concept::not(Concept::and(a("A"), a("B")))),
            Concept::or(Concept::not(a("A")), Concept::not(a("B")))
        );
        assert_eq!(
            nnf(&Concept::not(Concept::exists("R", a("A")))),
            Concept::forall("R", Concept::not(a("A")))
        );
    }

    #[test]
    fn nnf_keeps_normality_opaque() {
        let c = Concept::not(Concept::normal(Concept::exists("R", a("A"))));
        assert_eq!(nnf(&c), c);
        let c = Concept::normal(Concept::not(Concept::not(a("A"))));
        assert_eq!(nnf(&c), Concept::normal(a("A")));
    }

    #[test]
    fn signature_of_situs_inversus() {
        let sig = signature(&situs_inversus());
        let names: Vec<_> = sig.concepts.iter().map(|n| n.as_str()).collect();
        assert_eq!(names, ["Human", "LH", "RH", "SI"]);
        assert_eq!(sig.roles.len(), 1);
        assert!(sig.individuals.is_empty());
        assert_eq!(signature(&KnowledgeBase::new()), Signature::default());

        let sig = signature(&KnowledgeBase::from_axioms([Axiom::instance("a", a("A"))]));
        assert_eq!(sig.concepts.len(), 1);
        assert!(sig.roles.is_empty());
        assert_eq!(sig.individuals.iter().next().unwrap().as_str(), "a");
    }

    #[test]
    fn normality_concepts_union_reading() {
        let kb = situs_inversus();
        let q = Axiom::strict(
            Concept::normal(a("Human")),
            Concept::exists("has_heart", a("LH")),
        );
        let sigma = normality_concepts(&kb, &q);
        assert_eq!(sigma.iter().collect::<Vec<_>>(), [&Concept::normal(a("Human"))]);

        let q = Axiom::strict(Concept::normal(a("SI")), a("SI"));
        let sigma = normality_concepts(&kb, &q);
        assert_eq!(sigma.iter().collect::<Vec<_>>(), [&Concept::normal(a("SI"))]);

        assert!(normality_concepts(&kb, &Axiom::strict(a("SI"), a("Human"))).is_empty());
    }

    #[test]
    fn nested_normality_collected() {
        let kb = KnowledgeBase::new();
        let q = Axiom::strict(Concept::normal(Concept::normal(a("A"))), a("B"));
        assert_eq!(normality_concepts(&kb, &q).len(), 2);
    }

    #[test]
    fn canonical_checks() {
        assert!(is_canonical(&situs_inversus()));
        assert!(is_canonical(&KnowledgeBase::new()));
        let kb = KnowledgeBase::from_axioms([Axiom::DefeasibleCI(DefeasibleCI::new(
            Concept::normal(a("A")),
            a("B"),
        ))]);
        assert!(!is_canonical(&kb));
        assert_eq!(validate(&kb), vec![Warning::NonCanonical { index: 0 }]);
    }

    #[test]
    fn duplicates_are_dropped() {
        let mut kb = KnowledgeBase::new();
        assert!(kb.add(Axiom::strict(a("A"), a("B"))));
        assert!(!kb.add(Axiom::strict(a("A"), a("B"))));
        assert_eq!(kb.strong().len(), 1);
    }

    #[test]
    fn lowering_is_syntactic() {
        let n1 = lower(&Concept::normal(Concept::and(a("A"), a("B"))));
        let n2 = lower(&Concept::normal(Concept::and(a("A"), a("B"))));
        let n3 = lower(&Concept::normal(Concept::and(a("B"), a("A"))));
        assert_eq!(n1, n2);
        assert_ne!(n1, n3);
        match n1 {
            Concept::Atomic(n) => assert!(is_normal_atom(&n)),
            _ => panic!("expected atom"),
        }
    }
}
