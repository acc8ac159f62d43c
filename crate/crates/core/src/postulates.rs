//! Checkers for the KLM postulates.
//!
//! Meta-level rules ([`Rule::Ref`] to [`Rule::Rw`]) relate entailments from a
//! knowledge base and from its extensions by a classical axiom. Internalized
//! rules ([`Rule::RefN`] to [`Rule::RmN`]) are stated with normality concepts
//! inside the queries. The meta-level OR and RM rules need disjunctions and
//! negations of axioms, which ALC cannot express, so they are not provided.
//!
//! [`generate_random_kb`] and [`sweep`] run the checkers over seeded random
//! knowledge bases.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classical::ClassicalKb;
use crate::defeasible::{DefeasibleError, Engine, Options, PreparedKb};
use crate::model::{
    is_canonical, normality_concepts, signature, Axiom, Concept, DefeasibleCI,
    IndividualName, KnowledgeBase, NormalitySet,
};
use crate::parser::print_axiom;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PostulateError {
    #[error(transparent)]
    Defeasible(#[from] DefeasibleError),
    #[error("{rule} requires a canonical knowledge base")]
    NotCanonical { rule: Rule },
    #[error("{rule} requires a knowledge base without inconsistent prototypes; {prototype} is inconsistent")]
    Conflict { rule: Rule, prototype: String },
    #[error("{rule} requires a knowledge base in which N does not occur")]
    NormalityInKb { rule: Rule },
    #[error("{rule} is not a {expected} rule")]
    WrongKind { rule: Rule, expected: &'static str },
}

pub type Result<T, E = PostulateError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Ref,
    Ct,
    Cm,
    Lle,
    Rw,
    RefN,
    CtN,
    CmN,
    LleN,
    RwN,
    OrN,
    RmN,
}

impl Rule {
    pub const META: [Rule; 5] = [Rule::Ref, Rule::Ct, Rule::Cm, Rule::Lle, Rule::Rw];
    pub const INTERNALIZED: [Rule; 7] = [
        Rule::RefN,
        Rule::CtN,
        Rule::CmN,
        Rule::LleN,
        Rule::RwN,
        Rule::OrN,
        Rule::RmN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ref => "REF",
            Rule::Ct => "CT",
            Rule::Cm => "CM",
            Rule::Lle => "LLE",
            Rule::Rw => "RW",
            Rule::RefN => "REF_N",
            Rule::CtN => "CT_N",
            Rule::CmN => "CM_N",
            Rule::LleN => "LLE_N",
            Rule::RwN => "RW_N",
            Rule::OrN => "OR_N",
            Rule::RmN => "RM_N",
        }
    }

    pub fn is_meta(self) -> bool {
        Rule::META.contains(&self)
    }

    /// Internalized rules that only hold when `N` does not occur in the KB.
    pub fn requires_normality_free(self) -> bool {
        matches!(
            self,
            Rule::CtN | Rule::CmN | Rule::LleN | Rule::OrN | Rule::RmN
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        Rule::META
            .iter()
            .chain(Rule::INTERNALIZED.iter())
            .copied()
            .find(|r| r.name() == wanted)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

/// One premise of a rule instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Judgement {
    /// `KB ∪ extra |≈ query`
    Entails { extra: Vec<Axiom>, query: Axiom },
    /// `KB ∪ extra ⊭≈ query`
    NotEntails { extra: Vec<Axiom>, query: Axiom },
    /// The axiom is one of the KB's strong axioms.
    Member(Axiom),
    /// `hypotheses ⊨ goal` classically, adding the strong part of the KB if
    /// `with_strong` is set.
    Classical {
        with_strong: bool,
        hypotheses: Vec<Axiom>,
        goal: Axiom,
    },
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn kb(extra: &[Axiom]) -> String {
            let mut s = String::from("KB");
            for a in extra {
                s.push_str(&format!(" + {{{}}}", print_axiom(a)));
            }
            s
        }
        match self {
            Judgement::Entails { extra, query } => {
                write!(f, "{} |~ {}", kb(extra), print_axiom(query))
            }
            Judgement::NotEntails { extra, query } => {
                write!(f, "{} does not |~ {}", kb(extra), print_axiom(query))
            }
            Judgement::Member(a) => write!(f, "{} in KB", print_axiom(a)),
            Judgement::Classical {
                with_strong,
                hypotheses,
                goal,
            } => {
                let mut hyps: Vec<String> = hypotheses.iter().map(print_axiom).collect();
                if *with_strong {
                    hyps.insert(0, "S".into());
                }
                write!(f, "{{{}}} |= {}", hyps.join(", "), print_axiom(goal))
            }
        }
    }
}

/// A rule schema instantiated with concrete axioms or concepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostulateInstance {
    pub name: Rule,
    pub premises: Vec<Judgement>,
    /// Axioms added to the KB before asking the conclusion.
    pub extra: Vec<Axiom>,
    pub conclusion: Axiom,
}

impl PostulateInstance {
    pub fn conclusion_judgement(&self) -> Judgement {
        Judgement::Entails {
            extra: self.extra.clone(),
            query: self.conclusion.clone(),
        }
    }
}

impl fmt::Display for PostulateInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "{}: {} => {}",
            self.name,
            premises.join("; "),
            self.conclusion_judgement()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub kb: KnowledgeBase,
    pub instance: PostulateInstance,
    pub failing_query: Axiom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostulateVerdict {
    pub holds: bool,
    /// Whether every premise was satisfied, so the conclusion was actually tested.
    pub premises_hold: bool,
    pub counterexample: Option<Counterexample>,
}

// ---------------------------------------------------------------------------
// instances

/// `KB |≈ α` where `α` is a strong axiom of the KB.
pub fn ref_instance(alpha: Axiom) -> PostulateInstance {
    PostulateInstance {
        name: Rule::Ref,
        premises: vec![Judgement::Member(alpha.clone())],
        extra: vec![],
        conclusion: alpha,
    }
}

pub fn ct_instance(alpha: Axiom, gamma: Axiom) -> PostulateInstance {
    PostulateInstance {
        name: Rule::Ct,
        premises: vec![
            entails(vec![], alpha.clone()),
            entails(vec![alpha], gamma.clone()),
        ],
        extra: vec![],
        conclusion: gamma,
    }
}

pub fn cm_instance(alpha: Axiom, gamma: Axiom) -> PostulateInstance {
    PostulateInstance {
        name: Rule::Cm,
        premises: vec![entails(vec![], alpha.clone()), entails(vec![], gamma.clone())],
        extra: vec![alpha],
        conclusion: gamma,
    }
}

pub fn lle_instance(alpha: Axiom, beta: Axiom, gamma: Axiom) -> PostulateInstance {
    PostulateInstance {
        name: Rule::Lle,
        premises: vec![
            classical(false, vec![alpha.clone()], beta.clone()),
            classical(false, vec![beta.clone()], alpha.clone()),
            entails(vec![alpha], gamma.clone()),
        ],
        extra: vec![beta],
        conclusion: gamma,
    }
}

pub fn rw_instance(alpha: Axiom, gamma: Axiom) -> PostulateInstance {
    PostulateInstance {
        name: Rule::Rw,
        premises: vec![
            classical(false, vec![alpha.clone()], gamma.clone()),
            entails(vec![], alpha),
        ],
        extra: vec![],
        conclusion: gamma,
    }
}

/// Instantiates an internalized rule. Concepts a rule does not use are ignored.
pub fn internalized_instance(rule: Rule, c: &Concept, d: &Concept, e: &Concept) -> PostulateInstance {
    let n = |x: Concept| Concept::normal(x);
    let sub = |l: Concept, r: Concept| Axiom::strict(l, r);
    let (c, d, e) = (c.clone(), d.clone(), e.clone());
    let (premises, conclusion) = match rule {
        Rule::RefN => (vec![], sub(n(c.clone()), c)),
        Rule::CtN => (
            vec![
                entails(vec![], sub(n(c.clone()), d.clone())),
                entails(vec![], sub(n(Concept::and(c.clone(), d)), e.clone())),
            ],
            sub(n(c), e),
        ),
        Rule::CmN => (
            vec![
                entails(vec![], sub(n(c.clone()), d.clone())),
                entails(vec![], sub(n(c.clone()), e.clone())),
            ],
            sub(n(Concept::and(c, d)), e),
        ),
        Rule::LleN => (
            vec![
                entails(vec![], sub(n(c.clone()), e.clone())),
                classical(true, vec![], sub(c.clone(), d.clone())),
                classical(true, vec![], sub(d.clone(), c)),
            ],
            sub(n(d), e),
        ),
        Rule::RwN => (
            vec![
                entails(vec![], sub(n(c.clone()), d.clone())),
                classical(true, vec![], sub(d, e.clone())),
            ],
            sub(n(c), e),
        ),
        Rule::OrN => (
            vec![
                entails(vec![], sub(n(c.clone()), e.clone())),
                entails(vec![], sub(n(d.clone()), e.clone())),
            ],
            sub(n(Concept::or(c, d)), e),
        ),
        Rule::RmN => (
            vec![
                entails(vec![], sub(n(c.clone()), e.clone())),
                Judgement::NotEntails {
                    extra: vec![],
                    query: sub(n(c.clone()), Concept::not(d.clone())),
                },
            ],
            sub(n(Concept::and(c, d)), e),
        ),
        _ => unreachable!("meta rule {rule} has no concept instance"),
    };
    PostulateInstance {
        name: rule,
        premises,
        extra: vec![],
        conclusion,
    }
}

fn entails(extra: Vec<Axiom>, query: Axiom) -> Judgement {
    Judgement::Entails { extra, query }
}

fn classical(with_strong: bool, hypotheses: Vec<Axiom>, goal: Axiom) -> Judgement {
    Judgement::Classical {
        with_strong,
        hypotheses,
        goal,
    }
}

// ---------------------------------------------------------------------------
// evaluation

struct Variant {
    prepared: PreparedKb,
    reductions: HashMap<NormalitySet, ClassicalKb>,
    answers: HashMap<Axiom, bool>,
}

/// Answers judgements about one knowledge base, caching reductions per
/// normality set and answers per query. The KB itself is never changed.
pub struct Oracle<'a> {
    engine: &'a Engine,
    kb: &'a KnowledgeBase,
    variants: HashMap<Vec<Axiom>, Variant>,
    classical: HashMap<(bool, Vec<Axiom>, Axiom), bool>,
}

impl<'a> Oracle<'a> {
    pub fn new(engine: &'a Engine, kb: &'a KnowledgeBase) -> Self {
        Self {
            engine,
            kb,
            variants: HashMap::new(),
            classical: HashMap::new(),
        }
    }

    pub fn kb(&self) -> &KnowledgeBase {
        self.kb
    }

    /// `KB ∪ extra |≈ query`, with the same answer as [`Engine::n_entails`].
    pub fn n_entails(&mut self, extra: &[Axiom], query: &Axiom) -> Result<bool> {
        let engine = self.engine;
        if engine.options().assume_nonempty_prototypes {
            let kb = extend(self.kb, extra);
            return Ok(engine.n_entails(&kb, query)?.entailed);
        }
        if !self.variants.contains_key(extra) {
            let kb = extend(self.kb, extra);
            let prepared = engine.prepare(&kb)?;
            self.variants.insert(
                extra.to_vec(),
                Variant {
                    prepared,
                    reductions: HashMap::new(),
                    answers: HashMap::new(),
                },
            );
        }
        let v = self.variants.get_mut(extra).expect("inserted above");
        if let Some(&b) = v.answers.get(query) {
            return Ok(b);
        }
        if query.is_defeasible() {
            return Err(DefeasibleError::DefeasibleQuery.into());
        }
        let sigma = normality_concepts(&v.prepared.kb, query);
        if !v.reductions.contains_key(&sigma) {
            let r = engine.build_kb_sigma_ordered(
                &v.prepared.kb,
                &sigma,
                &v.prepared.priority,
                &v.prepared.linearization,
            )?;
            v.reductions.insert(sigma.clone(), r.kb_sigma);
        }
        let kb_sigma = &v.reductions[&sigma];
        let b = engine
            .reasoner()
            .entails(kb_sigma, query)
            .map_err(DefeasibleError::from)?;
        v.answers.insert(query.clone(), b);
        Ok(b)
    }

    fn classically(&mut self, with_strong: bool, hyps: &[Axiom], goal: &Axiom) -> Result<bool> {
        let key = (with_strong, hyps.to_vec(), goal.clone());
        if let Some(&b) = self.classical.get(&key) {
            return Ok(b);
        }
        let mut axioms: Vec<&Axiom> = hyps.iter().collect();
        if with_strong {
            axioms.extend(self.kb.strong());
        }
        let kb = ClassicalKb::from_axioms(axioms).map_err(DefeasibleError::from)?;
        let b = self
            .engine
            .reasoner()
            .entails(&kb, goal)
            .map_err(DefeasibleError::from)?;
        self.classical.insert(key, b);
        Ok(b)
    }

    pub fn judge(&mut self, j: &Judgement) -> Result<bool> {
        match j {
            Judgement::Entails { extra, query } => self.n_entails(extra, query),
            Judgement::NotEntails { extra, query } => Ok(!self.n_entails(extra, query)?),
            Judgement::Member(a) => Ok(self.kb.strong().contains(a)),
            Judgement::Classical {
                with_strong,
                hypotheses,
                goal,
            } => self.classically(*with_strong, hypotheses, goal),
        }
    }

    /// Evaluates premises in order, stopping at the first that fails, and
    /// asks the conclusion only if all of them hold.
    pub fn evaluate(&mut self, instance: &PostulateInstance) -> Result<PostulateVerdict> {
        for p in &instance.premises {
            if !self.judge(p)? {
                return Ok(PostulateVerdict {
                    holds: true,
                    premises_hold: false,
                    counterexample: None,
                });
            }
        }
        let holds = self.n_entails(&instance.extra, &instance.conclusion)?;
        Ok(PostulateVerdict {
            holds,
            premises_hold: true,
            counterexample: (!holds).then(|| Counterexample {
                kb: self.kb.clone(),
                instance: instance.clone(),
                failing_query: instance.conclusion.clone(),
            }),
        })
    }
}

fn extend(kb: &KnowledgeBase, extra: &[Axiom]) -> KnowledgeBase {
    let mut out = kb.clone();
    for a in extra {
        out.add(a.clone());
    }
    out
}

/// Checks the precondition of `rule` on `kb`.
///
/// Meta-level rules need a canonical KB. Meta-level rules and the
/// internalized rules other than REF_N and RW_N need a KB without conflicts,
/// that is, no concept name of the signature has an inconsistent prototype.
/// Those internalized rules also need `N` to be absent from the KB.
pub fn precondition(engine: &Engine, kb: &KnowledgeBase, rule: Rule) -> Result<()> {
    if rule.is_meta() && !is_canonical(kb) {
        return Err(PostulateError::NotCanonical { rule });
    }
    if rule.requires_normality_free() && !kb.is_normality_free() {
        return Err(PostulateError::NormalityInKb { rule });
    }
    if rule.is_meta() || rule.requires_normality_free() {
        if let Some(prototype) = first_inconsistent_prototype(engine, kb)? {
            return Err(PostulateError::Conflict { rule, prototype });
        }
    }
    Ok(())
}

/// The first concept name of the signature whose prototype is inconsistent.
pub fn first_inconsistent_prototype(engine: &Engine, kb: &KnowledgeBase) -> Result<Option<String>> {
    let names: Vec<Concept> = signature(kb)
        .concepts
        .into_iter()
        .filter(|n| !crate::model::is_normal_atom(n))
        .map(Concept::Atomic)
        .collect();
    let report = engine.inconsistent_prototypes(kb, Some(&names))?;
    Ok(report.inconsistent.first().map(crate::parser::print_concept))
}

/// Checks one instance of a meta-level rule on `kb`.
pub fn check_meta(
    kb: &KnowledgeBase,
    instance: &PostulateInstance,
    options: &Options,
) -> Result<PostulateVerdict> {
    if !instance.name.is_meta() {
        return Err(PostulateError::WrongKind {
            rule: instance.name,
            expected: "meta-level",
        });
    }
    let engine = Engine::new(options.clone());
    precondition(&engine, kb, instance.name)?;
    Oracle::new(&engine, kb).evaluate(instance)
}

/// Checks one instance of an internalized rule on `kb`.
pub fn check_internalized(
    kb: &KnowledgeBase,
    rule: Rule,
    c: &Concept,
    d: &Concept,
    e: &Concept,
    options: &Options,
) -> Result<PostulateVerdict> {
    if rule.is_meta() {
        return Err(PostulateError::WrongKind {
            rule,
            expected: "internalized",
        });
    }
    let engine = Engine::new(options.clone());
    precondition(&engine, kb, rule)?;
    Oracle::new(&engine, kb).evaluate(&internalized_instance(rule, c, d, e))
}

// ---------------------------------------------------------------------------
// random knowledge bases

const CONCEPT_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
const ROLE_NAMES: [&str; 2] = ["r", "s"];
const INDIVIDUAL_NAMES: [&str; 3] = ["a", "b", "c"];

/// Size parameters for [`generate_random_kb`]. Values beyond the supported
/// bounds (6 concept names, 2 roles, 6 defeasible inclusions, depth 3) are
/// clamped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub concept_names: usize,
    pub roles: usize,
    pub individuals: usize,
    pub strong_inclusions: usize,
    pub assertions: usize,
    pub defeasible: usize,
    pub max_depth: usize,
    /// Forbid `N` anywhere in the KB.
    pub normality_free: bool,
}

impl Default for Profile {
    fn default() -> Self {
        Self {
            concept_names: 5,
            roles: 2,
            individuals: 2,
            strong_inclusions: 4,
            assertions: 2,
            defeasible: 4,
            max_depth: 2,
            normality_free: false,
        }
    }
}

impl Profile {
    pub fn normality_free() -> Self {
        Self {
            normality_free: true,
            ..Self::default()
        }
    }

    fn clamped(&self) -> Profile {
        Profile {
            concept_names: self.concept_names.clamp(1, CONCEPT_NAMES.len()),
            roles: self.roles.clamp(1, ROLE_NAMES.len()),
            individuals: self.individuals.min(INDIVIDUAL_NAMES.len()),
            defeasible: self.defeasible.min(6),
            max_depth: self.max_depth.min(3),
            ..self.clone()
        }
    }
}

struct Generator<'p> {
    rng: ChaCha8Rng,
    profile: &'p Profile,
}

impl Generator<'_> {
    fn name(&mut self) -> Concept {
        let i = self.rng.gen_range(0..self.profile.concept_names);
        Concept::atomic(CONCEPT_NAMES[i])
    }

    fn role(&mut self) -> &'static str {
        ROLE_NAMES[self.rng.gen_range(0..self.profile.roles)]
    }

    fn individual(&mut self) -> &'static str {
        INDIVIDUAL_NAMES[self.rng.gen_range(0..self.profile.individuals)]
    }

    fn concept(&mut self, depth: usize, normality: bool) -> Concept {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return match self.rng.gen_range(0..20) {
                0 => Concept::Top,
                1 => Concept::not(self.name()),
                _ => self.name(),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..if normality { 7 } else { 6 }) {
            0 => Concept::not(self.concept(d, normality)),
            1 => Concept::and(self.concept(d, normality), self.concept(d, normality)),
            2 => Concept::or(self.concept(d, normality), self.concept(d, normality)),
            3 => Concept::exists(self.role(), self.concept(d, normality)),
            4 => Concept::forall(self.role(), self.concept(d, normality)),
            5 => Concept::not(self.name()),
            _ => Concept::normal(self.concept(d, false)),
        }
    }

    fn premise(&mut self) -> Concept {
        if self.rng.gen_bool(0.7) {
            self.name()
        } else {
            Concept::and(self.name(), self.name())
        }
    }
}

/// A seeded random canonical knowledge base over the names `A` to `F`, roles
/// `r`, `s` and individuals `a` to `c`. The same seed and profile always give
/// the same KB.
pub fn generate_random_kb(seed: u64, profile: &Profile) -> KnowledgeBase {
    let profile = profile.clamped();
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        profile: &profile,
    };
    let depth = profile.max_depth;
    let normality = !profile.normality_free;
    let mut kb = KnowledgeBase::new();
    for _ in 0..profile.strong_inclusions {
        let axiom = if g.rng.gen_bool(0.5) {
            Axiom::strict(g.name(), g.name())
        } else {
            let lhs = g.concept(depth.min(1), false);
            Axiom::strict(lhs, g.concept(depth, normality))
        };
        kb.add(axiom);
    }
    if profile.individuals > 0 {
        for _ in 0..profile.assertions {
            let axiom = if g.rng.gen_bool(0.75) {
                let a = g.individual();
                Axiom::instance(a, g.concept(depth.min(1), normality))
            } else {
                let (a, b) = (g.individual(), g.individual());
                Axiom::role(a, g.role(), b)
            };
            kb.add(axiom);
        }
    }
    for _ in 0..profile.defeasible {
        let pre = g.premise();
        let con = g.concept(depth.min(2), normality);
        kb.add(Axiom::DefeasibleCI(DefeasibleCI::new(pre, con)));
    }
    kb
}

// ---------------------------------------------------------------------------
// sweeps

/// Instances of `rule` enumerated for `kb`. Meta rules draw their axioms
/// from inclusions between concept names and assertions of concept names;
/// internalized rules range over concept names and, where a rule takes a
/// right-hand side, their pairwise disjunctions.
pub fn enumerate_instances(
    oracle: &mut Oracle<'_>,
    rule: Rule,
) -> Result<Vec<PostulateInstance>> {
    let kb = oracle.kb().clone();
    let sig = signature(&kb);
    let names: Vec<Concept> = sig
        .concepts
        .iter()
        .filter(|n| !crate::model::is_normal_atom(n))
        .cloned()
        .map(Concept::Atomic)
        .collect();
    let individuals: Vec<IndividualName> = sig.individuals.iter().cloned().collect();
    let mut out = Vec::new();
    if rule.is_meta() {
        let alphas = alpha_pool(&names, &individuals);
        let gammas = gamma_pool(&names, &individuals);
        match rule {
            Rule::Ref => {
                out.extend(kb.strong().iter().cloned().map(ref_instance));
            }
            Rule::Ct | Rule::Cm | Rule::Rw => {
                // only α entailed by the KB make the instances non-vacuous
                let mut entailed = Vec::new();
                for a in &alphas {
                    if entailed.len() == 3 {
                        break;
                    }
                    if !kb.strong().contains(a) && oracle.n_entails(&[], a)? {
                        entailed.push(a.clone());
                    }
                }
                for a in entailed {
                    match rule {
                        Rule::Ct => {
                            out.extend(gammas.iter().map(|g| ct_instance(a.clone(), g.clone())))
                        }
                        Rule::Cm => {
                            out.extend(gammas.iter().map(|g| cm_instance(a.clone(), g.clone())))
                        }
                        _ => out.extend(
                            weakenings(&a, &names)
                                .into_iter()
                                .map(|g| rw_instance(a.clone(), g)),
                        ),
                    }
                }
            }
            Rule::Lle => {
                for a in alphas.iter().take(2) {
                    let beta = equivalent_form(a);
                    out.extend(
                        gammas
                            .iter()
                            .map(|g| lle_instance(a.clone(), beta.clone(), g.clone())),
                    );
                }
            }
            _ => unreachable!(),
        }
        return Ok(out);
    }

    let mut rhs = names.clone();
    for (i, x) in names.iter().enumerate() {
        for y in &names[i + 1..] {
            rhs.push(Concept::or(x.clone(), y.clone()));
        }
    }
    match rule {
        Rule::RefN => {
            for c in &rhs {
                out.push(internalized_instance(rule, c, c, c));
            }
            for (i, x) in names.iter().enumerate() {
                for y in &names[i + 1..] {
                    let c = Concept::and(x.clone(), y.clone());
                    out.push(internalized_instance(rule, &c, &c, &c));
                }
            }
        }
        Rule::LleN => {
            for c in &names {
                let variants = [
                    Concept::and(c.clone(), c.clone()),
                    Concept::not(Concept::not(c.clone())),
                ];
                for d in variants.iter().chain(names.iter()) {
                    for e in &rhs {
                        out.push(internalized_instance(rule, c, d, e));
                    }
                }
            }
        }
        Rule::RwN => {
            for c in &names {
                for d in &names {
                    for e in &rhs {
                        out.push(internalized_instance(rule, c, d, e));
                    }
                }
            }
        }
        _ => {
            for c in &names {
                for d in &names {
                    for e in &rhs {
                        out.push(internalized_instance(rule, c, d, e));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn alpha_pool(names: &[Concept], individuals: &[IndividualName]) -> Vec<Axiom> {
    let mut out = Vec::new();
    for x in names {
        for y in names {
            if x != y {
                out.push(Axiom::strict(x.clone(), y.clone()));
            }
        }
    }
    for a in individuals {
        for x in names {
            out.push(Axiom::ConceptAssertion {
                individual: a.clone(),
                concept: x.clone(),
            });
        }
    }
    out
}

fn gamma_pool(names: &[Concept], individuals: &[IndividualName]) -> Vec<Axiom> {
    let mut out = Vec::new();
    for x in names {
        for y in names {
            if x != y {
                out.push(Axiom::strict(Concept::normal(x.clone()), y.clone()));
                out.push(Axiom::strict(
                    Concept::normal(x.clone()),
                    Concept::not(y.clone()),
                ));
            }
        }
    }
    for a in individuals {
        for x in names {
            out.push(Axiom::ConceptAssertion {
                individual: a.clone(),
                concept: x.clone(),
            });
        }
    }
    out
}

/// A syntactically different but classically equivalent axiom.
fn equivalent_form(a: &Axiom) -> Axiom {
    match a {
        Axiom::StrictCI { lhs, rhs } => {
            Axiom::strict(Concept::not(rhs.clone()), Concept::not(lhs.clone()))
        }
        Axiom::ConceptAssertion {
            individual,
            concept,
        } => Axiom::ConceptAssertion {
            individual: individual.clone(),
            concept: Concept::and(concept.clone(), Concept::Top),
        },
        other => other.clone(),
    }
}

/// Classical consequences of `a` used as right weakenings.
fn weakenings(a: &Axiom, names: &[Concept]) -> Vec<Axiom> {
    let mut out = Vec::new();
    for x in names {
        match a {
            Axiom::StrictCI { lhs, rhs } => {
                out.push(Axiom::strict(lhs.clone(), Concept::or(rhs.clone(), x.clone())));
                out.push(Axiom::strict(Concept::and(lhs.clone(), x.clone()), rhs.clone()));
            }
            Axiom::ConceptAssertion {
                individual,
                concept,
            } => out.push(Axiom::ConceptAssertion {
                individual: individual.clone(),
                concept: Concept::or(concept.clone(), x.clone()),
            }),
            _ => {}
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub rule: Option<Rule>,
    /// Knowledge bases the rule was checked on.
    pub kbs: usize,
    /// Knowledge bases rejected by the rule's precondition.
    pub skipped: usize,
    pub instances: usize,
    /// Instances whose premises all held.
    pub tested: usize,
    pub holds: usize,
    pub fails: usize,
    pub first_counterexample: Option<Counterexample>,
}

impl SweepSummary {
    fn merge(&mut self, other: SweepSummary) {
        self.kbs += other.kbs;
        self.skipped += other.skipped;
        self.instances += other.instances;
        self.tested += other.tested;
        self.holds += other.holds;
        self.fails += other.fails;
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
        }
    }
}

/// Checks every enumerated instance of each rule on one KB, sharing cached
/// entailments between the rules. An entry is `None` when the KB does not
/// meet that rule's precondition.
pub fn sweep_kb(
    engine: &Engine,
    kb: &KnowledgeBase,
    rules: &[Rule],
) -> Result<Vec<Option<SweepSummary>>> {
    let mut conflict = None;
    let mut oracle = Oracle::new(engine, kb);
    let mut out = Vec::new();
    for &rule in rules {
        let met = if rule.is_meta() && !is_canonical(kb) {
            false
        } else if rule.requires_normality_free() && !kb.is_normality_free() {
            return Err(PostulateError::NormalityInKb { rule });
        } else if rule.is_meta() || rule.requires_normality_free() {
            if conflict.is_none() {
                conflict = Some(first_inconsistent_prototype(engine, kb)?);
            }
            conflict == Some(None)
        } else {
            true
        };
        if !met {
            out.push(None);
            continue;
        }
        let mut summary = SweepSummary {
            rule: Some(rule),
            kbs: 1,
            ..SweepSummary::default()
        };
        for instance in enumerate_instances(&mut oracle, rule)? {
            let v = oracle.evaluate(&instance)?;
            summary.instances += 1;
            summary.tested += v.premises_hold as usize;
            if v.holds {
                summary.holds += 1;
            } else {
                summary.fails += 1;
                if summary.first_counterexample.is_none() {
                    summary.first_counterexample = v.counterexample;
                }
            }
        }
        out.push(Some(summary));
    }
    Ok(out)
}

/// Runs `rule` over the KBs generated from `seeds`.
pub fn sweep(
    rule: Rule,
    seeds: impl IntoIterator<Item = u64>,
    profile: &Profile,
    options: &Options,
) -> Result<SweepSummary> {
    Ok(sweep_rules(&[rule], seeds, profile, options)?.remove(0))
}

/// Runs several rules over the KBs generated from `seeds`, one summary per
/// rule. Seeds are split across threads; the summaries do not depend on the
/// split.
pub fn sweep_rules(
    rules: &[Rule],
    seeds: impl IntoIterator<Item = u64>,
    profile: &Profile,
    options: &Options,
) -> Result<Vec<SweepSummary>> {
    if let Some(&rule) = rules
        .iter()
        .find(|r| r.requires_normality_free() && !profile.normality_free)
    {
        return Err(PostulateError::NormalityInKb { rule });
    }
    let seeds: Vec<u64> = seeds.into_iter().collect();
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(threads).max(1);
    let empty = || -> Vec<SweepSummary> {
        rules
            .iter()
            .map(|&r| SweepSummary {
                rule: Some(r),
                ..SweepSummary::default()
            })
            .collect()
    };
    let parts: Vec<Result<Vec<SweepSummary>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    let engine = Engine::new(options.clone());
                    let mut acc = empty();
                    for &seed in part {
                        let kb = generate_random_kb(seed, profile);
                        for (s, r) in acc.iter_mut().zip(sweep_kb(&engine, &kb, rules)?) {
                            match r {
                                Some(r) => s.merge(r),
                                None => s.skipped += 1,
                            }
                        }
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut summaries = empty();
    for p in parts {
        for (s, r) in summaries.iter_mut().zip(p?) {
            s.merge(r);
        }
    }
    Ok(summaries)
}

/// Replays a counterexample; `true` if the instance fails again.
pub fn replay(c: &Counterexample, options: &Options) -> Result<bool> {
    let engine = Engine::new(options.clone());
    let v = Oracle::new(&engine, &c.kb).evaluate(&c.instance)?;
    Ok(!v.holds)
}
