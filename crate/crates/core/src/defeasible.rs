//! The defeasible engine: priorities between defeasible inclusions, the
//! reduction of a knowledge base to a classical one for a given set of
//! normality concepts, nonmonotonic entailment, and prototype diagnostics.
//!
//! For a set `Σ` of normality concepts the reduction starts from the strong
//! part plus `N C ⊑ C` for every `N C ∈ Σ`. It then walks the defeasible
//! inclusions along a linearization of the priority order. For each inclusion
//! `δ` and each `N C ∈ Σ` the translation `N C ⊓ pre(δ) ⊑ con(δ)` is kept if
//! it leaves `N C` satisfiable together with the strong part and the
//! translations of the inclusions that strictly precede `δ`; otherwise it is
//! overridden.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::classical::{ClassicalError, ClassicalKb, Reasoner, ReasonerStats, DEFAULT_NODE_BUDGET};
use crate::model::{
    is_normal_atom, normality_concepts, signature, Axiom, Concept, ConceptName, DefeasibleCI,
    IndividualName, KnowledgeBase, NormalitySet,
};
use crate::parser::{is_identifier, print_concept};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DefeasibleError {
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error("defeasible inclusion #{} has no rank (required in rank mode)", index + 1)]
    MissingRank { index: usize },
    #[error("priority relation is not a strict partial order: {0}")]
    NotStrictPartialOrder(String),
    #[error("order is not a linearization of the priority relation")]
    NotALinearization,
    #[error("queries must be strict inclusions or assertions")]
    DefeasibleQuery,
    #[error("concept `{0}` is inconsistent with the strong part")]
    InconsistentConcept(String),
}

pub type Result<T, E = DefeasibleError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorityMode {
    /// `δ₁ ≺ δ₂` iff `pre(δ₁)` is strictly more specific than `pre(δ₂)` w.r.t. the strong part.
    #[default]
    Specificity,
    /// `δ₁ ≺ δ₂` iff `rank(δ₁) < rank(δ₂)`.
    Rank,
}

/// Strict partial order over the defeasible inclusions of one knowledge
/// base, stored as index pairs `(i, j)` meaning `i ≺ j` (`i` wins).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorityRelation {
    mode: PriorityMode,
    size: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PriorityRelation {
    /// Validates that `pairs` is irreflexive, asymmetric and transitive.
    pub fn new(
        mode: PriorityMode,
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(i, j) in &pairs {
            if i >= size || j >= size {
                return Err(DefeasibleError::NotStrictPartialOrder(format!(
                    "pair ({i}, {j}) out of range"
                )));
            }
            if i == j {
                return Err(DefeasibleError::NotStrictPartialOrder(format!("#{} ≺ itself", i + 1)));
            }
            if pairs.contains(&(j, i)) {
                return Err(DefeasibleError::NotStrictPartialOrder(format!(
                    "#{} and #{} precede each other",
                    i + 1,
                    j + 1
                )));
            }
            for &(k, l) in pairs.range((j, 0)..(j + 1, 0)) {
                debug_assert_eq!(k, j);
                if !pairs.contains(&(i, l)) {
                    return Err(DefeasibleError::NotStrictPartialOrder(format!(
                        "#{} ≺ #{} ≺ #{} but not #{} ≺ #{}",
                        i + 1,
                        j + 1,
                        l + 1,
                        i + 1,
                        l + 1
                    )));
                }
            }
        }
        Ok(Self { mode, size, pairs })
    }

    pub fn empty(mode: PriorityMode, size: usize) -> Self {
        Self {
            mode,
            size,
            pairs: BTreeSet::new(),
        }
    }

    pub fn mode(&self) -> PriorityMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// True iff inclusion `i` has strictly higher priority than `j`.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// True iff `order` is a permutation of `0..len` compatible with `≺`.
    pub fn is_linearization(&self, order: &[usize]) -> bool {
        let mut pos = vec![usize::MAX; self.size];
        for (p, &i) in order.iter().enumerate() {
            if i >= self.size || pos[i] != usize::MAX {
                return false;
            }
            pos[i] = p;
        }
        order.len() == self.size && self.pairs.iter().all(|&(i, j)| pos[i] < pos[j])
    }
}

/// Reasoning options shared by the engine and the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub priority: PriorityMode,
    pub node_budget: usize,
    /// Assert a normal instance for every classically consistent concept
    /// name of the knowledge base and the query before reducing.
    pub assume_nonempty_prototypes: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            priority: PriorityMode::Specificity,
            node_budget: DEFAULT_NODE_BUDGET,
            assume_nonempty_prototypes: false,
        }
    }
}

/// `δ^{N C}`: a defeasible inclusion instantiated for one normality concept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TranslatedDI {
    /// Position of the source inclusion in the knowledge base.
    pub index: usize,
    pub di: DefeasibleCI,
    pub normality: Concept,
    /// `N C ⊓ pre(δ) ⊑ con(δ)`, with `N C` still structural.
    pub axiom: Axiom,
    /// The same inclusion with normality concepts replaced by reserved atoms.
    pub lowered: Axiom,
}

/// Instantiates `d` (found at position `index`) for the normality concept `n`.
pub fn translate_di(index: usize, d: &DefeasibleCI, n: &Concept) -> TranslatedDI {
    assert!(matches!(n, Concept::Normal(_)), "expected a normality concept");
    let axiom = Axiom::strict(Concept::and(n.clone(), d.lhs.clone()), d.rhs.clone());
    let lowered = crate::model::lower_axiom(&axiom).expect("strict inclusion");
    TranslatedDI {
        index,
        di: d.clone(),
        normality: n.clone(),
        axiom,
        lowered,
    }
}

/// An intermediate classical knowledge base of the reduction, with every
/// axiom tagged by where it came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WorkingSet {
    pub strong: Vec<Axiom>,
    /// `N C ⊑ C` for every `N C ∈ Σ`.
    pub normality_axioms: Vec<Axiom>,
    pub translated: Vec<TranslatedDI>,
}

impl WorkingSet {
    /// Strong part plus `N C ⊑ C` for every member of `sigma`.
    pub fn initial(kb: &KnowledgeBase, sigma: &NormalitySet) -> Self {
        let normality_axioms = sigma
            .iter()
            .map(|n| match n {
                Concept::Normal(arg) => Axiom::strict(n.clone(), (**arg).clone()),
                _ => unreachable!(),
            })
            .collect();
        Self {
            strong: kb.strong().to_vec(),
            normality_axioms,
            translated: Vec::new(),
        }
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.strong
            .iter()
            .chain(&self.normality_axioms)
            .chain(self.translated.iter().map(|t| &t.axiom))
    }

    pub fn to_classical(&self) -> Result<ClassicalKb, ClassicalError> {
        ClassicalKb::from_axioms(self.axioms())
    }
}

/// Drops every translated inclusion whose source does not strictly precede
/// inclusion `index`. Strong axioms and `N C ⊑ C` axioms are kept.
pub fn filter_higher_priority(s: &WorkingSet, index: usize, prio: &PriorityRelation) -> WorkingSet {
    WorkingSet {
        strong: s.strong.clone(),
        normality_axioms: s.normality_axioms.clone(),
        translated: s
            .translated
            .iter()
            .filter(|t| prio.precedes(t.index, index))
            .cloned()
            .collect(),
    }
}

/// Why a translated inclusion was discarded: the checked axiom set entails
/// `unsatisfiable ⊑ ⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverrideReason {
    pub checked: Vec<Axiom>,
    pub unsatisfiable: Concept,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overridden {
    pub translated: TranslatedDI,
    pub reason: OverrideReason,
}

/// Outcome of the reduction for one `Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub kb_sigma: ClassicalKb,
    /// `kb_sigma` before lowering, for reporting.
    pub working_set: WorkingSet,
    pub sigma: NormalitySet,
    /// Indices into the knowledge base's defeasible part, highest priority first.
    pub linearization: Vec<usize>,
    pub selected: Vec<TranslatedDI>,
    pub overridden: Vec<Overridden>,
    /// Satisfiability checks issued while deciding which translations to keep.
    pub checks: u64,
}

impl ReductionResult {
    pub fn is_overridden(&self, index: usize, normality: &Concept) -> bool {
        self.overridden
            .iter()
            .any(|o| o.translated.index == index && &o.translated.normality == normality)
    }

    pub fn is_selected(&self, index: usize, normality: &Concept) -> bool {
        self.selected
            .iter()
            .any(|t| t.index == index && &t.normality == normality)
    }

    /// Selected and overridden `(inclusion, normality concept)` pairs, sorted.
    #[allow(clippy::type_complexity)]
    pub fn partition(&self) -> (Vec<(usize, Concept)>, Vec<(usize, Concept)>) {
        let mut sel: Vec<_> = self
            .selected
            .iter()
            .map(|t| (t.index, t.normality.clone()))
            .collect();
        let mut over: Vec<_> = self
            .overridden
            .iter()
            .map(|o| (o.translated.index, o.translated.normality.clone()))
            .collect();
        sel.sort();
        over.sort();
        (sel, over)
    }
}

/// Answer to one query plus the reduction that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entailment {
    pub query: Axiom,
    pub entailed: bool,
    pub reduction: ReductionResult,
}

/// Normality concepts whose prototypes are empty, and those that are not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrototypeReport {
    pub inconsistent: Vec<Concept>,
    pub consistent: Vec<Concept>,
}

/// A knowledge base with its priority relation and linearization computed once.
#[derive(Clone, Debug)]
pub struct PreparedKb {
    pub kb: KnowledgeBase,
    pub priority: PriorityRelation,
    pub linearization: Vec<usize>,
}

/// Order of inclusions compatible with `prio`; ties go to the earlier input position.
pub fn linearize(kb: &KnowledgeBase, prio: &PriorityRelation) -> Vec<usize> {
    let n = kb.defeasible().len();
    debug_assert_eq!(n, prio.len());
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .find(|&i| !placed[i] && (0..n).all(|j| placed[j] || !prio.precedes(j, i)))
            .expect("a strict partial order always has a minimal element");
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Defeasible reasoner: a classical [`Reasoner`] plus options.
#[derive(Debug, Default)]
pub struct Engine {
    reasoner: Reasoner,
    options: Options,
}

impl Engine {
    pub fn new(options: Options) -> Self {
        Self {
            reasoner: Reasoner::with_node_budget(options.node_budget),
            options,
        }
    }

    pub fn options(&self) -> &Options {
        &self.options
    }

    pub fn reasoner(&self) -> &Reasoner {
        &self.reasoner
    }

    pub fn stats(&self) -> ReasonerStats {
        self.reasoner.stats()
    }

    /// `d1 ≺ d2` under specificity: `S ⊨ pre(d1) ⊑ pre(d2)` and `S ⊭ pre(d2) ⊑ pre(d1)`.
    pub fn specificity(&self, strong: &[Axiom], d1: &DefeasibleCI, d2: &DefeasibleCI) -> Result<bool> {
        let s = ClassicalKb::from_axioms(strong)?;
        Ok(self.reasoner.entails_subsumption(&s, &d1.lhs, &d2.lhs)?
            && !self.reasoner.entails_subsumption(&s, &d2.lhs, &d1.lhs)?)
    }

    pub fn priority_relation(&self, kb: &KnowledgeBase) -> Result<PriorityRelation> {
        priority_relation_with(&self.reasoner, kb, self.options.priority)
    }

    /// Computes the priority relation and a linearization for `kb`, after
    /// adding prototype witnesses when the options ask for them.
    pub fn prepare(&self, kb: &KnowledgeBase) -> Result<PreparedKb> {
        let priority = self.priority_relation(kb)?;
        let linearization = linearize(kb, &priority);
        Ok(PreparedKb {
            kb: kb.clone(),
            priority,
            linearization,
        })
    }

    pub fn build_kb_sigma(
        &self,
        kb: &KnowledgeBase,
        sigma: &NormalitySet,
        prio: &PriorityRelation,
    ) -> Result<ReductionResult> {
        let order = linearize(kb, prio);
        self.build_kb_sigma_ordered(kb, sigma, prio, &order)
    }

    /// The reduction along an explicit linearization of `prio`.
    pub fn build_kb_sigma_ordered(
        &self,
        kb: &KnowledgeBase,
        sigma: &NormalitySet,
        prio: &PriorityRelation,
        order: &[usize],
    ) -> Result<ReductionResult> {
        if !prio.is_linearization(order) {
            return Err(DefeasibleError::NotALinearization);
        }
        let mut current = WorkingSet::initial(kb, sigma);
        let mut selected = Vec::new();
        let mut overridden = Vec::new();
        let mut checks = 0;
        for &index in order {
            let di = &kb.defeasible()[index];
            let base = filter_higher_priority(&current, index, prio);
            let base_kb = base.to_classical()?;
            let mut kept = Vec::new();
            for n in sigma.iter() {
                let t = translate_di(index, di, n);
                let mut check = base_kb.clone();
                check.add(&t.axiom)?;
                checks += 1;
                if self.reasoner.is_satisfiable(&check, n)? {
                    kept.push(t);
                } else {
                    let checked = base.axioms().chain([&t.axiom]).cloned().collect();
                    overridden.push(Overridden {
                        reason: OverrideReason {
                            checked,
                            unsatisfiable: n.clone(),
                        },
                        translated: t,
                    });
                }
            }
            selected.extend(kept.iter().cloned());
            current.translated.extend(kept);
        }
        Ok(ReductionResult {
            kb_sigma: current.to_classical()?,
            working_set: current,
            sigma: sigma.clone(),
            linearization: order.to_vec(),
            selected,
            overridden,
            checks,
        })
    }

    /// `kb |≈ query`.
    pub fn n_entails(&self, kb: &KnowledgeBase, query: &Axiom) -> Result<Entailment> {
        let kb = self.with_witnesses(kb, Some(query))?;
        let prepared = self.prepare(&kb)?;
        self.n_entails_prepared(&prepared, query)
    }

    /// Like [`Engine::n_entails`] but reuses a prepared knowledge base. Prototype
    /// witnesses are not added here; see [`Engine::with_witnesses`].
    pub fn n_entails_prepared(&self, prepared: &PreparedKb, query: &Axiom) -> Result<Entailment> {
        if query.is_defeasible() {
            return Err(DefeasibleError::DefeasibleQuery);
        }
        let sigma = normality_concepts(&prepared.kb, query);
        let reduction = self.build_kb_sigma_ordered(
            &prepared.kb,
            &sigma,
            &prepared.priority,
            &prepared.linearization,
        )?;
        let entailed = self.reasoner.entails(&reduction.kb_sigma, query)?;
        Ok(Entailment {
            query: query.clone(),
            entailed,
            reduction,
        })
    }

    /// Applies [`Engine::assume_nonempty_prototypes`] to every concept name of
    /// `kb` and `query` that is consistent with the strong part, if enabled.
    pub fn with_witnesses(&self, kb: &KnowledgeBase, query: Option<&Axiom>) -> Result<KnowledgeBase> {
        if !self.options.assume_nonempty_prototypes {
            return Ok(kb.clone());
        }
        let mut names: BTreeSet<ConceptName> = signature(kb).concepts;
        if let Some(q) = query {
            names.extend(crate::model::Signature::of_axioms([q]).concepts);
        }
        let strong = ClassicalKb::from_axioms(kb.strong())?;
        let mut consistent = Vec::new();
        for name in names.into_iter().filter(|n| !is_normal_atom(n)) {
            let c = Concept::Atomic(name);
            if self.reasoner.is_satisfiable(&strong, &c)? {
                consistent.push(c);
            }
        }
        self.assume_nonempty_prototypes(kb, &consistent)
    }

    /// Decides `kb |≈ N C ⊑ ⊥` for every candidate `C`. Without candidates,
    /// every concept name of `kb` and every normality argument in `kb` is checked.
    pub fn inconsistent_prototypes(
        &self,
        kb: &KnowledgeBase,
        candidates: Option<&[Concept]>,
    ) -> Result<PrototypeReport> {
        let candidates = match candidates {
            Some(c) => c.to_vec(),
            None => default_candidates(kb),
        };
        let kb = self.with_witnesses(kb, None)?;
        let prepared = self.prepare(&kb)?;
        let mut report = PrototypeReport::default();
        for c in candidates {
            let n = Concept::normal(c);
            let q = Axiom::strict(n.clone(), Concept::Bottom);
            if self.n_entails_prepared(&prepared, &q)?.entailed {
                report.inconsistent.push(n);
            } else {
                report.consistent.push(n);
            }
        }
        Ok(report)
    }

    /// Adds `aux_C : N(C)` for every `C`, so each prototype is nonempty.
    /// Fails if some `C` is inconsistent with the strong part.
    pub fn assume_nonempty_prototypes(
        &self,
        kb: &KnowledgeBase,
        concepts: &[Concept],
    ) -> Result<KnowledgeBase> {
        let strong = ClassicalKb::from_axioms(kb.strong())?;
        let mut used: BTreeSet<IndividualName> = signature(kb).individuals;
        let mut out = kb.clone();
        for c in concepts {
            if !self.reasoner.is_satisfiable(&strong, c)? {
                return Err(DefeasibleError::InconsistentConcept(print_concept(c)));
            }
            let name = witness_name(c, &used);
            used.insert(name.clone());
            out.add(Axiom::ConceptAssertion {
                individual: name,
                concept: Concept::normal(c.clone()),
            });
        }
        Ok(out)
    }
}

fn priority_relation_with(
    reasoner: &Reasoner,
    kb: &KnowledgeBase,
    mode: PriorityMode,
) -> Result<PriorityRelation> {
    let dis = kb.defeasible();
    let n = dis.len();
    let mut pairs = Vec::new();
    match mode {
        PriorityMode::Rank => {
            let ranks: Vec<u32> = dis
                .iter()
                .enumerate()
                .map(|(index, d)| d.rank.ok_or(DefeasibleError::MissingRank { index }))
                .collect::<Result<_>>()?;
            for i in 0..n {
                for j in 0..n {
                    if ranks[i] < ranks[j] {
                        pairs.push((i, j));
                    }
                }
            }
        }
        PriorityMode::Specificity => {
            let strong = ClassicalKb::from_axioms(kb.strong())?;
            // one subsumption test per ordered pair of distinct premises
            let mut subsumes: HashMap<(usize, usize), bool> = HashMap::new();
            // premises are compared by their first occurrence, so equal premises share tests
            let first: Vec<usize> = (0..n)
                .map(|i| (0..=i).find(|&k| dis[k].lhs == dis[i].lhs).unwrap())
                .collect();
            let mut sub = |a: usize, b: usize| -> Result<bool> {
                if let Some(&v) = subsumes.get(&(a, b)) {
                    return Ok(v);
                }
                let v = reasoner.entails_subsumption(&strong, &dis[a].lhs, &dis[b].lhs)?;
                subsumes.insert((a, b), v);
                Ok(v)
            };
            for i in 0..n {
                for j in 0..n {
                    let (p, q) = (first[i], first[j]);
                    if p == q {
                        continue;
                    }
                    if sub(p, q)? && !sub(q, p)? {
                        pairs.push((i, j));
                    }
                }
            }
        }
    }
    PriorityRelation::new(mode, n, pairs)
}

/// Candidates checked by default: concept names, then normality arguments.
pub fn default_candidates(kb: &KnowledgeBase) -> Vec<Concept> {
    let mut out: Vec<Concept> = signature(kb)
        .concepts
        .into_iter()
        .map(Concept::Atomic)
        .collect();
    let all = kb.axioms().fold(NormalitySet::new(), |mut acc, a| {
        for n in normality_concepts(&KnowledgeBase::new(), &a).iter() {
            acc.insert(n.clone());
        }
        acc
    });
    for n in all.iter() {
        if let Concept::Normal(arg) = n {
            if !out.contains(arg) {
                out.push((**arg).clone());
            }
        }
    }
    out
}

fn witness_name(c: &Concept, used: &BTreeSet<IndividualName>) -> IndividualName {
    let printed = print_concept(c);
    let mut base = String::from("aux_");
    let mut last_sep = true;
    for ch in printed.chars() {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            base.push(ch);
            last_sep = false;
        } else if !last_sep {
            base.push('_');
            last_sep = true;
        }
    }
    while base.ends_with('_') && base.len() > 4 {
        base.pop();
    }
    debug_assert!(is_identifier(&base));
    let mut candidate = base.clone();
    let mut k = 1;
    while used.iter().any(|u| u.as_str() == candidate) {
        k += 1;
        candidate = format!("{base}_{k}");
    }
    IndividualName::new(candidate)
}

/// Computes the priority relation of `kb` with a throwaway reasoner.
pub fn priority_relation(kb: &KnowledgeBase, mode: PriorityMode) -> Result<PriorityRelation> {
    priority_relation_with(&Reasoner::new(), kb, mode)
}

/// `kb |≈ query` with a fresh engine.
pub fn n_entails(kb: &KnowledgeBase, query: &Axiom, options: &Options) -> Result<Entailment> {
    Engine::new(options.clone()).n_entails(kb, query)
}

pub fn inconsistent_prototypes(
    kb: &KnowledgeBase,
    candidates: Option<&[Concept]>,
    options: &Options,
) -> Result<PrototypeReport> {
    Engine::new(options.clone()).inconsistent_prototypes(kb, candidates)
}
