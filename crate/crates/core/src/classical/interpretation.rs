//! Finite interpretations, exact model checking, and exhaustive bounded
//! model search. The search encodes each domain size as a propositional
//! formula for a SAT solver; none of this shares code with the tableau.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use varisat::{ExtendFormula, Lit, Solver};

use super::ClassicalKb;
use crate::model::{
    lower, normal_atom_name, Assertion, Concept, ConceptName, IndividualName, RoleName,
};

pub type Element = usize;

/// An interpretation over the domain `0..domain_size`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteInterpretation {
    pub domain_size: usize,
    pub concepts: BTreeMap<ConceptName, BTreeSet<Element>>,
    pub roles: BTreeMap<RoleName, BTreeSet<(Element, Element)>>,
    pub individuals: BTreeMap<IndividualName, Element>,
}

impl FiniteInterpretation {
    pub fn domain(&self) -> impl Iterator<Item = Element> {
        0..self.domain_size
    }

    /// Extension of `c`. Names missing from the maps are interpreted as empty;
    /// `N(C)` is read through its reserved atomic name.
    pub fn extension(&self, c: &Concept) -> BTreeSet<Element> {
        match c {
            Concept::Top => self.domain().collect(),
            Concept::Bottom => BTreeSet::new(),
            Concept::Atomic(n) => self.concepts.get(n).cloned().unwrap_or_default(),
            Concept::Normal(arg) => self
                .concepts
                .get(&normal_atom_name(arg))
                .cloned()
                .unwrap_or_default(),
            Concept::Not(d) => {
                let inner = self.extension(d);
                self.domain().filter(|e| !inner.contains(e)).collect()
            }
            Concept::And(a, b) => self
                .extension(a)
                .intersection(&self.extension(b))
                .copied()
                .collect(),
            Concept::Or(a, b) => self.extension(a).union(&self.extension(b)).copied().collect(),
            Concept::Exists(r, d) => {
                let filler = self.extension(d);
                let edges = self.roles.get(r);
                self.domain()
                    .filter(|x| {
                        edges.is_some_and(|es| {
                            es.iter().any(|(s, o)| s == x && filler.contains(o))
                        })
                    })
                    .collect()
            }
            Concept::Forall(r, d) => {
                let filler = self.extension(d);
                let edges = self.roles.get(r);
                self.domain()
                    .filter(|x| {
                        edges.is_none_or(|es| {
                            es.iter().all(|(s, o)| s != x || filler.contains(o))
                        })
                    })
                    .collect()
            }
        }
    }
}

/// True iff `i` satisfies every inclusion and assertion of `kb`.
pub fn check_model(i: &FiniteInterpretation, kb: &ClassicalKb) -> bool {
    if i.domain_size == 0 || i.individuals.values().any(|&e| e >= i.domain_size) {
        return false;
    }
    let tbox_ok = kb
        .tbox()
        .iter()
        .all(|inc| i.extension(&inc.lhs).is_subset(&i.extension(&inc.rhs)));
    tbox_ok
        && kb.abox().iter().all(|a| match a {
            Assertion::Concept {
                individual,
                concept,
            } => i
                .individuals
                .get(individual)
                .is_some_and(|e| i.extension(&lower(concept)).contains(e)),
            Assertion::Role {
                subject,
                role,
                object,
            } => match (i.individuals.get(subject), i.individuals.get(object)) {
                (Some(&s), Some(&o)) => i.roles.get(role).is_some_and(|es| es.contains(&(s, o))),
                _ => false,
            },
        })
}

/// Propositional encoding of "some interpretation over `0..n` is a model".
struct Encoding<'a> {
    solver: Solver<'a>,
    n: usize,
    concept_index: &'a BTreeMap<ConceptName, usize>,
    role_index: &'a BTreeMap<RoleName, usize>,
    /// `atoms[a][d]` holds iff element `d` is in concept name `a`.
    atoms: Vec<Vec<Lit>>,
    /// `edges[r][d * n + e]` holds iff `(d, e)` is in role `r`.
    edges: Vec<Vec<Lit>>,
    truth: Lit,
    memo: HashMap<Concept, Vec<Lit>>,
}

impl<'a> Encoding<'a> {
    fn new(
        n: usize,
        concept_index: &'a BTreeMap<ConceptName, usize>,
        role_index: &'a BTreeMap<RoleName, usize>,
    ) -> Self {
        let mut solver = Solver::new();
        let atoms = (0..concept_index.len())
            .map(|_| (0..n).map(|_| solver.new_lit()).collect())
            .collect();
        let edges = (0..role_index.len())
            .map(|_| (0..n * n).map(|_| solver.new_lit()).collect())
            .collect();
        let truth = solver.new_lit();
        solver.add_clause(&[truth]);
        Encoding {
            solver,
            n,
            concept_index,
            role_index,
            atoms,
            edges,
            truth,
            memo: HashMap::new(),
        }
    }

    /// A fresh literal equivalent to the conjunction of `parts`.
    fn define_and(&mut self, parts: &[Lit]) -> Lit {
        let out = self.solver.new_lit();
        let mut long = vec![out];
        for &p in parts {
            self.solver.add_clause(&[!out, p]);
            long.push(!p);
        }
        self.solver.add_clause(&long);
        out
    }

    fn define_or(&mut self, parts: &[Lit]) -> Lit {
        let negated: Vec<Lit> = parts.iter().map(|&p| !p).collect();
        !self.define_and(&negated)
    }

    /// One literal per element, true iff the element is in `c`.
    fn concept(&mut self, c: &Concept) -> Vec<Lit> {
        if let Some(lits) = self.memo.get(c) {
            return lits.clone();
        }
        let n = self.n;
        let lits: Vec<Lit> = match c {
            Concept::Top => vec![self.truth; n],
            Concept::Bottom => vec![!self.truth; n],
            Concept::Atomic(name) => self.atoms[self.concept_index[name]].clone(),
            Concept::Normal(_) => unreachable!("concepts are lowered"),
            Concept::Not(d) => self.concept(d).into_iter().map(|l| !l).collect(),
            Concept::And(a, b) => {
                let (x, y) = (self.concept(a), self.concept(b));
                (0..n).map(|d| self.define_and(&[x[d], y[d]])).collect()
            }
            Concept::Or(a, b) => {
                let (x, y) = (self.concept(a), self.concept(b));
                (0..n).map(|d| self.define_or(&[x[d], y[d]])).collect()
            }
            Concept::Exists(r, f) => {
                let filler = self.concept(f);
                let row = self.edges[self.role_index[r]].clone();
                (0..n)
                    .map(|d| {
                        let pairs: Vec<Lit> = (0..n)
                            .map(|e| self.define_and(&[row[d * n + e], filler[e]]))
                            .collect();
                        self.define_or(&pairs)
                    })
                    .collect()
            }
            Concept::Forall(r, f) => {
                let filler = self.concept(f);
                let row = self.edges[self.role_index[r]].clone();
                (0..n)
                    .map(|d| {
                        let pairs: Vec<Lit> = (0..n)
                            .map(|e| self.define_or(&[!row[d * n + e], filler[e]]))
                            .collect();
                        self.define_and(&pairs)
                    })
                    .collect()
            }
        };
        self.memo.insert(c.clone(), lits.clone());
        lits
    }
}

/// Searches every interpretation of `kb`'s signature over domains of size
/// `1..=max_domain` and returns the first model found.
///
/// Exhaustive over domain sizes and individual placements; meant for small
/// test knowledge bases only.
pub fn bounded_model_search(kb: &ClassicalKb, max_domain: usize) -> Option<FiniteInterpretation> {
    let sig = kb.signature();
    let concept_index: BTreeMap<ConceptName, usize> = sig
        .concepts
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, n)| (n, i))
        .collect();
    let role_index: BTreeMap<RoleName, usize> = sig
        .roles
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, n)| (n, i))
        .collect();
    let individuals: Vec<IndividualName> = sig.individuals.iter().cloned().collect();
    let ind_pos = |n: &IndividualName| individuals.iter().position(|i| i == n).unwrap();
    let mut abox = Vec::new();
    let mut edges = Vec::new();
    for a in kb.abox() {
        match a {
            Assertion::Concept {
                individual,
                concept,
            } => abox.push((ind_pos(individual), concept.clone())),
            Assertion::Role {
                subject,
                role,
                object,
            } => edges.push((ind_pos(subject), role_index[role], ind_pos(object))),
        }
    }

    for n in 1..=max_domain {
        let mut ind_map = vec![0; individuals.len()];
        let mut found = None;
        assign_individuals(&mut ind_map, 0, 0, n, &mut |map| {
            let mut enc = Encoding::new(n, &concept_index, &role_index);
            for inc in kb.tbox() {
                let (lhs, rhs) = (enc.concept(&inc.lhs), enc.concept(&inc.rhs));
                for d in 0..n {
                    enc.solver.add_clause(&[!lhs[d], rhs[d]]);
                }
            }
            for (ind, c) in &abox {
                let lits = enc.concept(c);
                enc.solver.add_clause(&[lits[map[*ind]]]);
            }
            for &(s, r, o) in &edges {
                let lit = enc.edges[r][map[s] * n + map[o]];
                enc.solver.add_clause(&[lit]);
            }
            if !enc.solver.solve().expect("no assumptions or limits are set") {
                return false;
            }
            let model: HashSet<Lit> = enc.solver.model().unwrap_or_default().into_iter().collect();
            let holds = |l: &Lit| model.contains(l);
            let concepts = sig
                .concepts
                .iter()
                .map(|name| {
                    let row = &enc.atoms[concept_index[name]];
                    (name.clone(), (0..n).filter(|&d| holds(&row[d])).collect())
                })
                .collect();
            let roles = sig
                .roles
                .iter()
                .map(|name| {
                    let row = &enc.edges[role_index[name]];
                    let ext = (0..n)
                        .flat_map(|d| (0..n).map(move |e| (d, e)))
                        .filter(|&(d, e)| holds(&row[d * n + e]))
                        .collect();
                    (name.clone(), ext)
                })
                .collect();
            found = Some(FiniteInterpretation {
                domain_size: n,
                concepts,
                roles,
                individuals: individuals.iter().cloned().zip(map.iter().copied()).collect(),
            });
            true
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Enumerates maps from individuals to elements up to renaming of elements
/// (restricted growth strings). Stops when `f` returns true.
fn assign_individuals(
    map: &mut [Element],
    next: usize,
    used: usize,
    n: usize,
    f: &mut dyn FnMut(&[Element]) -> bool,
) -> bool {
    if next == map.len() {
        return f(map);
    }
    for e in 0..(used + 1).min(n) {
        map[next] = e;
        if assign_individuals(map, next + 1, used.max(e + 1), n, f) {
            return true;
        }
    }
    false
}
