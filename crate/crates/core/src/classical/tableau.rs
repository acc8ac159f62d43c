//! Tableau for ALC with general TBoxes and ABoxes.
//!
//! TBox axioms whose left-hand side is a conjunction of atomic concepts are
//! absorbed: `A₁ ⊓ … ⊓ Aₖ ⊑ D` adds `D` to a node once all `Aᵢ` are in its
//! label. Every other axiom `C ⊑ D` is internalized as `nnf(¬C ⊔ D)` in every
//! node. Anonymous nodes are subset-blocked by an ancestor. Disjunctions
//! branch left-first; every label entry records the branch points it depends
//! on, so a branch whose failure does not involve the latest choice is
//! abandoned without trying the other disjunct. ABox components that share no
//! role assertion are solved independently.

use rustc_hash::FxHashMap;

use super::{ClassicalError, ClassicalKb};
use crate::model::{nnf, Assertion, Concept, IndividualName};

type Id = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Term {
    Top,
    Bottom,
    Lit { atom: usize, positive: bool },
    And(Id, Id),
    Or(Id, Id),
    Some { role: usize, filler: Id },
    All { role: usize, filler: Id },
}

#[derive(Default)]
struct Interner {
    terms: Vec<Term>,
    index: FxHashMap<Term, Id>,
    atoms: FxHashMap<String, usize>,
    roles: FxHashMap<String, usize>,
}

impl Interner {
    fn term(&mut self, t: Term) -> Id {
        if let Some(&id) = self.index.get(&t) {
            return id;
        }
        let id = self.terms.len();
        self.terms.push(t);
        self.index.insert(t, id);
        id
    }

    fn name(map: &mut FxHashMap<String, usize>, s: &str) -> usize {
        if let Some(&i) = map.get(s) {
            return i;
        }
        let next = map.len();
        map.insert(s.to_string(), next);
        next
    }

    /// `c` must be in negation normal form with no `Normal` constructor.
    fn intern(&mut self, c: &Concept) -> Id {
        let t = match c {
            Concept::Top => Term::Top,
            Concept::Bottom => Term::Bottom,
            Concept::Atomic(n) => Term::Lit {
                atom: Self::name(&mut self.atoms, n.as_str()),
                positive: true,
            },
            Concept::Not(inner) => match &**inner {
                Concept::Atomic(n) => Term::Lit {
                    atom: Self::name(&mut self.atoms, n.as_str()),
                    positive: false,
                },
                other => panic!("concept not in negation normal form: not {other:?}"),
            },
            Concept::And(a, b) => Term::And(self.intern(a), self.intern(b)),
            Concept::Or(a, b) => Term::Or(self.intern(a), self.intern(b)),
            Concept::Exists(r, f) => Term::Some {
                role: Self::name(&mut self.roles, r.as_str()),
                filler: self.intern(f),
            },
            Concept::Forall(r, f) => Term::All {
                role: Self::name(&mut self.roles, r.as_str()),
                filler: self.intern(f),
            },
            Concept::Normal(_) => panic!("normality concepts must be lowered before the tableau"),
        };
        self.term(t)
    }

    fn complement(&self, id: Id) -> Option<Id> {
        match self.terms[id] {
            Term::Lit { atom, positive } => self
                .index
                .get(&Term::Lit {
                    atom,
                    positive: !positive,
                })
                .copied(),
            Term::Top => self.index.get(&Term::Bottom).copied(),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Label {
    bits: Vec<u64>,
}

impl Label {
    fn new(width: usize) -> Self {
        Self {
            bits: vec![0; width.div_ceil(64)],
        }
    }

    fn contains(&self, id: Id) -> bool {
        self.bits[id / 64] & (1 << (id % 64)) != 0
    }

    fn insert(&mut self, id: Id) -> bool {
        let (w, b) = (id / 64, 1u64 << (id % 64));
        let fresh = self.bits[w] & b == 0;
        self.bits[w] |= b;
        fresh
    }

    fn is_subset(&self, other: &Label) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn ids(&self) -> impl Iterator<Item = Id> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }
}

/// Branch points a label entry depends on: bit `l` stands for branch level
/// `l`, and the top bit for every level from 127 on. Lumping deep levels
/// together only ever keeps extra dependencies, which is safe.
type Deps = u128;

const NO_DEPS: Deps = 0;

fn level_bit(level: u32) -> Deps {
    1 << level.min(127)
}

fn without_level(d: Deps, level: u32) -> Deps {
    if level < 127 {
        d & !level_bit(level)
    } else {
        d
    }
}

#[derive(Clone)]
struct Node {
    label: Label,
    /// Dependencies of each entry of `label`, indexed by term id.
    deps: Vec<Deps>,
    /// `None` for named individuals.
    parent: Option<usize>,
    /// `(role, node, dependencies of the edge)`
    successors: Vec<(usize, usize, Deps)>,
}

impl Node {
    fn add(&mut self, id: Id, deps: Deps) -> bool {
        if self.label.insert(id) {
            self.deps[id] = deps;
            true
        } else {
            false
        }
    }
}

#[derive(Clone)]
struct Graph {
    nodes: Vec<Node>,
}

struct Search<'a> {
    terms: &'a [Term],
    complements: Vec<Option<Id>>,
    tbox: Vec<Id>,
    absorbed: Vec<(Vec<Id>, Id)>,
    width: usize,
    budget: usize,
    created: usize,
}

enum Step {
    Clash(Deps),
    Branch(usize, Id),
    Done,
    Expanded,
}

enum Outcome {
    Sat,
    /// The branch levels the clash depends on.
    Unsat(Deps),
}

impl<'a> Search<'a> {
    fn new_node(&mut self, g: &mut Graph, parent: Option<usize>) -> Result<usize, ClassicalError> {
        self.created += 1;
        if self.created > self.budget {
            return Err(ClassicalError::ResourceLimit {
                budget: self.budget,
            });
        }
        let mut node = Node {
            label: Label::new(self.width),
            deps: vec![NO_DEPS; self.width],
            parent,
            successors: Vec::new(),
        };
        for &t in &self.tbox {
            node.add(t, NO_DEPS);
        }
        g.nodes.push(node);
        Ok(g.nodes.len() - 1)
    }

    /// The dependencies of a clash between `id` and the node, if any.
    fn clash(&self, node: &Node, id: Id) -> Option<Deps> {
        if matches!(self.terms[id], Term::Bottom) {
            return Some(node.deps[id]);
        }
        match self.complements[id] {
            Some(c) if node.label.contains(c) => Some(node.deps[id] | node.deps[c]),
            _ => None,
        }
    }

    /// Would adding `id` to the node clash at once? Returns the dependencies
    /// of the complementary entry.
    fn refuted(&self, node: &Node, id: Id) -> Option<Deps> {
        if matches!(self.terms[id], Term::Bottom) {
            return Some(NO_DEPS);
        }
        match self.complements[id] {
            Some(c) if node.label.contains(c) => Some(node.deps[c]),
            _ => None,
        }
    }

    /// Applies conjunction, universal, absorption and forced-disjunct rules
    /// everywhere until nothing changes.
    fn saturate(&self, g: &mut Graph) -> Option<Deps> {
        loop {
            let mut changed = false;
            for x in 0..g.nodes.len() {
                for id in 0..self.width {
                    if !g.nodes[x].label.contains(id) {
                        continue;
                    }
                    if let Some(d) = self.clash(&g.nodes[x], id) {
                        return Some(d);
                    }
                    let node = &g.nodes[x];
                    match self.terms[id] {
                        Term::And(a, b) => {
                            if node.label.contains(a) && node.label.contains(b) {
                                continue;
                            }
                            let deps = node.deps[id];
                            let n = &mut g.nodes[x];
                            changed |= n.add(a, deps);
                            changed |= n.add(b, deps);
                        }
                        Term::Or(a, b) => {
                            if node.label.contains(a) || node.label.contains(b) {
                                continue;
                            }
                            if let Some(d) = self.refuted(node, a) {
                                let d = node.deps[id] | d;
                                changed |= g.nodes[x].add(b, d);
                            } else if let Some(d) = self.refuted(node, b) {
                                let d = node.deps[id] | d;
                                changed |= g.nodes[x].add(a, d);
                            }
                        }
                        Term::All { role, filler } => {
                            let succs: Vec<(usize, Deps)> = node
                                .successors
                                .iter()
                                .filter(|&&(r, y, _)| r == role && !g.nodes[y].label.contains(filler))
                                .map(|(_, y, d)| (*y, node.deps[id] | d))
                                .collect();
                            for (y, d) in succs {
                                changed |= g.nodes[y].add(filler, d);
                            }
                        }
                        _ => {}
                    }
                }
                for (trigger, rhs) in &self.absorbed {
                    let node = &g.nodes[x];
                    if !node.label.contains(*rhs) && trigger.iter().all(|&t| node.label.contains(t)) {
                        let d = trigger
                            .iter()
                            .fold(NO_DEPS, |acc, &t| acc | node.deps[t]);
                        g.nodes[x].add(*rhs, d);
                        changed = true;
                    }
                }
            }
            if !changed {
                return None;
            }
        }
    }

    fn blocked(&self, g: &Graph) -> Vec<bool> {
        let mut blocked = vec![false; g.nodes.len()];
        // parents are always created before their children
        for x in 0..g.nodes.len() {
            let Some(parent) = g.nodes[x].parent else {
                continue;
            };
            if blocked[parent] {
                blocked[x] = true;
                continue;
            }
            let mut anc = Some(parent);
            while let Some(y) = anc {
                if g.nodes[x].label.is_subset(&g.nodes[y].label) {
                    blocked[x] = true;
                    break;
                }
                anc = g.nodes[y].parent;
            }
        }
        blocked
    }

    #[allow(clippy::needless_range_loop)]
    fn step(&mut self, g: &mut Graph) -> Result<Step, ClassicalError> {
        if let Some(d) = self.saturate(g) {
            return Ok(Step::Clash(d));
        }
        let blocked = self.blocked(g);
        for x in 0..g.nodes.len() {
            if blocked[x] {
                continue;
            }
            for id in g.nodes[x].label.ids() {
                if let Term::Or(a, b) = self.terms[id] {
                    let label = &g.nodes[x].label;
                    if !label.contains(a) && !label.contains(b) {
                        return Ok(Step::Branch(x, id));
                    }
                }
            }
        }
        for x in 0..g.nodes.len() {
            if blocked[x] {
                continue;
            }
            for id in 0..self.width {
                if !g.nodes[x].label.contains(id) {
                    continue;
                }
                if let Term::Some { role, filler } = self.terms[id] {
                    let witnessed = g.nodes[x]
                        .successors
                        .iter()
                        .any(|&(r, y, _)| r == role && g.nodes[y].label.contains(filler));
                    if witnessed {
                        continue;
                    }
                    let deps = g.nodes[x].deps[id];
                    let y = self.new_node(g, Some(x))?;
                    g.nodes[y].add(filler, deps);
                    for other in 0..self.width {
                        if !g.nodes[x].label.contains(other) {
                            continue;
                        }
                        if let Term::All { role: r, filler: f } = self.terms[other] {
                            if r == role {
                                let d = deps | g.nodes[x].deps[other];
                                g.nodes[y].add(f, d);
                            }
                        }
                    }
                    g.nodes[x].successors.push((role, y, deps));
                    return Ok(Step::Expanded);
                }
            }
        }
        Ok(Step::Done)
    }

    /// Expands `g` to completion. Disjunctions branch left first; a failed
    /// left branch whose clash does not depend on the branch point is not
    /// retried on the right.
    fn solve(&mut self, mut g: Graph, level: u32) -> Result<Outcome, ClassicalError> {
        loop {
            match self.step(&mut g)? {
                Step::Clash(d) => return Ok(Outcome::Unsat(d)),
                Step::Done => return Ok(Outcome::Sat),
                Step::Expanded => {}
                Step::Branch(x, or) => {
                    let Term::Or(a, b) = self.terms[or] else {
                        unreachable!()
                    };
                    let deps = g.nodes[x].deps[or];
                    let mut left = g.clone();
                    left.nodes[x].add(a, deps | level_bit(level));
                    let d = match self.solve(left, level + 1)? {
                        Outcome::Sat => return Ok(Outcome::Sat),
                        Outcome::Unsat(d) => d,
                    };
                    if d & level_bit(level) == 0 {
                        return Ok(Outcome::Unsat(d));
                    }
                    g.nodes[x].add(b, deps | without_level(d, level));
                    return match self.solve(g, level + 1)? {
                        Outcome::Sat => Ok(Outcome::Sat),
                        Outcome::Unsat(d2) => {
                            Ok(Outcome::Unsat(without_level(d2, level)))
                        }
                    };
                }
            }
        }
    }
}

/// Splits `lhs` (in NNF) into disjuncts; returns the atom sets of those
/// disjuncts if every one is a conjunction of positive atoms or `Top`.
fn absorbable(lhs: &Concept, out: &mut Vec<Vec<Concept>>) -> bool {
    fn atoms(c: &Concept, acc: &mut Vec<Concept>) -> bool {
        match c {
            Concept::Top => true,
            Concept::Atomic(_) => {
                acc.push(c.clone());
                true
            }
            Concept::And(a, b) => atoms(a, acc) && atoms(b, acc),
            _ => false,
        }
    }
    match lhs {
        Concept::Or(a, b) => absorbable(a, out) && absorbable(b, out),
        other => {
            let mut acc = Vec::new();
            let ok = atoms(other, &mut acc);
            out.push(acc);
            ok
        }
    }
}

fn index_of<'n>(name: &'n IndividualName, inds: &mut Vec<&'n IndividualName>) -> usize {
    inds.iter().position(|i| *i == name).unwrap_or_else(|| {
        inds.push(name);
        inds.len() - 1
    })
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    parent[x] = root;
    root
}

/// Decides whether `kb`, optionally extended with the assertion
/// `extra.0 : extra.1`, has a model. Concepts must already be lowered.
pub(super) fn satisfiable(
    kb: &ClassicalKb,
    extra: Option<(IndividualName, Concept)>,
    budget: usize,
) -> Result<bool, ClassicalError> {
    let mut interner = Interner::default();
    let mut tbox = Vec::new();
    let mut absorbed = Vec::new();
    for inc in kb.tbox() {
        let lhs = nnf(&inc.lhs);
        let rhs = nnf(&inc.rhs);
        let mut disjuncts = Vec::new();
        if absorbable(&lhs, &mut disjuncts) {
            let rhs_id = interner.intern(&rhs);
            for atoms in disjuncts {
                if atoms.is_empty() {
                    tbox.push(rhs_id);
                } else {
                    let trigger = atoms.iter().map(|a| interner.intern(a)).collect();
                    absorbed.push((trigger, rhs_id));
                }
            }
        } else {
            tbox.push(interner.intern(&nnf(&Concept::or(
                Concept::not(inc.lhs.clone()),
                inc.rhs.clone(),
            ))));
        }
    }

    let mut individuals: Vec<&IndividualName> = Vec::new();
    let mut concept_facts = Vec::new();
    let mut role_facts = Vec::new();
    for a in kb.abox() {
        match a {
            Assertion::Concept {
                individual,
                concept,
            } => {
                let i = index_of(individual, &mut individuals);
                concept_facts.push((i, interner.intern(&nnf(concept))));
            }
            Assertion::Role {
                subject,
                role,
                object,
            } => {
                let s = index_of(subject, &mut individuals);
                let o = index_of(object, &mut individuals);
                let r = Interner::name(&mut interner.roles, role.as_str());
                role_facts.push((s, r, o));
            }
        }
    }
    if let Some((ind, c)) = extra.as_ref() {
        let i = index_of(ind, &mut individuals);
        concept_facts.push((i, interner.intern(&nnf(c))));
    }

    let complements = (0..interner.terms.len())
        .map(|id| interner.complement(id))
        .collect();
    let mut search = Search {
        terms: &interner.terms,
        complements,
        tbox,
        absorbed,
        width: interner.terms.len().max(1),
        budget,
        created: 0,
    };

    // interpretation domains are non-empty
    if individuals.is_empty() {
        let mut g = Graph { nodes: Vec::new() };
        search.new_node(&mut g, None)?;
        return Ok(matches!(search.solve(g, 0)?, Outcome::Sat));
    }

    let mut parent: Vec<usize> = (0..individuals.len()).collect();
    for &(s, _, o) in &role_facts {
        let (a, b) = (find(&mut parent, s), find(&mut parent, o));
        parent[a] = b;
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    for i in 0..individuals.len() {
        let root = find(&mut parent, i);
        match components.iter().position(|c| find(&mut parent, c[0]) == root) {
            Some(k) => components[k].push(i),
            None => components.push(vec![i]),
        }
    }
    for members in &components {
        let mut g = Graph { nodes: Vec::new() };
        let local = |i: usize| members.iter().position(|&m| m == i).unwrap();
        for _ in members {
            search.new_node(&mut g, None)?;
        }
        for &(i, c) in concept_facts.iter().filter(|(i, _)| members.contains(i)) {
            g.nodes[local(i)].add(c, NO_DEPS);
        }
        for &(s, r, o) in role_facts.iter().filter(|(s, _, _)| members.contains(s)) {
            let (s, o) = (local(s), local(o));
            if !g.nodes[s].successors.iter().any(|e| (e.0, e.1) == (r, o)) {
                g.nodes[s].successors.push((r, o, NO_DEPS));
            }
        }
        if let Outcome::Unsat(_) = search.solve(g, 0)? {
            return Ok(false);
        }
    }
    Ok(true)
}
