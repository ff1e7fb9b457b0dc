//! Transition monoids: breadth-first enumeration, 1-boundedness and aperiodicity.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use crate::alphabet::Word;
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::flow::TransitionMatrix;
use crate::sst::Sst;

pub const DEFAULT_CAP: usize = 100_000;

/// Anything with an associative product.
pub trait MonoidElement: Clone + Eq + Hash {
    fn product(&self, other: &Self) -> Self;
}

impl MonoidElement for TransitionMatrix {
    fn product(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
}

/// A total function on automaton states, composed left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transformation(pub Vec<usize>);

impl MonoidElement for Transformation {
    fn product(&self, other: &Self) -> Self {
        Transformation(self.0.iter().map(|&q| other.0[q]).collect())
    }
}

/// Square Boolean matrix under the (or, and) product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(n: usize) -> Self {
        BoolMatrix {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.n + j] = v;
    }
}

impl MonoidElement for BoolMatrix {
    fn product(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = BoolMatrix::new(n);
        for i in 0..n {
            for k in 0..n {
                if self.bits[i * n + k] {
                    for j in 0..n {
                        if other.bits[k * n + j] {
                            out.bits[i * n + j] = true;
                        }
                    }
                }
            }
        }
        out
    }
}

/// The monoid generated by one element per letter, listed in the order
/// breadth-first search discovers them, so representatives are shortlex-least.
#[derive(Debug, Clone)]
pub struct MonoidTable<E> {
    elements: Vec<E>,
    representatives: Vec<Word>,
    lookup: HashMap<E, usize>,
    generators: Vec<usize>,
    // right[e][a] = e · gen(a), None when cut off by the cap
    right: Vec<Vec<Option<usize>>>,
    truncated: bool,
}

impl<E: MonoidElement> MonoidTable<E> {
    pub fn generate(identity: E, generators: &[E], cap: usize) -> Self {
        let cap = cap.max(1);
        let mut t = MonoidTable {
            elements: vec![identity.clone()],
            representatives: vec![Vec::new()],
            lookup: HashMap::from([(identity, 0)]),
            generators: Vec::new(),
            right: Vec::new(),
            truncated: false,
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            let mut row = Vec::with_capacity(generators.len());
            for (a, g) in generators.iter().enumerate() {
                let m = t.elements[e].product(g);
                let id = match t.lookup.get(&m) {
                    Some(&id) => Some(id),
                    None if t.elements.len() < cap => {
                        let id = t.elements.len();
                        let mut rep = t.representatives[e].clone();
                        rep.push(a);
                        t.elements.push(m.clone());
                        t.representatives.push(rep);
                        t.lookup.insert(m, id);
                        queue.push_back(id);
                        Some(id)
                    }
                    None => {
                        t.truncated = true;
                        None
                    }
                };
                row.push(id);
            }
            t.right.push(row);
        }
        t.generators = t.right[0].iter().map(|g| g.unwrap_or(usize::MAX)).collect();
        t
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    /// Shortlex-least word generating element `i`.
    pub fn representative(&self, i: usize) -> &Word {
        &self.representatives[i]
    }

    pub fn generator(&self, letter: usize) -> Option<usize> {
        self.generators.get(letter).copied().filter(|&g| g != usize::MAX)
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.lookup.get(e).copied()
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Index of `elements[i] · elements[j]`, if it was enumerated.
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        self.representatives[j]
            .iter()
            .try_fold(i, |e, &a| self.right[e][a])
    }

    /// Full multiplication table; `None` for truncated monoids.
    pub fn product_table(&self) -> Option<Vec<Vec<usize>>> {
        if self.truncated {
            return None;
        }
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.product(i, j)).collect())
            .collect()
    }

    /// Aperiodicity of the enumerated elements.
    pub fn aperiodicity(&self) -> AperiodicVerdict {
        let mut bound = 1;
        let mut witness = None;
        for (i, e) in self.elements.iter().enumerate() {
            let (index, period) = power_cycle(e);
            if period > 1 {
                if witness.is_none() {
                    witness = Some(PeriodWitness {
                        word: self.representatives[i].clone(),
                        index,
                        period,
                    });
                }
            } else {
                bound = bound.max(index);
            }
        }
        AperiodicVerdict {
            aperiodic: witness.is_none(),
            witness,
            idempotent_bound: bound,
            truncated: self.truncated,
            saturated: false,
        }
    }
}

/// `(i, p)` with `x^i = x^{i+p}` for the least such `i ≥ 1`, then least `p`.
pub fn power_cycle<E: MonoidElement>(x: &E) -> (usize, usize) {
    let mut seen: HashMap<E, usize> = HashMap::new();
    let mut cur = x.clone();
    let mut m = 1;
    loop {
        if let Some(&i) = seen.get(&cur) {
            return (i, m - i);
        }
        let next = cur.product(x);
        seen.insert(cur, m);
        cur = next;
        m += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodWitness {
    pub word: Word,
    /// The first exponent on the cycle.
    pub index: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AperiodicVerdict {
    pub aperiodic: bool,
    pub witness: Option<PeriodWitness>,
    /// Least `N` with `x^N = x^{N+1}` for every aperiodic element seen.
    pub idempotent_bound: usize,
    pub truncated: bool,
    /// Computed on the `ω`-saturated quotient of a machine that is not 1-bounded.
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedVerdict {
    pub one_bounded: bool,
    pub witness: Option<Word>,
    pub truncated: bool,
}

/// A node of the flow automaton: a state with a variable, or the state alone
/// (the node that tracks whether a run exists at all).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlowNode {
    pub state: usize,
    pub var: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub word: Word,
    pub node: FlowNode,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleVerdict {
    pub cycle: Option<CycleWitness>,
    pub truncated: bool,
}

impl CycleVerdict {
    pub fn aperiodic(&self) -> bool {
        self.cycle.is_none()
    }
}

pub fn enumerate_monoid(t: &Sst, cap: usize) -> MonoidTable<TransitionMatrix> {
    let id = TransitionMatrix::identity(t.matrix_index());
    MonoidTable::generate(id, &t.letter_matrices(), cap)
}

/// 1-boundedness from an enumerated monoid. The witness prefers words whose
/// multiple flow starts at the initial state, then any word.
pub fn one_bounded_of(monoid: &MonoidTable<TransitionMatrix>, initial: usize) -> BoundedVerdict {
    let from_initial = monoid
        .elements()
        .iter()
        .position(|m| m.omega_from_state(initial));
    let any = || monoid.elements().iter().position(TransitionMatrix::contains_omega);
    let hit = from_initial.or_else(any);
    BoundedVerdict {
        one_bounded: hit.is_none(),
        witness: hit.map(|i| monoid.representative(i).clone()),
        truncated: monoid.truncated(),
    }
}

pub fn check_one_bounded(t: &Sst) -> BoundedVerdict {
    one_bounded_of(&enumerate_monoid(t, DEFAULT_CAP), t.initial())
}

pub fn check_aperiodic(t: &Sst) -> AperiodicVerdict {
    let monoid = enumerate_monoid(t, DEFAULT_CAP);
    aperiodic_of(&monoid, t.initial())
}

pub fn aperiodic_of(monoid: &MonoidTable<TransitionMatrix>, initial: usize) -> AperiodicVerdict {
    let mut v = monoid.aperiodicity();
    v.saturated = !one_bounded_of(monoid, initial).one_bounded;
    v
}

/// Boolean image of a flow matrix in the flow automaton: variable nodes first
/// (state-major), then one node per state when there are variables.
fn flow_automaton_matrix(m: &TransitionMatrix) -> BoolMatrix {
    let idx = m.index();
    let (n, k) = (idx.states.len(), idx.vars.len());
    let phantom = if k > 0 { n } else { 0 };
    let size = n * k + phantom;
    let mut b = BoolMatrix::new(size);
    for i in 0..n * k {
        for j in 0..n * k {
            b.set(i, j, m.get(i, j).flows());
        }
    }
    if phantom > 0 {
        let states = crate::flow::project_states(m);
        for p in 0..n {
            for q in 0..n {
                b.set(n * k + p, n * k + q, states[p][q]);
            }
        }
    }
    b
}

pub fn nontrivial_cycle_check(t: &Sst) -> Result<CycleVerdict> {
    let monoid = enumerate_monoid(t, DEFAULT_CAP);
    nontrivial_cycle_of(&monoid)
}

/// Search for `u`, a node `v` and `r` with no `u`-loop at `v` but a `u^r`-loop.
pub fn nontrivial_cycle_of(monoid: &MonoidTable<TransitionMatrix>) -> Result<CycleVerdict> {
    if monoid.elements().iter().any(TransitionMatrix::contains_omega) {
        return Err(Error::Precondition(
            "the non-trivial cycle check requires a 1-bounded machine".into(),
        ));
    }
    let Some(first) = monoid.elements().first() else {
        return Ok(CycleVerdict {
            cycle: None,
            truncated: monoid.truncated(),
        });
    };
    let idx = first.index().clone();
    let (n, k) = (idx.states.len(), idx.vars.len());
    for (e, m) in monoid.elements().iter().enumerate() {
        let b = flow_automaton_matrix(m);
        let size = b.dim();
        let mut powers = vec![b.clone()];
        for _ in 1..size {
            let next = powers.last().unwrap().product(&b);
            powers.push(next);
        }
        for v in 0..size {
            if b.get(v, v) {
                continue;
            }
            if let Some(r) = (2..=size).find(|&r| powers[r - 1].get(v, v)) {
                let node = if v < n * k {
                    FlowNode {
                        state: v / k,
                        var: Some(v % k),
                    }
                } else {
                    FlowNode {
                        state: v - n * k,
                        var: None,
                    }
                };
                return Ok(CycleVerdict {
                    cycle: Some(CycleWitness {
                        word: monoid.representative(e).clone(),
                        node,
                        r,
                    }),
                    truncated: monoid.truncated(),
                });
            }
        }
    }
    Ok(CycleVerdict {
        cycle: None,
        truncated: monoid.truncated(),
    })
}

pub fn dfa_monoid(a: &Dfa, cap: usize) -> MonoidTable<Transformation> {
    let id = Transformation((0..a.num_states()).collect());
    let gens: Vec<Transformation> = (0..a.alphabet().len())
        .map(|c| Transformation((0..a.num_states()).map(|p| a.step(p, c)).collect()))
        .collect();
    MonoidTable::generate(id, &gens, cap)
}

pub fn dfa_aperiodic(a: &Dfa) -> AperiodicVerdict {
    dfa_monoid(a, DEFAULT_CAP).aperiodicity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    #[test]
    fn cyclic_group_has_period() {
        let t = Transformation(vec![1, 2, 0]);
        assert_eq!(power_cycle(&t), (1, 3));
        let c = Transformation(vec![0, 0, 1]);
        assert_eq!(power_cycle(&c), (2, 1));
    }

    #[test]
    fn even_length_automaton_is_periodic() {
        let al = Alphabet::new(["a"]).unwrap();
        let d = Dfa::new(al, vec!["e".into(), "o".into()], vec![vec![1], vec![0]], vec![true, false]).unwrap();
        let m = dfa_monoid(&d, DEFAULT_CAP);
        assert_eq!(m.len(), 2);
        let v = dfa_aperiodic(&d);
        assert!(!v.aperiodic);
        assert_eq!(v.witness.unwrap().word, vec![0]);
    }

    #[test]
    fn product_table_is_closed() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let d = Dfa::new(al, vec!["0".into(), "1".into(), "2".into()], vec![vec![1, 0], vec![2, 0], vec![2, 2]], vec![false, false, true]).unwrap();
        let m = dfa_monoid(&d, DEFAULT_CAP);
        let table = m.product_table().unwrap();
        for (i, row) in table.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                assert_eq!(m.element(i).product(m.element(j)), *m.element(p));
            }
        }
    }

    #[test]
    fn cap_truncates() {
        let al = Alphabet::new(["a"]).unwrap();
        let d = Dfa::new(al, (0..5).map(|i| i.to_string()).collect(), (0..5).map(|i| vec![(i + 1) % 5]).collect(), vec![true; 5]).unwrap();
        let m = dfa_monoid(&d, 3);
        assert_eq!(m.len(), 3);
        assert!(m.truncated());
        assert!(m.product_table().is_none());
    }
}
