//! Complete deterministic automata, used as lookahead automata.

use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Word};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    states: Vec<String>,
    // indexed [state][letter]
    delta: Vec<Vec<usize>>,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn new(alphabet: Alphabet, states: Vec<String>, delta: Vec<Vec<usize>>, finals: Vec<bool>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(invalid("automaton needs at least one state"));
        }
        if delta.len() != n || finals.len() != n {
            return Err(invalid("transition table does not match the state set"));
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&t| t >= n) {
                return Err(invalid("transition table must be total over the alphabet"));
            }
        }
        Ok(Dfa {
            alphabet,
            states,
            delta,
            finals,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn step(&self, p: usize, letter: usize) -> usize {
        self.delta[p][letter]
    }

    pub fn is_final(&self, p: usize) -> bool {
        self.finals[p]
    }

    pub fn run(&self, p: usize, word: &[usize]) -> usize {
        word.iter().fold(p, |q, &a| self.delta[q][a])
    }

    /// Whether `word ∈ L(A_p)`.
    pub fn accepts_from(&self, p: usize, word: &[usize]) -> bool {
        self.finals[self.run(p, word)]
    }

    /// Shortlex-least word accepted from both `p1` and `p2`, if any.
    pub fn common_word(&self, p1: usize, p2: usize) -> Option<Word> {
        let mut prev: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::new();
        let mut queue = VecDeque::from([(p1, p2)]);
        prev.insert((p1, p2), None);
        while let Some(cur) = queue.pop_front() {
            if self.finals[cur.0] && self.finals[cur.1] {
                let mut word = Vec::new();
                let mut at = cur;
                while let Some(Some((from, a))) = prev.get(&at) {
                    word.push(*a);
                    at = *from;
                }
                word.reverse();
                return Some(word);
            }
            for a in 0..self.alphabet.len() {
                let next = (self.delta[cur.0][a], self.delta[cur.1][a]);
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(next) {
                    e.insert(Some((cur, a)));
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // states: 0 = last letter was b (or ε), 1 = last letter was a
    fn ends_with_a() -> Dfa {
        let al = Alphabet::new(["a", "b"]).unwrap();
        Dfa::new(al, vec!["n".into(), "y".into()], vec![vec![1, 0], vec![1, 0]], vec![false, true]).unwrap()
    }

    #[test]
    fn runs_and_accepts() {
        let d = ends_with_a();
        assert!(d.accepts_from(0, &[1, 0]));
        assert!(!d.accepts_from(0, &[0, 1]));
        assert!(!d.accepts_from(0, &[]));
        assert!(d.accepts_from(1, &[]));
    }

    #[test]
    fn common_word_is_shortlex_least() {
        let d = ends_with_a();
        assert_eq!(d.common_word(0, 1), Some(vec![0]));
        assert_eq!(d.common_word(1, 1), Some(vec![]));
    }

    #[test]
    fn partial_table_is_rejected() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        assert!(Dfa::new(al, vec!["p".into()], vec![vec![0]], vec![true]).is_err());
    }
}
