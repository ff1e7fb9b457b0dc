//! Variable flow: the saturated counting semiring and transition matrices.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul};
use std::sync::Arc;

use serde::Serialize;

use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::sst::Sst;
use crate::subst::Token;

/// Flow counts abstracted to `{⊥, 0, 1, ω}`, where `ω` stands for "two or more"
/// and `⊥` for "no run".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FlowValue {
    Bot,
    Zero,
    One,
    Omega,
}

impl FlowValue {
    pub fn from_count(n: usize) -> Self {
        match n {
            0 => FlowValue::Zero,
            1 => FlowValue::One,
            _ => FlowValue::Omega,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            FlowValue::Bot => '_',
            FlowValue::Zero => '0',
            FlowValue::One => '1',
            FlowValue::Omega => 'w',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        Some(match c {
            '_' => FlowValue::Bot,
            '0' => FlowValue::Zero,
            '1' => FlowValue::One,
            'w' => FlowValue::Omega,
            _ => return None,
        })
    }

    /// At least one copy flows.
    pub fn flows(self) -> bool {
        self >= FlowValue::One
    }
}

impl fmt::Display for FlowValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Add for FlowValue {
    type Output = FlowValue;

    fn add(self, rhs: FlowValue) -> FlowValue {
        use FlowValue::*;
        match (self, rhs) {
            (Bot, x) | (x, Bot) => x,
            (Zero, x) | (x, Zero) => x,
            _ => Omega,
        }
    }
}

impl Mul for FlowValue {
    type Output = FlowValue;

    fn mul(self, rhs: FlowValue) -> FlowValue {
        use FlowValue::*;
        match (self, rhs) {
            (Bot, _) | (_, Bot) => Bot,
            (Zero, _) | (_, Zero) => Zero,
            (One, x) | (x, One) => x,
            (Omega, Omega) => Omega,
        }
    }
}

/// Row/column labels of a transition matrix: every `(state, variable)` pair,
/// state-major in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixIndex {
    pub states: Vec<String>,
    pub vars: Vec<String>,
}

impl MatrixIndex {
    pub fn new(states: Vec<String>, vars: Vec<String>) -> Arc<Self> {
        Arc::new(MatrixIndex { states, vars })
    }

    pub fn dim(&self) -> usize {
        self.states.len() * self.vars.len()
    }

    pub fn pos(&self, state: usize, var: usize) -> usize {
        state * self.vars.len() + var
    }

    /// `(state, var)` of a row or column.
    pub fn pair(&self, pos: usize) -> (usize, usize) {
        (pos / self.vars.len(), pos % self.vars.len())
    }

    pub fn label(&self, pos: usize) -> String {
        let (q, x) = self.pair(pos);
        format!("({},{})", self.states[q], self.vars[x])
    }
}

#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    index: Arc<MatrixIndex>,
    entries: Vec<FlowValue>,
}

impl PartialEq for TransitionMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.index == other.index
    }
}

impl Eq for TransitionMatrix {}

impl Hash for TransitionMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl TransitionMatrix {
    pub fn filled(index: Arc<MatrixIndex>, value: FlowValue) -> Self {
        let n = index.dim();
        TransitionMatrix {
            index,
            entries: vec![value; n * n],
        }
    }

    /// Matrix of the empty word: `1` on the diagonal, `0` between distinct
    /// variables of one state, `⊥` across states.
    pub fn identity(index: Arc<MatrixIndex>) -> Self {
        let mut m = Self::filled(index, FlowValue::Bot);
        let k = m.index.vars.len();
        for q in 0..m.index.states.len() {
            for x in 0..k {
                for y in 0..k {
                    let v = if x == y { FlowValue::One } else { FlowValue::Zero };
                    m.set(q * k + x, q * k + y, v);
                }
            }
        }
        m
    }

    pub fn from_entries(index: Arc<MatrixIndex>, entries: Vec<FlowValue>) -> Result<Self> {
        let n = index.dim();
        if entries.len() != n * n {
            return Err(Error::IndexMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(TransitionMatrix { index, entries })
    }

    pub fn index(&self) -> &Arc<MatrixIndex> {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn entries(&self) -> &[FlowValue] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> FlowValue {
        self.entries[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: FlowValue) {
        let n = self.dim();
        self.entries[row * n + col] = v;
    }

    /// Entry `[(p, x)][(q, y)]`.
    pub fn at(&self, p: usize, x: usize, q: usize, y: usize) -> FlowValue {
        self.get(self.index.pos(p, x), self.index.pos(q, y))
    }

    pub fn mul(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.index != other.index {
            return Err(Error::IndexMismatch(
                "matrices are indexed by different (state, variable) sets".into(),
            ));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let n = self.dim();
        let mut entries = vec![FlowValue::Bot; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == FlowValue::Bot {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[k * n + j];
                    if b != FlowValue::Bot {
                        let c = &mut entries[i * n + j];
                        *c = *c + a * b;
                    }
                }
            }
        }
        TransitionMatrix {
            index: self.index.clone(),
            entries,
        }
    }

    pub fn contains_omega(&self) -> bool {
        self.entries.contains(&FlowValue::Omega)
    }

    /// Some entry in a row belonging to `state` is `ω`.
    pub fn omega_from_state(&self, state: usize) -> bool {
        let k = self.index.vars.len();
        let n = self.dim();
        (state * k..(state + 1) * k).any(|r| self.entries[r * n..(r + 1) * n].contains(&FlowValue::Omega))
    }

    /// Row-major text with `(state,var)` headers and entries in `{_, 0, 1, w}`.
    pub fn render(&self) -> String {
        let n = self.dim();
        let labels: Vec<String> = (0..n).map(|i| self.index.label(i)).collect();
        let width = labels.iter().map(String::len).max().unwrap_or(0);
        let mut s = format!("{:width$}", "");
        for l in &labels {
            s.push(' ');
            s.push_str(&format!("{l:>width$}"));
        }
        s.push('\n');
        for (i, l) in labels.iter().enumerate() {
            s.push_str(&format!("{l:width$}"));
            for j in 0..n {
                s.push_str(&format!(" {:>width$}", self.get(i, j).symbol()));
            }
            s.push('\n');
        }
        s
    }

    /// Entry rows as strings of `{_,0,1,w}`, for compact reports.
    pub fn rows(&self) -> Vec<String> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).symbol()).collect())
            .collect()
    }
}

impl Sst {
    pub fn matrix_index(&self) -> Arc<MatrixIndex> {
        MatrixIndex::new(self.states().to_vec(), self.vars().to_vec())
    }

    /// `M_a`: row `(p, Y)`, column `(q, X)` counts `Y` in `ρ(p,a)(X)` when `δ(p,a) = q`.
    pub fn letter_matrix(&self, index: &Arc<MatrixIndex>, letter: usize) -> TransitionMatrix {
        let mut m = TransitionMatrix::filled(index.clone(), FlowValue::Bot);
        let k = self.num_vars();
        for p in 0..self.num_states() {
            let Some((q, rho)) = self.transition(p, letter) else {
                continue;
            };
            for x in 0..k {
                for y in 0..k {
                    let v = FlowValue::from_count(rho.occurrences(x, y));
                    m.set(p * k + y, q * k + x, v);
                }
            }
        }
        m
    }

    pub fn letter_matrices(&self) -> Vec<TransitionMatrix> {
        let index = self.matrix_index();
        (0..self.input().len())
            .map(|a| self.letter_matrix(&index, a))
            .collect()
    }

    /// `M_s` as the product of letter matrices.
    pub fn matrix_of_string(&self, word: &[usize]) -> TransitionMatrix {
        let index = self.matrix_index();
        let mut m = TransitionMatrix::identity(index.clone());
        for &a in word {
            m = m.mul_unchecked(&self.letter_matrix(&index, a));
        }
        m
    }

    /// How many copies of `src` (a variable at state `p`) flow into `dst`
    /// (a variable at state `q`) along `word`, from composing the run's substitutions.
    pub fn flow_count(&self, word: &[usize], src: (usize, usize), dst: (usize, usize)) -> FlowValue {
        let (p, x) = src;
        let (q, y) = dst;
        let Ok(Some(run)) = self.run_from(p, word) else {
            return FlowValue::Bot;
        };
        if run.last_state() != q {
            return FlowValue::Bot;
        }
        let sigma = run.sigma(word.len());
        let n = sigma.image(y).iter().filter(|t| **t == Token::Var(x)).count();
        FlowValue::from_count(n)
    }

    /// Boolean state matrix: `[p][q]` holds when the word leads from `p` to `q`.
    pub fn underlying_monoid_matrix(&self, word: &[usize]) -> Vec<Vec<bool>> {
        let n = self.num_states();
        if self.num_vars() > 0 {
            project_states(&self.matrix_of_string(word))
        } else {
            (0..n)
                .map(|p| {
                    let r = self.reach(p, word);
                    (0..n).map(|q| r == Some(q)).collect()
                })
                .collect()
        }
    }

    /// Whether `(X, i)` contributes to the output: the content of `X` after `i`
    /// letters flows into some variable of `F(q_n)` (positions are 0-based).
    pub fn useful(&self, word: &[usize], i: usize, var: usize) -> Result<bool> {
        let run = self.run(word)?.ok_or(Error::DomainMiss)?;
        let qn = run.last_state();
        let f = self.out(qn).ok_or(Error::DomainMiss)?;
        if i > word.len() {
            return Err(Error::OutOfRange {
                pos: i,
                len: word.len(),
            });
        }
        let qi = run.states[i];
        let suffix: Word = word[i..].to_vec();
        Ok(f.iter()
            .any(|&y| self.flow_count(&suffix, (qi, var), (qn, y)).flows()))
    }
}

/// Boolean projection onto states: `[p][q]` holds iff some entry of the block is not `⊥`.
pub fn project_states(m: &TransitionMatrix) -> Vec<Vec<bool>> {
    let idx = m.index();
    let (n, k) = (idx.states.len(), idx.vars.len());
    (0..n)
        .map(|p| {
            (0..n)
                .map(|q| {
                    (0..k).any(|x| (0..k).any(|y| m.at(p, x, q, y) != FlowValue::Bot))
                })
                .collect()
        })
        .collect()
}
