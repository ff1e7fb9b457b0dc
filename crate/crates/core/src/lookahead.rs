//! SSTs with regular lookahead, and their translation into plain SSTs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::alphabet::{Alphabet, Word};
use crate::dfa::Dfa;
use crate::error::{syntax, Error, Result};
use crate::flow::{FlowValue, MatrixIndex, TransitionMatrix};
use crate::monoid::{self, MonoidTable};
use crate::parse;
use crate::sst::{self, render_block, Sst};
use crate::subst::{Substitution, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaTransition {
    pub from: usize,
    pub letter: usize,
    pub guard: usize,
    pub to: usize,
    pub update: Substitution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SstLa {
    input: Alphabet,
    output: Alphabet,
    states: Vec<String>,
    initial: usize,
    vars: Vec<String>,
    la: Dfa,
    transitions: Vec<LaTransition>,
    out: Vec<Option<Vec<usize>>>,
}

/// A state together with the lookahead states whose languages the rest of
/// the input must belong to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Config {
    pub state: usize,
    pub set: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LaRun {
    pub configs: Vec<Config>,
    /// Index into the transition list for every step.
    pub transitions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutexViolation {
    pub state: usize,
    pub letter: usize,
    pub guards: (usize, usize),
    pub witness: Word,
}

impl SstLa {
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        states: Vec<String>,
        initial: usize,
        vars: Vec<String>,
        la: Dfa,
    ) -> Result<Self> {
        if states.is_empty() || initial >= states.len() {
            return Err(Error::Invalid("bad state set or initial state".into()));
        }
        if la.alphabet() != &input {
            return Err(Error::Invalid("lookahead automaton must read the input alphabet".into()));
        }
        let n = states.len();
        Ok(SstLa {
            input,
            output,
            states,
            initial,
            vars,
            la,
            transitions: Vec::new(),
            out: vec![None; n],
        })
    }

    pub fn add_transition(&mut self, t: LaTransition) -> Result<()> {
        let n = self.states.len();
        if t.from >= n || t.to >= n || t.letter >= self.input.len() || t.guard >= self.la.num_states() {
            return Err(Error::Invalid("transition refers to unknown names".into()));
        }
        if t.update.num_vars() != self.vars.len() {
            return Err(Error::Invalid("substitution has the wrong number of variables".into()));
        }
        if self
            .transitions
            .iter()
            .any(|u| u.from == t.from && u.letter == t.letter && u.guard == t.guard)
        {
            return Err(Error::Invalid(format!(
                "duplicate transition from `{}` on `{}` with lookahead `{}`",
                self.states[t.from],
                self.input.letter(t.letter),
                self.la.states()[t.guard]
            )));
        }
        self.transitions.push(t);
        Ok(())
    }

    pub fn set_final(&mut self, state: usize, out: Vec<usize>) -> Result<()> {
        if state >= self.states.len() || out.iter().any(|&x| x >= self.vars.len()) {
            return Err(Error::Invalid("bad final state or output".into()));
        }
        self.out[state] = Some(out);
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_sstla(text)
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn la(&self) -> &Dfa {
        &self.la
    }

    pub fn transitions(&self) -> &[LaTransition] {
        &self.transitions
    }

    pub fn out(&self, q: usize) -> Option<&[usize]> {
        self.out[q].as_deref()
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.out[q].is_some()
    }

    fn outgoing(&self, q: usize, a: usize) -> impl Iterator<Item = (usize, &LaTransition)> {
        self.transitions
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.from == q && t.letter == a)
    }

    pub fn is_accepting(&self, c: &Config) -> bool {
        self.is_final(c.state) && c.set.iter().all(|&p| self.la.is_final(p))
    }

    /// Successor configurations on `a`, one per applicable transition.
    pub fn step(&self, c: &Config, a: usize) -> Vec<(Config, usize)> {
        let moved: BTreeSet<usize> = c.set.iter().map(|&p| self.la.step(p, a)).collect();
        self.outgoing(c.state, a)
            .map(|(i, t)| {
                let mut set = moved.clone();
                set.insert(t.guard);
                (Config { state: t.to, set }, i)
            })
            .collect()
    }

    pub fn initial_config(&self) -> Config {
        Config {
            state: self.initial,
            set: BTreeSet::new(),
        }
    }

    pub fn config_name(&self, c: &Config) -> String {
        let set = if c.set.is_empty() {
            "0".to_string()
        } else {
            c.set
                .iter()
                .map(|&p| self.la.states()[p].as_str())
                .collect::<Vec<_>>()
                .join("+")
        };
        format!("{}.{}", self.states[c.state], set)
    }

    /// For every pair of distinct guards on one state and letter, the
    /// shortlex-least word both accept, if any.
    pub fn mutual_exclusive_check(&self) -> Option<MutexViolation> {
        for q in 0..self.states.len() {
            for a in 0..self.input.len() {
                let guards: BTreeSet<usize> = self.outgoing(q, a).map(|(_, t)| t.guard).collect();
                let guards: Vec<usize> = guards.into_iter().collect();
                for (x, &p1) in guards.iter().enumerate() {
                    for &p2 in &guards[x + 1..] {
                        if let Some(w) = self.la.common_word(p1, p2) {
                            return Some(MutexViolation {
                                state: q,
                                letter: a,
                                guards: (p1, p2),
                                witness: w,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// The accepting run, `Ok(None)` when there is none.
    pub fn la_run(&self, word: &[usize]) -> Result<Option<LaRun>> {
        if let Some(&a) = word.iter().find(|&&a| a >= self.input.len()) {
            return Err(Error::UnknownLetter(a.to_string()));
        }
        let n = word.len();
        let k = self.la.num_states();
        // accepts[i][p]: the suffix after position i is in L(A_p)
        let mut accepts = vec![vec![false; k]; n + 1];
        for p in 0..k {
            accepts[n][p] = self.la.is_final(p);
        }
        for i in (0..n).rev() {
            for p in 0..k {
                accepts[i][p] = accepts[i + 1][self.la.step(p, word[i])];
            }
        }
        let mut cur = self.initial_config();
        let mut configs = vec![cur.clone()];
        let mut used = Vec::with_capacity(n);
        for (i, &a) in word.iter().enumerate() {
            let mut cands = self
                .step(&cur, a)
                .into_iter()
                .filter(|(_, t)| accepts[i + 1][self.transitions[*t].guard]);
            let Some((next, t)) = cands.next() else {
                return Ok(None);
            };
            if cands.next().is_some() {
                return Err(Error::LookaheadConflict {
                    state: self.states[cur.state].clone(),
                    letter: self.input.letter(a).to_string(),
                });
            }
            used.push(t);
            configs.push(next.clone());
            cur = next;
        }
        if !self.is_final(cur.state) {
            return Ok(None);
        }
        Ok(Some(LaRun {
            configs,
            transitions: used,
        }))
    }

    pub fn la_output(&self, word: &[usize]) -> Result<Option<Word>> {
        let Some(run) = self.la_run(word)? else {
            return Ok(None);
        };
        let mut val: Vec<Word> = vec![Vec::new(); self.vars.len()];
        for &t in &run.transitions {
            val = self.transitions[t]
                .update
                .images()
                .iter()
                .map(|img| expand(img, &val))
                .collect();
        }
        let last = run.configs.last().unwrap().state;
        Ok(self.out[last]
            .as_ref()
            .map(|f| f.iter().flat_map(|&x| val[x].iter().copied()).collect()))
    }

    pub fn transform(&self, input: &str) -> Result<Option<String>> {
        let w = self.input.parse_word(input)?;
        Ok(self.la_output(&w)?.map(|o| self.output.render(&o)))
    }

    /// Configurations reachable from the initial one and from which an
    /// accepting configuration is reachable.
    pub fn useful_configs(&self) -> BTreeSet<Config> {
        let start = self.initial_config();
        let mut seen: HashMap<Config, usize> = HashMap::from([(start.clone(), 0)]);
        let mut list = vec![start];
        let mut back: Vec<Vec<usize>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let c = list[i].clone();
            for a in 0..self.input.len() {
                for (next, _) in self.step(&c, a) {
                    let j = match seen.get(&next) {
                        Some(&j) => j,
                        None => {
                            let j = list.len();
                            seen.insert(next.clone(), j);
                            list.push(next);
                            back.push(Vec::new());
                            queue.push_back(j);
                            j
                        }
                    };
                    back[j].push(i);
                }
            }
        }
        let mut co = vec![false; list.len()];
        let mut queue: VecDeque<usize> = (0..list.len()).filter(|&i| self.is_accepting(&list[i])).collect();
        for &i in &queue {
            co[i] = true;
        }
        while let Some(j) = queue.pop_front() {
            for &i in &back[j] {
                if !co[i] {
                    co[i] = true;
                    queue.push_back(i);
                }
            }
        }
        list.into_iter().zip(co).filter(|(_, u)| *u).map(|(c, _)| c).collect()
    }

    /// Distinct guards on one state and letter lead to distinct targets.
    pub fn satisfies_star(&self) -> bool {
        self.transitions.iter().enumerate().all(|(i, t)| {
            self.transitions[i + 1..]
                .iter()
                .all(|u| !(u.from == t.from && u.letter == t.letter && u.guard != t.guard && u.to == t.to))
        })
    }

    /// Split target states by guard so that [`SstLa::satisfies_star`] holds.
    /// The copy of `q` entered under guard `p` is named `q~p`.
    pub fn normalize_star(&self) -> SstLa {
        if self.satisfies_star() {
            return self.clone();
        }
        // new states: None = the original initial state, Some(p) = entered under guard p
        type Key = (usize, Option<usize>);
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut keys: Vec<Key> = Vec::new();
        let mut intern = |k: Key, keys: &mut Vec<Key>| -> (usize, bool) {
            if let Some(&i) = index.get(&k) {
                return (i, false);
            }
            let i = keys.len();
            index.insert(k, i);
            keys.push(k);
            (i, true)
        };
        intern((self.initial, None), &mut keys);
        let mut queue = VecDeque::from([0usize]);
        let mut new_trans = Vec::new();
        while let Some(i) = queue.pop_front() {
            let (q, _) = keys[i];
            for t in self.transitions.iter().filter(|t| t.from == q) {
                let (j, fresh) = intern((t.to, Some(t.guard)), &mut keys);
                if fresh {
                    queue.push_back(j);
                }
                new_trans.push(LaTransition {
                    from: i,
                    letter: t.letter,
                    guard: t.guard,
                    to: j,
                    update: t.update.clone(),
                });
            }
        }
        let names = keys
            .iter()
            .map(|&(q, g)| match g {
                None => self.states[q].clone(),
                Some(p) => format!("{}~{}", self.states[q], self.la.states()[p]),
            })
            .collect();
        let out = keys.iter().map(|&(q, _)| self.out[q].clone()).collect();
        SstLa {
            input: self.input.clone(),
            output: self.output.clone(),
            states: names,
            initial: 0,
            vars: self.vars.clone(),
            la: self.la.clone(),
            transitions: new_trans,
            out,
        }
    }

    /// Flow matrix of one letter between useful configurations.
    fn la_letter_matrix(&self, idx: &std::sync::Arc<MatrixIndex>, configs: &[Config], a: usize) -> TransitionMatrix {
        let pos: HashMap<&Config, usize> = configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let k = self.vars.len();
        let mut m = TransitionMatrix::filled(idx.clone(), FlowValue::Bot);
        for (ci, c) in configs.iter().enumerate() {
            for (next, t) in self.step(c, a) {
                let Some(&cj) = pos.get(&next) else { continue };
                let rho = &self.transitions[t].update;
                for x in 0..k {
                    for y in 0..k {
                        let (r, col) = (ci * k + y, cj * k + x);
                        let v = m.get(r, col) + FlowValue::from_count(rho.occurrences(x, y));
                        m.set(r, col, v);
                    }
                }
            }
        }
        m
    }

    fn config_index(&self) -> (Vec<Config>, std::sync::Arc<MatrixIndex>) {
        let configs: Vec<Config> = self.useful_configs().into_iter().collect();
        let names = configs.iter().map(|c| self.config_name(c)).collect();
        (configs, MatrixIndex::new(names, self.vars.clone()))
    }

    /// Flow matrix of `word` indexed by useful configurations and variables.
    pub fn la_matrix(&self, word: &[usize]) -> TransitionMatrix {
        let (configs, idx) = self.config_index();
        let mut m = TransitionMatrix::identity(idx.clone());
        for &a in word {
            m = m.mul_unchecked(&self.la_letter_matrix(&idx, &configs, a));
        }
        m
    }

    pub fn enumerate_monoid(&self, cap: usize) -> MonoidTable<TransitionMatrix> {
        let (configs, idx) = self.config_index();
        let gens: Vec<TransitionMatrix> = (0..self.input.len())
            .map(|a| self.la_letter_matrix(&idx, &configs, a))
            .collect();
        MonoidTable::generate(TransitionMatrix::identity(idx), &gens, cap)
    }

    /// Subset construction over useful configurations.
    pub fn eliminate_lookahead(&self) -> Result<Sst> {
        if let Some(v) = self.mutual_exclusive_check() {
            return Err(Error::Precondition(format!(
                "lookaheads of `{}` on `{}` overlap (witness `{}`)",
                self.states[v.state],
                self.input.letter(v.letter),
                self.input.render(&v.witness)
            )));
        }
        if !self.satisfies_star() {
            return Err(Error::Precondition(
                "distinct lookaheads share a target state; normalize first".into(),
            ));
        }
        let configs: Vec<Config> = self.useful_configs().into_iter().collect();
        let cpos: BTreeMap<&Config, usize> = configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let k = self.vars.len();
        let var_names: Vec<String> = configs
            .iter()
            .flat_map(|c| {
                let cn = self.config_name(c);
                self.vars.iter().map(move |x| format!("{x}@{cn}"))
            })
            .collect();
        let var_of = |c: usize, x: usize| c * k + x;

        let start: BTreeSet<usize> = cpos.get(&self.initial_config()).copied().into_iter().collect();
        let mut subsets = vec![start.clone()];
        let mut sindex: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start, 0)]);
        let mut edges: Vec<(usize, usize, usize, Substitution)> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(si) = queue.pop_front() {
            let s = subsets[si].clone();
            for a in 0..self.input.len() {
                // target config -> (minimal predecessor, transition)
                let mut pre: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
                for &ci in &s {
                    for (next, t) in self.step(&configs[ci], a) {
                        if let Some(&cj) = cpos.get(&next) {
                            pre.entry(cj).or_insert((ci, t));
                        }
                    }
                }
                if pre.is_empty() {
                    continue;
                }
                let target: BTreeSet<usize> = pre.keys().copied().collect();
                let ti = match sindex.get(&target) {
                    Some(&ti) => ti,
                    None => {
                        let ti = subsets.len();
                        sindex.insert(target.clone(), ti);
                        subsets.push(target);
                        queue.push_back(ti);
                        ti
                    }
                };
                let mut images = vec![Vec::new(); configs.len() * k];
                for (&cj, &(ci, t)) in &pre {
                    let rho = &self.transitions[t].update;
                    for x in 0..k {
                        images[var_of(cj, x)] = rho
                            .image(x)
                            .iter()
                            .map(|tok| match *tok {
                                Token::Var(y) => Token::Var(var_of(ci, y)),
                                l => l,
                            })
                            .collect();
                    }
                }
                edges.push((si, a, ti, Substitution::from_images(images)));
            }
        }
        let names: Vec<String> = (0..subsets.len()).map(|i| format!("S{i}")).collect();
        let mut t = Sst::new(self.input.clone(), self.output.clone(), names, 0, var_names)?;
        for (from, a, to, rho) in edges {
            t.add_transition(from, a, to, rho)?;
        }
        for (si, s) in subsets.iter().enumerate() {
            if let Some(&ci) = s.iter().find(|&&ci| self.is_accepting(&configs[ci])) {
                let f = self.out[configs[ci].state].as_ref().unwrap();
                t.set_final(si, f.iter().map(|&x| var_of(ci, x)).collect())?;
            }
        }
        Ok(t)
    }

    /// Serialize in the `.sstla` format.
    pub fn to_text(&self) -> String {
        let mut s = String::from("sstla\n");
        let _ = writeln!(s, "input: {}", self.input.letters().join(" "));
        let _ = writeln!(s, "output: {}", self.output.letters().join(" "));
        let _ = writeln!(s, "states: {}", self.states.join(" "));
        let _ = writeln!(s, "initial: {}", self.states[self.initial]);
        let finals: Vec<&str> = (0..self.states.len())
            .filter(|&q| self.is_final(q))
            .map(|q| self.states[q].as_str())
            .collect();
        let _ = writeln!(s, "final: {}", finals.join(" "));
        let _ = writeln!(s, "vars: {}", self.vars.join(" "));
        let _ = writeln!(s, "la-states: {}", self.la.states().join(" "));
        let la_final: Vec<&str> = (0..self.la.num_states())
            .filter(|&p| self.la.is_final(p))
            .map(|p| self.la.states()[p].as_str())
            .collect();
        let _ = writeln!(s, "la-final: {}", la_final.join(" "));
        for q in 0..self.states.len() {
            if let Some(f) = &self.out[q] {
                let f: Vec<&str> = f.iter().map(|&x| self.vars[x].as_str()).collect();
                let _ = writeln!(s, "out {} = {}", self.states[q], f.join(" "));
            }
        }
        for p in 0..self.la.num_states() {
            for a in 0..self.input.len() {
                let _ = writeln!(
                    s,
                    "la {} -{}-> {}",
                    self.la.states()[p],
                    self.input.letter(a),
                    self.la.states()[self.la.step(p, a)]
                );
            }
        }
        for t in &self.transitions {
            let _ = writeln!(
                s,
                "{} -{},{}-> {}{}",
                self.states[t.from],
                self.input.letter(t.letter),
                self.la.states()[t.guard],
                self.states[t.to],
                render_block(&t.update, &self.output, &self.vars)
            );
        }
        s
    }
}

fn expand(img: &[Token], val: &[Word]) -> Word {
    let mut w = Vec::new();
    for t in img {
        match *t {
            Token::Letter(c) => w.push(c),
            Token::Var(x) => w.extend_from_slice(&val[x]),
        }
    }
    w
}

/// Aperiodicity and 1-boundedness of the configuration-indexed monoid.
pub fn la_monoid_verdicts(t: &SstLa) -> (monoid::BoundedVerdict, monoid::AperiodicVerdict) {
    let m = t.enumerate_monoid(monoid::DEFAULT_CAP);
    let initial = t
        .useful_configs()
        .iter()
        .position(|c| *c == t.initial_config())
        .unwrap_or(0);
    (monoid::one_bounded_of(&m, initial), monoid::aperiodic_of(&m, initial))
}

pub fn parse_sstla(text: &str) -> Result<SstLa> {
    let lines = parse::expect_header(text, "sstla")?;
    let mut sec = parse::split_sections(
        lines,
        &[
            "input", "output", "states", "initial", "final", "vars", "la-states", "la-final",
        ],
    )?;
    let (l_la, la_states) = sec.take("la-states", 1)?;
    let (l_laf, la_final) = sec.take("la-final", 1)?;
    if la_states.is_empty() {
        return Err(syntax(l_la, "at least one lookahead state is required"));
    }
    let h = sst::parse_header(&mut sec, &la_states)?;
    let la_idx = parse::name_index(&la_states, "lookahead state", l_la)?;
    let (outs, body) = sst::split_body(&sec.rest);
    let out = sst::parse_outs(&outs, &h)?;
    let (la_lines, trans): (Vec<_>, Vec<_>) = body.into_iter().partition(|(_, l)| l.starts_with("la "));

    let k = h.input.len();
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; k]; la_states.len()];
    for (no, line) in &la_lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let ok = toks.len() == 4 && toks[2].starts_with('-') && toks[2].ends_with("->") && toks[2].len() > 3;
        if !ok {
            return Err(syntax(*no, "expected `la <p> -<letter>-> <p'>`"));
        }
        let p = parse::lookup(&la_idx, toks[1], "lookahead state", *no)?;
        let letter = &toks[2][1..toks[2].len() - 2];
        let a = h
            .input
            .index_of(letter)
            .ok_or_else(|| syntax(*no, format!("undeclared letter `{letter}`")))?;
        let p2 = parse::lookup(&la_idx, toks[3], "lookahead state", *no)?;
        if delta[p][a].replace(p2).is_some() {
            return Err(syntax(*no, "duplicate lookahead transition"));
        }
    }
    let mut table = Vec::with_capacity(la_states.len());
    for (p, row) in delta.into_iter().enumerate() {
        let mut r = Vec::with_capacity(k);
        for (a, t) in row.into_iter().enumerate() {
            r.push(t.ok_or_else(|| {
                syntax(
                    l_la,
                    format!(
                        "lookahead automaton is not total: no move from `{}` on `{}`",
                        la_states[p],
                        h.input.letter(a)
                    ),
                )
            })?);
        }
        table.push(r);
    }
    let mut finals = vec![false; la_states.len()];
    for f in &la_final {
        finals[parse::lookup(&la_idx, f, "lookahead state", l_laf)?] = true;
    }
    let la = Dfa::new(h.input.clone(), la_states.clone(), table, finals)?;
    let mut t = SstLa::new(h.input.clone(), h.output.clone(), h.states.clone(), h.initial, h.vars.clone(), la)?;
    for (no, line) in &trans {
        let raw = parse::parse_transition(*no, line)?;
        let (letter, guard) = raw
            .label
            .rsplit_once(',')
            .ok_or_else(|| syntax(*no, "expected `-<letter>,<lookahead>->`"))?;
        let from = parse::lookup(&h.state_idx, &raw.from, "state", *no)?;
        let to = parse::lookup(&h.state_idx, &raw.to, "state", *no)?;
        let a = h
            .input
            .index_of(letter)
            .ok_or_else(|| syntax(*no, format!("undeclared letter `{letter}`")))?;
        let guard = parse::lookup(&la_idx, guard, "lookahead state", *no)?;
        let update = parse::build_subst(&raw.assigns, &h.output, &h.var_idx, h.vars.len(), *no)?;
        t.add_transition(LaTransition {
            from,
            letter: a,
            guard,
            to,
            update,
        })
        .map_err(|e| syntax(*no, e.to_string()))?;
    }
    t.out = out;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEGENERATE: &str = "sstla
input: a b
output: a b
states: q
initial: q
final: q
vars: X
la-states: all
la-final: all
out q = X
la all -a-> all
la all -b-> all
q -a,all-> q { X := X a }
q -b,all-> q { X := b X }
";

    #[test]
    fn degenerate_machine_behaves_like_its_sst() {
        let t = parse_sstla(DEGENERATE).unwrap();
        assert!(t.mutual_exclusive_check().is_none());
        assert!(t.satisfies_star());
        assert_eq!(t.transform("aab").unwrap().as_deref(), Some("baa"));
        assert_eq!(t.transform("").unwrap().as_deref(), Some(""));
        let e = t.eliminate_lookahead().unwrap();
        assert_eq!(e.transform("abab").unwrap().as_deref(), Some("bbaa"));
    }

    #[test]
    fn partial_lookahead_is_rejected() {
        let text = DEGENERATE.replace("la all -b-> all\n", "");
        assert!(parse_sstla(&text).is_err());
    }

    #[test]
    fn identical_guards_overlap_on_every_word() {
        let text = DEGENERATE
            .replace("la-states: all", "la-states: all other")
            .replace("la-final: all", "la-final: all other")
            + "la other -a-> other\nla other -b-> other\nq -a,other-> q\n";
        let t = parse_sstla(&text).unwrap();
        let v = t.mutual_exclusive_check().unwrap();
        assert_eq!(v.witness, Vec::<usize>::new());
    }

    #[test]
    fn rejecting_lookahead_leaves_only_the_empty_word() {
        let text = DEGENERATE.replace("la-final: all", "la-final:");
        let t = parse_sstla(&text).unwrap();
        assert_eq!(t.useful_configs().len(), 1);
        let e = t.eliminate_lookahead().unwrap();
        for w in crate::alphabet::words_up_to(2, 4) {
            let want = if w.is_empty() { Some(vec![]) } else { None };
            assert_eq!(e.output(&w).unwrap(), want);
            assert_eq!(t.la_output(&w).unwrap(), want);
        }
    }
}
