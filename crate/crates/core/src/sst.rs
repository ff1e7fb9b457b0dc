//! Deterministic streaming string transducers: definition, `.sst` format, execution.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::{Alphabet, Word};
use crate::error::{invalid, syntax, Error, Result};
use crate::parse::{self, RawTransition};
use crate::subst::{Substitution, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sst {
    input: Alphabet,
    output: Alphabet,
    states: Vec<String>,
    initial: usize,
    vars: Vec<String>,
    // indexed [state][letter]
    delta: Vec<Vec<Option<(usize, Substitution)>>>,
    out: Vec<Option<Vec<usize>>>,
}

/// The run of an SST on a word: visited states, the substitution of every step
/// and the cumulative substitutions `σ_{r,1} .. σ_{r,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<usize>,
    pub steps: Vec<Substitution>,
    pub composed: Vec<Substitution>,
    pub num_vars: usize,
}

impl Run {
    /// `σ_{r,i}`, with `σ_{r,0}` the identity.
    pub fn sigma(&self, i: usize) -> Substitution {
        if i == 0 {
            Substitution::identity(self.num_vars)
        } else {
            self.composed[i - 1].clone()
        }
    }

    pub fn last_state(&self) -> usize {
        *self.states.last().expect("a run has at least one state")
    }
}

impl Sst {
    /// A machine with no transitions and no final states.
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        states: Vec<String>,
        initial: usize,
        vars: Vec<String>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(invalid("at least one state is required"));
        }
        if initial >= states.len() {
            return Err(invalid("initial state out of range"));
        }
        let n = states.len();
        let k = input.len();
        Ok(Sst {
            input,
            output,
            states,
            initial,
            vars,
            delta: vec![vec![None; k]; n],
            out: vec![None; n],
        })
    }

    pub fn add_transition(&mut self, from: usize, letter: usize, to: usize, update: Substitution) -> Result<()> {
        if from >= self.states.len() || to >= self.states.len() {
            return Err(invalid("state out of range"));
        }
        if letter >= self.input.len() {
            return Err(Error::UnknownLetter(letter.to_string()));
        }
        self.check_subst(&update)?;
        let slot = &mut self.delta[from][letter];
        if slot.is_some() {
            return Err(invalid(format!(
                "duplicate transition from `{}` on `{}`",
                self.states[from],
                self.input.letter(letter)
            )));
        }
        *slot = Some((to, update));
        Ok(())
    }

    pub fn set_final(&mut self, state: usize, out: Vec<usize>) -> Result<()> {
        if state >= self.states.len() {
            return Err(invalid("state out of range"));
        }
        if out.iter().any(|&x| x >= self.vars.len()) {
            return Err(invalid("output refers to an unknown variable"));
        }
        self.out[state] = Some(out);
        Ok(())
    }

    fn check_subst(&self, s: &Substitution) -> Result<()> {
        if s.num_vars() != self.vars.len() {
            return Err(invalid("substitution has the wrong number of variables"));
        }
        let ok = s.images().iter().flatten().all(|t| match *t {
            Token::Letter(c) => c < self.output.len(),
            Token::Var(v) => v < self.vars.len(),
        });
        if ok {
            Ok(())
        } else {
            Err(invalid("substitution refers to unknown letters or variables"))
        }
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

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.out[q].is_some()
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&q| self.is_final(q)).collect()
    }

    /// `F(q)` for a final state.
    pub fn out(&self, q: usize) -> Option<&[usize]> {
        self.out[q].as_deref()
    }

    pub fn transition(&self, q: usize, letter: usize) -> Option<(usize, &Substitution)> {
        self.delta[q][letter].as_ref().map(|(t, s)| (*t, s))
    }

    /// All transitions as `(from, letter, to, update)`, state-major.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize, &Substitution)> {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, t)| t.as_ref().map(|(q, s)| (p, a, *q, s)))
        })
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&a| a >= self.input.len()) {
            Some(a) => Err(Error::UnknownLetter(a.to_string())),
            None => Ok(()),
        }
    }

    /// The state reached from `from` on `word`, if every step is defined.
    pub fn reach(&self, from: usize, word: &[usize]) -> Option<usize> {
        word.iter()
            .try_fold(from, |q, &a| self.transition(q, a).map(|(t, _)| t))
    }

    /// Run from the initial state; `Ok(None)` when some transition is missing.
    pub fn run(&self, word: &[usize]) -> Result<Option<Run>> {
        self.run_from(self.initial, word)
    }

    pub fn run_from(&self, from: usize, word: &[usize]) -> Result<Option<Run>> {
        self.check_word(word)?;
        let mut states = vec![from];
        let mut steps = Vec::with_capacity(word.len());
        let mut composed: Vec<Substitution> = Vec::with_capacity(word.len());
        let mut q = from;
        for &a in word {
            let Some((t, rho)) = self.transition(q, a) else {
                return Ok(None);
            };
            let next = match composed.last() {
                Some(prev) => Substitution::compose(prev, rho),
                None => rho.clone(),
            };
            composed.push(next);
            steps.push(rho.clone());
            states.push(t);
            q = t;
        }
        Ok(Some(Run {
            states,
            steps,
            composed,
            num_vars: self.vars.len(),
        }))
    }

    /// `T(s)`, or `Ok(None)` outside the domain.
    pub fn output(&self, word: &[usize]) -> Result<Option<Word>> {
        self.check_word(word)?;
        let mut val: Vec<Word> = vec![Vec::new(); self.vars.len()];
        let mut q = self.initial;
        for &a in word {
            let Some((t, rho)) = self.transition(q, a) else {
                return Ok(None);
            };
            val = rho.images().iter().map(|img| expand(img, &val)).collect();
            q = t;
        }
        Ok(self.out[q].as_ref().map(|f| {
            f.iter().flat_map(|&x| val[x].iter().copied()).collect()
        }))
    }

    /// Output computed from the composed substitution `σ_ε σ_r F(q_n)`.
    pub fn output_via_run(&self, word: &[usize]) -> Result<Option<Word>> {
        let Some(run) = self.run(word)? else {
            return Ok(None);
        };
        let q = run.last_state();
        let Some(f) = &self.out[q] else {
            return Ok(None);
        };
        let sigma = run.sigma(word.len());
        let f: Vec<Token> = f.iter().map(|&x| Token::Var(x)).collect();
        Ok(Some(Substitution::erase(&sigma.apply(&f))))
    }

    /// Parse a word in the input alphabet and render the output, `None` on a domain miss.
    pub fn transform(&self, input: &str) -> Result<Option<String>> {
        let w = self.input.parse_word(input)?;
        Ok(self.output(&w)?.map(|o| self.output.render(&o)))
    }

    /// Warnings that do not invalidate the machine.
    pub fn lint(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for (q, f) in self.out.iter().enumerate() {
            let Some(f) = f else { continue };
            let mut seen = vec![false; self.vars.len()];
            for &x in f {
                if std::mem::replace(&mut seen[x], true) {
                    warnings.push(format!(
                        "output of state `{}` uses variable `{}` more than once",
                        self.states[q], self.vars[x]
                    ));
                }
            }
        }
        warnings
    }

    /// Whether every update and output uses each variable at most once.
    pub fn is_copyless(&self) -> bool {
        let n = self.vars.len();
        let updates_ok = self.transitions().all(|(_, _, _, s)| {
            (0..n).all(|y| (0..n).map(|x| s.occurrences(x, y)).sum::<usize>() <= 1)
        });
        updates_ok && self.lint().is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_sst(text)
    }

    /// Serialize in the `.sst` format; identity assignments are omitted.
    pub fn to_text(&self) -> String {
        let mut s = String::from("sst\n");
        let _ = writeln!(s, "input: {}", self.input.letters().join(" "));
        let _ = writeln!(s, "output: {}", self.output.letters().join(" "));
        let _ = writeln!(s, "states: {}", self.states.join(" "));
        let _ = writeln!(s, "initial: {}", self.states[self.initial]);
        let finals: Vec<&str> = self.finals().iter().map(|&q| self.states[q].as_str()).collect();
        let _ = writeln!(s, "final: {}", finals.join(" "));
        let _ = writeln!(s, "vars: {}", self.vars.join(" "));
        for q in self.finals() {
            let f: Vec<&str> = self.out[q]
                .as_ref()
                .unwrap()
                .iter()
                .map(|&x| self.vars[x].as_str())
                .collect();
            let _ = writeln!(s, "out {} = {}", self.states[q], f.join(" "));
        }
        for (p, a, q, rho) in self.transitions() {
            let _ = writeln!(
                s,
                "{} -{}-> {}{}",
                self.states[p],
                self.input.letter(a),
                self.states[q],
                render_block(rho, &self.output, &self.vars)
            );
        }
        s
    }
}

/// ` { X := ... ; ... }` for the non-identity assignments, or nothing.
pub(crate) fn render_block(rho: &Substitution, out: &Alphabet, vars: &[String]) -> String {
    let parts: Vec<String> = rho
        .images()
        .iter()
        .enumerate()
        .filter(|(x, img)| !(img.len() == 1 && img[0] == Token::Var(*x)))
        .map(|(x, img)| {
            let rhs = parse::render_image(img, out, vars);
            if rhs.is_empty() {
                format!("{} :=", vars[x])
            } else {
                format!("{} := {}", vars[x], rhs)
            }
        })
        .collect();
    if parts.is_empty() {
        String::new()
    } else {
        format!(" {{ {} }}", parts.join(" ; "))
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

/// Header shared by `.sst` and `.sstla` files.
pub(crate) struct Header {
    pub input: Alphabet,
    pub output: Alphabet,
    pub states: Vec<String>,
    pub state_idx: HashMap<String, usize>,
    pub initial: usize,
    pub finals: Vec<(usize, usize)>,
    pub vars: Vec<String>,
    pub var_idx: HashMap<String, usize>,
}

pub(crate) fn parse_header(sec: &mut parse::Sections, extra_names: &[String]) -> Result<Header> {
    let (l_in, input) = sec.take("input", 1)?;
    let (l_out, output) = sec.take("output", 1)?;
    let (l_st, states) = sec.take("states", 1)?;
    let (l_init, initial) = sec.take("initial", 1)?;
    let (l_fin, finals) = sec.take("final", 1)?;
    let (l_vars, vars) = sec.take("vars", 1)?;
    let input = Alphabet::new(input).map_err(|e| syntax(l_in, e.to_string()))?;
    let output = Alphabet::new(output).map_err(|e| syntax(l_out, e.to_string()))?;
    if states.is_empty() {
        return Err(syntax(l_st, "at least one state is required"));
    }
    let state_idx = parse::name_index(&states, "state", l_st)?;
    let var_idx = parse::name_index(&vars, "variable", l_vars)?;
    parse::check_disjoint(
        &[
            ("letter", output.letters()),
            ("variable", &vars),
            ("lookahead state", extra_names),
        ],
        l_vars,
    )?;
    parse::check_disjoint(&[("letter", input.letters()), ("variable", &vars)], l_vars)?;
    if initial.len() != 1 {
        return Err(syntax(l_init, "exactly one initial state expected"));
    }
    let initial = parse::lookup(&state_idx, &initial[0], "state", l_init)?;
    let finals = finals
        .iter()
        .map(|f| parse::lookup(&state_idx, f, "state", l_fin).map(|q| (q, l_fin)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Header {
        input,
        output,
        states,
        state_idx,
        initial,
        finals,
        vars,
        var_idx,
    })
}

/// `out q = X Y` lines, checked against the declared final states.
pub(crate) fn parse_outs(
    lines: &[(usize, String)],
    h: &Header,
) -> Result<Vec<Option<Vec<usize>>>> {
    let mut out: Vec<Option<Vec<usize>>> = vec![None; h.states.len()];
    for (no, line) in lines {
        let rest = line.strip_prefix("out").unwrap_or(line);
        let (lhs, rhs) = rest
            .split_once('=')
            .ok_or_else(|| syntax(*no, "expected `out <state> = <var>*`"))?;
        let q = parse::lookup(&h.state_idx, lhs.trim(), "state", *no)?;
        if !h.finals.iter().any(|&(f, _)| f == q) {
            return Err(syntax(*no, format!("`out` given for non-final state `{}`", lhs.trim())));
        }
        let vars = rhs
            .split_whitespace()
            .map(|v| parse::lookup(&h.var_idx, v, "variable", *no))
            .collect::<Result<Vec<_>>>()?;
        if out[q].replace(vars).is_some() {
            return Err(syntax(*no, format!("duplicate `out` line for `{}`", lhs.trim())));
        }
    }
    for &(f, l) in &h.finals {
        if out[f].is_none() {
            return Err(syntax(l, format!("final state `{}` has no `out` line", h.states[f])));
        }
    }
    Ok(out)
}

/// Split non-header lines into `out` lines and transitions.
pub(crate) fn split_body(rest: &[(usize, String)]) -> (Vec<(usize, String)>, Vec<(usize, String)>) {
    rest.iter()
        .cloned()
        .partition(|(_, l)| l.starts_with("out ") || l == "out" || l.starts_with("out="))
}

pub fn parse_sst(text: &str) -> Result<Sst> {
    let lines = parse::expect_header(text, "sst")?;
    let mut sec = parse::split_sections(
        lines,
        &["input", "output", "states", "initial", "final", "vars"],
    )?;
    let h = parse_header(&mut sec, &[])?;
    let (outs, trans) = split_body(&sec.rest);
    let out = parse_outs(&outs, &h)?;
    let mut t = Sst::new(
        h.input.clone(),
        h.output.clone(),
        h.states.clone(),
        h.initial,
        h.vars.clone(),
    )?;
    for (no, line) in &trans {
        let RawTransition {
            line,
            from,
            label,
            to,
            assigns,
        } = parse::parse_transition(*no, line)?;
        let p = parse::lookup(&h.state_idx, &from, "state", line)?;
        let q = parse::lookup(&h.state_idx, &to, "state", line)?;
        let a = h
            .input
            .index_of(&label)
            .ok_or_else(|| syntax(line, format!("undeclared letter `{label}`")))?;
        let rho = parse::build_subst(&assigns, &h.output, &h.var_idx, h.vars.len(), line)?;
        if t.delta[p][a].is_some() {
            return Err(syntax(line, format!("duplicate transition from `{from}` on `{label}`")));
        }
        t.delta[p][a] = Some((q, rho));
    }
    t.out = out;
    Ok(t)
}
