//! First-order logic over string models: formulas, evaluation, quantifier rank
//! and k-type equivalence through Ehrenfeucht–Fraïssé games.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{syntax, Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// FO(Σ) formula. `Lt`, `Succ`, `First` and `Last` are shorthands; see [`Formula::expand`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Lab(String, String),
    Eq(String, String),
    Le(String, String),
    Lt(String, String),
    Succ(String, String),
    First(String),
    Last(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

use Formula as F;

impl Formula {
    pub fn lab(letter: &str, var: &str) -> Self {
        F::Lab(letter.into(), var.into())
    }

    pub fn le(x: &str, y: &str) -> Self {
        F::Le(x.into(), y.into())
    }

    pub fn not(f: Formula) -> Self {
        F::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        F::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        F::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        F::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: Formula) -> Self {
        F::Exists(x.into(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Self {
        F::Forall(x.into(), Box::new(f))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_formula(text)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            F::True | F::False => {}
            F::Lab(_, x) | F::First(x) | F::Last(x) => add(x, bound),
            F::Eq(x, y) | F::Le(x, y) | F::Lt(x, y) | F::Succ(x, y) => {
                add(x, bound);
                add(y, bound);
            }
            F::Not(f) => f.collect_free(bound, out),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            F::Exists(x, f) | F::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn all_vars(&self, out: &mut HashSet<String>) {
        match self {
            F::True | F::False => {}
            F::Lab(_, x) | F::First(x) | F::Last(x) => {
                out.insert(x.clone());
            }
            F::Eq(x, y) | F::Le(x, y) | F::Lt(x, y) | F::Succ(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            F::Not(f) => f.all_vars(out),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            F::Exists(x, f) | F::Forall(x, f) => {
                out.insert(x.clone());
                f.all_vars(out);
            }
        }
    }

    /// Replace the shorthands by their definitions in terms of `=`, `⪯` and
    /// quantifiers, using fresh bound variables.
    pub fn expand(&self) -> Formula {
        let mut used = HashSet::new();
        self.all_vars(&mut used);
        let mut fresh = Fresh { used, next: 0 };
        self.expand_with(&mut fresh)
    }

    fn expand_with(&self, fresh: &mut Fresh) -> Formula {
        match self {
            F::True | F::False | F::Lab(..) | F::Eq(..) | F::Le(..) => self.clone(),
            F::Lt(x, y) => strict(x, y),
            F::Succ(x, y) => {
                let z = fresh.var();
                succ_def(x, y, &z)
            }
            F::Last(x) => {
                let y = fresh.var();
                let z = fresh.var();
                F::not(F::exists(&y, succ_def(x, &y, &z)))
            }
            F::First(x) => {
                let y = fresh.var();
                let z = fresh.var();
                F::not(F::exists(&y, succ_def(&y, x, &z)))
            }
            F::Not(f) => F::not(f.expand_with(fresh)),
            F::And(a, b) => F::and(a.expand_with(fresh), b.expand_with(fresh)),
            F::Or(a, b) => F::or(a.expand_with(fresh), b.expand_with(fresh)),
            F::Implies(a, b) => F::implies(a.expand_with(fresh), b.expand_with(fresh)),
            F::Exists(x, f) => F::exists(x, f.expand_with(fresh)),
            F::Forall(x, f) => F::forall(x, f.expand_with(fresh)),
        }
    }

    /// Quantifier rank of the expanded formula.
    pub fn qrank(&self) -> usize {
        match self {
            F::True | F::False | F::Lab(..) | F::Eq(..) | F::Le(..) | F::Lt(..) => 0,
            F::Succ(..) => 1,
            F::First(_) | F::Last(_) => 2,
            F::Not(f) => f.qrank(),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => a.qrank().max(b.qrank()),
            F::Exists(_, f) | F::Forall(_, f) => 1 + f.qrank(),
        }
    }

    /// Rename bound variables to `<prefix>0`, `<prefix>1`, ... in binding order, skipping free names.
    pub fn rename_bound(&self, prefix: &str) -> Formula {
        let free = self.free_vars();
        let mut counter = 0;
        self.rename_with(prefix, &free, &mut Vec::new(), &mut counter)
    }

    fn rename_with(
        &self,
        prefix: &str,
        free: &BTreeSet<String>,
        env: &mut Vec<(String, String)>,
        counter: &mut usize,
    ) -> Formula {
        let r = |v: &String, env: &Vec<(String, String)>| {
            env.iter()
                .rev()
                .find(|(old, _)| old == v)
                .map_or_else(|| v.clone(), |(_, new)| new.clone())
        };
        match self {
            F::True | F::False => self.clone(),
            F::Lab(a, x) => F::Lab(a.clone(), r(x, env)),
            F::First(x) => F::First(r(x, env)),
            F::Last(x) => F::Last(r(x, env)),
            F::Eq(x, y) => F::Eq(r(x, env), r(y, env)),
            F::Le(x, y) => F::Le(r(x, env), r(y, env)),
            F::Lt(x, y) => F::Lt(r(x, env), r(y, env)),
            F::Succ(x, y) => F::Succ(r(x, env), r(y, env)),
            F::Not(f) => F::not(f.rename_with(prefix, free, env, counter)),
            F::And(a, b) => F::and(a.rename_with(prefix, free, env, counter), b.rename_with(prefix, free, env, counter)),
            F::Or(a, b) => F::or(a.rename_with(prefix, free, env, counter), b.rename_with(prefix, free, env, counter)),
            F::Implies(a, b) => F::implies(
                a.rename_with(prefix, free, env, counter),
                b.rename_with(prefix, free, env, counter),
            ),
            F::Exists(x, f) | F::Forall(x, f) => {
                let new = loop {
                    let cand = format!("{prefix}{counter}");
                    *counter += 1;
                    if !free.contains(&cand) {
                        break cand;
                    }
                };
                env.push((x.clone(), new.clone()));
                let body = f.rename_with(prefix, free, env, counter);
                env.pop();
                if matches!(self, F::Exists(..)) {
                    F::exists(&new, body)
                } else {
                    F::forall(&new, body)
                }
            }
        }
    }
}

fn strict(x: &str, y: &str) -> Formula {
    F::and(F::le(x, y), F::not(F::Eq(x.into(), y.into())))
}

fn succ_def(x: &str, y: &str, z: &str) -> Formula {
    F::and(strict(x, y), F::forall(z, F::implies(strict(z, y), F::le(z, x))))
}

struct Fresh {
    used: HashSet<String>,
    next: usize,
}

impl Fresh {
    fn var(&mut self) -> String {
        loop {
            let v = format!("_z{}", self.next);
            self.next += 1;
            if self.used.insert(v.clone()) {
                return v;
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            F::True => write!(f, "(true)"),
            F::False => write!(f, "(false)"),
            F::Lab(a, x) => write!(f, "(lab {a} {x})"),
            F::Eq(x, y) => write!(f, "(= {x} {y})"),
            F::Le(x, y) => write!(f, "(le {x} {y})"),
            F::Lt(x, y) => write!(f, "(lt {x} {y})"),
            F::Succ(x, y) => write!(f, "(succ {x} {y})"),
            F::First(x) => write!(f, "(first {x})"),
            F::Last(x) => write!(f, "(last {x})"),
            F::Not(g) => write!(f, "(not {g})"),
            F::And(a, b) => write!(f, "(and {a} {b})"),
            F::Or(a, b) => write!(f, "(or {a} {b})"),
            F::Implies(a, b) => write!(f, "(implies {a} {b})"),
            F::Exists(x, g) => write!(f, "(exists {x} {g})"),
            F::Forall(x, g) => write!(f, "(forall {x} {g})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexp(text: &str) -> Result<Sexp> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                tokens.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                tokens.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    let mut pos = 0;
    let sexp = read_at(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(syntax(1, format!("trailing input after formula: `{}`", tokens[pos..].join(" "))));
    }
    Ok(sexp)
}

fn read_at(tokens: &[String], pos: &mut usize) -> Result<Sexp> {
    let Some(tok) = tokens.get(*pos) else {
        return Err(syntax(1, "unexpected end of formula"));
    };
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_at(tokens, pos)?),
                    None => return Err(syntax(1, "unbalanced parentheses")),
                }
            }
        }
        ")" => Err(syntax(1, "unexpected `)`")),
        _ => Ok(Sexp::Atom(tok.clone())),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    from_sexp(&read_sexp(text)?)
}

fn from_sexp(e: &Sexp) -> Result<Formula> {
    let Sexp::List(items) = e else {
        return Err(syntax(1, "expected a parenthesised formula"));
    };
    let Some(Sexp::Atom(head)) = items.first() else {
        return Err(syntax(1, "expected an operator"));
    };
    let args = &items[1..];
    let atom = |i: usize| -> Result<String> {
        match args.get(i) {
            Some(Sexp::Atom(a)) => Ok(a.clone()),
            _ => Err(syntax(1, format!("`{head}` expects a name as argument {}", i + 1))),
        }
    };
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(syntax(1, format!("`{head}` takes {n} arguments, got {}", args.len())))
        }
    };
    let f = match head.as_str() {
        "true" => {
            arity(0)?;
            F::True
        }
        "false" => {
            arity(0)?;
            F::False
        }
        "lab" => {
            arity(2)?;
            F::Lab(atom(0)?, atom(1)?)
        }
        "=" | "eq" => {
            arity(2)?;
            F::Eq(atom(0)?, atom(1)?)
        }
        "le" => {
            arity(2)?;
            F::Le(atom(0)?, atom(1)?)
        }
        "lt" => {
            arity(2)?;
            F::Lt(atom(0)?, atom(1)?)
        }
        "succ" => {
            arity(2)?;
            F::Succ(atom(0)?, atom(1)?)
        }
        "first" => {
            arity(1)?;
            F::First(atom(0)?)
        }
        "last" => {
            arity(1)?;
            F::Last(atom(0)?)
        }
        "not" => {
            arity(1)?;
            F::not(from_sexp(&args[0])?)
        }
        "and" | "or" => {
            if args.len() < 2 {
                return Err(syntax(1, format!("`{head}` takes at least 2 arguments")));
            }
            let mut parts = args.iter().map(from_sexp).collect::<Result<Vec<_>>>()?;
            let mut acc = parts.pop().unwrap();
            while let Some(p) = parts.pop() {
                acc = if head == "and" { F::and(p, acc) } else { F::or(p, acc) };
            }
            acc
        }
        "implies" => {
            arity(2)?;
            F::implies(from_sexp(&args[0])?, from_sexp(&args[1])?)
        }
        "exists" => {
            arity(2)?;
            F::exists(&atom(0)?, from_sexp(&args[1])?)
        }
        "forall" => {
            arity(2)?;
            F::forall(&atom(0)?, from_sexp(&args[1])?)
        }
        other => return Err(syntax(1, format!("unknown operator `{other}`"))),
    };
    Ok(f)
}

/// A word seen as a structure with positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringModel {
    letters: Vec<String>,
}

impl StringModel {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Self {
        StringModel {
            letters: letters.into_iter().map(Into::into).collect(),
        }
    }

    /// One letter per character.
    pub fn from_chars(s: &str) -> Self {
        StringModel::new(s.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Label at 1-based position `i`.
    pub fn label(&self, i: usize) -> &str {
        &self.letters[i - 1]
    }
}

/// `(s, ν) ⊨ f`, with positions counted from 1.
pub fn eval(f: &Formula, s: &StringModel, valuation: &HashMap<String, usize>) -> Result<bool> {
    eval_with_budget(f, s, valuation, DEFAULT_BUDGET)
}

pub fn eval_with_budget(
    f: &Formula,
    s: &StringModel,
    valuation: &HashMap<String, usize>,
    budget: u64,
) -> Result<bool> {
    for &p in valuation.values() {
        if p == 0 || p > s.len() {
            return Err(Error::OutOfRange { pos: p, len: s.len() });
        }
    }
    let mut env: Vec<(String, usize)> = valuation.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let mut ev = Evaluator {
        s,
        steps: 0,
        budget,
    };
    ev.eval(f, &mut env)
}

/// Evaluate with positional bindings `x1 = p1, ...`.
pub fn eval_at(f: &Formula, s: &StringModel, binding: &[(&str, usize)]) -> Result<bool> {
    let v: HashMap<String, usize> = binding.iter().map(|(k, p)| (k.to_string(), *p)).collect();
    eval(f, s, &v)
}

struct Evaluator<'a> {
    s: &'a StringModel,
    steps: u64,
    budget: u64,
}

impl Evaluator<'_> {
    fn val(&self, x: &str, env: &[(String, usize)]) -> Result<usize> {
        env.iter()
            .rev()
            .find(|(v, _)| v == x)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::Unvalued(x.to_string()))
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::Budget(self.budget))
        } else {
            Ok(())
        }
    }

    fn eval(&mut self, f: &Formula, env: &mut Vec<(String, usize)>) -> Result<bool> {
        self.tick()?;
        let n = self.s.len();
        Ok(match f {
            F::True => true,
            F::False => false,
            F::Lab(a, x) => self.s.label(self.val(x, env)?) == a,
            F::Eq(x, y) => self.val(x, env)? == self.val(y, env)?,
            F::Le(x, y) => self.val(x, env)? <= self.val(y, env)?,
            F::Lt(x, y) => self.val(x, env)? < self.val(y, env)?,
            F::Succ(x, y) => self.val(x, env)? + 1 == self.val(y, env)?,
            F::First(x) => self.val(x, env)? == 1,
            F::Last(x) => self.val(x, env)? == n,
            F::Not(g) => !self.eval(g, env)?,
            F::And(a, b) => self.eval(a, env)? && self.eval(b, env)?,
            F::Or(a, b) => self.eval(a, env)? || self.eval(b, env)?,
            F::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            F::Exists(x, g) | F::Forall(x, g) => {
                let want = matches!(f, F::Exists(..));
                let mut result = !want;
                for p in 1..=n {
                    env.push((x.clone(), p));
                    let r = self.eval(g, env);
                    env.pop();
                    if r? == want {
                        result = want;
                        break;
                    }
                }
                result
            }
        })
    }
}

/// A finite structure with a binary order relation and a set of labels per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub labels: Vec<Vec<String>>,
    /// `order[u][v]` means `u ⪯ v`.
    pub order: Vec<Vec<bool>>,
}

/// The structure is a string model: one label per node and a total order.
pub fn is_string_check(m: &Structure) -> bool {
    let n = m.labels.len();
    if m.order.len() != n || m.order.iter().any(|r| r.len() != n) {
        return false;
    }
    if m.labels.iter().any(|l| l.len() != 1) {
        return false;
    }
    let o = &m.order;
    for u in 0..n {
        for v in 0..n {
            if !(o[u][v] || o[v][u]) {
                return false;
            }
            if u != v && o[u][v] && o[v][u] {
                return false;
            }
            for w in 0..n {
                if o[u][v] && o[v][w] && !o[u][w] {
                    return false;
                }
            }
        }
    }
    true
}

/// `s1 ≡_k s2`: the duplicator wins the k-round Ehrenfeucht–Fraïssé game.
pub fn equiv_k<T: Eq>(s1: &[T], s2: &[T], k: usize) -> Result<bool> {
    equiv_k_with_budget(s1, s2, k, DEFAULT_BUDGET)
}

pub fn equiv_k_with_budget<T: Eq>(s1: &[T], s2: &[T], k: usize, budget: u64) -> Result<bool> {
    let mut game = Game {
        s1,
        s2,
        memo: HashMap::new(),
        steps: 0,
        budget,
    };
    game.duplicator_wins(k, &[])
}

/// Letters are characters, or whitespace-separated tokens when spaces occur.
pub fn equiv_k_str(s1: &str, s2: &str, k: usize) -> Result<bool> {
    let split = |s: &str| -> Vec<String> {
        if s.contains(char::is_whitespace) {
            s.split_whitespace().map(String::from).collect()
        } else {
            s.chars().map(String::from).collect()
        }
    };
    equiv_k(&split(s1), &split(s2), k)
}

struct Game<'a, T> {
    s1: &'a [T],
    s2: &'a [T],
    memo: HashMap<(usize, Vec<(usize, usize)>), bool>,
    steps: u64,
    budget: u64,
}

impl<T: Eq> Game<'_, T> {
    fn consistent(&self, pairs: &[(usize, usize)], new: (usize, usize)) -> bool {
        if self.s1[new.0] != self.s2[new.1] {
            return false;
        }
        pairs.iter().all(|&(a, b)| a.cmp(&new.0) == b.cmp(&new.1))
    }

    fn duplicator_wins(&mut self, rounds: usize, pairs: &[(usize, usize)]) -> Result<bool> {
        if rounds == 0 {
            return Ok(true);
        }
        let key = (rounds, pairs.to_vec());
        if let Some(&r) = self.memo.get(&key) {
            return Ok(r);
        }
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Budget(self.budget));
        }
        let mut wins = true;
        'spoiler: for side in 0..2 {
            let (n_spoil, n_dup) = if side == 0 {
                (self.s1.len(), self.s2.len())
            } else {
                (self.s2.len(), self.s1.len())
            };
            for sp in 0..n_spoil {
                let mut answered = false;
                for dp in 0..n_dup {
                    let new = if side == 0 { (sp, dp) } else { (dp, sp) };
                    if !self.consistent(pairs, new) {
                        continue;
                    }
                    let mut next = pairs.to_vec();
                    if let Err(i) = next.binary_search(&new) {
                        next.insert(i, new);
                    }
                    if self.duplicator_wins(rounds - 1, &next)? {
                        answered = true;
                        break;
                    }
                }
                if !answered {
                    wins = false;
                    break 'spoiler;
                }
            }
        }
        self.memo.insert(key, wins);
        Ok(wins)
    }
}
