//! First-order string transducers: output structures, output strings, heads and tails.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::alphabet::{Alphabet, Word};
use crate::error::{syntax, Error, Result};
use crate::logic::{self, Formula, StringModel, Structure};
use crate::parse;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoTransducer {
    input: Alphabet,
    output: Alphabet,
    dom: Formula,
    copies: usize,
    // [copy][output letter]
    pos: Vec<Vec<Formula>>,
    // [copy][copy]
    ord: Vec<Vec<Formula>>,
}

/// An output node: input position `pos` (from 1) in copy `copy` (from 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Node {
    pub pos: usize,
    pub copy: usize,
}

impl std::fmt::Display for Node {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}", self.pos, self.copy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputStructure {
    /// Alive nodes, sorted by position then copy.
    pub nodes: Vec<Node>,
    pub labels: Vec<usize>,
    /// `order[u][v]`: node `u` is before or equal to node `v`.
    pub order: Vec<Vec<bool>>,
    /// Covering relation of the strict order, as successor lists.
    pub successors: Vec<Vec<usize>>,
}

impl OutputStructure {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_index(&self, n: Node) -> Option<usize> {
        self.nodes.binary_search(&n).ok()
    }

    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.successors[u].contains(&v)).collect()
    }

    pub fn as_structure(&self, output: &Alphabet) -> Structure {
        Structure {
            labels: self.labels.iter().map(|&g| vec![output.letter(g).to_string()]).collect(),
            order: self.order.clone(),
        }
    }
}

/// Names an i-head or i-tail by witness words for its two types, plus letter and copy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Address {
    pub prefix: Word,
    pub infix: Word,
    pub letter: usize,
    pub copy: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub head: Node,
    pub tail: Node,
    pub nodes: Vec<Node>,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeadTailReport {
    pub i: usize,
    pub heads: Vec<Node>,
    pub tails: Vec<Node>,
    pub segments: Vec<Segment>,
    pub head_addresses: Vec<Address>,
    pub tail_addresses: Vec<Address>,
}

impl FoTransducer {
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        dom: Formula,
        pos: Vec<Vec<Formula>>,
        ord: Vec<Vec<Formula>>,
    ) -> Result<Self> {
        let copies = pos.len();
        if copies == 0 {
            return Err(Error::Invalid("at least one copy is required".into()));
        }
        if pos.iter().any(|r| r.len() != output.len()) {
            return Err(Error::Invalid("one label formula per output letter is required".into()));
        }
        if ord.len() != copies || ord.iter().any(|r| r.len() != copies) {
            return Err(Error::Invalid("one order formula per pair of copies is required".into()));
        }
        let t = FoTransducer {
            input,
            output,
            dom,
            copies,
            pos,
            ord,
        };
        t.validate(0)?;
        Ok(t)
    }

    fn validate(&self, line: usize) -> Result<()> {
        let check = |f: &Formula, allowed: &[&str], what: &str| -> Result<()> {
            let extra: Vec<String> = f
                .free_vars()
                .into_iter()
                .filter(|v| !allowed.contains(&v.as_str()))
                .collect();
            if !extra.is_empty() {
                return Err(syntax(line, format!("{what} has unexpected free variables {}", extra.join(", "))));
            }
            let mut letters = BTreeSet::new();
            collect_letters(f, &mut letters);
            if let Some(bad) = letters.iter().find(|l| !self.input.contains(l)) {
                return Err(syntax(line, format!("{what} tests unknown input letter `{bad}`")));
            }
            Ok(())
        };
        check(&self.dom, &[], "domain formula")?;
        for row in &self.pos {
            for f in row {
                check(f, &["x"], "label formula")?;
            }
        }
        for row in &self.ord {
            for f in row {
                check(f, &["x", "y"], "order formula")?;
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_fot(text)
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn dom(&self) -> &Formula {
        &self.dom
    }

    /// Label formula of 1-based `copy` for output letter `gamma`.
    pub fn pos_formula(&self, copy: usize, gamma: usize) -> &Formula {
        &self.pos[copy - 1][gamma]
    }

    pub fn ord_formula(&self, c: usize, d: usize) -> &Formula {
        &self.ord[c - 1][d - 1]
    }

    /// Largest quantifier rank of any formula, plus one.
    pub fn qrank(&self) -> usize {
        let all = std::iter::once(&self.dom)
            .chain(self.pos.iter().flatten())
            .chain(self.ord.iter().flatten());
        all.map(Formula::qrank).max().unwrap_or(0) + 1
    }

    fn model(&self, word: &[usize]) -> Result<StringModel> {
        if let Some(&a) = word.iter().find(|&&a| a >= self.input.len()) {
            return Err(Error::UnknownLetter(a.to_string()));
        }
        Ok(StringModel::new(self.input.decode(word)))
    }

    pub fn in_domain(&self, word: &[usize]) -> Result<bool> {
        let m = self.model(word)?;
        logic::eval(&self.dom, &m, &HashMap::new())
    }

    /// Output letter of node `j^c`, or `None` when it is not alive.
    pub fn alive(&self, word: &[usize], copy: usize, j: usize) -> Result<Option<usize>> {
        let m = self.model(word)?;
        self.alive_in(&m, copy, j)
    }

    fn alive_in(&self, m: &StringModel, copy: usize, j: usize) -> Result<Option<usize>> {
        if j == 0 || j > m.len() {
            return Err(Error::OutOfRange { pos: j, len: m.len() });
        }
        let mut found: Option<usize> = None;
        for (g, f) in self.pos[copy - 1].iter().enumerate() {
            if logic::eval_at(f, m, &[("x", j)])? {
                if let Some(prev) = found {
                    return Err(Error::LabelClash {
                        copy,
                        pos: j,
                        first: self.output.letter(prev).to_string(),
                        second: self.output.letter(g).to_string(),
                    });
                }
                found = Some(g);
            }
        }
        Ok(found)
    }

    /// The output structure, or `None` outside the domain.
    pub fn output_structure(&self, word: &[usize]) -> Result<Option<OutputStructure>> {
        let m = self.model(word)?;
        if !logic::eval(&self.dom, &m, &HashMap::new())? {
            return Ok(None);
        }
        let mut nodes = Vec::new();
        let mut labels = Vec::new();
        for j in 1..=m.len() {
            for c in 1..=self.copies {
                if let Some(g) = self.alive_in(&m, c, j)? {
                    nodes.push(Node { pos: j, copy: c });
                    labels.push(g);
                }
            }
        }
        let n = nodes.len();
        let mut order = vec![vec![false; n]; n];
        for (u, nu) in nodes.iter().enumerate() {
            for (v, nv) in nodes.iter().enumerate() {
                let f = self.ord_formula(nu.copy, nv.copy);
                order[u][v] = logic::eval_at(f, &m, &[("x", nu.pos), ("y", nv.pos)])?;
            }
        }
        let strict = |u: usize, v: usize| u != v && order[u][v];
        let successors = (0..n)
            .map(|u| {
                (0..n)
                    .filter(|&v| strict(u, v) && !(0..n).any(|w| strict(u, w) && strict(w, v)))
                    .collect()
            })
            .collect();
        Ok(Some(OutputStructure {
            nodes,
            labels,
            order,
            successors,
        }))
    }

    /// Output word; `Ok(None)` outside the domain.
    pub fn output_string(&self, word: &[usize]) -> Result<Option<Word>> {
        let Some(st) = self.output_structure(word)? else {
            return Ok(None);
        };
        Ok(Some(linearize(&st, &self.output)?.into_iter().map(|v| st.labels[v]).collect()))
    }

    pub fn transform(&self, input: &str) -> Result<Option<String>> {
        let w = self.input.parse_word(input)?;
        Ok(self.output_string(&w)?.map(|o| self.output.render(&o)))
    }

    /// i-heads, i-tails and the output segments between them.
    pub fn heads_tails(&self, word: &[usize], i: usize) -> Result<HeadTailReport> {
        if i == 0 || i > word.len() {
            return Err(Error::OutOfRange { pos: i, len: word.len() });
        }
        let st = self.output_structure(word)?.ok_or(Error::DomainMiss)?;
        linearize(&st, &self.output)?;
        let inside = |v: usize| st.nodes[v].pos <= i;
        let preds: Vec<Vec<usize>> = (0..st.len()).map(|v| st.predecessors(v)).collect();
        let heads: Vec<usize> = (0..st.len())
            .filter(|&v| inside(v) && !preds[v].iter().any(|&u| inside(u)))
            .collect();
        let tails: Vec<usize> = (0..st.len())
            .filter(|&v| inside(v) && !st.successors[v].iter().any(|&u| inside(u)))
            .collect();
        let mut segments = Vec::new();
        for &h in &heads {
            let mut path = vec![h];
            let mut cur = h;
            while let Some(&next) = st.successors[cur].iter().find(|&&u| inside(u)) {
                path.push(next);
                cur = next;
            }
            segments.push(Segment {
                head: st.nodes[h],
                tail: st.nodes[cur],
                nodes: path.iter().map(|&v| st.nodes[v]).collect(),
                word: path.iter().map(|&v| st.labels[v]).collect(),
            });
        }
        let address = |v: usize| {
            let Node { pos: j, copy } = st.nodes[v];
            Address {
                prefix: word[..j - 1].to_vec(),
                infix: word[j..i].to_vec(),
                letter: word[j - 1],
                copy,
            }
        };
        Ok(HeadTailReport {
            i,
            heads: heads.iter().map(|&v| st.nodes[v]).collect(),
            tails: tails.iter().map(|&v| st.nodes[v]).collect(),
            segments,
            head_addresses: heads.iter().map(|&v| address(v)).collect(),
            tail_addresses: tails.iter().map(|&v| address(v)).collect(),
        })
    }

    /// No two distinct i-heads (or i-tails) of one copy and letter share both
    /// the `(k+2)`-type of their prefix and of their infix up to `i`.
    pub fn verify_head_uniqueness(&self, word: &[usize], i: usize, k: usize) -> Result<bool> {
        let r = self.heads_tails(word, i)?;
        for addrs in [&r.head_addresses, &r.tail_addresses] {
            for (x, a1) in addrs.iter().enumerate() {
                for a2 in &addrs[x + 1..] {
                    if a1.copy != a2.copy || a1.letter != a2.letter {
                        continue;
                    }
                    if logic::equiv_k(&a1.prefix, &a2.prefix, k + 2)?
                        && logic::equiv_k(&a1.infix, &a2.infix, k + 2)?
                    {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// DOT rendering of the output structure: alive nodes and successor edges.
    pub fn to_dot(&self, word: &[usize]) -> Result<Option<String>> {
        let Some(st) = self.output_structure(word)? else {
            return Ok(None);
        };
        let mut s = String::from("digraph output {\n  rankdir=LR;\n");
        for (v, n) in st.nodes.iter().enumerate() {
            let _ = writeln!(
                s,
                "  n{}_{} [label=\"{}^{}:{}\"];",
                n.pos,
                n.copy,
                n.pos,
                n.copy,
                self.output.letter(st.labels[v])
            );
        }
        for (u, succ) in st.successors.iter().enumerate() {
            for &v in succ {
                let (a, b) = (st.nodes[u], st.nodes[v]);
                let _ = writeln!(s, "  n{}_{} -> n{}_{};", a.pos, a.copy, b.pos, b.copy);
            }
        }
        s.push_str("}\n");
        Ok(Some(s))
    }
}

/// Nodes in output order, after checking the structure is a string.
fn linearize(st: &OutputStructure, output: &Alphabet) -> Result<Vec<usize>> {
    if !logic::is_string_check(&st.as_structure(output)) {
        return Err(Error::NotAString(describe_failure(st)));
    }
    let mut idx: Vec<usize> = (0..st.len()).collect();
    idx.sort_by_key(|&v| (0..st.len()).filter(|&u| st.order[u][v]).count());
    Ok(idx)
}

fn describe_failure(st: &OutputStructure) -> String {
    let n = st.len();
    for u in 0..n {
        for v in 0..n {
            let (a, b) = (st.nodes[u], st.nodes[v]);
            if !st.order[u][v] && !st.order[v][u] {
                return format!("{a} and {b} are unordered");
            }
            if u != v && st.order[u][v] && st.order[v][u] {
                return format!("{a} and {b} are ordered both ways");
            }
        }
    }
    "order is not transitive".into()
}

fn collect_letters(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Lab(a, _) => {
            out.insert(a.clone());
        }
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => collect_letters(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_letters(a, out);
            collect_letters(b, out);
        }
        _ => {}
    }
}

pub fn parse_fot(text: &str) -> Result<FoTransducer> {
    let lines = parse::expect_header(text, "fot")?;
    let mut sec = parse::split_sections(lines, &["input", "output", "copies", "dom"])?;
    let (l_in, input) = sec.take("input", 1)?;
    let (l_out, output) = sec.take("output", 1)?;
    let (l_cp, copies) = sec.take("copies", 1)?;
    let input = Alphabet::new(input).map_err(|e| syntax(l_in, e.to_string()))?;
    let output = Alphabet::new(output).map_err(|e| syntax(l_out, e.to_string()))?;
    let copies: usize = match copies.as_slice() {
        [n] => n.parse().map_err(|_| syntax(l_cp, "`copies:` expects a number"))?,
        _ => return Err(syntax(l_cp, "`copies:` expects one number")),
    };
    if copies == 0 {
        return Err(syntax(l_cp, "at least one copy is required"));
    }
    let dom = match sec.take_opt("dom") {
        Some((l, toks)) => parse_at(&toks.join(" "), l)?,
        None => Formula::True,
    };
    let mut pos = vec![vec![Formula::False; output.len()]; copies];
    let mut pos_seen = vec![vec![false; output.len()]; copies];
    let mut ord: Vec<Vec<Option<Formula>>> = vec![vec![None; copies]; copies];
    let copy_of = |t: &str, l: usize| -> Result<usize> {
        match t.parse::<usize>() {
            Ok(c) if (1..=copies).contains(&c) => Ok(c),
            _ => Err(syntax(l, format!("`{t}` is not a copy in 1..{copies}"))),
        }
    };
    for (no, line) in &sec.rest {
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| syntax(*no, format!("unexpected line `{line}`")))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let f = parse_at(body, *no)?;
        match head.as_slice() {
            ["pos", c, g] => {
                let c = copy_of(c, *no)?;
                let g = output
                    .index_of(g)
                    .ok_or_else(|| syntax(*no, format!("undeclared output letter `{g}`")))?;
                if std::mem::replace(&mut pos_seen[c - 1][g], true) {
                    return Err(syntax(*no, "duplicate `pos` line"));
                }
                check_free(&f, &["x"], *no)?;
                pos[c - 1][g] = f;
            }
            ["ord", c, d] => {
                let (c, d) = (copy_of(c, *no)?, copy_of(d, *no)?);
                if ord[c - 1][d - 1].is_some() {
                    return Err(syntax(*no, "duplicate `ord` line"));
                }
                check_free(&f, &["x", "y"], *no)?;
                ord[c - 1][d - 1] = Some(f);
            }
            _ => return Err(syntax(*no, format!("unexpected line `{line}`"))),
        }
    }
    let mut full_ord = Vec::with_capacity(copies);
    for (c, row) in ord.into_iter().enumerate() {
        let mut r = Vec::with_capacity(copies);
        for (d, f) in row.into_iter().enumerate() {
            r.push(f.ok_or_else(|| syntax(l_cp, format!("missing `ord {} {}` line", c + 1, d + 1)))?);
        }
        full_ord.push(r);
    }
    let t = FoTransducer {
        input,
        output,
        dom,
        copies,
        pos,
        ord: full_ord,
    };
    t.validate(l_cp)?;
    Ok(t)
}

fn parse_at(text: &str, line: usize) -> Result<Formula> {
    logic::parse_formula(text).map_err(|e| match e {
        Error::Syntax { msg, .. } => syntax(line, msg),
        other => other,
    })
}

fn check_free(f: &Formula, allowed: &[&str], line: usize) -> Result<()> {
    match f.free_vars().into_iter().find(|v| !allowed.contains(&v.as_str())) {
        Some(v) => Err(syntax(line, format!("unexpected free variable `{v}`"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY: &str = "fot
input: a b
output: a b
copies: 1
dom: (true)
pos 1 a: (lab a x)
pos 1 b: (lab b x)
ord 1 1: (le x y)
";

    #[test]
    fn identity_transducer() {
        let t = parse_fot(IDENTITY).unwrap();
        assert_eq!(t.qrank(), 1);
        assert_eq!(t.transform("abba").unwrap().as_deref(), Some("abba"));
        assert_eq!(t.transform("").unwrap().as_deref(), Some(""));
        let w = t.input().parse_word("ab").unwrap();
        let st = t.output_structure(&w).unwrap().unwrap();
        assert_eq!(st.len(), 2);
        assert_eq!(st.successors, vec![vec![1], vec![]]);
        let r = t.heads_tails(&w, 1).unwrap();
        assert_eq!(r.heads, vec![Node { pos: 1, copy: 1 }]);
        assert_eq!(r.tails, vec![Node { pos: 1, copy: 1 }]);
    }

    #[test]
    fn free_variables_are_checked() {
        assert!(parse_fot(&IDENTITY.replace("(lab a x)", "(lab a y)")).is_err());
        assert!(parse_fot(&IDENTITY.replace("dom: (true)", "dom: (lab a x)")).is_err());
    }

    #[test]
    fn missing_order_is_rejected() {
        assert!(parse_fot(&IDENTITY.replace("ord 1 1: (le x y)\n", "")).is_err());
    }

    #[test]
    fn label_clash_is_reported() {
        let t = parse_fot(&IDENTITY.replace("pos 1 b: (lab b x)", "pos 1 b: (true)")).unwrap();
        let w = t.input().parse_word("a").unwrap();
        assert!(matches!(t.output_structure(&w), Err(Error::LabelClash { copy: 1, pos: 1, .. })));
    }

    #[test]
    fn unordered_output_is_not_a_string() {
        let t = parse_fot(&IDENTITY.replace("(le x y)", "(= x y)")).unwrap();
        let w = t.input().parse_word("ab").unwrap();
        assert!(matches!(t.output_string(&w), Err(Error::NotAString(_))));
    }
}
