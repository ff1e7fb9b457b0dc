//! Output graphs of SST runs: one in/out node pair per useful variable and
//! column, with edges labelled by the constant words of the updates.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::flow::FlowValue;
use crate::monoid;
use crate::sst::Sst;
use crate::subst::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GraphNode {
    pub var: usize,
    pub side: Side,
    pub col: usize,
}

impl GraphNode {
    pub fn new(var: usize, side: Side, col: usize) -> Self {
        GraphNode { var, side, col }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: GraphNode,
    pub to: GraphNode,
    pub label: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SstOutputGraph {
    pub vars: Vec<String>,
    pub columns: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<Edge>,
    /// Updates of useless variables, kept only for drawing.
    pub dead_edges: Vec<Edge>,
    /// `useful[i][x]` for every column `i` and variable `x`.
    pub useful: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PathVerdict {
    Path(Vec<GraphNode>),
    Violation(String),
}

impl SstOutputGraph {
    pub fn node_name(&self, n: GraphNode) -> String {
        let side = match n.side {
            Side::In => "in",
            Side::Out => "out",
        };
        format!("{}_{}_{}", self.vars[n.var], side, n.col)
    }

    /// `(X^in,3)` style label.
    pub fn node_label(&self, n: GraphNode) -> String {
        let side = match n.side {
            Side::In => "in",
            Side::Out => "out",
        };
        format!("({}^{},{})", self.vars[n.var], side, n.col)
    }

    fn out_edges(&self) -> HashMap<GraphNode, Vec<&Edge>> {
        let mut m: HashMap<GraphNode, Vec<&Edge>> = HashMap::new();
        for e in &self.edges {
            m.entry(e.from).or_default().push(e);
        }
        m
    }

    pub fn unique_path_check(&self) -> PathVerdict {
        if self.nodes.is_empty() {
            return PathVerdict::Violation("no source".into());
        }
        let mut indeg: HashMap<GraphNode, usize> = self.nodes.iter().map(|&n| (n, 0)).collect();
        let out = self.out_edges();
        for e in &self.edges {
            *indeg.get_mut(&e.to).expect("edge into a missing node") += 1;
        }
        for &n in &self.nodes {
            if indeg[&n] > 1 {
                return PathVerdict::Violation(format!("{} has in-degree {}", self.node_label(n), indeg[&n]));
            }
            let d = out.get(&n).map_or(0, Vec::len);
            if d > 1 {
                return PathVerdict::Violation(format!("{} has out-degree {d}", self.node_label(n)));
            }
        }
        let sources: Vec<GraphNode> = self.nodes.iter().copied().filter(|n| indeg[n] == 0).collect();
        let sinks = self.nodes.iter().filter(|n| !out.contains_key(n)).count();
        match sources.len() {
            0 => return PathVerdict::Violation("no source".into()),
            1 => {}
            k => return PathVerdict::Violation(format!("{k} sources")),
        }
        if sinks != 1 {
            return PathVerdict::Violation(format!("{sinks} sinks"));
        }
        let mut path = vec![sources[0]];
        let mut cur = sources[0];
        while let Some(es) = out.get(&cur) {
            cur = es[0].to;
            if path.len() > self.nodes.len() {
                return PathVerdict::Violation("cycle".into());
            }
            path.push(cur);
        }
        if path.len() != self.nodes.len() {
            return PathVerdict::Violation(format!(
                "path covers {} of {} nodes",
                path.len(),
                self.nodes.len()
            ));
        }
        PathVerdict::Path(path)
    }

    /// Concatenated labels along the unique path; ε for the empty graph.
    pub fn readout(&self) -> Result<Word> {
        if self.nodes.is_empty() {
            return Ok(Vec::new());
        }
        let path = match self.unique_path_check() {
            PathVerdict::Path(p) => p,
            PathVerdict::Violation(v) => return Err(Error::Precondition(format!("not a single path: {v}"))),
        };
        let out = self.out_edges();
        let mut w = Vec::new();
        for n in &path[..path.len() - 1] {
            w.extend_from_slice(&out[n][0].label);
        }
        Ok(w)
    }

    /// Labels along the edges from `from` to `to`, following out-edges.
    pub fn path_word(&self, from: GraphNode, to: GraphNode) -> Option<Word> {
        let out = self.out_edges();
        let mut w = Vec::new();
        let mut cur = from;
        for _ in 0..=self.edges.len() {
            if cur == to {
                return Some(w);
            }
            let e = out.get(&cur)?.first()?;
            w.extend_from_slice(&e.label);
            cur = e.to;
        }
        None
    }

    /// Reflexive-transitive reachability from `from`.
    pub fn reachable(&self, from: GraphNode) -> Vec<GraphNode> {
        let out = self.out_edges();
        let mut seen = vec![from];
        let mut queue = VecDeque::from([from]);
        while let Some(n) = queue.pop_front() {
            for e in out.get(&n).into_iter().flatten() {
                if !seen.contains(&e.to) {
                    seen.push(e.to);
                    queue.push_back(e.to);
                }
            }
        }
        seen
    }

    pub fn to_dot(&self, out_alphabet: &crate::alphabet::Alphabet, show_useless: bool) -> String {
        let mut s = String::from("digraph sst_output {\n  rankdir=LR;\n  node [shape=circle, label=\"\", width=0.15];\n");
        for col in 0..self.columns {
            let mut names = Vec::new();
            for x in 0..self.vars.len() {
                for side in [Side::In, Side::Out] {
                    let n = GraphNode::new(x, side, col);
                    if self.useful[col][x] {
                        names.push(self.node_name(n));
                    } else if show_useless {
                        names.push(format!("{} [style=dashed]", self.node_name(n)));
                    }
                }
            }
            if !names.is_empty() {
                let _ = writeln!(s, "  {{ rank=same; {}; }}", names.join("; "));
            }
        }
        let render = |e: &Edge| {
            out_alphabet.render(&e.label).replace('\\', "\\\\").replace('"', "\\\"")
        };
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"{}\"];",
                self.node_name(e.from),
                self.node_name(e.to),
                render(e)
            );
        }
        if show_useless {
            for e in &self.dead_edges {
                let _ = writeln!(
                    s,
                    "  {} -> {} [label=\"{}\", style=dashed];",
                    self.node_name(e.from),
                    self.node_name(e.to),
                    render(e)
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Edges for variable `x` updated by `img` between columns `i` and `i+1`.
fn update_edges(x: usize, img: &[Token], i: usize) -> Vec<Edge> {
    let mut edges = Vec::new();
    let mut consts: Vec<Word> = vec![Vec::new()];
    let mut vars = Vec::new();
    for t in img {
        match *t {
            Token::Letter(c) => consts.last_mut().unwrap().push(c),
            Token::Var(y) => {
                vars.push(y);
                consts.push(Vec::new());
            }
        }
    }
    let entry = GraphNode::new(x, Side::In, i + 1);
    let exit = GraphNode::new(x, Side::Out, i + 1);
    if vars.is_empty() {
        edges.push(Edge {
            from: entry,
            to: exit,
            label: consts.pop().unwrap(),
        });
        return edges;
    }
    edges.push(Edge {
        from: entry,
        to: GraphNode::new(vars[0], Side::In, i),
        label: consts[0].clone(),
    });
    for j in 0..vars.len() - 1 {
        edges.push(Edge {
            from: GraphNode::new(vars[j], Side::Out, i),
            to: GraphNode::new(vars[j + 1], Side::In, i),
            label: consts[j + 1].clone(),
        });
    }
    edges.push(Edge {
        from: GraphNode::new(*vars.last().unwrap(), Side::Out, i),
        to: exit,
        label: consts[vars.len()].clone(),
    });
    edges
}

/// Usefulness of every `(X, i)` along the accepting run.
pub fn useful_table(t: &Sst, word: &[usize]) -> Result<Vec<Vec<bool>>> {
    let run = t.run(word)?.ok_or(Error::DomainMiss)?;
    let qn = run.last_state();
    let f = t.out(qn).ok_or(Error::DomainMiss)?;
    let k = t.num_vars();
    let n = word.len();
    // backwards: live[i][x] iff x at column i reaches F(q_n)
    let mut live = vec![vec![false; k]; n + 1];
    for &y in f {
        live[n][y] = true;
    }
    for i in (0..n).rev() {
        let rho = &run.steps[i];
        for y in 0..k {
            live[i][y] = (0..k).any(|x| live[i + 1][x] && rho.occurrences(x, y) > 0);
        }
    }
    Ok(live)
}

/// Build `G_T(s)`; the machine must be 1-bounded and `s` in its domain.
pub fn build_graph(t: &Sst, word: &[usize]) -> Result<SstOutputGraph> {
    let bounded = monoid::check_one_bounded(t);
    if !bounded.one_bounded {
        let w = bounded.witness.unwrap_or_default();
        return Err(Error::NotOneBounded(t.input().render(&w)));
    }
    build_graph_unchecked(t, word)
}

pub(crate) fn build_graph_unchecked(t: &Sst, word: &[usize]) -> Result<SstOutputGraph> {
    let useful = useful_table(t, word)?;
    let run = t.run(word)?.ok_or(Error::DomainMiss)?;
    let n = word.len();
    let k = t.num_vars();
    let f = t.out(run.last_state()).ok_or(Error::DomainMiss)?;
    for (a, &x) in f.iter().enumerate() {
        if f[..a].contains(&x) {
            return Err(Error::Precondition(format!(
                "output uses `{}` twice, the graph would not be a path",
                t.vars()[x]
            )));
        }
    }
    let mut nodes = Vec::new();
    for (i, row) in useful.iter().enumerate() {
        for x in (0..k).filter(|&x| row[x]) {
            nodes.push(GraphNode::new(x, Side::In, i));
            nodes.push(GraphNode::new(x, Side::Out, i));
        }
    }
    let mut edges = Vec::new();
    let mut dead_edges = Vec::new();
    for x in 0..k {
        let e = Edge {
            from: GraphNode::new(x, Side::In, 0),
            to: GraphNode::new(x, Side::Out, 0),
            label: Vec::new(),
        };
        if useful[0][x] {
            edges.push(e);
        } else {
            dead_edges.push(e);
        }
    }
    for i in 0..n {
        let rho = &run.steps[i];
        for x in 0..k {
            let es = update_edges(x, rho.image(x), i);
            if useful[i + 1][x] {
                edges.extend(es);
            } else {
                dead_edges.extend(es);
            }
        }
    }
    for pair in f.windows(2) {
        edges.push(Edge {
            from: GraphNode::new(pair[0], Side::Out, n),
            to: GraphNode::new(pair[1], Side::In, n),
            label: Vec::new(),
        });
    }
    Ok(SstOutputGraph {
        vars: t.vars().to_vec(),
        columns: n + 1,
        nodes,
        edges,
        dead_edges,
        useful,
    })
}

/// For every useful `(X, i)`, the path from `(X^in,i)` to `(X^out,i)` spells
/// the value of `X` after `i` letters.
pub fn check_variable_paths(t: &Sst, word: &[usize], g: &SstOutputGraph) -> Result<bool> {
    let mut val: Vec<Word> = vec![Vec::new(); t.num_vars()];
    let mut q = t.initial();
    for i in 0..=word.len() {
        if i > 0 {
            let (next, rho) = t.transition(q, word[i - 1]).ok_or(Error::DomainMiss)?;
            val = rho
                .images()
                .iter()
                .map(|img| {
                    img.iter()
                        .flat_map(|tok| match *tok {
                            Token::Letter(c) => vec![c],
                            Token::Var(y) => val[y].clone(),
                        })
                        .collect()
                })
                .collect();
            q = next;
        }
        for x in (0..t.num_vars()).filter(|&x| g.useful[i][x]) {
            let w = g.path_word(GraphNode::new(x, Side::In, i), GraphNode::new(x, Side::Out, i));
            if w.as_ref() != Some(&val[x]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathMismatch {
    pub from: String,
    pub to: String,
    pub reachable: bool,
    /// Which of the three flow conditions held.
    pub conditions: [bool; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCheckReport {
    pub pairs: usize,
    pub mismatches: Vec<PathMismatch>,
}

impl PathCheckReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evaluates the three flow conditions characterising paths between two nodes.
pub struct PathConditions<'a> {
    t: &'a Sst,
    word: &'a [usize],
    states: Vec<usize>,
    // concat[k][(x', y')]: some update read at step k+1 (or the output at k = n)
    // has x' before y'
    concat: Vec<Vec<Vec<bool>>>,
}

impl<'a> PathConditions<'a> {
    pub fn new(t: &'a Sst, word: &'a [usize]) -> Result<Self> {
        let run = t.run(word)?.ok_or(Error::DomainMiss)?;
        let k = t.num_vars();
        let n = word.len();
        let mut concat = vec![vec![vec![false; k]; k]; n + 1];
        let mark = |m: &mut Vec<Vec<bool>>, img: &[usize]| {
            for a in 0..img.len() {
                for b in a + 1..img.len() {
                    m[img[a]][img[b]] = true;
                }
            }
        };
        for (i, rho) in run.steps.iter().enumerate() {
            for img in rho.images() {
                let vars: Vec<usize> = img
                    .iter()
                    .filter_map(|t| match *t {
                        Token::Var(y) => Some(y),
                        Token::Letter(_) => None,
                    })
                    .collect();
                mark(&mut concat[i], &vars);
            }
        }
        let f = t.out(run.last_state()).ok_or(Error::DomainMiss)?.to_vec();
        mark(&mut concat[n], &f);
        Ok(PathConditions {
            t,
            word,
            states: run.states,
            concat,
        })
    }

    fn flows_once(&self, from: (usize, usize), to: (usize, usize)) -> bool {
        let (i, x) = from;
        let (j, y) = to;
        if i > j {
            return false;
        }
        self.t.flow_count(&self.word[i..j], (self.states[i], x), (self.states[j], y)) == FlowValue::One
    }

    pub fn conditions(&self, u: GraphNode, v: GraphNode) -> [bool; 3] {
        let (x, i) = (u.var, u.col);
        let (y, j) = (v.var, v.col);
        let c1 = u.side == Side::In && j <= i && self.flows_once((j, y), (i, x));
        let c2 = v.side == Side::Out && i <= j && self.flows_once((i, x), (j, y));
        let k_vars = self.t.num_vars();
        let c3 = (i.max(j)..=self.word.len()).any(|k| {
            (0..k_vars).any(|x2| {
                self.flows_once((i, x), (k, x2))
                    && (0..k_vars).any(|y2| self.concat[k][x2][y2] && self.flows_once((j, y), (k, y2)))
            })
        });
        [c1, c2, c3]
    }
}

/// Compare graph reachability with the flow conditions for every node pair.
pub fn path_characterization_check(t: &Sst, word: &[usize]) -> Result<PathCheckReport> {
    let g = build_graph(t, word)?;
    let conds = PathConditions::new(t, word)?;
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    for &u in &g.nodes {
        let reach = g.reachable(u);
        for &v in &g.nodes {
            pairs += 1;
            let r = reach.contains(&v);
            let c = conds.conditions(u, v);
            if r != c.iter().any(|&b| b) {
                mismatches.push(PathMismatch {
                    from: g.node_label(u),
                    to: g.node_label(v),
                    reachable: r,
                    conditions: c,
                });
            }
        }
    }
    Ok(PathCheckReport { pairs, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_concatenation_edges() {
        // X := a Y b Z c, reading column 2 -> 3
        let img = [Token::Letter(0), Token::Var(1), Token::Letter(1), Token::Var(2), Token::Letter(2)];
        let es = update_edges(0, &img, 2);
        assert_eq!(es.len(), 3);
        assert_eq!(es[0].from, GraphNode::new(0, Side::In, 3));
        assert_eq!(es[0].to, GraphNode::new(1, Side::In, 2));
        assert_eq!(es[1].from, GraphNode::new(1, Side::Out, 2));
        assert_eq!(es[1].to, GraphNode::new(2, Side::In, 2));
        assert_eq!(es[1].label, vec![1]);
        assert_eq!(es[2].to, GraphNode::new(0, Side::Out, 3));
        let constant = update_edges(1, &[Token::Letter(0)], 0);
        assert_eq!(constant.len(), 1);
        assert_eq!(constant[0].from, GraphNode::new(1, Side::In, 1));
    }
}
