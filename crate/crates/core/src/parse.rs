//! Line-oriented lexing shared by the `.sst`, `.sstla` and `.fot` readers.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::alphabet::Alphabet;
use crate::error::{syntax, Result};
use crate::subst::{Substitution, Token};

/// Non-empty, comment-stripped lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = match l.find('#') {
                Some(p) => &l[..p],
                None => l,
            };
            let l = l.trim();
            (!l.is_empty()).then(|| (i + 1, l.to_string()))
        })
        .collect()
}

/// Split on whitespace, additionally isolating `{`, `}` and `;`.
pub(crate) fn lex(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in line.split_whitespace() {
        let mut cur = String::new();
        for ch in word.chars() {
            if matches!(ch, '{' | '}' | ';') {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

/// Checks the magic first line and returns the remaining lines.
pub(crate) fn expect_header(text: &str, magic: &str) -> Result<Vec<(usize, String)>> {
    let mut lines = content_lines(text);
    if lines.is_empty() {
        return Err(syntax(1, format!("empty input, expected `{magic}`")));
    }
    let (no, first) = lines.remove(0);
    if first != magic {
        return Err(syntax(no, format!("expected `{magic}`, found `{first}`")));
    }
    Ok(lines)
}

/// `key: v1 v2 ...` lines collected by key; other lines are returned untouched.
pub(crate) struct Sections {
    pub fields: HashMap<String, (usize, Vec<String>)>,
    pub rest: Vec<(usize, String)>,
}

pub(crate) fn split_sections(lines: Vec<(usize, String)>, keys: &[&str]) -> Result<Sections> {
    let mut fields = HashMap::new();
    let mut rest = Vec::new();
    for (no, line) in lines {
        let key = line
            .split_once(':')
            .map(|(k, _)| k.trim())
            .filter(|k| keys.contains(k));
        match key {
            Some(k) => {
                let (_, values) = line.split_once(':').unwrap();
                let values = values.split_whitespace().map(str::to_string).collect();
                if fields.insert(k.to_string(), (no, values)).is_some() {
                    return Err(syntax(no, format!("duplicate `{k}:` line")));
                }
            }
            None => rest.push((no, line)),
        }
    }
    Ok(Sections { fields, rest })
}

impl Sections {
    pub fn take(&mut self, key: &str, at_line: usize) -> Result<(usize, Vec<String>)> {
        self.fields
            .remove(key)
            .ok_or_else(|| syntax(at_line, format!("missing `{key}:` line")))
    }

    pub fn take_opt(&mut self, key: &str) -> Option<(usize, Vec<String>)> {
        self.fields.remove(key)
    }
}

/// Ordered set of names with index lookup.
pub(crate) fn name_index(names: &[String], what: &str, line: usize) -> Result<HashMap<String, usize>> {
    let mut idx = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if idx.insert(n.clone(), i).is_some() {
            return Err(syntax(line, format!("duplicate {what} `{n}`")));
        }
    }
    Ok(idx)
}

pub(crate) fn lookup(idx: &HashMap<String, usize>, name: &str, what: &str, line: usize) -> Result<usize> {
    idx.get(name)
        .copied()
        .ok_or_else(|| syntax(line, format!("undeclared {what} `{name}`")))
}

/// A parsed `q -label-> q' { X := ... ; ... }` line.
pub(crate) struct RawTransition {
    pub line: usize,
    pub from: String,
    pub label: String,
    pub to: String,
    pub assigns: Vec<(String, Vec<String>)>,
}

pub(crate) fn parse_transition(line: usize, text: &str) -> Result<RawTransition> {
    let toks = lex(text);
    if toks.len() < 3 {
        return Err(syntax(line, "malformed transition"));
    }
    let arrow = &toks[1];
    if !(arrow.starts_with('-') && arrow.ends_with("->") && arrow.len() > 3) {
        return Err(syntax(line, format!("expected `-<letter>->`, found `{arrow}`")));
    }
    let label = arrow[1..arrow.len() - 2].to_string();
    let mut assigns = Vec::new();
    if toks.len() > 3 {
        if toks[3] != "{" || toks.last().map(String::as_str) != Some("}") {
            return Err(syntax(line, "update block must be enclosed in `{ }`"));
        }
        let body = &toks[4..toks.len() - 1];
        for part in body.split(|t| t == ";") {
            if part.is_empty() {
                continue;
            }
            if part.len() < 2 || part[1] != ":=" {
                return Err(syntax(line, format!("expected `X := ...`, found `{}`", part.join(" "))));
            }
            assigns.push((part[0].clone(), part[2..].to_vec()));
        }
    }
    Ok(RawTransition {
        line,
        from: toks[0].clone(),
        label,
        to: toks[2].clone(),
        assigns,
    })
}

/// Resolve one right-hand-side token into letters/variables; unknown tokens
/// are split by longest match over the letter and variable names.
fn resolve_rhs(
    tok: &str,
    out: &Alphabet,
    vars: &HashMap<String, usize>,
    line: usize,
) -> Result<Vec<Token>> {
    if let Some(&v) = vars.get(tok) {
        return Ok(vec![Token::Var(v)]);
    }
    if let Some(c) = out.index_of(tok) {
        return Ok(vec![Token::Letter(c)]);
    }
    let mut res = Vec::new();
    let mut rest = tok;
    while !rest.is_empty() {
        let var = vars
            .iter()
            .filter(|(n, _)| rest.starts_with(n.as_str()))
            .max_by_key(|(n, _)| n.len())
            .map(|(n, &v)| (n.len(), Token::Var(v)));
        let letter = out
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, l)| rest.starts_with(l.as_str()))
            .max_by_key(|(_, l)| l.len())
            .map(|(c, l)| (l.len(), Token::Letter(c)));
        let pick = match (var, letter) {
            (Some(v), Some(l)) => Some(if v.0 >= l.0 { v } else { l }),
            (v, l) => v.or(l),
        };
        match pick {
            Some((len, t)) => {
                res.push(t);
                rest = &rest[len..];
            }
            None => return Err(syntax(line, format!("unknown token `{tok}` in update"))),
        }
    }
    Ok(res)
}

/// Build a full substitution; variables without an assignment keep their value.
pub(crate) fn build_subst(
    assigns: &[(String, Vec<String>)],
    out: &Alphabet,
    vars: &HashMap<String, usize>,
    num_vars: usize,
    line: usize,
) -> Result<Substitution> {
    let mut images: BTreeMap<usize, Vec<Token>> = BTreeMap::new();
    for (lhs, rhs) in assigns {
        let x = lookup(vars, lhs, "variable", line)?;
        let mut img = Vec::new();
        for t in rhs {
            img.extend(resolve_rhs(t, out, vars, line)?);
        }
        if images.insert(x, img).is_some() {
            return Err(syntax(line, format!("variable `{lhs}` assigned twice")));
        }
    }
    let mut full = Substitution::identity(num_vars).images().to_vec();
    for (x, img) in images {
        full[x] = img;
    }
    Ok(Substitution::from_images(full))
}

/// Letters and variables must not share names.
pub(crate) fn check_disjoint(classes: &[(&str, &[String])], line: usize) -> Result<()> {
    let mut seen: HashMap<&str, &str> = HashMap::new();
    for (what, names) in classes {
        let local: HashSet<&str> = names.iter().map(String::as_str).collect();
        for n in local {
            if let Some(prev) = seen.insert(n, what) {
                if prev != *what {
                    return Err(syntax(line, format!("`{n}` is both a {prev} and a {what}")));
                }
            }
        }
    }
    Ok(())
}

/// Render a substitution image as space-separated tokens.
pub(crate) fn render_image(img: &[Token], out: &Alphabet, vars: &[String]) -> String {
    img.iter()
        .map(|t| match *t {
            Token::Letter(c) => out.letter(c).to_string(),
            Token::Var(v) => vars[v].clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}
