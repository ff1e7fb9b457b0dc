#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use streamfo::{parse_fot, parse_sst, FoTransducer, Sst, Token, Word};

pub const CORPUS: [&str; 5] = ["t0.sst", "t1.sst", "t2.sst", "flow4.sst", "fig3.sst"];

pub fn text(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../machines").join(name);
    std::fs::read_to_string(p).unwrap()
}

pub fn sst(name: &str) -> Sst {
    parse_sst(&text(name)).unwrap()
}

pub fn fot(name: &str) -> FoTransducer {
    parse_fot(&text(name)).unwrap()
}

pub fn corpus() -> Vec<(&'static str, Sst)> {
    CORPUS.iter().map(|n| (*n, sst(n))).collect()
}

pub fn random_word(rng: &mut ChaCha8Rng, k: usize, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}

/// Symbolic run from `p`: every variable starts as itself, and each step
/// substitutes the current contents into the update. Returns the final
/// contents, or `None` if the run blocks.
pub fn symbolic_run(t: &Sst, p: usize, word: &[usize]) -> Option<(usize, Vec<Vec<Token>>)> {
    let k = t.num_vars();
    let mut val: Vec<Vec<Token>> = (0..k).map(|x| vec![Token::Var(x)]).collect();
    let mut q = p;
    for &a in word {
        let (next, rho) = t.transition(q, a)?;
        val = rho
            .images()
            .iter()
            .map(|img| {
                img.iter()
                    .flat_map(|tok| match *tok {
                        Token::Var(y) => val[y].clone(),
                        l => vec![l],
                    })
                    .collect()
            })
            .collect();
        q = next;
    }
    Some((q, val))
}

/// Number of copies of `y` (as it was at the start) inside `x` at the end.
pub fn flow_oracle(t: &Sst, word: &[usize], p: usize, y: usize, q: usize, x: usize) -> Option<usize> {
    let (end, val) = symbolic_run(t, p, word)?;
    (end == q).then(|| val[x].iter().filter(|&&tok| tok == Token::Var(y)).count())
}

/// Plain string evaluation of a machine, starting from empty variables.
pub fn output_oracle(t: &Sst, word: &[usize]) -> Option<Word> {
    let (q, val) = symbolic_run(t, t.initial(), word)?;
    let f = t.out(q)?;
    Some(
        f.iter()
            .flat_map(|&x| val[x].iter())
            .filter_map(|tok| match *tok {
                Token::Letter(c) => Some(c),
                Token::Var(_) => None,
            })
            .collect(),
    )
}
