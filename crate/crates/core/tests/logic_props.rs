mod common;

use std::collections::{BTreeSet, HashMap};

use common::random_word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use streamfo::alphabet::words_up_to;
use streamfo::logic::{eval, eval_at, Formula, StringModel};
use streamfo::{equiv_k, Word};

fn model(w: &[usize]) -> StringModel {
    StringModel::new(w.iter().map(|&c| ["a", "b"][c]))
}

fn pow(s: &[usize], m: usize) -> Word {
    s.iter().copied().cycle().take(s.len() * m).collect()
}

/// Random formula over {a, b} whose free variables come from `vars` and
/// whose quantifier rank is at most `q`.
fn random_formula(rng: &mut ChaCha8Rng, q: usize, depth: usize, vars: &mut Vec<String>) -> Formula {
    let pick = |rng: &mut ChaCha8Rng, vars: &[String]| vars[rng.gen_range(0..vars.len())].clone();
    let choice = if depth == 0 || vars.is_empty() { 0 } else { rng.gen_range(0..7) };
    match choice {
        0 if vars.is_empty() => {
            if rng.gen_bool(0.5) {
                Formula::True
            } else {
                Formula::False
            }
        }
        0 => match rng.gen_range(0..4) {
            0 => Formula::lab(["a", "b"][rng.gen_range(0..2)], &pick(rng, vars)),
            1 => Formula::Eq(pick(rng, vars), pick(rng, vars)),
            2 => Formula::le(&pick(rng, vars), &pick(rng, vars)),
            _ => Formula::Lt(pick(rng, vars), pick(rng, vars)),
        },
        1 => Formula::not(random_formula(rng, q, depth - 1, vars)),
        2 => Formula::and(random_formula(rng, q, depth - 1, vars), random_formula(rng, q, depth - 1, vars)),
        3 => Formula::or(random_formula(rng, q, depth - 1, vars), random_formula(rng, q, depth - 1, vars)),
        4 => Formula::implies(random_formula(rng, q, depth - 1, vars), random_formula(rng, q, depth - 1, vars)),
        _ if q == 0 => Formula::not(random_formula(rng, q, depth - 1, vars)),
        c => {
            let z = format!("z{}", vars.len());
            vars.push(z.clone());
            let body = random_formula(rng, q - 1, depth - 1, vars);
            vars.pop();
            if c == 5 {
                Formula::exists(&z, body)
            } else {
                Formula::forall(&z, body)
            }
        }
    }
}

fn random_sentence(rng: &mut ChaCha8Rng, q: usize) -> Formula {
    let z = "z0";
    let body = random_formula(rng, q.saturating_sub(1), 4, &mut vec![z.to_string()]);
    if q == 0 {
        Formula::True
    } else if rng.gen_bool(0.5) {
        Formula::exists(z, body)
    } else {
        Formula::forall(z, body)
    }
}

#[test]
fn powers_become_indistinguishable() {
    for k in 0..=2usize {
        for s in [vec![0], vec![0, 1], vec![1, 0]] {
            let m = 1 << k;
            assert!(equiv_k(&pow(&s, m), &pow(&s, m + 1), k).unwrap(), "k={k} s={s:?}");
        }
    }
    assert!(equiv_k(&[0; 4], &[0; 5], 2).unwrap());
    assert!(!equiv_k(&[0; 2], &[0; 3], 2).unwrap());
    assert!(equiv_k(&[0; 3], &[0; 4], 2).unwrap());
    assert!(!equiv_k(&[0], &[1], 1).unwrap());
}

#[test]
fn rank_zero_and_one_have_simple_characterizations() {
    let words: Vec<Word> = words_up_to(2, 4).collect();
    for u in &words {
        for v in &words {
            assert!(equiv_k(u, v, 0).unwrap());
            let letters = |w: &Word| w.iter().copied().collect::<BTreeSet<_>>();
            assert_eq!(equiv_k(u, v, 1).unwrap(), letters(u) == letters(v), "{u:?} {v:?}");
        }
    }
}

#[test]
fn concatenation_preserves_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    while checked < 200 {
        let k = rng.gen_range(0..=2);
        let partner = |rng: &mut ChaCha8Rng, s: &Word| -> Word {
            for _ in 0..50 {
                let t = random_word(rng, 2, 5);
                if equiv_k(s, &t, k).unwrap() {
                    return t;
                }
            }
            s.clone()
        };
        let s1 = random_word(&mut rng, 2, 5);
        let s2 = random_word(&mut rng, 2, 5);
        let t1 = partner(&mut rng, &s1);
        let t2 = partner(&mut rng, &s2);
        let left: Word = s1.iter().chain(&s2).copied().collect();
        let right: Word = t1.iter().chain(&t2).copied().collect();
        assert!(equiv_k(&left, &right, k).unwrap(), "k={k} {s1:?}{s2:?} vs {t1:?}{t2:?}");
        checked += 1;
    }
}

#[test]
fn equivalent_words_satisfy_the_same_sentences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let words: Vec<Word> = words_up_to(2, 4).collect();
    for _ in 0..300 {
        let k = rng.gen_range(0..=2);
        let f = random_sentence(&mut rng, k);
        assert!(f.qrank() <= k);
        let u = &words[rng.gen_range(0..words.len())];
        let v = &words[rng.gen_range(0..words.len())];
        if equiv_k(u, v, k).unwrap() {
            let e = HashMap::new();
            assert_eq!(eval(&f, &model(u), &e).unwrap(), eval(&f, &model(v), &e).unwrap(), "{f} {u:?} {v:?}");
        }
    }
}

#[test]
fn types_are_an_equivalence_refined_by_rank() {
    let words: Vec<Word> = words_up_to(2, 4).collect();
    for k in 0..=2 {
        let rel: Vec<Vec<bool>> = words
            .iter()
            .map(|u| words.iter().map(|v| equiv_k(u, v, k).unwrap()).collect())
            .collect();
        let n = words.len();
        for i in 0..n {
            assert!(rel[i][i]);
            for j in 0..n {
                assert_eq!(rel[i][j], rel[j][i]);
                for l in 0..n {
                    if rel[i][j] && rel[j][l] {
                        assert!(rel[i][l]);
                    }
                }
                if equiv_k(&words[i], &words[j], k + 1).unwrap() {
                    assert!(rel[i][j]);
                }
            }
        }
    }
}

/// Pairs of distinct-or-equal words related by `≡_r`, drawn from short words.
fn related_pairs(r: usize) -> Vec<(Word, Word)> {
    let words: Vec<Word> = words_up_to(2, 4).collect();
    let mut out = Vec::new();
    for u in &words {
        for v in &words {
            if equiv_k(u, v, r).unwrap() {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out.push((vec![0; 8], vec![0; 9]));
    out
}

#[test]
fn formulas_transfer_across_equivalent_decompositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..=1usize {
        let pairs = related_pairs(k + 2);
        for _ in 0..150 {
            let mut vars = vec!["x".to_string(), "y".to_string()];
            let phi = random_formula(&mut rng, k, 4, &mut vars);
            assert!(phi.qrank() <= k);
            let mut one = vec!["x".to_string()];
            let psi = random_formula(&mut rng, k, 4, &mut one);
            let mut pick = || pairs[rng.gen_range(0..pairs.len())].clone();
            let ((s1, t1), (s2, t2), (s3, t3)) = (pick(), pick(), pick());
            let (a, b) = (rng.gen_range(0..2), rng.gen_range(0..2));
            let build = |p: &Word, q: &Word, r: &Word| -> Word {
                let mut w = p.clone();
                w.push(a);
                w.extend(q);
                w.push(b);
                w.extend(r);
                w
            };
            let (w, w2) = (build(&s1, &s2, &s3), build(&t1, &t2, &t3));
            let (i1, i2) = (s1.len() + 1, s1.len() + s2.len() + 2);
            let (j1, j2) = (t1.len() + 1, t1.len() + t2.len() + 2);
            assert_eq!(
                eval_at(&phi, &model(&w), &[("x", i1), ("y", i2)]).unwrap(),
                eval_at(&phi, &model(&w2), &[("x", j1), ("y", j2)]).unwrap(),
                "{phi} on {w:?} / {w2:?}"
            );
            let (u, u2) = (&w[..s1.len() + s2.len() + 1], &w2[..t1.len() + t2.len() + 1]);
            assert_eq!(
                eval_at(&psi, &model(u), &[("x", i1)]).unwrap(),
                eval_at(&psi, &model(u2), &[("x", j1)]).unwrap(),
                "{psi}"
            );
        }
    }
}

#[test]
fn renaming_bound_variables_keeps_meaning() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let mut vars = vec!["x".to_string()];
        let f = random_formula(&mut rng, 2, 5, &mut vars);
        let g = f.rename_bound("r_");
        assert_eq!(f.free_vars(), g.free_vars());
        let w = random_word(&mut rng, 2, 5);
        for p in 1..=w.len() {
            assert_eq!(
                eval_at(&f, &model(&w), &[("x", p)]).unwrap(),
                eval_at(&g, &model(&w), &[("x", p)]).unwrap(),
                "{f}"
            );
        }
        // the expanded form means the same
        let e = f.expand();
        for p in 1..=w.len() {
            assert_eq!(
                eval_at(&f, &model(&w), &[("x", p)]).unwrap(),
                eval_at(&e, &model(&w), &[("x", p)]).unwrap()
            );
        }
    }
}

#[test]
fn example_languages() {
    let l1 = Formula::parse("(forall x (implies (last x) (lab b x)))").unwrap();
    let at = |f: &Formula, s: &str| eval(f, &StringModel::from_chars(s), &HashMap::new()).unwrap();
    assert!(at(&l1, "ab"));
    assert!(!at(&l1, "ba"));
    assert!(at(&l1, ""));
    let l2 = Formula::parse(
        "(and (forall x (implies (first x) (lab a x))) (forall x (implies (last x) (lab b x)))
              (forall x (forall y (implies (succ x y) (iff-ab x y)))))"
            .replace("(iff-ab x y)", "(or (and (lab a x) (lab b y)) (and (lab b x) (lab a y)))")
            .as_str(),
    )
    .unwrap();
    for w in words_up_to(2, 6) {
        let s: String = w.iter().map(|&c| ['a', 'b'][c]).collect();
        let want = w.len() % 2 == 0 && w.chunks(2).all(|c| c == [0, 1]);
        assert_eq!(at(&l2, &s), want, "{s}");
    }
}
