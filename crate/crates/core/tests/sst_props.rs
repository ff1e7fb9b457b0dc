mod common;

use common::{corpus, output_oracle, sst};
use proptest::prelude::*;
use streamfo::alphabet::words_up_to;
use streamfo::{Substitution, Token};

#[test]
fn t2_on_abaa() {
    let t = sst("t2.sst");
    assert_eq!(t.transform("abaa").unwrap().as_deref(), Some("aaaaabab"));
    assert_eq!(t.transform("").unwrap().as_deref(), Some(""));
    let w = t.input().parse_word("abaa").unwrap();
    let run = t.run(&w).unwrap().unwrap();
    let expect = [
        ["", "", ""],
        ["a", "a", ""],
        ["a", "ba", "b"],
        ["aa", "aba", "b"],
        ["aaa", "aaba", "b"],
    ];
    for (i, row) in expect.iter().enumerate() {
        let sigma = run.sigma(i);
        for (x, want) in row.iter().enumerate() {
            let got = t.output_alphabet().render(&Substitution::erase(sigma.image(x)));
            assert_eq!(got, *want, "variable {x} after {i} letters");
        }
    }
}

#[test]
fn halving_machines() {
    for name in ["t0.sst", "t1.sst"] {
        let t = sst(name);
        for n in 0..=20 {
            let got = t.output(&vec![0; n]).unwrap();
            assert_eq!(got, Some(vec![0; n.div_ceil(2)]), "{name} on a^{n}");
        }
    }
}

#[test]
fn valuation_and_run_outputs_agree_with_oracle() {
    for (name, t) in corpus() {
        for w in words_up_to(t.input().len(), 6) {
            let o = t.output(&w).unwrap();
            assert_eq!(o, t.output_via_run(&w).unwrap(), "{name} {w:?}");
            assert_eq!(o, output_oracle(&t, &w), "{name} {w:?}");
        }
    }
}

#[test]
fn run_extends_by_one_step() {
    for (name, t) in corpus() {
        for w in words_up_to(t.input().len(), 5) {
            let Some(run) = t.run(&w).unwrap() else { continue };
            for a in 0..t.input().len() {
                let Some((_, rho)) = t.transition(run.last_state(), a) else { continue };
                let mut wa = w.clone();
                wa.push(a);
                let longer = t.run(&wa).unwrap().unwrap();
                assert_eq!(
                    longer.sigma(wa.len()),
                    Substitution::compose(&run.sigma(w.len()), rho),
                    "{name} {wa:?}"
                );
            }
        }
    }
}

#[test]
fn text_round_trip() {
    for (name, t) in corpus() {
        let back = streamfo::parse_sst(&t.to_text()).unwrap();
        assert_eq!(back, t, "{name}");
    }
}

fn subst(k: usize, gamma: usize) -> impl Strategy<Value = Substitution> {
    let token = prop_oneof![(0..gamma).prop_map(Token::Letter), (0..k).prop_map(Token::Var)];
    prop::collection::vec(prop::collection::vec(token, 0..4), k).prop_map(Substitution::from_images)
}

proptest! {
    #[test]
    fn composition_is_associative(a in subst(3, 2), b in subst(3, 2), c in subst(3, 2)) {
        let left = Substitution::compose(&Substitution::compose(&a, &b), &c);
        let right = Substitution::compose(&a, &Substitution::compose(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_neutral(a in subst(3, 2)) {
        let id = Substitution::identity(3);
        prop_assert_eq!(Substitution::compose(&id, &a), a.clone());
        prop_assert_eq!(Substitution::compose(&a, &id), a);
    }
}
