mod common;

use std::collections::BTreeSet;

use common::{fot, sst};
use streamfo::alphabet::words_up_to;
use streamfo::logic::is_string_check;
use streamfo::Node;

fn n(pos: usize, copy: usize) -> Node {
    Node { pos, copy }
}

#[test]
fn f1_on_abaa() {
    let t = fot("f1.fot");
    assert_eq!(t.copies(), 3);
    assert_eq!(t.transform("abaa").unwrap().as_deref(), Some("aaaaabab"));
    let w = t.input().parse_word("abaa").unwrap();
    let st = t.output_structure(&w).unwrap().unwrap();
    assert!(is_string_check(&st.as_structure(t.output_alphabet())));
}

#[test]
fn f1_agrees_with_t2() {
    let f = fot("f1.fot");
    let t2 = sst("t2.sst");
    for w in words_up_to(2, 6) {
        assert_eq!(f.output_string(&w).unwrap(), t2.output(&w).unwrap(), "{w:?}");
    }
}

#[test]
fn heads_and_tails_of_the_running_example() {
    let t = fot("f1.fot");
    let w = t.input().parse_word("abaa").unwrap();
    let r = t.heads_tails(&w, 3).unwrap();
    let set = |v: &[Node]| v.iter().copied().collect::<BTreeSet<_>>();
    assert_eq!(set(&r.heads), set(&[n(1, 1), n(3, 2)]));
    assert_eq!(set(&r.tails), set(&[n(3, 1), n(2, 3)]));
    let words: BTreeSet<String> = r.segments.iter().map(|s| t.output_alphabet().render(&s.word)).collect();
    assert_eq!(words, BTreeSet::from(["aa".to_string(), "abab".to_string()]));
}

#[test]
fn segments_partition_the_prefix_nodes() {
    let t = fot("f1.fot");
    for w in words_up_to(2, 5) {
        let st = t.output_structure(&w).unwrap().unwrap();
        assert_eq!(t.output_string(&w).unwrap().unwrap().len(), st.len());
        for i in 1..=w.len() {
            let r = t.heads_tails(&w, i).unwrap();
            assert_eq!(r.heads.len(), r.tails.len());
            assert!(r.heads.len() <= t.copies() * w.len());
            let mut covered: Vec<Node> = r.segments.iter().flat_map(|s| s.nodes.iter().copied()).collect();
            covered.sort();
            let mut alive: Vec<Node> = st.nodes.iter().copied().filter(|v| v.pos <= i).collect();
            alive.sort();
            assert_eq!(covered, alive, "{w:?} at {i}");
            let tails: BTreeSet<Node> = r.segments.iter().map(|s| s.tail).collect();
            assert_eq!(tails, r.tails.iter().copied().collect());
        }
    }
}

#[test]
fn heads_are_named_by_their_addresses() {
    let t = fot("f1.fot");
    let k = t.qrank();
    for w in words_up_to(2, 5) {
        for i in 1..=w.len() {
            assert!(t.verify_head_uniqueness(&w, i, k).unwrap(), "{w:?} at {i}");
        }
    }
}
