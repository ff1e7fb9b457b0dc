use streamfo::{dfa_aperiodic, Alphabet, Dfa};

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

#[test]
fn ending_in_b_is_aperiodic() {
    let d = Dfa::new(ab(), vec!["n".into(), "y".into()], vec![vec![0, 1], vec![0, 1]], vec![false, true]).unwrap();
    assert!(dfa_aperiodic(&d).aperiodic);
}

#[test]
fn even_length_is_not() {
    let a = Alphabet::new(["a"]).unwrap();
    let d = Dfa::new(a, vec!["e".into(), "o".into()], vec![vec![1], vec![0]], vec![true, false]).unwrap();
    let v = dfa_aperiodic(&d);
    assert!(!v.aperiodic);
    let w = v.witness.unwrap();
    assert_eq!((w.word, w.period), (vec![0], 2));
}

#[test]
fn single_state_is_aperiodic() {
    let d = Dfa::new(ab(), vec!["s".into()], vec![vec![0, 0]], vec![true]).unwrap();
    assert!(dfa_aperiodic(&d).aperiodic);
}

#[test]
fn common_word_is_shortlex_least() {
    // one automaton, queried from two start states
    let d = Dfa::new(
        ab(),
        vec!["x".into(), "xa".into(), "yb".into(), "ya".into()],
        vec![vec![1, 2], vec![1, 2], vec![3, 2], vec![3, 2]],
        vec![false, true, false, true],
    )
    .unwrap();
    assert_eq!(d.common_word(0, 2), Some(vec![0]));
    assert_eq!(d.common_word(0, 1), Some(vec![0]));
}
