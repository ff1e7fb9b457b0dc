use std::path::PathBuf;

use streamfo::graph::{build_graph, check_variable_paths, path_characterization_check, GraphNode, PathConditions, PathVerdict, Side};
use streamfo::alphabet::words_up_to;
use streamfo::{parse_sst, Sst};

fn machine(name: &str) -> Sst {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../machines").join(name);
    parse_sst(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn fig3_readout() {
    let t = machine("fig3.sst");
    let w = t.input().parse_word("aaaaa").unwrap();
    let g = build_graph(&t, &w).unwrap();
    let out = g.readout().unwrap();
    assert_eq!(t.output_alphabet().render(&out), "ceaeaaafbdcdcf");
    let x = t.var_index("X").unwrap();
    match g.unique_path_check() {
        PathVerdict::Path(p) => {
            assert_eq!(p[0], GraphNode::new(x, Side::In, 5));
            assert_eq!(*p.last().unwrap(), GraphNode::new(x, Side::Out, 5));
        }
        v => panic!("{v:?}"),
    }
    assert!(check_variable_paths(&t, &w, &g).unwrap());
    let r = path_characterization_check(&t, &w).unwrap();
    assert!(r.ok(), "{:?}", r.mismatches);
    let z = t.var_index("Z").unwrap();
    let c = PathConditions::new(&t, &w).unwrap();
    assert!(c.conditions(GraphNode::new(x, Side::In, 3), GraphNode::new(z, Side::Out, 2))[2]);
    assert!(c.conditions(GraphNode::new(z, Side::In, 1), GraphNode::new(z, Side::Out, 0))[0]);
}

#[test]
fn fig3_usefulness_matches_the_drawing() {
    let t = machine("fig3.sst");
    let w = t.input().parse_word("aaaaa").unwrap();
    let v = |n: &str| t.var_index(n).unwrap();
    assert!(t.useful(&w, 0, v("Z")).unwrap());
    assert!(!t.useful(&w, 0, v("X")).unwrap());
    assert!(!t.useful(&w, 4, v("Z")).unwrap());
    for x in 0..t.num_vars() {
        let in_out = t.out(5).unwrap().contains(&x);
        assert_eq!(t.useful(&w, 5, x).unwrap(), in_out);
    }
}

#[test]
fn readout_is_output_across_the_corpus() {
    for name in ["t0.sst", "t1.sst", "t2.sst", "fig3.sst"] {
        let t = machine(name);
        for w in words_up_to(t.input().len(), 6) {
            let Some(out) = t.output(&w).unwrap() else { continue };
            let g = build_graph(&t, &w).unwrap();
            assert_eq!(g.readout().unwrap(), out, "{name} {w:?}");
            let useful: usize = g.useful.iter().map(|c| c.iter().filter(|&&u| u).count()).sum();
            assert_eq!(g.nodes.len(), 2 * useful, "{name} {w:?}");
            assert!(check_variable_paths(&t, &w, &g).unwrap(), "{name} {w:?}");
        }
    }
}

#[test]
fn path_characterization_on_aperiodic_machines() {
    for name in ["t2.sst", "fig3.sst"] {
        let t = machine(name);
        for w in words_up_to(t.input().len(), 5) {
            if t.output(&w).unwrap().is_none() {
                continue;
            }
            let r = path_characterization_check(&t, &w).unwrap();
            assert!(r.ok(), "{name} {w:?}: {:?}", r.mismatches);
        }
    }
}

#[test]
fn empty_input_graph() {
    let t = machine("t2.sst");
    let g = build_graph(&t, &[]).unwrap();
    assert_eq!(g.nodes.len(), 6);
    assert!(g.edges.iter().all(|e| e.label.is_empty()));
    assert_eq!(g.readout().unwrap(), Vec::<usize>::new());
}

#[test]
fn multiple_flow_is_rejected() {
    let t = machine("flow4.sst");
    assert!(build_graph(&t, &[0; 4]).is_err());
}
