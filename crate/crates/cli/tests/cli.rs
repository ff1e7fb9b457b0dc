use std::path::PathBuf;
use std::process::{Command, Output};

fn machine(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../machines")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn streamfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streamfo")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("streamfo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[track_caller]
fn expect(args: &[&str], code: i32) -> String {
    let o = streamfo(args);
    assert_eq!(o.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn run_reproduces_known_outputs() {
    assert_eq!(expect(&["run", &machine("t2.sst"), "abaa"], 0), "aaaaabab\n");
    assert_eq!(expect(&["run", &machine("t2.sst"), ""], 0), "\n");
    assert_eq!(expect(&["run", &machine("f1.fot"), "abaa"], 0), "aaaaabab\n");
    assert_eq!(expect(&["run", &machine("mirror.sstla"), "bba"], 0), "abb\n");
}

#[test]
fn exit_codes() {
    let partial = scratch("partial.sst");
    std::fs::write(
        &partial,
        "sst\ninput: a b\noutput: a\nstates: q\ninitial: q\nfinal: q\nvars: X\nout q = X\nq -a-> q { X := X a }\n",
    )
    .unwrap();
    assert_eq!(expect(&["run", partial.to_str().unwrap(), "ab"], 1), "DOMAIN-MISS\n");
    expect(&["run", &machine("t2.sst"), "c"], 2);
    expect(&["run", "/nonexistent.sst", "a"], 2);
    expect(&["frobnicate"], 2);
}

#[test]
fn check_reports_verdicts() {
    let t2 = expect(&["check", &machine("t2.sst")], 0);
    assert!(t2.contains("1-bounded: yes") && t2.contains("aperiodic: yes") && t2.contains("monoid size: 1"));
    let t0 = expect(&["check", &machine("t0.sst")], 0);
    assert!(t0.contains("aperiodic: NO (witness a, index 1, period 2)"), "{t0}");
    let f = expect(&["check", &machine("flow4.sst")], 0);
    assert!(f.contains("1-bounded: NO (witness aaaa)"), "{f}");
    expect(&["check", "--strict", &machine("t0.sst")], 1);
    let o = expect(&["check", &machine("overlap.sstla")], 0);
    assert!(o.contains("mutually exclusive: NO"));
}

#[test]
fn json_reports_parse() {
    let out = expect(&["--report", "json", "check", &machine("t0.sst")], 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["aperiodic"], false);
    assert_eq!(v["aperiodic_witness"]["word"], "a");
    assert_eq!(v["verdicts_agree"], true);
}

#[test]
fn graph_output() {
    let dot = expect(&["graph", &machine("fig3.sst"), "aaaaa", "--readout"], 0);
    assert!(dot.starts_with("digraph"));
    assert!(dot.ends_with("# readout: ceaeaaafbdcdcf\n"));
    let empty = expect(&["graph", &machine("t2.sst"), ""], 0);
    for n in ["X_in_0", "X_out_0", "Y_in_0", "Y_out_0", "Z_in_0", "Z_out_0"] {
        assert!(empty.contains(n));
    }
    let o = streamfo(&["graph", &machine("flow4.sst"), "aaaa"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not 1-bounded"));
    assert!(expect(&["graph", &machine("fig3.sst"), "aaaaa", "--show-useless"], 0).contains("dashed"));
}

#[test]
fn equiv_and_ktype() {
    assert!(expect(&["equiv", &machine("t0.sst"), &machine("t1.sst"), "--max-len", "6"], 0).starts_with("equal"));
    let c = expect(&["equiv", &machine("t1.sst"), &machine("t2.sst"), "--max-len", "2"], 1);
    assert!(c.contains("counterexample: a\n"), "{c}");
    assert_eq!(expect(&["ktype", "2", "aaaa", "aaaaa"], 0), "equivalent\n");
    assert_eq!(expect(&["ktype", "1", "a", "b"], 1), "inequivalent\n");
}

#[test]
fn heads_pathcheck_monoid() {
    let h = expect(&["heads", &machine("f1.fot"), "abaa", "3"], 0);
    assert!(h.contains("heads: 1^1 3^2") && h.contains("segment 3^2 .. 2^3: abab"), "{h}");
    assert!(expect(&["pathcheck", &machine("fig3.sst"), "aaaaa"], 0).starts_with("ok"));
    assert!(expect(&["monoid", &machine("t0.sst")], 0).starts_with("size: 2"));
}

#[test]
fn lookahead_elimination_writes_an_equivalent_machine() {
    let out = scratch("mirror.sst");
    let out = out.to_str().unwrap();
    expect(&["la-eliminate", &machine("mirror.sstla"), out], 0);
    expect(&["equiv", &machine("mirror.sstla"), out, "--max-len", "6"], 0);
    expect(&["la-eliminate", &machine("overlap.sstla"), out], 2);
}

#[test]
fn reports_are_reproducible() {
    let fig3 = machine("fig3.sst");
    let t1 = machine("t1.sst");
    for args in [vec!["check", fig3.as_str()], vec!["congruence", "--seed", "7"], vec!["monoid", t1.as_str()]] {
        let a = expect(&args, 0);
        let b = expect(&args, 0);
        assert_eq!(a, b);
    }
}
