use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use streamfo::alphabet::render_tokens;
use streamfo::graph::{build_graph, path_characterization_check};
use streamfo::lookahead::{la_monoid_verdicts, SstLa};
use streamfo::monoid::{aperiodic_of, enumerate_monoid, nontrivial_cycle_of, one_bounded_of, DEFAULT_CAP};
use streamfo::{equiv_bounded, Alphabet, EquivVerdict, Error, Sst, Transducer, Word};

#[derive(Parser)]
#[command(name = "streamfo", version, about = "Streaming string transducers and first-order transductions")]
struct Cli {
    /// Report format for verdict-style commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Transform one input word (.sst, .sstla or .fot).
    Run { file: PathBuf, input: String },
    /// 1-boundedness, aperiodicity and cycle verdicts of a machine.
    Check {
        file: PathBuf,
        /// Exit with 1 unless the machine is 1-bounded and aperiodic.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// DOT rendering of the output graph of an SST on a word.
    Graph {
        file: PathBuf,
        input: String,
        /// Append the label readout as a comment line.
        #[arg(long)]
        readout: bool,
        /// Draw updates of useless variables as dashed edges.
        #[arg(long)]
        show_useless: bool,
    },
    /// Compare two transducers on all words up to a length.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Decide whether two words have the same k-type.
    Ktype { k: usize, left: String, right: String },
    /// i-heads, i-tails and segments of an FO transducer's output.
    Heads { file: PathBuf, input: String, i: usize },
    /// Remove the lookahead of an .sstla machine and write an .sst file.
    LaEliminate { input: PathBuf, output: PathBuf },
    /// Elements of the transition monoid with their representatives.
    Monoid {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Check the path characterisation of the output graph.
    Pathcheck { file: PathBuf, input: String },
    /// Sample the concatenation property of k-types.
    Congruence {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value = "a b")]
        letters: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Command failure: `Negative` exits with 1, everything else with 2.
enum Failure {
    Negative,
    Error(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let json = cli.report == Format::Json;
    match &cli.cmd {
        Cmd::Run { file, input } => cmd_run(file, input),
        Cmd::Check { file, strict, cap } => cmd_check(file, *strict, *cap, json),
        Cmd::Graph {
            file,
            input,
            readout,
            show_useless,
        } => cmd_graph(file, input, *readout, *show_useless),
        Cmd::Equiv { left, right, max_len } => cmd_equiv(left, right, *max_len, json),
        Cmd::Ktype { k, left, right } => cmd_ktype(*k, left, right, json),
        Cmd::Heads { file, input, i } => cmd_heads(file, input, *i, json),
        Cmd::LaEliminate { input, output } => cmd_eliminate(input, output),
        Cmd::Monoid { file, cap } => cmd_monoid(file, *cap, json),
        Cmd::Pathcheck { file, input } => cmd_pathcheck(file, input, json),
        Cmd::Congruence {
            k,
            samples,
            max_len,
            letters,
            seed,
        } => cmd_congruence(*k, *samples, *max_len, letters, *seed, json),
    }
}

fn load(path: &Path) -> Result<Transducer, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    Transducer::parse(&text).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn load_sst(path: &Path) -> Result<Sst, Failure> {
    match load(path)? {
        Transducer::Sst(t) => Ok(t),
        other => Err(Failure::Error(format!(
            "{}: expected an .sst machine, found {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn show(alphabet: &Alphabet, w: &[usize]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        alphabet.render(w)
    }
}

fn print_json(v: Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
}

fn cmd_run(file: &Path, input: &str) -> Outcome {
    let t = load(file)?;
    match t.transform(input)? {
        Some(out) => {
            println!("{out}");
            Ok(())
        }
        None => {
            println!("DOMAIN-MISS");
            Err(Failure::Negative)
        }
    }
}

fn cmd_check(file: &Path, strict: bool, cap: usize, json: bool) -> Outcome {
    match load(file)? {
        Transducer::Sst(t) => check_sst(&t, strict, cap, json),
        Transducer::SstLa(t) => check_sstla(&t, strict, json),
        Transducer::Fot(_) => Err(Failure::Error("check expects an .sst or .sstla machine".into())),
    }
}

fn check_sst(t: &Sst, strict: bool, cap: usize, json: bool) -> Outcome {
    let m = enumerate_monoid(t, cap);
    let bounded = one_bounded_of(&m, t.initial());
    let aperiodic = aperiodic_of(&m, t.initial());
    let cycle = if bounded.one_bounded {
        Some(nontrivial_cycle_of(&m)?)
    } else {
        None
    };
    let agree = cycle.as_ref().map(|c| c.aperiodic() == aperiodic.aperiodic);
    let input = t.input();
    if json {
        print_json(json!({
            "one_bounded": bounded.one_bounded,
            "one_bounded_witness": bounded.witness.as_ref().map(|w| show(input, w)),
            "aperiodic": aperiodic.aperiodic,
            "aperiodic_witness": aperiodic.witness.as_ref().map(|w| json!({
                "word": show(input, &w.word), "index": w.index, "period": w.period,
            })),
            "idempotent_bound": aperiodic.idempotent_bound,
            "saturated": aperiodic.saturated,
            "monoid_size": m.len(),
            "truncated": m.truncated(),
            "cycle": cycle.as_ref().map(|c| c.cycle.as_ref().map(|w| json!({
                "word": show(input, &w.word),
                "node": node_name(t, w.node),
                "r": w.r,
            }))),
            "verdicts_agree": agree,
            "lint": t.lint(),
        }));
    } else {
        match &bounded.witness {
            None => println!("1-bounded: yes"),
            Some(w) => println!("1-bounded: NO (witness {})", show(input, w)),
        }
        match &aperiodic.witness {
            None => println!("aperiodic: yes (idempotent bound {})", aperiodic.idempotent_bound),
            Some(w) => println!(
                "aperiodic: NO (witness {}, index {}, period {})",
                show(input, &w.word),
                w.index,
                w.period
            ),
        }
        if aperiodic.saturated {
            println!("note: aperiodicity computed on the saturated quotient");
        }
        println!("monoid size: {}{}", m.len(), if m.truncated() { " (truncated)" } else { "" });
        match &cycle {
            None => println!("non-trivial cycle: skipped (not 1-bounded)"),
            Some(c) => match &c.cycle {
                None => println!("non-trivial cycle: none"),
                Some(w) => println!(
                    "non-trivial cycle: {} at {} with r = {}",
                    show(input, &w.word),
                    node_name(t, w.node),
                    w.r
                ),
            },
        }
        if let Some(a) = agree {
            println!("verdicts agree: {}", if a { "yes" } else { "NO" });
        }
        for w in t.lint() {
            println!("warning: {w}");
        }
    }
    if agree == Some(false) {
        return Err(Failure::Error("aperiodicity and cycle verdicts disagree".into()));
    }
    if strict && !(bounded.one_bounded && aperiodic.aperiodic) {
        return Err(Failure::Negative);
    }
    Ok(())
}

fn node_name(t: &Sst, n: streamfo::monoid::FlowNode) -> String {
    match n.var {
        Some(x) => format!("({},{})", t.states()[n.state], t.vars()[x]),
        None => format!("({})", t.states()[n.state]),
    }
}

fn check_sstla(t: &SstLa, strict: bool, json: bool) -> Outcome {
    let mutex = t.mutual_exclusive_check();
    let useful = t.useful_configs();
    let (bounded, aperiodic) = la_monoid_verdicts(t);
    let input = t.input();
    let overlap = mutex.as_ref().map(|v| {
        (
            t.states()[v.state].clone(),
            input.letter(v.letter).to_string(),
            t.la().states()[v.guards.0].clone(),
            t.la().states()[v.guards.1].clone(),
            show(input, &v.witness),
        )
    });
    if json {
        print_json(json!({
            "mutually_exclusive": overlap.is_none(),
            "overlap": overlap.as_ref().map(|(q, a, p1, p2, w)| json!({
                "state": q, "letter": a, "guards": [p1, p2], "witness": w,
            })),
            "star": t.satisfies_star(),
            "useful_configs": useful.iter().map(|c| t.config_name(c)).collect::<Vec<_>>(),
            "one_bounded": bounded.one_bounded,
            "aperiodic": aperiodic.aperiodic,
        }));
    } else {
        match &overlap {
            None => println!("mutually exclusive: yes"),
            Some((q, a, p1, p2, w)) => {
                println!("mutually exclusive: NO (state {q}, letter {a}, guards {p1} and {p2}, witness {w})")
            }
        }
        println!("distinct targets per guard: {}", if t.satisfies_star() { "yes" } else { "no" });
        println!("useful configurations: {}", useful.len());
        println!("1-bounded: {}", if bounded.one_bounded { "yes" } else { "NO" });
        println!("aperiodic: {}", if aperiodic.aperiodic { "yes" } else { "NO" });
    }
    if strict && !(overlap.is_none() && bounded.one_bounded && aperiodic.aperiodic) {
        return Err(Failure::Negative);
    }
    Ok(())
}

fn cmd_graph(file: &Path, input: &str, readout: bool, show_useless: bool) -> Outcome {
    let t = load_sst(file)?;
    let w = t.input().parse_word(input)?;
    let g = build_graph(&t, &w)?;
    print!("{}", g.to_dot(t.output_alphabet(), show_useless));
    if readout {
        println!("# readout: {}", t.output_alphabet().render(&g.readout()?));
    }
    Ok(())
}

fn cmd_equiv(left: &Path, right: &Path, max_len: usize, json: bool) -> Outcome {
    let (l, r) = (load(left)?, load(right)?);
    let v = equiv_bounded(&l, &r, max_len)?;
    let tokens = |t: &Option<Vec<String>>| t.as_ref().map(|w| render_tokens(w));
    match &v {
        EquivVerdict::Equal if json => print_json(json!({ "equal": true, "max_len": max_len })),
        EquivVerdict::Equal => println!("equal (all words up to length {max_len})"),
        EquivVerdict::Counterexample { input, left, right } if json => print_json(json!({
            "equal": false,
            "input": render_tokens(input),
            "left": tokens(left),
            "right": tokens(right),
        })),
        EquivVerdict::Counterexample { input, left, right } => {
            let show = |o: &Option<Vec<String>>| match o {
                None => "undefined".to_string(),
                Some(w) if w.is_empty() => "ε".to_string(),
                Some(w) => render_tokens(w),
            };
            let input = if input.is_empty() { "ε".to_string() } else { render_tokens(input) };
            println!("counterexample: {input}");
            println!("  left:  {}", show(left));
            println!("  right: {}", show(right));
        }
    }
    match v {
        EquivVerdict::Equal => Ok(()),
        EquivVerdict::Counterexample { .. } => Err(Failure::Negative),
    }
}

fn cmd_ktype(k: usize, left: &str, right: &str, json: bool) -> Outcome {
    let eq = streamfo::logic::equiv_k_str(left, right, k)?;
    if json {
        print_json(json!({ "k": k, "equivalent": eq }));
    } else {
        println!("{}", if eq { "equivalent" } else { "inequivalent" });
    }
    if eq {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn cmd_heads(file: &Path, input: &str, i: usize, json: bool) -> Outcome {
    let Transducer::Fot(t) = load(file)? else {
        return Err(Failure::Error("heads expects an .fot transducer".into()));
    };
    let w = t.input().parse_word(input)?;
    let r = t.heads_tails(&w, i)?;
    let (inp, out) = (t.input(), t.output_alphabet());
    let nodes = |v: &[streamfo::Node]| v.iter().map(|n| n.to_string()).collect::<Vec<_>>();
    let address = |a: &streamfo::fot::Address| {
        format!(
            "prefix {} infix {} letter {} copy {}",
            show(inp, &a.prefix),
            show(inp, &a.infix),
            inp.letter(a.letter),
            a.copy
        )
    };
    if json {
        print_json(json!({
            "i": r.i,
            "heads": nodes(&r.heads),
            "tails": nodes(&r.tails),
            "segments": r.segments.iter().map(|s| json!({
                "head": s.head.to_string(),
                "tail": s.tail.to_string(),
                "word": out.render(&s.word),
            })).collect::<Vec<_>>(),
            "head_addresses": r.head_addresses.iter().map(address).collect::<Vec<_>>(),
            "tail_addresses": r.tail_addresses.iter().map(address).collect::<Vec<_>>(),
        }));
    } else {
        println!("i = {}", r.i);
        println!("heads: {}", nodes(&r.heads).join(" "));
        println!("tails: {}", nodes(&r.tails).join(" "));
        for s in &r.segments {
            println!("segment {} .. {}: {}", s.head, s.tail, show(out, &s.word));
        }
        for (n, a) in r.heads.iter().zip(&r.head_addresses) {
            println!("head {n}: {}", address(a));
        }
        for (n, a) in r.tails.iter().zip(&r.tail_addresses) {
            println!("tail {n}: {}", address(a));
        }
    }
    Ok(())
}

fn cmd_eliminate(input: &Path, output: &Path) -> Outcome {
    let Transducer::SstLa(t) = load(input)? else {
        return Err(Failure::Error("la-eliminate expects an .sstla machine".into()));
    };
    let n = t.normalize_star();
    let e = n.eliminate_lookahead()?;
    fs::write(output, e.to_text())?;
    println!(
        "wrote {}: {} states, {} variables ({} useful configurations)",
        output.display(),
        e.num_states(),
        e.num_vars(),
        n.useful_configs().len()
    );
    Ok(())
}

fn cmd_monoid(file: &Path, cap: usize, json: bool) -> Outcome {
    let (m, input) = match load(file)? {
        Transducer::Sst(t) => (enumerate_monoid(&t, cap), t.input().clone()),
        Transducer::SstLa(t) => (t.enumerate_monoid(cap), t.input().clone()),
        Transducer::Fot(_) => return Err(Failure::Error("monoid expects an .sst or .sstla machine".into())),
    };
    if json {
        print_json(json!({
            "size": m.len(),
            "truncated": m.truncated(),
            "elements": (0..m.len()).map(|i| json!({
                "word": show(&input, m.representative(i)),
                "rows": m.element(i).rows(),
            })).collect::<Vec<_>>(),
        }));
    } else {
        println!("size: {}{}", m.len(), if m.truncated() { " (truncated)" } else { "" });
        for i in 0..m.len() {
            println!();
            println!("M[{}]", show(&input, m.representative(i)));
            print!("{}", m.element(i).render());
        }
    }
    Ok(())
}

fn cmd_pathcheck(file: &Path, input: &str, json: bool) -> Outcome {
    let t = load_sst(file)?;
    let w = t.input().parse_word(input)?;
    let r = path_characterization_check(&t, &w)?;
    if json {
        print_json(json!({
            "ok": r.ok(),
            "pairs": r.pairs,
            "mismatches": r.mismatches.iter().map(|m| json!({
                "from": m.from, "to": m.to, "reachable": m.reachable, "conditions": m.conditions,
            })).collect::<Vec<_>>(),
        }));
    } else if r.ok() {
        println!("ok ({} node pairs)", r.pairs);
    } else {
        for m in &r.mismatches {
            println!(
                "counterexample: {} -> {} reachable={} conditions={:?}",
                m.from, m.to, m.reachable, m.conditions
            );
        }
    }
    if r.ok() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn cmd_congruence(k: usize, samples: usize, max_len: usize, letters: &str, seed: u64, json: bool) -> Outcome {
    let alphabet = Alphabet::new(letters.split_whitespace())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = |rng: &mut ChaCha8Rng| -> Word {
        let n = rng.gen_range(0..=max_len);
        (0..n).map(|_| rng.gen_range(0..alphabet.len())).collect()
    };
    for n in 0..samples {
        let s1 = word(&mut rng);
        let s2 = word(&mut rng);
        let partner = |s: &Word, rng: &mut ChaCha8Rng| -> Result<Word, Failure> {
            for _ in 0..50 {
                let t = word(rng);
                if streamfo::equiv_k(s, &t, k)? {
                    return Ok(t);
                }
            }
            Ok(s.clone())
        };
        let t1 = partner(&s1, &mut rng)?;
        let t2 = partner(&s2, &mut rng)?;
        let l: Word = s1.iter().chain(&s2).copied().collect();
        let r: Word = t1.iter().chain(&t2).copied().collect();
        if !streamfo::equiv_k(&l, &r, k)? {
            let pair = |a: &Word, b: &Word| format!("{} · {}", show(&alphabet, a), show(&alphabet, b));
            if json {
                print_json(json!({ "ok": false, "sample": n, "left": pair(&s1, &s2), "right": pair(&t1, &t2) }));
            } else {
                println!("counterexample at sample {n}: {} vs {}", pair(&s1, &s2), pair(&t1, &t2));
            }
            return Err(Failure::Negative);
        }
    }
    if json {
        print_json(json!({ "ok": true, "samples": samples, "k": k, "seed": seed }));
    } else {
        println!("ok ({samples} samples, k = {k}, seed {seed})");
    }
    Ok(())
}
