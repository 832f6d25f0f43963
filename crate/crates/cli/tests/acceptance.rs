//! Acceptance suite. Prints one PASS/FAIL line per criterion, each under
//! its own time limit, and exits nonzero if any criterion fails.

use std::fs;
use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use gamma0_cli::document::SequenceDocument;
use gamma0_cli::{cmd_gamma0, cmd_verify, Algorithm};
use gamma0_core::arith::{ceil_sqrt, fibonacci, isqrt};
use gamma0_core::gamma0::{cusp_class_key, free_sides};
use gamma0_core::*;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn level(n: i64) -> Level {
    Level::new(n).unwrap()
}

fn farey(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_farey")).args(args).output().unwrap()
}

const GOLDEN_S1: &str = "{1,8,7,13,19,6,5,9,4,7,3,8,5,7,9,2,7,5,8,3,7,11,4,5,11,6,13,7,8,1}";
const GOLDEN_T: &str = "{1,8,7,13,32,19,6,5,9,4,7,3,8,5,7,16,9,2,7,5,8,3,7,11,4,5,16,11,6,13,7,8,1}";

fn golden_sequences() -> Outcome {
    let o = farey(&["gamma0", "-N", "64", "--algorithm", "dklt", "--format", "text"]);
    ensure!(o.status.success(), "exit status {:?}", o.status);
    let text = String::from_utf8(o.stdout).map_err(|e| e.to_string())?;
    ensure!(text == format!("{GOLDEN_T}\n"), "got {text}");
    let run = dklt::run_dklt(&level(64)).map_err(|e| e.to_string())?;
    ensure!(run.s1.sequence.brace_notation() == GOLDEN_S1, "S_1 is {}", run.s1.sequence.brace_notation());
    // the completion only adds 32, 16, 16 into (13,19), (7,9), (5,11)
    let s1 = run.s1.sequence.denominators();
    let t = run.sequence.denominators();
    let mut inserted = Vec::new();
    let mut k = 0;
    for (i, &d) in t.iter().enumerate() {
        if k < s1.len() && s1[k] == d {
            k += 1;
        } else {
            inserted.push((t[i - 1], d, t[i + 1]));
        }
    }
    ensure!(inserted == [(13, 32, 19), (7, 16, 9), (5, 16, 11)], "inserted {inserted:?}");
    ensure!(t.len() == 33, "{} members", t.len());
    Ok("33 members, byte-exact text output".into())
}

fn literal_sequences() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (n, dens) in [(8, vec![1, 4, 3, 2, 1]), (16, vec![1, 4, 3, 8, 5, 2, 3, 4, 1])] {
        let l = level(n);
        let seq = label_all_sides(&numerators_from_denominators(&dens).map_err(|e| e.to_string())?, &l);
        let path = dir.path().join(format!("literal_{n}.json"));
        fs::write(&path, SequenceDocument::labeled(&seq, &l, "literal").to_json()).map_err(|e| e.to_string())?;
        let o = farey(&["verify", path.to_str().unwrap()]);
        ensure!(o.status.code() == Some(0), "N = {n}: exit {:?}", o.status.code());
    }
    Ok("both verify with exit 0".into())
}

fn check_power_of_two(n: u32) -> Outcome {
    let l = level(1 << n);
    let run = dklt::run_dklt(&l).map_err(|e| e.to_string())?;
    let seq = &run.sequence;
    let half = 1i64 << (n - 1);
    ensure!(seq.max_denominator() == (half, 1), "2^{n}: max {:?}", seq.max_denominator());
    ensure!(seq.len() as i64 == 1 + half, "2^{n}: {} members", seq.len());
    ensure!(free_sides(seq, &l).is_empty(), "2^{n}: free sides remain");
    let report = verify_sequence(seq, &l);
    ensure!(
        report.passed(),
        "2^{n}: {:?}",
        report.failures().map(|c| &c.name).collect::<Vec<_>>()
    );
    Ok(format!("2^{n}: max {half} once, {} members", seq.len()))
}

fn powers_of_two() -> Outcome {
    for n in 2..=14 {
        check_power_of_two(n)?;
    }
    Ok("n = 2..14 optimal, complete, uniquely matched".into())
}

fn odd_prime_bound() -> Outcome {
    let mut notes = Vec::new();
    for (p, n) in [(3i64, 3u32), (3, 4), (5, 3), (7, 3)] {
        let l = level(p.pow(n));
        let run = dklt::run_dklt(&l).map_err(|e| e.to_string())?;
        let (max, _) = run.sequence.max_denominator();
        let rhs = fibonacci(p as u32 + 1) * p.pow(n - 1) + 2 * fibonacci(p as u32) * ceil_sqrt(p.pow(n));
        ensure!(2 * max <= rhs, "{p}^{n}: 2·{max} > {rhs}");
        let report = verify_sequence(&run.sequence, &l);
        ensure!(report.passed(), "{p}^{n}: {:?}", report.failures().collect::<Vec<_>>());
        let expected = 1 + index_gamma0(&l) as usize / 3;
        ensure!(run.sequence.len() == expected, "{p}^{n}: {} members", run.sequence.len());
        ensure!(run.rounds.len() as i64 <= p - 1, "{p}^{n}: {} rounds", run.rounds.len());
        notes.push(format!("{p}^{n} max {max} <= {}", rhs / 2));
    }
    Ok(notes.join(", "))
}

fn generator_bound() -> Outcome {
    for n in 2..=14u32 {
        let l = level(1 << n);
        let seq = dklt::run_dklt(&l).map_err(|e| e.to_string())?.sequence;
        let gens = generator_set(&seq, &l).map_err(|e| e.to_string())?;
        ensure!(gens.len() == seq.side_count() / 2, "2^{n}: {} generators", gens.len());
        for g in gens {
            let m = g.matrix;
            let c = m.lower_left();
            ensure!(m.determinant() == 1, "2^{n}: determinant");
            ensure!(c % (1i128 << n) == 0, "2^{n}: lower-left {c}");
            ensure!(c.abs() <= 1i128 << (2 * n - 1), "2^{n}: |{c}| > 2^{}", 2 * n - 1);
            let (sl, sr) = seq.side(g.side);
            let (tl, tr) = seq.side(g.partner.ok_or("elliptic generator at 2^n")?);
            let pair = |f: FareyFraction| (f.num() as i128, f.den() as i128);
            ensure!(m.apply(sl) == pair(tr) && m.apply(sr) == pair(tl), "2^{n}: endpoints");
            let back = m.inverse();
            ensure!(back.apply(tr) == pair(sl) && back.apply(tl) == pair(sr), "2^{n}: round trip");
        }
    }
    Ok("n = 2..14, all generators within 2^(2n-1)".into())
}

fn width_equivalence() -> Outcome {
    let mut count = 0;
    let levels = (1..=12).map(|e| 1i64 << e).chain((1..=6).map(|e| 3i64.pow(e)));
    for n in levels {
        let l = level(n);
        for &x in farey_order_sequence(isqrt(n)).map_err(|e| e.to_string())?.entries() {
            let (closed, oracle) = (cusp_width(x, &l), width_oracle(x, &l));
            ensure!(closed == oracle, "N = {n}, {x}: {closed} vs {oracle}");
            count += 1;
        }
    }
    Ok(format!("{count} vertices agree"))
}

fn cusp_accounting() -> Outcome {
    let levels = (2..=14)
        .map(|e| 1i64 << e)
        .chain([27, 81, 243, 125, 625, 343, 2401]);
    let mut at_64 = 0;
    for n in levels {
        let l = level(n);
        let seq = dklt::run_dklt(&l).map_err(|e| e.to_string())?.sequence;
        let classes: std::collections::HashSet<_> = seq
            .entries()
            .iter()
            .copied()
            .chain([FareyFraction::INFINITY])
            .map(|x| cusp_class_key(x, &l))
            .collect();
        ensure!(classes.len() as i64 == cusp_count(&l), "N = {n}: {} classes", classes.len());
        if n == 64 {
            at_64 = classes.len();
        }
    }
    ensure!(at_64 == 12, "N = 64: {at_64} classes");
    Ok("all classes represented, 12 at N = 64".into())
}

fn appendix() -> Outcome {
    for n in [8, 27, 64, 125] {
        let report = verify_appendix(&level(n));
        ensure!(
            report.passed(),
            "N = {n}: {:?}",
            report.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>()
        );
    }
    Ok("orbit counts, gap bounds and shrinkage hold at 8, 27, 64, 125".into())
}

fn mutation_sensitivity() -> Outcome {
    let golden = cmd_gamma0(64, Algorithm::Dklt, Seed::Unit).map_err(|e| e.to_string())?;
    ensure!(cmd_verify(&golden).map_err(|e| e.to_string())?.passed(), "golden document fails");
    let rejected = |doc: &SequenceDocument| cmd_verify(doc).map_or(true, |r| !r.passed());
    let mut mutants = 0;
    for i in 0..golden.entries.len() {
        let mut doc = golden.clone();
        doc.entries.remove(i);
        ensure!(rejected(&doc), "deleting entry {i} goes unnoticed");
        mutants += 1;
    }
    for i in 0..golden.sides.len() {
        let Some(j) = golden.sides[i].partner_index else { continue };
        for k in (0..golden.sides.len()).filter(|&k| k != j) {
            let mut doc = golden.clone();
            doc.sides[i].partner_index = Some(k);
            ensure!(rejected(&doc), "re-targeting side {i} to {k} goes unnoticed");
            mutants += 1;
        }
    }
    // and through the binary, for exit codes
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut doc = golden.clone();
    doc.entries.remove(5);
    let path = dir.path().join("mutant.json");
    fs::write(&path, doc.to_json()).map_err(|e| e.to_string())?;
    let code = farey(&["verify", path.to_str().unwrap()]).status.code();
    ensure!(code == Some(1), "binary exit {code:?}");
    Ok(format!("{mutants} mutants rejected"))
}

fn scale_smoke() -> Outcome {
    check_power_of_two(20)
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "golden sequence at N = 64", limit: Duration::from_secs(1), run: golden_sequences },
        Criterion { id: 2, name: "literal sequences verify", limit: Duration::from_secs(1), run: literal_sequences },
        Criterion { id: 3, name: "optimal bound for 2^n, n = 2..14", limit: Duration::from_secs(30), run: powers_of_two },
        Criterion { id: 4, name: "odd-prime Fibonacci bound", limit: Duration::from_secs(10), run: odd_prime_bound },
        Criterion { id: 5, name: "generator bound for 2^n", limit: Duration::from_secs(30), run: generator_bound },
        Criterion { id: 6, name: "width oracle equivalence", limit: Duration::from_secs(60), run: width_equivalence },
        Criterion { id: 7, name: "cusp accounting", limit: Duration::from_secs(10), run: cusp_accounting },
        Criterion { id: 8, name: "appendix enumeration", limit: Duration::from_secs(60), run: appendix },
        Criterion { id: 9, name: "mutation sensitivity", limit: Duration::from_secs(10), run: mutation_sensitivity },
        Criterion { id: 10, name: "scale smoke test at 2^20", limit: Duration::from_secs(60), run: scale_smoke },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(c.run).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{:>2}] {} ({:.2}s, limit {}s): {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
