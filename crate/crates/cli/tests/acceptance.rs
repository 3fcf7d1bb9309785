//! Acceptance checks. Runs without the libtest harness so that each
//! criterion prints exactly one PASS or FAIL line.

use std::collections::BTreeSet;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use inquiry_core::calculus::{
    check_chain_lower, check_chain_upper, check_derivation_identities, check_derivation_steps, check_product_questions,
    check_product_rule, check_product_statements, check_sum_rule, probability_bivaluation, random_covaluation,
    relevance_bivaluation, BiValuation, Combine, LatticeKind, ViolationReport, RANDOM_MAX_WEIGHT,
};
use inquiry_core::{
    boolean_lattice, enumerate_questions, question_lattice, FiniteLattice, HypothesisSpace, ProbabilityMeasure,
    Question, Rational,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Real questions over four atoms, from the brute-force oracle below.
const REAL_QUESTIONS_N4: usize = 114;
const TRIALS: usize = 100;
const SEED: u64 = 2024;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn space(n: usize) -> HypothesisSpace {
    let names: Vec<String> = "abcd".chars().take(n).map(String::from).collect();
    HypothesisSpace::new(&names).unwrap()
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

fn inquiry(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inquiry")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn clean(report: &ViolationReport, what: &str) -> Result<(), String> {
    ensure(report.is_clean(), || {
        let first = report.violations.first().map(|v| format!("{} at {}", v.rule, v.witness)).unwrap_or_default();
        format!("{what}: {} violations, first {first}", report.total)
    })
}

fn criterion_1() -> Outcome {
    let expected = ["ABC", "AB v AC v BC", "AB v AC", "AB v BC", "AC v BC", "AB v C", "AC v B", "BC v A", "A v B v C"];
    let start = Instant::now();
    let listed: Vec<String> =
        enumerate_questions(&space(3), true, false).map_err(|e| e.to_string())?.iter().map(|q| q.to_string()).collect();
    let elapsed = start.elapsed();
    ensure(listed == expected, || format!("library listed {listed:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;

    let out = inquiry(&["enumerate", "--atoms", "a,b,c", "--real"]);
    let text = stdout(&out);
    let mut lines: Vec<&str> = text.lines().collect();
    ensure(lines.pop() == Some("count: 9"), || format!("cli output {text:?}"))?;
    ensure(lines == expected, || format!("cli listed {lines:?}"))?;
    Ok(format!("9 questions in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let sp = space(3);
    let q = |text: &str| Question::parse(&sp, text).map_err(|e| e.to_string());
    let answers =
        |text: &str| -> Result<Vec<String>, String> { Ok(q(text)?.answers().iter().map(|s| s.to_string()).collect()) };
    ensure(answers("AB v C")? == ["A", "B", "C", "AB"], || "answers of AB v C".into())?;
    ensure(answers("AB v AC v BC")? == ["A", "B", "C", "AB", "AC", "BC"], || "answers of AB v AC v BC".into())?;
    ensure(answers("A v BC")? == ["A", "B", "C", "BC"], || "answers of A v BC".into())?;
    // Both inclusions: into A v BC and into AB v C.
    for upper in ["A v BC", "AB v C"] {
        ensure(q("A v B v C")?.answers_question(q(upper)?) == Ok(true), || format!("A v B v C <= {upper}"))?;
        ensure(q(upper)?.answers_question(q("A v B v C")?) == Ok(false), || format!("{upper} <= A v B v C"))?;
    }
    ensure(q("AB v C")?.meet(q("A v BC")?).map(|r| r.to_string()) == Ok("A v B v C".into()), || "meet".into())?;
    ensure(q("AB v C")?.join(q("A v BC")?).map(|r| r.to_string()) == Ok("AB v BC".into()), || "join".into())?;

    for (op, a, b, want) in [
        ("meet", "AB v C", "A v BC", "A v B v C"),
        ("join", "AB v C", "A v BC", "AB v BC"),
        ("leq", "A v B v C", "A v BC", "true"),
        ("leq", "A v B v C", "AB v C", "true"),
    ] {
        let out = inquiry(&["query", "--atoms", "a,b,c", op, a, b]);
        ensure(out.status.code() == Some(0) && stdout(&out).trim() == want, || format!("cli {op} {a} {b}"))?;
    }
    Ok("answer sets, both inclusions, meet and join".into())
}

fn statement_rules(w: &BiValuation<Rational>, l: &FiniteLattice) -> Result<(), String> {
    clean(&check_sum_rule(w, l, zero()), "sum_rule")?;
    clean(&check_chain_upper(w, l, zero()), "chain_upper")?;
    clean(&check_product_statements(w, l, zero()), "product_statements")?;
    clean(&check_derivation_steps(w, l, LatticeKind::Statements, zero()), "derivation_statements")
}

fn question_rules(d: &BiValuation<Rational>, l: &FiniteLattice) -> Result<(), String> {
    clean(&check_sum_rule(d, l, zero()), "sum_rule")?;
    clean(&check_chain_lower(d, l, zero()), "chain_lower")?;
    clean(&check_product_questions(d, l, zero()), "product_questions")?;
    clean(&check_derivation_steps(d, l, LatticeKind::Questions, zero()), "derivation_questions")
}

fn criterion_3() -> Outcome {
    let mut n4 = Duration::ZERO;
    for n in 1..=4 {
        let sl = boolean_lattice(&space(n));
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + n as u64);
        let start = Instant::now();
        for trial in 0..TRIALS {
            let m = ProbabilityMeasure::random(sl.space(), &mut rng, RANDOM_MAX_WEIGHT);
            let w = probability_bivaluation(&m, &sl);
            statement_rules(&w, sl.lattice()).map_err(|e| format!("n={n} trial {trial}: {e}"))?;
        }
        if n == 4 {
            n4 = start.elapsed();
        }
    }
    ensure(n4 < Duration::from_secs(60), || format!("n=4 took {n4:?}"))?;
    Ok(format!("n=1..4, {TRIALS} measures each, n=4 in {n4:.2?}"))
}

/// Down-sets of the non-absurd statements containing every atom, by trying
/// all subsets.
fn brute_force_real_questions(n: usize) -> usize {
    let statements: Vec<u32> = (1..(1u32 << n)).collect();
    (1u32..(1 << statements.len()))
        .filter(|pick| {
            let member = |s: u32| pick >> (s - 1) & 1 == 1;
            let closed = statements.iter().filter(|&&s| member(s)).all(|&s| (1..s).filter(|t| t & s == *t).all(member));
            closed && (0..n).all(|i| member(1 << i))
        })
        .count()
}

fn criterion_4() -> Outcome {
    let oracle = brute_force_real_questions(4);
    ensure(oracle == REAL_QUESTIONS_N4, || format!("oracle found {oracle}"))?;
    let mut n4 = Duration::ZERO;
    for n in 1..=4 {
        let ql = question_lattice(&space(n), true).map_err(|e| e.to_string())?;
        if n == 4 {
            ensure(ql.questions().len() == REAL_QUESTIONS_N4, || format!("enumerated {}", ql.questions().len()))?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + n as u64);
        let start = Instant::now();
        for trial in 0..TRIALS {
            let u = random_covaluation(&ql, &mut rng, RANDOM_MAX_WEIGHT);
            let d = relevance_bivaluation(&u, ql.lattice());
            question_rules(&d, ql.lattice()).map_err(|e| format!("n={n} trial {trial}: {e}"))?;
        }
        if n == 4 {
            n4 = start.elapsed();
        }
    }
    ensure(n4 < Duration::from_secs(300), || format!("n=4 took {n4:?}"))?;
    Ok(format!("{REAL_QUESTIONS_N4} real questions at n=4, {TRIALS} co-valuations each, n=4 in {n4:.2?}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 1..=4 {
        let sl = boolean_lattice(&space(n));
        let ql = question_lattice(&space(n), true).map_err(|e| e.to_string())?;
        let w = probability_bivaluation(&ProbabilityMeasure::random(sl.space(), &mut rng, RANDOM_MAX_WEIGHT), &sl);
        let d = relevance_bivaluation(&random_covaluation(&ql, &mut rng, RANDOM_MAX_WEIGHT), ql.lattice());
        let op = Combine::Meet;
        let (sl, ql) = (sl.lattice(), ql.lattice());
        clean(&check_derivation_identities(&w, sl, op, zero()), "statement steps")?;
        clean(&check_derivation_identities(&d, ql, op.dual(), zero()), "question steps")?;
        clean(&check_product_rule(&w, sl, op, zero()), "statement product")?;
        clean(&check_product_rule(&d, ql, op.dual(), zero()), "question product")?;
        if n >= 2 {
            ensure(!check_derivation_identities(&w, sl, op.dual(), zero()).is_clean(), || "join on statements".into())?;
            ensure(!check_derivation_identities(&d, ql, op, zero()).is_clean(), || "meet on questions".into())?;
        }
    }
    Ok("one checker, meet for statements and join for questions".into())
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases = [
        ("statements", "sum_rule", "A", "ABC"),
        ("statements", "chain_upper", "A", "AB"),
        ("statements", "product_statements", "B", "ABC"),
        ("statements", "derivation_statements", "BC", "AB"),
        ("questions", "sum_rule", "AB v C", "A v B v C"),
        ("questions", "chain_lower", "AB v C", "A v B v C"),
        ("questions", "product_questions", "AB v BC", "A v B v C"),
        ("questions", "derivation_questions", "AB v BC", "AB v C"),
    ];
    for (i, (lattice, suite, x, t)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("perturbed{i}.json"));
        let path = path.to_str().unwrap();
        let made = inquiry(&[
            "bivaluation",
            "--atoms",
            "a,b,c",
            "--lattice",
            lattice,
            "--perturb",
            x,
            t,
            "--delta",
            "1/100",
            "--output",
            path,
        ]);
        ensure(made.status.success(), || format!("bivaluation {lattice} {x} | {t} failed"))?;
        let out = inquiry(&["check", "--bivaluation", path, "--format", "json"]);
        ensure(out.status.code() == Some(1), || format!("{suite}: exit {:?}", out.status.code()))?;
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let found = report["suites"]
            .as_array()
            .and_then(|s| s.iter().find(|s| s["name"] == *suite))
            .and_then(|s| s["violations"].as_u64())
            .unwrap_or(0);
        ensure(found >= 1, || format!("{suite} ({lattice}) missed the entry ({x} | {t})"))?;
    }
    Ok(format!("{} perturbations each flagged by their checker with exit 1", cases.len()))
}

fn criterion_7() -> Outcome {
    let mut triples = 0u64;
    for n in 1..=4 {
        let sp = space(n);
        let all = enumerate_questions(&sp, false, false).map_err(|e| e.to_string())?;
        // The vacuous meet acts as a formal bottom.
        let meet = |a: Option<Question>, b: Option<Question>| a.zip(b).and_then(|(a, b)| a.meet(b).ok());
        let join = |a: Option<Question>, b: Option<Question>| match (a, b) {
            (Some(a), Some(b)) => Some(a.join(b).unwrap()),
            (a, None) => a,
            (None, b) => b,
        };
        for &q in &all {
            let back = Question::parse(&sp, &q.canonical_form()).map_err(|e| e.to_string())?;
            ensure(back == q, || format!("round trip of {q}"))?;
        }
        for &a in &all {
            for &b in &all {
                for c in [meet(Some(a), Some(b)), join(Some(a), Some(b))].into_iter().flatten() {
                    ensure(Question::from_answers(&sp, c.answer_bits()).is_ok(), || format!("{a} and {b} not closed"))?;
                }
                let (a, b) = (Some(a), Some(b));
                ensure(meet(a, join(a, b)) == a && join(a, meet(a, b)) == a, || "absorption".into())?;
                for &c in &all {
                    let c = Some(c);
                    triples += 1;
                    ensure(meet(a, join(b, c)) == join(meet(a, b), meet(a, c)), || "meet distributes".into())?;
                    ensure(join(a, meet(b, c)) == meet(join(a, b), join(a, c)), || "join distributes".into())?;
                }
            }
        }
    }
    let covers = boolean_lattice(&space(3)).lattice().covers().len();
    ensure(covers == 12, || format!("{covers} covers"))?;
    let real: BTreeSet<String> =
        enumerate_questions(&space(3), true, false).unwrap().iter().map(|q| q.to_string()).collect();
    ensure(real.len() == 9, || "distinct canonical forms".into())?;
    Ok(format!("{triples} triples over all questions n<=4, 12 covers at n=3"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("real questions over three atoms", criterion_1),
        ("worked question examples", criterion_2),
        ("probability rules, exact", criterion_3),
        ("relevance rules, exact", criterion_4),
        ("meet/join duality", criterion_5),
        ("negative controls", criterion_6),
        ("lattice structure", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
