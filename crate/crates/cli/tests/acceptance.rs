//! Acceptance criteria 1-10, each driven through the `padic-hl` binary.
//! Prints one PASS/FAIL line per criterion.

use padic_hl::exactnum::{IntPoly, RationalFunction};
use serde_json::Value;
use std::process::Command;
use std::time::{Duration, Instant};

/// Criteria whose literal statement cannot hold; they print FAIL with the
/// reason and do not fail the test. See the README.
const UNATTAINABLE: &[u32] = &[2];

struct Run {
    code: i32,
    json: Value,
}

fn cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_padic-hl")).args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap_or(-1), json }
}

fn s(v: &Value) -> &str {
    v.as_str().unwrap_or("")
}

fn poly(c: &[i64]) -> RationalFunction {
    RationalFunction::from_poly(IntPoly::from_i64s(c))
}

fn tp(e: i64) -> RationalFunction {
    RationalFunction::t_pow(e)
}

fn div(a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    a.div(b).unwrap()
}

fn csv(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

struct Outcome {
    pass: bool,
    note: String,
}

impl Outcome {
    fn from_failures(failures: Vec<String>) -> Self {
        Outcome { pass: failures.is_empty(), note: failures.join("; ") }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(l) = limit {
        if took > l {
            o.pass = false;
            o.note = format!("{} runtime {took:.1?} over {l:?}", o.note).trim().to_string();
        }
    }
    (o, took)
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    let cases: [(&str, &str, &str, &str, &str); 6] = [
        ("alt", "1,0,0,0", "1,0", "2,0", "1+t"),
        ("alt", "1,0,0,0", "2,1", "3,1", "1+t"),
        ("alt", "1,0,0,0", "3,1", "4,1", "1+t"),
        ("her", "1,0", "1,0", "3,0", "1"),
        ("her", "1,0", "2,1", "4,1", "1"),
        ("her", "1,0,0", "2,1,0", "4,1,0", "1"),
    ];
    for (case, mu, nu, lam, want) in cases {
        let start = Instant::now();
        let r = cli(&["coeff", "--case", case, "--mu", mu, "--nu", nu, "--lambda", lam, "--symbolic"]);
        let got = s(&r.json["entries"][0]["c"]);
        if r.code != 0 || got != want {
            failures.push(format!("{case} mu={mu} nu={nu} lambda={lam}: got {got:?}, want {want:?}"));
        }
        if start.elapsed() > Duration::from_secs(1) {
            failures.push(format!("{case} mu={mu} nu={nu}: over 1 s"));
        }
    }
    Outcome::from_failures(failures)
}

fn criterion_2() -> Outcome {
    let one = RationalFunction::one();
    let mut listed_mismatch = Vec::new();
    let mut corrected_ok = true;
    for n in [2i64, 3] {
        let nu: Vec<i64> = (0..n).map(|i| 2 * (n - i) - 1).collect();
        for case in ["alt", "her"] {
            let len = if case == "alt" { 2 * n } else { n } as usize;
            let mut mu = vec![0; len];
            mu[0] = 1;
            let mut lam = nu.clone();
            lam[0] += if case == "alt" { 1 } else { 2 };
            let r = cli(&[
                "prob", "--family", "product", "--case", case, "--mu", &csv(&mu), "--nu", &csv(&nu), "--target",
                &csv(&lam), "--symbolic",
            ]);
            let got = s(&r.json["value_in_q"]).to_string();
            let listed = div(&tp(2).sub(&one), &tp(2 * n).sub(&one)).render("q");
            let corrected = div(&tp(2 * n - 2).mul(&tp(2).sub(&one)), &tp(2 * n).sub(&one)).render("q");
            if r.code != 0 || got != listed {
                listed_mismatch.push(format!("{case} n={n}: {got}"));
            }
            corrected_ok &= got == corrected;
        }
    }
    let pass = listed_mismatch.is_empty();
    let note = if pass {
        String::new()
    } else {
        format!(
            "listed (q^2-1)/(q^(2n)-1) omits the factor Vol(lambda)/Vol(nu) = q^(2n-2); got {}; \
             q^(2n-2)(q^2-1)/(q^(2n)-1) matches in all four cases: {}",
            listed_mismatch.join(", "),
            if corrected_ok { "yes" } else { "no" }
        )
    };
    Outcome { pass, note }
}

/// The Hermitian 1x1 corner of a 2x2 matrix with singular numbers (m, 0).
fn her_table(m: i64, n1: i64) -> RationalFunction {
    let den = poly(&[1, 0, 1]);
    let geo = div(&poly(&[1, 0, -1]).mul(&tp(n1)), &den);
    if m == 0 {
        return if n1 == 0 { div(&poly(&[1, -1]), &den) } else { geo };
    }
    if n1 == 0 {
        return div(&RationalFunction::one(), &den);
    }
    if n1 < m {
        return if n1 % 2 == 0 { geo } else { RationalFunction::zero() };
    }
    match (m % 2, n1 == m) {
        (1, true) => div(&tp(m + 1), &den),
        (1, false) => RationalFunction::zero(),
        (_, true) => div(&poly(&[1, -1, -1]).mul(&tp(m)), &den),
        (_, false) => geo,
    }
}

fn alt3_table(m: i64) -> RationalFunction {
    let den = poly(&[1, 1, 1]);
    if m == 0 {
        div(&RationalFunction::one(), &den)
    } else {
        div(&poly(&[1, 0, -1]).mul(&tp(m)), &den)
    }
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let prob = |case: &str, given: &str, target: i64| {
        let r = cli(&["prob", "--family", "corner", "--case", case, "--given", given, "--target", &target.to_string(), "--symbolic"]);
        s(&r.json["value"]).to_string()
    };
    for m in 0..=4 {
        for n1 in 0..=8 {
            let want = her_table(m, n1).to_string();
            let got = prob("her", &format!("{m},0"), n1);
            if got != want {
                failures.push(format!("her m={m} n={n1}: {got} vs {want}"));
            }
        }
    }
    for m in 0..=6 {
        let got = prob("alt_odd", "0", m);
        if got != alt3_table(m).to_string() {
            failures.push(format!("alt_odd m={m}: {got}"));
        }
    }
    let mut tables: Vec<(&str, String)> = (0..=4).map(|m| ("her", format!("{m},0"))).collect();
    tables.push(("alt_odd", "0".into()));
    for (case, given) in &tables {
        for t in ["1/2", "1/3", "1/5"] {
            let r = cli(&["dist", "--family", "corner", "--case", case, "--given", given, "--t", t, "--cutoff", "8"]);
            let (tail, closed, total) = (s(&r.json["tail"]), s(&r.json["closed_tail"]), s(&r.json["total"]));
            if r.code != 0 || tail != closed || total != "1" {
                failures.push(format!("{case} given={given} t={t}: tail {tail} closed {closed} total {total}"));
            }
        }
    }
    Outcome::from_failures(failures)
}

fn suite(name: &str) -> Outcome {
    let r = cli(&["verify", "--suite", name, "--seed", "7"]);
    let failures: Vec<String> = r.json["failures"]
        .as_array()
        .map(|a| a.iter().map(|f| s(f).to_string()).collect())
        .unwrap_or_default();
    let mut o = Outcome::from_failures(failures);
    if r.code != 0 || r.json["pass"] != Value::Bool(true) {
        o.pass = false;
    }
    o.note = format!("{} checks {}", r.json["checked"], o.note).trim().to_string();
    o
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    for (case, n, q, want) in [("alt", "2", "2", "1/2"), ("alt", "4", "2", "7/16"), ("her", "2", "3", "20/27")] {
        let r = cli(&["oracle", "--family", "invertible", "--case", case, "--n", n, "--p", q]);
        let (brute, formula) = (s(&r.json["brute_force"]), s(&r.json["formula"]));
        if r.code != 0 || brute != want || formula != want {
            failures.push(format!("{case} size {n} q={q}: brute {brute}, formula {formula}, want {want}"));
        }
    }
    let r = cli(&["oracle", "--family", "cosets", "--mu", "1,0", "--p", "2"]);
    if r.json["brute_force"] != Value::from(3) || r.json["agree"] != Value::Bool(true) {
        failures.push(format!("cosets (1,0) q=2: {}", r.json["brute_force"]));
    }
    Outcome::from_failures(failures)
}

fn criterion_8() -> Outcome {
    let runs: [(&str, &[&str]); 4] = [
        ("(a) haar her n=2", &["--family", "haar", "--case", "her", "--n", "2"]),
        ("(b) haar alt 2n=4", &["--family", "haar", "--case", "alt_even", "--n", "2"]),
        ("(c) corner her from (1,0)", &["--family", "corner", "--case", "her", "--given", "1,0"]),
        ("(d) product her (1,0),(1,0)", &["--family", "product", "--case", "her", "--mu", "1,0", "--nu", "1,0"]),
    ];
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, law) in runs {
        let mut args = vec!["verify"];
        args.extend_from_slice(law);
        args.extend_from_slice(&["--p", "3", "--precision", "8", "--samples", "100000", "--seed", "7"]);
        let r = cli(&args);
        let p = r.json["p_value"].as_f64().unwrap_or(0.0);
        let d = r.json["discard_fraction"].as_f64().unwrap_or(1.0);
        notes.push(format!("{name} p={p:.3} discard={d}"));
        if r.code != 0 || p <= 1e-3 || d >= 1e-3 {
            failures.push(format!("{name}: exit {} p={p} discard={d}", r.code));
        }
    }
    let mut o = Outcome::from_failures(failures);
    if o.pass {
        o.note = notes.join(", ");
    }
    o
}

fn criterion_10() -> Outcome {
    let mut o = suite("reproducibility");
    let mut outs = Vec::new();
    for w in ["1", "4", "8"] {
        let mut r = cli(&[
            "simulate", "--family", "haar", "--case", "her", "--n", "2", "--samples", "20000", "--seed", "11", "--threads", w,
        ]);
        r.json.as_object_mut().map(|m| m.remove("threads"));
        outs.push(r.json);
    }
    if !(outs[0] == outs[1] && outs[1] == outs[2]) || outs[0].is_null() {
        o.pass = false;
        o.note.push_str("; simulate output differs across --threads 1/4/8");
    }
    o
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let criteria: Vec<(u32, &str, Option<Duration>, Box<dyn FnOnce() -> Outcome>)> = vec![
        (1, "worked-example coefficients", None, Box::new(criterion_1)),
        (2, "product-process closed forms", Some(secs(10)), Box::new(criterion_2)),
        (3, "corner tables", None, Box::new(criterion_3)),
        (4, "Hall-Littlewood engine self-consistency", Some(secs(60)), Box::new(|| suite("hl_consistency"))),
        (5, "Hecke integrality", None, Box::new(|| suite("hecke_integrality"))),
        (6, "normalization", None, Box::new(|| suite("normalization"))),
        (7, "brute-force oracles", Some(secs(30)), Box::new(criterion_7)),
        (8, "Monte Carlo vs exact", Some(secs(300)), Box::new(criterion_8)),
        (9, "marginalization identities", None, Box::new(|| suite("marginalization"))),
        (10, "reproducibility across worker counts", None, Box::new(criterion_10)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, f) in criteria {
        let (o, took) = timed(limit, f);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if o.note.is_empty() { String::new() } else { format!(": {}", o.note) };
        println!("criterion {id:>2} {verdict} {name} ({took:.2?}){note}");
        if !o.pass && !UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
