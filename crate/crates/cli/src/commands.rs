//! One function per verb; each returns the document to print.

use crate::emit::{Doc, Table};
use crate::{CoeffArgs, DistArgs, Failure, HlArgs, LawArgs, OracleArgs, OracleKind, ParamArgs, PolyKind, ProbArgs, RingArgs, SimArgs, VerifyArgs};
use num_rational::BigRational;
use padic_hl::exactnum::{eval_in, rat, Field, RationalFunction};
use padic_hl::heckecoeff::{self, hecke_g, lr_table, Case, LrCase};
use padic_hl::hlpoly::{b_lambda, p_poly, skew_poly, Kind, MonoVar};
use padic_hl::lawbook::{
    closed_tail, exact_distribution, haar_sn_prob_numeric, joint_corners_weight, joint_product_weight, prob_in_q,
    Family, LawCase, LawSpec,
};
use padic_hl::padicring::RingCfg;
use padic_hl::veristat::suites::{run_suite, SamplingOpts, Suite};
use padic_hl::veristat::{
    self, compare, invertible_fraction, residue_distribution, run_chain_experiment, run_experiment, PRECISION_MARGIN,
};
use padic_hl::Signature;
use serde_json::{json, Value};
use std::fmt::Display;

type Out = Result<Doc, Failure>;

const DEFAULT_SAMPLES: u64 = 100_000;

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

fn parse<T: std::str::FromStr<Err = padic_hl::Error>>(s: &str) -> Result<T, Failure> {
    s.parse().map_err(Failure::from)
}

fn need<T: Clone>(v: &Option<T>, flag: &str, family: Family) -> Result<T, Failure> {
    v.clone().ok_or_else(|| usage(format!("family {family} needs --{flag}")))
}

fn class(case: &str) -> Result<Case, Failure> {
    Ok(parse::<LawCase>(case)?.class())
}

pub(crate) fn law_spec(a: &LawArgs) -> Result<LawSpec, Failure> {
    let family: Family = parse(&a.family)?;
    let spec = match family {
        Family::Product => LawSpec::Product {
            case: class(&a.case)?,
            mu: need(&a.mu, "mu", family)?,
            nu: need(&a.nu, "nu", family)?,
        },
        Family::Corner => LawSpec::Corner { case: parse(&a.case)?, given: need(&a.given, "given", family)? },
        Family::Haar => LawSpec::Haar { case: parse(&a.case)?, n: need(&a.n, "n", family)? },
        Family::CornerInvertible => LawSpec::CornerInvertible {
            case: parse(&a.case)?,
            n: need(&a.n, "n", family)?,
            m: need(&a.m, "m", family)?,
        },
        Family::JointCorners => LawSpec::JointCorners { case: class(&a.case)?, n: need(&a.n, "n", family)? },
        Family::JointProduct => LawSpec::JointProduct {
            case: class(&a.case)?,
            n: need(&a.n, "n", family)?,
            k: need(&a.k, "k", family)?,
        },
        Family::Invertible => LawSpec::Invertible { case: class(&a.case)?, size: need(&a.n, "n", family)? },
    };
    spec.validate()?;
    Ok(spec)
}

fn is_joint(spec: &LawSpec) -> bool {
    matches!(spec.family(), Family::JointCorners | Family::JointProduct)
}

fn sig_json(s: &Signature) -> Value {
    json!(s.parts())
}

fn parts(s: &Signature) -> String {
    s.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn poly_terms<F: Field + Display>(a: &HlArgs, t: &F) -> Result<Vec<(Vec<i64>, String)>, Failure> {
    let kind = match a.kind {
        PolyKind::P => Kind::P,
        PolyKind::Q => Kind::Q,
    };
    let poly = match &a.mu {
        None => {
            let p = p_poly(&a.lambda, t)?;
            if kind == Kind::Q {
                if !a.lambda.is_nonnegative() {
                    return Err(Failure::Domain(padic_hl::Error::Domain("Q needs a nonnegative signature".into())));
                }
                p.scale(&b_lambda(&a.lambda, t))
            } else {
                p
            }
        }
        Some(mu) => {
            let diff = a.lambda.len().saturating_sub(mu.len());
            let n = a.n.unwrap_or(if diff > 0 { diff } else { 1 });
            let vars: Vec<MonoVar<F>> = (0..n).map(MonoVar::plain).collect();
            skew_poly(kind, &a.lambda, mu, &vars, n, t)?
        }
    };
    Ok(poly.terms().map(|(e, c)| (e.clone(), c.to_string())).collect())
}

pub(crate) fn hl(a: &HlArgs) -> Out {
    let terms = match &a.param.t {
        Some(t) => poly_terms(a, t)?,
        None => poly_terms(a, &RationalFunction::t())?,
    };
    let mut table = Table::new(&["exponents", "coeff"]);
    for (e, c) in &terms {
        table.push([e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "), c.clone()]);
    }
    let body = json!({
        "kind": format!("{:?}", a.kind),
        "lambda": sig_json(&a.lambda),
        "mu": a.mu.as_ref().map(sig_json),
        "t": param_label(&a.param),
        "terms": terms.iter().map(|(e, c)| json!({"exponents": e, "coeff": c})).collect::<Vec<_>>(),
    });
    Ok(Doc::new("hl", body, table))
}

fn param_label(p: &ParamArgs) -> String {
    p.t.as_ref().map_or_else(|| "t".to_string(), |t| t.to_string())
}

fn render_at(c: &RationalFunction, p: &ParamArgs) -> Result<String, Failure> {
    Ok(match &p.t {
        Some(t) => eval_in(c, t)?.to_string(),
        None => c.to_string(),
    })
}

pub(crate) fn coeff(a: &CoeffArgs) -> Out {
    let case: LrCase = parse(&a.case)?;
    let table = lr_table(case, &a.mu, &a.nu)?;
    let mut rows = Table::new(&["lambda", "c"]);
    let mut entries = Vec::new();
    let pick: Vec<(&Signature, RationalFunction)> = match &a.lambda {
        Some(l) => match table.entries.get_key_value(l) {
            Some((k, v)) => vec![(k, v.clone())],
            None => vec![(l, RationalFunction::zero())],
        },
        None => table.entries.iter().map(|(k, v)| (k, v.clone())).collect(),
    };
    for (l, c) in pick {
        let v = render_at(&c, &a.param)?;
        rows.push([parts(l), v.clone()]);
        entries.push(json!({"lambda": sig_json(l), "c": v}));
    }
    let hecke = match (&a.lambda, case) {
        (Some(l), LrCase::Alt | LrCase::Her) => {
            let hc = if case == LrCase::Alt { Case::Alt } else { Case::Her };
            let g = hecke_g(hc, &a.mu, &a.nu, l)?;
            rows.push([format!("g {}", parts(l)), g.poly.render("q")]);
            json!({"g": g.poly.render("q"), "sign_exponent": g.sign_exponent})
        }
        _ => Value::Null,
    };
    let body = json!({
        "case": case.to_string(),
        "mu": sig_json(&a.mu),
        "nu": sig_json(&a.nu),
        "param": table.param().to_string(),
        "t": param_label(&a.param),
        "entries": entries,
        "hecke": hecke,
    });
    Ok(Doc::new("coeff", body, rows))
}

fn parse_chain(s: &str) -> Result<Vec<Signature>, Failure> {
    s.split(';').map(parse::<Signature>).collect()
}

fn joint_weight<F: Field>(spec: &LawSpec, chain: &[Signature], t: &F) -> Result<F, Failure> {
    Ok(match spec {
        LawSpec::JointCorners { case, .. } => joint_corners_weight(*case, chain, t)?,
        LawSpec::JointProduct { case, .. } => joint_product_weight(*case, chain, t)?,
        _ => unreachable!("joint family"),
    })
}

pub(crate) fn prob(a: &ProbArgs) -> Out {
    let spec = law_spec(&a.law)?;
    let (value, value_q, target_json) = if is_joint(&spec) {
        let chain = parse_chain(&a.target)?;
        let (v, vq) = match &a.param.t {
            Some(t) => (joint_weight(&spec, &chain, t)?.to_string(), None),
            None => (
                joint_weight(&spec, &chain, &RationalFunction::t())?.to_string(),
                Some(joint_weight(&spec, &chain, &RationalFunction::t_pow(-1))?.render("q")),
            ),
        };
        (v, vq, json!(chain.iter().map(sig_json).collect::<Vec<_>>()))
    } else {
        let target: Signature = parse(&a.target)?;
        let (v, vq) = match &a.param.t {
            Some(t) => (spec.prob(&target, t)?.to_string(), None),
            None => (spec.prob(&target, &RationalFunction::t())?.to_string(), Some(prob_in_q(&spec, &target)?.render("q"))),
        };
        (v, vq, sig_json(&target))
    };
    let enclosure = match (&a.tolerance, &spec) {
        (None, _) => None,
        (Some(tol), LawSpec::Haar { case, n }) => {
            let t = a.param.t.as_ref().ok_or_else(|| usage("--tolerance needs --t"))?;
            let iv = haar_sn_prob_numeric(*case, *n, &parse(&a.target)?, t, tol)?;
            Some(iv.rounded(digits_for(tol)).to_string())
        }
        (Some(_), _) => return Err(usage("--tolerance applies to the haar family only")),
    };
    let mut table = Table::new(&["family", "target", "t", "value"]);
    table.push([spec.family().to_string(), a.target.clone(), param_label(&a.param), value.clone()]);
    let body = json!({
        "law": spec,
        "target": target_json,
        "t": param_label(&a.param),
        "value": value,
        "value_in_q": value_q,
        "enclosure": enclosure,
    });
    Ok(Doc::new("prob", body, table))
}

/// Decimal digits that resolve `tol` with two to spare.
fn digits_for(tol: &BigRational) -> u32 {
    let mut d = 2;
    let mut x = tol.clone();
    while x < rat(1, 1) && d < 60 {
        x *= rat(10, 1);
        d += 1;
    }
    d
}

pub(crate) fn dist(a: &DistArgs) -> Out {
    let spec = law_spec(&a.law)?;
    let d = exact_distribution(&spec, &a.t, a.cutoff)?;
    let closed = closed_tail(&spec, &a.t, a.cutoff)?;
    let mut table = Table::new(&["lambda", "mass"]);
    for (l, p) in &d.atoms {
        table.push([parts(l), p.to_string()]);
    }
    table.push(["tail".to_string(), d.tail_mass.to_string()]);
    let body = json!({
        "law": spec,
        "t": a.t.to_string(),
        "cutoff": d.support_cutoff,
        "atoms": d.atoms.iter().map(|(l, p)| json!({"lambda": sig_json(l), "mass": p.to_string()})).collect::<Vec<_>>(),
        "tail": d.tail_mass.to_string(),
        "closed_tail": closed.map(|x| x.to_string()),
        "total": d.total().to_string(),
    });
    Ok(Doc::new("dist", body, table))
}

fn threads(r: &RingArgs) -> usize {
    r.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
}

fn ring(r: &RingArgs, spec: Option<&LawSpec>, cutoff: i64) -> Result<RingCfg, Failure> {
    let k = r.precision.unwrap_or_else(|| (cutoff + PRECISION_MARGIN).max(1) as u32);
    let alt_only = spec.is_some_and(|s| match s {
        LawSpec::Product { case, .. } | LawSpec::JointCorners { case, .. } | LawSpec::JointProduct { case, .. } | LawSpec::Invertible { case, .. } => *case == Case::Alt,
        LawSpec::Corner { case, .. } | LawSpec::Haar { case, .. } | LawSpec::CornerInvertible { case, .. } => *case != LawCase::Her,
    });
    Ok(match r.nonresidue {
        Some(d) => RingCfg::with_nonresidue(r.p, k, d)?,
        None if alt_only && r.p == 2 => RingCfg::base_ring(r.p, k)?,
        None => RingCfg::new(r.p, k)?,
    })
}

fn ring_json(cfg: &RingCfg, r: &RingArgs, samples: u64) -> Value {
    json!({
        "p": cfg.p(),
        "precision": cfg.precision(),
        "nonresidue": cfg.has_extension().then(|| cfg.nonresidue()),
        "samples": samples,
        "seed": r.seed,
        "threads": threads(r),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

pub(crate) fn simulate(a: &SimArgs) -> Out {
    let spec = law_spec(&a.law)?;
    let cfg = ring(&a.ring, Some(&spec), a.cutoff)?;
    let samples = a.ring.samples.unwrap_or(DEFAULT_SAMPLES);
    let mut table = Table::new(&["outcome", "count"]);
    let body = if is_joint(&spec) {
        let h = run_chain_experiment(&spec, &cfg, samples, a.ring.seed, threads(&a.ring), a.cutoff)?;
        for (c, n) in &h.counts {
            table.push([c.iter().map(parts).collect::<Vec<_>>().join(";"), n.to_string()]);
        }
        table.push(["tail".to_string(), h.tail_bin.to_string()]);
        table.push(["discarded".to_string(), h.discarded.to_string()]);
        json!({
            "law": spec,
            "counts": h.counts.iter().map(|(c, n)| json!({"chain": c.iter().map(sig_json).collect::<Vec<_>>(), "count": n})).collect::<Vec<_>>(),
            "tail_bin": h.tail_bin, "discarded": h.discarded, "total": h.total, "cutoff": h.cutoff,
        })
    } else {
        let h = run_experiment(&spec, &cfg, samples, a.ring.seed, threads(&a.ring), a.cutoff)?;
        for (l, n) in &h.counts {
            table.push([parts(l), n.to_string()]);
        }
        table.push(["tail".to_string(), h.tail_bin.to_string()]);
        table.push(["discarded".to_string(), h.discarded.to_string()]);
        json!({
            "law": spec,
            "counts": h.counts.iter().map(|(l, n)| json!({"lambda": sig_json(l), "count": n})).collect::<Vec<_>>(),
            "tail_bin": h.tail_bin, "discarded": h.discarded, "total": h.total, "cutoff": h.cutoff,
        })
    };
    Ok(Doc::new("simulate", merge(body, ring_json(&cfg, &a.ring, samples)), table))
}

fn verify_suite(name: &str, a: &VerifyArgs) -> Out {
    let suite: Suite = parse(name)?;
    let opts = SamplingOpts {
        p: a.ring.p,
        samples: a.ring.samples.unwrap_or(SamplingOpts::default().samples),
        seed: a.ring.seed,
    };
    let r = run_suite(suite, opts)?;
    let body = serde_json::to_value(&r).expect("report serializes");
    let mut table = Table::new(&["suite", "checked", "failures", "pass"]);
    table.push([r.suite.to_string(), r.checked.to_string(), r.failures.len().to_string(), r.pass.to_string()]);
    for f in &r.failures {
        table.push([String::new(), String::new(), f.clone(), String::new()]);
    }
    let doc = Doc::new("verify", body, table);
    if r.pass {
        Ok(doc)
    } else {
        Err(Failure::Verification(doc))
    }
}

pub(crate) fn verify(a: &VerifyArgs) -> Out {
    if let Some(s) = &a.suite {
        return verify_suite(s, a);
    }
    let law = LawArgs {
        family: a.family.clone().unwrap_or_default(),
        case: a.case.clone().unwrap_or_default(),
        mu: a.mu.clone(),
        nu: a.nu.clone(),
        given: a.given.clone(),
        n: a.n,
        m: a.m,
        k: a.k,
    };
    let spec = law_spec(&law)?;
    if is_joint(&spec) {
        return Err(Failure::Domain(padic_hl::Error::Domain(
            "joint laws are checked by marginalization: verify --suite marginalization".into(),
        )));
    }
    let t = rat(1, a.ring.p as i64);
    let reference = exact_distribution(&spec, &t, a.cutoff.unwrap_or(4))?;
    let cutoff = reference.support_cutoff;
    let cfg = ring(&a.ring, Some(&spec), cutoff)?;
    let samples = a.ring.samples.unwrap_or(DEFAULT_SAMPLES);
    let h = run_experiment(&spec, &cfg, samples, a.ring.seed, threads(&a.ring), cutoff)?;
    let report = compare(&h, &reference, a.p_threshold, a.discard_cap)?;
    let mut body = serde_json::to_value(&report).expect("report serializes");
    body = merge(
        body,
        json!({
            "law": spec,
            "t": t.to_string(),
            "cutoff": cutoff,
            "reference_tail": reference.tail_mass.to_string(),
            "tail_bin": h.tail_bin,
            "p_threshold": a.p_threshold,
            "discard_cap": a.discard_cap,
        }),
    );
    body = merge(body, ring_json(&cfg, &a.ring, samples));
    let table = Table::from_fields(&body);
    let doc = Doc::new("verify", body, table);
    if report.pass {
        Ok(doc)
    } else {
        Err(Failure::Verification(doc))
    }
}

pub(crate) fn oracle(a: &OracleArgs) -> Out {
    let case = class(&a.case)?;
    let q = a.p;
    let qr = BigRational::from_integer(q.into());
    let body = match a.family {
        OracleKind::Invertible => {
            let n = a.n.ok_or_else(|| usage("oracle invertible needs --n"))?;
            let brute = invertible_fraction(case, n, q)?;
            let formula = padic_hl::lawbook::invertible_prob(case, n, &qr)?;
            json!({"case": case.to_string(), "size": n, "q": q, "brute_force": brute.to_string(), "formula": formula.to_string(), "agree": brute == formula})
        }
        OracleKind::Residue => {
            let n = a.n.ok_or_else(|| usage("oracle residue needs --n"))?;
            let d = residue_distribution(case, n, q)?;
            json!({
                "case": case.to_string(), "size": n, "q": q,
                "ranks": d.iter().map(|(r, p)| json!({"rank": r, "mass": p.to_string()})).collect::<Vec<_>>(),
            })
        }
        OracleKind::Cosets => {
            if case != Case::Alt {
                return Err(Failure::Domain(padic_hl::Error::Domain("coset enumeration is for alt".into())));
            }
            let mu = a.mu.clone().ok_or_else(|| usage("oracle cosets needs --mu"))?;
            let brute = veristat::coset_count(&mu, q)?;
            let formula = eval_in(&heckecoeff::coset_count(Case::Alt, &mu), &qr)?;
            json!({
                "mu": sig_json(&mu), "q": q, "brute_force": brute, "formula": formula.to_string(),
                "agree": BigRational::from_integer(brute.into()) == formula,
            })
        }
    };
    let table = Table::from_fields(&body);
    Ok(Doc::new("oracle", body, table))
}
