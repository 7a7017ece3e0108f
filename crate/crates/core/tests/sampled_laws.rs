//! Sampled singular numbers against exact laws for the families the
//! acceptance runs do not cover.

use padic_hl::exactnum::rat;
use padic_hl::heckecoeff::Case;
use padic_hl::lawbook::{exact_distribution, LawCase, LawSpec};
use padic_hl::padicring::RingCfg;
use padic_hl::veristat::{compare, run_experiment, DISCARD_CAP, P_THRESHOLD};
use padic_hl::Signature;

fn sig(v: &[i64]) -> Signature {
    Signature::new(v.to_vec()).unwrap()
}

fn check(spec: LawSpec, p: u64, cutoff: i64, samples: u64) {
    let reference = exact_distribution(&spec, &rat(1, p as i64), cutoff).unwrap();
    let ring = RingCfg::new(p, (reference.support_cutoff + 4) as u32).unwrap();
    let h = run_experiment(&spec, &ring, samples, 21, 4, reference.support_cutoff).unwrap();
    let r = compare(&h, &reference, P_THRESHOLD, DISCARD_CAP).unwrap();
    assert!(r.pass, "{spec:?}: {r:?}");
}

#[test]
fn corners() {
    check(LawSpec::Corner { case: LawCase::AltEven, given: sig(&[2, 0]) }, 3, 2, 20_000);
    check(LawSpec::Corner { case: LawCase::AltOdd, given: sig(&[1]) }, 3, 4, 20_000);
    check(LawSpec::Corner { case: LawCase::Her, given: sig(&[2, 1, 0]) }, 3, 4, 20_000);
}

#[test]
fn haar_odd_and_products() {
    check(LawSpec::Haar { case: LawCase::AltOdd, n: 1 }, 3, 4, 20_000);
    check(LawSpec::Haar { case: LawCase::Her, n: 1 }, 5, 3, 20_000);
    check(LawSpec::Product { case: Case::Alt, mu: sig(&[1, 0, 0, 0]), nu: sig(&[1, 0]) }, 3, 0, 20_000);
    check(LawSpec::Product { case: Case::Alt, mu: sig(&[1, 1, 0, 0]), nu: sig(&[2, 1]) }, 3, 0, 20_000);
}

#[test]
fn invertible_families() {
    check(LawSpec::CornerInvertible { case: LawCase::Her, n: 1, m: 3 }, 3, 4, 20_000);
    check(LawSpec::CornerInvertible { case: LawCase::AltEven, n: 1, m: 2 }, 3, 4, 20_000);
    check(LawSpec::Invertible { case: Case::Alt, size: 4 }, 3, 0, 20_000);
    check(LawSpec::Invertible { case: Case::Her, size: 2 }, 3, 0, 20_000);
}

#[test]
fn wrong_parameter_is_rejected() {
    // Sampling at p = 3 but comparing against the law at t = 1/5.
    let spec = LawSpec::Haar { case: LawCase::Her, n: 2 };
    let reference = exact_distribution(&spec, &rat(1, 5), 4).unwrap();
    let h = run_experiment(&spec, &RingCfg::new(3, 8).unwrap(), 20_000, 3, 4, 4).unwrap();
    assert!(!compare(&h, &reference, P_THRESHOLD, DISCARD_CAP).unwrap().pass);
}
