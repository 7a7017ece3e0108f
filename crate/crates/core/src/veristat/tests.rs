use super::*;
use crate::heckecoeff;
use crate::lawbook::{exact_distribution, invertible_prob};

fn sig(v: &[i64]) -> Signature {
    Signature::new(v.to_vec()).unwrap()
}

fn q(a: i64, b: i64) -> BigRational {
    rat(a, b)
}

fn ring() -> RingCfg {
    RingCfg::new(3, 8).unwrap()
}

#[test]
fn scalar_haar_is_geometric() {
    let spec = LawSpec::Haar { case: LawCase::Her, n: 1 };
    let h = run_experiment(&spec, &ring(), 10_000, 11, 4, 4).unwrap();
    assert_eq!(h.total, 10_000);
    assert_eq!(h.counts.values().sum::<u64>() + h.tail_bin + h.discarded, h.total);
    let reference = exact_distribution(&spec, &q(1, 3), 4).unwrap();
    assert_eq!(reference.mass(&sig(&[2])), q(2, 27));
    let r = compare(&h, &reference, P_THRESHOLD, DISCARD_CAP).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn constant_product_is_deterministic() {
    let spec = LawSpec::Product { case: Case::Alt, mu: sig(&[2, 2]), nu: sig(&[0]) };
    let h = run_experiment(&spec, &ring(), 500, 1, 2, 4).unwrap();
    assert_eq!(h.count(&sig(&[4])), 500);
}

#[test]
fn hermitian_corner_of_invertible_matches_table() {
    let spec = LawSpec::Corner { case: LawCase::Her, given: sig(&[0, 0]) };
    let h = run_experiment(&spec, &ring(), 20_000, 5, 4, 4).unwrap();
    let reference = exact_distribution(&spec, &q(1, 3), 4).unwrap();
    let r = compare(&h, &reference, P_THRESHOLD, DISCARD_CAP).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn worker_count_does_not_matter() {
    let spec = LawSpec::Haar { case: LawCase::AltEven, n: 2 };
    let a = run_experiment(&spec, &ring(), 3000, 9, 1, 3).unwrap();
    let b = run_experiment(&spec, &ring(), 3000, 9, 8, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = run_experiment(&spec, &ring(), 3000, 10, 8, 3).unwrap();
    assert_ne!(a, c);
}

#[test]
fn precision_policy() {
    let spec = LawSpec::Haar { case: LawCase::Her, n: 1 };
    assert!(matches!(run_experiment(&spec, &ring(), 10, 0, 1, 5), Err(Error::Precision(_))));
    let joint = LawSpec::JointCorners { case: Case::Her, n: 2 };
    assert!(run_experiment(&joint, &ring(), 10, 0, 1, 2).is_err());
}

#[test]
fn calibration_passes_and_power_fails() {
    let spec = LawSpec::Haar { case: LawCase::Her, n: 2 };
    let reference = exact_distribution(&spec, &q(1, 3), 3).unwrap();
    let passes = (0..100)
        .filter(|&s| compare(&sample_exact(&reference, 5000, s), &reference, P_THRESHOLD, DISCARD_CAP).unwrap().pass)
        .count();
    assert!(passes >= 97, "{passes}");
    // t replaced by t² is detected.
    let wrong = exact_distribution(&spec, &q(1, 9), 3).unwrap();
    let h = sample_exact(&wrong, 5000, 1);
    assert!(!compare(&h, &reference, P_THRESHOLD, DISCARD_CAP).unwrap().pass);
}

#[test]
fn degenerate_inputs() {
    let spec = LawSpec::Haar { case: LawCase::Her, n: 1 };
    let reference = exact_distribution(&spec, &q(1, 3), 2).unwrap();
    assert!(matches!(compare(&Histogram::new(2), &reference, P_THRESHOLD, DISCARD_CAP), Err(Error::Degenerate(_))));
    let mut h = Histogram::new(2);
    h.record(Outcome::Tail);
    assert!(matches!(compare(&h, &reference, P_THRESHOLD, DISCARD_CAP), Err(Error::Degenerate(_))));
    assert!(compare(&Histogram::new(3), &reference, P_THRESHOLD, DISCARD_CAP).is_err());
}

#[test]
fn brute_force_invertible() {
    assert_eq!(invertible_fraction(Case::Alt, 2, 2).unwrap(), q(1, 2));
    assert_eq!(invertible_fraction(Case::Alt, 4, 2).unwrap(), q(7, 16));
    assert_eq!(invertible_fraction(Case::Her, 2, 3).unwrap(), q(20, 27));
    for (case, size, qq) in [(Case::Alt, 4, 3), (Case::Alt, 3, 3), (Case::Her, 1, 5), (Case::Her, 3, 3)] {
        assert_eq!(
            invertible_fraction(case, size, qq).unwrap(),
            invertible_prob(case, size, &q(qq as i64, 1)).unwrap(),
            "{case} {size} {qq}"
        );
    }
    assert!(matches!(invertible_fraction(Case::Her, 5, 3), Err(Error::SpaceTooLarge(_))));
    assert!(invertible_fraction(Case::Her, 2, 2).is_err());
}

#[test]
fn residue_ranks() {
    let d = residue_distribution(Case::Her, 1, 3).unwrap();
    assert_eq!(d[&0], q(1, 3));
    assert_eq!(d[&1], q(2, 3));
    let d = residue_distribution(Case::Alt, 3, 2).unwrap();
    assert_eq!(d[&0], q(1, 8));
    assert_eq!(d[&2], q(7, 8));
}

#[test]
fn brute_force_cosets() {
    assert_eq!(coset_count(&sig(&[1, 0]), 2).unwrap(), 3);
    for (mu, p) in [(sig(&[1, 0]), 3), (sig(&[2, 0]), 2), (sig(&[1, 1, 0]), 2), (sig(&[2, 1]), 3), (sig(&[2, 1, 0]), 2)] {
        let want = crate::exactnum::eval_in(&heckecoeff::coset_count(Case::Alt, &mu), &q(p as i64, 1)).unwrap();
        assert_eq!(q(coset_count(&mu, p).unwrap() as i64, 1), want, "{mu} p={p}");
    }
}

#[test]
fn chain_experiment_runs() {
    let spec = LawSpec::JointCorners { case: Case::Her, n: 2 };
    let a = run_chain_experiment(&spec, &ring(), 2000, 3, 1, 3).unwrap();
    let b = run_chain_experiment(&spec, &ring(), 2000, 3, 4, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.counts.values().sum::<u64>() + a.tail_bin + a.discarded, a.total);
    let spec = LawSpec::JointProduct { case: Case::Alt, n: 1, k: 2 };
    let h = run_chain_experiment(&spec, &ring(), 500, 3, 2, 3).unwrap();
    assert!(h.counts.keys().all(|c| c.len() == 3 && c.windows(2).all(|w| w[0].contained_in(&w[1]))));
}
