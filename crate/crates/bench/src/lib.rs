//! Shared inputs for the engine benchmarks.

use padic_hl::heckecoeff::Case;
use padic_hl::lawbook::{LawCase, LawSpec};
use padic_hl::Signature;

pub fn sig(parts: &[i64]) -> Signature {
    Signature::new(parts.to_vec()).expect("valid signature")
}

/// Coefficient tables of increasing size: `(case, μ, ν)`.
pub fn lr_inputs() -> Vec<(&'static str, padic_hl::heckecoeff::LrCase, Signature, Signature)> {
    use padic_hl::heckecoeff::LrCase;
    vec![
        ("std_21_10", LrCase::Std, sig(&[2, 1]), sig(&[1, 0])),
        ("alt_1000_21", LrCase::Alt, sig(&[1, 0, 0, 0]), sig(&[2, 1])),
        ("alt_2100_21", LrCase::Alt, sig(&[2, 1, 0, 0]), sig(&[2, 1])),
        ("her_210_210", LrCase::Her, sig(&[2, 1, 0]), sig(&[2, 1, 0])),
    ]
}

/// The laws sampled by the Monte Carlo acceptance runs.
pub fn sampled_laws() -> Vec<(&'static str, LawSpec)> {
    vec![
        ("haar_her_2", LawSpec::Haar { case: LawCase::Her, n: 2 }),
        ("haar_alt_4", LawSpec::Haar { case: LawCase::AltEven, n: 2 }),
        ("corner_her_10", LawSpec::Corner { case: LawCase::Her, given: sig(&[1, 0]) }),
        ("product_her_10_10", LawSpec::Product { case: Case::Her, mu: sig(&[1, 0]), nu: sig(&[1, 0]) }),
    ]
}
