//! Closed forms for principal specializations `x, x t, x t^2, ...`.

use super::gt::Kind;
use crate::exactnum::{q_pochhammer, Field};
use crate::sigcore::Signature;
use crate::{Error, Result};

/// Number of variables in a principal specialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(usize),
    Infinite,
}

/// `P_λ(x, x t, ..., x t^{n-1}; t)` with `n = len(λ)`, or
/// `Q_{λ/0[n]}(x, x t, ..., x t^{J-1}; t)` for finite or infinite `J`.
pub fn principal<F: Field>(kind: Kind, lambda: &Signature, x: &F, count: Count, t: &F) -> Result<F> {
    let n = lambda.len();
    let mono = x.powi(lambda.size())?.times(&t.powi(lambda.weighted())?);
    match kind {
        Kind::P => {
            if count != Count::Finite(n) {
                return Err(Error::Dimension(format!(
                    "principal P of {lambda} needs exactly {n} variables"
                )));
            }
            let den = lambda
                .mults()
                .values()
                .fold(F::one(), |acc, &m| acc.times(&q_pochhammer(t, m)));
            mono.times(&q_pochhammer(t, n)).over(&den)
        }
        Kind::Q => {
            if !lambda.is_nonnegative() {
                return Ok(F::zero());
            }
            match count {
                Count::Infinite => Ok(mono),
                Count::Finite(j) => {
                    let m0 = lambda.mult(0);
                    if m0 + j < n {
                        return Ok(F::zero());
                    }
                    mono.times(&q_pochhammer(t, j))
                        .over(&q_pochhammer(t, m0 + j - n))
                }
            }
        }
    }
}

/// `Q_λ = Π_{i≥1} (t;t)_{m_i(λ)} P_λ` factor for a nonnegative signature.
pub fn b_lambda<F: Field>(lambda: &Signature, t: &F) -> F {
    lambda
        .mults()
        .iter()
        .filter(|(&v, _)| v > 0)
        .fold(F::one(), |acc, (_, &m)| acc.times(&q_pochhammer(t, m)))
}
