//! Hall-Littlewood polynomials: branching, symmetrization, principal
//! specializations, Cauchy kernels and basis expansion.

pub mod cauchy;
pub mod concat;
pub mod expand;
pub mod gt;
pub mod laurent;
pub mod principal;
pub mod specialization;
pub mod sym;

pub use cauchy::{cauchy, cauchy_exact, cauchy_numeric, CauchyMode, CauchyValue};
pub use concat::{skew_q_numeric, spec_concat_q, spec_concat_q_numeric};
pub use expand::{expand_in_hl, recombine};
pub use gt::{
    branch_coeff, gt_patterns, p_poly, skew_eval, skew_eval1, skew_eval_abs, skew_eval_guarded, skew_poly,
    BranchKind, GtPattern, Kind, MonoVar, DEFAULT_TRANSITION_GUARD,
};
pub use laurent::{LaurentPoly, LaurentSymPoly};
pub use principal::{b_lambda, principal, Count};
pub use specialization::{GeomTail, Specialization};
pub use sym::{hl_p_sym, v_lambda, v_m, MAX_SYM_VARS};
