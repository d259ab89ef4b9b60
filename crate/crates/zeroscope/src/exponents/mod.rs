//! Exact-rational calculus over the exponent-constraint systems: feasibility
//! intervals for (λ, δ, ρ) as functions of ϖ, the supremum ϖ = 50/1093, the
//! Type-II exponent tables with their majorization claims, and the
//! K-function of the exponential-sum bound.

mod lp;
mod ratfn;
mod system;
mod tables;

pub use lp::Lp;
pub use ratfn::{rat, rat_int, LinFrac, Monotonicity, Poly, Rat};
pub use system::{
    nonvanishing_bound, nonvanishing_bound_limit, nonvanishing_denominator_note, Assignment,
    Constraint, ConstraintKind, ConstraintSystem, Param, Provenance, SupReport,
};
pub use tables::{
    eta_table, k_function, majorization_check, rat_to_f64, reduced_qny, theta_table,
    tii_thresholds, AffTheta, ExponentVector, MajorizationRegion, MajorizationVerdict,
};
