//! zeroscope: a desk-scale laboratory for the statistics of low-lying zeros
//! of Dirichlet L-functions.
//!
//! The crate provides, as exactly as double (and where needed double-double)
//! precision allows:
//!
//! - exact Dirichlet characters, conductors, Gauss sums and orthogonality
//!   identities (`characters`);
//! - band-limited test functions: Fejér kernels with exactly supported
//!   Fourier transform, smooth bumps and a dyadic partition of unity
//!   (`bandlimited`);
//! - numerical Dirichlet L-functions with certified critical-line zero
//!   localization (`lfunc`);
//! - prime/arithmetic-progression dispersion sums, Kloosterman sums, a
//!   combinatorial exponent classifier, and Heath-Brown identity checks
//!   (`dispersion`);
//! - an exact rational solver for the exponent-constraint systems whose
//!   feasibility supremum is 50/1093 (`exponents`);
//! - family 1-level density statistics, explicit-formula balances and
//!   non-vanishing proportions (`density`).

pub mod arith;
pub mod bandlimited;
pub mod characters;
pub mod dd;
pub mod density;
pub mod dispersion;
pub mod error;
pub mod exponents;
pub mod lfunc;
pub mod special;
pub mod util;

pub use error::{Error, Result};
