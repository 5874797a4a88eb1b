//! Exact interval exchange transformations over the rank-2 space
//! Q + Q·alpha.
//!
//! The crate builds IETs from a permutation and a length vector, evaluates,
//! inverts, composes and iterates them without rounding, and certifies
//! dynamical and spectral properties:
//!
//! * [`spectral`]: continuous eigenfunctions from translation vectors of the
//!   form `delta_i = r + p_i s`, and rational eigenvalues from intervals
//!   permuted cyclically;
//! * [`dynamics`]: Keane's idoc condition (depth-bounded search plus an
//!   algebraic drift certificate), invariant unions, first-return maps,
//!   Birkhoff frequencies and a combined minimality verdict;
//! * [`families`]: the parametric constructions with continuous
//!   eigenfunctions (`thm14_family`, `thm15_family`, `n2_rescaled`) and the
//!   conjugated rotation `h ∘ R_alpha ∘ h⁻¹`.

pub mod combinatorics;
pub mod dynamics;
mod error;
pub mod families;
pub mod iet;
pub mod intervals;
pub mod numeric;
pub mod spectral;

pub use error::{Error, Result};
pub use iet::{build_iet, Iet, OrbitPoint, Permutation};
pub use intervals::Interval;
pub use numeric::{AlphaOracle, QAlpha, Rational, Sign};
