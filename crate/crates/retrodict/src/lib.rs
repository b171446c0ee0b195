//! Engineering of optical states heralded by a multiport detection event.
//!
//! Given a target state expressed as a finite photon-number superposition,
//! this crate computes the coherent inputs and multiport unitary that emit it
//! from the free port when detector 0 stays dark and every other detector
//! fires once, optimizes the probability of that event over the first column
//! of the transformation, and verifies every result against an independent
//! brute-force Fock-space simulation.
//!
//! The pipeline, module by module:
//!
//! - [`rootcore`]: a degree-N target is factorized through the roots of its
//!   characteristic polynomial;
//! - [`multiport`]: DFT, beamsplitter, and completed unitaries describing the
//!   lossless device;
//! - [`engineer`]: roots plus a unitary give the port-0 balance value g_0,
//!   the coherent amplitudes beta_m, the constant kbar, the success metric
//!   |kbar|^2, and the closed-form engineered state;
//! - [`optimize`]: |kbar|^2 is maximized over the first-column weights on the
//!   probability simplex;
//! - [`focksim`]: permanents and photon-number bookkeeping re-derive the
//!   engineered state by forward simulation, with no shared code path.
//!
//! Core numerics are generic over the real scalar via [`Float`]; the aliases
//! below fix the common double-precision instantiations.

pub mod engineer;
pub mod float;
pub mod focksim;
pub mod multiport;
pub mod optimize;
pub mod rootcore;
pub mod tol;

mod util;

pub use float::Float;
pub use num_complex::Complex;

pub use engineer::{squared_overlap, EngineeringPlan, PlanMode};
pub use multiport::{ColumnSpec, MultiportUnitary};
pub use optimize::{ColumnWeights, OptimizationResult};
pub use rootcore::{RootSet, TargetState};

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;
/// Double-precision target state.
pub type TargetState64 = rootcore::TargetState<f64>;
/// Double-precision characteristic polynomial.
pub type CharPolynomial64 = rootcore::CharPolynomial<f64>;
/// Double-precision root set.
pub type RootSet64 = rootcore::RootSet<f64>;
/// Double-precision multiport unitary.
pub type MultiportUnitary64 = multiport::MultiportUnitary<f64>;
/// Double-precision column specification.
pub type ColumnSpec64 = multiport::ColumnSpec<f64>;
/// Double-precision engineering plan.
pub type EngineeringPlan64 = engineer::EngineeringPlan<f64>;
/// Double-precision column weights.
pub type ColumnWeights64 = optimize::ColumnWeights<f64>;
/// Double-precision Fock vector.
pub type FockVector64 = focksim::FockVector<f64>;
