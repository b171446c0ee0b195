//! Numeric tolerances shared across modules, in `f64`.
//!
//! Convert with `T::of(...)` where a generic scalar is needed.

/// State-vector normalization check.
pub const NORMALIZATION: f64 = 1e-12;

/// Root residual bound, relative to the largest polynomial coefficient.
pub const ROOT_RESIDUAL: f64 = 1e-9;

/// Relaxed residual bound for roots with detected multiplicity >= 2.
pub const ROOT_RESIDUAL_MULTIPLE: f64 = 1e-6;

/// Derivative magnitude below which a root is treated as multiple.
pub const MULTIPLE_ROOT_DERIVATIVE: f64 = 1e-8;

/// Leading polynomial coefficient below which the degree is degenerate.
pub const DEGENERATE_LEADING: f64 = 1e-14;

/// Elementwise bound on |U†U - I| for a matrix to count as unitary.
pub const UNITARITY: f64 = 1e-10;

/// Unit-norm check for a single column specification.
pub const COLUMN_NORM: f64 = 1e-10;

/// Mutual orthonormality required of caller-fixed columns before completion.
pub const FIXED_COLUMN_ORTHONORMALITY: f64 = 1e-8;

/// Residual norm below which a basis vector is dependent during completion.
pub const COMPLETION_DEPENDENT: f64 = 1e-8;

/// |beta_0| above this signals a g_0 inconsistent with the first column.
pub const BETA0_CONSISTENCY: f64 = 1e-9;

/// Zero test for first-column elements in the inversion formulas.
pub const ZERO_COLUMN_ELEMENT: f64 = 1e-12;

/// Minimum first-column modulus accepted when building a plan.
pub const PLAN_MIN_COLUMN: f64 = 1e-6;

/// Allowed shortfall of the plan state's squared overlap with its target.
pub const PLAN_FIDELITY: f64 = 1e-8;

/// Interior floor on the optimizer's simplex weights.
pub const WEIGHT_FLOOR: f64 = 1e-8;

/// Stationarity residual required of a converged Lagrange solution.
pub const STATIONARITY: f64 = 1e-9;

/// Per-mode Poisson tail bound used to pick automatic coherent cutoffs.
pub const COHERENT_TAIL: f64 = 1e-12;

/// Truncation deficit above which the Fock oracle refuses to report.
pub const ORACLE_DEFICIT: f64 = 1e-8;

/// Allowed shortfall of the oracle-vs-plan squared overlap in verification.
pub const VERIFY_OVERLAP: f64 = 1e-7;
