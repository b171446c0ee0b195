//! Maximization of the success metric |kbar|^2 over the first-column weights
//! x_n = |U_n0|^2, subject to sum x_n = 1: a closed-form one-root case, a
//! Lagrange-multiplier Newton solver for general N, a projected-gradient
//! fallback, and a simplex grid search used as the checking oracle.
//!
//! With g_0 eliminated, the objective is
//! F(x) = exp(-sum_{j>=1} x_j |g_j|^2 - |s(x)|^2 / x_0) prod_{j>=1} x_j
//! with s(x) = sum_{j>=1} x_j g_j. Its logarithm is concave on the open
//! simplex (the |s|^2/x_0 term is quadratic-over-linear), so the interior
//! stationary point is unique and all methods must agree on it.

use num_complex::Complex;
use thiserror::Error;

use crate::float::Float;
use crate::rootcore::RootSet;
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("no stationary point after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("grid search supports at most {max} roots, got {degree}")]
    DimensionTooLarge { degree: usize, max: usize },
    #[error("invalid weights: {detail}")]
    InvalidWeights { detail: String },
}

/// First-column weights x_n = |U_n0|^2 on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnWeights<T: Float> {
    x: Vec<T>,
}

impl<T: Float> ColumnWeights<T> {
    /// Requires every weight positive and the total equal to 1 within
    /// [`tol::COLUMN_NORM`].
    pub fn new(x: Vec<T>) -> Result<Self, OptimizeError> {
        if x.is_empty() {
            return Err(OptimizeError::InvalidWeights {
                detail: "empty weight vector".into(),
            });
        }
        if let Some(bad) = x.iter().find(|&&w| w <= T::zero()) {
            return Err(OptimizeError::InvalidWeights {
                detail: format!("non-positive weight {bad}"),
            });
        }
        let total = x.iter().fold(T::zero(), |a, &b| a + b);
        if (total - T::one()).abs().as_f64() > tol::COLUMN_NORM {
            return Err(OptimizeError::InvalidWeights {
                detail: format!("weights sum to {total}"),
            });
        }
        Ok(Self { x })
    }

    /// The uniform point 1/dim, realized by the DFT multiport.
    pub fn uniform(dim: usize) -> Self {
        let w = T::of(1.0 / dim as f64);
        Self {
            x: vec![w; dim],
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeMethod {
    ClosedFormN1,
    Lagrange,
    ProjectedGradient,
    Grid,
}

impl std::fmt::Display for OptimizeMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::ClosedFormN1 => "closed-form-n1",
            Self::Lagrange => "lagrange",
            Self::ProjectedGradient => "projected-gradient",
            Self::Grid => "grid",
        };
        f.write_str(name)
    }
}

/// Outcome of one optimization run. `boundary` marks a supremum pinned at the
/// interior floor rather than a true interior maximum; such runs also report
/// `converged = false`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult<T: Float> {
    pub weights: ColumnWeights<T>,
    pub value: T,
    pub method: OptimizeMethod,
    pub iterations: usize,
    pub converged: bool,
    pub boundary: bool,
}

/// Success metric as a function of the weights, with g_0 eliminated via the
/// first-column balance.
pub fn objective<T: Float>(x: &ColumnWeights<T>, roots: &RootSet<T>) -> T {
    assert_eq!(
        x.dim(),
        roots.degree() + 1,
        "one weight per port 0..N"
    );
    objective_raw(x.as_slice(), &roots.g)
}

/// The same objective on a raw positive vector, without the simplex
/// constraint. Finite-difference stationarity checks perturb points off the
/// simplex and need this form.
pub fn objective_unconstrained<T: Float>(x: &[T], roots: &RootSet<T>) -> T {
    assert_eq!(x.len(), roots.degree() + 1, "one weight per port 0..N");
    objective_raw(x, &roots.g)
}

fn objective_raw<T: Float>(x: &[T], g: &[Complex<T>]) -> T {
    log_objective_raw(x, g).exp()
}

/// ln F, finite for any interior point even where F itself underflows.
fn log_objective_raw<T: Float>(x: &[T], g: &[Complex<T>]) -> T {
    let mut s = Complex::new(T::zero(), T::zero());
    let mut exponent = T::zero();
    let mut log_product = T::zero();
    for (j, &gj) in g.iter().enumerate() {
        let xj = x[j + 1];
        s += gj.scale(xj);
        exponent += xj * gj.norm_sqr();
        log_product += xj.ln();
    }
    log_product - exponent - s.norm_sqr() / x[0]
}

/// Gradient of ln F.
fn log_gradient<T: Float>(x: &[T], g: &[Complex<T>]) -> Vec<T> {
    let n = g.len();
    let mut s = Complex::new(T::zero(), T::zero());
    for (j, &gj) in g.iter().enumerate() {
        s += gj.scale(x[j + 1]);
    }
    let q = s.norm_sqr();
    let mut grad = vec![T::zero(); n + 1];
    grad[0] = q / (x[0] * x[0]);
    let two = T::of(2.0);
    for (j, &gj) in g.iter().enumerate() {
        let coupling = (gj.conj() * s).re;
        grad[j + 1] = x[j + 1].recip() - gj.norm_sqr() - two * coupling / x[0];
    }
    grad
}

/// Hessian of ln F.
fn log_hessian<T: Float>(x: &[T], g: &[Complex<T>]) -> Vec<Vec<T>> {
    let n = g.len();
    let dims = n + 1;
    let mut s = Complex::new(T::zero(), T::zero());
    for (j, &gj) in g.iter().enumerate() {
        s += gj.scale(x[j + 1]);
    }
    let q = s.norm_sqr();
    let two = T::of(2.0);
    let mut hess = vec![vec![T::zero(); dims]; dims];
    hess[0][0] = -two * q / (x[0] * x[0] * x[0]);
    for (j, &gj) in g.iter().enumerate() {
        let coupling = (gj.conj() * s).re;
        hess[0][j + 1] = two * coupling / (x[0] * x[0]);
        hess[j + 1][0] = hess[0][j + 1];
        for (k, &gk) in g.iter().enumerate() {
            hess[j + 1][k + 1] = -two * (gj.conj() * gk).re / x[0];
        }
        hess[j + 1][j + 1] -= (x[j + 1] * x[j + 1]).recip();
    }
    hess
}

/// Gradient of F itself (used for reporting and the finite-difference
/// stationarity checks).
pub fn objective_gradient<T: Float>(x: &ColumnWeights<T>, roots: &RootSet<T>) -> Vec<T> {
    let value = objective_raw(x.as_slice(), &roots.g);
    log_gradient(x.as_slice(), &roots.g)
        .into_iter()
        .map(|gn| gn * value)
        .collect()
}

/// Closed-form single-root case: one-variable maximization of
/// x_1 exp(-|g_1|^2 (x_1 + x_1^2 / x_0)) by golden-section search.
pub fn optimize_n1<T: Float>(g1: Complex<T>) -> OptimizationResult<T> {
    let g = [g1];
    let floor = T::of(tol::WEIGHT_FLOOR);
    let f = |x0: T| log_objective_raw(&[x0, T::one() - x0], &g);
    let inv_phi = T::of(0.618_033_988_749_894_9);
    let mut lo = floor;
    let mut hi = T::one() - floor;
    let mut a = hi - (hi - lo) * inv_phi;
    let mut b = lo + (hi - lo) * inv_phi;
    let mut fa = f(a);
    let mut fb = f(b);
    let mut iterations = 0;
    while hi - lo > T::of(1e-10) {
        iterations += 1;
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - (hi - lo) * inv_phi;
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + (hi - lo) * inv_phi;
            fb = f(b);
        }
    }
    let x0 = (lo + hi) * T::of(0.5);
    let x = vec![x0, T::one() - x0];
    let value = objective_raw(&x, &g);
    let boundary = x.iter().any(|&w| w <= floor * T::of(10.0));
    OptimizationResult {
        weights: ColumnWeights { x },
        value,
        method: OptimizeMethod::ClosedFormN1,
        iterations,
        converged: !boundary,
        boundary,
    }
}

fn clamp_to_floor<T: Float>(x: &mut [T], floor: T) {
    for w in x.iter_mut() {
        if *w < floor {
            *w = floor;
        }
    }
}

/// Damped Newton on the Lagrange stationarity system, solved in log form
/// (identical interior solution, scale-invariant residuals): grad ln F = -mu
/// on each coordinate together with sum x = 1.
pub fn optimize_lagrange<T: Float>(
    roots: &RootSet<T>,
    initial: &ColumnWeights<T>,
) -> Result<OptimizationResult<T>, OptimizeError> {
    let g = &roots.g;
    let dims = g.len() + 1;
    assert_eq!(initial.dim(), dims, "one weight per port 0..N");
    let floor = T::of(tol::WEIGHT_FLOOR);
    let max_iterations = 500;

    let mut x = initial.as_slice().to_vec();
    clamp_to_floor(&mut x, floor);
    let grad0 = log_gradient(&x, g);
    let mut mu = -grad0.iter().fold(T::zero(), |a, &b| a + b) / T::of(dims as f64);

    let residual = |x: &[T], mu: T| -> Vec<T> {
        let mut r: Vec<T> = log_gradient(x, g).into_iter().map(|gn| gn + mu).collect();
        let total = x.iter().fold(T::zero(), |a, &b| a + b);
        r.push(total - T::one());
        r
    };
    let inf_norm = |v: &[T]| v.iter().fold(T::zero(), |a, &b| a.max(b.abs()));

    let mut iterations = 0;
    loop {
        let phi = residual(&x, mu);
        let norm = inf_norm(&phi);
        if norm <= T::of(1e-12) {
            break;
        }
        if iterations >= max_iterations {
            if norm <= T::of(tol::STATIONARITY) {
                break;
            }
            return Err(OptimizeError::NotConverged {
                iterations,
                residual: norm.as_f64(),
            });
        }
        iterations += 1;

        let hess = log_hessian(&x, g);
        let mut jac = vec![vec![T::zero(); dims + 1]; dims + 1];
        for (r, row) in hess.iter().enumerate() {
            jac[r][..dims].copy_from_slice(row);
            jac[r][dims] = T::one();
            jac[dims][r] = T::one();
        }
        let rhs: Vec<T> = phi.iter().map(|&v| -v).collect();
        let Some(delta) = crate::util::solve_dense(jac, rhs) else {
            return Err(OptimizeError::NotConverged {
                iterations,
                residual: norm.as_f64(),
            });
        };

        let mut alpha = T::one();
        let mut accepted = false;
        for _ in 0..=30 {
            let mut trial: Vec<T> = x
                .iter()
                .zip(&delta[..dims])
                .map(|(&w, &d)| w + alpha * d)
                .collect();
            clamp_to_floor(&mut trial, floor);
            let trial_mu = mu + alpha * delta[dims];
            if inf_norm(&residual(&trial, trial_mu)) < norm {
                x = trial;
                mu = trial_mu;
                accepted = true;
                break;
            }
            alpha *= T::of(0.5);
        }
        if !accepted {
            if norm <= T::of(tol::STATIONARITY) {
                break;
            }
            return Err(OptimizeError::NotConverged {
                iterations,
                residual: norm.as_f64(),
            });
        }
    }

    let boundary = x.iter().any(|&w| w <= floor * T::of(10.0));
    let total = x.iter().fold(T::zero(), |a, &b| a + b);
    let x: Vec<T> = x.into_iter().map(|w| w / total).collect();
    let value = objective_raw(&x, g);
    Ok(OptimizationResult {
        weights: ColumnWeights { x },
        value,
        method: OptimizeMethod::Lagrange,
        iterations,
        converged: !boundary,
        boundary,
    })
}

/// Euclidean projection onto { x : sum x = 1, x >= floor }.
fn project_simplex<T: Float>(y: &[T], floor: T) -> Vec<T> {
    let d = y.len();
    let mass = T::one() - floor * T::of(d as f64);
    let shifted: Vec<T> = y.iter().map(|&v| v - floor).collect();
    let mut sorted = shifted.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = T::zero();
    let mut threshold = T::zero();
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - mass) / T::of((k + 1) as f64);
        if v - candidate > T::zero() {
            threshold = candidate;
        }
    }
    shifted
        .into_iter()
        .map(|v| floor + (v - threshold).max(T::zero()))
        .collect()
}

/// Projected-gradient ascent on ln F over the floored simplex; the fallback
/// when the Newton solver fails.
pub fn optimize_projected_gradient<T: Float>(
    roots: &RootSet<T>,
    initial: &ColumnWeights<T>,
) -> OptimizationResult<T> {
    let g = &roots.g;
    let dims = g.len() + 1;
    assert_eq!(initial.dim(), dims, "one weight per port 0..N");
    let floor = T::of(tol::WEIGHT_FLOOR);

    let mut x = initial.as_slice().to_vec();
    clamp_to_floor(&mut x, floor);
    x = project_simplex(&x, floor);
    let mut current = log_objective_raw(&x, g);
    let mut step = T::one();
    let mut iterations = 0;
    for _ in 0..50_000 {
        iterations += 1;
        let grad = log_gradient(&x, g);
        let mut improved = false;
        for _ in 0..60 {
            let trial_point: Vec<T> = x
                .iter()
                .zip(&grad)
                .map(|(&w, &d)| w + step * d)
                .collect();
            let trial = project_simplex(&trial_point, floor);
            let trial_value = log_objective_raw(&trial, g);
            if trial_value > current {
                let moved = x
                    .iter()
                    .zip(&trial)
                    .fold(T::zero(), |a, (&p, &q)| a.max((p - q).abs()));
                x = trial;
                current = trial_value;
                improved = true;
                step *= T::of(1.5);
                if moved < T::of(1e-14) {
                    improved = false;
                }
                break;
            }
            step *= T::of(0.5);
        }
        if !improved {
            break;
        }
    }

    let boundary = x.iter().any(|&w| w <= floor * T::of(10.0));
    // Interior stationarity: all components of grad ln F equal.
    let grad = log_gradient(&x, g);
    let mean = grad.iter().fold(T::zero(), |a, &b| a + b) / T::of(dims as f64);
    let spread = grad
        .iter()
        .fold(T::zero(), |a, &b| a.max((b - mean).abs()));
    let value = objective_raw(&x, g);
    OptimizationResult {
        weights: ColumnWeights { x },
        value,
        method: OptimizeMethod::ProjectedGradient,
        iterations,
        converged: !boundary && spread.as_f64() <= tol::STATIONARITY,
        boundary,
    }
}

/// Exhaustive simplex grid search with local box refinement; the checking
/// oracle for the analytic optimizers. Exponential in N, so capped at N <= 3.
pub fn optimize_grid<T: Float>(
    roots: &RootSet<T>,
    resolution: usize,
) -> Result<OptimizationResult<T>, OptimizeError> {
    const MAX_DEGREE: usize = 3;
    let g = &roots.g;
    let n = g.len();
    if n > MAX_DEGREE {
        return Err(OptimizeError::DimensionTooLarge {
            degree: n,
            max: MAX_DEGREE,
        });
    }
    assert!(resolution >= 2, "grid needs at least two steps per axis");
    let floor = T::of(tol::WEIGHT_FLOOR);
    let mut evaluations = 0usize;
    let mut best_free: Vec<T> = vec![T::of(1.0 / (n + 1) as f64); n];
    let mut best_value = T::neg_infinity();

    let mut evaluate = |free: &[T], best_free: &mut Vec<T>, best_value: &mut T| {
        let total = free.iter().fold(T::zero(), |a, &b| a + b);
        let x0 = T::one() - total;
        if x0 < floor || free.iter().any(|&w| w < floor) {
            return;
        }
        let mut x = Vec::with_capacity(n + 1);
        x.push(x0);
        x.extend_from_slice(free);
        let value = log_objective_raw(&x, g);
        evaluations += 1;
        if value > *best_value {
            *best_value = value;
            *best_free = free.to_vec();
        }
    };

    // Base sweep over the simplex grid.
    let spacing = T::of(1.0 / resolution as f64);
    let mut indices = vec![1usize; n];
    'sweep: loop {
        let free: Vec<T> = indices
            .iter()
            .map(|&i| T::of(i as f64) * spacing)
            .collect();
        evaluate(&free, &mut best_free, &mut best_value);
        let mut axis = 0;
        loop {
            if axis == n {
                break 'sweep;
            }
            indices[axis] += 1;
            if indices[axis] < resolution {
                break;
            }
            indices[axis] = 1;
            axis += 1;
        }
    }

    // Local refinement: shrink a box around the best point.
    let mut width = spacing;
    const POINTS: usize = 13;
    for _ in 0..14 {
        let center = best_free.clone();
        let mut offsets = vec![0usize; n];
        'refine: loop {
            let free: Vec<T> = center
                .iter()
                .zip(&offsets)
                .map(|(&c, &o)| {
                    let frac = T::of(o as f64 / (POINTS - 1) as f64);
                    (c - width + frac * width * T::of(2.0)).max(floor)
                })
                .collect();
            evaluate(&free, &mut best_free, &mut best_value);
            let mut axis = 0;
            loop {
                if axis == n {
                    break 'refine;
                }
                offsets[axis] += 1;
                if offsets[axis] < POINTS {
                    break;
                }
                offsets[axis] = 0;
                axis += 1;
            }
        }
        width *= T::of(0.25);
    }

    let total = best_free.iter().fold(T::zero(), |a, &b| a + b);
    let mut x = Vec::with_capacity(n + 1);
    x.push(T::one() - total);
    x.extend_from_slice(&best_free);
    let value = objective_raw(&x, g);
    let boundary = x.iter().any(|&w| w <= floor * T::of(10.0));
    Ok(OptimizationResult {
        weights: ColumnWeights { x },
        value,
        method: OptimizeMethod::Grid,
        iterations: evaluations,
        converged: !boundary,
        boundary,
    })
}
