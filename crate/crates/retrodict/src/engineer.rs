//! The central pipeline: from a root set and a multiport unitary, derive the
//! port-0 value g_0, the coherent input amplitudes beta_m, the constant kbar,
//! the success metric |kbar|^2, the closed-form engineered state, and the
//! single-coherent-input reduction.

use num_complex::Complex;
use thiserror::Error;

use crate::float::Float;
use crate::multiport::{
    check_unitary, complete_unitary, ColumnSpec, MultiportError, MultiportUnitary,
};
use crate::rootcore::{char_polynomial, expand_roots, find_roots, RootError, RootSet, TargetState};
use crate::tol;
use crate::util::{linear_factor_product, norm_sq, sqrt_factorial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineerError {
    #[error("first-column element {index} has modulus {modulus:.3e}, treated as zero")]
    ZeroFirstColumnElement { index: usize, modulus: f64 },
    #[error("first-column element {index} has modulus {modulus:.3e}, below the plan minimum")]
    FirstColumnBelowMinimum { index: usize, modulus: f64 },
    #[error("root set carries no g0; derive it from the unitary first")]
    MissingG0,
    #[error("beta_0 came out as {magnitude:.3e}; g0 is inconsistent with the first column")]
    Beta0NotZero { magnitude: f64 },
    #[error("column entry {index} has modulus {modulus:.3e}, treated as zero")]
    ZeroColumnEntry { index: usize, modulus: f64 },
    #[error("all roots vanish, so no coherent drive is needed; use the all-vacuum plan")]
    ZeroBeta,
    #[error("unitary dimension {dim} does not match target degree {degree} + 1")]
    DimensionMismatch { dim: usize, degree: usize },
    #[error("a degree-0 target leaves no detector to fire; engineering needs N >= 1")]
    TargetDegreeZero,
    #[error("matrix fails the unitarity check with deviation {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    #[error("engineered state overlaps the target at only {overlap}")]
    FidelityCheckFailed { overlap: f64 },
    #[error("success metric {value:.3e} fell outside (0, 1)")]
    SuccessOutOfRange { value: f64 },
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Multiport(#[from] MultiportError),
}

/// How the coherent inputs are arranged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanMode<T: Float> {
    /// One coherent state per input port 1..N.
    MultiInput,
    /// A single non-vacuum coherent state in port 1, with the given phase;
    /// the second unitary column is adjusted to match.
    SingleInput { phase: T },
}

/// Photocount pattern over the N+1 detectors. The canonical pattern has zero
/// counts at detector 0 and one count everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionPattern {
    counts: Vec<usize>,
}

impl DetectionPattern {
    /// The pattern (0, 1, ..., 1) for a degree-`n` target.
    pub fn canonical(n: usize) -> Self {
        let mut counts = vec![1; n + 1];
        counts[0] = 0;
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_canonical(&self) -> bool {
        self.counts.first() == Some(&0) && self.counts.iter().skip(1).all(|&c| c == 1)
    }
}

/// Complete recipe for generating one target state: the multiport, the
/// coherent amplitudes, the success metric, and the root data they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineeringPlan<T: Float> {
    pub target: TargetState<T>,
    pub unitary: MultiportUnitary<T>,
    /// beta_1..beta_N; beta_0 = 0 is implicit.
    pub betas: Vec<Complex<T>>,
    /// Roots with g0 and k filled in.
    pub roots: RootSet<T>,
    pub kbar: Complex<T>,
    /// |kbar|^2, proportional to the probability of the canonical pattern.
    pub success: T,
    pub mode: PlanMode<T>,
    /// Where the unitary came from ("dft", "optimized", a file hash, ...).
    pub provenance: String,
}

impl<T: Float> EngineeringPlan<T> {
    /// Ratio of |kbar|^2 to |k|^2, the figure of merit quoted per target.
    pub fn success_ratio(&self) -> Option<T> {
        self.roots.k.map(|k| self.success / k.norm_sqr())
    }
}

/// Global-phase-invariant squared overlap |<a|b>|^2 / (<a|a> <b|b>).
///
/// Each vector is rescaled by its largest modulus first, so heavily
/// attenuated states compare without underflow.
pub fn squared_overlap<T: Float>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let peak = |v: &[Complex<T>]| {
        v.iter()
            .map(|z| z.norm())
            .fold(T::zero(), |acc, n| acc.max(n))
    };
    let (pa, pb) = (peak(a), peak(b));
    if pa == T::zero() || pb == T::zero() {
        return T::zero();
    }
    let a: Vec<Complex<T>> = a.iter().map(|z| z.unscale(pa)).collect();
    let b: Vec<Complex<T>> = b.iter().map(|z| z.unscale(pb)).collect();
    crate::util::inner(&a, &b).norm_sqr() / (norm_sq(&a) * norm_sq(&b))
}

fn first_column_moduli_sq<T: Float>(u: &MultiportUnitary<T>) -> Result<Vec<T>, EngineerError> {
    (0..u.dim())
        .map(|n| {
            let modulus = u.get(n, 0).norm();
            if modulus.as_f64() < tol::ZERO_COLUMN_ELEMENT {
                Err(EngineerError::ZeroFirstColumnElement {
                    index: n,
                    modulus: modulus.as_f64(),
                })
            } else {
                Ok(modulus * modulus)
            }
        })
        .collect()
}

/// g_0 = -(1/|U_00|^2) sum_{n>=1} |U_n0|^2 g_n: the value the free port must
/// carry for beta_0 to vanish.
pub fn derive_g0<T: Float>(
    u: &MultiportUnitary<T>,
    roots: &RootSet<T>,
) -> Result<Complex<T>, EngineerError> {
    if u.dim() != roots.degree() + 1 {
        return Err(EngineerError::DimensionMismatch {
            dim: u.dim(),
            degree: roots.degree(),
        });
    }
    let x = first_column_moduli_sq(u)?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for (n, &g) in roots.g.iter().enumerate() {
        acc += g.scale(x[n + 1]);
    }
    Ok(-acc.unscale(x[0]))
}

/// Invert the root relation for the coherent amplitudes:
/// conj(beta_m) = -sum_n U_nm conj(U_n0) g_n. Returns beta_1..beta_N and
/// checks that beta_0 vanishes.
pub fn betas_from_roots<T: Float>(
    u: &MultiportUnitary<T>,
    roots: &RootSet<T>,
) -> Result<Vec<Complex<T>>, EngineerError> {
    let g0 = roots.g0.ok_or(EngineerError::MissingG0)?;
    if u.dim() != roots.degree() + 1 {
        return Err(EngineerError::DimensionMismatch {
            dim: u.dim(),
            degree: roots.degree(),
        });
    }
    first_column_moduli_sq(u)?;
    let dim = u.dim();
    let g_all: Vec<Complex<T>> = std::iter::once(g0).chain(roots.g.iter().copied()).collect();
    let mut betas = Vec::with_capacity(dim);
    for m in 0..dim {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (n, &g) in g_all.iter().enumerate() {
            acc += u.get(n, m) * u.get(n, 0).conj() * g;
        }
        betas.push(-acc.conj());
    }
    let beta0 = betas[0].norm().as_f64();
    if beta0 > tol::BETA0_CONSISTENCY {
        return Err(EngineerError::Beta0NotZero { magnitude: beta0 });
    }
    Ok(betas.split_off(1))
}

/// The inverse map: g_n = -(1/conj(U_n0)) sum_{m>=1} conj(U_nm) conj(beta_m),
/// returned with g_0 computed from the same formula at n = 0.
pub fn roots_from_betas<T: Float>(
    u: &MultiportUnitary<T>,
    betas: &[Complex<T>],
) -> Result<RootSet<T>, EngineerError> {
    let dim = u.dim();
    if betas.len() + 1 != dim {
        return Err(EngineerError::DimensionMismatch {
            dim,
            degree: betas.len(),
        });
    }
    first_column_moduli_sq(u)?;
    let mut g_all = Vec::with_capacity(dim);
    for n in 0..dim {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (m, &beta) in betas.iter().enumerate() {
            acc += u.get(n, m + 1).conj() * beta.conj();
        }
        g_all.push(-acc / u.get(n, 0).conj());
    }
    let g0 = g_all.remove(0);
    Ok(RootSet::new(g_all).with_g0(g0))
}

/// kbar = exp(-1/2 sum |beta_m|^2) prod_{n>=1} conj(U_n0). Unlike the root
/// normalization k, this is not a normalizing constant.
///
/// Panics if `betas.len() + 1 != u.dim()`.
pub fn kbar<T: Float>(u: &MultiportUnitary<T>, betas: &[Complex<T>]) -> Complex<T> {
    assert_eq!(betas.len() + 1, u.dim(), "one beta per port 1..N");
    let half = T::of(0.5);
    let exponent = -half * norm_sq(betas);
    let mut acc = Complex::new(exponent.exp(), T::zero());
    for n in 1..u.dim() {
        acc *= u.get(n, 0).conj();
    }
    acc
}

/// |kbar|^2 in closed form from the first column and the roots:
/// exp(-sum_m |U_m0|^2 |g_m|^2) prod_{n>=1} |U_n0|^2.
pub fn success_metric<T: Float>(
    u: &MultiportUnitary<T>,
    roots: &RootSet<T>,
) -> Result<T, EngineerError> {
    let g0 = roots.g0.ok_or(EngineerError::MissingG0)?;
    if u.dim() != roots.degree() + 1 {
        return Err(EngineerError::DimensionMismatch {
            dim: u.dim(),
            degree: roots.degree(),
        });
    }
    let x = first_column_moduli_sq(u)?;
    let mut exponent = x[0] * g0.norm_sqr();
    let mut product = T::one();
    for (n, &g) in roots.g.iter().enumerate() {
        exponent += x[n + 1] * g.norm_sqr();
        product *= x[n + 1];
    }
    Ok((-exponent).exp() * product)
}

/// Number-state coefficients of the unnormalized engineered state
/// exp(-1/2 sum |beta|^2) prod_{n>=1} (conj(U_n0) a0+ + sum_m conj(U_nm) conj(beta_m)) |0>,
/// expanded by direct multiplication of the linear factors.
///
/// Panics if `betas.len() + 1 != u.dim()`.
pub fn engineered_state<T: Float>(
    u: &MultiportUnitary<T>,
    betas: &[Complex<T>],
) -> Vec<Complex<T>> {
    let dim = u.dim();
    assert_eq!(betas.len() + 1, dim, "one beta per port 1..N");
    let factors: Vec<(Complex<T>, Complex<T>)> = (1..dim)
        .map(|n| {
            let mut offset = Complex::new(T::zero(), T::zero());
            for (m, &beta) in betas.iter().enumerate() {
                offset += u.get(n, m + 1).conj() * beta.conj();
            }
            (u.get(n, 0).conj(), offset)
        })
        .collect();
    let poly = linear_factor_product(&factors);
    let prefactor = (-T::of(0.5) * norm_sq(betas)).exp();
    poly.into_iter()
        .enumerate()
        .map(|(q, coeff)| coeff.scale(prefactor * sqrt_factorial::<T>(q)))
        .collect()
}

/// Reduce a plan to a single non-vacuum coherent input: |beta_1| comes from
/// the first-column weights and the roots, its phase is free, and the second
/// column U_n1 = -conj(g_n) U_n0 / beta_1 restores unitarity.
pub fn single_input_reduction<T: Float>(
    column0: &ColumnSpec<T>,
    roots: &RootSet<T>,
    phase: T,
) -> Result<(Complex<T>, ColumnSpec<T>), EngineerError> {
    let g0 = roots.g0.ok_or(EngineerError::MissingG0)?;
    let dim = column0.entries.len();
    if dim != roots.degree() + 1 {
        return Err(EngineerError::DimensionMismatch {
            dim,
            degree: roots.degree(),
        });
    }
    for (n, entry) in column0.entries.iter().enumerate() {
        if entry.norm().as_f64() < tol::ZERO_COLUMN_ELEMENT {
            return Err(EngineerError::ZeroColumnEntry {
                index: n,
                modulus: entry.norm().as_f64(),
            });
        }
    }
    let g_all: Vec<Complex<T>> = std::iter::once(g0).chain(roots.g.iter().copied()).collect();
    let mut drive = T::zero();
    for (entry, g) in column0.entries.iter().zip(&g_all) {
        drive += entry.norm_sqr() * g.norm_sqr();
    }
    if drive.as_f64() < 1e-14 {
        return Err(EngineerError::ZeroBeta);
    }
    let beta1 = Complex::from_polar(drive.sqrt(), phase);
    let column1: Vec<Complex<T>> = column0
        .entries
        .iter()
        .zip(&g_all)
        .map(|(&u_n0, &g)| -(g.conj() * u_n0) / beta1)
        .collect();
    Ok((beta1, ColumnSpec::new(1, column1)?))
}

/// Build a complete plan for `target` on the multiport `u`.
///
/// Multi-input mode keeps `u` and drives every port; single-input mode keeps
/// only the first column of `u`, fixes the second column for the reduced
/// drive, and fills the rest by orthonormal completion.
pub fn make_plan<T: Float>(
    target: &TargetState<T>,
    u: &MultiportUnitary<T>,
    mode: PlanMode<T>,
) -> Result<EngineeringPlan<T>, EngineerError> {
    let degree = target.degree();
    if degree == 0 {
        return Err(EngineerError::TargetDegreeZero);
    }
    if u.dim() != degree + 1 {
        return Err(EngineerError::DimensionMismatch {
            dim: u.dim(),
            degree,
        });
    }
    let (unitary_ok, deviation) = check_unitary(u, T::of(tol::UNITARITY));
    if !unitary_ok {
        return Err(EngineerError::NotUnitary {
            deviation: deviation.as_f64(),
        });
    }
    for n in 0..u.dim() {
        let modulus = u.get(n, 0).norm().as_f64();
        if modulus < tol::PLAN_MIN_COLUMN {
            return Err(EngineerError::FirstColumnBelowMinimum { index: n, modulus });
        }
    }

    let poly = char_polynomial(target);
    let mut roots = find_roots(&poly)?;
    let (k, _) = expand_roots(&roots, target)?;
    let g0 = derive_g0(u, &roots)?;
    roots.g0 = Some(g0);
    roots.k = Some(k);

    let (unitary, betas) = match mode {
        PlanMode::MultiInput => (u.clone(), betas_from_roots(u, &roots)?),
        PlanMode::SingleInput { phase } => {
            let column0 = ColumnSpec::new(0, u.column(0))?;
            let (beta1, column1) = single_input_reduction(&column0, &roots, phase)?;
            let completed = complete_unitary(&[column0, column1])?;
            let mut betas = vec![Complex::new(T::zero(), T::zero()); degree];
            betas[0] = beta1;
            (completed, betas)
        }
    };

    let kbar_value = kbar(&unitary, &betas);
    let success = kbar_value.norm_sqr();
    if !(success > T::zero() && success < T::one()) {
        return Err(EngineerError::SuccessOutOfRange {
            value: success.as_f64(),
        });
    }
    debug_assert!(
        (success - success_metric(&unitary, &roots)?).abs().as_f64() < 1e-9,
        "closed-form route disagrees with the product route"
    );

    let state = engineered_state(&unitary, &betas);
    let overlap = squared_overlap(&state, target.coeffs());
    if overlap.as_f64() < 1.0 - tol::PLAN_FIDELITY {
        return Err(EngineerError::FidelityCheckFailed {
            overlap: overlap.as_f64(),
        });
    }

    Ok(EngineeringPlan {
        target: target.clone(),
        unitary,
        betas,
        roots,
        kbar: kbar_value,
        success,
        mode,
        provenance: "custom".to_owned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiport::dft_unitary;

    type C64 = Complex<f64>;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn n1_roots() -> RootSet<f64> {
        RootSet::new(vec![c(-1.0, 0.0)])
    }

    fn n2_roots() -> RootSet<f64> {
        let state = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        find_roots(&char_polynomial(&state)).unwrap()
    }

    #[test]
    fn g0_balances_the_first_column() {
        let u = dft_unitary::<f64>(2);
        let g0 = derive_g0(&u, &n1_roots()).unwrap();
        assert!((g0 - c(1.0, 0.0)).norm() < 1e-12);

        let u = dft_unitary::<f64>(3);
        let g0 = derive_g0(&u, &n2_roots()).unwrap();
        assert!((g0 - c(2.0_f64.sqrt(), 0.0)).norm() < 1e-9);

        let zeros = RootSet::new(vec![c(0.0, 0.0)]);
        let u = dft_unitary::<f64>(2);
        assert!(derive_g0(&u, &zeros).unwrap().norm() < 1e-15);
    }

    #[test]
    fn equal_superposition_needs_beta_minus_one() {
        let u = dft_unitary::<f64>(2);
        let roots = n1_roots().with_g0(c(1.0, 0.0));
        let betas = betas_from_roots(&u, &roots).unwrap();
        assert_eq!(betas.len(), 1);
        assert!((betas[0] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn flat_three_level_betas_match_published_values() {
        let u = dft_unitary::<f64>(3);
        let mut roots = n2_roots();
        roots.g0 = Some(derive_g0(&u, &roots).unwrap());
        let betas = betas_from_roots(&u, &roots).unwrap();
        assert!((betas[0].re - -1.259).abs() < 5e-4, "beta1 = {}", betas[0]);
        assert!(betas[0].im.abs() < 1e-9);
        assert!((betas[1].re - -0.155).abs() < 5e-4, "beta2 = {}", betas[1]);
        assert!(betas[1].im.abs() < 1e-9);
    }

    #[test]
    fn all_zero_roots_need_no_drive() {
        let u = dft_unitary::<f64>(4);
        let roots = RootSet::new(vec![c(0.0, 0.0); 3]).with_g0(c(0.0, 0.0));
        let betas = betas_from_roots(&u, &roots).unwrap();
        assert!(betas.iter().all(|b| b.norm() < 1e-15));
    }

    #[test]
    fn inconsistent_g0_is_detected() {
        let u = dft_unitary::<f64>(2);
        let roots = n1_roots().with_g0(c(0.5, 0.0));
        assert!(matches!(
            betas_from_roots(&u, &roots),
            Err(EngineerError::Beta0NotZero { .. })
        ));
    }

    #[test]
    fn beta_root_round_trip() {
        let u = dft_unitary::<f64>(3);
        let mut roots = n2_roots();
        roots.g0 = Some(derive_g0(&u, &roots).unwrap());
        let betas = betas_from_roots(&u, &roots).unwrap();
        let back = roots_from_betas(&u, &betas).unwrap();
        for (a, b) in back.g.iter().zip(&roots.g) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!((back.g0.unwrap() - roots.g0.unwrap()).norm() < 1e-9);

        let u = dft_unitary::<f64>(2);
        let back = roots_from_betas(&u, &[c(-1.0, 0.0)]).unwrap();
        assert!((back.g[0] - c(-1.0, 0.0)).norm() < 1e-12);

        let u = dft_unitary::<f64>(3);
        let back = roots_from_betas(&u, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(back.g.iter().all(|g| g.norm() < 1e-15));
    }

    #[test]
    fn kbar_reproduces_published_success_values() {
        let u = dft_unitary::<f64>(2);
        let kb = kbar(&u, &[c(-1.0, 0.0)]);
        assert!((kb.norm_sqr() - (-1.0_f64).exp() / 2.0).abs() < 1e-12);

        let u = dft_unitary::<f64>(3);
        let mut roots = n2_roots();
        roots.g0 = Some(derive_g0(&u, &roots).unwrap());
        let betas = betas_from_roots(&u, &roots).unwrap();
        let kb = kbar(&u, &betas);
        assert!((kb.norm_sqr() - 0.022).abs() < 5e-4);

        let u = dft_unitary::<f64>(2);
        let kb = kbar(&u, &[c(0.0, 0.0)]);
        assert!((kb.norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn success_metric_agrees_with_kbar_route() {
        let u = dft_unitary::<f64>(2);
        let roots = n1_roots().with_g0(c(1.0, 0.0));
        let s = success_metric(&u, &roots).unwrap();
        assert!((s - 0.184).abs() < 5e-4);
        let kb = kbar(&u, &betas_from_roots(&u, &roots).unwrap());
        assert!((s - kb.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn engineered_state_recovers_targets() {
        let u = dft_unitary::<f64>(2);
        let state = engineered_state(&u, &[c(-1.0, 0.0)]);
        let target = TargetState::<f64>::from_reals(&[1.0, 1.0]).unwrap();
        assert!(squared_overlap(&state, target.coeffs()) > 1.0 - 1e-12);

        let u = dft_unitary::<f64>(3);
        let mut roots = n2_roots();
        roots.g0 = Some(derive_g0(&u, &roots).unwrap());
        let betas = betas_from_roots(&u, &roots).unwrap();
        let state = engineered_state(&u, &betas);
        let target = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        assert!(squared_overlap(&state, target.coeffs()) > 1.0 - 1e-10);

        let u = dft_unitary::<f64>(2);
        let state = engineered_state(&u, &[c(0.0, 0.0)]);
        assert!(state[0].norm() < 1e-15);
        assert!(state[1].norm() > 0.0);
    }

    #[test]
    fn single_input_reduction_matches_published_optimum() {
        let x0: f64 = 0.436;
        let x1: f64 = 0.282;
        let column0 = ColumnSpec::new(
            0,
            vec![c(x0.sqrt(), 0.0), c(x1.sqrt(), 0.0), c(x1.sqrt(), 0.0)],
        )
        .unwrap();
        let mut roots = n2_roots();
        let g0 = {
            let sum = roots.g[0] + roots.g[1];
            -(sum.scale(x1 / x0))
        };
        roots.g0 = Some(g0);
        let (beta1, column1) = single_input_reduction(&column0, &roots, 0.0).unwrap();
        assert!((beta1.norm() - 1.078).abs() < 2e-3);
        assert!((column1.entries[0].norm_sqr() - 0.314).abs() < 2e-3);
        assert!((column1.entries[1].norm_sqr() - 0.343).abs() < 2e-3);
        assert!((column1.entries[2].norm_sqr() - 0.343).abs() < 2e-3);
        // Unit norm and orthogonality to the first column come out of the
        // construction itself.
        assert!((norm_sq(&column1.entries) - 1.0).abs() < 1e-9);
        let dot = crate::util::inner(&column0.entries, &column1.entries);
        assert!(dot.norm() < 1e-9);
    }

    #[test]
    fn single_input_rejects_vanishing_drive() {
        let u = dft_unitary::<f64>(2);
        let column0 = ColumnSpec::new(0, u.column(0)).unwrap();
        let roots = RootSet::new(vec![c(0.0, 0.0)]).with_g0(c(0.0, 0.0));
        assert!(matches!(
            single_input_reduction(&column0, &roots, 0.0),
            Err(EngineerError::ZeroBeta)
        ));
    }

    #[test]
    fn plan_for_equal_superposition() {
        let target = TargetState::<f64>::from_reals(&[1.0, 1.0]).unwrap();
        let u = dft_unitary::<f64>(2);
        let plan = make_plan(&target, &u, PlanMode::MultiInput).unwrap();
        assert!((plan.betas[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((plan.success - 0.184).abs() < 5e-4);
        let ratio = plan.success_ratio().unwrap();
        assert!((ratio - 0.368).abs() < 1e-3);
    }

    #[test]
    fn plan_for_flat_three_level() {
        let target = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        let u = dft_unitary::<f64>(3);
        let plan = make_plan(&target, &u, PlanMode::MultiInput).unwrap();
        assert!((plan.success - 0.022).abs() < 5e-4);
        let ratio = plan.success_ratio().unwrap();
        assert!((ratio - 0.133).abs() < 2e-3);
    }

    #[test]
    fn single_photon_target_is_all_vacuum() {
        let target = TargetState::<f64>::from_reals(&[0.0, 1.0]).unwrap();
        let u = dft_unitary::<f64>(2);
        let plan = make_plan(&target, &u, PlanMode::MultiInput).unwrap();
        assert!(plan.betas[0].norm() < 1e-12);
        assert!((plan.success - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_input_plan_matches_multi_input_performance() {
        let target = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        let u = dft_unitary::<f64>(3);
        let multi = make_plan(&target, &u, PlanMode::MultiInput).unwrap();
        let single = make_plan(&target, &u, PlanMode::SingleInput { phase: 0.4 }).unwrap();
        assert!((multi.success - single.success).abs() < 1e-9);
        let state_multi = engineered_state(&multi.unitary, &multi.betas);
        let state_single = engineered_state(&single.unitary, &single.betas);
        assert!(squared_overlap(&state_multi, &state_single) > 1.0 - 1e-9);
        assert!(single.betas.iter().skip(1).all(|b| b.norm() == 0.0));
    }

    #[test]
    fn degree_zero_target_is_rejected() {
        let target = TargetState::<f64>::from_reals(&[1.0]).unwrap();
        let u = dft_unitary::<f64>(2);
        assert!(matches!(
            make_plan(&target, &u, PlanMode::MultiInput),
            Err(EngineerError::TargetDegreeZero)
        ));
    }

    #[test]
    fn canonical_pattern_shape() {
        let pattern = DetectionPattern::canonical(3);
        assert_eq!(pattern.counts(), &[0, 1, 1, 1]);
        assert_eq!(pattern.total(), 3);
        assert!(pattern.is_canonical());
    }
}
