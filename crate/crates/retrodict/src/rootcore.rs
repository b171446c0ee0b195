//! Conversion between the number-state form of a target state and its
//! factorized root form: polynomial construction, root finding, and
//! re-expansion.
//!
//! A target sum_n c_n |n> corresponds to the polynomial sum_n p_n x^n with
//! p_n = c_n / sqrt(n!); its roots g_1..g_N are exactly the factor offsets in
//! k prod_n (a+ - g_n) |0>. Roots are found as eigenvalues of the balanced
//! companion matrix (shifted complex QR iteration) followed by one Newton
//! polishing step per root.

use num_complex::Complex;
use thiserror::Error;

use crate::float::Float;
use crate::tol;
use crate::util::{linear_factor_product, sqrt_factorial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("coefficient list is empty")]
    EmptyCoefficients,
    #[error("coefficient vector has zero norm")]
    ZeroNorm,
    #[error("leading coefficient is zero; restate the target at a lower degree")]
    ZeroLeadingCoefficient,
    #[error("leading polynomial coefficient {magnitude:.3e} is degenerate; reduce the degree")]
    DegenerateLeadingCoefficient { magnitude: f64 },
    #[error("{roots} roots cannot reconstruct a degree-{degree} target")]
    MismatchedDegree { roots: usize, degree: usize },
    #[error("eigenvalue iteration did not converge")]
    EigenNotConverged,
    #[error("root residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
}

/// Normalized photon-number coefficients c_0..c_N of the state to engineer.
///
/// The last coefficient is required to be nonzero so the degree N is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState<T: Float> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Float> TargetState<T> {
    /// Build a target from (possibly unnormalized) coefficients.
    ///
    /// Normalizes on construction; rejects an empty list, a zero vector and a
    /// vanishing leading coefficient.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self, RootError> {
        if coeffs.is_empty() {
            return Err(RootError::EmptyCoefficients);
        }
        let norm = crate::util::norm_sq(&coeffs).sqrt();
        if norm < T::of(1e-150) {
            return Err(RootError::ZeroNorm);
        }
        if coeffs.last().unwrap().norm() == T::zero() {
            return Err(RootError::ZeroLeadingCoefficient);
        }
        let inv = norm.recip();
        let coeffs = coeffs.into_iter().map(|c| c.scale(inv)).collect();
        Ok(Self { coeffs })
    }

    /// Convenience constructor from real amplitudes.
    pub fn from_reals(amplitudes: &[f64]) -> Result<Self, RootError> {
        Self::new(
            amplitudes
                .iter()
                .map(|&a| Complex::new(T::of(a), T::zero()))
                .collect(),
        )
    }

    /// Truncation degree N (the highest occupied photon number).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }
}

/// Monomial coefficients p_n = c_n / sqrt(n!) of the characteristic
/// polynomial whose roots factorize the target.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPolynomial<T: Float> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Float> CharPolynomial<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }
}

/// The factorized form of a target: roots g_1..g_N, the derived port-0 value
/// g_0 (filled in by the engineering step), and the normalization constant k.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<T: Float> {
    pub g: Vec<Complex<T>>,
    pub g0: Option<Complex<T>>,
    pub k: Option<Complex<T>>,
}

impl<T: Float> RootSet<T> {
    pub fn new(g: Vec<Complex<T>>) -> Self {
        Self { g, g0: None, k: None }
    }

    pub fn with_g0(mut self, g0: Complex<T>) -> Self {
        self.g0 = Some(g0);
        self
    }

    pub fn with_k(mut self, k: Complex<T>) -> Self {
        self.k = Some(k);
        self
    }

    /// Number of roots, equal to the target degree N.
    pub fn degree(&self) -> usize {
        self.g.len()
    }
}

/// Monomial coefficients of the characteristic polynomial, p_n = c_n/sqrt(n!).
pub fn char_polynomial<T: Float>(state: &TargetState<T>) -> CharPolynomial<T> {
    let coeffs = state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, &c)| c.scale(sqrt_factorial::<T>(n).recip()))
        .collect();
    CharPolynomial { coeffs }
}

/// All N roots of the characteristic polynomial, with multiplicity, sorted by
/// real part then imaginary part.
///
/// `g0` and `k` are left unset; the engineering step fills them in.
pub fn find_roots<T: Float>(poly: &CharPolynomial<T>) -> Result<RootSet<T>, RootError> {
    let p = poly.coeffs();
    let lead = p.last().expect("polynomial has at least one coefficient");
    if lead.norm().as_f64() < tol::DEGENERATE_LEADING {
        return Err(RootError::DegenerateLeadingCoefficient {
            magnitude: lead.norm().as_f64(),
        });
    }
    let degree = poly.degree();
    if degree == 0 {
        return Ok(RootSet::new(Vec::new()));
    }

    // Work on a copy scaled so the largest coefficient has unit modulus; the
    // multiplicity and residual thresholds below are then absolute.
    let scale = p
        .iter()
        .map(|c| c.norm())
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let scaled: Vec<Complex<T>> = p.iter().map(|c| c.scale(scale.recip())).collect();

    let monic: Vec<Complex<T>> = scaled[..degree]
        .iter()
        .map(|&c| c / scaled[degree])
        .collect();
    let raw = companion_eigenvalues(&monic)?;

    // One Newton step per root; a tiny derivative signals multiplicity >= 2
    // and relaxes the residual bound for that root.
    let mut roots = Vec::with_capacity(degree);
    let mut tolerances = Vec::with_capacity(degree);
    for z in raw {
        let (value, deriv) = eval_with_derivative(&scaled, z);
        if deriv.norm().as_f64() < tol::MULTIPLE_ROOT_DERIVATIVE {
            roots.push(z);
            tolerances.push(tol::ROOT_RESIDUAL_MULTIPLE);
            continue;
        }
        let polished = z - value / deriv;
        let (polished_value, _) = eval_with_derivative(&scaled, polished);
        if polished_value.norm() <= value.norm() {
            roots.push(polished);
        } else {
            roots.push(z);
        }
        tolerances.push(tol::ROOT_RESIDUAL);
    }

    for (&z, &tolerance) in roots.iter().zip(&tolerances) {
        let (value, _) = eval_with_derivative(&scaled, z);
        let residual = value.norm().as_f64();
        if residual > tolerance {
            return Err(RootError::ResidualTooLarge { residual, tolerance });
        }
    }

    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(RootSet::new(roots))
}

/// Re-expand k prod_n (x - g_n) and report the normalization k together with
/// the reconstructed number-state coefficients.
///
/// The expansion is monic, so k equals the target's leading monomial
/// coefficient c_N / sqrt(N!).
pub fn expand_roots<T: Float>(
    roots: &RootSet<T>,
    target: &TargetState<T>,
) -> Result<(Complex<T>, Vec<Complex<T>>), RootError> {
    let degree = target.degree();
    if roots.g.len() != degree {
        return Err(RootError::MismatchedDegree {
            roots: roots.g.len(),
            degree,
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let factors: Vec<(Complex<T>, Complex<T>)> = roots.g.iter().map(|&g| (one, -g)).collect();
    let monic = linear_factor_product(&factors);
    let k = *target.coeffs().last().unwrap() * sqrt_factorial::<T>(degree).recip();
    let reconstructed = monic
        .iter()
        .enumerate()
        .map(|(n, &e)| k * e * sqrt_factorial::<T>(n))
        .collect();
    Ok((k, reconstructed))
}

/// Evaluate the polynomial and its derivative at `z` by Horner's scheme.
fn eval_with_derivative<T: Float>(
    coeffs: &[Complex<T>],
    z: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let mut value = zero;
    let mut deriv = zero;
    for &c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
    }
    (value, deriv)
}

/// Eigenvalues of the companion matrix of x^n + a_{n-1} x^{n-1} + ... + a_0,
/// where `monic` holds a_0..a_{n-1}.
fn companion_eigenvalues<T: Float>(monic: &[Complex<T>]) -> Result<Vec<Complex<T>>, RootError> {
    let n = monic.len();
    let zero = Complex::new(T::zero(), T::zero());
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-monic[0]]),
        2 => return Ok(quadratic_roots(monic[1], monic[0]).to_vec()),
        _ => {}
    }
    // Upper-Hessenberg companion form: coefficients across the first row,
    // ones on the subdiagonal.
    let mut h = vec![vec![zero; n]; n];
    for j in 0..n {
        h[0][j] = -monic[n - 1 - j];
    }
    for i in 1..n {
        h[i][i - 1] = Complex::new(T::one(), T::zero());
    }
    balance(&mut h);
    hessenberg_eigenvalues(h)
}

/// Roots of x^2 + b x + c via the cancellation-safe quadratic formula.
fn quadratic_roots<T: Float>(b: Complex<T>, c: Complex<T>) -> [Complex<T>; 2] {
    let four = Complex::new(T::of(4.0), T::zero());
    let two = T::of(2.0);
    let r = (b * b - four * c).sqrt();
    let q = if (b + r).norm() >= (b - r).norm() {
        -(b + r).unscale(two)
    } else {
        -(b - r).unscale(two)
    };
    if q.norm() == T::zero() {
        [q, q]
    } else {
        [q, c / q]
    }
}

/// Parlett-Reinsch balancing by diagonal similarity with radix-2 scaling.
#[allow(clippy::needless_range_loop)]
fn balance<T: Float>(h: &mut [Vec<Complex<T>>]) {
    let n = h.len();
    let radix = T::of(2.0);
    let radix_sq = T::of(4.0);
    loop {
        let mut done = true;
        for i in 0..n {
            let mut row = T::zero();
            let mut col = T::zero();
            for j in 0..n {
                if j != i {
                    row += h[i][j].norm();
                    col += h[j][i].norm();
                }
            }
            if row == T::zero() || col == T::zero() {
                continue;
            }
            let total = col + row;
            let mut factor = T::one();
            let mut guard = row / radix;
            while col < guard {
                factor *= radix;
                col *= radix_sq;
            }
            guard = row * radix;
            while col > guard {
                factor /= radix;
                col /= radix_sq;
            }
            if (col + row) / factor < T::of(0.95) * total && factor != T::one() {
                done = false;
                let inv = factor.recip();
                for j in 0..n {
                    h[i][j] = h[i][j].scale(inv);
                }
                for item in h.iter_mut() {
                    item[i] = item[i].scale(factor);
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Complex Givens rotation taking (f, g) to (r, 0):
/// [c, s; -conj(s), c] with real c.
fn givens<T: Float>(f: Complex<T>, g: Complex<T>) -> (T, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    if g.norm() == T::zero() {
        return (T::one(), zero);
    }
    if f.norm() == T::zero() {
        return (T::zero(), g.conj().unscale(g.norm()));
    }
    let fn_ = f.norm();
    let d = (fn_ * fn_ + g.norm_sqr()).sqrt();
    let c = fn_ / d;
    let s = f.unscale(fn_) * g.conj().unscale(d);
    (c, s)
}

/// Eigenvalues of an upper-Hessenberg matrix by explicit-shift complex QR
/// iteration with Wilkinson shifts and deflation.
#[allow(clippy::needless_range_loop)]
fn hessenberg_eigenvalues<T: Float>(
    mut h: Vec<Vec<Complex<T>>>,
) -> Result<Vec<Complex<T>>, RootError> {
    let n = h.len();
    let eps = T::epsilon();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut iters_since_deflation = 0usize;
    let max_iters = 60usize;

    while hi > 0 {
        // Scan upward for a negligible subdiagonal entry.
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let s = if s == T::zero() { T::one() } else { s };
            if h[lo][lo - 1].norm() <= eps * s {
                h[lo][lo - 1] = Complex::new(T::zero(), T::zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[hi - 1][hi - 1]);
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        if lo == hi - 2 {
            let a = h[hi - 2][hi - 2];
            let b = h[hi - 2][hi - 1];
            let c = h[hi - 1][hi - 2];
            let d = h[hi - 1][hi - 1];
            let pair = quadratic_roots(-(a + d), a * d - b * c);
            eigs.push(pair[0]);
            eigs.push(pair[1]);
            hi -= 2;
            iters_since_deflation = 0;
            continue;
        }

        iters_since_deflation += 1;
        if iters_since_deflation > max_iters {
            return Err(RootError::EigenNotConverged);
        }
        let shift = if iters_since_deflation.is_multiple_of(13) {
            // Exceptional shift to break symmetric stalls.
            h[hi - 1][hi - 1]
                + Complex::new(T::of(0.75) * h[hi - 1][hi - 2].norm(), T::zero())
        } else {
            wilkinson_shift(
                h[hi - 2][hi - 2],
                h[hi - 2][hi - 1],
                h[hi - 1][hi - 2],
                h[hi - 1][hi - 1],
            )
        };

        for i in lo..hi {
            h[i][i] -= shift;
        }
        // QR factorization of the shifted block by Givens rotations...
        let mut rotations = Vec::with_capacity(hi - lo - 1);
        for i in lo..hi - 1 {
            let (c, s) = givens(h[i][i], h[i + 1][i]);
            for j in i..hi {
                let a = h[i][j];
                let b = h[i + 1][j];
                h[i][j] = a.scale(c) + s * b;
                h[i + 1][j] = b.scale(c) - s.conj() * a;
            }
            rotations.push((c, s));
        }
        // ...then RQ restores Hessenberg form.
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let i = lo + offset;
            for row in h.iter_mut().take(i + 2).skip(lo) {
                let a = row[i];
                let b = row[i + 1];
                row[i] = a.scale(c) + b * s.conj();
                row[i + 1] = b.scale(c) - a * s;
            }
        }
        for i in lo..hi {
            h[i][i] += shift;
        }
    }
    Ok(eigs)
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson_shift<T: Float>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let two = T::of(2.0);
    let half_diff = (a - d).unscale(two);
    let r = (half_diff * half_diff + b * c).sqrt();
    let mid = (a + d).unscale(two);
    let first = mid + r;
    let second = mid - r;
    if (first - d).norm() <= (second - d).norm() {
        first
    } else {
        second
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C64 = Complex<f64>;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn char_polynomial_divides_by_sqrt_factorials() {
        let state = TargetState::<f64>::from_reals(&[1.0, 1.0]).unwrap();
        let poly = char_polynomial(&state);
        let r = 0.5_f64.sqrt();
        assert!((poly.coeffs()[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((poly.coeffs()[1] - c(r, 0.0)).norm() < 1e-15);

        let state = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        let poly = char_polynomial(&state);
        let third = (1.0 / 3.0_f64).sqrt();
        let sixth = (1.0 / 6.0_f64).sqrt();
        assert!((poly.coeffs()[0] - c(third, 0.0)).norm() < 1e-15);
        assert!((poly.coeffs()[1] - c(third, 0.0)).norm() < 1e-15);
        assert!((poly.coeffs()[2] - c(sixth, 0.0)).norm() < 1e-15);

        let state = TargetState::<f64>::from_reals(&[0.0, 1.0]).unwrap();
        let poly = char_polynomial(&state);
        assert!(poly.coeffs()[0].norm() < 1e-15);
        assert!((poly.coeffs()[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn equal_superposition_root_is_minus_one() {
        let state = TargetState::<f64>::from_reals(&[1.0, 1.0]).unwrap();
        let roots = find_roots(&char_polynomial(&state)).unwrap();
        assert_eq!(roots.g.len(), 1);
        assert!((roots.g[0] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn flat_three_level_roots_are_the_conjugate_pair() {
        let state = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        let roots = find_roots(&char_polynomial(&state)).unwrap();
        let re = -0.5_f64.sqrt();
        let im = (2.0_f64.sqrt() - 0.5).sqrt();
        assert_eq!(roots.g.len(), 2);
        assert!((roots.g[0] - c(re, -im)).norm() < 1e-9);
        assert!((roots.g[1] - c(re, im)).norm() < 1e-9);
    }

    #[test]
    fn single_photon_root_is_zero() {
        let state = TargetState::<f64>::from_reals(&[0.0, 1.0]).unwrap();
        let roots = find_roots(&char_polynomial(&state)).unwrap();
        assert_eq!(roots.g.len(), 1);
        assert!(roots.g[0].norm() < 1e-15);
    }

    #[test]
    fn expansion_reports_normalization_constant() {
        let state = TargetState::<f64>::from_reals(&[1.0, 1.0]).unwrap();
        let roots = RootSet::new(vec![c(-1.0, 0.0)]);
        let (k, recon) = expand_roots(&roots, &state).unwrap();
        assert!((k.norm_sqr() - 0.5).abs() < 1e-12);
        for (a, b) in recon.iter().zip(state.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }

        let state = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        let roots = find_roots(&char_polynomial(&state)).unwrap();
        let (k, recon) = expand_roots(&roots, &state).unwrap();
        assert!((k.norm_sqr() - 1.0 / 6.0).abs() < 1e-12);
        for (a, b) in recon.iter().zip(state.coeffs()) {
            assert!((a - b).norm() < 1e-9);
        }

        let state = TargetState::<f64>::from_reals(&[0.0, 1.0]).unwrap();
        let roots = RootSet::new(vec![c(0.0, 0.0)]);
        let (k, recon) = expand_roots(&roots, &state).unwrap();
        assert!((k - c(1.0, 0.0)).norm() < 1e-15);
        assert!(recon[0].norm() < 1e-15);
        assert!((recon[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mismatched_root_count_is_rejected() {
        let state = TargetState::<f64>::from_reals(&[1.0, 1.0, 1.0]).unwrap();
        let roots = RootSet::new(vec![c(-1.0, 0.0)]);
        assert!(matches!(
            expand_roots(&roots, &state),
            Err(RootError::MismatchedDegree { roots: 1, degree: 2 })
        ));
    }

    #[test]
    fn zero_leading_coefficient_is_rejected() {
        assert!(matches!(
            TargetState::<f64>::from_reals(&[1.0, 0.0]),
            Err(RootError::ZeroLeadingCoefficient)
        ));
    }

    #[test]
    fn degenerate_leading_monomial_is_rejected() {
        let poly = CharPolynomial {
            coeffs: vec![c(1.0, 0.0), c(1e-15, 0.0)],
        };
        assert!(matches!(
            find_roots(&poly),
            Err(RootError::DegenerateLeadingCoefficient { .. })
        ));
    }

    #[test]
    fn double_root_is_returned_twice() {
        // Coefficients of (a+ - 1)^2 |0>: c_n = sqrt(n!) * monomial of (x-1)^2.
        let state =
            TargetState::<f64>::new(vec![c(1.0, 0.0), c(-2.0, 0.0), c(2.0_f64.sqrt(), 0.0)])
                .unwrap();
        let roots = find_roots(&char_polynomial(&state)).unwrap();
        assert_eq!(roots.g.len(), 2);
        assert!((roots.g[0] - c(1.0, 0.0)).norm() < 1e-5);
        assert!((roots.g[1] - c(1.0, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn moderate_degree_round_trip() {
        let coeffs = vec![
            c(0.21, -0.44),
            c(-0.83, 0.12),
            c(0.05, 0.91),
            c(-0.37, -0.20),
            c(0.66, 0.31),
            c(0.18, -0.72),
            c(0.47, 0.09),
        ];
        let state = TargetState::new(coeffs).unwrap();
        let roots = find_roots(&char_polynomial(&state)).unwrap();
        assert_eq!(roots.g.len(), 6);
        let (_, recon) = expand_roots(&roots, &state).unwrap();
        for (a, b) in recon.iter().zip(state.coeffs()) {
            assert!((a - b).norm() < 1e-10, "mismatch {a} vs {b}");
        }
    }

    #[test]
    fn nilpotent_companion_converges() {
        // Pure |4>: every root is zero and the companion matrix is the shift
        // matrix, where unshifted QR stalls until an exceptional shift kicks.
        let state = TargetState::<f64>::from_reals(&[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let roots = find_roots(&char_polynomial(&state)).unwrap();
        assert_eq!(roots.g.len(), 4);
        for g in &roots.g {
            assert!(g.norm() < 1e-5, "root {g} should vanish");
        }
    }
}
