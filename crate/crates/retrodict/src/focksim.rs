//! Independent brute-force oracle: multimode Fock-space simulation of the
//! multiport with coherent and number-state inputs, permanent-based
//! transition amplitudes, and post-selection on the canonical detection
//! pattern (0, 1, ..., 1).
//!
//! Everything here goes forward in time through the device, so agreement
//! with the closed-form engineered state is a genuine cross-check rather
//! than a restatement.

use std::collections::BTreeMap;

use num_complex::Complex;
use thiserror::Error;

use crate::engineer::DetectionPattern;
use crate::float::Float;
use crate::multiport::MultiportUnitary;
use crate::rootcore::TargetState;
use crate::tol;
use crate::util::sqrt_factorial;

/// Largest matrix the Ryser permanent will accept (2^n terms).
pub const MAX_PERMANENT_DIM: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("permanent of a {dim}x{dim} matrix exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("photon numbers differ: {input} in, {output} out; the device conserves energy")]
    PhotonNumberMismatch { input: usize, output: usize },
    #[error("occupation pattern has {got} modes, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("cutoff {cutoff} is too small: {detail}")]
    CutoffTooSmall { cutoff: usize, detail: String },
}

/// Occupation tuple with colexicographic ordering, the basis order fixed
/// across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occupation(pub Vec<usize>);

impl Ord for Occupation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                std::cmp::Ordering::Equal => continue,
                unequal => return unequal,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for Occupation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Occupation {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// All occupation patterns of `modes` modes with the given photon total, in
/// colexicographic order.
pub fn enumerate_patterns(modes: usize, total: usize) -> Vec<Vec<usize>> {
    if modes == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for last in 0..=total {
        for mut rest in enumerate_patterns(modes - 1, total - last) {
            rest.push(last);
            out.push(rest);
        }
    }
    out
}

/// Multimode photon-number-basis state with a total-photon cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T: Float> {
    modes: usize,
    cutoff: usize,
    amplitudes: BTreeMap<Occupation, Complex<T>>,
}

impl<T: Float> FockVector<T> {
    /// Tensor product of single-mode coefficient lists, keeping only
    /// occupation tuples whose total stays within `cutoff`.
    pub fn product_state(mode_lists: &[Vec<Complex<T>>], cutoff: usize) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(Occupation(Vec::new()), Complex::new(T::one(), T::zero()));
        for list in mode_lists {
            let mut next = BTreeMap::new();
            for (occ, amp) in &amplitudes {
                let used = occ.total();
                for (n, &coeff) in list.iter().enumerate() {
                    if used + n > cutoff {
                        break;
                    }
                    if coeff.norm() == T::zero() {
                        continue;
                    }
                    let mut tuple = occ.0.clone();
                    tuple.push(n);
                    next.insert(Occupation(tuple), amp * coeff);
                }
            }
            amplitudes = next;
        }
        Self {
            modes: mode_lists.len(),
            cutoff,
            amplitudes,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn norm_sq(&self) -> T {
        self.amplitudes
            .values()
            .fold(T::zero(), |a, z| a + z.norm_sqr())
    }

    /// Norm lost to the cutoff, assuming the untruncated state is normalized.
    pub fn deficit(&self) -> T {
        (T::one() - self.norm_sq()).max(T::zero())
    }

    /// Amplitudes in the fixed-total sector, in colexicographic order.
    pub fn sector(&self, total: usize) -> impl Iterator<Item = (&Occupation, &Complex<T>)> {
        self.amplitudes
            .iter()
            .filter(move |(occ, _)| occ.total() == total)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex<T>)> {
        self.amplitudes.iter()
    }
}

/// How much a reported amplitude can be off given the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport<T: Float> {
    pub cutoff: usize,
    pub norm_deficit: T,
    pub amplitude_error_bound: T,
}

impl<T: Float> TruncationReport<T> {
    fn from_deficit(cutoff: usize, deficit: T) -> Self {
        let deficit = deficit.max(T::zero());
        Self {
            cutoff,
            norm_deficit: deficit,
            amplitude_error_bound: deficit.sqrt(),
        }
    }
}

/// Permanent by the Ryser formula with Gray-code subset updates, O(2^n n).
/// The permanent of the empty matrix is 1.
pub fn permanent<T: Float>(entries: &[Complex<T>], dim: usize) -> Result<Complex<T>, FockError> {
    if dim > MAX_PERMANENT_DIM {
        return Err(FockError::DimensionTooLarge {
            dim,
            max: MAX_PERMANENT_DIM,
        });
    }
    assert_eq!(entries.len(), dim * dim, "row-major square matrix expected");
    if dim == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut row_sums = vec![zero; dim];
    let mut total = zero;
    let mut gray: u64 = 0;
    for k in 1u64..(1 << dim) {
        let next_gray = k ^ (k >> 1);
        let changed = (gray ^ next_gray).trailing_zeros() as usize;
        if next_gray & (1 << changed) != 0 {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum += entries[i * dim + changed];
            }
        } else {
            for (i, sum) in row_sums.iter_mut().enumerate() {
                *sum -= entries[i * dim + changed];
            }
        }
        gray = next_gray;
        let product = row_sums.iter().fold(Complex::new(T::one(), T::zero()), |a, &b| a * b);
        if gray.count_ones().is_multiple_of(2) {
            total += product;
        } else {
            total -= product;
        }
    }
    if dim.is_multiple_of(2) {
        Ok(total)
    } else {
        Ok(-total)
    }
}

/// Transition amplitude <out| R |in> for number states through the multiport:
/// the permanent of the row/column-repeated submatrix of U over
/// sqrt(prod in_i! prod out_j!). Rows repeat with the output multiplicities,
/// columns with the input multiplicities.
pub fn fock_amplitude<T: Float>(
    u: &MultiportUnitary<T>,
    input: &[usize],
    output: &[usize],
) -> Result<Complex<T>, FockError> {
    let dim = u.dim();
    if input.len() != dim {
        return Err(FockError::ShapeMismatch {
            expected: dim,
            got: input.len(),
        });
    }
    if output.len() != dim {
        return Err(FockError::ShapeMismatch {
            expected: dim,
            got: output.len(),
        });
    }
    let photons_in: usize = input.iter().sum();
    let photons_out: usize = output.iter().sum();
    if photons_in != photons_out {
        return Err(FockError::PhotonNumberMismatch {
            input: photons_in,
            output: photons_out,
        });
    }
    let size = photons_in;
    let rows: Vec<usize> = output
        .iter()
        .enumerate()
        .flat_map(|(mode, &count)| std::iter::repeat_n(mode, count))
        .collect();
    let cols: Vec<usize> = input
        .iter()
        .enumerate()
        .flat_map(|(mode, &count)| std::iter::repeat_n(mode, count))
        .collect();
    let mut sub = Vec::with_capacity(size * size);
    for &r in &rows {
        for &c in &cols {
            sub.push(u.get(r, c));
        }
    }
    let perm = permanent(&sub, size)?;
    let mut scale = T::one();
    for &n in input.iter().chain(output) {
        scale *= sqrt_factorial::<T>(n);
    }
    Ok(perm.unscale(scale))
}

/// Photon-number coefficients of the coherent state |beta>, truncated at
/// `cutoff`: exp(-|beta|^2/2) beta^n / sqrt(n!).
pub fn coherent_fock<T: Float>(
    beta: Complex<T>,
    cutoff: usize,
) -> (Vec<Complex<T>>, TruncationReport<T>) {
    let prefactor = (-beta.norm_sqr() * T::of(0.5)).exp();
    let mut coeffs = Vec::with_capacity(cutoff + 1);
    let mut current = Complex::new(prefactor, T::zero());
    coeffs.push(current);
    for n in 1..=cutoff {
        current *= beta.unscale(T::of(n as f64).sqrt());
        coeffs.push(current);
    }
    let kept = coeffs.iter().fold(T::zero(), |a, c| a + c.norm_sqr());
    (
        coeffs,
        TruncationReport::from_deficit(cutoff, T::one() - kept),
    )
}

/// Smallest cutoff whose joint Poisson tail is below [`tol::COHERENT_TAIL`],
/// never below `floor`. The joint photon total of independent coherent modes
/// is Poisson with intensity sum |beta_m|^2, which dominates every per-mode
/// tail, so one bound covers the truncation deficit of the whole product.
pub fn recommended_cutoff<T: Float>(betas: &[Complex<T>], floor: usize) -> usize {
    let lambda: f64 = betas.iter().map(|b| b.norm_sqr().as_f64()).sum();
    if lambda == 0.0 {
        return floor;
    }
    let mut term = (-lambda).exp();
    let mut cdf = term;
    let mut n = 0usize;
    while 1.0 - cdf > tol::COHERENT_TAIL && n < floor + 600 {
        n += 1;
        term *= lambda / n as f64;
        cdf += term;
    }
    floor.max(n)
}

/// Total norm deficit of the truncated product of the given single-mode
/// lists under a joint photon cutoff, via convolution of the per-mode weight
/// distributions.
fn product_norm_deficit<T: Float>(mode_lists: &[Vec<Complex<T>>], cutoff: usize) -> T {
    let mut weights = vec![T::one()];
    for list in mode_lists {
        let mode_weights: Vec<T> = list.iter().map(|c| c.norm_sqr()).collect();
        let mut next = vec![T::zero(); cutoff + 1];
        for (total, &w) in weights.iter().enumerate() {
            for (n, &mw) in mode_weights.iter().enumerate() {
                if total + n > cutoff {
                    break;
                }
                next[total + n] += w * mw;
            }
        }
        weights = next;
    }
    let kept = weights.iter().fold(T::zero(), |a, &b| a + b);
    (T::one() - kept).max(T::zero())
}

/// Forward-simulated coefficients of the engineered state: for each q, the
/// conjugate of the amplitude for the canonical pattern given |q> in port 0
/// and the coherent states in ports 1..N.
///
/// Entries for q > N vanish because the canonical pattern carries exactly N
/// photons.
pub fn retrodictive_state_oracle<T: Float>(
    u: &MultiportUnitary<T>,
    betas: &[Complex<T>],
    q_max: usize,
    cutoff: usize,
) -> Result<(Vec<Complex<T>>, TruncationReport<T>), FockError> {
    let dim = u.dim();
    let n = dim - 1;
    if betas.len() != n {
        return Err(FockError::ShapeMismatch {
            expected: n,
            got: betas.len(),
        });
    }
    if cutoff < n + q_max {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            detail: format!("need at least N + q_max = {}", n + q_max),
        });
    }
    let coherent_lists: Vec<Vec<Complex<T>>> = betas
        .iter()
        .map(|&beta| coherent_fock(beta, cutoff).0)
        .collect();
    let deficit = product_norm_deficit(&coherent_lists, cutoff);
    if deficit.as_f64() > tol::ORACLE_DEFICIT {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            detail: format!("truncation deficit {:.3e}", deficit.as_f64()),
        });
    }
    let report = TruncationReport::from_deficit(cutoff, deficit);

    let pattern = DetectionPattern::canonical(n);
    let canonical = pattern.counts();
    let zero = Complex::new(T::zero(), T::zero());
    let mut coefficients = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        if q > n {
            coefficients.push(zero);
            continue;
        }
        // Joint input |q>_0 (x) |beta_1> ... |beta_N>, restricted to the only
        // photon-number sector that can reach the canonical pattern.
        let mut port0 = vec![zero; q + 1];
        port0[q] = Complex::new(T::one(), T::zero());
        let mut lists = Vec::with_capacity(dim);
        lists.push(port0);
        for list in &coherent_lists {
            lists.push(list[..=(n - q).min(list.len() - 1)].to_vec());
        }
        let input = FockVector::product_state(&lists, n);
        let mut amplitude = zero;
        for (occ, &amp) in input.sector(n) {
            amplitude += amp * fock_amplitude(u, &occ.0, canonical)?;
        }
        coefficients.push(amplitude.conj());
    }
    Ok((coefficients, report))
}

/// Probability of the canonical click pattern for an arbitrary probe state in
/// port 0: |sum_q c_q A_q|^2, the squared projection of the probe onto the
/// unnormalized engineered state.
pub fn detection_probability<T: Float>(
    u: &MultiportUnitary<T>,
    betas: &[Complex<T>],
    probe: &TargetState<T>,
    cutoff: usize,
) -> Result<T, FockError> {
    let n = u.dim() - 1;
    if cutoff < probe.degree() + n {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            detail: format!("need at least probe degree + N = {}", probe.degree() + n),
        });
    }
    let (coefficients, _) = retrodictive_state_oracle(u, betas, probe.degree(), cutoff)?;
    let amplitude = probe
        .coeffs()
        .iter()
        .zip(&coefficients)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (&c, &psi)| {
            acc + psi.conj() * c
        });
    Ok(amplitude.norm_sqr())
}
