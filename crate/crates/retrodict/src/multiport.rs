//! Construction, validation, and completion of the (N+1)x(N+1) unitary
//! matrices describing the lossless multiport device.
//!
//! Convention, fixed across the whole crate: row index = output mode, column
//! index = input mode, and the device transform places conjugated elements on
//! creation operators. The end-to-end oracle test pins this convention down.

use num_complex::Complex;
use rand::Rng;
use thiserror::Error;

use crate::float::Float;
use crate::tol;
use crate::util::{inner, norm_sq, standard_normal_pair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiportError {
    #[error("matrix entries ({got}) do not fill a {dim}x{dim} matrix")]
    BadShape { dim: usize, got: usize },
    #[error("column norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },
    #[error("fixed columns are not mutually orthonormal (max deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },
    #[error("column index {index} is out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("column index {index} was specified twice")]
    DuplicateIndex { index: usize },
    #[error("orthonormal completion ran out of independent basis vectors")]
    CompletionFailed,
}

/// Unitary matrix of the multiport, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiportUnitary<T: Float> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Float> MultiportUnitary<T> {
    /// Wrap row-major entries. Only the shape is validated here; use
    /// [`check_unitary`] to test unitarity.
    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self, MultiportError> {
        if entries.len() != dim * dim {
            return Err(MultiportError::BadShape {
                dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let entries = (0..dim * dim)
            .map(|idx| f(idx / dim, idx % dim))
            .collect();
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |n, m| {
            if n == m {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Element U_nm with n the output mode and m the input mode.
    pub fn get(&self, n: usize, m: usize) -> Complex<T> {
        self.entries[n * self.dim + m]
    }

    pub fn column(&self, m: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|n| self.get(n, m)).collect()
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }
}

/// One fully specified column of a multiport unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec<T: Float> {
    pub index: usize,
    pub entries: Vec<Complex<T>>,
}

impl<T: Float> ColumnSpec<T> {
    /// Requires the entries to be unit-norm within [`tol::COLUMN_NORM`].
    pub fn new(index: usize, entries: Vec<Complex<T>>) -> Result<Self, MultiportError> {
        let deviation = (norm_sq(&entries) - T::one()).abs().as_f64();
        if deviation > tol::COLUMN_NORM {
            return Err(MultiportError::NotNormalized { deviation });
        }
        Ok(Self { index, entries })
    }
}

/// Discrete-Fourier-transform multiport: U_nm = omega^{nm} / sqrt(dim) with
/// omega = exp(i 2 pi / dim). Every input couples to every output with equal
/// probability 1/dim.
///
/// Panics if `dim < 2`.
pub fn dft_unitary<T: Float>(dim: usize) -> MultiportUnitary<T> {
    assert!(dim >= 2, "a multiport needs at least two ports");
    let scale = T::of(dim as f64).sqrt().recip();
    MultiportUnitary::from_fn(dim, |n, m| {
        let phase = T::TAU() * T::of(((n * m) % dim) as f64) / T::of(dim as f64);
        Complex::from_polar(scale, phase)
    })
}

/// Maximum deviation of U†U from the identity, and whether it is within `tol`.
pub fn check_unitary<T: Float>(u: &MultiportUnitary<T>, tol: T) -> (bool, T) {
    let dim = u.dim();
    let mut max_dev = T::zero();
    for j in 0..dim {
        for k in 0..dim {
            let mut acc = Complex::new(T::zero(), T::zero());
            for n in 0..dim {
                acc += u.get(n, j).conj() * u.get(n, k);
            }
            if j == k {
                acc -= Complex::new(T::one(), T::zero());
            }
            if acc.norm() > max_dev {
                max_dev = acc.norm();
            }
        }
    }
    (max_dev <= tol, max_dev)
}

/// Extend mutually orthonormal fixed columns to a full unitary.
///
/// The specified columns are copied into the result bit-for-bit; the open
/// slots are filled in ascending order by Gram-Schmidt against the standard
/// basis, skipping basis vectors that become numerically dependent. The
/// result is deterministic for identical inputs.
pub fn complete_unitary<T: Float>(
    fixed: &[ColumnSpec<T>],
) -> Result<MultiportUnitary<T>, MultiportError> {
    assert!(!fixed.is_empty(), "at least one fixed column is required");
    let dim = fixed[0].entries.len();
    let mut columns: Vec<Option<Vec<Complex<T>>>> = vec![None; dim];
    for spec in fixed {
        if spec.entries.len() != dim {
            return Err(MultiportError::BadShape {
                dim,
                got: spec.entries.len(),
            });
        }
        if spec.index >= dim {
            return Err(MultiportError::IndexOutOfRange {
                index: spec.index,
                dim,
            });
        }
        if columns[spec.index].is_some() {
            return Err(MultiportError::DuplicateIndex { index: spec.index });
        }
        columns[spec.index] = Some(spec.entries.clone());
    }

    // Gram-matrix deviation of the fixed set from the identity.
    let mut max_dev = T::zero();
    for (i, a) in fixed.iter().enumerate() {
        for (j, b) in fixed.iter().enumerate() {
            let mut acc = inner(&a.entries, &b.entries);
            if i == j {
                acc -= Complex::new(T::one(), T::zero());
            }
            if acc.norm() > max_dev {
                max_dev = acc.norm();
            }
        }
    }
    if max_dev.as_f64() > tol::FIXED_COLUMN_ORTHONORMALITY {
        return Err(MultiportError::NotOrthonormal {
            deviation: max_dev.as_f64(),
        });
    }

    let mut basis = 0usize;
    for slot in 0..dim {
        if columns[slot].is_some() {
            continue;
        }
        let mut placed = false;
        while basis < dim {
            let mut candidate = vec![Complex::new(T::zero(), T::zero()); dim];
            candidate[basis] = Complex::new(T::one(), T::zero());
            basis += 1;
            // Two projection passes keep the result orthogonal to working
            // precision even for nearly dependent candidates.
            for _ in 0..2 {
                for col in columns.iter().flatten() {
                    let overlap = inner(col, &candidate);
                    for (c, u) in candidate.iter_mut().zip(col) {
                        *c -= u * overlap;
                    }
                }
            }
            let norm = norm_sq(&candidate).sqrt();
            if norm.as_f64() < tol::COMPLETION_DEPENDENT {
                continue;
            }
            let inv = norm.recip();
            for c in candidate.iter_mut() {
                *c = c.scale(inv);
            }
            columns[slot] = Some(candidate);
            placed = true;
            break;
        }
        if !placed {
            return Err(MultiportError::CompletionFailed);
        }
    }

    let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for (m, col) in columns.iter().enumerate() {
        let col = col.as_ref().expect("all slots filled");
        for (n, &v) in col.iter().enumerate() {
            entries[n * dim + m] = v;
        }
    }
    MultiportUnitary::from_entries(dim, entries)
}

/// Phase convention for the second beamsplitter column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsConvention {
    /// Second column (conj(r), -conj(t)); reproduces `dft_unitary(2)` at
    /// t = r = 1/sqrt(2).
    Dft,
    /// Second column (-conj(r), conj(t)); reduces to the identity at
    /// t = 1, r = 0.
    Rotation,
}

/// 2x2 beamsplitter with transmission `t` and reflection `r`,
/// |t|^2 + |r|^2 = 1. Mode-1 phases follow the chosen convention.
pub fn beamsplitter<T: Float>(
    t: Complex<T>,
    r: Complex<T>,
    convention: BsConvention,
) -> Result<MultiportUnitary<T>, MultiportError> {
    let deviation = (t.norm_sqr() + r.norm_sqr() - T::one()).abs().as_f64();
    if deviation > tol::COLUMN_NORM {
        return Err(MultiportError::NotNormalized { deviation });
    }
    let (u01, u11) = match convention {
        BsConvention::Dft => (r.conj(), -t.conj()),
        BsConvention::Rotation => (-r.conj(), t.conj()),
    };
    MultiportUnitary::from_entries(2, vec![t, u01, r, u11])
}

/// Haar-random unitary: Gram-Schmidt of a complex Gaussian matrix, which
/// fixes the phases of the triangular factor's diagonal to be real positive.
pub fn haar_unitary<T: Float, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> MultiportUnitary<T> {
    let mut columns: Vec<Vec<Complex<T>>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let (re, im) = standard_normal_pair::<T, _>(rng);
                    Complex::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..dim {
        let (done, rest) = columns.split_at_mut(j);
        let candidate = &mut rest[0];
        for _ in 0..2 {
            for col in done.iter() {
                let overlap = inner(col, candidate);
                for (c, u) in candidate.iter_mut().zip(col) {
                    *c -= u * overlap;
                }
            }
        }
        let inv = norm_sq(candidate).sqrt().recip();
        for c in candidate.iter_mut() {
            *c = c.scale(inv);
        }
    }
    MultiportUnitary::from_fn(dim, |n, m| columns[m][n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type C64 = Complex<f64>;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dft_dim2_is_the_sign_matrix() {
        let u = dft_unitary::<f64>(2);
        let r = 0.5_f64.sqrt();
        for n in 0..2 {
            for m in 0..2 {
                let expect = if n * m % 2 == 1 { -r } else { r };
                assert!((u.get(n, m) - c(expect, 0.0)).norm() < 1e-15);
            }
        }
        let (ok, dev) = check_unitary(&u, 1e-12);
        assert!(ok, "deviation {dev}");
    }

    #[test]
    fn dft_dim3_matches_cube_roots_of_unity() {
        let u = dft_unitary::<f64>(3);
        let scale = (1.0 / 3.0_f64).sqrt();
        for n in 0..3 {
            for m in 0..3 {
                let expect = C64::from_polar(scale, std::f64::consts::TAU * ((n * m) % 3) as f64 / 3.0);
                assert!((u.get(n, m) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn dft_columns_are_orthonormal_up_to_dim_16() {
        for dim in 2..=16 {
            let u = dft_unitary::<f64>(dim);
            let (ok, dev) = check_unitary(&u, 1e-10);
            assert!(ok, "dim {dim} deviation {dev}");
        }
        let (ok, _) = check_unitary(&dft_unitary::<f64>(4), 1e-12);
        assert!(ok);
    }

    #[test]
    fn dft_moduli_are_uniform() {
        for dim in 2..=8 {
            let u = dft_unitary::<f64>(dim);
            for n in 0..dim {
                for m in 0..dim {
                    assert!((u.get(n, m).norm_sqr() - 1.0 / dim as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scaled_row_fails_the_unitarity_check() {
        let mut entries = dft_unitary::<f64>(2).entries().to_vec();
        entries[0] = entries[0].scale(1.01);
        entries[1] = entries[1].scale(1.01);
        let u = MultiportUnitary::from_entries(2, entries).unwrap();
        let (ok, dev) = check_unitary(&u, 1e-10);
        assert!(!ok);
        assert!(dev > 1e-3);
    }

    #[test]
    fn haar_sample_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = haar_unitary::<f64, _>(5, &mut rng);
        let (ok, dev) = check_unitary(&u, 1e-10);
        assert!(ok, "deviation {dev}");
    }

    #[test]
    fn completion_preserves_fixed_columns_bitwise() {
        let u = dft_unitary::<f64>(3);
        let col0 = ColumnSpec::new(0, u.column(0)).unwrap();
        let completed = complete_unitary(std::slice::from_ref(&col0)).unwrap();
        assert_eq!(completed.column(0), col0.entries);
        let (ok, dev) = check_unitary(&completed, 1e-10);
        assert!(ok, "deviation {dev}");
    }

    #[test]
    fn completion_rejects_parallel_columns() {
        let e0 = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let a = ColumnSpec::new(0, e0.clone()).unwrap();
        let b = ColumnSpec::new(1, e0).unwrap();
        assert!(matches!(
            complete_unitary(&[a, b]),
            Err(MultiportError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn completion_handles_noncontiguous_indices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = haar_unitary::<f64, _>(4, &mut rng);
        let specs = [
            ColumnSpec::new(1, u.column(1)).unwrap(),
            ColumnSpec::new(3, u.column(3)).unwrap(),
        ];
        let completed = complete_unitary(&specs).unwrap();
        assert_eq!(completed.column(1), specs[0].entries);
        assert_eq!(completed.column(3), specs[1].entries);
        let (ok, _) = check_unitary(&completed, 1e-10);
        assert!(ok);
    }

    #[test]
    fn symmetric_beamsplitter_equals_dft() {
        let r = 0.5_f64.sqrt();
        let u = beamsplitter(c(r, 0.0), c(r, 0.0), BsConvention::Dft).unwrap();
        let dft = dft_unitary::<f64>(2);
        for n in 0..2 {
            for m in 0..2 {
                assert!((u.get(n, m) - dft.get(n, m)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn transmissive_limit_is_the_identity_in_rotation_convention() {
        let u = beamsplitter(c(1.0, 0.0), c(0.0, 0.0), BsConvention::Rotation).unwrap();
        let id = MultiportUnitary::<f64>::identity(2);
        for n in 0..2 {
            for m in 0..2 {
                assert!((u.get(n, m) - id.get(n, m)).norm() < 1e-15);
            }
        }
        // U_10 = 0 makes this matrix unusable for engineering.
        assert!(u.get(1, 0).norm() < 1e-15);
    }

    #[test]
    fn beamsplitter_moduli_follow_the_split() {
        let t = 0.618_f64.sqrt();
        let r = (1.0 - 0.618_f64).sqrt();
        let u = beamsplitter(c(t, 0.0), c(0.0, r), BsConvention::Dft).unwrap();
        assert!((u.get(0, 0).norm_sqr() - 0.618).abs() < 1e-12);
        assert!((u.get(1, 0).norm_sqr() - 0.382).abs() < 1e-12);
        let (ok, _) = check_unitary(&u, 1e-10);
        assert!(ok);
    }

    #[test]
    fn unbalanced_beamsplitter_is_rejected() {
        assert!(matches!(
            beamsplitter(c(1.0, 0.0), c(0.5, 0.0), BsConvention::Dft),
            Err(MultiportError::NotNormalized { .. })
        ));
    }
}
