//! Small numeric helpers used by several modules.

use num_complex::Complex;

use crate::float::Float;

/// sqrt(n!) accumulated as a product of square roots to delay overflow.
pub(crate) fn sqrt_factorial<T: Float>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::of(k as f64).sqrt())
}

/// Expand a product of linear factors prod_j (a_j x + b_j) into monomial
/// coefficients, constant term first.
pub(crate) fn linear_factor_product<T: Float>(
    factors: &[(Complex<T>, Complex<T>)],
) -> Vec<Complex<T>> {
    let mut coeffs = vec![Complex::new(T::one(), T::zero())];
    for &(a, b) in factors {
        let mut next = vec![Complex::new(T::zero(), T::zero()); coeffs.len() + 1];
        for (j, &c) in coeffs.iter().enumerate() {
            next[j] += c * b;
            next[j + 1] += c * a;
        }
        coeffs = next;
    }
    coeffs
}

/// Inner product sum_i conj(a_i) b_i.
pub(crate) fn inner<T: Float>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        })
}

/// Squared Euclidean norm of a complex vector.
pub(crate) fn norm_sq<T: Float>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// Solve the dense real system `a x = b` by LU with partial pivoting.
/// Returns `None` when a pivot vanishes.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_dense<T: Float>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < T::of(1e-300) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let upd = a[col][k] * factor;
                a[row][k] -= upd;
            }
            let upd = b[col] * factor;
            b[row] -= upd;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// One standard normal pair via Box-Muller.
pub(crate) fn standard_normal_pair<T: Float, R: rand::Rng + ?Sized>(rng: &mut R) -> (T, T) {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let radius = (-2.0 * (1.0 - u1).ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    (T::of(radius * angle.cos()), T::of(radius * angle.sin()))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C64 = Complex<f64>;

    #[test]
    fn factor_product_expands_quadratic() {
        // (x - 1)(x + 2) = x^2 + x - 2
        let factors = [
            (C64::new(1.0, 0.0), C64::new(-1.0, 0.0)),
            (C64::new(1.0, 0.0), C64::new(2.0, 0.0)),
        ];
        let p = linear_factor_product(&factors);
        assert!((p[0] - C64::new(-2.0, 0.0)).norm() < 1e-15);
        assert!((p[1] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((p[2] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dense_solve_recovers_solution() {
        let a = vec![vec![2.0_f64, 1.0], vec![1.0, 3.0]];
        let b = vec![5.0_f64, 10.0];
        let x = solve_dense(a, b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_factorial_matches_direct() {
        let v: f64 = sqrt_factorial(5);
        assert!((v * v - 120.0).abs() < 1e-9);
    }
}
