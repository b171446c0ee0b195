//! Shared helpers for the integration suites: seeded generators, bounded
//! random ensembles, and the factorial-expansion permanent oracle.

#![allow(dead_code)]

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use retrodict::multiport::{complete_unitary, haar_unitary, ColumnSpec, MultiportUnitary};
use retrodict::optimize::ColumnWeights;
use retrodict::rootcore::{char_polynomial, find_roots, RootSet, TargetState};

pub type C64 = Complex<f64>;

/// Base seed for every seeded ensemble; override with RETRO_SEED.
pub fn base_seed() -> u64 {
    std::env::var("RETRO_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5245_5452)
}

/// Independent deterministic stream per test.
pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(base_seed().wrapping_add(stream.wrapping_mul(0x9E37_79B9)))
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Permanent by direct expansion over all permutations, O(n! n). The
/// independent oracle for the Ryser implementation; n <= 6 stays fast.
pub fn naive_permanent(entries: &[C64], dim: usize) -> C64 {
    assert_eq!(entries.len(), dim * dim);
    let mut columns: Vec<usize> = (0..dim).collect();
    let mut total = c(0.0, 0.0);
    permute(&mut columns, 0, &mut |perm: &[usize]| {
        let mut product = c(1.0, 0.0);
        for (row, &col) in perm.iter().enumerate() {
            product *= entries[row * dim + col];
        }
        total += product;
    });
    total
}

fn permute(items: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Random complex number uniform in the disk of the given radius.
pub fn random_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    C64::from_polar(r, theta)
}

/// Random normalized degree-n target whose characteristic roots all lie in
/// the disk |g| <= 3, resampled until they do. The bound keeps coherent
/// amplitudes in a range the Fock oracle can expand without underflow.
pub fn random_target(rng: &mut ChaCha8Rng, degree: usize) -> (TargetState<f64>, RootSet<f64>) {
    loop {
        let coeffs: Vec<C64> = (0..=degree)
            .map(|_| c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        if coeffs.last().unwrap().norm() < 0.2 {
            continue;
        }
        let Ok(target) = TargetState::new(coeffs) else {
            continue;
        };
        let Ok(roots) = find_roots(&char_polynomial(&target)) else {
            continue;
        };
        if roots.g.iter().all(|g| g.norm() <= 3.0) {
            return (target, roots);
        }
    }
}

/// Random roots with moduli in [min_abs, max_abs].
pub fn random_roots(rng: &mut ChaCha8Rng, count: usize, min_abs: f64, max_abs: f64) -> Vec<C64> {
    (0..count)
        .map(|_| {
            let r = min_abs + (max_abs - min_abs) * rng.gen::<f64>();
            C64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
        })
        .collect()
}

/// Haar sample whose first column stays away from zero, resampled as needed.
pub fn haar_with_strong_first_column(
    rng: &mut ChaCha8Rng,
    dim: usize,
    min_modulus: f64,
) -> MultiportUnitary<f64> {
    loop {
        let u = haar_unitary::<f64, _>(dim, rng);
        if (0..dim).all(|n| u.get(n, 0).norm() >= min_modulus) {
            return u;
        }
    }
}

/// Realize optimized weights as a multiport: first column sqrt(x_n) with
/// real positive phases, remaining columns by orthonormal completion.
pub fn realize_weights(weights: &ColumnWeights<f64>) -> MultiportUnitary<f64> {
    let entries: Vec<C64> = weights.as_slice().iter().map(|&x| c(x.sqrt(), 0.0)).collect();
    let column = ColumnSpec::new(0, entries).expect("weights sum to one");
    complete_unitary(&[column]).expect("single unit column always completes")
}
