//! Seeded samplers. Every sample index gets its own stream derived from
//! `(seed, stream, index)`, so results do not depend on evaluation order or
//! on how work is split across threads.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{ratio, Rational};

/// Default seed used by the CLI and the acceptance suite.
pub const DEFAULT_SEED: u64 = 20_260_101;

pub fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) << 20);
    rng
}

/// Upper triangular, diagonal in `[0.5, 2]` rescaled to determinant 1,
/// off-diagonal entries in `[-2, 2]`.
pub fn random_st(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(n, n);
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let scale = diag.iter().map(|d: &f64| d.ln()).sum::<f64>() / n as f64;
    for i in 0..n {
        g[(i, i)] = (diag[i].ln() - scale).exp();
        for j in i + 1..n {
            g[(i, j)] = rng.gen_range(-2.0..2.0);
        }
    }
    g
}

/// Unipotent upper triangular with off-diagonal entries in `[-2, 2]`.
pub fn random_unipotent(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut g = DMatrix::identity(n, n);
    for i in 0..n {
        for j in i + 1..n {
            g[(i, j)] = rng.gen_range(-2.0..2.0);
        }
    }
    g
}

/// Determinant-one 2x2 matrix with entries of moderate size.
pub fn random_sl2(rng: &mut impl Rng) -> DMatrix<f64> {
    loop {
        let a: f64 = rng.gen_range(-2.0..2.0);
        let b: f64 = rng.gen_range(-2.0..2.0);
        let c: f64 = rng.gen_range(-2.0..2.0);
        let d: f64 = rng.gen_range(-2.0..2.0);
        let det = a * d - b * c;
        if det.abs() < 0.25 {
            continue;
        }
        let s = det.abs().sqrt();
        // Swap columns when needed so the determinant is positive.
        let (a, b, c, d) = if det > 0.0 {
            (a, b, c, d)
        } else {
            (b, a, d, c)
        };
        return DMatrix::from_row_slice(2, 2, &[a / s, b / s, c / s, d / s]);
    }
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let norm = v.norm();
        if norm > 1e-3 && norm <= 1.0 {
            return v / norm;
        }
    }
}

/// Point uniformly distributed in the spherical shell `lo < |y| < hi`.
pub fn random_in_shell(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    let x = random_unit_vector(rng, n);
    let r = rng.gen_range(lo..hi);
    x * r
}

/// Rational with numerator in `[-bound, bound]` and denominator in `1..=4`.
pub fn random_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=4))
}
