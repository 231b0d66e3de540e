//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use selftune::rng::{self, Stream};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rng::stream(seed, Stream::Auxiliary)
}

pub fn normal_matrix(g: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    rng::standard_normal_matrix(g, r, c)
}

pub fn normal_vector(g: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    rng::standard_normal_vector(g, n)
}

/// `G Gᵀ` for a standard normal `G`, plus `floor·I`.
pub fn random_psd(g: &mut ChaCha8Rng, n: usize, floor: f64) -> DMatrix<f64> {
    let f = normal_matrix(g, n, n);
    &f * f.transpose() + DMatrix::identity(n, n) * floor
}

/// Dense `A` rescaled to spectral radius `rho`.
pub fn scaled_dynamics(g: &mut ChaCha8Rng, n: usize, rho: f64) -> DMatrix<f64> {
    let a = normal_matrix(g, n, n);
    let radius = a
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    a * (rho / radius.max(1e-12))
}

pub fn uniform(g: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    g.random_range(lo..hi)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub mod instances;
