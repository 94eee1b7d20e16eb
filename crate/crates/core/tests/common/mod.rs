#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reparam_core::evolution::KleinGordonState;
use reparam_core::spectral::{norm, ComplexField, GridSpec, RealField};
use reparam_core::Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random real field occupying modes `|j| <= max_mode`.
pub fn band_limited_real(grid: GridSpec, max_mode: usize, rng: &mut impl Rng) -> RealField {
    let k0 = 2.0 * PI / grid.length();
    let terms: Vec<(f64, f64, f64)> = (0..=max_mode)
        .map(|j| {
            let decay = 1.0 / (1.0 + j as f64);
            (j as f64 * k0, rng.gen_range(-1.0..1.0) * decay, rng.gen_range(-1.0..1.0) * decay)
        })
        .collect();
    RealField::from_fn(grid, |x| {
        terms
            .iter()
            .map(|&(k, a, b)| a * (k * x).cos() + b * (k * x).sin())
            .sum()
    })
    .unwrap()
}

pub fn band_limited_kg(grid: GridSpec, max_mode: usize, rng: &mut impl Rng) -> KleinGordonState {
    let phi = band_limited_real(grid, max_mode, rng);
    let phi_dot = band_limited_real(grid, max_mode, rng);
    KleinGordonState::new(phi, phi_dot, 0.0).unwrap()
}

pub fn band_limited_complex(grid: GridSpec, max_mode: usize, rng: &mut impl Rng) -> ComplexField {
    let re = band_limited_real(grid, max_mode, rng);
    let im = band_limited_real(grid, max_mode, rng);
    ComplexField::from_real_imag(&re, &im).unwrap()
}

pub fn random_complex(grid: GridSpec, rng: &mut impl Rng) -> ComplexField {
    let values = (0..grid.n())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexField::new(grid, values).unwrap()
}

pub fn normalized(f: ComplexField) -> ComplexField {
    let n = norm(&f);
    f.scale(Complex64::new(1.0 / n, 0.0))
}

/// `exp(-(x - c)^2 / (4 s^2) + i p x / hbar + i chirp (x - c)^2)`, normalized.
pub fn gaussian(grid: GridSpec, center: f64, sigma: f64, momentum: f64, chirp: f64, hbar: f64) -> ComplexField {
    let f = ComplexField::from_fn(grid, |x| {
        let d = x - center;
        Complex64::from_polar((-d * d / (4.0 * sigma * sigma)).exp(), momentum * x / hbar + chirp * d * d)
    })
    .unwrap();
    normalized(f)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
