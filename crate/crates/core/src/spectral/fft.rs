//! Radix-2 transform with symmetric `1/sqrt(n)` normalization.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;

use super::{ComplexField, GridSpec};

/// Precomputed twiddles and bit-reversal table for one transform length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    twiddles: Vec<Complex64>,
    reversed: Vec<usize>,
    scale: f64,
}

impl FftPlan {
    /// `n` must be a power of two (guaranteed by [`GridSpec`]).
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "transform length must be a power of two");
        let bits = n.trailing_zeros();
        let reversed = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        // each twiddle from its own angle, no recurrence
        let twiddles = (0..n / 2)
            .map(|k| {
                let angle = -TAU * k as f64 / n as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Self {
            n,
            twiddles,
            reversed,
            scale: 1.0 / (n as f64).sqrt(),
        }
    }

    pub fn for_grid(grid: &GridSpec) -> Self {
        Self::new(grid.n())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `X_k = n^{-1/2} sum_j x_j exp(-2 pi i jk/n)`, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    /// `x_j = n^{-1/2} sum_k X_k exp(+2 pi i jk/n)`, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.n);
        for i in 0..self.n {
            let j = self.reversed[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= self.n {
            let half = len / 2;
            let stride = self.n / len;
            for start in (0..self.n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let u = data[start + k];
                    let v = data[start + k + half] * w;
                    data[start + k] = u + v;
                    data[start + k + half] = u - v;
                }
            }
            len <<= 1;
        }
        for z in data.iter_mut() {
            *z *= self.scale;
        }
    }
}

/// Fourier coefficients of a field, in transform order (see
/// [`GridSpec::mode_index`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> crate::Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(crate::Error::LengthMismatch {
                expected: grid.n(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Sum of squared moduli; equals `sum |f_j|^2` of the source field.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn forward_transform(f: &ComplexField) -> Spectrum {
    forward_with(&FftPlan::for_grid(f.grid()), f)
}

pub fn inverse_transform(s: &Spectrum) -> ComplexField {
    inverse_with(&FftPlan::for_grid(s.grid()), s)
}

pub(crate) fn forward_with(plan: &FftPlan, f: &ComplexField) -> Spectrum {
    let mut coeffs = f.values().to_vec();
    plan.forward(&mut coeffs);
    Spectrum {
        grid: *f.grid(),
        coeffs,
    }
}

pub(crate) fn inverse_with(plan: &FftPlan, s: &Spectrum) -> ComplexField {
    let mut values = s.coeffs.clone();
    plan.inverse(&mut values);
    ComplexField::from_parts(s.grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Direct O(n^2) sum as an oracle.
    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let r = (j * k) % n;
                        v * Complex64::from_polar(1.0, -TAU * r as f64 / n as f64)
                    })
                    .sum::<Complex64>()
                    / (n as f64).sqrt()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let n = 32;
        let x: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 1.3).cos() - 0.2))
            .collect();
        let expected = naive_dft(&x);
        let mut y = x.clone();
        FftPlan::new(n).forward(&mut y);
        for (a, b) in y.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn delta_has_flat_spectrum() {
        let grid = GridSpec::new(16, 1.0).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 16];
        v[0] = Complex64::new(1.0, 0.0);
        let s = forward_transform(&ComplexField::new(grid, v).unwrap());
        for c in s.coeffs() {
            assert!((c - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_maps_to_zero_mode() {
        let grid = GridSpec::new(64, 1.0).unwrap();
        let f = ComplexField::from_fn(grid, |_| Complex64::new(1.0, 0.0)).unwrap();
        let s = forward_transform(&f);
        assert!((s.coeffs()[0] - Complex64::new(8.0, 0.0)).norm() < 1e-13);
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-13));
    }

    #[test]
    fn plane_wave_lands_in_its_slot() {
        let grid = GridSpec::new(32, 2.0).unwrap();
        let s = forward_transform(&ComplexField::plane_wave(grid, -5));
        for (slot, c) in s.coeffs().iter().enumerate() {
            let expected = if grid.mode_index(slot) == -5 { 32f64.sqrt() } else { 0.0 };
            assert!((c.norm() - expected).abs() < 1e-12);
        }
    }
}
