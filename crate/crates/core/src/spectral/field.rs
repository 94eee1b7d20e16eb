use alloc::vec::Vec;
use num_complex::Complex64;

use super::GridSpec;
use crate::{Error, Result};

fn check_len(grid: &GridSpec, got: usize) -> Result<()> {
    if got == grid.n() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: grid.n(),
            got,
        })
    }
}

/// Complex samples of a wave function on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some(index) = values.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x_j)`; fails if any sample is not finite.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.positions().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: alloc::vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    /// `exp(i k_m x)` for signed mode number `m`, with the phase reduced
    /// modulo `2 pi` in integer arithmetic.
    pub fn plane_wave(grid: GridSpec, mode: i64) -> Self {
        let n = grid.n() as i64;
        let values = (0..n)
            .map(|j| {
                let r = (mode * j).rem_euclid(n);
                Complex64::from_polar(1.0, core::f64::consts::TAU * r as f64 / n as f64)
            })
            .collect();
        Self { grid, values }
    }

    /// Trusted constructor for results of internal arithmetic.
    pub(crate) fn from_parts(grid: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn real_part(&self) -> RealField {
        RealField::from_parts(self.grid, self.values.iter().map(|z| z.re).collect())
    }

    pub fn imag_part(&self) -> RealField {
        RealField::from_parts(self.grid, self.values.iter().map(|z| z.im).collect())
    }

    /// `re + i im` from two real fields on one grid.
    pub fn from_real_imag(re: &RealField, im: &RealField) -> Result<Self> {
        if re.grid() != im.grid() {
            return Err(Error::GridMismatch);
        }
        let values = re
            .values()
            .iter()
            .zip(im.values())
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        Ok(Self::from_parts(*re.grid(), values))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|z| z * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self::from_parts(self.grid, values))
    }

    /// `|psi(x_j)|^2` at every sample.
    pub fn density(&self) -> RealField {
        RealField::from_parts(self.grid, self.values.iter().map(|z| z.norm_sqr()).collect())
    }

    /// Largest pointwise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Real samples on a periodic grid: a Klein-Gordon field, its time
/// derivative, a potential, or a density.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.positions().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: alloc::vec![0.0; grid.n()],
        }
    }

    pub(crate) fn from_parts(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField::from_parts(
            self.grid,
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|v| v * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.grid, values))
    }

    /// `sum_j f_j * dx`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    /// `sqrt(sum_j f_j^2 dx)`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
