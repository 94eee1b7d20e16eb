use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Geometry of a periodic one-dimensional grid on `[0, length)`.
///
/// Sample `j` sits at `x_j = j * length / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    length: f64,
}

impl GridSpec {
    /// Builds a grid with `n` points over a box of size `length`.
    ///
    /// `n` must be a power of two no smaller than 8 and `length` must be a
    /// positive finite number.
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 8"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length = {length} must be positive and finite"
            )));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.position(j)).collect()
    }

    /// Signed mode number of transform slot `slot`: `0, 1, ..., n/2 - 1`
    /// followed by `-n/2, ..., -1`.
    pub fn mode_index(&self, slot: usize) -> i64 {
        let half = self.n / 2;
        if slot < half {
            slot as i64
        } else {
            slot as i64 - self.n as i64
        }
    }

    /// Transform slot of the unpaired `-n/2` mode.
    pub fn nyquist_slot(&self) -> usize {
        self.n / 2
    }

    pub fn wavenumber(&self, slot: usize) -> f64 {
        2.0 * PI * self.mode_index(slot) as f64 / self.length
    }

    /// Wavenumbers `2 pi j / L` in transform order (nonnegative `j` first).
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|s| self.wavenumber(s)).collect()
    }
}

/// Free function form of [`GridSpec::wavenumbers`].
pub fn wavenumbers(grid: &GridSpec) -> Vec<f64> {
    grid.wavenumbers()
}

/// Reduced Planck constant, speed of light and particle mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    c: f64,
    mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, c: f64, mass: f64) -> Result<Self> {
        Self::check("hbar", hbar)?;
        Self::check("c", c)?;
        Self::check("mass", mass)?;
        Ok(Self { hbar, c, mass })
    }

    /// Zero-mass constants. Only the Klein-Gordon and square-root operators
    /// accept these; the nonrelativistic propagator divides by the mass.
    pub fn massless(hbar: f64, c: f64) -> Result<Self> {
        Self::check("hbar", hbar)?;
        Self::check("c", c)?;
        Ok(Self { hbar, c, mass: 0.0 })
    }

    /// `hbar = c = mass = 1`.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            mass: 1.0,
        }
    }

    fn check(name: &str, value: f64) -> Result<()> {
        if value.is_finite() && value > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidConstants(format!(
                "{name} = {value} must be positive and finite"
            )))
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Inverse Compton wavenumber `mass * c / hbar`.
    pub fn mu(&self) -> f64 {
        self.mass * self.c / self.hbar
    }

    /// Rest energy `mass * c^2`.
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }
}
