//! Complex amplitudes sampled on a [`Grid2D`], with L² bookkeeping.

use num_complex::Complex64;

use crate::error::{NcqmError, Result};
use crate::grid::Grid2D;

/// ψ on a grid, flattened row-major (`iy * nx + ix`).
///
/// Norms and inner products use the grid quadrature Σ conj(φ)ψ · hx·hy.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid2D,
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: Grid2D, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.npoints() {
            return Err(NcqmError::ShapeMismatch {
                context: "wavefunction amplitudes vs grid",
                left: amplitudes.len(),
                right: grid.npoints(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NcqmError::NonFinite("wavefunction amplitudes"));
        }
        Ok(WaveFunction { grid, amplitudes })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        let n = grid.npoints();
        WaveFunction { grid, amplitudes: vec![Complex64::default(); n] }
    }

    /// Sample `f(x, y)` on the grid.
    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> Complex64) -> Result<Self> {
        let mut amplitudes = Vec::with_capacity(grid.npoints());
        for iy in 0..grid.ny {
            let y = grid.y(iy);
            for ix in 0..grid.nx {
                amplitudes.push(f(grid.x(ix), y));
            }
        }
        Self::new(grid, amplitudes)
    }

    /// Normalized Gaussian packet centered at (x0, y0) with width σ and
    /// momentum (px, py).
    pub fn gaussian(grid: Grid2D, x0: f64, y0: f64, sigma: f64, px: f64, py: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(NcqmError::invalid(format!("sigma = {sigma} must be positive")));
        }
        let wf = Self::from_fn(grid, |x, y| {
            let r2 = ((x - x0).powi(2) + (y - y0).powi(2)) / (2.0 * sigma * sigma);
            let phase = px * x + py * y;
            Complex64::new(0.0, phase).exp() * (-r2).exp()
        })?;
        Ok(wf.normalized())
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> WaveFunction {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero wavefunction");
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, c: Complex64) -> WaveFunction {
        WaveFunction {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add_scaled(&self, c: Complex64, other: &WaveFunction) -> Result<WaveFunction> {
        self.check_same_grid(other)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a + c * b)
            .collect();
        Ok(WaveFunction { grid: self.grid, amplitudes })
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn check_same_grid(&self, other: &WaveFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(NcqmError::ShapeMismatch {
                context: "wavefunctions on different grids",
                left: self.grid.npoints(),
                right: other.grid.npoints(),
            })
        }
    }
}

/// ⟨φ|ψ⟩ = Σ conj(φ)ψ · hx·hy. Conjugate-symmetric by construction.
pub fn inner_product(phi: &WaveFunction, psi: &WaveFunction) -> Result<Complex64> {
    phi.check_same_grid(psi)?;
    let s: Complex64 = phi
        .data()
        .iter()
        .zip(psi.data())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(s * phi.grid().cell())
}
