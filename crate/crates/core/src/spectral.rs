//! Fourier collocation derivatives on periodic grids.
//!
//! Wavenumbers follow the standard FFT layout k = (2π/L)·{0, 1, …, n/2−1,
//! −n/2, …, −1}. Odd-order derivatives zero the Nyquist multiplier so the
//! resulting operator is exactly anti-hermitian on the grid (and −iħ∂ exactly
//! hermitian); even orders keep the real multiplier (ik)^order.

use num_complex::Complex64;

use crate::error::{NcqmError, Result};
use crate::fft::{fft2_forward, fft2_inverse};
use crate::grid::{Boundary, Grid2D};
use crate::wavefunction::WaveFunction;

/// Differentiation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// FFT wavenumbers for n points on a length-L = 2l periodic interval.
pub fn wavenumbers(n: usize, half_width: f64) -> Vec<f64> {
    let base = std::f64::consts::PI / half_width; // 2π / (2l)
    (0..n)
        .map(|i| {
            let k = if i <= n / 2 { i as isize } else { i as isize - n as isize };
            base * k as f64
        })
        .collect()
}

/// Multiplier (ik)^order with the Nyquist mode zeroed for odd orders.
pub(crate) fn derivative_multipliers(n: usize, half_width: f64, order: u32) -> Vec<Complex64> {
    let ks = wavenumbers(n, half_width);
    ks.iter()
        .enumerate()
        .map(|(i, &k)| {
            if order % 2 == 1 && i == n / 2 {
                Complex64::default()
            } else {
                Complex64::new(0.0, k).powu(order)
            }
        })
        .collect()
}

/// Apply ∂^order along `axis` to raw row-major data (in place, via FFT).
pub(crate) fn apply_derivative_raw(
    data: &mut [Complex64],
    grid: &Grid2D,
    axis: Axis,
    order: u32,
) {
    if order == 0 {
        return;
    }
    let (nx, ny) = (grid.nx, grid.ny);
    fft2_forward(data, nx, ny);
    match axis {
        Axis::X => {
            let mult = derivative_multipliers(nx, grid.lx, order);
            for iy in 0..ny {
                let row = &mut data[iy * nx..(iy + 1) * nx];
                for (z, m) in row.iter_mut().zip(&mult) {
                    *z *= m;
                }
            }
        }
        Axis::Y => {
            let mult = derivative_multipliers(ny, grid.ly, order);
            for iy in 0..ny {
                let m = mult[iy];
                for z in &mut data[iy * nx..(iy + 1) * nx] {
                    *z *= m;
                }
            }
        }
    }
    fft2_inverse(data, nx, ny);
}

/// Mixed derivative ∂_x^dx ∂_y^dy applied with a single FFT round trip.
pub(crate) fn apply_mixed_derivative_raw(data: &mut [Complex64], grid: &Grid2D, dx: u32, dy: u32) {
    if dx == 0 && dy == 0 {
        return;
    }
    let (nx, ny) = (grid.nx, grid.ny);
    fft2_forward(data, nx, ny);
    let mx = derivative_multipliers(nx, grid.lx, dx);
    let my = derivative_multipliers(ny, grid.ly, dy);
    for iy in 0..ny {
        let fy = my[iy];
        let row = &mut data[iy * nx..(iy + 1) * nx];
        for (z, fx) in row.iter_mut().zip(&mx) {
            *z *= fx * fy;
        }
    }
    fft2_inverse(data, nx, ny);
}

/// Fourier-collocation derivative of ψ along `axis`; exact for band-limited
/// inputs. Only derivative orders 1, 2 and 4 are accepted here.
pub fn spectral_derivative(psi: &WaveFunction, axis: Axis, order: u32) -> Result<WaveFunction> {
    if !matches!(order, 1 | 2 | 4) {
        return Err(NcqmError::invalid(format!(
            "derivative order {order} not supported (must be 1, 2 or 4)"
        )));
    }
    psi.grid().require_boundary(Boundary::Periodic)?;
    let grid = *psi.grid();
    let mut data = psi.data().to_vec();
    apply_derivative_raw(&mut data, &grid, axis, order);
    WaveFunction::new(grid, data)
}
