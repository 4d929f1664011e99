//! Uniform 2D sampling domains and the physical parameters shared by all
//! operator builders.
//!
//! Grids cover `[-lx, lx] × [-ly, ly]` with `nx × ny` points and are flattened
//! row-major, `index = iy * nx + ix`, everywhere in this crate. Periodic grids
//! carry the Fourier collocation machinery; Dirichlet grids are backed by a
//! modal polynomial basis (see [`crate::dirichlet`]).

use serde::{Deserialize, Serialize};

use crate::error::{NcqmError, Result};

/// Boundary condition of a [`Grid2D`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Dirichlet => "dirichlet",
        }
    }
}

/// Uniform sampling of `[-lx, lx] × [-ly, ly]`.
///
/// For periodic grids the point `x_i = -lx + i·hx` with `i = 0..nx` omits the
/// right edge (it is identified with the left one). Dirichlet grids use the
/// same sampling; their wavefunctions vanish at `±l` by construction of the
/// modal basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub boundary: Boundary,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, boundary: Boundary) -> Result<Self> {
        for (label, n) in [("nx", nx), ("ny", ny)] {
            if n < 16 {
                return Err(NcqmError::invalid(format!("{label} = {n} must be >= 16")));
            }
            if n % 2 != 0 {
                return Err(NcqmError::invalid(format!("{label} = {n} must be even")));
            }
        }
        for (label, l) in [("lx", lx), ("ly", ly)] {
            if !(l > 0.0) || !l.is_finite() {
                return Err(NcqmError::invalid(format!("{label} = {l} must be positive and finite")));
            }
        }
        Ok(Grid2D { nx, ny, lx, ly, boundary })
    }

    pub fn periodic(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::new(nx, ny, lx, ly, Boundary::Periodic)
    }

    pub fn dirichlet(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::new(nx, ny, lx, ly, Boundary::Dirichlet)
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        2.0 * self.ly / self.ny as f64
    }

    /// Quadrature weight of one grid cell.
    pub fn cell(&self) -> f64 {
        self.hx() * self.hy()
    }

    pub fn npoints(&self) -> usize {
        self.nx * self.ny
    }

    pub fn x(&self, ix: usize) -> f64 {
        -self.lx + ix as f64 * self.hx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        -self.ly + iy as f64 * self.hy()
    }

    /// Row-major flattening; the one canonical ordering used crate-wide.
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn require_boundary(&self, expected: Boundary) -> Result<()> {
        if self.boundary == expected {
            Ok(())
        } else {
            Err(NcqmError::UnsupportedBoundary {
                expected: expected.name(),
                found: self.boundary.name(),
            })
        }
    }
}

/// Mass and ħ. Defaults to natural units m = ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub mass: f64,
    pub hbar: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams { mass: 1.0, hbar: 1.0 }
    }
}

impl PhysParams {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(NcqmError::invalid(format!("mass = {mass} must be positive")));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(NcqmError::invalid(format!("hbar = {hbar} must be positive")));
        }
        Ok(PhysParams { mass, hbar })
    }
}

/// The antisymmetric noncommutativity tensor θ_ij = θ ε_ij with ε_12 = +1.
///
/// Built verbatim into x̂_i = x_i − (i/2) θ_ij ∂_j, which with the hermitian
/// momentum p̂ = −iħ∂ makes [x̂₁, x̂₂] = −iθ. The star product carries the
/// opposite sign, x⋆y − y⋆x = +iθ; [`ThetaTensor::flipped`] switches between
/// the two conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaTensor {
    pub theta: f64,
}

impl ThetaTensor {
    pub fn new(theta: f64) -> Self {
        ThetaTensor { theta }
    }

    pub fn zero() -> Self {
        ThetaTensor { theta: 0.0 }
    }

    /// θ_ij as a matrix entry; indices are 1-based (i, j ∈ {1, 2}).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (1, 2) => self.theta,
            (2, 1) => -self.theta,
            _ => 0.0,
        }
    }

    /// The opposite sign convention, recovering [x̂₁, x̂₂] = +iθ.
    pub fn flipped(&self) -> Self {
        ThetaTensor { theta: -self.theta }
    }
}
