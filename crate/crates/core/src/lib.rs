//! Numerical 2+1-dimensional noncommutative quantum mechanics.
//!
//! The crate builds the coordinate, momentum, boost and rotation operators of
//! the two-dimensional exotic Galilei algebra on periodic grids, verifies
//! their commutation relations, assembles Bopp-shifted Hamiltonians for
//! polynomial potentials, solves for spectra (dense LAPACK and Lanczos
//! routes), propagates states with Crank–Nicolson and measures the
//! noncommutative Ehrenfest relations, and carries the first-order
//! perturbation theory of the anharmonic oscillator together with a
//! quadrature oracle for the underlying Hermite integral identities.

pub mod algebra;
pub mod bopp;
pub mod dirichlet;
pub mod dynamics;
pub mod error;
mod fft;
pub mod grid;
pub mod hamiltonian;
pub mod jsonfmt;
mod lapack;
pub mod operator;
pub mod perturbation;
pub mod potential;
pub mod special;
pub mod spectra;
pub mod spectral;
pub mod star;
pub mod wavefunction;

pub use bopp::{bopp_shift, PdoTerm, PseudoDiffOperator};
pub use error::{NcqmError, Result};
pub use grid::{Boundary, Grid2D, PhysParams, ThetaTensor};
pub use operator::{OpSpace, OperatorMatrix};
pub use potential::PolynomialPotential;
pub use spectral::{spectral_derivative, Axis};
pub use star::{moyal_star, StarProduct};
pub use wavefunction::{inner_product, WaveFunction};
