//! Python bindings: the main types and operations of the ncqm crate.
//!
//! Build with `cargo build -p ncqm-py --release`; the produced
//! `libncqm_py.so` imports as `ncqm_py` once renamed (see
//! `python/smoke_test.py`, which does this automatically).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ncqm_core::algebra::{check_exotic_algebra, BoostContext};
use ncqm_core::dynamics::evolve;
use ncqm_core::grid::{Boundary, Grid2D, PhysParams, ThetaTensor};
use ncqm_core::hamiltonian::{build_linear_hamiltonian, build_nc_hamiltonian};
use ncqm_core::perturbation::{
    first_order_shift, paper_delta_e as paper_delta_e_impl, verify_integral_identities,
    PerturbationSetup,
};
use ncqm_core::potential::PolynomialPotential;
use ncqm_core::spectra::{self, EigenMethod, QuantumNumbers};
use ncqm_core::star::moyal_star;
use ncqm_core::wavefunction::WaveFunction;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn val_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Polynomial potential V(x, y) as a monomial-coefficient map.
#[pyclass(name = "Potential", from_py_object)]
#[derive(Clone)]
struct PyPotential {
    inner: PolynomialPotential,
}

#[pymethods]
impl PyPotential {
    /// V = αx + βy.
    #[staticmethod]
    fn linear(alpha: f64, beta: f64) -> Self {
        PyPotential { inner: PolynomialPotential::linear(alpha, beta) }
    }

    /// V = (ωx²/2)x² + (ωy²/2)y².
    #[staticmethod]
    fn harmonic(wx: f64, wy: f64) -> Self {
        PyPotential { inner: PolynomialPotential::harmonic(wx, wy) }
    }

    /// Isotropic harmonic plus cubic and quartic couplings.
    #[staticmethod]
    fn anharmonic(omega: f64, alpha_c: f64, gamma: f64) -> Self {
        PyPotential { inner: PolynomialPotential::anharmonic(omega, alpha_c, gamma) }
    }

    /// Parse the JSON schema ({"monomials": [...]} or named shortcuts).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPotential { inner: serde_json::from_str(text).map_err(val_err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    /// Moyal star product with another polynomial; returns (result, truncated).
    fn star(&self, other: &PyPotential, theta: f64, max_order: u32) -> (PyPotential, bool) {
        let s = moyal_star(&self.inner, &other.inner, &ThetaTensor::new(theta), max_order);
        (PyPotential { inner: s.result }, s.truncated)
    }

    /// Coefficient of x^ax y^ay as (re, im).
    fn coeff(&self, ax: u32, ay: u32) -> (f64, f64) {
        let c = self.inner.coeff(ax, ay);
        (c.re, c.im)
    }

    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn __repr__(&self) -> String {
        format!("Potential({})", serde_json::to_string(&self.inner).unwrap_or_default())
    }
}

/// Closed-form NC oscillator level ω√(1 + θ²ω²/4)(n₁ + n₂ + 1).
#[pyfunction]
fn nc_ho_energy(n1: u32, n2: u32, omega: f64, theta: f64) -> PyResult<f64> {
    spectra::nc_ho_energy(QuantumNumbers::new(n1, n2), omega, &ThetaTensor::new(theta))
        .map_err(val_err)
}

/// Airy function of the first kind.
#[pyfunction]
fn airy_ai(x: f64) -> f64 {
    ncqm_core::special::airy_ai(x)
}

/// Physicists' Hermite polynomial H_n(x).
#[pyfunction]
fn hermite(n: u32, x: f64) -> f64 {
    ncqm_core::special::hermite_poly(n, x)
}

/// Confluent hypergeometric ₁F₁(a; b; z).
#[pyfunction]
fn kummer_1f1(a: f64, b: f64, z: f64) -> PyResult<f64> {
    ncqm_core::special::kummer_1f1(a, b, z).map_err(val_err)
}

/// Run the exotic-algebra commutator checks; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (nx, l, mass, theta, tol = 1e-6, seed = 424242))]
fn algebra_report(nx: usize, l: f64, mass: f64, theta: f64, tol: f64, seed: u64) -> PyResult<String> {
    let grid = Grid2D::periodic(nx, nx, l, l).map_err(val_err)?;
    let phys = PhysParams::new(mass, 1.0).map_err(val_err)?;
    let report = check_exotic_algebra(
        &grid,
        &phys,
        &ThetaTensor::new(theta),
        &BoostContext::default(),
        tol,
        seed,
    )
    .map_err(err)?;
    serde_json::to_string(&report.to_json()).map_err(err)
}

/// Lowest-k spectrum of the Bopp-shifted Hamiltonian for a potential.
#[pyfunction]
#[pyo3(signature = (potential, nx, l, theta, k, method = "dense"))]
fn spectrum(
    potential: &PyPotential,
    nx: usize,
    l: f64,
    theta: f64,
    k: usize,
    method: &str,
) -> PyResult<Vec<f64>> {
    let m = match method {
        "dense" => EigenMethod::Dense,
        "lanczos" => EigenMethod::Lanczos,
        other => return Err(val_err(format!("method must be dense|lanczos, got {other}"))),
    };
    let grid = Grid2D::periodic(nx, nx, l, l).map_err(val_err)?;
    let h = build_nc_hamiltonian(
        &potential.inner,
        &grid,
        &PhysParams::default(),
        &ThetaTensor::new(theta),
    )
    .map_err(err)?;
    let res = spectra::solve_eigen(&h, k, m).map_err(err)?;
    Ok(res.eigenvalues)
}

/// Lowest-k spectrum of the linear potential in a Dirichlet box.
#[pyfunction]
fn linear_spectrum(alpha: f64, beta: f64, nx: usize, l: f64, theta: f64, k: usize) -> PyResult<Vec<f64>> {
    let grid = Grid2D::new(nx, nx, l, l, Boundary::Dirichlet).map_err(val_err)?;
    let h = build_linear_hamiltonian(alpha, beta, &grid, &PhysParams::default(), &ThetaTensor::new(theta))
        .map_err(err)?;
    let res = spectra::solve_eigen(&h, k, EigenMethod::Dense).map_err(err)?;
    Ok(res.eigenvalues)
}

/// First-order anharmonic energy shift ⟨Ψ₀|ΔĤ|Ψ₀⟩ (ladder-operator route).
#[pyfunction]
#[pyo3(signature = (n1, n2, omega, theta, alpha_c, gamma, basis_size = 12))]
fn perturbation_shift(
    n1: u32,
    n2: u32,
    omega: f64,
    theta: f64,
    alpha_c: f64,
    gamma: f64,
    basis_size: usize,
) -> PyResult<f64> {
    let setup = PerturbationSetup::new(QuantumNumbers::new(n1, n2), omega, theta, alpha_c, gamma)
        .map_err(val_err)?;
    Ok(first_order_shift(&setup, basis_size).map_err(err)?.value)
}

/// The transcribed closed-form first-order correction.
#[pyfunction]
fn paper_delta_e(n1: u32, n2: u32, omega: f64, theta: f64, gamma: f64) -> PyResult<f64> {
    let setup = PerturbationSetup::new(QuantumNumbers::new(n1, n2), omega, theta, 0.0, gamma)
        .map_err(val_err)?;
    Ok(paper_delta_e_impl(&setup))
}

/// Integral-identity errata report as JSON.
#[pyfunction]
fn errata_report(max_n: u32) -> PyResult<String> {
    let report = verify_integral_identities(max_n).map_err(val_err)?;
    serde_json::to_string(&report.to_json()).map_err(err)
}

/// Crank–Nicolson evolution of a Gaussian packet; returns
/// (times, ⟨x₁⟩ series, norm series).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (potential, nx, l, theta, x0, y0, sigma, dt, steps))]
fn evolve_gaussian(
    potential: &PyPotential,
    nx: usize,
    l: f64,
    theta: f64,
    x0: f64,
    y0: f64,
    sigma: f64,
    dt: f64,
    steps: usize,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let grid = Grid2D::periodic(nx, nx, l, l).map_err(val_err)?;
    let phys = PhysParams::default();
    let theta_t = ThetaTensor::new(theta);
    let h = build_nc_hamiltonian(&potential.inner, &grid, &phys, &theta_t).map_err(err)?;
    let psi0 = WaveFunction::gaussian(grid, x0, y0, sigma, 0.0, 0.0).map_err(val_err)?;
    let trace = evolve(&h, &psi0, dt, steps, &phys, &potential.inner, &theta_t).map_err(err)?;
    Ok((trace.times, trace.x1, trace.norm))
}

#[pymodule]
fn ncqm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPotential>()?;
    m.add_function(wrap_pyfunction!(nc_ho_energy, m)?)?;
    m.add_function(wrap_pyfunction!(airy_ai, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_1f1, m)?)?;
    m.add_function(wrap_pyfunction!(algebra_report, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(linear_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(perturbation_shift, m)?)?;
    m.add_function(wrap_pyfunction!(paper_delta_e, m)?)?;
    m.add_function(wrap_pyfunction!(errata_report, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_gaussian, m)?)?;
    Ok(())
}
