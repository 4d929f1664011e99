//! Eigensolvers and closed-form reference solutions: the noncommutative
//! oscillator spectrum and wavefunctions, and the Airy profile of the linear
//! potential.
//!
//! Two independent solver routes: a dense LAPACK path (full tridiagonal
//! reduction, lowest-k extraction) and a hand-written Lanczos iteration with
//! full reorthogonalization driven by matrix-free operator applications.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dirichlet::DirichletSpace;
use crate::error::{NcqmError, Result};
use crate::grid::{Grid2D, ThetaTensor};
use crate::lapack;
use crate::operator::{OpSpace, OperatorMatrix};
use crate::special::{airy_ai, hermite_poly};

pub use crate::special::{airy_ai as airy, hermite_poly as hermite, kummer_1f1};
use crate::wavefunction::WaveFunction;

/// Oscillator quantum numbers (n₁, n₂ ≥ 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuantumNumbers {
    pub n1: u32,
    pub n2: u32,
}

impl QuantumNumbers {
    pub fn new(n1: u32, n2: u32) -> Self {
        QuantumNumbers { n1, n2 }
    }
}

/// β = ω²(1 + θ²ω²/4), the stiffness controlling the rescaled NC oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StiffnessBeta {
    pub beta: f64,
}

impl StiffnessBeta {
    pub fn from_omega_theta(omega: f64, theta: &ThetaTensor) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(NcqmError::invalid(format!("omega = {omega} must be positive")));
        }
        let t2w2 = theta.theta * theta.theta * omega * omega;
        Ok(StiffnessBeta { beta: omega * omega * (1.0 + 0.25 * t2w2) })
    }
}

/// Eigensolver method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenMethod {
    Dense,
    Lanczos,
}

/// Sorted lowest eigenpairs with per-pair residuals ‖Hv − λv‖.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<WaveFunction>,
    pub residuals: Vec<f64>,
    pub method: EigenMethod,
    pub converged: bool,
}

impl SpectrumResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "method": self.method,
            "converged": self.converged,
            "eigenvalues": self.eigenvalues,
            "residuals": self.residuals,
        })
    }

    /// CSV slice of one eigenvector: header `x,y,re,im`, LF endings.
    pub fn eigenvector_csv(&self, index: usize) -> Option<String> {
        let wf = self.eigenvectors.get(index)?;
        let g = wf.grid();
        let mut out = String::from("x,y,re,im\n");
        for iy in 0..g.ny {
            for ix in 0..g.nx {
                let z = wf.data()[g.idx(ix, iy)];
                out.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    g.x(ix),
                    g.y(iy),
                    z.re,
                    z.im
                ));
            }
        }
        Some(out)
    }
}

/// Turn a raw eigenvector into a unit-norm WaveFunction on the grid
/// (synthesized from modal coefficients in the Dirichlet case).
fn vector_to_wavefunction(space: &OpSpace, v: &[Complex64]) -> Result<WaveFunction> {
    match space {
        OpSpace::PeriodicGrid(g) => {
            let wf = WaveFunction::new(*g, v.to_vec())?;
            Ok(wf.normalized())
        }
        OpSpace::DirichletModal { grid, .. } => {
            let ds = DirichletSpace::new(grid)?;
            let wf = WaveFunction::new(*grid, ds.synthesize(v))?;
            Ok(wf.normalized())
        }
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest k eigenpairs of a hermitian operator.
///
/// `Dense` materializes the matrix and calls LAPACK; `Lanczos` runs full
/// reorthogonalization on matrix-free applications and needs k ≪ dim. A
/// Lanczos run that stalls returns the partial result with
/// `converged = false`.
pub fn solve_eigen(h: &OperatorMatrix, k: usize, method: EigenMethod) -> Result<SpectrumResult> {
    if !h.is_hermitian() {
        return Err(NcqmError::invalid(
            "solve_eigen requires an operator with a verified hermitian claim",
        ));
    }
    let dim = h.dim();
    if k == 0 || k > dim {
        return Err(NcqmError::invalid(format!("k = {k} out of range for dim {dim}")));
    }
    match method {
        EigenMethod::Dense => {
            let mut dense = h.to_dense();
            let (vals, vecs) = lapack::hermitian_lowest_eigenpairs(&mut dense, dim, k)?;
            drop(dense);
            finish_result(h, vals, |i| vecs[i * dim..(i + 1) * dim].to_vec(), k, EigenMethod::Dense, true)
        }
        EigenMethod::Lanczos => {
            if k * 4 > dim {
                return Err(NcqmError::invalid(format!(
                    "lanczos needs k ≪ dim (got k = {k}, dim = {dim}); use the dense method"
                )));
            }
            let (vals, vecs, converged) = lanczos_lowest(h, k, 0x5eed_cafe)?;
            finish_result(h, vals, |i| vecs[i].clone(), k, EigenMethod::Lanczos, converged)
        }
    }
}

fn finish_result(
    h: &OperatorMatrix,
    vals: Vec<f64>,
    vec_at: impl Fn(usize) -> Vec<Complex64>,
    k: usize,
    method: EigenMethod,
    converged: bool,
) -> Result<SpectrumResult> {
    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for i in 0..vals.len().min(k) {
        let v = vec_at(i);
        let hv = h.apply_raw(&v)?;
        let mut r = 0.0_f64;
        for (hvi, vi) in hv.iter().zip(&v) {
            r += (hvi - vals[i] * vi).norm_sqr();
        }
        residuals.push(r.sqrt() / vec_norm(&v).max(1e-300));
        eigenvalues.push(vals[i]);
        eigenvectors.push(vector_to_wavefunction(h.space(), &v)?);
    }
    Ok(SpectrumResult { eigenvalues, eigenvectors, residuals, method, converged })
}

/// Lanczos with full reorthogonalization; returns (values, vectors, converged).
fn lanczos_lowest(
    h: &OperatorMatrix,
    k: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>, bool)> {
    let dim = h.dim();
    let max_krylov = dim.min((10 * k + 200).max(60));
    let tol = 1e-10;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let n0 = vec_norm(&v);
    v.iter_mut().for_each(|z| *z /= n0);

    let mut basis: Vec<Vec<Complex64>> = vec![v.clone()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut converged = false;

    for j in 0..max_krylov {
        let mut w = h.apply_raw(&basis[j])?;
        if j > 0 {
            let b = beta[j - 1];
            for (wi, pi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= b * pi;
            }
        }
        let a: Complex64 = basis[j].iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
        alpha.push(a.re);
        for (wi, pi) in w.iter_mut().zip(&basis[j]) {
            *wi -= a.re * pi;
        }
        // full reorthogonalization against every Lanczos vector
        for prev in &basis {
            let proj: Complex64 = prev.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= proj * pi;
            }
        }
        let b_next = vec_norm(&w);

        // convergence check on the lowest-k Ritz residuals |β·s_last|
        if alpha.len() >= k + 2 || b_next < 1e-13 {
            let m = alpha.len();
            let (ritz, z) = lapack::tridiagonal_eigenpairs(&alpha, &beta[..m - 1])?;
            let worst = (0..k.min(m))
                .map(|i| (b_next * z[(m - 1) + i * m]).abs())
                .fold(0.0_f64, f64::max);
            let scale = ritz
                .iter()
                .take(k)
                .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
                .max(1.0);
            if worst <= tol * scale || b_next < 1e-13 {
                converged = true;
                let vectors = ritz_vectors(&basis, &z, m, k);
                return Ok((ritz[..k.min(m)].to_vec(), vectors, converged));
            }
        }
        if b_next < 1e-13 {
            break;
        }
        beta.push(b_next);
        let vnext: Vec<Complex64> = w.iter().map(|z| z / b_next).collect();
        basis.push(vnext);
    }

    // out of iterations: return the partial (flagged) result
    let m = alpha.len();
    let (ritz, z) = lapack::tridiagonal_eigenpairs(&alpha, &beta[..m.saturating_sub(1)])?;
    let vectors = ritz_vectors(&basis, &z, m, k);
    Ok((ritz[..k.min(m)].to_vec(), vectors, converged))
}

fn ritz_vectors(
    basis: &[Vec<Complex64>],
    z: &[f64],
    m: usize,
    k: usize,
) -> Vec<Vec<Complex64>> {
    let dim = basis[0].len();
    (0..k.min(m))
        .map(|i| {
            let mut v = vec![Complex64::default(); dim];
            for (j, q) in basis.iter().take(m).enumerate() {
                let c = z[j + i * m];
                if c == 0.0 {
                    continue;
                }
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi += c * qi;
                }
            }
            v
        })
        .collect()
}

/// Closed-form NC oscillator level E = ω √(1 + θ²ω²/4) · (n₁ + n₂ + 1),
/// i.e. √β (n₁ + n₂ + 1).
pub fn nc_ho_energy(q: QuantumNumbers, omega: f64, theta: &ThetaTensor) -> Result<f64> {
    let beta = StiffnessBeta::from_omega_theta(omega, theta)?;
    let n = (q.n1 + q.n2) as f64;
    Ok(beta.beta.sqrt() * (n + 1.0))
}

/// Full closed-form spectrum of the discretized NC oscillator including the
/// rotational splitting: E(n_r, m_ℓ) = √β (2n_r + |m_ℓ| + 1) + (θω²/2) m_ℓ.
/// Returns the lowest `count` levels (with multiplicity), sorted.
pub fn nc_ho_split_levels(omega: f64, theta: &ThetaTensor, count: usize) -> Result<Vec<f64>> {
    let beta = StiffnessBeta::from_omega_theta(omega, theta)?.beta.sqrt();
    let split = 0.5 * theta.theta * omega * omega;
    let mut levels = Vec::new();
    let nmax = 2 * count as i64 + 4;
    for n in 0..=nmax {
        for ml in (-n..=n).step_by(2) {
            // n = 2 n_r + |m_ℓ| with n_r ≥ 0 ⇒ m_ℓ ranges over n, n−2, …, −n
            let e = beta * (n as f64 + 1.0) + split * ml as f64;
            levels.push(e);
        }
    }
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.truncate(count);
    Ok(levels)
}

/// Sample the closed-form NC oscillator eigenfunction
/// H_{n₁}(ωx/β^{1/4}) H_{n₂}(ωy/β^{1/4}) exp(−ω²(x²+y²)/(2√β)) on the grid
/// and normalize numerically (the printed prefactor is not dimensionally
/// consistent, so the shape is what is reproduced).
pub fn nc_ho_wavefunction(
    q: QuantumNumbers,
    omega: f64,
    theta: &ThetaTensor,
    grid: &Grid2D,
) -> Result<WaveFunction> {
    let beta = StiffnessBeta::from_omega_theta(omega, theta)?.beta;
    let lam = omega / beta.powf(0.25); // effective width scale; λ² = ω²/√β
    let wf = WaveFunction::from_fn(*grid, |x, y| {
        let h1 = hermite_poly(q.n1, lam * x);
        let h2 = hermite_poly(q.n2, lam * y);
        Complex64::new(h1 * h2 * (-(lam * lam) * (x * x + y * y) / 2.0).exp(), 0.0)
    })?;
    Ok(wf.normalized())
}

/// Airy profile for the linear potential: ψ(x, y) = Ai((E − z)/c) with
/// z = αx + βy and c = (α² + β²)^{1/3}, the scaling for which
/// (α² + β²) ψ'' + (z − E) ψ = 0 holds along z.
pub fn linear_solution(alpha: f64, beta: f64, energy: f64, grid: &Grid2D) -> Result<WaveFunction> {
    if alpha == 0.0 && beta == 0.0 {
        return Err(NcqmError::invalid("linear profile needs (alpha, beta) != (0, 0)"));
    }
    let c = (alpha * alpha + beta * beta).powf(1.0 / 3.0);
    WaveFunction::from_fn(*grid, |x, y| {
        let z = alpha * x + beta * y;
        Complex64::new(airy_ai((energy - z) / c), 0.0)
    })
}
