//! Modal Galerkin discretization of Dirichlet boxes.
//!
//! Basis per axis: φ_k(ξ) = (L_k(ξ) − L_{k+2}(ξ))/√(4k+6) on ξ ∈ [−1, 1],
//! k = 0..M−1, which vanishes at ±1 and makes the stiffness matrix
//! ⟨φ'_j, φ'_k⟩ the identity. Mass, coordinate and derivative blocks are
//! banded with closed-form entries; a Cholesky factorization of the mass
//! matrix turns everything into ordinary hermitian matrices on an
//! orthonormal basis. Polynomials converge geometrically for the analytic
//! eigenfunctions of polynomial potentials, including wall-contact Airy
//! states, which is what the gauge-equivalence tolerances of the linear
//! sector need.
//!
//! Modal resolution is tied to the grid as M = n/2 per axis; wavefunctions
//! are synthesized back onto the uniform grid for I/O.

use num_complex::Complex64;

use crate::error::{NcqmError, Result};
use crate::grid::{Boundary, Grid2D};

/// Dense real matrix, column-major.
#[derive(Debug, Clone)]
pub(crate) struct RealMat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RealMat {
    pub fn zeros(n: usize) -> Self {
        RealMat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i + i * n] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.n]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i + j * self.n] = v;
    }

    /// Upper-triangular Cholesky factor R with self = Rᵀ R.
    pub fn cholesky_upper(&self) -> Result<RealMat> {
        let n = self.n;
        let mut r = RealMat::zeros(n);
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= r.get(k, j) * r.get(k, j);
            }
            if d <= 0.0 {
                return Err(NcqmError::invalid(
                    "mass matrix not positive definite (cholesky failed)",
                ));
            }
            let rjj = d.sqrt();
            r.set(j, j, rjj);
            for i in j + 1..n {
                let mut s = self.get(j, i);
                for k in 0..j {
                    s -= r.get(k, j) * r.get(k, i);
                }
                r.set(j, i, s / rjj);
            }
        }
        Ok(r)
    }

    /// Similarity transform R^{-T} A R^{-1} for an upper-triangular R.
    pub fn congruence_with_inv(&self, r: &RealMat) -> RealMat {
        let n = self.n;
        // B = A R^{-1}: solve B R = A row-wise (Rᵀ y = aᵀ forward substitution)
        let mut b = RealMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= b.get(i, k) * r.get(k, j);
                }
                b.set(i, j, s / r.get(j, j));
            }
        }
        // C = R^{-T} B: solve Rᵀ C = B column-wise (forward substitution)
        let mut c = RealMat::zeros(n);
        for j in 0..n {
            for i in 0..n {
                let mut s = b.get(i, j);
                for k in 0..i {
                    s -= r.get(k, i) * c.get(k, j);
                }
                c.set(i, j, s / r.get(i, i));
            }
        }
        c
    }

}

fn dnorm(k: usize) -> f64 {
    1.0 / (4.0 * k as f64 + 6.0).sqrt()
}

/// Mass matrix ⟨φ_j, φ_k⟩ (pentadiagonal, bands 0 and ±2).
fn mass_matrix(m: usize) -> RealMat {
    let mut mm = RealMat::zeros(m);
    for j in 0..m {
        let jf = j as f64;
        mm.set(j, j, dnorm(j).powi(2) * (2.0 / (2.0 * jf + 1.0) + 2.0 / (2.0 * jf + 5.0)));
    }
    for j in 0..m.saturating_sub(2) {
        let jf = j as f64;
        let v = -dnorm(j) * dnorm(j + 2) * 2.0 / (2.0 * jf + 5.0);
        mm.set(j, j + 2, v);
        mm.set(j + 2, j, v);
    }
    mm
}

/// ⟨φ_j, ξ φ_k⟩ via ξL_k = ((k+1)L_{k+1} + kL_{k−1})/(2k+1).
fn coordinate_matrix(m: usize) -> RealMat {
    let mut x = RealMat::zeros(m);
    let lip = |a: i64, b: i64| -> f64 {
        if a == b && a >= 0 {
            2.0 / (2.0 * a as f64 + 1.0)
        } else {
            0.0
        }
    };
    for k in 0..m {
        let kf = k as f64;
        // ξ(L_k − L_{k+2}) expanded over Legendre polynomials
        let terms: [(i64, f64); 4] = [
            (k as i64 + 1, (kf + 1.0) / (2.0 * kf + 1.0) - (kf + 2.0) / (2.0 * kf + 5.0)),
            (k as i64 - 1, kf / (2.0 * kf + 1.0)),
            (k as i64 + 3, -(kf + 3.0) / (2.0 * kf + 5.0)),
            (-1, 0.0),
        ];
        for j in k.saturating_sub(3)..(k + 4).min(m) {
            let mut s = 0.0;
            for &(deg, c) in &terms {
                if deg < 0 || c == 0.0 {
                    continue;
                }
                s += c * (lip(j as i64, deg) - lip(j as i64 + 2, deg));
            }
            if s != 0.0 {
                x.set(j, k, dnorm(j) * dnorm(k) * s);
            }
        }
    }
    x
}

/// ⟨φ_j, φ'_k⟩ using φ'_k = −d_k (2k+3) L_{k+1}; antisymmetric bidiagonal.
fn derivative_matrix(m: usize) -> RealMat {
    let mut d = RealMat::zeros(m);
    for k in 0..m {
        let v = 2.0 * dnorm(k) * dnorm(k + 1);
        // j = k+1 term: ⟨L_{k+1}, −d_k(2k+3)L_{k+1}⟩ d_{k+1} = −2 d_k d_{k+1}
        if k + 1 < m {
            d.set(k + 1, k, -v);
            d.set(k, k + 1, v);
        }
    }
    d
}

/// Evaluate φ_k(ξ) for k = 0..m−1 at one point via the Legendre recurrence.
fn shen_basis_values(m: usize, xi: f64, out: &mut [f64]) {
    // Legendre values L_0..L_{m+1}
    let mut lkm1 = 1.0_f64; // L_0
    let mut lk = xi; // L_1
    let mut legendre = Vec::with_capacity(m + 2);
    legendre.push(lkm1);
    legendre.push(lk);
    for k in 1..(m + 1) {
        let kf = k as f64;
        let lkp1 = ((2.0 * kf + 1.0) * xi * lk - kf * lkm1) / (kf + 1.0);
        legendre.push(lkp1);
        lkm1 = lk;
        lk = lkp1;
    }
    for k in 0..m {
        out[k] = dnorm(k) * (legendre[k] - legendre[k + 2]);
    }
}

/// Orthonormalized 1D operator blocks for one axis of a Dirichlet box.
pub(crate) struct AxisBlocks {
    /// −(1/2)∂²_x (unit mass and ħ; scale by ħ²/m as needed).
    pub kinetic: RealMat,
    /// Multiplication by x.
    pub coordinate: RealMat,
    /// ∂_x (antisymmetric; multiply by −iħ for the momentum).
    pub derivative: RealMat,
    /// Synthesis matrix: grid values = synthesis · modal coefficients (n × m).
    pub synthesis: Vec<f64>,
    pub modes: usize,
}

pub(crate) fn axis_blocks(n_points: usize, half_width: f64) -> Result<AxisBlocks> {
    let m = n_points / 2;
    if m < 8 {
        return Err(NcqmError::invalid(format!(
            "dirichlet axis needs at least 16 grid points, got {n_points}"
        )));
    }
    let l = half_width;
    let mass = mass_matrix(m);
    let r = mass.cholesky_upper()?;

    // stiffness ⟨φ'_j, φ'_k⟩ = I by the d_k normalization;
    // kinetic −(1/2)∂²_x = (1/(2l²)) ⟨φ'φ'⟩ in the Galerkin sense
    let mut kinetic = RealMat::identity(m).congruence_with_inv(&r);
    for v in &mut kinetic.data {
        *v *= 1.0 / (2.0 * l * l);
    }

    let mut coordinate = coordinate_matrix(m).congruence_with_inv(&r);
    for v in &mut coordinate.data {
        *v *= l;
    }

    let mut derivative = derivative_matrix(m).congruence_with_inv(&r);
    for v in &mut derivative.data {
        *v *= 1.0 / l;
    }

    // grid synthesis: Φ(x_i, k) R^{-1}
    let mut synthesis = vec![0.0_f64; n_points * m];
    let mut row = vec![0.0_f64; m];
    for i in 0..n_points {
        let x = -l + (i as f64) * (2.0 * l / n_points as f64);
        shen_basis_values(m, x / l, &mut row);
        let transformed = r.solve_upper_transposed_row(&row);
        for (k, v) in transformed.iter().enumerate() {
            synthesis[i + k * n_points] = *v;
        }
    }

    Ok(AxisBlocks { kinetic, coordinate, derivative, synthesis, modes: m })
}

impl RealMat {
    /// Row-vector transform w = v R^{-1} (solve w R = v by forward
    /// substitution); used to push basis evaluations through the
    /// orthonormalization.
    fn solve_upper_transposed_row(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut w = v.to_vec();
        for j in 0..n {
            for k in 0..j {
                w[j] -= w[k] * self.get(k, j);
            }
            w[j] /= self.get(j, j);
        }
        w
    }
}

/// Modal description of a Dirichlet grid: blocks per axis plus bookkeeping.
pub(crate) struct DirichletSpace {
    pub x: AxisBlocks,
    pub y: AxisBlocks,
    pub grid: Grid2D,
}

impl DirichletSpace {
    pub fn new(grid: &Grid2D) -> Result<Self> {
        grid.require_boundary(Boundary::Dirichlet)?;
        Ok(DirichletSpace {
            x: axis_blocks(grid.nx, grid.lx)?,
            y: axis_blocks(grid.ny, grid.ly)?,
            grid: *grid,
        })
    }

    pub fn modal_dim(&self) -> usize {
        self.x.modes * self.y.modes
    }

    /// Kronecker assembly: (op_y ⊗ op_x) with modal index jy·mx + jx,
    /// multiplied by the complex factor, accumulated into `out` (col-major).
    pub fn accumulate_kron(
        &self,
        out: &mut [Complex64],
        factor: Complex64,
        op_x: Option<&RealMat>,
        op_y: Option<&RealMat>,
    ) {
        let (mx, my) = (self.x.modes, self.y.modes);
        let dim = mx * my;
        debug_assert_eq!(out.len(), dim * dim);
        for ky in 0..my {
            for kx in 0..mx {
                let col = (ky * mx + kx) * dim;
                match (op_x, op_y) {
                    (Some(ax), Some(ay)) => {
                        for jy in 0..my {
                            let fy = ay.get(jy, ky);
                            if fy == 0.0 {
                                continue;
                            }
                            for jx in 0..mx {
                                let fx = ax.get(jx, kx);
                                if fx != 0.0 {
                                    out[jy * mx + jx + col] += factor * (fx * fy);
                                }
                            }
                        }
                    }
                    (Some(ax), None) => {
                        let jy = ky;
                        for jx in 0..mx {
                            let fx = ax.get(jx, kx);
                            if fx != 0.0 {
                                out[jy * mx + jx + col] += factor * fx;
                            }
                        }
                    }
                    (None, Some(ay)) => {
                        let jx = kx;
                        for jy in 0..my {
                            let fy = ay.get(jy, ky);
                            if fy != 0.0 {
                                out[jy * mx + jx + col] += factor * fy;
                            }
                        }
                    }
                    (None, None) => {
                        out[ky * mx + kx + col] += factor;
                    }
                }
            }
        }
    }

    /// Synthesize modal coefficients to grid samples (row-major).
    pub fn synthesize(&self, modal: &[Complex64]) -> Vec<Complex64> {
        let (mx, my) = (self.x.modes, self.y.modes);
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        debug_assert_eq!(modal.len(), mx * my);
        // first contract x: tmp[jy, ix] = Σ_jx Syn_x[ix, jx] c[jy, jx]
        let mut tmp = vec![Complex64::default(); my * nx];
        for jy in 0..my {
            for jx in 0..mx {
                let c = modal[jy * mx + jx];
                if c == Complex64::default() {
                    continue;
                }
                let col = &self.x.synthesis[jx * nx..(jx + 1) * nx];
                for ix in 0..nx {
                    tmp[jy * nx + ix] += c * col[ix];
                }
            }
        }
        // then y: out[iy, ix] = Σ_jy Syn_y[iy, jy] tmp[jy, ix]
        let mut out = vec![Complex64::default(); nx * ny];
        for jy in 0..my {
            let col = &self.y.synthesis[jy * ny..(jy + 1) * ny];
            for iy in 0..ny {
                let w = col[iy];
                if w == 0.0 {
                    continue;
                }
                for ix in 0..nx {
                    out[iy * nx + ix] += tmp[jy * nx + ix] * w;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_matrix_matches_quadrature() {
        // crude trapezoid check of a few entries
        let m = 6;
        let mm = mass_matrix(m);
        let n = 4001;
        let h = 2.0 / (n - 1) as f64;
        let mut vals = vec![0.0; m];
        for (j, k) in [(0usize, 0usize), (1, 1), (0, 2), (3, 5), (2, 4)] {
            let mut s = 0.0;
            for i in 0..n {
                let xi = -1.0 + i as f64 * h;
                shen_basis_values(m, xi, &mut vals);
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                s += w * vals[j] * vals[k] * h;
            }
            assert!(
                (s - mm.get(j, k)).abs() < 1e-8,
                "mass[{j},{k}] quadrature {s} vs closed form {}",
                mm.get(j, k)
            );
        }
    }

    #[test]
    fn coordinate_and_derivative_match_quadrature() {
        let m = 6;
        let xm = coordinate_matrix(m);
        let dm = derivative_matrix(m);
        let n = 4001;
        let h = 2.0 / (n - 1) as f64;
        let mut vals = vec![0.0; m];
        let mut vals_dx = vec![0.0; m];
        for (j, k) in [(0usize, 1usize), (1, 2), (2, 5), (0, 3), (4, 3)] {
            let (mut sx, mut sd) = (0.0, 0.0);
            for i in 0..n {
                let xi = -1.0 + i as f64 * h;
                shen_basis_values(m, xi, &mut vals);
                // numerical derivative of φ_k
                let eps = 1e-6;
                shen_basis_values(m, (xi + eps).min(1.0), &mut vals_dx);
                let mut up = vals_dx[k];
                shen_basis_values(m, (xi - eps).max(-1.0), &mut vals_dx);
                let dn = vals_dx[k];
                let denom = ((xi + eps).min(1.0) - (xi - eps).max(-1.0)).max(1e-12);
                let dphik = (up - dn) / denom;
                up = vals[j];
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                sx += w * up * xi * vals[k] * h;
                sd += w * up * dphik * h;
            }
            assert!((sx - xm.get(j, k)).abs() < 1e-7, "X[{j},{k}] {sx} vs {}", xm.get(j, k));
            assert!((sd - dm.get(j, k)).abs() < 1e-4, "D[{j},{k}] {sd} vs {}", dm.get(j, k));
        }
    }

    #[test]
    fn particle_in_box_spectrum() {
        // pure kinetic on [−l, l]: E_k = (kπ/2l)²/2
        let blocks = axis_blocks(64, 5.0).unwrap();
        let m = blocks.modes;
        // diagonalize the small real symmetric kinetic block via LAPACK-free
        // Jacobi? Use the dense complex path instead.
        let mut a = vec![Complex64::default(); m * m];
        for j in 0..m {
            for i in 0..m {
                a[i + j * m] = Complex64::new(blocks.kinetic.get(i, j), 0.0);
            }
        }
        let (w, _z) = crate::lapack::hermitian_lowest_eigenpairs(&mut a, m, 4).unwrap();
        for (k, &wk) in w.iter().enumerate() {
            let kf = (k + 1) as f64;
            let expect = (kf * std::f64::consts::PI / 10.0).powi(2) / 2.0;
            assert!(
                (wk - expect).abs() < 1e-10 * expect.max(1.0),
                "box level {k}: {wk} vs {expect}"
            );
        }
    }

    #[test]
    fn synthesis_vanishes_at_walls() {
        let blocks = axis_blocks(32, 3.0).unwrap();
        // φ_k(±1) = 0 exactly; first grid point sits at the wall
        let npts = blocks.synthesis.len() / blocks.modes;
        for k in 0..blocks.modes {
            assert!(blocks.synthesis[k * npts].abs() < 1e-12);
        }
    }
}
