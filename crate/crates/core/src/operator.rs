//! Discrete linear operators with hermiticity metadata.
//!
//! Operators on periodic grids are held symbolically as sums of
//! monomial × derivative terms (applied via FFT) until a dense matrix is
//! actually needed; compositions and linear combinations stay lazy so that
//! commutator actions cost a handful of FFTs instead of dense matmuls.
//! Dirichlet-sector operators live as dense matrices over the modal
//! polynomial basis (see [`crate::dirichlet`]) and carry the modal dimension.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bopp::PseudoDiffOperator;
use crate::error::{NcqmError, Result};
use crate::fft::fft1_forward;
use crate::grid::{Boundary, Grid2D};
use crate::spectral::{apply_mixed_derivative_raw, derivative_multipliers};
use crate::wavefunction::WaveFunction;

/// The vector space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpSpace {
    /// Grid values on a periodic grid, row-major, dimension nx·ny.
    PeriodicGrid(Grid2D),
    /// Coefficients in the orthonormal Dirichlet modal basis, row-major over
    /// (my, mx) modes; wavefunction output is synthesized onto `grid`.
    DirichletModal { grid: Grid2D, mx: usize, my: usize },
}

impl OpSpace {
    pub fn dim(&self) -> usize {
        match self {
            OpSpace::PeriodicGrid(g) => g.npoints(),
            OpSpace::DirichletModal { mx, my, .. } => mx * my,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        match self {
            OpSpace::PeriodicGrid(g) => g,
            OpSpace::DirichletModal { grid, .. } => grid,
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// Symbolic pseudo-differential form (periodic grids only).
    Pdo(PseudoDiffOperator),
    /// Column-major dense matrix, shared so clones stay cheap.
    Dense(Arc<Vec<Complex64>>),
    Scaled(Complex64, Box<OperatorMatrix>),
    Sum(Vec<OperatorMatrix>),
    /// Product A·B·C… applied right to left.
    Product(Vec<OperatorMatrix>),
}

/// A discrete linear operator together with a verified hermiticity claim.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    space: OpSpace,
    repr: Repr,
    hermitian: bool,
}

/// Relative deviation allowed by the hermiticity check at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

impl OperatorMatrix {
    /// Wrap a symbolic pseudo-differential operator on a periodic grid.
    ///
    /// A hermiticity claim is verified symbolically (exact coefficient
    /// arithmetic) and rejected if violated.
    pub fn from_pdo(grid: Grid2D, pdo: PseudoDiffOperator, hermitian: bool) -> Result<Self> {
        grid.require_boundary(Boundary::Periodic)?;
        if hermitian {
            let dev = pdo.hermiticity_deviation();
            if dev > HERMITICITY_TOL {
                return Err(NcqmError::NotHermitian { deviation: dev, allowed: HERMITICITY_TOL });
            }
        }
        Ok(OperatorMatrix { space: OpSpace::PeriodicGrid(grid), repr: Repr::Pdo(pdo), hermitian })
    }

    /// Wrap a dense column-major matrix; a hermiticity claim is verified
    /// entrywise: max|A − A†| ≤ 1e-12 · max|A|.
    pub fn from_dense(space: OpSpace, data: Vec<Complex64>, hermitian: bool) -> Result<Self> {
        let n = space.dim();
        if data.len() != n * n {
            return Err(NcqmError::ShapeMismatch {
                context: "dense operator buffer vs space dimension",
                left: data.len(),
                right: n * n,
            });
        }
        if hermitian {
            let dev = dense_hermiticity_deviation(&data, n);
            if dev > HERMITICITY_TOL {
                return Err(NcqmError::NotHermitian { deviation: dev, allowed: HERMITICITY_TOL });
            }
        }
        Ok(OperatorMatrix { space, repr: Repr::Dense(Arc::new(data)), hermitian })
    }

    pub fn identity(space: OpSpace) -> Self {
        OperatorMatrix {
            space,
            repr: Repr::Pdo(PseudoDiffOperator::identity()),
            hermitian: true,
        }
        .fix_identity_repr()
    }

    fn fix_identity_repr(mut self) -> Self {
        // modal spaces cannot use the Pdo representation; store identity densely
        if let OpSpace::DirichletModal { .. } = self.space {
            let n = self.space.dim();
            let mut data = vec![Complex64::default(); n * n];
            for i in 0..n {
                data[i + i * n] = Complex64::new(1.0, 0.0);
            }
            self.repr = Repr::Dense(Arc::new(data));
        }
        self
    }

    pub fn space(&self) -> &OpSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// The symbolic form, when this operator is a plain pseudo-differential sum.
    pub fn as_pdo(&self) -> Option<&PseudoDiffOperator> {
        match &self.repr {
            Repr::Pdo(p) => Some(p),
            _ => None,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let hermitian = self.hermitian && c.im == 0.0;
        match &self.repr {
            Repr::Pdo(p) => OperatorMatrix {
                space: self.space,
                repr: Repr::Pdo(p.scaled(c)),
                hermitian,
            },
            _ => OperatorMatrix {
                space: self.space,
                repr: Repr::Scaled(c, Box::new(self.clone())),
                hermitian,
            },
        }
    }

    pub fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(NcqmError::ShapeMismatch {
                context: "operators on different spaces",
                left: self.dim(),
                right: other.dim(),
            })
        }
    }

    /// Lazy sum. Symbolic forms merge; anything else stays a deferred sum.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let hermitian = self.hermitian && other.hermitian;
        if let (Repr::Pdo(a), Repr::Pdo(b)) = (&self.repr, &other.repr) {
            return Ok(OperatorMatrix {
                space: self.space,
                repr: Repr::Pdo(a.plus(b)),
                hermitian,
            });
        }
        Ok(OperatorMatrix {
            space: self.space,
            repr: Repr::Sum(vec![self.clone(), other.clone()]),
            hermitian,
        })
    }

    /// Lazy composition self∘other (self applied after other).
    ///
    /// No hermiticity is claimed for products (AB is hermitian only when A
    /// and B commute); callers needing the claim must verify and re-wrap.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(OperatorMatrix {
            space: self.space,
            repr: Repr::Product(vec![self.clone(), other.clone()]),
            hermitian: false,
        })
    }

    /// Apply to a raw coefficient vector (grid values or modal coefficients).
    pub fn apply_raw(&self, input: &[Complex64]) -> Result<Vec<Complex64>> {
        if input.len() != self.dim() {
            return Err(NcqmError::ShapeMismatch {
                context: "operator apply: vector length",
                left: input.len(),
                right: self.dim(),
            });
        }
        Ok(self.apply_unchecked(input))
    }

    fn apply_unchecked(&self, input: &[Complex64]) -> Vec<Complex64> {
        match &self.repr {
            Repr::Pdo(pdo) => {
                let grid = *self.space.grid();
                apply_pdo(pdo, &grid, input)
            }
            Repr::Dense(m) => dense_matvec(m, self.dim(), input),
            Repr::Scaled(c, inner) => {
                let mut v = inner.apply_unchecked(input);
                for z in &mut v {
                    *z *= c;
                }
                v
            }
            Repr::Sum(parts) => {
                let mut acc = vec![Complex64::default(); input.len()];
                for p in parts {
                    let v = p.apply_unchecked(input);
                    for (a, b) in acc.iter_mut().zip(&v) {
                        *a += b;
                    }
                }
                acc
            }
            Repr::Product(parts) => {
                let mut v = input.to_vec();
                for p in parts.iter().rev() {
                    v = p.apply_unchecked(&v);
                }
                v
            }
        }
    }

    /// Apply to a wavefunction sampled on the operator's periodic grid.
    pub fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        match &self.space {
            OpSpace::PeriodicGrid(g) => {
                if psi.grid() != g {
                    return Err(NcqmError::ShapeMismatch {
                        context: "operator grid vs wavefunction grid",
                        left: g.npoints(),
                        right: psi.grid().npoints(),
                    });
                }
                let out = self.apply_raw(psi.data())?;
                WaveFunction::new(*g, out)
            }
            OpSpace::DirichletModal { .. } => Err(NcqmError::invalid(
                "modal operators act on coefficient vectors; use apply_raw",
            )),
        }
    }

    /// Materialize the dense column-major matrix.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.dim();
        match &self.repr {
            Repr::Dense(m) => m.as_ref().clone(),
            Repr::Pdo(pdo) => assemble_pdo_dense(pdo, self.space.grid()),
            Repr::Scaled(c, inner) => {
                let mut m = inner.to_dense();
                for z in &mut m {
                    *z *= c;
                }
                m
            }
            Repr::Sum(parts) => {
                let mut acc = vec![Complex64::default(); n * n];
                for p in parts {
                    let m = p.to_dense();
                    for (a, b) in acc.iter_mut().zip(&m) {
                        *a += b;
                    }
                }
                acc
            }
            Repr::Product(parts) => {
                let mut acc: Option<Vec<Complex64>> = None;
                for p in parts.iter().rev() {
                    let m = p.to_dense();
                    acc = Some(match acc {
                        None => m,
                        Some(prev) => dense_matmul(&m, &prev, n),
                    });
                }
                acc.unwrap_or_else(|| {
                    let mut id = vec![Complex64::default(); n * n];
                    for i in 0..n {
                        id[i + i * n] = Complex64::new(1.0, 0.0);
                    }
                    id
                })
            }
        }
    }

    /// Cache the dense form (the matrix is shared by clones afterwards).
    pub fn densified(&self) -> Self {
        match self.repr {
            Repr::Dense(_) => self.clone(),
            _ => OperatorMatrix {
                space: self.space,
                repr: Repr::Dense(Arc::new(self.to_dense())),
                hermitian: self.hermitian,
            },
        }
    }

    /// Sampled hermiticity residual max |⟨φ,Aψ⟩ − conj⟨ψ,Aφ⟩| on seeded
    /// random unit pairs, normalized by the sampled operator scale.
    pub fn hermiticity_residual_sampled(&self, pairs: usize, seed: u64) -> f64 {
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_dev = 0.0_f64;
        for _ in 0..pairs {
            let phi = random_unit_vector(n, &mut rng);
            let psi = random_unit_vector(n, &mut rng);
            let a_psi = self.apply_unchecked(&psi);
            let a_phi = self.apply_unchecked(&phi);
            let lhs: Complex64 = phi.iter().zip(&a_psi).map(|(a, b)| a.conj() * b).sum();
            let rhs: Complex64 = psi.iter().zip(&a_phi).map(|(a, b)| a.conj() * b).sum();
            let scale = a_psi.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
            max_dev = max_dev.max((lhs - rhs.conj()).norm() / scale);
        }
        max_dev
    }
}

fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

pub(crate) fn dense_matvec(m: &[Complex64], n: usize, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::default(); n];
    for (j, &xj) in x.iter().enumerate() {
        if xj == Complex64::default() {
            continue;
        }
        let col = &m[j * n..(j + 1) * n];
        for (yi, &mij) in y.iter_mut().zip(col) {
            *yi += mij * xj;
        }
    }
    y
}

pub(crate) fn dense_matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    // column-major: C[:,j] = A · B[:,j]
    let mut c = vec![Complex64::default(); n * n];
    for j in 0..n {
        let bj = &b[j * n..(j + 1) * n];
        let cj = &mut c[j * n..(j + 1) * n];
        for (k, &bkj) in bj.iter().enumerate() {
            if bkj == Complex64::default() {
                continue;
            }
            let ak = &a[k * n..(k + 1) * n];
            for (ci, &aik) in cj.iter_mut().zip(ak) {
                *ci += aik * bkj;
            }
        }
    }
    c
}

pub(crate) fn dense_hermiticity_deviation(m: &[Complex64], n: usize) -> f64 {
    let mut max_entry = 0.0_f64;
    let mut max_dev = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let a = m[i + j * n];
            max_entry = max_entry.max(a.norm());
            let b = m[j + i * n];
            max_dev = max_dev.max((a - b.conj()).norm());
        }
    }
    if max_entry == 0.0 {
        0.0
    } else {
        max_dev / max_entry
    }
}

/// Apply a pseudo-differential sum via FFT derivatives, grouping terms by
/// derivative multi-index so each (dx, dy) costs one FFT round trip.
fn apply_pdo(pdo: &PseudoDiffOperator, grid: &Grid2D, input: &[Complex64]) -> Vec<Complex64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut out = vec![Complex64::default(); input.len()];
    let mut terms: Vec<_> = pdo.terms().collect();
    terms.sort_by_key(|t| (t.deriv_x, t.deriv_y));

    let mut i = 0;
    while i < terms.len() {
        let (dx, dy) = (terms[i].deriv_x, terms[i].deriv_y);
        let mut field = input.to_vec();
        apply_mixed_derivative_raw(&mut field, grid, dx, dy);
        while i < terms.len() && terms[i].deriv_x == dx && terms[i].deriv_y == dy {
            let t = terms[i];
            for iy in 0..ny {
                let ypow = grid.y(iy).powi(t.pow_y as i32);
                for ix in 0..nx {
                    let w = t.coeff * grid.x(ix).powi(t.pow_x as i32) * ypow;
                    let idx = iy * nx + ix;
                    out[idx] += w * field[idx];
                }
            }
            i += 1;
        }
    }
    out
}

/// 1D Fourier differentiation matrix of the given order, built column-wise
/// through the same FFT multipliers the fast path uses.
fn fourier_derivative_matrix(n: usize, half_width: f64, order: u32) -> Vec<Complex64> {
    let mut m = vec![Complex64::default(); n * n];
    if order == 0 {
        for i in 0..n {
            m[i + i * n] = Complex64::new(1.0, 0.0);
        }
        return m;
    }
    let mult = derivative_multipliers(n, half_width, order);
    // Column j: inverse transform of mult ⊙ F(e_j); F(e_j)_k = exp(−2πi jk/n).
    let mut col = vec![Complex64::default(); n];
    for j in 0..n {
        col.fill(Complex64::default());
        col[j] = Complex64::new(1.0, 0.0);
        fft1_forward(&mut col);
        for (z, f) in col.iter_mut().zip(&mult) {
            *z *= f;
        }
        crate::fft::fft1_inverse(&mut col);
        m[j * n..(j + 1) * n].copy_from_slice(&col);
    }
    m
}

/// Dense assembly of a pseudo-differential sum, exploiting the separable
/// structure diag(x^px y^py) · (Dx^{dx} ⊗ Dy^{dy}).
fn assemble_pdo_dense(pdo: &PseudoDiffOperator, grid: &Grid2D) -> Vec<Complex64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let dim = nx * ny;
    let mut m = vec![Complex64::default(); dim * dim];
    let xs: Vec<f64> = (0..nx).map(|i| grid.x(i)).collect();
    let ys: Vec<f64> = (0..ny).map(|i| grid.y(i)).collect();

    for t in pdo.terms() {
        let xpow: Vec<f64> = xs.iter().map(|x| x.powi(t.pow_x as i32)).collect();
        let ypow: Vec<f64> = ys.iter().map(|y| y.powi(t.pow_y as i32)).collect();
        match (t.deriv_x, t.deriv_y) {
            (0, 0) => {
                for iy in 0..ny {
                    for ix in 0..nx {
                        let idx = iy * nx + ix;
                        m[idx + idx * dim] += t.coeff * xpow[ix] * ypow[iy];
                    }
                }
            }
            (dx, 0) => {
                let dmat = fourier_derivative_matrix(nx, grid.lx, dx);
                for iy in 0..ny {
                    for jx in 0..nx {
                        let col = (iy * nx + jx) * dim;
                        for ix in 0..nx {
                            let row = iy * nx + ix;
                            m[row + col] += t.coeff * xpow[ix] * ypow[iy] * dmat[ix + jx * nx];
                        }
                    }
                }
            }
            (0, dy) => {
                let dmat = fourier_derivative_matrix(ny, grid.ly, dy);
                for jy in 0..ny {
                    for iy in 0..ny {
                        let d = dmat[iy + jy * ny];
                        if d == Complex64::default() {
                            continue;
                        }
                        for ix in 0..nx {
                            let row = iy * nx + ix;
                            let col = (jy * nx + ix) * dim;
                            m[row + col] += t.coeff * xpow[ix] * ypow[iy] * d;
                        }
                    }
                }
            }
            (dx, dy) => {
                let dmx = fourier_derivative_matrix(nx, grid.lx, dx);
                let dmy = fourier_derivative_matrix(ny, grid.ly, dy);
                for jy in 0..ny {
                    for jx in 0..nx {
                        let col = (jy * nx + jx) * dim;
                        for iy in 0..ny {
                            let fy = dmy[iy + jy * ny];
                            if fy == Complex64::default() {
                                continue;
                            }
                            for ix in 0..nx {
                                let row = iy * nx + ix;
                                m[row + col] +=
                                    t.coeff * xpow[ix] * ypow[iy] * dmx[ix + jx * nx] * fy;
                            }
                        }
                    }
                }
            }
        }
    }
    m
}
