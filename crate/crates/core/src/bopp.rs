//! Exact symbolic algebra of pseudo-differential operators with polynomial
//! coefficients, and the Bopp shift that turns a noncommutative-coordinate
//! potential into one.
//!
//! A term is c · x^px y^py ∂_x^dx ∂_y^dy, normal-ordered with multiplication
//! on the left. Products are reordered with the Leibniz rule
//! ∂^a x^b = Σ_k C(a,k) b!/(b−k)! x^(b−k) ∂^(a−k), so composition, adjoints
//! and hermiticity checks are exact (coefficient arithmetic only). The series
//! terminates for polynomials, which is why the whole module can stay exact.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::grid::ThetaTensor;
use crate::potential::PolynomialPotential;

/// Term key (px, py, dx, dy): multiply by x^px y^py after applying ∂_x^dx ∂_y^dy.
pub type TermKey = (u32, u32, u32, u32);

/// One normal-ordered term of a [`PseudoDiffOperator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdoTerm {
    pub coeff: Complex64,
    pub pow_x: u32,
    pub pow_y: u32,
    pub deriv_x: u32,
    pub deriv_y: u32,
}

/// Finite sum of normal-ordered monomial × mixed-derivative terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PseudoDiffOperator {
    terms: BTreeMap<TermKey, Complex64>,
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut v = 1.0_f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

fn falling(n: u32, k: u32) -> f64 {
    let mut v = 1.0_f64;
    for i in 0..k {
        v *= (n - i) as f64;
    }
    v
}

impl PseudoDiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from_term(Complex64::new(1.0, 0.0), 0, 0, 0, 0)
    }

    pub fn from_term(coeff: Complex64, px: u32, py: u32, dx: u32, dy: u32) -> Self {
        let mut op = Self::default();
        op.add_term(coeff, px, py, dx, dy);
        op
    }

    /// Pure multiplication operator V(x, y)·.
    pub fn from_polynomial(v: &PolynomialPotential) -> Self {
        let mut op = Self::default();
        for ((ax, ay), c) in v.monomials() {
            op.add_term(c, ax, ay, 0, 0);
        }
        op
    }

    pub fn add_term(&mut self, coeff: Complex64, px: u32, py: u32, dx: u32, dy: u32) {
        if coeff == Complex64::default() {
            return;
        }
        let entry = self.terms.entry((px, py, dx, dy)).or_default();
        *entry += coeff;
        if entry.norm() == 0.0 {
            self.terms.remove(&(px, py, dx, dy));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = PdoTerm> + '_ {
        self.terms.iter().map(|(&(px, py, dx, dy), &coeff)| PdoTerm {
            coeff,
            pow_x: px,
            pow_y: py,
            deriv_x: dx,
            deriv_y: dy,
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest derivative order appearing in any term, per axis.
    pub fn max_derivative(&self) -> (u32, u32) {
        self.terms.keys().fold((0, 0), |(mx, my), &(_, _, dx, dy)| (mx.max(dx), my.max(dy)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = Self::default();
        for (&k, &v) in &self.terms {
            out.add_term(c * v, k.0, k.1, k.2, k.3);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &v) in &other.terms {
            out.add_term(v, k.0, k.1, k.2, k.3);
        }
        out
    }

    /// Normal-ordered composition self ∘ other (self applied after other).
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(p1x, p1y, d1x, d1y), &c1) in &self.terms {
            for (&(p2x, p2y, d2x, d2y), &c2) in &other.terms {
                // Push ∂^d1 through x^p2 on each axis independently.
                for kx in 0..=d1x.min(p2x) {
                    let fx = binomial(d1x, kx) * falling(p2x, kx);
                    for ky in 0..=d1y.min(p2y) {
                        let fy = binomial(d1y, ky) * falling(p2y, ky);
                        out.add_term(
                            c1 * c2 * (fx * fy),
                            p1x + p2x - kx,
                            p1y + p2y - ky,
                            d1x - kx + d2x,
                            d1y - ky + d2y,
                        );
                    }
                }
            }
        }
        out
    }

    /// Integer power by repeated composition.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.compose(self);
        }
        acc
    }

    /// Formal adjoint under the L² inner product: x† = x, ∂† = −∂.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::default();
        for (&(px, py, dx, dy), &c) in &self.terms {
            // (x^p ∂^d)† = (−1)^{|d|} ∂^d x^p, then normal-order.
            let sign = if (dx + dy) % 2 == 0 { 1.0 } else { -1.0 };
            let deriv = Self::from_term(Complex64::new(sign, 0.0) * c.conj(), 0, 0, dx, dy);
            let mult = Self::from_term(Complex64::new(1.0, 0.0), px, py, 0, 0);
            out = out.plus(&deriv.compose(&mult));
        }
        out
    }

    /// Max coefficient norm of (self − self†), relative to the largest term.
    pub fn hermiticity_deviation(&self) -> f64 {
        let diff = self.plus(&self.adjoint().scaled(Complex64::new(-1.0, 0.0)));
        let scale = self.max_coeff();
        if scale == 0.0 {
            diff.max_coeff()
        } else {
            diff.max_coeff() / scale
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }
}

/// Substitute x → x − (i/2)θ ∂_y and y → y + (i/2)θ ∂_x into a polynomial
/// potential, i.e. V(x̂, ŷ) with the coordinate operators taken verbatim.
///
/// Powers of a single shifted coordinate expand unambiguously (x and ∂_y
/// commute); mixed monomials x^a y^b are ordered symmetrically,
/// (x̂^a ŷ^b + ŷ^b x̂^a)/2, which keeps real potentials hermitian. The
/// expansion is exact and finite, and θ = 0 returns V unchanged.
pub fn bopp_shift(v: &PolynomialPotential, theta: &ThetaTensor) -> PseudoDiffOperator {
    let t = theta.theta;
    if t == 0.0 {
        return PseudoDiffOperator::from_polynomial(v);
    }
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::new(0.0, -0.5 * t); // −(i/2)θ
    // x̂ = x − (i/2)θ ∂_y ; ŷ = y − (i/2)(−θ) ∂_x = y + (i/2)θ ∂_x
    let mut xhat = PseudoDiffOperator::from_term(one, 1, 0, 0, 0);
    xhat.add_term(half, 0, 0, 0, 1);
    let mut yhat = PseudoDiffOperator::from_term(one, 0, 1, 0, 0);
    yhat.add_term(-half, 0, 0, 1, 0);

    let mut out = PseudoDiffOperator::zero();
    for ((ax, ay), c) in v.monomials() {
        let term = if ax == 0 && ay == 0 {
            PseudoDiffOperator::from_term(one, 0, 0, 0, 0)
        } else if ay == 0 {
            xhat.pow(ax)
        } else if ax == 0 {
            yhat.pow(ay)
        } else {
            let xa = xhat.pow(ax);
            let yb = yhat.pow(ay);
            xa.compose(&yb).plus(&yb.compose(&xa)).scaled(Complex64::new(0.5, 0.0))
        };
        out = out.plus(&term.scaled(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn leibniz_reordering() {
        // ∂_x ∘ x = x ∂_x + 1
        let dx = PseudoDiffOperator::from_term(c(1.0, 0.0), 0, 0, 1, 0);
        let x = PseudoDiffOperator::from_term(c(1.0, 0.0), 1, 0, 0, 0);
        let prod = dx.compose(&x);
        let mut expected = PseudoDiffOperator::from_term(c(1.0, 0.0), 1, 0, 1, 0);
        expected.add_term(c(1.0, 0.0), 0, 0, 0, 0);
        assert_eq!(prod, expected);
    }

    #[test]
    fn commutator_x_p_is_i_hbar() {
        // [x, −iħ∂_x] = iħ
        let hbar = 0.7;
        let x = PseudoDiffOperator::from_term(c(1.0, 0.0), 1, 0, 0, 0);
        let p = PseudoDiffOperator::from_term(c(0.0, -hbar), 0, 0, 1, 0);
        let comm = x.compose(&p).plus(&p.compose(&x).scaled(c(-1.0, 0.0)));
        let expected = PseudoDiffOperator::from_term(c(0.0, hbar), 0, 0, 0, 0);
        assert_eq!(comm, expected);
    }

    #[test]
    fn adjoint_of_momentum_is_itself() {
        let p = PseudoDiffOperator::from_term(c(0.0, -1.0), 0, 0, 1, 0);
        assert!(p.is_hermitian(1e-15));
        // x ∂_x is not hermitian, x∂_x + ∂_x x /... check its deviation is nonzero
        let xd = PseudoDiffOperator::from_term(c(1.0, 0.0), 1, 0, 1, 0);
        assert!(!xd.is_hermitian(1e-12));
        // −i(x∂_x + 1/2) is hermitian
        let mut sym = PseudoDiffOperator::from_term(c(0.0, -1.0), 1, 0, 1, 0);
        sym.add_term(c(0.0, -0.5), 0, 0, 0, 0);
        assert!(sym.is_hermitian(1e-15));
    }

    #[test]
    fn bopp_linear_matches_expected_terms() {
        // αx + βy → αx + βy − (iαθ/2)∂_y + (iβθ/2)∂_x
        let (alpha, beta, theta) = (1.3, -0.4, 0.5);
        let v = PolynomialPotential::linear(alpha, beta);
        let op = bopp_shift(&v, &ThetaTensor::new(theta));
        let mut expected = PseudoDiffOperator::from_term(c(alpha, 0.0), 1, 0, 0, 0);
        expected.add_term(c(beta, 0.0), 0, 1, 0, 0);
        expected.add_term(c(0.0, -alpha * theta / 2.0), 0, 0, 0, 1);
        expected.add_term(c(0.0, beta * theta / 2.0), 0, 0, 1, 0);
        assert_eq!(op, expected);
    }

    #[test]
    fn bopp_theta_zero_is_identity_on_potentials() {
        let v = PolynomialPotential::from_monomials(&[(2, 0, c(1.0, 0.0)), (1, 3, c(-0.25, 0.0))]);
        let op = bopp_shift(&v, &ThetaTensor::zero());
        assert_eq!(op, PseudoDiffOperator::from_polynomial(&v));
    }

    #[test]
    fn bopp_harmonic_matches_closed_form() {
        // (ω²/2)(x²+y²) → −(θ²ω²/8)(∂_x²+∂_y²) + (ω²/2)(x²+y²) + (iθω²/2)(y∂_x − x∂_y)
        let (omega, theta) = (1.7, 0.3);
        let w2 = omega * omega;
        let v = PolynomialPotential::harmonic(omega, omega);
        let op = bopp_shift(&v, &ThetaTensor::new(theta));
        let mut expected = PseudoDiffOperator::from_term(c(w2 / 2.0, 0.0), 2, 0, 0, 0);
        expected.add_term(c(w2 / 2.0, 0.0), 0, 2, 0, 0);
        expected.add_term(c(-theta * theta * w2 / 8.0, 0.0), 0, 0, 2, 0);
        expected.add_term(c(-theta * theta * w2 / 8.0, 0.0), 0, 0, 0, 2);
        expected.add_term(c(0.0, theta * w2 / 2.0), 0, 1, 1, 0);
        expected.add_term(c(0.0, -theta * w2 / 2.0), 1, 0, 0, 1);
        let diff = op.plus(&expected.scaled(c(-1.0, 0.0)));
        assert!(diff.max_coeff() < 1e-14, "bopp harmonic mismatch: {diff:?}");
    }

    #[test]
    fn bopp_of_real_quartic_is_hermitian() {
        let v = PolynomialPotential::anharmonic(1.0, 0.02, 0.01);
        let op = bopp_shift(&v, &ThetaTensor::new(0.4));
        assert!(op.is_hermitian(1e-14));
        // mixed monomial goes through the symmetrized branch
        let mixed = PolynomialPotential::from_monomials(&[(2, 1, c(0.7, 0.0))]);
        let opm = bopp_shift(&mixed, &ThetaTensor::new(0.4));
        assert!(opm.is_hermitian(1e-14));
    }

    #[test]
    fn bopp_linearity_term_by_term() {
        let t = ThetaTensor::new(0.21);
        let v1 = PolynomialPotential::from_monomials(&[(3, 0, c(0.4, 0.0))]);
        let v2 = PolynomialPotential::from_monomials(&[(0, 4, c(-0.2, 0.0)), (1, 1, c(0.9, 0.0))]);
        let sum = v1.plus(&v2);
        let lhs = bopp_shift(&sum, &t);
        let rhs = bopp_shift(&v1, &t).plus(&bopp_shift(&v2, &t));
        let diff = lhs.plus(&rhs.scaled(c(-1.0, 0.0)));
        assert!(diff.max_coeff() < 1e-14);
    }

    #[test]
    fn bopp_theta_sign_mirror() {
        // bopp(V, −θ) equals bopp(V, θ) with x↔y swapped for the symmetric
        // monomial x² + y² (sign structure mirrors across axes).
        let t = ThetaTensor::new(0.33);
        let v = PolynomialPotential::harmonic(1.0, 1.0);
        let plus = bopp_shift(&v, &t);
        let minus = bopp_shift(&v, &t.flipped());
        // swap axes in `minus` and compare
        let mut swapped = PseudoDiffOperator::zero();
        for term in minus.terms() {
            swapped.add_term(term.coeff, term.pow_y, term.pow_x, term.deriv_y, term.deriv_x);
        }
        let diff = plus.plus(&swapped.scaled(c(-1.0, 0.0)));
        assert!(diff.max_coeff() < 1e-14);
    }
}
