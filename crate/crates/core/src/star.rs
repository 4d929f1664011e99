//! Moyal star product of polynomials in (x, y), truncated at a requested
//! order. The bidifferential series
//!
//!   f⋆g = Σ_s (1/s!) (iθ/2)^s Σ_j C(s,j) (−1)^{s−j}
//!         (∂_x^j ∂_y^{s−j} f) (∂_x^{s−j} ∂_y^j g)
//!
//! terminates exactly once s exceeds the total degree of either factor, so
//! the product of polynomials is again an exact polynomial.

use num_complex::Complex64;

use crate::grid::ThetaTensor;
use crate::potential::PolynomialPotential;
use crate::spectral::Axis;

/// Result of [`moyal_star`]; `truncated` flags a series cut before natural
/// termination (the coefficients of the result may then be incomplete).
#[derive(Debug, Clone, PartialEq)]
pub struct StarProduct {
    pub result: PolynomialPotential,
    pub truncated: bool,
}

fn nth_derivative(f: &PolynomialPotential, dx: u32, dy: u32) -> PolynomialPotential {
    let mut out = f.clone();
    for _ in 0..dx {
        out = out.derivative(Axis::X);
    }
    for _ in 0..dy {
        out = out.derivative(Axis::Y);
    }
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut v = 1.0_f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// f ⋆ g with the series cut at `max_order`.
pub fn moyal_star(
    f: &PolynomialPotential,
    g: &PolynomialPotential,
    theta: &ThetaTensor,
    max_order: u32,
) -> StarProduct {
    let needed = f.degree().min(g.degree());
    let top = max_order.min(needed);
    let mut result = PolynomialPotential::zero();
    let mut factorial = 1.0_f64;
    for s in 0..=top {
        if s > 0 {
            factorial *= s as f64;
        }
        // (iθ/2)^s / s!
        let prefactor = Complex64::new(0.0, theta.theta / 2.0).powu(s) / factorial;
        if s > 0 && prefactor == Complex64::default() {
            break; // θ = 0: only the pointwise product survives
        }
        for j in 0..=s {
            let sign = if (s - j) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = prefactor * binomial(s, j) * sign;
            let df = nth_derivative(f, j, s - j);
            if df.is_zero() {
                continue;
            }
            let dg = nth_derivative(g, s - j, j);
            if dg.is_zero() {
                continue;
            }
            result = result.plus(&df.times(&dg).scaled(weight));
        }
    }
    let truncated = theta.theta != 0.0 && max_order < needed;
    StarProduct { result, truncated }
}
