//! Polynomial potentials V(x, y) as monomial-coefficient maps.
//!
//! JSON form is `{"monomials": [{"ax": a, "ay": b, "re": .., "im": ..}, ..]}`;
//! deserialization additionally accepts the named shortcuts
//! `{"linear": {"alpha": .., "beta": ..}}`,
//! `{"harmonic": {"wx": .., "wy": ..}}` and
//! `{"anharmonic": {"omega": .., "alpha_c": .., "gamma": ..}}` (summed when
//! several are present).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::spectral::Axis;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolynomialPotential {
    coeffs: BTreeMap<(u32, u32), Complex64>,
}

impl PolynomialPotential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_monomials(&[(0, 0, c)])
    }

    pub fn from_monomials(terms: &[(u32, u32, Complex64)]) -> Self {
        let mut v = Self::default();
        for &(ax, ay, c) in terms {
            v.add_term(ax, ay, c);
        }
        v
    }

    /// V = αx + βy.
    pub fn linear(alpha: f64, beta: f64) -> Self {
        Self::from_monomials(&[
            (1, 0, Complex64::new(alpha, 0.0)),
            (0, 1, Complex64::new(beta, 0.0)),
        ])
    }

    /// V = (ωx²/2) x² + (ωy²/2) y².
    pub fn harmonic(wx: f64, wy: f64) -> Self {
        Self::from_monomials(&[
            (2, 0, Complex64::new(0.5 * wx * wx, 0.0)),
            (0, 2, Complex64::new(0.5 * wy * wy, 0.0)),
        ])
    }

    /// Isotropic harmonic plus cubic and quartic couplings:
    /// V = (ω²/2)(x² + y²) + α_c (x³ + y³) + γ (x⁴ + y⁴).
    pub fn anharmonic(omega: f64, alpha_c: f64, gamma: f64) -> Self {
        let mut v = Self::harmonic(omega, omega);
        v.add_term(3, 0, Complex64::new(alpha_c, 0.0));
        v.add_term(0, 3, Complex64::new(alpha_c, 0.0));
        v.add_term(4, 0, Complex64::new(gamma, 0.0));
        v.add_term(0, 4, Complex64::new(gamma, 0.0));
        v
    }

    pub fn add_term(&mut self, ax: u32, ay: u32, c: Complex64) {
        if c == Complex64::default() {
            return;
        }
        let e = self.coeffs.entry((ax, ay)).or_default();
        *e += c;
        if e.norm() == 0.0 {
            self.coeffs.remove(&(ax, ay));
        }
    }

    pub fn coeff(&self, ax: u32, ay: u32) -> Complex64 {
        self.coeffs.get(&(ax, ay)).copied().unwrap_or_default()
    }

    pub fn monomials(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree (max ax + ay over monomials); 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All coefficients real (up to 1e-14 relative)?
    pub fn is_real(&self) -> bool {
        let scale = self.max_coeff().max(1e-300);
        self.coeffs.values().all(|c| c.im.abs() <= 1e-14 * scale)
    }

    // Named accessors for the couplings the builders care about.
    pub fn alpha(&self) -> Complex64 {
        self.coeff(1, 0)
    }

    pub fn beta(&self) -> Complex64 {
        self.coeff(0, 1)
    }

    pub fn omega_x(&self) -> Option<f64> {
        let c = self.coeff(2, 0);
        (c.im == 0.0 && c.re >= 0.0).then(|| (2.0 * c.re).sqrt())
    }

    pub fn omega_y(&self) -> Option<f64> {
        let c = self.coeff(0, 2);
        (c.im == 0.0 && c.re >= 0.0).then(|| (2.0 * c.re).sqrt())
    }

    pub fn alpha_c(&self) -> Complex64 {
        self.coeff(3, 0)
    }

    pub fn gamma_quartic(&self) -> Complex64 {
        self.coeff(4, 0)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Complex64 {
        let mut s = Complex64::default();
        for (&(ax, ay), &c) in &self.coeffs {
            s += c * x.powi(ax as i32) * y.powi(ay as i32);
        }
        s
    }

    /// ∂V/∂x or ∂V/∂y as a polynomial.
    pub fn derivative(&self, axis: Axis) -> Self {
        let mut out = Self::default();
        for (&(ax, ay), &c) in &self.coeffs {
            match axis {
                Axis::X if ax > 0 => out.add_term(ax - 1, ay, c * ax as f64),
                Axis::Y if ay > 0 => out.add_term(ax, ay - 1, c * ay as f64),
                _ => {}
            }
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(ax, ay), &c) in &other.coeffs {
            out.add_term(ax, ay, c);
        }
        out
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = Self::default();
        for (&(ax, ay), &v) in &self.coeffs {
            out.add_term(ax, ay, c * v);
        }
        out
    }

    /// Pointwise polynomial product.
    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(ax, ay), &c1) in &self.coeffs {
            for (&(bx, by), &c2) in &other.coeffs {
                out.add_term(ax + bx, ay + by, c1 * c2);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    ax: u32,
    ay: u32,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl Serialize for PolynomialPotential {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Monomials<'a>(&'a PolynomialPotential);
        impl Serialize for Monomials<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.coeffs.len()))?;
                for (&(ax, ay), &c) in &self.0.coeffs {
                    seq.serialize_element(&MonomialJson { ax, ay, re: c.re, im: c.im })?;
                }
                seq.end()
            }
        }
        let mut st = serializer.serialize_struct("PolynomialPotential", 1)?;
        st.serialize_field("monomials", &Monomials(self))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearJson {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HarmonicJson {
    wx: f64,
    wy: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnharmonicJson {
    omega: f64,
    #[serde(default)]
    alpha_c: f64,
    #[serde(default)]
    gamma: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialJson {
    #[serde(default)]
    monomials: Option<Vec<MonomialJson>>,
    #[serde(default)]
    linear: Option<LinearJson>,
    #[serde(default)]
    harmonic: Option<HarmonicJson>,
    #[serde(default)]
    anharmonic: Option<AnharmonicJson>,
}

impl<'de> Deserialize<'de> for PolynomialPotential {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PotentialJson::deserialize(deserializer)?;
        if raw.monomials.is_none() && raw.linear.is_none() && raw.harmonic.is_none() && raw.anharmonic.is_none() {
            return Err(D::Error::custom(
                "potential needs one of: monomials, linear, harmonic, anharmonic",
            ));
        }
        let mut v = PolynomialPotential::zero();
        if let Some(list) = raw.monomials {
            for m in list {
                v.add_term(m.ax, m.ay, Complex64::new(m.re, m.im));
            }
        }
        if let Some(l) = raw.linear {
            v = v.plus(&PolynomialPotential::linear(l.alpha, l.beta));
        }
        if let Some(h) = raw.harmonic {
            v = v.plus(&PolynomialPotential::harmonic(h.wx, h.wy));
        }
        if let Some(a) = raw.anharmonic {
            v = v.plus(&PolynomialPotential::anharmonic(a.omega, a.alpha_c, a.gamma));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_and_accessors() {
        let v = PolynomialPotential::linear(2.0, -0.5);
        assert_eq!(v.alpha(), Complex64::new(2.0, 0.0));
        assert_eq!(v.beta(), Complex64::new(-0.5, 0.0));

        let h = PolynomialPotential::harmonic(1.5, 2.0);
        assert!((h.omega_x().unwrap() - 1.5).abs() < 1e-15);
        assert!((h.omega_y().unwrap() - 2.0).abs() < 1e-15);

        let a = PolynomialPotential::anharmonic(1.0, 0.02, 0.01);
        assert_eq!(a.alpha_c(), Complex64::new(0.02, 0.0));
        assert_eq!(a.gamma_quartic(), Complex64::new(0.01, 0.0));
        assert_eq!(a.degree(), 4);
        assert!(a.is_real());
    }

    #[test]
    fn derivative_and_evaluate() {
        // V = x²y  →  ∂x = 2xy, ∂y = x²
        let v = PolynomialPotential::from_monomials(&[(2, 1, Complex64::new(1.0, 0.0))]);
        let dx = v.derivative(Axis::X);
        let dy = v.derivative(Axis::Y);
        assert_eq!(dx.coeff(1, 1), Complex64::new(2.0, 0.0));
        assert_eq!(dy.coeff(2, 0), Complex64::new(1.0, 0.0));
        assert_eq!(v.evaluate(3.0, 2.0), Complex64::new(18.0, 0.0));
    }

    #[test]
    fn json_roundtrip_and_shortcuts() {
        let v = PolynomialPotential::anharmonic(1.0, 0.0, 0.01);
        let s = serde_json::to_string(&v).unwrap();
        let back: PolynomialPotential = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);

        let lin: PolynomialPotential =
            serde_json::from_str(r#"{"linear": {"alpha": 1.0, "beta": 0.5}}"#).unwrap();
        assert_eq!(lin, PolynomialPotential::linear(1.0, 0.5));

        let har: PolynomialPotential =
            serde_json::from_str(r#"{"harmonic": {"wx": 1.0, "wy": 1.0}}"#).unwrap();
        assert_eq!(har, PolynomialPotential::harmonic(1.0, 1.0));

        let anh: PolynomialPotential =
            serde_json::from_str(r#"{"anharmonic": {"omega": 2.0, "gamma": 0.01}}"#).unwrap();
        assert_eq!(anh, PolynomialPotential::anharmonic(2.0, 0.0, 0.01));

        assert!(serde_json::from_str::<PolynomialPotential>(r#"{"nope": 1}"#).is_err());
        assert!(serde_json::from_str::<PolynomialPotential>(r#"{}"#).is_err());
    }
}
