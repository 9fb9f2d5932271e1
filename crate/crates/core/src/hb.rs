//! Hermite–Biehler functions of exponential-times-polynomial form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `scale · e^{-i·exponent·z} · ∏ (z - roots[k])` with no restriction on the
/// sign of `exponent` or on root locations. Both `E` and `E*` are of this form.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ExpPoly {
    scale: Complex64,
    exponent: f64,
    roots: Vec<Complex64>,
}

impl ExpPoly {
    pub(crate) fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.scale * (-I * self.exponent * z).exp();
        for &w in &self.roots {
            acc *= z - w;
        }
        acc
    }

    /// Product rule over all factors, so no special handling is needed at zeros.
    pub(crate) fn derivative(&self, z: Complex64) -> Complex64 {
        let exp = self.scale * (-I * self.exponent * z).exp();
        let poly: Complex64 = self.roots.iter().map(|&w| z - w).product();
        let mut poly_prime = Complex64::new(0.0, 0.0);
        for skip in 0..self.roots.len() {
            let mut term = Complex64::new(1.0, 0.0);
            for (k, &w) in self.roots.iter().enumerate() {
                if k != skip {
                    term *= z - w;
                }
            }
            poly_prime += term;
        }
        exp * (-I * self.exponent * poly + poly_prime)
    }
}

/// A Hermite–Biehler function `E(z) = c · e^{-iaz} · ∏ (z - w_k)` with
/// `a ≥ 0` and every root strictly in the lower half-plane.
///
/// Values are immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBiehlerFunction {
    form: ExpPoly,
}

/// Phase of `E` on the real line: `E(x) = |E(x)| e^{-i·phi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseValue {
    pub x: f64,
    pub phi: f64,
    pub phi_prime: f64,
}

impl HermiteBiehlerFunction {
    pub fn new(exp_coefficient: f64, roots: Vec<Complex64>, leading_scale: Complex64) -> Result<Self> {
        if !exp_coefficient.is_finite() || exp_coefficient < 0.0 {
            return Err(Error::NegativeExponent(exp_coefficient));
        }
        if !(leading_scale.re.is_finite() && leading_scale.im.is_finite()) || leading_scale.norm() == 0.0 {
            return Err(Error::InvalidScale(leading_scale));
        }
        for (index, &root) in roots.iter().enumerate() {
            if !(root.im < 0.0) || !root.re.is_finite() || !root.im.is_finite() {
                return Err(Error::RootNotInLowerHalfPlane { index, root });
            }
        }
        if exp_coefficient == 0.0 && roots.is_empty() {
            return Err(Error::ConstantGenerator);
        }
        Ok(Self {
            form: ExpPoly {
                scale: leading_scale,
                exponent: exp_coefficient,
                roots,
            },
        })
    }

    /// `e^{-iaz}`, the generator of the Paley–Wiener space of type `a`.
    pub fn exponential(a: f64) -> Result<Self> {
        Self::new(a, Vec::new(), Complex64::new(1.0, 0.0))
    }

    /// Monic polynomial with the given roots.
    pub fn polynomial(roots: Vec<Complex64>) -> Result<Self> {
        Self::new(0.0, roots, Complex64::new(1.0, 0.0))
    }

    pub fn exp_coefficient(&self) -> f64 {
        self.form.exponent
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.form.roots
    }

    pub fn leading_scale(&self) -> Complex64 {
        self.form.scale
    }

    /// Same function multiplied by a nonzero constant.
    pub fn scaled(&self, factor: Complex64) -> Result<Self> {
        Self::new(self.form.exponent, self.form.roots.clone(), self.form.scale * factor)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.form.eval(z)
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.form.eval(Complex64::new(x, 0.0))
    }

    /// `E*(z) = conj(E(conj z))`.
    pub fn eval_star(&self, z: Complex64) -> Complex64 {
        self.star_form().eval(z)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        self.form.derivative(z)
    }

    /// Derivative of `E*`.
    pub fn eval_star_derivative(&self, z: Complex64) -> Complex64 {
        self.form.derivative(z.conj()).conj()
    }

    pub(crate) fn star_form(&self) -> ExpPoly {
        ExpPoly {
            scale: self.form.scale.conj(),
            exponent: -self.form.exponent,
            roots: self.form.roots.iter().map(|w| w.conj()).collect(),
        }
    }

    /// Continuous phase with the branch fixed by per-root `atan2` values in `(0, π)`.
    pub fn phase(&self, x: f64) -> PhaseValue {
        let mut phi = self.form.exponent * x - self.form.scale.arg();
        let mut phi_prime = self.form.exponent;
        for w in &self.form.roots {
            let depth = -w.im;
            let dx = x - w.re;
            phi -= depth.atan2(dx);
            phi_prime += depth / (dx * dx + depth * depth);
        }
        PhaseValue { x, phi, phi_prime }
    }

    /// Attainable phase values `(inf, sup)`; infinite when `a > 0`.
    pub fn phase_range(&self) -> (f64, f64) {
        if self.form.exponent > 0.0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            let sup = 0.0 - self.form.scale.arg();
            (sup - PI * self.form.roots.len() as f64, sup)
        }
    }

    /// The product `E·F`, again Hermite–Biehler.
    pub fn product(&self, other: &Self) -> Self {
        let mut roots = self.form.roots.clone();
        roots.extend_from_slice(&other.form.roots);
        Self {
            form: ExpPoly {
                scale: self.form.scale * other.form.scale,
                exponent: self.form.exponent + other.form.exponent,
                roots,
            },
        }
    }

    pub fn to_spec(&self) -> HbSpec {
        HbSpec {
            exp_coefficient: self.form.exponent,
            roots: self.form.roots.iter().map(|w| [w.re, w.im]).collect(),
            leading_scale: [self.form.scale.re, self.form.scale.im],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: HbSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("plain numeric struct serializes")
    }
}

/// JSON shape: `{"exp_coefficient": a, "roots": [[re, im], ...], "leading_scale": [re, im]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HbSpec {
    pub exp_coefficient: f64,
    #[serde(default)]
    pub roots: Vec<[f64; 2]>,
    #[serde(default = "unit_scale")]
    pub leading_scale: [f64; 2],
}

fn unit_scale() -> [f64; 2] {
    [1.0, 0.0]
}

impl HbSpec {
    pub fn build(&self) -> Result<HermiteBiehlerFunction> {
        HermiteBiehlerFunction::new(
            self.exp_coefficient,
            self.roots.iter().map(|r| Complex64::new(r[0], r[1])).collect(),
            Complex64::new(self.leading_scale[0], self.leading_scale[1]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pw() -> HermiteBiehlerFunction {
        HermiteBiehlerFunction::exponential(PI).unwrap()
    }

    fn linear() -> HermiteBiehlerFunction {
        HermiteBiehlerFunction::polynomial(vec![c(0.0, -1.0)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(pw().eval(c(0.0, 0.0)), c(1.0, 0.0));
        assert_relative_eq!(pw().eval(c(0.0, 1.0)).re, 23.140692632779267, max_relative = 1e-14);
        assert_relative_eq!(pw().eval(c(0.0, 1.0)).im, 0.0);
        assert_eq!(linear().eval(c(0.0, 0.0)), c(0.0, 1.0));
    }

    #[test]
    fn star_examples() {
        let v = pw().eval_star(c(0.0, 1.0));
        assert_relative_eq!(v.re, 0.04321391826377226, max_relative = 1e-14);
        assert_eq!(linear().eval_star(c(0.0, 0.0)), c(0.0, -1.0));
        let e = presets_nonpw();
        for x in [-2.5, 0.0, 0.7, 13.0] {
            let z = c(x, 0.0);
            assert_relative_eq!((e.eval_star(z) - e.eval(z).conj()).norm(), 0.0, epsilon = 1e-14);
        }
    }

    fn presets_nonpw() -> HermiteBiehlerFunction {
        HermiteBiehlerFunction::new(PI, vec![c(0.0, -1.0)], c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn phase_examples() {
        let p = pw().phase(1.0);
        assert_relative_eq!(p.phi, PI);
        assert_relative_eq!(p.phi_prime, PI);
        let p = linear().phase(0.0);
        assert_relative_eq!(p.phi, -PI / 2.0);
        assert_relative_eq!(p.phi_prime, 1.0);
    }

    #[test]
    fn derivative_examples() {
        assert_relative_eq!((pw().eval_derivative(c(0.0, 0.0)) - c(0.0, -PI)).norm(), 0.0, epsilon = 1e-15);
        for z in [c(0.0, 0.0), c(3.0, -2.0), c(0.0, -1.0)] {
            assert_eq!(linear().eval_derivative(z), c(1.0, 0.0));
        }
        let e = presets_nonpw();
        let h = 1e-6;
        let fd = (e.eval(c(h, 0.0)) - e.eval(c(-h, 0.0))) / (2.0 * h);
        let exact = e.eval_derivative(c(0.0, 0.0));
        assert_relative_eq!(exact.re, 1.0 + PI, max_relative = 1e-14);
        assert!((exact - fd).norm() < 1e-8);
    }

    #[test]
    fn derivative_at_a_zero() {
        let e = HermiteBiehlerFunction::polynomial(vec![c(1.0, -1.0), c(-2.0, -0.5)]).unwrap();
        // (z - w1)(z - w2) has derivative w1 - w2 at w1
        let d = e.eval_derivative(c(1.0, -1.0));
        assert_relative_eq!((d - c(3.0, -0.5)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn product_merges_fields() {
        let sq = pw().product(&pw());
        assert_eq!(sq.exp_coefficient(), 2.0 * PI);
        assert!(sq.roots().is_empty());
        let m = linear().product(&pw());
        assert_eq!(m.exp_coefficient(), PI);
        assert_eq!(m.roots(), &[c(0.0, -1.0)]);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            HermiteBiehlerFunction::polynomial(vec![c(0.0, -1.0), c(2.0, 0.0)]),
            Err(Error::RootNotInLowerHalfPlane { index: 1, .. })
        ));
        assert!(matches!(
            HermiteBiehlerFunction::polynomial(vec![c(0.0, 0.5)]),
            Err(Error::RootNotInLowerHalfPlane { index: 0, .. })
        ));
        assert_eq!(HermiteBiehlerFunction::polynomial(vec![]), Err(Error::ConstantGenerator));
        assert!(HermiteBiehlerFunction::exponential(-1.0).is_err());
        assert!(HermiteBiehlerFunction::new(1.0, vec![], c(0.0, 0.0)).is_err());
    }

    #[test]
    fn json_parse_names_offending_root() {
        let text = r#"{"exp_coefficient": 1.0, "roots": [[0, -1], [3, 0.25]], "leading_scale": [1, 0]}"#;
        match HermiteBiehlerFunction::from_json(text) {
            Err(Error::RootNotInLowerHalfPlane { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        let ok = HermiteBiehlerFunction::from_json(r#"{"exp_coefficient": 3.5}"#).unwrap();
        assert_eq!(ok.leading_scale(), c(1.0, 0.0));
        assert!(matches!(HermiteBiehlerFunction::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn phase_range_of_polynomial() {
        let e = HermiteBiehlerFunction::polynomial(vec![c(0.0, -1.0), c(1.0, -2.0)]).unwrap();
        let (inf, sup) = e.phase_range();
        assert_relative_eq!(inf, -2.0 * PI);
        assert_relative_eq!(sup, 0.0);
        assert!(e.phase(-1e9).phi > inf && e.phase(1e9).phi < sup);
    }
}
