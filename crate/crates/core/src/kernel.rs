//! Reproducing kernels of `H(E)` and finite kernel combinations.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hb::HermiteBiehlerFunction;
use crate::linalg::CMatrix;
use crate::par;

/// Below this distance between `conj(w)` and `z` the kernel switches from the
/// difference quotient to its analytic limit.
pub const DIAGONAL_EPS: f64 = 1e-6;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// `K_E(w, z) = [conj(E(w)) E(z) - E(conj w) E*(z)] / (2πi (conj w - z))`.
///
/// Near the removable singularity `z = conj(w)` the numerator's derivative is
/// taken at the midpoint of `z` and `conj(w)`, which is exact at the diagonal
/// and second-order accurate within [`DIAGONAL_EPS`] of it.
pub fn kernel(e: &HermiteBiehlerFunction, w: Complex64, z: Complex64) -> Complex64 {
    let w_bar = w.conj();
    let gap = w_bar - z;
    let e_w_conj = e.eval(w).conj();
    let e_w_bar = e.eval(w_bar);
    if gap.norm() > DIAGONAL_EPS {
        (e_w_conj * e.eval(z) - e_w_bar * e.eval_star(z)) / (TWO_PI_I * gap)
    } else {
        let mid = (z + w_bar) * 0.5;
        (e_w_conj * e.eval_derivative(mid) - e_w_bar * e.eval_star_derivative(mid)) / (-TWO_PI_I)
    }
}

/// `K_E(x, x) = φ'(x) |E(x)|² / π` for real `x`.
pub fn kernel_diag(e: &HermiteBiehlerFunction, x: f64) -> f64 {
    e.phase(x).phi_prime * e.eval_real(x).norm_sqr() / PI
}

/// `G[j][k] = K_E(μ_k, μ_j)`, oriented so that `‖Σ c_j K(μ_j, ·)‖² = c^H G c`.
pub fn gram(e: &HermiteBiehlerFunction, points: &[Complex64]) -> Result<CMatrix> {
    for (first, a) in points.iter().enumerate() {
        if let Some(offset) = points[first + 1..].iter().position(|b| b == a) {
            return Err(Error::DuplicatePoints {
                first,
                second: first + 1 + offset,
            });
        }
    }
    Ok(gram_unchecked(e, points))
}

pub(crate) fn gram_unchecked(e: &HermiteBiehlerFunction, points: &[Complex64]) -> CMatrix {
    let n = points.len();
    let entries = par::map_indexed(n * n, |idx| {
        let (j, k) = (idx / n, idx % n);
        kernel(e, points[k], points[j])
    });
    // entries are row-major
    CMatrix::from_row_slice(n, n, &entries)
}

/// `f(z) = Σ_j c_j K_E(μ_j, z)`, an element of `H(E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCombination {
    space_generator: HermiteBiehlerFunction,
    centers: Vec<Complex64>,
    coefficients: Vec<Complex64>,
}

impl KernelCombination {
    pub fn new(
        space_generator: HermiteBiehlerFunction,
        centers: Vec<Complex64>,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        if centers.len() != coefficients.len() {
            return Err(Error::LengthMismatch {
                expected: centers.len(),
                found: coefficients.len(),
            });
        }
        Ok(Self {
            space_generator,
            centers,
            coefficients,
        })
    }

    /// The single kernel `K_E(center, ·)`.
    pub fn single(space_generator: HermiteBiehlerFunction, center: Complex64) -> Self {
        Self {
            space_generator,
            centers: vec![center],
            coefficients: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn zero(space_generator: HermiteBiehlerFunction) -> Self {
        Self {
            space_generator,
            centers: Vec::new(),
            coefficients: Vec::new(),
        }
    }

    pub fn space_generator(&self) -> &HermiteBiehlerFunction {
        &self.space_generator
    }

    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.centers
            .iter()
            .zip(&self.coefficients)
            .map(|(&mu, &c)| c * kernel(&self.space_generator, mu, z))
            .sum()
    }

    /// Values at real points, in order.
    pub fn sample(&self, points: &[f64]) -> Vec<Complex64> {
        par::map_slice(points, |&x| self.eval(Complex64::new(x, 0.0)))
    }

    /// `‖f‖²` through the reproducing property, no quadrature.
    pub fn norm_squared(&self) -> f64 {
        let value = inner_product(self, self);
        debug_assert!(
            value.im.abs() <= 1e-10 * value.re.abs().max(1.0),
            "Gram form has imaginary part {}",
            value.im
        );
        value.re.max(0.0)
    }

    /// Scalar multiple.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            space_generator: self.space_generator.clone(),
            centers: self.centers.clone(),
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Sum of two combinations in the same space (centers are concatenated).
    pub fn plus(&self, other: &Self) -> Self {
        let mut centers = self.centers.clone();
        centers.extend_from_slice(&other.centers);
        let mut coefficients = self.coefficients.clone();
        coefficients.extend_from_slice(&other.coefficients);
        Self {
            space_generator: self.space_generator.clone(),
            centers,
            coefficients,
        }
    }
}

/// `⟨f, g⟩_E = Σ_{j,k} c_j conj(d_k) K_E(μ_j, ν_k)`, using the generator of `f`.
pub fn inner_product(f: &KernelCombination, g: &KernelCombination) -> Complex64 {
    let e = &f.space_generator;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&mu, &c) in f.centers.iter().zip(&f.coefficients) {
        for (&nu, &d) in g.centers.iter().zip(&g.coefficients) {
            acc += c * d.conj() * kernel(e, mu, nu);
        }
    }
    acc
}
