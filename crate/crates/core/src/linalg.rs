//! Small dense Hermitian helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest condition number accepted by the solvers in this crate.
pub const MAX_CONDITION: f64 = 1e12;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let sym = symmetrize(m);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// `(m + m^H) / 2`, removing rounding-level anti-Hermitian parts.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Ratio of extreme eigenvalues of a Hermitian positive semidefinite matrix.
pub fn condition_number(m: &CMatrix) -> f64 {
    let values = hermitian_eigenvalues(m);
    match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Extreme eigenvalues `(min, max)` of the pencil `S v = λ G v` with `G`
/// Hermitian positive definite.
pub fn generalized_extremes(s: &CMatrix, g: &CMatrix) -> Result<(f64, f64)> {
    let n = g.nrows();
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    let condition = condition_number(g);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let chol = symmetrize(g)
        .cholesky()
        .ok_or(Error::IllConditioned { condition })?;
    let l = chol.l();
    // L^{-1} S L^{-H}
    let left = l
        .solve_lower_triangular(&symmetrize(s))
        .ok_or(Error::IllConditioned { condition })?;
    let reduced = l
        .solve_lower_triangular(&left.adjoint())
        .ok_or(Error::IllConditioned { condition })?
        .adjoint();
    let values = hermitian_eigenvalues(&reduced);
    Ok((values[0], values[n - 1]))
}

/// Solves `A x = b` for Hermitian positive definite `A`, refusing systems
/// whose condition number exceeds [`MAX_CONDITION`].
pub fn solve_hermitian(a: &CMatrix, b: &CVector) -> Result<CVector> {
    if a.nrows() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    if a.nrows() == 0 {
        return Ok(CVector::zeros(0));
    }
    let condition = condition_number(a);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let chol = symmetrize(a)
        .cholesky()
        .ok_or(Error::IllConditioned { condition })?;
    Ok(chol.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_complex_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let v = hermitian_eigenvalues(&m);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 3.0).abs() < 1e-12);
        assert!((condition_number(&m) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_pencil_with_identity_reduces_to_plain() {
        let s = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let g = CMatrix::identity(2, 2);
        let (lo, hi) = generalized_extremes(&s, &g).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
        let (lo, hi) = generalized_extremes(&s, &g.scale(2.0)).unwrap();
        assert!((lo - 0.5).abs() < 1e-12 && (hi - 1.5).abs() < 1e-12);
    }

    #[test]
    fn singular_gram_is_rejected() {
        let g = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(
            generalized_extremes(&CMatrix::identity(2, 2), &g),
            Err(Error::IllConditioned { .. })
        ));
        assert!(matches!(
            solve_hermitian(&g, &CVector::from_element(2, c(1.0, 0.0))),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn solve_small_system() {
        let a = CMatrix::from_row_slice(2, 2, &[c(4.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)]);
        let x = CVector::from_vec(vec![c(1.0, 2.0), c(-0.5, 0.0)]);
        let b = &a * &x;
        let solved = solve_hermitian(&a, &b).unwrap();
        assert!((solved - x).norm() < 1e-12);
    }
}
