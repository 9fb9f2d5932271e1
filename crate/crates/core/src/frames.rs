//! Kernel frames at sampling nodes.
//!
//! For Hermite–Biehler `E`, `F` and nodes `λ_n` with `φ_{EF}(λ_n) = nπ + α`,
//! the normalized kernels of `H(EF)` form an orthonormal system, and splitting
//! `K_EF` along `H(EF) = H(E)·F ⊕ H(F)·E*` gives two mutually orthogonal
//! Parseval frames:
//!
//! ```text
//! f(z) = Σ f(λ_n) |F(λ_n)|² K_E(λ_n, z) / K_EF(λ_n, λ_n)     f ∈ H(E)
//! g(z) = Σ g(λ_n) |E(λ_n)|² K_F(λ_n, z) / K_EF(λ_n, λ_n)     g ∈ H(F)
//! ```
//!
//! Everything here works on finite index windows; convergence is measured by
//! comparing windows, never assumed.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hb::HermiteBiehlerFunction;
use crate::kernel::{self, kernel, kernel_diag, KernelCombination};
use crate::linalg::{self, CMatrix, CVector};
use crate::nodes::{solve_nodes, NodeSet};
use crate::par;

/// Relative ridge parameter for dual-frame least squares.
pub const DUAL_RIDGE: f64 = 1e-12;

/// `(E, F)` with nodes on `EF` and the per-node weights every series needs.
#[derive(Debug, Clone)]
pub struct FrameSystem {
    e: HermiteBiehlerFunction,
    f: HermiteBiehlerFunction,
    alpha: Option<f64>,
    index_lo: i64,
    nodes: Vec<f64>,
    weights_f: Vec<Complex64>,
    weights_e: Vec<Complex64>,
    weights_estar: Vec<Complex64>,
    phi_prime_e: Vec<f64>,
    phi_prime_f: Vec<f64>,
    diag_ef: Vec<f64>,
}

impl FrameSystem {
    /// Solves `φ_{EF}(λ_n) = nπ + α` on `index_lo..=index_hi`.
    pub fn solve(
        e: &HermiteBiehlerFunction,
        f: &HermiteBiehlerFunction,
        alpha: f64,
        index_lo: i64,
        index_hi: i64,
    ) -> Result<Self> {
        let set = solve_nodes(&e.product(f), alpha, index_lo, index_hi)?;
        Ok(Self::from_node_set(e, f, &set))
    }

    /// Uses nodes already solved on `EF`.
    pub fn from_node_set(e: &HermiteBiehlerFunction, f: &HermiteBiehlerFunction, set: &NodeSet) -> Self {
        let mut sys = Self::from_points(e, f, set.index_lo(), set.nodes().to_vec());
        sys.alpha = Some(set.alpha());
        sys
    }

    /// Arbitrary real nodes, e.g. perturbed phase nodes. No phase condition
    /// is implied, so the Parseval identities need not hold.
    pub fn from_points(e: &HermiteBiehlerFunction, f: &HermiteBiehlerFunction, index_lo: i64, points: Vec<f64>) -> Self {
        struct NodeData {
            fv: Complex64,
            ev: Complex64,
            estar: Complex64,
            pe: f64,
            pf: f64,
        }
        let data = par::map_slice(&points, |&x| {
            let z = Complex64::new(x, 0.0);
            NodeData {
                fv: f.eval(z),
                ev: e.eval(z),
                estar: e.eval_star(z),
                pe: e.phase(x).phi_prime,
                pf: f.phase(x).phi_prime,
            }
        });
        let diag_ef = data
            .iter()
            .map(|d| (d.pe + d.pf) * (d.ev * d.fv).norm_sqr() / PI)
            .collect();
        Self {
            e: e.clone(),
            f: f.clone(),
            alpha: None,
            index_lo,
            weights_f: data.iter().map(|d| d.fv).collect(),
            weights_e: data.iter().map(|d| d.ev).collect(),
            weights_estar: data.iter().map(|d| d.estar).collect(),
            phi_prime_e: data.iter().map(|d| d.pe).collect(),
            phi_prime_f: data.iter().map(|d| d.pf).collect(),
            diag_ef,
            nodes: points,
        }
    }

    /// Sub-window `lo..=hi` of this system.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi || lo < self.index_lo || hi > self.index_hi() {
            return Err(Error::InvalidArgument(format!(
                "window [{lo}, {hi}] is not inside [{}, {}]",
                self.index_lo,
                self.index_hi()
            )));
        }
        let a = (lo - self.index_lo) as usize;
        let b = (hi - self.index_lo) as usize + 1;
        Ok(Self {
            e: self.e.clone(),
            f: self.f.clone(),
            alpha: self.alpha,
            index_lo: lo,
            nodes: self.nodes[a..b].to_vec(),
            weights_f: self.weights_f[a..b].to_vec(),
            weights_e: self.weights_e[a..b].to_vec(),
            weights_estar: self.weights_estar[a..b].to_vec(),
            phi_prime_e: self.phi_prime_e[a..b].to_vec(),
            phi_prime_f: self.phi_prime_f[a..b].to_vec(),
            diag_ef: self.diag_ef[a..b].to_vec(),
        })
    }

    pub fn e(&self) -> &HermiteBiehlerFunction {
        &self.e
    }

    pub fn f(&self) -> &HermiteBiehlerFunction {
        &self.f
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn index_lo(&self) -> i64 {
        self.index_lo
    }

    pub fn index_hi(&self) -> i64 {
        self.index_lo + self.nodes.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `F(λ_n)`.
    pub fn weights_f(&self) -> &[Complex64] {
        &self.weights_f
    }

    /// `E(λ_n)`.
    pub fn weights_e(&self) -> &[Complex64] {
        &self.weights_e
    }

    /// `E*(λ_n)`.
    pub fn weights_estar(&self) -> &[Complex64] {
        &self.weights_estar
    }

    pub fn phi_prime_e(&self) -> &[f64] {
        &self.phi_prime_e
    }

    pub fn phi_prime_f(&self) -> &[f64] {
        &self.phi_prime_f
    }

    /// `K_EF(λ_n, λ_n)`.
    pub fn diag_ef(&self) -> &[f64] {
        &self.diag_ef
    }

    fn check_len(&self, samples: &[Complex64]) -> Result<()> {
        if samples.len() != self.nodes.len() {
            return Err(Error::LengthMismatch {
                expected: self.nodes.len(),
                found: samples.len(),
            });
        }
        Ok(())
    }

    /// `Σ s_n · weight_n · K_G(λ_n, z) / K_EF(λ_n, λ_n)` with `G` either `E` or `F`.
    fn series<W>(&self, samples: &[Complex64], generator: &HermiteBiehlerFunction, z: Complex64, weight: W) -> Result<Complex64>
    where
        W: Fn(usize) -> Complex64 + Sync + Send,
    {
        self.check_len(samples)?;
        Ok(par::sum_indexed(self.nodes.len(), |n| {
            if samples[n] == Complex64::new(0.0, 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            samples[n] * weight(n) * kernel(generator, Complex64::new(self.nodes[n], 0.0), z) / self.diag_ef[n]
        }))
    }

    /// `Σ f(λ_n) |F(λ_n)|² K_E(λ_n, z) / K_EF(λ_n, λ_n)`.
    pub fn reconstruct_in_e(&self, samples_f: &[Complex64], z: Complex64) -> Result<Complex64> {
        self.series(samples_f, &self.e, z, |n| self.weights_f[n].norm_sqr().into())
    }

    /// `Σ g(λ_n) |E(λ_n)|² K_F(λ_n, z) / K_EF(λ_n, λ_n)`.
    pub fn reconstruct_in_f(&self, samples_g: &[Complex64], z: Complex64) -> Result<Complex64> {
        self.series(samples_g, &self.f, z, |n| self.weights_e[n].norm_sqr().into())
    }

    /// `Σ f(λ_n) F(λ_n) E(λ_n) K_F(λ_n, z) / K_EF(λ_n, λ_n)`, which vanishes
    /// in the limit for `f ∈ H(E)`.
    pub fn orthogonality_residual_e(&self, samples_f: &[Complex64], z: Complex64) -> Result<Complex64> {
        self.series(samples_f, &self.f, z, |n| self.weights_f[n] * self.weights_e[n])
    }

    /// `Σ g(λ_n) E*(λ_n) conj(F(λ_n)) K_E(λ_n, z) / K_EF(λ_n, λ_n)`, which
    /// vanishes in the limit for `g ∈ H(F)`.
    pub fn orthogonality_residual_f(&self, samples_g: &[Complex64], z: Complex64) -> Result<Complex64> {
        self.series(samples_g, &self.e, z, |n| self.weights_estar[n] * self.weights_f[n].conj())
    }

    /// `Σ |f(λ_n)|² |F(λ_n)|² / K_EF(λ_n, λ_n)`; tends to `‖f‖²_E`.
    pub fn frame_energy_e(&self, samples_f: &[Complex64]) -> Result<f64> {
        self.check_len(samples_f)?;
        Ok(samples_f
            .iter()
            .zip(&self.weights_f)
            .zip(&self.diag_ef)
            .map(|((s, w), d)| s.norm_sqr() * w.norm_sqr() / d)
            .sum())
    }

    /// `Σ |g(λ_n)|² |E(λ_n)|² / K_EF(λ_n, λ_n)`; tends to `‖g‖²_F`.
    pub fn frame_energy_f(&self, samples_g: &[Complex64]) -> Result<f64> {
        self.check_len(samples_g)?;
        Ok(samples_g
            .iter()
            .zip(&self.weights_e)
            .zip(&self.diag_ef)
            .map(|((s, w), d)| s.norm_sqr() * w.norm_sqr() / d)
            .sum())
    }

    /// Gram matrix of the dilated vectors
    /// `u_n = [conj(F(λ_n)) K_E(λ_n,·)·F ⊕ E(λ_n) K_F(λ_n,·)·E*] / sqrt(K_EF(λ_n, λ_n))`.
    ///
    /// The two summands are orthogonal in `H(EF)`, so the entries are the sum
    /// of the component Grams; `G[j][k] = ⟨u_k, u_j⟩`.
    pub fn naimark_gram(&self) -> CMatrix {
        let n = self.nodes.len();
        let entries = par::map_indexed(n * n, |idx| {
            let (j, k) = (idx / n, idx % n);
            let (xj, xk) = (Complex64::new(self.nodes[j], 0.0), Complex64::new(self.nodes[k], 0.0));
            let e_part = self.weights_f[k].conj() * self.weights_f[j] * kernel(&self.e, xk, xj);
            let f_part = self.weights_e[k] * self.weights_e[j].conj() * kernel(&self.f, xk, xj);
            (e_part + f_part) / (self.diag_ef[j] * self.diag_ef[k]).sqrt()
        });
        CMatrix::from_row_slice(n, n, &entries)
    }

    /// Extreme eigenvalues of [`Self::naimark_gram`]: Riesz bounds of the
    /// truncated dilated system. A near-zero minimum flags incompleteness.
    pub fn naimark_spectrum(&self) -> (f64, f64) {
        let values = linalg::hermitian_eigenvalues(&self.naimark_gram());
        match (values.first(), values.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0.0, 0.0),
        }
    }
}

fn check_samples(nodes: &[f64], samples: &[Complex64]) -> Result<()> {
    if samples.len() != nodes.len() {
        return Err(Error::LengthMismatch {
            expected: nodes.len(),
            found: samples.len(),
        });
    }
    Ok(())
}

/// Orthonormal-basis sampling series `Σ f(λ_n) K_E(λ_n, z) / K_E(λ_n, λ_n)`
/// for nodes solved on `E` itself.
pub fn reconstruct_onb(e: &HermiteBiehlerFunction, nodes: &[f64], samples: &[Complex64], z: Complex64) -> Result<Complex64> {
    check_samples(nodes, samples)?;
    Ok(par::sum_indexed(nodes.len(), |n| {
        if samples[n] == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let x = nodes[n];
        samples[n] * kernel(e, Complex64::new(x, 0.0), z) / kernel_diag(e, x)
    }))
}

/// `Σ |f(λ_n) / E(λ_n)|² π / φ'(λ_n)` over the window.
pub fn norm_from_samples(e: &HermiteBiehlerFunction, nodes: &[f64], samples: &[Complex64]) -> Result<f64> {
    check_samples(nodes, samples)?;
    Ok(nodes
        .iter()
        .zip(samples)
        .map(|(&x, s)| (s / e.eval_real(x)).norm_sqr() * PI / e.phase(x).phi_prime)
        .sum())
}

/// Frame-bound estimates on a probe subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Extremal values of `Σ_n w_n |f(λ_n)|² / ‖f‖²` over
/// `f ∈ span{K_{E0}(μ_j, ·)}`, with `w_n = 1/K_{E0}(λ_n, λ_n)` when
/// `normalize` is set and `1` otherwise.
pub fn frame_bounds(
    e0: &HermiteBiehlerFunction,
    nodes: &[f64],
    normalize: bool,
    probe_centers: &[Complex64],
) -> Result<FrameBounds> {
    let p = probe_centers.len();
    if p == 0 {
        return Ok(FrameBounds { lower: 0.0, upper: 0.0 });
    }
    let gram = kernel::gram(e0, probe_centers)?;
    // rows: nodes, columns: probe kernels evaluated at the node, pre-scaled by sqrt(w_n)
    let rows = par::map_slice(nodes, |&x| {
        let scale = if normalize { kernel_diag(e0, x).sqrt().recip() } else { 1.0 };
        probe_centers
            .iter()
            .map(|&mu| kernel(e0, mu, Complex64::new(x, 0.0)) * scale)
            .collect::<Vec<_>>()
    });
    let values = CMatrix::from_fn(nodes.len(), p, |n, j| rows[n][j]);
    let form = values.adjoint() * &values;
    let (lower, upper) = linalg::generalized_extremes(&form, &gram)?;
    Ok(FrameBounds { lower, upper })
}

/// Ridge-regularized least-squares coefficients `c_n` with
/// `Σ c_n K_{E0}(λ_n, ·) ≈ target`, preferring small `‖c‖`.
pub fn dual_coefficients(e0: &HermiteBiehlerFunction, nodes: &[f64], target: &KernelCombination) -> Result<Vec<Complex64>> {
    if nodes.is_empty() {
        return Ok(Vec::new());
    }
    let points: Vec<Complex64> = nodes.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut system = kernel::gram(e0, &points)?;
    let trace: f64 = (0..nodes.len()).map(|n| system[(n, n)].re).sum();
    let ridge = DUAL_RIDGE * trace;
    for n in 0..nodes.len() {
        system[(n, n)] += ridge;
    }
    let rhs = CVector::from_vec(target.sample(nodes));
    if rhs.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return Ok(vec![Complex64::new(0.0, 0.0); nodes.len()]);
    }
    let solution = linalg::solve_hermitian(&system, &rhs)?;
    Ok(solution.iter().copied().collect())
}

/// `Σ c_n K_{E0}(λ_n, z)`.
pub fn synthesize(e0: &HermiteBiehlerFunction, nodes: &[f64], coefficients: &[Complex64], z: Complex64) -> Result<Complex64> {
    check_samples(nodes, coefficients)?;
    Ok(par::sum_indexed(nodes.len(), |n| {
        coefficients[n] * kernel(e0, Complex64::new(nodes[n], 0.0), z)
    }))
}

/// Frame-bounds report written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    #[serde(rename = "A_est")]
    pub a_est: f64,
    #[serde(rename = "B_est")]
    pub b_est: f64,
    pub window: [i64; 2],
    pub normalize: bool,
    pub min_gram_eig: f64,
}
