//! Invariant suite behind the `verify` command.
//!
//! Each check draws its inputs from a seeded generator, so a run is fully
//! reproducible. Tolerances mirror the ones used by the test suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::frames::{self, FrameSystem};
use crate::hb::HermiteBiehlerFunction;
use crate::kernel::{self, kernel, kernel_diag, KernelCombination};
use crate::linalg;
use crate::multiplex;
use crate::nodes::{solve_nodes, RESIDUAL_TOL};
use crate::presets::Preset;
use crate::space::{self, QuadratureSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Random combination with `count` centers in `|Re| ≤ re_max`, `|Im| ≤ im_max`.
pub fn random_combination<R: Rng>(
    rng: &mut R,
    e: &HermiteBiehlerFunction,
    count: usize,
    re_max: f64,
    im_max: f64,
) -> KernelCombination {
    let centers = (0..count)
        .map(|_| Complex64::new(rng.random_range(-re_max..=re_max), rng.random_range(-im_max..=im_max)))
        .collect();
    let coefficients = (0..count)
        .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    KernelCombination::new(e.clone(), centers, coefficients).expect("equal lengths")
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Real grid `a, a + step, ..., b`.
pub fn real_grid(a: f64, b: f64, step: f64) -> Vec<Complex64> {
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|k| Complex64::new(a + k as f64 * step, 0.0)).collect()
}

/// Runs every check for one preset.
pub fn run_checks(preset: &Preset, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (e, f) = (&preset.e, &preset.f);
    let ef = e.product(f);
    let mut out = Vec::new();

    // Hermite–Biehler inequality on the upper half-plane.
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let z = Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(0.01..3.0));
        for g in [e, f] {
            worst = worst.max(g.eval_star(z).norm() / g.eval(z).norm());
        }
    }
    out.push(CheckResult::new("hb_inequality", worst < 1.0, format!("max |E*|/|E| = {worst:.6}")));

    // Phase consistency and derivative.
    let (mut phase_err, mut dphase_err) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let x = rng.random_range(-10.0..10.0);
        let p = e.phase(x);
        let v = e.eval_real(x);
        let rebuilt = Complex64::from_polar(v.norm(), -p.phi);
        phase_err = phase_err.max(rel_err(rebuilt, v));
        let h = 1e-5;
        let fd = (e.phase(x + h).phi - e.phase(x - h).phi) / (2.0 * h);
        dphase_err = dphase_err.max((fd - p.phi_prime).abs());
    }
    out.push(CheckResult::new(
        "phase_consistency",
        phase_err <= 1e-12 && dphase_err <= 1e-6,
        format!("e^(-i phi) rel err {phase_err:.2e}, phi' fd err {dphase_err:.2e}"),
    ));

    // Diagonal identity.
    let mut diag_err = 0.0f64;
    for _ in 0..1000 {
        let x = rng.random_range(-20.0..20.0);
        let x_c = Complex64::new(x, 0.0);
        let d = kernel_diag(e, x);
        diag_err = diag_err.max((kernel(e, x_c, x_c) - d).norm() / d);
    }
    out.push(CheckResult::new(
        "kernel_diagonal_identity",
        diag_err <= 1e-8,
        format!("max rel err {diag_err:.2e}"),
    ));

    // Hermitian symmetry and the E/F kernel decomposition.
    let (mut sym_err, mut split_err) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let w = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-1.5..1.5));
        let z = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-1.5..1.5));
        let k = kernel(e, w, z);
        sym_err = sym_err.max((k - kernel(e, z, w).conj()).norm() / k.norm().max(1.0));
        let whole = kernel(&ef, w, z);
        let parts = f.eval(w).conj() * f.eval(z) * k + e.eval(w.conj()) * e.eval_star(z) * kernel(f, w, z);
        split_err = split_err.max(rel_err(parts, whole));
    }
    out.push(CheckResult::new("kernel_hermitian", sym_err <= 1e-10, format!("max err {sym_err:.2e}")));
    out.push(CheckResult::new(
        "kernel_decomposition",
        split_err <= 1e-9,
        format!("max rel err {split_err:.2e}"),
    ));

    // Gram positivity.
    let mut min_eig = f64::INFINITY;
    for _ in 0..20 {
        let count = rng.random_range(1..=12);
        let pts: Vec<Complex64> = (0..count)
            .map(|_| Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-1.0..1.0)))
            .collect();
        let g = kernel::gram(e, &pts)?;
        let scale = (0..count).map(|k| g[(k, k)].re).fold(0.0, f64::max);
        min_eig = min_eig.min(linalg::hermitian_eigenvalues(&g)[0] / scale);
    }
    out.push(CheckResult::new("gram_psd", min_eig >= -1e-10, format!("min scaled eig {min_eig:.2e}")));

    // Nodes: residuals, monotonicity, zero set of EF + (EF)*.
    let set = solve_nodes(&ef, PI / 2.0, -200, 200)?;
    let max_res = set.residuals().iter().copied().fold(0.0, f64::max);
    let monotone = set.nodes().windows(2).all(|w| w[0] < w[1]);
    let zero_err = set
        .nodes()
        .iter()
        .map(|&x| {
            let v = ef.eval_real(x);
            (v + v.conj()).norm() / v.norm()
        })
        .fold(0.0, f64::max);
    out.push(CheckResult::new(
        "node_solver",
        max_res <= RESIDUAL_TOL && monotone && zero_err <= 1e-8,
        format!("max residual {max_res:.2e}, zero-set err {zero_err:.2e}, monotone {monotone}"),
    ));

    // Parseval partial sums and pointwise reconstruction.
    let sys = FrameSystem::solve(e, f, 0.0, -800, 800)?;
    let mut parseval_ok = true;
    let mut worst_deficit = 0.0f64;
    for _ in 0..5 {
        let fc = random_combination(&mut rng, e, 3, 2.0, 0.5);
        let samples = fc.sample(sys.nodes());
        let norm = fc.norm_squared();
        let mut last = 0.0;
        for n in [50i64, 200, 800] {
            let sub = sys.restrict(-n, n)?;
            let k0 = (sub.index_lo() - sys.index_lo()) as usize;
            let energy = sub.frame_energy_e(&samples[k0..k0 + sub.len()])?;
            parseval_ok &= energy >= last - 1e-12 * norm && energy <= norm * (1.0 + 1e-9);
            last = energy;
        }
        worst_deficit = worst_deficit.max(1.0 - last / norm);
    }
    out.push(CheckResult::new(
        "parseval_partial_sums",
        parseval_ok && worst_deficit <= 0.05,
        format!("worst deficit at N=800 {worst_deficit:.2e}"),
    ));

    let grid = real_grid(-3.0, 3.0, 0.25);
    let fc = random_combination(&mut rng, e, 3, 2.0, 0.5);
    let gc = random_combination(&mut rng, f, 3, 2.0, 0.5);
    let samples_f = fc.sample(sys.nodes());
    let samples_g = gc.sample(sys.nodes());
    let (mut rec, mut ortho) = ([0.0f64; 2], [0.0f64; 2]);
    for (slot, n) in [100i64, 400].into_iter().enumerate() {
        let sub = sys.restrict(-n, n)?;
        let k0 = (sub.index_lo() - sys.index_lo()) as usize;
        let sf = &samples_f[k0..k0 + sub.len()];
        for &z in &grid {
            rec[slot] += (sub.reconstruct_in_e(sf, z)? - fc.eval(z)).norm() / grid.len() as f64;
            ortho[slot] += sub.orthogonality_residual_e(sf, z)?.norm() / grid.len() as f64;
        }
    }
    out.push(CheckResult::new(
        "reconstruction_convergence",
        rec[1] <= 0.75 * rec[0],
        format!("mean err N=100 {:.2e}, N=400 {:.2e}", rec[0], rec[1]),
    ));
    out.push(CheckResult::new(
        "orthogonality_decay",
        ortho[1] <= ortho[0],
        format!("mean residual N=100 {:.2e}, N=400 {:.2e}", ortho[0], ortho[1]),
    ));

    // Multiplex round trip at a finite window.
    let sub = sys.restrict(-100, 100)?;
    let k0 = (sub.index_lo() - sys.index_lo()) as usize;
    let (sf, sg) = (&samples_f[k0..k0 + sub.len()], &samples_g[k0..k0 + sub.len()]);
    let stream = multiplex::encode(&sub, sf, sg)?;
    let mut identity_err = 0.0f64;
    for &z in &grid {
        let lhs_f = multiplex::decode_f(&stream, z) - sub.reconstruct_in_e(sf, z)?;
        identity_err = identity_err.max((lhs_f - sub.orthogonality_residual_f(sg, z)?).norm());
        let lhs_g = multiplex::decode_g(&stream, z) - sub.reconstruct_in_f(sg, z)?;
        identity_err = identity_err.max((lhs_g - sub.orthogonality_residual_e(sf, z)?).norm());
    }
    out.push(CheckResult::new(
        "multiplex_round_trip",
        identity_err <= 1e-12,
        format!("max identity err {identity_err:.2e}"),
    ));

    // Dilation Gram on phase-spaced nodes.
    let small = sys.restrict(-25, 25)?;
    let g = small.naimark_gram();
    let eye_err = (g - linalg::CMatrix::identity(small.len(), small.len())).camax();
    out.push(CheckResult::new(
        "naimark_identity",
        eye_err <= 1e-9,
        format!("max |G - I| {eye_err:.2e}"),
    ));

    // Quadrature against Gram algebra.
    let spec = QuadratureSpec::default();
    let mut quad_ok = true;
    let mut worst_ratio = 0.0f64;
    for _ in 0..4 {
        let a = random_combination(&mut rng, e, 2, 3.0, 1.0);
        let b = random_combination(&mut rng, e, 2, 3.0, 1.0);
        let q = space::inner_product(&a, &b, e, &spec);
        let exact = kernel::inner_product(&a, &b);
        let allowed = (3.0 * q.error_estimate).max(1e-6);
        let diff = (q.value - exact).norm();
        quad_ok &= diff <= allowed;
        worst_ratio = worst_ratio.max(diff / allowed);
    }
    let a = random_combination(&mut rng, e, 2, 2.0, 0.5);
    let b = random_combination(&mut rng, f, 2, 2.0, 0.5);
    let cross = space::cross_inner_ef(&a, &b, e, f, &spec);
    let cross_ok = cross.value.norm() <= 10.0 * cross.error_estimate;
    out.push(CheckResult::new(
        "quadrature_oracle",
        quad_ok && cross_ok,
        format!(
            "worst diff/allowed {worst_ratio:.2}, |<fF, gE*>| {:.2e} vs est {:.2e}",
            cross.value.norm(),
            cross.error_estimate
        ),
    ));

    // Normalized frame bounds of the first factor on its own nodes.
    let own = solve_nodes(e, 0.0, -300, 300)?;
    let probes = [0.0, 0.3, 0.7, 1.4].map(|x| Complex64::new(x, 0.0));
    let bounds = frames::frame_bounds(e, own.nodes(), true, &probes)?;
    out.push(CheckResult::new(
        "onb_frame_bounds",
        bounds.lower >= 0.98 && bounds.upper <= 1.02,
        format!("A {:.6}, B {:.6}", bounds.lower, bounds.upper),
    ));

    Ok(out)
}
