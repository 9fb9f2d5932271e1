//! Quadrature inner products in `H(E)` and `H(EF)`.
//!
//! These are the independent cross-check for the Gram algebra in
//! [`crate::kernel`]; nothing in the reconstruction paths calls into here.
//!
//! The integral over the real line is truncated to `[-T, T]` and evaluated
//! by globally adaptive Gauss–Kronrod (7/15) refinement. Integrands built from
//! kernel combinations decay like `C/t²`, so the discarded tails are bounded
//! by `C/T` on each side with `C` measured on `T/2 ≤ |t| ≤ T`. That bound is
//! reported separately and included in the total error estimate.

use num_complex::Complex64;

use crate::hb::HermiteBiehlerFunction;
use crate::kernel::KernelCombination;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub half_width: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            half_width: 64.0,
            rel_tol: 1e-8,
            max_depth: 18,
        }
    }
}

const ABS_FLOOR: f64 = 1e-12;
const INITIAL_DEPTH: u32 = 7;
const MAX_PANELS: usize = 1 << 20;
const TAIL_PROBES: usize = 512;
// Margin on the sampled envelope constant, which is itself only a sample maximum.
const TAIL_SAFETY: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// `interior_error + tail_bound`.
    pub error_estimate: f64,
    /// Gauss–Kronrod estimate on `[-T, T]`.
    pub interior_error: f64,
    /// Bound on the integral outside `[-T, T]`.
    pub tail_bound: f64,
    /// Whether the interior estimate met `rel_tol·|value| + 1e-12`.
    pub converged: bool,
    pub panels: usize,
}

impl QuadratureResult {
    fn exact_zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            interior_error: 0.0,
            tail_bound: 0.0,
            converged: true,
            panels: 0,
        }
    }
}

// Kronrod abscissae on [0, 1]; odd indices (1, 3, 5) are the Gauss points,
// index 7 is the centre.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    value: Complex64,
    error: f64,
}

fn gauss_kronrod<F>(h: &F, a: f64, b: f64, depth: u32) -> Panel
where
    F: Fn(f64) -> Complex64,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = h(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = h(centre - dx) + h(centre + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Panel {
        a,
        b,
        depth,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    }
}

/// Adaptive integral of `h` over `[-T, T]` plus a `C/t²` tail bound.
pub fn integrate<F>(h: F, spec: &QuadratureSpec) -> QuadratureResult
where
    F: Fn(f64) -> Complex64 + Sync + Send,
{
    let t = spec.half_width;
    let initial_depth = INITIAL_DEPTH.min(spec.max_depth);
    let count = 1usize << initial_depth;
    let width = 2.0 * t / count as f64;
    let mut panels = par::map_indexed(count, |k| {
        let a = -t + k as f64 * width;
        let b = if k + 1 == count { t } else { a + width };
        gauss_kronrod(&h, a, b, initial_depth)
    });

    let mut converged = false;
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let tol = spec.rel_tol * value.norm() + ABS_FLOOR;
        if error <= tol {
            converged = true;
            break;
        }
        if panels.len() >= MAX_PANELS {
            break;
        }
        let threshold = tol / panels.len() as f64;
        let split: Vec<usize> = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.error > threshold && p.depth < spec.max_depth)
            .map(|(i, _)| i)
            .collect();
        if split.is_empty() {
            break;
        }
        let children = par::map_slice(&split, |&i| {
            let p = panels[i];
            let mid = 0.5 * (p.a + p.b);
            (
                gauss_kronrod(&h, p.a, mid, p.depth + 1),
                gauss_kronrod(&h, mid, p.b, p.depth + 1),
            )
        });
        let mut next = Vec::with_capacity(panels.len() + split.len());
        let mut pending = split.iter().zip(children).peekable();
        for (i, p) in panels.into_iter().enumerate() {
            match pending.peek() {
                Some((&j, _)) if j == i => {
                    let (_, (left, right)) = pending.next().expect("peeked");
                    next.push(left);
                    next.push(right);
                }
                _ => next.push(p),
            }
        }
        panels = next;
    }

    let value: Complex64 = panels.iter().map(|p| p.value).sum();
    let interior_error: f64 = panels.iter().map(|p| p.error).sum();
    let tail_bound = tail_bound(&h, t);
    QuadratureResult {
        value,
        error_estimate: interior_error + tail_bound,
        interior_error,
        tail_bound,
        converged,
        panels: panels.len(),
    }
}

/// `C₊/T + C₋/T` with `C± = max |h(t)|·t²` sampled over `T/2 ≤ ±t ≤ T`, times a safety margin.
fn tail_bound<F>(h: &F, t: f64) -> f64
where
    F: Fn(f64) -> Complex64 + Sync + Send,
{
    let envelope = par::map_indexed(2 * TAIL_PROBES, |k| {
        let sign = if k < TAIL_PROBES { 1.0 } else { -1.0 };
        let s = (k % TAIL_PROBES) as f64 / (TAIL_PROBES - 1) as f64;
        let x = sign * t * (0.5 + 0.5 * s);
        h(x).norm() * x * x
    });
    let positive = envelope[..TAIL_PROBES].iter().copied().fold(0.0, f64::max);
    let negative = envelope[TAIL_PROBES..].iter().copied().fold(0.0, f64::max);
    TAIL_SAFETY * (positive + negative) / t
}

/// `∫ u(t)·conj(v(t)) / |G(t)|² dt` for functions `u, v` in `H(G)`.
pub fn weighted_inner<U, V>(u: U, v: V, generator: &HermiteBiehlerFunction, spec: &QuadratureSpec) -> QuadratureResult
where
    U: Fn(Complex64) -> Complex64 + Sync + Send,
    V: Fn(Complex64) -> Complex64 + Sync + Send,
{
    integrate(
        |t| {
            let z = Complex64::new(t, 0.0);
            u(z) * v(z).conj() / generator.eval(z).norm_sqr()
        },
        spec,
    )
}

/// `⟨f, g⟩_E` by quadrature.
pub fn inner_product(
    f: &KernelCombination,
    g: &KernelCombination,
    e: &HermiteBiehlerFunction,
    spec: &QuadratureSpec,
) -> QuadratureResult {
    if f.is_zero() || g.is_zero() {
        return QuadratureResult::exact_zero();
    }
    weighted_inner(|z| f.eval(z), |z| g.eval(z), e, spec)
}

/// `⟨f·F, g·E*⟩_{EF}` for `f ∈ H(E)`, `g ∈ H(F)`.
pub fn cross_inner_ef(
    f: &KernelCombination,
    g: &KernelCombination,
    e: &HermiteBiehlerFunction,
    f_gen: &HermiteBiehlerFunction,
    spec: &QuadratureSpec,
) -> QuadratureResult {
    if f.is_zero() || g.is_zero() {
        return QuadratureResult::exact_zero();
    }
    let ef = e.product(f_gen);
    weighted_inner(|z| f.eval(z) * f_gen.eval(z), |z| g.eval(z) * e.eval_star(z), &ef, spec)
}

/// `⟨f₁·F, f₂·F⟩_{EF}`, the image of `f ↦ fF`.
pub fn embedded_inner_e(
    f1: &KernelCombination,
    f2: &KernelCombination,
    e: &HermiteBiehlerFunction,
    f_gen: &HermiteBiehlerFunction,
    spec: &QuadratureSpec,
) -> QuadratureResult {
    let ef = e.product(f_gen);
    weighted_inner(|z| f1.eval(z) * f_gen.eval(z), |z| f2.eval(z) * f_gen.eval(z), &ef, spec)
}

/// `⟨g₁·E*, g₂·E*⟩_{EF}`, the image of `g ↦ gE*`.
pub fn embedded_inner_f(
    g1: &KernelCombination,
    g2: &KernelCombination,
    e: &HermiteBiehlerFunction,
    f_gen: &HermiteBiehlerFunction,
    spec: &QuadratureSpec,
) -> QuadratureResult {
    let ef = e.product(f_gen);
    weighted_inner(|z| g1.eval(z) * e.eval_star(z), |z| g2.eval(z) * e.eval_star(z), &ef, spec)
}
