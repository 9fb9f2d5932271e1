use std::f64::consts::PI;

use debranges::frames::{frame_bounds, FrameSystem};
use debranges::hb::HbSpec;
use debranges::kernel::{self, gram, kernel, kernel_diag, DIAGONAL_EPS};
use debranges::linalg::hermitian_eigenvalues;
use debranges::multiplex::{decode_f, decode_g, encode};
use debranges::nodes::solve_nodes;
use debranges::space::{self, QuadratureSpec};
use debranges::{Complex64, HermiteBiehlerFunction, KernelCombination};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hb_with_exponent(min_a: f64) -> impl Strategy<Value = HermiteBiehlerFunction> {
    (
        min_a..4.0,
        prop::collection::vec((-3.0..3.0f64, -3.0..-0.2f64), 0..4),
        0.5..2.0f64,
        -PI..PI,
    )
        .prop_filter_map("constant generator", |(a, roots, modulus, arg)| {
            HermiteBiehlerFunction::new(
                a,
                roots.into_iter().map(|(re, im)| c(re, im)).collect(),
                Complex64::from_polar(modulus, arg),
            )
            .ok()
        })
}

fn any_hb() -> impl Strategy<Value = HermiteBiehlerFunction> {
    hb_with_exponent(0.0)
}

fn entire_hb() -> impl Strategy<Value = HermiteBiehlerFunction> {
    hb_with_exponent(0.5)
}

fn point(re: f64, im: f64) -> impl Strategy<Value = Complex64> {
    (-re..re, -im..im).prop_map(|(x, y)| c(x, y))
}

fn combination(e: HermiteBiehlerFunction) -> impl Strategy<Value = KernelCombination> {
    prop::collection::vec((point(2.0, 0.7), point(1.0, 1.0)), 1..4).prop_map(move |terms| {
        let (centers, coefficients) = terms.into_iter().unzip();
        KernelCombination::new(e.clone(), centers, coefficients).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_biehler_inequality(e in any_hb(), x in -5.0..5.0f64, y in 0.01..3.0f64) {
        let z = c(x, y);
        prop_assert!(e.eval_star(z).norm() < e.eval(z).norm());
    }

    #[test]
    fn phase_reproduces_the_argument(e in any_hb(), x in -20.0..20.0f64) {
        let v = e.eval_real(x);
        let rebuilt = Complex64::from_polar(v.norm(), -e.phase(x).phi);
        prop_assert!((rebuilt - v).norm() <= 1e-12 * v.norm());
    }

    #[test]
    fn phase_derivative_matches_finite_difference(e in any_hb(), x in -10.0..10.0f64) {
        let h = 1e-5;
        let fd = (e.phase(x + h).phi - e.phase(x - h).phi) / (2.0 * h);
        let p = e.phase(x);
        prop_assert!(p.phi_prime > 0.0);
        prop_assert!((p.phi_prime - fd).abs() <= 1e-6);
    }

    #[test]
    fn derivative_matches_finite_difference(e in any_hb(), z in point(3.0, 2.0)) {
        let h = 1e-5;
        let fd = (e.eval(z + h) - e.eval(z - h)) / (2.0 * h);
        let exact = e.eval_derivative(z);
        prop_assert!((exact - fd).norm() <= 1e-6 * exact.norm().max(e.eval(z).norm()));
    }

    #[test]
    fn phase_derivative_adds_under_products(e in any_hb(), f in any_hb(), x in -10.0..10.0f64) {
        let sum = e.phase(x).phi_prime + f.phase(x).phi_prime;
        prop_assert!((e.product(&f).phase(x).phi_prime - sum).abs() <= 1e-12 * sum);
        // phases add up to a multiple of 2π
        let gap = e.product(&f).phase(x).phi - e.phase(x).phi - f.phase(x).phi;
        prop_assert!(((gap / (2.0 * PI)).round() * 2.0 * PI - gap).abs() < 1e-9);
    }

    #[test]
    fn hb_json_round_trip(e in any_hb()) {
        let text = e.to_json();
        let back = HermiteBiehlerFunction::from_json(&text).unwrap();
        prop_assert_eq!(&back, &e);
        let spec: HbSpec = serde_json::from_str(&back.to_json()).unwrap();
        prop_assert_eq!(spec, e.to_spec());
    }

    #[test]
    fn kernel_is_hermitian(e in any_hb(), w in point(4.0, 1.5), z in point(4.0, 1.5)) {
        let k = kernel(&e, w, z);
        prop_assert!((k - kernel(&e, z, w).conj()).norm() <= 1e-10 * k.norm().max(1.0));
    }

    #[test]
    fn kernel_diagonal_matches_phase_formula(e in any_hb(), x in -20.0..20.0f64) {
        let d = kernel_diag(&e, x);
        prop_assert!(d > 0.0);
        prop_assert!((kernel(&e, c(x, 0.0), c(x, 0.0)) - d).norm() <= 1e-8 * d);
    }

    #[test]
    fn kernel_is_continuous_across_the_diagonal_switch(e in any_hb(), x in -5.0..5.0f64) {
        let xc = c(x, 0.0);
        let outside = kernel(&e, xc, c(x + 1.001 * DIAGONAL_EPS, 0.0));
        let inside = kernel(&e, xc, c(x + 0.999 * DIAGONAL_EPS, 0.0));
        prop_assert!((outside - inside).norm() <= 1e-6 * kernel_diag(&e, x));
    }

    #[test]
    fn gram_is_positive_semidefinite(
        e in any_hb(),
        pts in prop::collection::vec(point(3.0, 1.0), 1..=12),
    ) {
        let g = match gram(&e, &pts) {
            Ok(g) => g,
            Err(_) => return Ok(()),
        };
        let scale = (0..pts.len()).map(|k| g[(k, k)].re).fold(0.0, f64::max);
        prop_assert!(hermitian_eigenvalues(&g)[0] >= -1e-10 * scale);
    }

    #[test]
    fn point_evaluation_is_bounded_by_the_kernel(
        (f, w) in any_hb().prop_flat_map(|e| (combination(e), point(3.0, 1.0)))
    ) {
        // |f(w)|² = |⟨f, K(w,·)⟩|² ≤ ‖f‖² K(w,w)
        let kw = KernelCombination::single(f.space_generator().clone(), w);
        let fw = f.eval(w);
        let bound = f.norm_squared() * kw.norm_squared();
        prop_assert!(fw.norm_sqr() <= bound * (1.0 + 1e-9) + 1e-14);
        let pairing = kernel::inner_product(&f, &kw);
        prop_assert!((pairing - fw).norm() <= 1e-12 * fw.norm().max(1.0));
        let back = kernel::inner_product(&kw, &f);
        prop_assert!((back - pairing.conj()).norm() <= 1e-10 * pairing.norm().max(1.0));
    }

    #[test]
    fn kernel_splits_over_products(e in any_hb(), f in any_hb(), w in point(3.0, 1.0), z in point(3.0, 1.0)) {
        let whole = kernel(&e.product(&f), w, z);
        let parts = f.eval(w).conj() * f.eval(z) * kernel(&e, w, z) + e.eval(w.conj()) * e.eval_star(z) * kernel(&f, w, z);
        let scale = (f.eval(w).norm() * f.eval(z).norm() * kernel(&e, w, z).norm())
            .max(e.eval(w.conj()).norm() * e.eval_star(z).norm() * kernel(&f, w, z).norm());
        prop_assert!((whole - parts).norm() <= 1e-9 * scale.max(whole.norm()));
    }

    #[test]
    fn scaled_generator_scales_the_diagonal(e in any_hb(), modulus in 0.2..5.0f64, arg in -PI..PI, x in -5.0..5.0f64) {
        let scaled = e.scaled(Complex64::from_polar(modulus, arg)).unwrap();
        let ratio = kernel_diag(&scaled, x) / kernel_diag(&e, x);
        prop_assert!((ratio - modulus * modulus).abs() <= 1e-12 * modulus * modulus);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nodes_are_increasing_and_on_the_zero_set(e in entire_hb(), f in any_hb(), alpha in 0.0..PI) {
        let g = e.product(&f);
        let set = solve_nodes(&g, alpha, -60, 60).unwrap();
        prop_assert!(set.nodes().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(set.residuals().iter().all(|r| *r <= 1e-10));
        for w in set.nodes().windows(2) {
            let gap = g.phase(w[1]).phi - g.phase(w[0]).phi;
            prop_assert!((gap - PI).abs() <= 1e-9);
        }
        let rot = Complex64::from_polar(1.0, alpha);
        for &x in set.nodes() {
            let v = g.eval_real(x);
            let h = rot * v - rot.conj() * v.conj();
            prop_assert!(h.norm() <= 1e-8 * v.norm());
        }
    }

    #[test]
    fn nodes_move_continuously_in_alpha(e in entire_hb(), alpha in 0.0..3.0f64, delta in 1e-6..0.1f64) {
        let a = solve_nodes(&e, alpha, -20, 20).unwrap();
        let b = solve_nodes(&e, alpha + delta, -20, 20).unwrap();
        for (&x, &y) in a.nodes().iter().zip(b.nodes()) {
            // φ' is bounded below by the exponential coefficient everywhere
            prop_assert!(y > x);
            prop_assert!(y - x <= delta / e.exp_coefficient() + 1e-12);
        }
    }

    #[test]
    fn multiplexing_is_linear(
        (e, f) in (entire_hb(), any_hb()),
        s1 in prop::collection::vec(point(1.0, 1.0), 21),
        s2 in prop::collection::vec(point(1.0, 1.0), 21),
        t1 in prop::collection::vec(point(1.0, 1.0), 21),
        t2 in prop::collection::vec(point(1.0, 1.0), 21),
        scale in point(2.0, 2.0),
        z in point(2.0, 0.5),
    ) {
        let sys = FrameSystem::solve(&e, &f, 0.3, -10, 10).unwrap();
        let add = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let mul = |a: &[Complex64]| a.iter().map(|x| x * scale).collect::<Vec<_>>();
        let m1 = encode(&sys, &s1, &t1).unwrap();
        let m2 = encode(&sys, &s2, &t2).unwrap();
        let sum = encode(&sys, &add(&s1, &s2), &add(&t1, &t2)).unwrap();
        for ((a, b), s) in m1.values().iter().zip(m2.values()).zip(sum.values()) {
            prop_assert!((a + b - s).norm() <= 1e-12 * (a.norm() + b.norm()).max(1.0));
        }
        let tol = |v: Complex64| 1e-12 * v.norm().max(1.0) * 10.0;
        let d_sum = decode_f(&sum, z);
        let d_parts = decode_f(&m1, z) + decode_f(&m2, z);
        prop_assert!((d_sum - d_parts).norm() <= tol(d_parts));
        let scaled = encode(&sys, &mul(&s1), &mul(&t1)).unwrap();
        let g_scaled = decode_g(&scaled, z);
        prop_assert!((g_scaled - decode_g(&m1, z) * scale).norm() <= tol(g_scaled));
    }

    #[test]
    fn normalized_frame_weights_sit_between_the_phase_ratios(e in entire_hb(), f in any_hb()) {
        // the sampling weight of the E-frame never exceeds the normalized weight
        let sys = FrameSystem::solve(&e, &f, 0.0, -30, 30).unwrap();
        for (k, &x) in sys.nodes().iter().enumerate() {
            let frame_weight = sys.weights_f()[k].norm_sqr() / sys.diag_ef()[k];
            let via_phase = PI / (e.eval_real(x).norm_sqr() * (sys.phi_prime_e()[k] + sys.phi_prime_f()[k]));
            prop_assert!((frame_weight - via_phase).abs() <= 1e-10 * via_phase);
            prop_assert!(via_phase <= 1.0 / kernel_diag(&e, x) * (1.0 + 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn quadrature_is_conjugate_symmetric_and_isometric(
        (e, f1, f2) in entire_hb().prop_flat_map(|e| (Just(e.clone()), combination(e.clone()), combination(e))),
        other in entire_hb(),
    ) {
        let spec = QuadratureSpec::default();
        let ab = space::inner_product(&f1, &f2, &e, &spec);
        let ba = space::inner_product(&f2, &f1, &e, &spec);
        prop_assert!((ab.value - ba.value.conj()).norm() <= 1e-10 * ab.value.norm().max(1.0));

        let plain = space::inner_product(&f1, &f1, &e, &spec);
        let lifted = space::embedded_inner_e(&f1, &f1, &e, &other, &spec);
        prop_assert!((plain.value - lifted.value).norm() <= plain.error_estimate + lifted.error_estimate);

        let g = KernelCombination::new(other.clone(), f1.centers().to_vec(), f1.coefficients().to_vec()).unwrap();
        let plain_g = space::inner_product(&g, &g, &other, &spec);
        let lifted_g = space::embedded_inner_f(&g, &g, &e, &other, &spec);
        prop_assert!((plain_g.value - lifted_g.value).norm() <= plain_g.error_estimate + lifted_g.error_estimate);
    }
}

#[test]
fn normalized_and_plain_bounds_agree_in_paley_wiener() {
    let e = HermiteBiehlerFunction::exponential(PI).unwrap();
    let nodes = solve_nodes(&e, 0.25, -200, 200).unwrap();
    let probes = [c(0.0, 0.0), c(0.5, 0.2), c(-1.1, 0.0), c(2.0, -0.3)];
    let a = frame_bounds(&e, nodes.nodes(), true, &probes).unwrap();
    let b = frame_bounds(&e, nodes.nodes(), false, &probes).unwrap();
    assert!((a.lower - b.lower).abs() <= 1e-9 && (a.upper - b.upper).abs() <= 1e-9);
}
