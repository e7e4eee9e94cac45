use getzler_core::clifford::{clifford_mul, exp_clifford, quantize, sigma, tau, CliffordElement, SpinElement};
use getzler_core::exterior::Multivector;
use getzler_core::geometry::{theorem1_sides, theorem2_sides, RiemannTensor};
use getzler_core::getzler::{
    assembled_supertrace, mehler_kernel, parabolic_rescale, supertrace_from_symbol, KernelExpansion, Monomial,
};
use getzler_core::integrator::{gauss_grassmann_integral, gauss_hermite, Pointwise, QuadratureSpec};
use getzler_core::nilpotent::{h_operator, AnalyticComposite, ScalarExpr};
use getzler_core::oracles::mehler_1d_closed;
use getzler_core::sample::{random_multivector, random_riemann, random_spin_element, random_vector};
use getzler_core::spin_rep::{chirality, supertrace_identity_error, SpinorBasis};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn even_dim() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(4), Just(6)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wedge_and_clifford_products_associate(seed in any::<u64>(), n in even_dim()) {
        let mut r = rng(seed);
        let a = random_multivector(&mut r, n).unwrap();
        let b = random_multivector(&mut r, n).unwrap();
        let c = random_multivector(&mut r, n).unwrap();
        let lhs = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let rhs = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
        let (qa, qb, qc) = (quantize(&a), quantize(&b), quantize(&c));
        let lhs = clifford_mul(&clifford_mul(&qa, &qb).unwrap(), &qc).unwrap();
        let rhs = clifford_mul(&qa, &clifford_mul(&qb, &qc).unwrap()).unwrap();
        prop_assert!(sigma(&lhs).max_abs_diff(&sigma(&rhs)) < 1e-10);
    }

    #[test]
    fn clifford_relation_on_random_vectors(seed in any::<u64>(), n in even_dim()) {
        let mut r = rng(seed);
        let v = random_vector(&mut r, n, 1.0).unwrap();
        let w = random_vector(&mut r, n, 1.0).unwrap();
        let (cv, cw) = (quantize(&Multivector::from_vector(&v).unwrap()), quantize(&Multivector::from_vector(&w).unwrap()));
        let anti = clifford_mul(&cv, &cw).unwrap().add(&clifford_mul(&cw, &cv).unwrap()).unwrap();
        let dot: f64 = v.as_slice().iter().zip(w.as_slice()).map(|(x, y)| x * y).sum();
        let expected = CliffordElement::one(n).unwrap().scale(-2.0 * dot);
        prop_assert!(sigma(&anti).max_abs_diff(&sigma(&expected)) < 1e-13);
    }

    #[test]
    fn supertrace_identity(seed in any::<u64>(), n in even_dim()) {
        let mut r = rng(seed);
        let basis = SpinorBasis::new(n).unwrap();
        let g = chirality(n).unwrap();
        let omega = random_multivector(&mut r, n).unwrap();
        prop_assert!(supertrace_identity_error(&basis, &g, &omega).unwrap() < 1e-10);
    }

    #[test]
    fn tau_is_antisymmetric(seed in any::<u64>(), n in even_dim()) {
        let a = random_spin_element(&mut rng(seed), n, 2.0).unwrap();
        let m = tau(&a).unwrap().into_matrix();
        prop_assert!(m.max_antisymmetry_violation() < 1e-14);
    }

    #[test]
    fn h_operator_identity(seed in any::<u64>(), n in prop_oneof![Just(2usize), Just(4)]) {
        let a = random_spin_element(&mut rng(seed), n, 0.5).unwrap();
        let lhs = sigma(&exp_clifford(&a, 1e-17).unwrap());
        let rhs = h_operator(&a).unwrap().apply(&a.to_form().exp_wedge()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-8);
    }

    #[test]
    fn grassmann_identities(seed in any::<u64>(), n in prop_oneof![Just(2usize), Just(4)]) {
        let mut r = rng(seed);
        let rt = random_riemann(&mut r, n, 1.0).unwrap();
        let v = random_vector(&mut r, n, 1.5).unwrap();
        prop_assert!(theorem1_sides(&rt).unwrap().error() < 1e-10);
        prop_assert!(theorem2_sides(&v, &rt).unwrap().error() < 1e-10);
    }

    #[test]
    fn curvature_tensor_symmetries(seed in any::<u64>(), n in even_dim()) {
        let rt = random_riemann(&mut rng(seed), n, 1.0).unwrap();
        let (anti, pair, bianchi) = rt.symmetry_defects();
        prop_assert!(anti < 1e-14 && pair < 1e-14 && bianchi < 1e-14);
        prop_assert!(RiemannTensor::new(n, rt.components().to_vec()).is_ok());
    }

    #[test]
    fn supertrace_routes(seed in any::<u64>(), n in prop_oneof![Just(2usize), Just(4)]) {
        let mut r = rng(seed);
        let k = KernelExpansion::from_multivector(&random_multivector(&mut r, n).unwrap()).unwrap();
        let a = supertrace_from_symbol(&k).unwrap();
        let b = assembled_supertrace(&k).unwrap();
        prop_assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn parabolic_rescaling_is_a_group_action(seed in any::<u64>(), u1 in 0.2f64..2.0, u2 in 0.2f64..2.0) {
        let mut r = rng(seed);
        let mut k = KernelExpansion::new(4).unwrap();
        k.add_term(Monomial::new(vec![1, 0, 2, 0], 1, 0), &random_multivector(&mut r, 4).unwrap()).unwrap();
        k.add_term(Monomial::new(vec![0, 0, 0, 0], -1, 0), &random_multivector(&mut r, 4).unwrap()).unwrap();
        let k = k.with_prefactor();
        let v = random_vector(&mut r, 4, 1.0).unwrap();
        let twice = parabolic_rescale(&parabolic_rescale(&k, u1).unwrap(), u2).unwrap();
        let once = parabolic_rescale(&k, u1 * u2).unwrap();
        let (a, b) = (twice.evaluate(&v, 0.7, 1.0).unwrap(), once.evaluate(&v, 0.7, 1.0).unwrap());
        prop_assert!(a.max_abs_diff(&b) <= 1e-10 * b.max_abs().max(1.0));
    }

    #[test]
    fn mehler_symbol_positivity(seed in any::<u64>(), t in 0.05f64..3.0) {
        let mut r = rng(seed);
        let rt = random_riemann(&mut r, 4, 1.0).unwrap();
        let v = random_vector(&mut r, 4, 2.0).unwrap();
        let k = mehler_kernel(&rt, &v, t).unwrap();
        let flat = (4.0 * std::f64::consts::PI * t).powi(-2) * (-v.norm_sq() / (4.0 * t)).exp();
        prop_assert!(k.coeff(0) > 0.0);
        prop_assert!((k.coeff(0) - flat).abs() <= 1e-14 * flat);
    }

    #[test]
    fn mehler_1d_is_symmetric(a in 0.05f64..3.0, t in 0.05f64..3.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        prop_assert_eq!(mehler_1d_closed(a, t, x, y).unwrap(), mehler_1d_closed(a, t, y, x).unwrap());
    }

    #[test]
    fn gauss_hermite_is_exact_on_polynomials(order in 1usize..30, k in 0u32..60) {
        prop_assume!(k < 2 * order as u32);
        let (x, w) = gauss_hermite(order).unwrap();
        let quad: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
        // ∫ x^k e^{−x²} = Γ((k+1)/2) for even k.
        let exact = if k % 2 == 1 { 0.0 } else { (1..=k / 2).map(|j| (2 * j - 1) as f64 / 2.0).product::<f64>() * std::f64::consts::PI.sqrt() };
        let scale: f64 = x.iter().zip(&w).map(|(x, w)| (w * x.powi(k as i32)).abs()).sum();
        prop_assert!((quad - exact).abs() <= 1e-13 * scale.max(1.0));
    }
}

#[test]
fn polynomial_integrands_are_order_independent() {
    // Ψ polynomial of degree 3; the Clifford factor is entire, so only the
    // Gaussian moments matter once the order is large.
    let psi = AnalyticComposite::new(2, ScalarExpr::coord(1, 2) * ScalarExpr::coord(1, 2) * ScalarExpr::coord(1, 2)).unwrap();
    let ev = psi.evaluator().unwrap();
    let a = gauss_grassmann_integral(&ev, 0.1, QuadratureSpec::gauss_hermite(30).claiming_exactness(3)).unwrap();
    let b = gauss_grassmann_integral(&ev, 0.1, QuadratureSpec::gauss_hermite(31).claiming_exactness(3)).unwrap();
    assert!(a.value.max_abs_diff(&b.value) < 1e-12);
}

#[test]
fn delta_t_matches_completed_square_form() {
    // δ_t σ(exp_C A) = ℋ(τ(A)) exp_∧(σ(A)/t), integrated against the same nodes.
    let mut r = rng(99);
    for _ in 0..5 {
        let c: Vec<f64> = (0..3).map(|_| rand::Rng::random_range(&mut r, -1.0..1.0)).collect();
        let psi = move |a: f64| c[0] + c[1] * a + c[2] * (a * a).sin();
        let t = 0.08;
        let radius = 1.5;
        let spec = QuadratureSpec::gauss_hermite(24).with_support_radius(radius);
        let pw = Pointwise::new(2, |x: &[f64]| Ok(psi(x[0]))).unwrap();
        let lhs = gauss_grassmann_integral(&pw, t, spec).unwrap().value;

        let (x, w) = gauss_hermite(24).unwrap();
        let mut rhs = Multivector::zero(2).unwrap();
        for (xi, wi) in x.iter().zip(&w) {
            let a = 2.0 * t.sqrt() * xi;
            if a.abs() > radius {
                continue;
            }
            let el = SpinElement::basis(2, 1, 2, a).unwrap();
            let form = el.to_form().scale(1.0 / t).exp_wedge();
            let h = h_operator(&el).unwrap().apply(&form).unwrap();
            rhs += &h.scale(wi / std::f64::consts::PI.sqrt() * psi(a));
        }
        assert!(lhs.max_abs_diff(&rhs) < 1e-8, "{}", lhs.max_abs_diff(&rhs));
    }
}
