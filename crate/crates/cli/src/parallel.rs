//! Parallel quadrature over the summation tree of the core integrator.
//! Results are bit-identical to the sequential evaluation.

use getzler_core::integrator::{split, Integrand, IntegralResult, PartialSum, QuadraturePlan};
use getzler_core::Result;

fn reduce<I: Integrand + ?Sized>(plan: &QuadraturePlan<'_, I>, lo: usize, hi: usize) -> Result<PartialSum> {
    match split(lo, hi) {
        None => plan.leaf(lo, hi),
        Some(mid) => {
            let (left, right) = rayon::join(|| reduce(plan, lo, mid), || reduce(plan, mid, hi));
            Ok(PartialSum::combine(left?, &right?))
        }
    }
}

pub fn integrate<I: Integrand + ?Sized>(plan: &QuadraturePlan<'_, I>) -> Result<IntegralResult> {
    plan.finish(reduce(plan, 0, plan.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use getzler_core::geometry::{omega_from_riemann, phi0_composite, RiemannTensor};
    use getzler_core::integrator::QuadratureSpec;

    #[test]
    fn matches_sequential_bit_for_bit() {
        let r = RiemannTensor::from_generators(4, &[(1, 2, 1, 2, 0.7)]).unwrap();
        let psi = phi0_composite(&omega_from_riemann(&r).unwrap()).unwrap();
        let ev = psi.evaluator().unwrap();
        for spec in [QuadratureSpec::gauss_hermite(4).with_support_radius(2.0), QuadratureSpec::monte_carlo(3000, 5).with_support_radius(2.0)] {
            let plan = QuadraturePlan::new(&ev, 0.1, spec).unwrap();
            let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
            let par = pool.install(|| integrate(&plan)).unwrap();
            assert_eq!(par, plan.integrate().unwrap());
        }
    }
}
