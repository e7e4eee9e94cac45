use crate::clifford::{SpinAlgebra, SpinElement};
use crate::error::{Error, Result};
use crate::exterior::{Multivector, Vector};
use crate::math;
use crate::matrix::RealMatrix;

use super::series::analytic_apply_real;
use super::Primitive;

/// `ℋ(τ(A)) = det^{1/2}(sinh X / X) · det^{−1/2}(tanh X / X) · ∧(tanh X / X)^{1/2}`
/// with `X = τ(A)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HOperator {
    scalar: f64,
    linear: RealMatrix,
}

impl HOperator {
    /// The scalar prefactor.
    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    /// The linear map `(tanh X / X)^{1/2}` on covectors (column `i` is the image of `e^i`).
    pub fn linear(&self) -> &RealMatrix {
        &self.linear
    }

    /// Applies the operator, extending the linear map functorially to all degrees.
    pub fn apply(&self, omega: &Multivector) -> Result<Multivector> {
        let n = omega.dimension();
        crate::exterior::same_dimension(self.linear.size(), n)?;
        let images: alloc::vec::Vec<Multivector> = (0..n)
            .map(|i| Multivector::from_vector(&Vector::new((0..n).map(|j| *self.linear.get(j, i)).collect())?))
            .collect::<Result<_>>()?;
        let mut out = Multivector::zero(n)?;
        for (mask, c) in omega.terms() {
            let mut acc = Multivector::scalar(n, c)?;
            for i in crate::exterior::blade_indices(mask) {
                acc = acc.wedge(&images[i - 1])?;
            }
            out += &acc;
        }
        Ok(out.scale(self.scalar))
    }
}

/// Builds `ℋ(τ(A))`. Fails once an eigenvalue of `τ(A)/2` reaches `π/2` in
/// modulus, where `tanh X / X` stops being positive definite.
pub fn h_operator(a: &SpinElement) -> Result<HOperator> {
    let algebra = SpinAlgebra::new(a.dimension())?;
    h_operator_with(&algebra, a)
}

pub fn h_operator_with(algebra: &SpinAlgebra, a: &SpinElement) -> Result<HOperator> {
    let x = algebra.tau(a)?.into_matrix().scale(0.5);
    let tanhc = analytic_apply_real(Primitive::TanhcX, &x)?;
    let sinhc = analytic_apply_real(Primitive::SinhcHalf, &x.scale(2.0))?;
    let det_tanhc = tanhc.real_det();
    let det_sinhc = sinhc.real_det();
    if !(det_tanhc > 0.0) || !(det_sinhc > 0.0) || !tanhc.is_positive_definite() {
        return Err(Error::NotPositive("tanh(X)/X"));
    }
    let linear = analytic_apply_real(Primitive::Sqrt, &tanhc)?;
    Ok(HOperator { scalar: math::sqrt(det_sinhc / det_tanhc), linear })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{exp_clifford, sigma};
    use alloc::vec;

    #[test]
    fn identity_at_zero() {
        let h = h_operator(&SpinElement::zero(4).unwrap()).unwrap();
        let w = Multivector::blade(4, &[1, 3, 4]).unwrap();
        assert!(h.apply(&w).unwrap().max_abs_diff(&w) < 1e-15);
    }

    #[test]
    fn circular_functions_in_dimension_two() {
        let theta = 0.3;
        let a = SpinElement::basis(2, 1, 2, theta).unwrap();
        let lhs = h_operator(&a).unwrap().apply(&a.to_form().exp_wedge()).unwrap();
        assert!((lhs.coeff(0).re - libm::cos(theta)).abs() < 1e-15);
        assert!((lhs.coeff(0b11).re - libm::sin(theta)).abs() < 1e-15);
    }

    #[test]
    fn matches_clifford_exponential() {
        let a = SpinElement::from_coeffs(4, vec![0.21, -0.13, 0.3, 0.08, -0.25, 0.17]).unwrap();
        let lhs = sigma(&exp_clifford(&a, 1e-17).unwrap());
        let rhs = h_operator(&a).unwrap().apply(&a.to_form().exp_wedge()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{}", lhs.max_abs_diff(&rhs));
    }

    #[test]
    fn rejects_large_arguments() {
        let a = SpinElement::basis(2, 1, 2, 1.7).unwrap();
        assert!(h_operator(&a).is_err());
    }
}
