//! Pointwise geometry of the spin frame bundle: curvature data, the pairing
//! `τ(A·Ω)`, the blocks of the exponential-map differential, `Φ₀`, and the
//! distance-squared quadratic form.
//!
//! # Curvature normalisation
//!
//! `Ω(e_k, e_l) = c_Ω Σ_{i<j} R_{klij} e^i e^j` with `c_Ω = −1/2`. Substituting
//! `a_{ij} = 2 e^i∧e^j` in `⟨τ(A·Ω)e_k, e_l⟩ = 2⟨A, Ω(e_k, e_l)⟩` gives
//! `τ(A·Ω)_{lk} = 4 c_Ω (R_x)_{kl} = −4 c_Ω (R_x)_{lk}`, so `τ(A·Ω) = 2 R_x`
//! and `τ(A·Ω)/4 = R_x/2`, which is what both Grassmann identities need.
//! The magnitude is forced by that; the sign matches `τ` applied to the
//! spin lift of the `so(n)` curvature `(Ω_so)_{ij} = R_{ijkl} e^k∧e^l`
//! (`τ(e^i e^j) = 2(E_{ji} − E_{ij})`).

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::clifford::{pairs, SpinAlgebra, SpinElement};
use crate::error::{Error, Result};
use crate::exterior::{check_dimension, same_dimension, Vector};
use crate::math;
use crate::matrix::{Mat, RealMatrix};
use crate::nilpotent::{
    analytic_apply, analytic_apply_real, det_sqrt, AnalyticComposite, EvenForm, FormMatrix, MatrixExpr, Primitive,
    ScalarExpr,
};

/// Curvature normalisation constant `c_Ω`.
pub const C_OMEGA: f64 = -0.5;

/// Tolerance for the algebraic symmetries of a curvature tensor.
pub const CURVATURE_TOLERANCE: f64 = 1e-10;

/// Tolerance for the two-route identity checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Algebraic curvature tensor `R_{ijkl}` in an orthonormal frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRiemann", into = "RawRiemann")]
pub struct RiemannTensor {
    dim: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawRiemann {
    dimension: usize,
    components: Vec<f64>,
}

impl TryFrom<RawRiemann> for RiemannTensor {
    type Error = Error;
    fn try_from(raw: RawRiemann) -> Result<Self> {
        Self::new(raw.dimension, raw.components)
    }
}

impl From<RiemannTensor> for RawRiemann {
    fn from(r: RiemannTensor) -> Self {
        RawRiemann { dimension: r.dim, components: r.data }
    }
}

/// The eight index permutations generated by the curvature symmetries, with signs.
pub fn symmetry_orbit(i: usize, j: usize, k: usize, l: usize) -> [((usize, usize, usize, usize), f64); 8] {
    [
        ((i, j, k, l), 1.0),
        ((j, i, k, l), -1.0),
        ((i, j, l, k), -1.0),
        ((j, i, l, k), 1.0),
        ((k, l, i, j), 1.0),
        ((l, k, i, j), -1.0),
        ((k, l, j, i), -1.0),
        ((l, k, j, i), 1.0),
    ]
}

impl RiemannTensor {
    /// Dense components in row-major `(i, j, k, l)` order, validated.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        check_dimension(n)?;
        same_dimension(n * n * n * n, data.len())?;
        let r = Self { dim: n, data };
        r.validate()?;
        Ok(r)
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { dim: n, data: vec![0.0; n * n * n * n] })
    }

    /// `R_{ijkl} = f(i, j, k, l)` with 1-based indices.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Result<Self> {
        check_dimension(n)?;
        let mut data = Vec::with_capacity(n * n * n * n);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self::new(n, data)
    }

    /// Constant sectional curvature `κ`: `R_{ijkl} = κ(δ_{ik}δ_{jl} − δ_{il}δ_{jk})`.
    pub fn constant_curvature(n: usize, kappa: f64) -> Result<Self> {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::from_fn(n, |i, j, k, l| kappa * (d(i, k) * d(j, l) - d(i, l) * d(j, k)))
    }

    /// Completes the symmetry orbits of the listed components (1-based).
    ///
    /// Fails when two listed components of one orbit disagree, when an orbit
    /// forces a listed value to vanish, or when the result violates the
    /// first Bianchi identity.
    pub fn from_generators(n: usize, components: &[(usize, usize, usize, usize, f64)]) -> Result<Self> {
        check_dimension(n)?;
        let mut data = vec![0.0; n * n * n * n];
        let mut set = vec![false; data.len()];
        for &(i, j, k, l, value) in components {
            for idx in [i, j, k, l] {
                if idx == 0 || idx > n {
                    return Err(Error::IndexOutOfRange { index: idx, dimension: n });
                }
            }
            if (i == j || k == l) && value != 0.0 {
                return Err(Error::CurvatureSymmetry { symmetry: "antisymmetry", max_violation: math::abs(value) });
            }
            for ((a, b, c, d), sign) in symmetry_orbit(i, j, k, l) {
                let p = flat(n, a, b, c, d);
                let v = sign * value;
                if set[p] && math::abs(data[p] - v) > CURVATURE_TOLERANCE {
                    return Err(Error::CurvatureSymmetry {
                        symmetry: "consistency of listed components",
                        max_violation: math::abs(data[p] - v),
                    });
                }
                data[p] = v;
                set[p] = true;
            }
        }
        Self::new(n, data)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// `R_{ijkl}` with 1-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[flat(self.dim, i, j, k, l)]
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| c * x).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| math::abs(*x)).fold(0.0, f64::max)
    }

    /// Largest violation of each algebraic symmetry:
    /// `(antisymmetry, pair symmetry, first Bianchi)`.
    pub fn symmetry_defects(&self) -> (f64, f64, f64) {
        let n = self.dim;
        let (mut anti, mut pair, mut bianchi): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let r = self.get(i, j, k, l);
                        anti = anti.max(math::abs(r + self.get(j, i, k, l))).max(math::abs(r + self.get(i, j, l, k)));
                        pair = pair.max(math::abs(r - self.get(k, l, i, j)));
                        bianchi = bianchi.max(math::abs(r + self.get(i, k, l, j) + self.get(i, l, j, k)));
                    }
                }
            }
        }
        (anti, pair, bianchi)
    }

    fn validate(&self) -> Result<()> {
        let (anti, pair, bianchi) = self.symmetry_defects();
        let tol = CURVATURE_TOLERANCE * self.max_abs().max(1.0);
        for (name, v) in [("antisymmetry", anti), ("pair symmetry", pair), ("first Bianchi identity", bianchi)] {
            if !(v <= tol) {
                return Err(Error::CurvatureSymmetry { symmetry: name, max_violation: v });
            }
        }
        Ok(())
    }
}

fn flat(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    (((i - 1) * n + (j - 1)) * n + (k - 1)) * n + (l - 1)
}

/// Horizontal curvature `Ω(e_k, e_l) ∈ spin(n)` for `k < l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureMap {
    dimension: usize,
    /// `Ω(e_k, e_l)` in lexicographic `(k, l)` order.
    components: Vec<SpinElement>,
}

impl CurvatureMap {
    pub fn zero(n: usize) -> Result<Self> {
        let z = SpinElement::zero(n)?;
        Ok(Self { dimension: n, components: vec![z; n * (n - 1) / 2] })
    }

    pub fn from_components(n: usize, components: Vec<SpinElement>) -> Result<Self> {
        check_dimension(n)?;
        same_dimension(n * (n - 1) / 2, components.len())?;
        for c in &components {
            same_dimension(n, c.dimension())?;
        }
        Ok(Self { dimension: n, components })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `Ω(e_k, e_l)`, antisymmetric in `(k, l)`.
    pub fn get(&self, k: usize, l: usize) -> Result<SpinElement> {
        let n = self.dimension;
        for x in [k, l] {
            if x == 0 || x > n {
                return Err(Error::IndexOutOfRange { index: x, dimension: n });
            }
        }
        Ok(match k.cmp(&l) {
            core::cmp::Ordering::Less => self.components[crate::clifford::pair_index(n, k, l)].clone(),
            core::cmp::Ordering::Greater => self.components[crate::clifford::pair_index(n, l, k)].scale(-1.0),
            core::cmp::Ordering::Equal => SpinElement::zero(n)?,
        })
    }

    /// `Ω(v, w)` for arbitrary vectors.
    pub fn eval(&self, v: &Vector, w: &Vector) -> Result<SpinElement> {
        let n = self.dimension;
        same_dimension(n, v.dimension())?;
        same_dimension(n, w.dimension())?;
        let mut acc = vec![0.0; n * (n - 1) / 2];
        for (p, (k, l)) in pairs(n).into_iter().enumerate() {
            let weight = v.as_slice()[k - 1] * w.as_slice()[l - 1] - v.as_slice()[l - 1] * w.as_slice()[k - 1];
            if weight != 0.0 {
                for (a, c) in acc.iter_mut().zip(self.components[p].coeffs()) {
                    *a += weight * c;
                }
            }
        }
        SpinElement::from_coeffs(n, acc)
    }

    /// Matrices `T_p` with `τ(A·Ω) = Σ_p a_p T_p`, `(T_p)_{lk} = 2 Ω(e_k, e_l)_p`.
    pub fn pairing_basis(&self) -> Vec<RealMatrix> {
        let n = self.dimension;
        let d = n * (n - 1) / 2;
        let mut basis = vec![RealMatrix::zeros(n); d];
        for (q, (k, l)) in pairs(n).into_iter().enumerate() {
            for (p, &c) in self.components[q].coeffs().iter().enumerate() {
                *basis[p].get_mut(l - 1, k - 1) = 2.0 * c;
                *basis[p].get_mut(k - 1, l - 1) = -2.0 * c;
            }
        }
        basis
    }
}

/// `Ω(e_k, e_l) = c_Ω Σ_{i<j} R_{klij} e^i e^j`.
pub fn omega_from_riemann(r: &RiemannTensor) -> Result<CurvatureMap> {
    r.validate()?;
    let n = r.dimension();
    let ps = pairs(n);
    let components = ps
        .iter()
        .map(|&(k, l)| SpinElement::from_coeffs(n, ps.iter().map(|&(i, j)| C_OMEGA * r.get(k, l, i, j)).collect()))
        .collect::<Result<_>>()?;
    CurvatureMap::from_components(n, components)
}

/// `τ(A·Ω)`, defined by `⟨τ(A·Ω)v, w⟩ = 2⟨A, Ω(v, w)⟩`.
pub fn tau_a_omega(a: &SpinElement, omega: &CurvatureMap) -> Result<RealMatrix> {
    same_dimension(omega.dimension(), a.dimension())?;
    Ok(crate::clifford::linear_combination(&omega.pairing_basis(), a.coeffs(), omega.dimension()))
}

/// Diagonal blocks of the differential of `(A, v) ↦ exp_p(v) · exp(A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpDifferential {
    /// `(I − e^{−ad_A}) / ad_A` on `spin(n)`.
    pub vertical: RealMatrix,
    /// `(I − e^{−τ(A·Ω)/2}) / (τ(A·Ω)/2)` on the horizontal space.
    pub horizontal: RealMatrix,
}

impl ExpDifferential {
    pub fn det(&self) -> f64 {
        self.vertical.real_det() * self.horizontal.real_det()
    }
}

pub fn exp_differential(a: &SpinElement, omega: &CurvatureMap) -> Result<ExpDifferential> {
    let algebra = SpinAlgebra::new(a.dimension())?;
    let vertical = analytic_apply_real(Primitive::ExpDiff, &algebra.ad(a)?)?;
    let horizontal = analytic_apply_real(Primitive::ExpDiff, &tau_a_omega(a, omega)?.scale(0.5))?;
    Ok(ExpDifferential { vertical, horizontal })
}

/// Composite for `Φ₀(A) = det^{−1/2}(sinh(ad_A/2)/(ad_A/2)) · det^{−1/2}(sinh(τ(A·Ω)/4)/(τ(A·Ω)/4))`.
pub fn phi0_composite(omega: &CurvatureMap) -> Result<AnalyticComposite> {
    let expr = MatrixExpr::AdSpin.apply(Primitive::SinhcHalf).det_pow(-0.5)
        * MatrixExpr::TauCurvature.scale(0.5).apply(Primitive::SinhcHalf).det_pow(-0.5);
    AnalyticComposite::new(omega.dimension(), ScalarExpr::Const(1.0))?.with_curvature(omega.clone())?.replace(expr)
}

/// Composite for `⟨v, ((I − e^{−τ(A·Ω)/2})/(τ(A·Ω)/2))^{−1} v⟩`.
pub fn jacobian_form_composite(v: &Vector, omega: &CurvatureMap) -> Result<AnalyticComposite> {
    let expr = MatrixExpr::TauCurvature.scale(0.5).apply(Primitive::ExpDiff).inverse().quadratic();
    with_data(v, omega, expr)
}

/// Composite for `⟨v, (τ(A·Ω)/4) coth(τ(A·Ω)/4) v⟩`.
pub fn coth_form_composite(v: &Vector, omega: &CurvatureMap) -> Result<AnalyticComposite> {
    let expr = MatrixExpr::TauCurvature.scale(0.25).apply(Primitive::XCothX).quadratic();
    with_data(v, omega, expr)
}

/// Composite for the Haar Jacobian `J(A) = det((1 − e^{−ad_A})/ad_A)` of
/// exponential coordinates.
pub fn haar_jacobian_composite(n: usize) -> Result<AnalyticComposite> {
    AnalyticComposite::new(n, MatrixExpr::AdSpin.apply(Primitive::ExpDiff).det())
}

fn with_data(v: &Vector, omega: &CurvatureMap, expr: ScalarExpr) -> Result<AnalyticComposite> {
    AnalyticComposite::new(omega.dimension(), ScalarExpr::Const(1.0))?
        .with_vector(v.clone())?
        .with_curvature(omega.clone())?
        .replace(expr)
}

impl AnalyticComposite {
    /// Same data, new expression.
    pub fn replace(mut self, expr: ScalarExpr) -> Result<Self> {
        self.expr = expr;
        self.validate()?;
        Ok(self)
    }
}

/// `Φ₀(A)` at a real point.
pub fn phi0(a: &SpinElement, omega: &CurvatureMap) -> Result<f64> {
    phi0_composite(omega)?.evaluate(a)
}

/// Both evaluations of the distance-squared coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceForm {
    /// `⟨v, ((I − e^{−X})/X)^{−1} v⟩` with `X = τ(A·Ω)/2`.
    pub inverse_form: f64,
    /// `⟨v, (X/2) coth(X/2) v⟩`.
    pub coth_form: f64,
}

impl DistanceForm {
    pub fn discrepancy(&self) -> f64 {
        math::abs(self.inverse_form - self.coth_form)
    }
}

pub fn distance_quadratic_form(v: &Vector, a: &SpinElement, omega: &CurvatureMap) -> Result<DistanceForm> {
    same_dimension(omega.dimension(), v.dimension())?;
    let x = tau_a_omega(a, omega)?;
    let jac = analytic_apply_real(Primitive::ExpDiff, &x.scale(0.5))?;
    let inverse_form = jac.real_inverse()?.quadratic(v.as_slice())?;
    let coth_form = analytic_apply_real(Primitive::XCothX, &x.scale(0.25))?.quadratic(v.as_slice())?;
    Ok(DistanceForm { inverse_form, coth_form })
}

/// `(R_x)_{kl} = Σ_{i<j} R_{ijkl} e^i∧e^j`.
pub fn riemann_form_matrix(r: &RiemannTensor) -> Result<FormMatrix> {
    let n = r.dimension();
    let ps = pairs(n);
    let mut entries = Vec::with_capacity(n * n);
    for k in 1..=n {
        for l in 1..=n {
            let mut f = EvenForm::zero(n)?;
            for &(i, j) in &ps {
                let c = r.get(i, j, k, l);
                if c != 0.0 {
                    f.set_coeff((1 << (i - 1)) | (1 << (j - 1)), c);
                }
            }
            entries.push(f);
        }
    }
    Mat::from_rows(n, entries)
}

/// `det^{1/2}((M/2)/sinh(M/2))` over the even-form ring.
pub(crate) fn ahat_of(rx: &FormMatrix) -> Result<EvenForm> {
    det_sqrt(&analytic_apply(Primitive::XOverSinhX, &rx.scale(0.5))?)
}

/// Left and right sides of a two-route identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySides {
    pub lhs: EvenForm,
    pub rhs: EvenForm,
}

impl IdentitySides {
    pub fn error(&self) -> f64 {
        self.lhs.max_abs_diff(&self.rhs)
    }

    fn checked(self, identity: &'static str) -> Result<EvenForm> {
        let error = self.error();
        if !(error <= IDENTITY_TOLERANCE) {
            return Err(Error::IdentityMismatch { identity, max_error: error, tolerance: IDENTITY_TOLERANCE });
        }
        Ok(self.lhs)
    }
}

/// `Φ₀(2e∧e*)` and `det^{1/2}((R_x/2)/sinh(R_x/2))`.
pub fn theorem1_sides(r: &RiemannTensor) -> Result<IdentitySides> {
    let n = r.dimension();
    let omega = omega_from_riemann(r)?;
    let lhs = phi0_composite(&omega)?.evaluator()?.grassmann_eval(&SpinElement::zero(n)?, 2.0)?;
    let rhs = ahat_of(&riemann_form_matrix(r)?)?;
    Ok(IdentitySides { lhs, rhs })
}

/// `⟨v, ((I − e^{−X})/X)^{−1} v⟩` at `A = 2e∧e*` and `⟨v, (R_x/2) coth(R_x/2) v⟩`.
pub fn theorem2_sides(v: &Vector, r: &RiemannTensor) -> Result<IdentitySides> {
    let n = r.dimension();
    let omega = omega_from_riemann(r)?;
    let lhs = jacobian_form_composite(v, &omega)?.evaluator()?.grassmann_eval(&SpinElement::zero(n)?, 2.0)?;
    let rhs = analytic_apply(Primitive::XCothX, &riemann_form_matrix(r)?.scale(0.5))?.quadratic(v.as_slice())?;
    Ok(IdentitySides { lhs, rhs })
}

/// Grassmann evaluation of `Φ₀` at `2e∧e*`, checked against the Â-form.
pub fn theorem1_eval(r: &RiemannTensor) -> Result<EvenForm> {
    theorem1_sides(r)?.checked("Φ₀(2e∧e*) = det^{1/2}((R_x/2)/sinh(R_x/2))")
}

/// Grassmann evaluation of the inverse-Jacobian quadratic form at `2e∧e*`,
/// checked against the coth form in `R_x`.
pub fn theorem2_eval(v: &Vector, r: &RiemannTensor) -> Result<EvenForm> {
    theorem2_sides(v, r)?.checked("Ψ(2e∧e*) = ⟨v, (R_x/2) coth(R_x/2) v⟩")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Coeff;

    fn single_plane(r: f64) -> RiemannTensor {
        RiemannTensor::from_generators(4, &[(1, 2, 1, 2, r)]).unwrap()
    }

    fn sample_tensor() -> RiemannTensor {
        RiemannTensor::from_generators(
            4,
            &[(1, 2, 1, 2, 0.7), (3, 4, 3, 4, -0.4), (1, 2, 3, 4, 0.3), (1, 3, 2, 4, 0.15), (1, 4, 2, 3, -0.15)],
        )
        .unwrap()
    }

    #[test]
    fn ingestion() {
        let r = single_plane(0.5);
        assert_eq!(r.get(2, 1, 2, 1), 0.5);
        assert_eq!(r.get(2, 1, 1, 2), -0.5);
        assert!(RiemannTensor::from_generators(4, &[(1, 2, 1, 2, 1.0), (2, 1, 2, 1, 2.0)]).is_err());
        // R_1234 alone violates the first Bianchi identity.
        assert!(matches!(
            RiemannTensor::from_generators(4, &[(1, 2, 3, 4, 1.0)]),
            Err(Error::CurvatureSymmetry { symmetry: "first Bianchi identity", .. })
        ));
        assert!(RiemannTensor::from_generators(4, &[(1, 1, 2, 3, 1.0)]).is_err());
        let sphere = RiemannTensor::constant_curvature(4, 1.0).unwrap();
        assert_eq!(sphere.get(1, 2, 1, 2), 1.0);
    }

    #[test]
    fn omega_examples() {
        let omega = omega_from_riemann(&RiemannTensor::zero(4).unwrap()).unwrap();
        assert!(omega.pairing_basis().iter().all(|m| m.max_abs() == 0.0));
        let omega = omega_from_riemann(&single_plane(0.8)).unwrap();
        let o12 = omega.get(1, 2).unwrap();
        assert_eq!(o12, SpinElement::basis(4, 1, 2, C_OMEGA * 0.8).unwrap());
        for (k, l) in pairs(4).into_iter().skip(1) {
            assert!(omega.get(k, l).unwrap().norm() == 0.0);
        }
        let kappa = 0.3;
        let sphere = omega_from_riemann(&RiemannTensor::constant_curvature(4, kappa).unwrap()).unwrap();
        for (k, l) in pairs(4) {
            assert_eq!(sphere.get(k, l).unwrap(), SpinElement::basis(4, k, l, C_OMEGA * kappa).unwrap());
        }
    }

    #[test]
    fn pairing_definition() {
        let r = sample_tensor();
        let omega = omega_from_riemann(&r).unwrap();
        let a = SpinElement::from_coeffs(4, alloc::vec![0.3, -0.1, 0.2, 0.5, -0.7, 0.05]).unwrap();
        let m = tau_a_omega(&a, &omega).unwrap();
        for k in 1..=4 {
            for l in 1..=4 {
                let ek = Vector::basis(4, k).unwrap();
                let el = Vector::basis(4, l).unwrap();
                let expected = 2.0 * crate::clifford::spin_inner(&a, &omega.eval(&ek, &el).unwrap()).unwrap();
                assert!((m.get(l - 1, k - 1) - expected).abs() < 1e-15);
            }
        }
        assert!(m.max_antisymmetry_violation() < 1e-15);
        let block = tau_a_omega(&SpinElement::basis(4, 1, 2, 1.0).unwrap(), &omega_from_riemann(&single_plane(0.8)).unwrap())
            .unwrap();
        assert!((block.get(1, 0) - 2.0 * C_OMEGA * 0.8).abs() < 1e-15);
        assert_eq!(block.get(2, 3), &0.0);
    }

    #[test]
    fn flat_and_zero_cases() {
        let omega = omega_from_riemann(&sample_tensor()).unwrap();
        let zero = SpinElement::zero(4).unwrap();
        assert_eq!(phi0(&zero, &omega).unwrap(), 1.0);
        let d = exp_differential(&zero, &omega).unwrap();
        assert_eq!(d.det(), 1.0);
        let v = Vector::new(alloc::vec![1.0, -2.0, 0.5, 0.0]).unwrap();
        let q = distance_quadratic_form(&v, &zero, &omega).unwrap();
        assert_eq!(q.inverse_form, v.norm_sq());
        assert_eq!(q.coth_form, v.norm_sq());
    }

    #[test]
    fn spin2_is_abelian() {
        let omega = omega_from_riemann(&RiemannTensor::constant_curvature(2, 0.9).unwrap()).unwrap();
        let a = SpinElement::basis(2, 1, 2, 0.7).unwrap();
        let d = exp_differential(&a, &omega).unwrap();
        assert_eq!(d.vertical, RealMatrix::identity(1));
        // τ(A·Ω) is a rotation generator with angle θ; Φ₀ = (θ/4)/sin(θ/4).
        let theta = tau_a_omega(&a, &omega).unwrap().get(1, 0).abs();
        let expected = (theta / 4.0) / (theta / 4.0).sin();
        assert!((phi0(&a, &omega).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn distance_forms_agree() {
        let omega = omega_from_riemann(&sample_tensor()).unwrap();
        let a = SpinElement::from_coeffs(4, alloc::vec![0.3, -0.1, 0.2, 0.5, -0.7, 0.05]).unwrap();
        let v = Vector::new(alloc::vec![0.4, 1.0, -0.3, 0.8]).unwrap();
        assert!(distance_quadratic_form(&v, &a, &omega).unwrap().discrepancy() < 1e-12);
    }

    #[test]
    fn riemann_form_matrix_examples() {
        let rx = riemann_form_matrix(&single_plane(0.5)).unwrap();
        assert_eq!(rx.get(0, 1), &EvenForm::two_form(4, 1, 2, 0.5).unwrap());
        assert_eq!(rx.get(1, 0), &EvenForm::two_form(4, 1, 2, -0.5).unwrap());
        assert!(rx.get(2, 3).is_zero());
    }

    #[test]
    fn theorems_on_fixed_tensors() {
        let flat = RiemannTensor::zero(4).unwrap();
        assert_eq!(theorem1_eval(&flat).unwrap(), EvenForm::constant(4, 1.0).unwrap());
        let v = Vector::new(alloc::vec![1.0, 2.0, 0.0, -1.0]).unwrap();
        assert_eq!(theorem2_eval(&v, &flat).unwrap(), EvenForm::constant(4, 6.0).unwrap());
        let t1 = theorem1_eval(&single_plane(0.9)).unwrap();
        assert_eq!(t1.degree_part(4).berezin(), 0.0);
        for r in [single_plane(0.9), sample_tensor()] {
            assert!(theorem1_sides(&r).unwrap().error() < 1e-12);
            assert!(theorem2_sides(&v, &r).unwrap().error() < 1e-12);
        }
    }
}
