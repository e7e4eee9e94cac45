//! Expression trees over `spin(n)` coordinates and their evaluation over any
//! coefficient ring: pointwise over `f64`, or at a nilpotent argument
//! `A + s·e∧e*` over [`EvenForm`].

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::ops;

use serde::{Deserialize, Serialize};

use crate::clifford::{linear_combination, pair_index, SpinAlgebra, SpinElement};
use crate::error::{Error, Result};
use crate::exterior::{check_dimension, same_dimension, Vector};
use crate::geometry::CurvatureMap;
use crate::matrix::{Coeff, Mat, RealMatrix};

use super::series::{analytic_apply, analytic_scalar};
use super::{EvenForm, Primitive};

/// Scalar-valued node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarExpr {
    Const(f64),
    /// `a_{ij}`, with `a_{ji} = −a_{ij}`.
    Coord(usize, usize),
    /// `v_k` of the attached vector.
    VectorComponent(usize),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Neg(Box<ScalarExpr>),
    Scale(f64, Box<ScalarExpr>),
    Apply(Primitive, Box<ScalarExpr>),
    Det(Box<MatrixExpr>),
    /// `det(M)^p` on the principal branch.
    DetPow(Box<MatrixExpr>, f64),
    Trace(Box<MatrixExpr>),
    /// `⟨v, M v⟩` with the attached vector.
    Quadratic(Box<MatrixExpr>),
}

/// Matrix-valued node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixExpr {
    /// `τ(A·Ω)` for the attached curvature, `n × n`.
    TauCurvature,
    /// `τ(A)`, `n × n`.
    TauSpin,
    /// `ad_A` on `spin(n)`, `n(n−1)/2` square.
    AdSpin,
    Identity(usize),
    Scale(f64, Box<MatrixExpr>),
    Add(Box<MatrixExpr>, Box<MatrixExpr>),
    Sub(Box<MatrixExpr>, Box<MatrixExpr>),
    Mul(Box<MatrixExpr>, Box<MatrixExpr>),
    Apply(Primitive, Box<MatrixExpr>),
    Inverse(Box<MatrixExpr>),
}

impl ScalarExpr {
    pub fn coord(i: usize, j: usize) -> Self {
        ScalarExpr::Coord(i, j)
    }

    pub fn apply(self, f: Primitive) -> Self {
        ScalarExpr::Apply(f, Box::new(self))
    }

    pub fn scale(self, c: f64) -> Self {
        ScalarExpr::Scale(c, Box::new(self))
    }
}

impl MatrixExpr {
    pub fn scale(self, c: f64) -> Self {
        MatrixExpr::Scale(c, Box::new(self))
    }

    pub fn apply(self, f: Primitive) -> Self {
        MatrixExpr::Apply(f, Box::new(self))
    }

    pub fn inverse(self) -> Self {
        MatrixExpr::Inverse(Box::new(self))
    }

    pub fn det(self) -> ScalarExpr {
        ScalarExpr::Det(Box::new(self))
    }

    pub fn det_pow(self, p: f64) -> ScalarExpr {
        ScalarExpr::DetPow(Box::new(self), p)
    }

    pub fn trace(self) -> ScalarExpr {
        ScalarExpr::Trace(Box::new(self))
    }

    pub fn quadratic(self) -> ScalarExpr {
        ScalarExpr::Quadratic(Box::new(self))
    }
}

macro_rules! binary {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ScalarExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}
binary!(Add, add, Add);
binary!(Sub, sub, Sub);
binary!(Mul, mul, Mul);

impl ops::Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::Neg(Box::new(self))
    }
}

/// A function on `spin(n)` built from ring operations, curvature and adjoint
/// matrices, and analytic primitives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticComposite {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureMap>,
    pub expr: ScalarExpr,
}

impl AnalyticComposite {
    pub fn new(dimension: usize, expr: ScalarExpr) -> Result<Self> {
        let c = Self { dimension, vector: None, curvature: None, expr };
        c.validate()?;
        Ok(c)
    }

    pub fn with_vector(mut self, v: Vector) -> Result<Self> {
        same_dimension(self.dimension, v.dimension())?;
        self.vector = Some(v);
        Ok(self)
    }

    pub fn with_curvature(mut self, omega: CurvatureMap) -> Result<Self> {
        same_dimension(self.dimension, omega.dimension())?;
        self.curvature = Some(omega);
        Ok(self)
    }

    /// Structural checks: indices in range, and every leaf has its data.
    pub fn validate(&self) -> Result<()> {
        check_dimension(self.dimension)?;
        self.validate_scalar(&self.expr)
    }

    fn validate_scalar(&self, e: &ScalarExpr) -> Result<()> {
        let n = self.dimension;
        match e {
            ScalarExpr::Const(_) => Ok(()),
            ScalarExpr::Coord(i, j) => {
                for k in [*i, *j] {
                    if k == 0 || k > n {
                        return Err(Error::IndexOutOfRange { index: k, dimension: n });
                    }
                }
                if i == j {
                    return Err(Error::InvalidParameter("diagonal spin(n) coordinate"));
                }
                Ok(())
            }
            ScalarExpr::VectorComponent(k) => {
                if *k == 0 || *k > n {
                    return Err(Error::IndexOutOfRange { index: *k, dimension: n });
                }
                self.require_vector()
            }
            ScalarExpr::Add(a, b) | ScalarExpr::Sub(a, b) | ScalarExpr::Mul(a, b) => {
                self.validate_scalar(a)?;
                self.validate_scalar(b)
            }
            ScalarExpr::Neg(a) | ScalarExpr::Scale(_, a) | ScalarExpr::Apply(_, a) => self.validate_scalar(a),
            ScalarExpr::Det(m) | ScalarExpr::DetPow(m, _) | ScalarExpr::Trace(m) => self.validate_matrix(m),
            ScalarExpr::Quadratic(m) => {
                self.require_vector()?;
                self.validate_matrix(m)
            }
        }
    }

    fn validate_matrix(&self, e: &MatrixExpr) -> Result<()> {
        match e {
            MatrixExpr::TauCurvature => {
                if self.curvature.is_none() {
                    return Err(Error::InvalidParameter("composite uses τ(A·Ω) without curvature data"));
                }
                Ok(())
            }
            MatrixExpr::TauSpin | MatrixExpr::AdSpin | MatrixExpr::Identity(_) => Ok(()),
            MatrixExpr::Scale(_, a) | MatrixExpr::Apply(_, a) | MatrixExpr::Inverse(a) => self.validate_matrix(a),
            MatrixExpr::Add(a, b) | MatrixExpr::Sub(a, b) | MatrixExpr::Mul(a, b) => {
                self.validate_matrix(a)?;
                self.validate_matrix(b)
            }
        }
    }

    fn require_vector(&self) -> Result<()> {
        if self.vector.is_none() {
            return Err(Error::InvalidParameter("composite uses v without a vector"));
        }
        Ok(())
    }

    /// Precomputes the structure constants needed for repeated evaluation.
    pub fn evaluator(&self) -> Result<Evaluator<'_>> {
        self.validate()?;
        let algebra = SpinAlgebra::new(self.dimension)?;
        let curvature_basis = match &self.curvature {
            Some(omega) => omega.pairing_basis(),
            None => Vec::new(),
        };
        Ok(Evaluator { composite: self, algebra, curvature_basis })
    }

    /// `Ψ(A)` at a real point.
    pub fn evaluate(&self, a: &SpinElement) -> Result<f64> {
        self.evaluator()?.eval_at(a)
    }
}

/// Ring elements that analytic primitives can act on.
pub trait Evaluable: Coeff {
    fn apply_primitive(&self, f: Primitive) -> Result<Self>;
}

impl Evaluable for f64 {
    fn apply_primitive(&self, f: Primitive) -> Result<Self> {
        f.eval(*self)
    }
}

impl Evaluable for EvenForm {
    fn apply_primitive(&self, f: Primitive) -> Result<Self> {
        analytic_scalar(f, self)
    }
}

/// A composite together with the `spin(n)` structure constants and the
/// curvature pairing basis.
#[derive(Clone, Debug)]
pub struct Evaluator<'a> {
    composite: &'a AnalyticComposite,
    algebra: SpinAlgebra,
    curvature_basis: Vec<RealMatrix>,
}

impl Evaluator<'_> {
    pub fn composite(&self) -> &AnalyticComposite {
        self.composite
    }

    pub fn algebra(&self) -> &SpinAlgebra {
        &self.algebra
    }

    pub fn eval_at(&self, a: &SpinElement) -> Result<f64> {
        same_dimension(self.composite.dimension, a.dimension())?;
        self.eval(a.coeffs())
    }

    /// Evaluation with coordinates (in lexicographic pair order) from any ring.
    pub fn eval<T: Evaluable>(&self, coords: &[T]) -> Result<T> {
        let n = self.composite.dimension;
        same_dimension(n * (n - 1) / 2, coords.len())?;
        self.scalar(&self.composite.expr, coords)
    }

    fn scalar<T: Evaluable>(&self, e: &ScalarExpr, x: &[T]) -> Result<T> {
        let proto = &x[0];
        Ok(match e {
            ScalarExpr::Const(c) => proto.constant_like(*c),
            ScalarExpr::Coord(i, j) => {
                let n = self.composite.dimension;
                if i < j {
                    x[pair_index(n, *i, *j)].clone()
                } else {
                    x[pair_index(n, *j, *i)].scale(-1.0)
                }
            }
            ScalarExpr::VectorComponent(k) => proto.constant_like(self.vector()?[k - 1]),
            ScalarExpr::Add(a, b) => self.scalar(a, x)?.add(&self.scalar(b, x)?),
            ScalarExpr::Sub(a, b) => self.scalar(a, x)?.sub(&self.scalar(b, x)?),
            ScalarExpr::Mul(a, b) => self.scalar(a, x)?.mul(&self.scalar(b, x)?),
            ScalarExpr::Neg(a) => self.scalar(a, x)?.scale(-1.0),
            ScalarExpr::Scale(c, a) => self.scalar(a, x)?.scale(*c),
            ScalarExpr::Apply(f, a) => self.scalar(a, x)?.apply_primitive(*f)?,
            ScalarExpr::Det(m) => self.matrix(m, x)?.det_power(1.0)?,
            ScalarExpr::DetPow(m, p) => self.matrix(m, x)?.det_power(*p)?,
            ScalarExpr::Trace(m) => self.matrix(m, x)?.trace(),
            ScalarExpr::Quadratic(m) => self.matrix(m, x)?.quadratic(self.vector()?)?,
        })
    }

    fn matrix<T: Evaluable>(&self, e: &MatrixExpr, x: &[T]) -> Result<Mat<T>> {
        let proto = &x[0];
        Ok(match e {
            MatrixExpr::TauCurvature => linear_combination(&self.curvature_basis, x, self.composite.dimension),
            MatrixExpr::TauSpin => self.algebra.tau_generic(x),
            MatrixExpr::AdSpin => self.algebra.ad_generic(x),
            MatrixExpr::Identity(size) => Mat::scalar_like(proto, *size, 1.0),
            MatrixExpr::Scale(c, a) => self.matrix(a, x)?.scale(*c),
            MatrixExpr::Add(a, b) => self.matrix(a, x)?.add(&self.matrix(b, x)?)?,
            MatrixExpr::Sub(a, b) => self.matrix(a, x)?.sub(&self.matrix(b, x)?)?,
            MatrixExpr::Mul(a, b) => self.matrix(a, x)?.mul(&self.matrix(b, x)?)?,
            MatrixExpr::Apply(f, a) => analytic_apply(*f, &self.matrix(a, x)?)?,
            MatrixExpr::Inverse(a) => self.matrix(a, x)?.inverse()?,
        })
    }

    fn vector(&self) -> Result<&[f64]> {
        self.composite
            .vector
            .as_ref()
            .map(Vector::as_slice)
            .ok_or(Error::InvalidParameter("composite uses v without a vector"))
    }

    /// `Ψ(base + scale·e∧e*)`, coordinate `a_{ij}` becoming `base_{ij} + scale·e^i∧e^j`.
    pub fn grassmann_eval(&self, base: &SpinElement, scale: f64) -> Result<EvenForm> {
        let n = self.composite.dimension;
        same_dimension(n, base.dimension())?;
        let coords = nilpotent_coordinates(base, scale)?;
        self.eval(&coords)
    }
}

/// Coordinates `base_{ij} + scale·e^i∧e^j` in lexicographic pair order.
pub fn nilpotent_coordinates(base: &SpinElement, scale: f64) -> Result<Vec<EvenForm>> {
    let n = base.dimension();
    crate::clifford::pairs(n)
        .into_iter()
        .zip(base.coeffs())
        .map(|((i, j), b)| {
            let mut f = EvenForm::two_form(n, i, j, scale)?;
            f.set_coeff(0, *b);
            Ok(f)
        })
        .collect()
}

/// Grassmann evaluation `Ψ(base + scale·e∧e*)`.
pub fn grassmann_eval(psi: &AnalyticComposite, base: &SpinElement, scale: f64) -> Result<EvenForm> {
    psi.evaluator()?.grassmann_eval(base, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn coord(i: usize, j: usize) -> ScalarExpr {
        ScalarExpr::coord(i, j)
    }

    #[test]
    fn examples() {
        let zero2 = SpinElement::zero(2).unwrap();
        let psi = AnalyticComposite::new(2, coord(1, 2)).unwrap();
        assert_eq!(grassmann_eval(&psi, &zero2, 2.0).unwrap(), EvenForm::two_form(2, 1, 2, 2.0).unwrap());

        let zero4 = SpinElement::zero(4).unwrap();
        let sq = AnalyticComposite::new(4, coord(1, 2) * coord(1, 2)).unwrap();
        assert_eq!(grassmann_eval(&sq, &zero4, 2.0).unwrap(), EvenForm::zero(4).unwrap());

        let prod = AnalyticComposite::new(4, coord(1, 2) * coord(3, 4)).unwrap();
        let mut top = EvenForm::zero(4).unwrap();
        top.set_coeff(0b1111, 4.0);
        assert_eq!(grassmann_eval(&prod, &zero4, 2.0).unwrap(), top);
    }

    #[test]
    fn validation() {
        assert!(AnalyticComposite::new(4, coord(1, 5)).is_err());
        assert!(AnalyticComposite::new(4, coord(2, 2)).is_err());
        assert!(AnalyticComposite::new(4, ScalarExpr::VectorComponent(1)).is_err());
        assert!(AnalyticComposite::new(4, MatrixExpr::TauCurvature.det()).is_err());
    }

    #[test]
    fn pointwise_matches_body_of_grassmann() {
        let n = 4;
        let psi = AnalyticComposite::new(
            n,
            MatrixExpr::AdSpin.scale(0.5).apply(Primitive::SinhcHalf).det_pow(-0.5)
                * (coord(1, 2) - coord(3, 4).scale(0.5)).apply(Primitive::Exp),
        )
        .unwrap();
        let a = SpinElement::from_coeffs(n, vec![0.2, -0.1, 0.3, 0.05, 0.4, -0.25]).unwrap();
        let ev = psi.evaluator().unwrap();
        let point = ev.eval_at(&a).unwrap();
        let g = ev.grassmann_eval(&a, 2.0).unwrap();
        assert!((g.coeff(0) - point).abs() < 1e-13);
    }
}
