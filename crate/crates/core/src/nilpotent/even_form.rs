use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::{check_dimension, same_dimension, wedge_sign, BladeMask, Multivector};
use crate::matrix::Coeff;
use crate::math;

/// Real even-degree element of `∧(R^n)*`.
///
/// The even subalgebra is commutative and its positive-degree part is
/// nilpotent, so every analytic function of an `EvenForm` is a finite
/// Taylor sum around the body.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenForm {
    dim: usize,
    coeffs: Vec<f64>,
}

impl EvenForm {
    pub fn zero(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { dim: n, coeffs: vec![0.0; 1 << n] })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        let mut f = Self::zero(n)?;
        f.coeffs[0] = c;
        Ok(f)
    }

    /// `c · e^i ∧ e^j`, indices 1-based.
    pub fn two_form(n: usize, i: usize, j: usize, c: f64) -> Result<Self> {
        let m = Multivector::blade(n, &[i, j])?;
        let mut f = Self::zero(n)?;
        for (mask, v) in m.terms() {
            f.coeffs[mask as usize] = c * v.re;
        }
        Ok(f)
    }

    /// Blade `e^{i_1} ∧ ⋯ ∧ e^{i_k}` of even degree.
    pub fn blade(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.len() % 2 == 1 {
            return Err(Error::InvalidParameter("odd-degree blade in an even form"));
        }
        Self::from_multivector(&Multivector::blade(n, indices)?)
    }

    /// Real even part check: fails on odd-degree or imaginary components.
    pub fn from_multivector(m: &Multivector) -> Result<Self> {
        let n = m.dimension();
        let mut f = Self::zero(n)?;
        for (mask, c) in m.terms() {
            if mask.count_ones() % 2 == 1 {
                return Err(Error::InvalidParameter("odd-degree component in an even form"));
            }
            if math::abs(c.im) > 1e-12 * (1.0 + c.norm()) {
                return Err(Error::ResidualImaginary(c.im));
            }
            f.coeffs[mask as usize] = c.re;
        }
        Ok(f)
    }

    pub fn to_multivector(&self) -> Multivector {
        let coeffs = self.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        Multivector::from_dense(self.dim, coeffs).expect("dimension already validated")
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, mask: BladeMask) -> f64 {
        self.coeffs[mask as usize]
    }

    pub fn set_coeff(&mut self, mask: BladeMask, value: f64) {
        debug_assert!(mask.count_ones().is_multiple_of(2));
        self.coeffs[mask as usize] = value;
    }

    /// Coefficient of the top blade.
    pub fn berezin(&self) -> f64 {
        self.coeffs[(1usize << self.dim) - 1]
    }

    pub fn terms(&self) -> impl Iterator<Item = (BladeMask, f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(m, &c)| (m as BladeMask, c))
    }

    pub fn degree_part(&self, k: usize) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            if (mask as u32).count_ones() as usize != k {
                *c = 0.0;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| math::abs(a - b)).fold(0.0, f64::max)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        same_dimension(self.dim, other.dim)?;
        Ok(Coeff::mul(self, other))
    }

    /// Divides every coefficient by `c`.
    pub fn div_scalar(&self, c: f64) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|a| a / c).collect() }
    }

    /// `exp(x)`, exact through nilpotency.
    pub fn exp(&self) -> Self {
        crate::matrix::nilpotent_exp(self)
    }

    /// Multiplies the degree-`j` part by `weight(j)`.
    pub fn grade_weighted(&self, weight: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            if *c != 0.0 {
                *c *= weight((mask as u32).count_ones() as usize);
            }
        }
        out
    }
}

impl Coeff for EvenForm {
    fn constant_like(&self, c: f64) -> Self {
        let mut f = Self { dim: self.dim, coeffs: vec![0.0; self.coeffs.len()] };
        f.coeffs[0] = c;
        f
    }

    fn body(&self) -> f64 {
        self.coeffs[0]
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "even form dimensions differ");
        Self { dim: self.dim, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "even form dimensions differ");
        Self { dim: self.dim, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self { dim: self.dim, coeffs: vec![0.0; self.coeffs.len()] };
        out.mul_add_assign(self, other);
        out
    }

    fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        assert!(self.dim == a.dim && a.dim == b.dim, "even form dimensions differ");
        for (ma, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (mb, &cb) in b.coeffs.iter().enumerate() {
                if cb == 0.0 || ma & mb != 0 {
                    continue;
                }
                self.coeffs[ma | mb] += ca * cb * wedge_sign(ma as u32, mb as u32);
            }
        }
    }

    fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.dim, other.dim, "even form dimensions differ");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| math::abs(*c)).fold(0.0, f64::max)
    }

    fn has_nilpotent_part(&self) -> bool {
        self.coeffs[1..].iter().any(|&c| c != 0.0)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}
