//! Complexified exterior algebra over `R^n` in the blade basis.
//!
//! A blade `e^{i_1} ∧ ⋯ ∧ e^{i_k}` with `i_1 < ⋯ < i_k` is keyed by the bitmask
//! with bit `i - 1` set for every index `i`. Coefficients are stored densely
//! (`2^n` slots, zero meaning absent), which keeps every product exact and
//! bounded for the dimensions this crate targets.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Largest ambient dimension accepted by the dense blade representation.
pub const MAX_DIMENSION: usize = 10;

/// Bitmask key of a blade; bit `i - 1` marks the index `i`.
pub type BladeMask = u32;

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n % 2 == 1 || n > MAX_DIMENSION {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

pub(crate) fn same_dimension(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Number of transpositions needed to sort the word `a` followed by `b`.
#[inline]
pub(crate) fn swap_count(a: BladeMask, b: BladeMask) -> u32 {
    let mut count = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        count += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    count
}

/// Sign of `e_a ∧ e_b` relative to `e_{a ∪ b}`; zero if the blades overlap.
#[inline]
pub fn wedge_sign(a: BladeMask, b: BladeMask) -> f64 {
    if a & b != 0 {
        0.0
    } else if swap_count(a, b).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign of the Clifford product `e_a e_b = ± e_{a xor b}` under `e_i e_i = -1`.
#[inline]
pub fn clifford_sign(a: BladeMask, b: BladeMask) -> f64 {
    let flips = swap_count(a, b) + (a & b).count_ones();
    if flips.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Bitmask of a sorted, duplicate-free index list; also returns the sign of
/// the permutation that sorts `indices`, or `None` when an index repeats.
pub fn blade_mask(n: usize, indices: &[usize]) -> Result<Option<(BladeMask, f64)>> {
    let mut mask: BladeMask = 0;
    let mut sign = 1.0;
    for &i in indices {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, dimension: n });
        }
        let bit = 1 << (i - 1);
        if mask & bit != 0 {
            return Ok(None);
        }
        // Moving e^i past every larger index already present.
        if (mask >> i).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Ok(Some((mask, sign)))
}

/// 1-based indices of a blade mask in increasing order.
pub fn blade_indices(mask: BladeMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize + 1);
        rest &= rest - 1;
    }
    out
}

/// A vector of `R^n` given by its components in the orthonormal frame.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Vector {
    components: Vec<f64>,
}

impl Vector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { components })
    }

    pub fn zero(n: usize) -> Self {
        Self { components: vec![0.0; n] }
    }

    /// The frame vector `e_k`, `k` 1-based.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, dimension: n });
        }
        let mut v = Self::zero(n);
        v.components[k - 1] = 1.0;
        Ok(v)
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.components
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum()
    }
}

/// Element of `∧(R^n)* ⊗ C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { dim: n, coeffs: vec![Complex64::new(0.0, 0.0); 1 << n] })
    }

    pub fn scalar(n: usize, value: impl Into<Complex64>) -> Result<Self> {
        let mut m = Self::zero(n)?;
        m.coeffs[0] = value.into();
        Ok(m)
    }

    /// `e^{i_1} ∧ ⋯ ∧ e^{i_k}` for arbitrary (1-based) index order; a repeated
    /// index gives zero.
    pub fn blade(n: usize, indices: &[usize]) -> Result<Self> {
        let mut m = Self::zero(n)?;
        if let Some((mask, sign)) = blade_mask(n, indices)? {
            m.coeffs[mask as usize] = Complex64::new(sign, 0.0);
        }
        Ok(m)
    }

    /// The top blade `e^1 ∧ ⋯ ∧ e^n`.
    pub fn top(n: usize) -> Result<Self> {
        let mut m = Self::zero(n)?;
        m.coeffs[(1usize << n) - 1] = Complex64::new(1.0, 0.0);
        Ok(m)
    }

    /// Degree-1 element `Σ v_k e^k`.
    pub fn from_vector(v: &Vector) -> Result<Self> {
        let mut m = Self::zero(v.dimension())?;
        for (k, &x) in v.as_slice().iter().enumerate() {
            m.coeffs[1 << k] = Complex64::new(x, 0.0);
        }
        Ok(m)
    }

    /// Dense constructor; `coeffs[mask]` is the coefficient of blade `mask`.
    pub fn from_dense(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dimension(n)?;
        same_dimension(1 << n, coeffs.len())?;
        Ok(Self { dim: n, coeffs })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn as_dense(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: BladeMask) -> Complex64 {
        self.coeffs.get(mask as usize).copied().unwrap_or_default()
    }

    pub fn set_coeff(&mut self, mask: BladeMask, value: Complex64) {
        self.coeffs[mask as usize] = value;
    }

    pub(crate) fn add_to(&mut self, mask: BladeMask, value: Complex64) {
        self.coeffs[mask as usize] += value;
    }

    /// Coefficient of the blade with the given (1-based, any order) indices,
    /// in the sign convention of that ordering.
    pub fn coefficient(&self, indices: &[usize]) -> Result<Complex64> {
        Ok(match blade_mask(self.dim, indices)? {
            Some((mask, sign)) => self.coeffs[mask as usize] * sign,
            None => Complex64::new(0.0, 0.0),
        })
    }

    /// Non-zero terms in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeMask, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(m, &c)| (m as BladeMask, c))
    }

    pub fn grade_project(&self, k: usize) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            if (mask as u32).count_ones() as usize != k {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Multiplies the degree-`j` component by `weight(j)`.
    pub fn grade_weighted(&self, weight: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            *c *= weight((mask as u32).count_ones() as usize);
        }
        out
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> Self {
        let f = factor.into();
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c * f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part over all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| math::abs(c.im)).fold(0.0, f64::max)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_dimension(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        same_dimension(self.dim, other.dim)?;
        let mut out = Self { dim: self.dim, coeffs: vec![Complex64::new(0.0, 0.0); 1 << self.dim] };
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if a & b == 0 {
                    out.coeffs[(a | b) as usize] += ca * cb * wedge_sign(a, b);
                }
            }
        }
        Ok(out)
    }

    /// Contraction `ι_v`, a graded derivation of degree −1 with `ι_v e^j = v_j`.
    pub fn interior(&self, v: &Vector) -> Result<Self> {
        same_dimension(self.dim, v.dimension())?;
        let mut out = Self { dim: self.dim, coeffs: vec![Complex64::new(0.0, 0.0); 1 << self.dim] };
        for (mask, c) in self.terms() {
            let mut position = 0;
            let mut rest = mask;
            while rest != 0 {
                let bit = rest.trailing_zeros();
                let vj = v.as_slice()[bit as usize];
                if vj != 0.0 {
                    let sign = if position % 2 == 0 { 1.0 } else { -1.0 };
                    out.coeffs[(mask & !(1 << bit)) as usize] += c * (sign * vj);
                }
                position += 1;
                rest &= rest - 1;
            }
        }
        Ok(out)
    }

    /// Top-degree coefficient.
    pub fn berezin(&self) -> Complex64 {
        self.coeffs[(1usize << self.dim) - 1]
    }

    /// Exterior exponential `Σ a^k / k!`; the scalar part factors out as `e^{a_0}`
    /// and the remaining series terminates by nilpotency. Only meaningful when
    /// `a` is even (so that its parts commute).
    pub fn exp_wedge(&self) -> Self {
        let s = self.coeffs[0];
        let mut nil = self.clone();
        nil.coeffs[0] = Complex64::new(0.0, 0.0);
        let mut sum = Self::scalar(self.dim, 1.0).expect("dimension already validated");
        let mut term = sum.clone();
        for k in 1..=self.dim {
            term = term.wedge(&nil).expect("same dimension").scale(1.0 / k as f64);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        sum.scale(s.exp())
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: Self) -> Multivector {
        self.try_add(rhs).expect("multivector dimensions differ")
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "multivector dimensions differ");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Self) -> Multivector {
        self + &(-rhs)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

/// Exterior product.
pub fn wedge(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.wedge(b)
}

/// Contraction of `a` with the vector `v`.
pub fn interior(v: &Vector, a: &Multivector) -> Result<Multivector> {
    a.interior(v)
}

/// Coefficient of `e^1 ∧ ⋯ ∧ e^n`.
pub fn berezin(a: &Multivector) -> Complex64 {
    a.berezin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn wedge_examples() {
        let e1 = Multivector::blade(4, &[1]).unwrap();
        let e2 = Multivector::blade(4, &[2]).unwrap();
        assert_eq!(e1.wedge(&e2).unwrap().coefficient(&[1, 2]).unwrap(), c(1.0));
        assert!(e1.wedge(&e1).unwrap().is_zero());
        assert_eq!(e2.wedge(&e1).unwrap().coefficient(&[1, 2]).unwrap(), c(-1.0));
        assert_eq!(Multivector::blade(4, &[2, 1]).unwrap().coeff(0b11), c(-1.0));
        assert!(Multivector::blade(4, &[3, 3]).unwrap().is_zero());
    }

    #[test]
    fn interior_examples() {
        let e12 = Multivector::blade(4, &[1, 2]).unwrap();
        let out = e12.interior(&Vector::basis(4, 1).unwrap()).unwrap();
        assert_eq!(out, Multivector::blade(4, &[2]).unwrap());
        let out = e12.interior(&Vector::basis(4, 2).unwrap()).unwrap();
        assert_eq!(out, -&Multivector::blade(4, &[1]).unwrap());
        assert!(e12.interior(&Vector::basis(4, 3).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn berezin_examples() {
        assert_eq!(Multivector::top(6).unwrap().berezin(), c(1.0));
        assert_eq!(Multivector::scalar(2, 1.0).unwrap().berezin(), c(0.0));
        let a = &Multivector::scalar(4, 2.0).unwrap() + &Multivector::top(4).unwrap().scale(3.0);
        assert_eq!(a.berezin(), c(3.0));
    }

    #[test]
    fn dimension_errors() {
        let a = Multivector::zero(2).unwrap();
        let b = Multivector::zero(4).unwrap();
        assert!(matches!(a.wedge(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(Multivector::zero(3), Err(Error::InvalidDimension(3))));
        assert!(matches!(a.interior(&Vector::zero(4)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(Multivector::blade(2, &[3]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn graded_commutativity_on_all_blades() {
        for n in [2, 4, 6] {
            for a in 0u32..(1 << n) {
                for b in 0u32..(1 << n) {
                    let x = Multivector::from_dense(n, unit(n, a)).unwrap();
                    let y = Multivector::from_dense(n, unit(n, b)).unwrap();
                    let sign = if (a.count_ones() * b.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
                    let lhs = x.wedge(&y).unwrap();
                    let rhs = y.wedge(&x).unwrap().scale(sign);
                    assert_eq!(lhs, rhs);
                    assert_eq!((&lhs - &rhs).berezin(), c(0.0));
                }
            }
        }
    }

    #[test]
    fn grades_sum_back() {
        let n = 4;
        let coeffs = (0..16).map(|k| c(k as f64 - 7.5)).collect();
        let a = Multivector::from_dense(n, coeffs).unwrap();
        let mut sum = Multivector::zero(n).unwrap();
        for k in 0..=n {
            sum += &a.grade_project(k);
        }
        assert_eq!(sum, a);
    }

    #[test]
    fn positive_degree_elements_are_nilpotent() {
        let n = 6;
        let two_form = &(&Multivector::blade(n, &[1, 2]).unwrap() + &Multivector::blade(n, &[3, 4]).unwrap())
            + &(&Multivector::blade(n, &[5, 6]).unwrap() + &Multivector::blade(n, &[1, 6]).unwrap());
        let mut power = two_form.clone();
        for _ in 1..3 {
            power = power.wedge(&two_form).unwrap();
        }
        assert!(!power.is_zero());
        assert!(power.wedge(&two_form).unwrap().is_zero());
    }

    fn unit(n: usize, mask: u32) -> Vec<Complex64> {
        let mut v = vec![c(0.0); 1 << n];
        v[mask as usize] = c(1.0);
        v
    }
}
