//! Clifford algebra `Cl(R^n)` on the blade basis, with `e^i e^j + e^j e^i = −2δ^{ij}`.
//!
//! The negative-definite relation is the one compatible with skew-adjoint
//! Clifford multiplication by covectors and with `c(i^{n/2} e^1⋯e^n)² = 1`.
//! [`sigma`] and [`quantize`] are the identity on coefficients; only the
//! product differs between [`CliffordElement`] and [`Multivector`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{check_dimension, clifford_sign, same_dimension, Multivector};
use crate::matrix::{Coeff, Mat, RealMatrix};
use crate::math;

/// A Clifford algebra element sharing the blade-basis storage of [`Multivector`].
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement(Multivector);

impl CliffordElement {
    pub fn one(n: usize) -> Result<Self> {
        Ok(Self(Multivector::scalar(n, 1.0)?))
    }

    /// The Clifford word `e^{i_1} ⋯ e^{i_k}`; repeated indices contract.
    pub fn word(n: usize, indices: &[usize]) -> Result<Self> {
        let mut acc = Self::one(n)?;
        for &i in indices {
            acc = acc.try_mul(&quantize(&Multivector::blade(n, &[i])?))?;
        }
        Ok(acc)
    }

    pub fn dimension(&self) -> usize {
        self.0.dimension()
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        same_dimension(self.dimension(), other.dimension())?;
        let n = self.dimension();
        let mut out = Multivector::zero(n)?;
        for (a, ca) in self.0.terms() {
            for (b, cb) in other.0.terms() {
                out.add_to(a ^ b, ca * cb * clifford_sign(a, b));
            }
        }
        Ok(Self(out))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        Ok(Self(&ab.0 - &ba.0))
    }

    /// Reversal of every word; inverts elements of the spin group.
    pub fn reverse(&self) -> Self {
        Self(self.0.grade_weighted(|k| if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_add(&other.0)?))
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        Self(self.0.scale(c))
    }
}

impl Mul for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: Self) -> CliffordElement {
        self.try_mul(rhs).expect("Clifford dimensions differ")
    }
}

/// Clifford product of two blade-basis elements.
pub fn clifford_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.try_mul(b)
}

/// Symbol map `e^{i_1}⋯e^{i_k} ↦ e^{i_1} ∧ ⋯ ∧ e^{i_k}`.
pub fn sigma(a: &CliffordElement) -> Multivector {
    a.0.clone()
}

/// Inverse of [`sigma`].
pub fn quantize(a: &Multivector) -> CliffordElement {
    CliffordElement(a.clone())
}

/// Lexicographic position of the pair `i < j` (1-based) among all pairs.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// All pairs `(i, j)`, `1 ≤ i < j ≤ n`, in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            out.push((i, j));
        }
    }
    out
}

/// Element `Σ_{i<j} a_{ij} e^i e^j` of `spin(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinElement {
    dim: usize,
    coeffs: Vec<f64>,
}

impl SpinElement {
    pub fn zero(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { dim: n, coeffs: vec![0.0; n * (n - 1) / 2] })
    }

    /// Coefficients in the lexicographic pair order of [`pairs`].
    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dimension(n)?;
        same_dimension(n * (n - 1) / 2, coeffs.len())?;
        Ok(Self { dim: n, coeffs })
    }

    /// `c · e^i e^j`; `i > j` flips the sign.
    pub fn basis(n: usize, i: usize, j: usize, c: f64) -> Result<Self> {
        let mut a = Self::zero(n)?;
        a.set(i, j, c)?;
        Ok(a)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn locate(&self, i: usize, j: usize) -> Result<Option<(usize, f64)>> {
        for k in [i, j] {
            if k == 0 || k > self.dim {
                return Err(Error::IndexOutOfRange { index: k, dimension: self.dim });
            }
        }
        Ok(match i.cmp(&j) {
            core::cmp::Ordering::Less => Some((pair_index(self.dim, i, j), 1.0)),
            core::cmp::Ordering::Greater => Some((pair_index(self.dim, j, i), -1.0)),
            core::cmp::Ordering::Equal => None,
        })
    }

    /// `a_{ij}` with `a_{ji} = −a_{ij}`.
    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.locate(i, j)?.map_or(0.0, |(k, s)| s * self.coeffs[k]))
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        match self.locate(i, j)? {
            Some((k, s)) => {
                self.coeffs[k] = s * value;
                Ok(())
            }
            None => Err(Error::InvalidParameter("diagonal spin(n) coordinate")),
        }
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.coeffs.iter().map(|x| x * x).sum())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dimension(self.dim, other.dim)?;
        Ok(Self { dim: self.dim, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn to_clifford(&self) -> CliffordElement {
        quantize(&self.to_form())
    }

    /// `σ(A) = Σ a_{ij} e^i ∧ e^j`.
    pub fn to_form(&self) -> Multivector {
        let mut m = Multivector::zero(self.dim).expect("dimension already validated");
        for (k, (i, j)) in pairs(self.dim).into_iter().enumerate() {
            m.set_coeff((1 << (i - 1)) | (1 << (j - 1)), Complex64::new(self.coeffs[k], 0.0));
        }
        m
    }

    /// Degree-2 part of a Clifford element read back as a spin(n) element.
    pub fn from_degree_two(x: &CliffordElement) -> Self {
        let n = x.dimension();
        let coeffs = pairs(n)
            .into_iter()
            .map(|(i, j)| x.as_multivector().coeff((1 << (i - 1)) | (1 << (j - 1))).re)
            .collect();
        Self { dim: n, coeffs }
    }
}

/// Ad-invariant inner product with `{e^i e^j}_{i<j}` orthonormal.
pub fn spin_inner(a: &SpinElement, b: &SpinElement) -> Result<f64> {
    same_dimension(a.dim, b.dim)?;
    Ok(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum())
}

/// Real `n × n` matrix with `M + Mᵀ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymMatrix(RealMatrix);

impl AntisymMatrix {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(m: RealMatrix) -> Result<Self> {
        let violation = m.max_antisymmetry_violation();
        if violation > Self::TOLERANCE {
            return Err(Error::NotAntisymmetric { max_violation: violation });
        }
        Ok(Self(m))
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.0
    }
}

const EXP_ITERATION_CAP: usize = 10_000;

/// `exp_C(A) = Σ A^k / k!` under the Clifford product, truncated once a term
/// drops below `tol`.
pub fn exp_clifford(a: &SpinElement, tol: f64) -> Result<CliffordElement> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("exp_clifford tolerance must be positive"));
    }
    let x = a.to_clifford();
    let mut sum = CliffordElement::one(a.dimension())?;
    let mut term = sum.clone();
    for k in 1..=EXP_ITERATION_CAP {
        term = term.try_mul(&x)?.scale(1.0 / k as f64);
        sum = sum.add(&term)?;
        if term.as_multivector().max_abs() < tol {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { operation: "exp_clifford", iterations: EXP_ITERATION_CAP })
}

/// `τ(x)`: the matrix of `v ↦ [x, v]` on degree-1 elements, column `k` being
/// the image of `e^k`.
pub fn tau_of(x: &CliffordElement) -> Result<AntisymMatrix> {
    let n = x.dimension();
    let mut m = RealMatrix::zeros(n);
    let mut violation: f64 = 0.0;
    let scale = x.as_multivector().max_abs().max(1.0);
    for k in 1..=n {
        let ek = CliffordElement::word(n, &[k])?;
        let c = x.commutator(&ek)?;
        for (mask, value) in c.as_multivector().terms() {
            if mask.count_ones() == 1 {
                *m.get_mut(mask.trailing_zeros() as usize, k - 1) = value.re;
                violation = violation.max(math::abs(value.im));
            } else {
                violation = violation.max(value.norm());
            }
        }
    }
    if violation > 1e-12 * scale {
        return Err(Error::OutsideDegreeOne { max_violation: violation });
    }
    AntisymMatrix::new(m)
}

/// `τ = D(Ad): spin(n) → so(n)`.
pub fn tau(a: &SpinElement) -> Result<AntisymMatrix> {
    tau_of(&a.to_clifford())
}

/// Structure constants of `spin(n)` obtained once from Clifford commutators:
/// `τ` of every basis element and the adjoint action in the orthonormal basis.
#[derive(Clone, Debug)]
pub struct SpinAlgebra {
    n: usize,
    tau_basis: Vec<RealMatrix>,
    ad_basis: Vec<RealMatrix>,
}

impl SpinAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let ps = pairs(n);
        let basis: Vec<CliffordElement> =
            ps.iter().map(|&(i, j)| SpinElement::basis(n, i, j, 1.0).map(|e| e.to_clifford())).collect::<Result<_>>()?;
        let mut tau_basis = Vec::with_capacity(ps.len());
        let mut ad_basis = Vec::with_capacity(ps.len());
        for ek in &basis {
            tau_basis.push(tau_of(ek)?.into_matrix());
            let mut ad = RealMatrix::zeros(ps.len());
            for (m, em) in basis.iter().enumerate() {
                let bracket = SpinElement::from_degree_two(&ek.commutator(em)?);
                for (row, v) in bracket.coeffs().iter().enumerate() {
                    *ad.get_mut(row, m) = *v;
                }
            }
            ad_basis.push(ad);
        }
        Ok(Self { n, tau_basis, ad_basis })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Dimension of `spin(n)`.
    pub fn spin_dimension(&self) -> usize {
        self.tau_basis.len()
    }

    /// `τ(A)` for coordinates in any coefficient ring.
    pub fn tau_generic<T: Coeff>(&self, coords: &[T]) -> Mat<T> {
        linear_combination(&self.tau_basis, coords, self.n)
    }

    /// `ad_A` on `spin(n)` for coordinates in any coefficient ring.
    pub fn ad_generic<T: Coeff>(&self, coords: &[T]) -> Mat<T> {
        linear_combination(&self.ad_basis, coords, self.spin_dimension())
    }

    pub fn tau(&self, a: &SpinElement) -> Result<AntisymMatrix> {
        same_dimension(self.n, a.dimension())?;
        AntisymMatrix::new(self.tau_generic(a.coeffs()))
    }

    pub fn ad(&self, a: &SpinElement) -> Result<RealMatrix> {
        same_dimension(self.n, a.dimension())?;
        Ok(self.ad_generic(a.coeffs()))
    }
}

pub(crate) fn linear_combination<T: Coeff>(basis: &[RealMatrix], coords: &[T], size: usize) -> Mat<T> {
    let proto = &coords[0];
    let mut out = Mat::scalar_like(proto, size, 0.0);
    for (b, c) in basis.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        for i in 0..size {
            for j in 0..size {
                let w = *b.get(i, j);
                if w != 0.0 {
                    out.get_mut(i, j).add_assign(&c.scale(w));
                }
            }
        }
    }
    out
}

/// Sign table for products of even blades, used by the dense real exponential
/// in the quadrature hot loop.
#[derive(Clone, Debug)]
pub struct EvenCliffordTable {
    n: usize,
    even_masks: Vec<u32>,
    pair_masks: Vec<u32>,
}

impl EvenCliffordTable {
    pub fn new(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let even_masks = (0u32..(1 << n)).filter(|m| m.count_ones() % 2 == 0).collect();
        let pair_masks = pairs(n).into_iter().map(|(i, j)| (1u32 << (i - 1)) | (1u32 << (j - 1))).collect();
        Ok(Self { n, even_masks, pair_masks })
    }

    /// Dense real `exp_C(A)` (indexed by blade mask) for `A` given by its pair
    /// coordinates.
    pub fn exp_spin(&self, coords: &[f64], tol: f64) -> Result<Vec<f64>> {
        let size = 1usize << self.n;
        let mut sum = vec![0.0; size];
        sum[0] = 1.0;
        let mut term = sum.clone();
        let mut next = vec![0.0; size];
        for k in 1..=EXP_ITERATION_CAP {
            next.iter_mut().for_each(|x| *x = 0.0);
            let inv_k = 1.0 / k as f64;
            for &a in &self.even_masks {
                let ta = term[a as usize];
                if ta == 0.0 {
                    continue;
                }
                for (&b, &cb) in self.pair_masks.iter().zip(coords) {
                    if cb != 0.0 {
                        next[(a ^ b) as usize] += ta * cb * clifford_sign(a, b) * inv_k;
                    }
                }
            }
            core::mem::swap(&mut term, &mut next);
            let mut largest: f64 = 0.0;
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
                largest = largest.max(math::abs(*t));
            }
            if largest < tol {
                return Ok(sum);
            }
        }
        Err(Error::NonConvergence { operation: "exp_clifford", iterations: EXP_ITERATION_CAP })
    }
}
