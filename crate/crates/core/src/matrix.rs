//! Square matrices over a commutative coefficient ring.
//!
//! The same code serves real matrices (`f64`) and matrices of even forms,
//! where every entry is a real body plus a nilpotent part.

use alloc::vec::Vec;
use core::fmt::Debug;

use crate::error::{Error, Result};
use crate::math;

/// Commutative ring with a real body map and nilpotent kernel.
pub trait Coeff: Clone + Debug {
    /// The constant `c` over the same ambient space as `self`.
    fn constant_like(&self, c: f64) -> Self;
    /// Degree-0 part.
    fn body(&self) -> f64;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: f64) -> Self;
    /// `self += a * b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self);
    fn add_assign(&mut self, other: &Self);
    fn max_abs(&self) -> f64;
    /// Whether the element has a non-zero positive-degree part.
    fn has_nilpotent_part(&self) -> bool;
    fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }
}

impl Coeff for f64 {
    fn constant_like(&self, c: f64) -> Self {
        c
    }
    fn body(&self) -> f64 {
        *self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn max_abs(&self) -> f64 {
        math::abs(*self)
    }
    fn has_nilpotent_part(&self) -> bool {
        false
    }
}

/// Dense row-major `n × n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    n: usize,
    data: Vec<T>,
}

pub type RealMatrix = Mat<f64>;

impl<T: Coeff> Mat<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data })
    }

    /// `c · I` with entries shaped like `proto`.
    pub fn scalar_like(proto: &T, n: usize, c: f64) -> Self {
        let zero = proto.constant_like(0.0);
        let diag = proto.constant_like(c);
        Self::from_fn(n, |i, j| if i == j { diag.clone() } else { zero.clone() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub(crate) fn proto(&self) -> &T {
        &self.data[0]
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        Ok(Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        Ok(Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a.scale(c)).collect() }
    }

    /// Multiplies every entry by the ring element `c`.
    pub fn scale_by(&self, c: &T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        let n = self.n;
        let zero = self.proto().constant_like(0.0);
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    let a = &self.data[i * n + k];
                    let b = &other.data[k * n + j];
                    if !a.is_zero() && !b.is_zero() {
                        acc.mul_add_assign(a, b);
                    }
                }
                data.push(acc);
            }
        }
        Ok(Self { n, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> T {
        let mut acc = self.proto().constant_like(0.0);
        for i in 0..self.n {
            acc.add_assign(self.get(i, i));
        }
        acc
    }

    /// Adds `c` to every diagonal entry.
    pub fn shift_diagonal(&self, c: f64) -> Self {
        let mut out = self.clone();
        let shift = self.proto().constant_like(c);
        for i in 0..self.n {
            let e = out.get_mut(i, i);
            e.add_assign(&shift);
        }
        out
    }

    /// `⟨v, M v⟩`.
    pub fn quadratic(&self, v: &[f64]) -> Result<T> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        let mut acc = self.proto().constant_like(0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                let w = v[i] * v[j];
                if w != 0.0 {
                    acc.add_assign(&self.get(i, j).scale(w));
                }
            }
        }
        Ok(acc)
    }

    /// Matrix of degree-0 parts.
    pub fn body(&self) -> RealMatrix {
        Mat { n: self.n, data: self.data.iter().map(Coeff::body).collect() }
    }

    pub fn has_nilpotent_part(&self) -> bool {
        self.data.iter().any(Coeff::has_nilpotent_part)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Coeff::max_abs).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b).max_abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::is_zero)
    }

    /// Lifts a real matrix into the ring of `proto`.
    pub fn lift(proto: &T, m: &RealMatrix) -> Self {
        Self::from_fn(m.n, |i, j| proto.constant_like(*m.get(i, j)))
    }

    /// Inverse via the body inverse and a Neumann series in the nilpotent part,
    /// which terminates.
    pub fn inverse(&self) -> Result<Self> {
        let body_inv = self.body().real_inverse()?;
        let binv = Self::lift(self.proto(), &body_inv);
        if !self.has_nilpotent_part() {
            return Ok(binv);
        }
        let nil = self.sub(&Self::lift(self.proto(), &self.body()))?;
        let step = binv.mul(&nil)?.scale(-1.0);
        let mut term = Self::scalar_like(self.proto(), self.n, 1.0);
        let mut sum = term.clone();
        for _ in 0..=2 * MAX_NILPOTENT_STEPS {
            term = term.mul(&step)?;
            if term.is_zero() {
                return sum.mul(&binv);
            }
            sum = sum.add(&term)?;
        }
        Err(Error::NonConvergence { operation: "nilpotent inverse", iterations: 2 * MAX_NILPOTENT_STEPS })
    }

    /// `det(M)^p`, computed as `det(B)^p · exp(p · tr log(I + B⁻¹N))` for the
    /// split `M = B + N` into body and nilpotent part. For non-integer `p`
    /// the body determinant must be positive (principal branch).
    pub fn det_power(&self, p: f64) -> Result<T> {
        let body = self.body();
        let det_b = body.real_det();
        let is_integer = p == libm::round(p);
        if !is_integer && det_b <= 0.0 {
            return Err(Error::NotPositive("fractional determinant power"));
        }
        if is_integer && det_b == 0.0 && p < 0.0 {
            return Err(Error::Singular("determinant power"));
        }
        let scalar = if is_integer { math::powi(det_b, p as i32) } else { math::powf(det_b, p) };
        let head = self.proto().constant_like(scalar);
        if !self.has_nilpotent_part() {
            return Ok(head);
        }
        let binv = Self::lift(self.proto(), &body.real_inverse()?);
        let nil = self.sub(&Self::lift(self.proto(), &body))?;
        let y = binv.mul(&nil)?;
        // tr log(I + Y) = Σ (-1)^{k+1} tr(Y^k) / k, finite by nilpotency.
        let mut power = y.clone();
        let mut trace_log = y.trace();
        for k in 2..=2 * MAX_NILPOTENT_STEPS {
            power = power.mul(&y)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            trace_log.add_assign(&power.trace().scale(sign / k as f64));
        }
        Ok(head.mul(&nilpotent_exp(&trace_log.scale(p))))
    }
}

/// Cap on the nilpotency order of entries (`n / 2 + 1` for `n ≤ MAX_DIMENSION`).
pub(crate) const MAX_NILPOTENT_STEPS: usize = crate::exterior::MAX_DIMENSION / 2 + 1;

/// `exp(x)` for a ring element `x = b + N`: `e^b Σ N^k / k!`, exact.
pub fn nilpotent_exp<T: Coeff>(x: &T) -> T {
    let b = x.body();
    let nil = x.sub(&x.constant_like(b));
    let mut sum = x.constant_like(1.0);
    let mut term = sum.clone();
    for k in 1..=2 * MAX_NILPOTENT_STEPS {
        term = term.mul(&nil).scale(1.0 / k as f64);
        if term.is_zero() {
            break;
        }
        sum.add_assign(&term);
    }
    sum.scale(math::exp(b))
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        Mat::from_fn(n, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn frobenius(&self) -> f64 {
        math::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn real_inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = RealMatrix::identity(n).data;
        let scale = self.frobenius().max(1.0);
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if math::abs(a[r * n + col]) > math::abs(a[pivot * n + col]) {
                    pivot = r;
                }
            }
            if math::abs(a[pivot * n + col]) <= 1e-14 * scale {
                return Err(Error::Singular("matrix inverse"));
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                    inv.swap(col * n + k, pivot * n + k);
                }
            }
            let p = a[col * n + col];
            for k in 0..n {
                a[col * n + k] /= p;
                inv[col * n + k] /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[r * n + col];
                    if f != 0.0 {
                        for k in 0..n {
                            a[r * n + k] -= f * a[col * n + k];
                            inv[r * n + k] -= f * inv[col * n + k];
                        }
                    }
                }
            }
        }
        Ok(Mat { n, data: inv })
    }

    /// Determinant by LU with partial pivoting.
    pub fn real_det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if math::abs(a[r * n + col]) > math::abs(a[pivot * n + col]) {
                    pivot = r;
                }
            }
            let p = a[pivot * n + col];
            if p == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f != 0.0 {
                    for k in col..n {
                        a[r * n + k] -= f * a[col * n + k];
                    }
                }
            }
        }
        det
    }

    /// Upper bound on the spectral radius: the Frobenius norm when that is
    /// already below `threshold`, otherwise `‖M^k‖^{1/k}` for `k` up to `2^12`.
    pub fn spectral_radius_bound(&self, threshold: f64) -> f64 {
        let f = self.frobenius();
        if f < threshold || f == 0.0 {
            return f;
        }
        // Invariant: M^exponent = p · exp(log_norm).
        let mut p = self.scale(1.0 / f);
        let mut log_norm = math::ln(f);
        let mut exponent = 1.0;
        let mut best = f;
        for _ in 0..12 {
            p = p.mul(&p).expect("square matrix");
            exponent *= 2.0;
            log_norm *= 2.0;
            let norm = p.frobenius();
            if norm == 0.0 {
                return 0.0;
            }
            log_norm += math::ln(norm);
            p = p.scale(1.0 / norm);
            best = best.min(math::exp(log_norm / exponent));
            if best < threshold {
                break;
            }
        }
        best
    }

    /// Gershgorin enclosure `[lo, hi]` of the real parts of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let radius: f64 = (0..self.n).filter(|&j| j != i).map(|j| math::abs(*self.get(i, j))).sum();
            let d = *self.get(i, i);
            lo = lo.min(d - radius);
            hi = hi.max(d + radius);
        }
        (lo, hi)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max(math::abs(self.get(i, j) - self.get(j, i)));
            }
        }
        worst
    }

    pub fn max_antisymmetry_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max(math::abs(self.get(i, j) + self.get(j, i)));
            }
        }
        worst
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// Whether the symmetric part admits a Cholesky factorisation.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.n;
        let mut l = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let aij = 0.5 * (self.get(i, j) + self.get(j, i));
                let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
                if i == j {
                    let d = aij - s;
                    if d <= 0.0 {
                        return false;
                    }
                    l[i * n + i] = math::sqrt(d);
                } else {
                    l[i * n + j] = (aij - s) / l[j * n + j];
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = Mat::from_rows(3, alloc::vec![4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
        let inv = m.real_inverse().unwrap();
        let id = m.mul(&inv).unwrap();
        assert!(id.max_abs_diff(&RealMatrix::identity(3)) < 1e-14);
        assert!((m.real_det() - 18.0).abs() < 1e-12);
        assert!(m.is_positive_definite());
        assert!((m.det_power(0.5).unwrap() - 18f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn singular_inverse_is_reported() {
        let m = Mat::from_rows(2, alloc::vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(m.real_inverse(), Err(Error::Singular(_))));
    }

    #[test]
    fn spectral_bound_of_rotation() {
        // Rotation generator: spectral radius 2 while Frobenius norm is 2√2.
        let m = Mat::from_rows(2, alloc::vec![0.0, -2.0, 2.0, 0.0]).unwrap();
        let est = m.spectral_radius_bound(1.0);
        assert!((2.0 - 1e-9..2.1).contains(&est), "{est}");
        let nil = Mat::from_rows(2, alloc::vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(nil.spectral_radius_bound(0.5), 0.0);
    }
}
