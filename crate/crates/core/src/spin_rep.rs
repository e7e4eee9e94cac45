//! Spinor representation of `Cl(R^n)` on `∧C^{n/2}`, chirality and supertrace.
//!
//! Generators act on the Fock space of `n/2` fermionic modes with
//! `γ_{2k−1} = a_k^† − a_k` and `γ_{2k} = i(a_k^† + a_k)`, which are
//! skew-Hermitian and square to `−1`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::clifford::{quantize, CliffordElement};
use crate::error::Result;
use crate::exterior::{check_dimension, same_dimension, BladeMask, Multivector};

/// Dense complex `2^{n/2} × 2^{n/2}` matrix acting on spinors in dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorOperator {
    dim: usize,
    size: usize,
    data: Vec<Complex64>,
}

impl SpinorOperator {
    pub fn zero(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let size = 1usize << (n / 2);
        Ok(Self { dim: n, size, data: vec![Complex64::new(0.0, 0.0); size * size] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..m.size {
            m.data[i * m.size + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Row-major entries.
    pub fn from_entries(n: usize, data: Vec<Complex64>) -> Result<Self> {
        let mut m = Self::zero(n)?;
        same_dimension(m.data.len(), data.len())?;
        m.data = data;
        Ok(m)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.size + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        same_dimension(self.dim, other.dim)?;
        let s = self.size;
        let mut out = Self::zero(self.dim)?;
        for i in 0..s {
            for k in 0..s {
                let a = self.data[i * s + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..s {
                    out.data[i * s + j] += a * other.data[k * s + j];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_dimension(self.dim, other.dim)?;
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let mut out = self.clone();
        out.data.iter_mut().for_each(|a| *a *= c);
        out
    }

    pub fn adjoint(&self) -> Self {
        let s = self.size;
        let mut out = self.clone();
        for i in 0..s {
            for j in 0..s {
                out.data[i * s + j] = self.data[j * s + i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.size).map(|i| self.data[i * self.size + i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `‖U U^† − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.try_mul(&self.adjoint()).expect("same dimension");
        p.max_abs_diff(&Self::identity(self.dim).expect("valid dimension"))
    }

    fn one_norm(&self) -> f64 {
        (0..self.size)
            .map(|j| (0..self.size).map(|i| self.data[i * self.size + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn matrix_exponential(m: &SpinorOperator) -> SpinorOperator {
    let norm = m.one_norm();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = m.scale(scale);
    let id = SpinorOperator::identity(m.dim).expect("valid dimension");
    let mut sum = id.clone();
    let mut term = id;
    for k in 1..=24 {
        term = term.try_mul(&x).expect("same dimension").scale(1.0 / k as f64);
        sum = sum.try_add(&term).expect("same dimension");
    }
    for _ in 0..squarings {
        sum = sum.try_mul(&sum).expect("same dimension");
    }
    sum
}

/// The images `ρ(e^I)` of every blade, indexed by blade mask.
#[derive(Clone, Debug)]
pub struct SpinorBasis {
    n: usize,
    blades: Vec<SpinorOperator>,
}

impl SpinorBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let gammas: Vec<SpinorOperator> = (1..=n).map(|k| gamma(n, k)).collect::<Result<_>>()?;
        let mut blades = Vec::with_capacity(1 << n);
        blades.push(SpinorOperator::identity(n)?);
        for mask in 1u32..(1 << n) {
            // Highest index last: ρ(e^I) = ρ(e^{I∖{top}}) γ_top.
            let top = 31 - mask.leading_zeros();
            let rest = mask & !(1 << top);
            let prod = blades[rest as usize].try_mul(&gammas[top as usize])?;
            blades.push(prod);
        }
        Ok(Self { n, blades })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn blade(&self, mask: BladeMask) -> &SpinorOperator {
        &self.blades[mask as usize]
    }

    pub fn rho(&self, a: &CliffordElement) -> Result<SpinorOperator> {
        same_dimension(self.n, a.dimension())?;
        let mut out = SpinorOperator::zero(self.n)?;
        for (mask, c) in a.as_multivector().terms() {
            let b = &self.blades[mask as usize];
            out.data.iter_mut().zip(&b.data).for_each(|(o, x)| *o += c * x);
        }
        Ok(out)
    }

    /// Inverse of `ρ ∘ quantize` by Hilbert–Schmidt pairing with the blade images.
    pub fn clifford_from_matrix(&self, t: &SpinorOperator) -> Result<Multivector> {
        same_dimension(self.n, t.dim)?;
        let norm = t.size as f64;
        let coeffs = self
            .blades
            .iter()
            .map(|b| b.data.iter().zip(&t.data).map(|(x, y)| x.conj() * y).sum::<Complex64>() / norm)
            .collect();
        Multivector::from_dense(self.n, coeffs)
    }
}

/// `ρ(e^k)` on the Fock space, `k` 1-based.
fn gamma(n: usize, k: usize) -> Result<SpinorOperator> {
    let mut g = SpinorOperator::zero(n)?;
    let s = g.size;
    let mode = (k - 1) / 2;
    let bit = 1usize << mode;
    let second = k.is_multiple_of(2);
    for state in 0..s {
        let parity = if (state & (bit - 1)).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        let target = state ^ bit;
        // Creation if the mode is empty, annihilation otherwise.
        let value = match (state & bit == 0, second) {
            (true, false) => Complex64::new(parity, 0.0),
            (false, false) => Complex64::new(-parity, 0.0),
            (_, true) => Complex64::new(0.0, parity),
        };
        g.data[target * s + state] = value;
    }
    Ok(g)
}

/// `ρ(a)` for a Clifford element.
pub fn rho(a: &CliffordElement) -> Result<SpinorOperator> {
    SpinorBasis::new(a.dimension())?.rho(a)
}

/// Inverse of `ρ ∘ quantize`.
pub fn clifford_from_matrix(t: &SpinorOperator) -> Result<Multivector> {
    SpinorBasis::new(t.dimension())?.clifford_from_matrix(t)
}

/// `ρ(i^{n/2} e^1⋯e^n)`.
pub fn chirality(n: usize) -> Result<SpinorOperator> {
    check_dimension(n)?;
    let phase = Complex64::i().powu((n / 2) as u32);
    rho(&quantize(&Multivector::top(n)?.scale(phase)))
}

/// `tr(Γ T)` with `Γ` the chirality operator.
pub fn supertrace(t: &SpinorOperator) -> Result<Complex64> {
    Ok(chirality(t.dimension())?.try_mul(t)?.trace())
}

/// The constant `(2/i)^{n/2}` relating supertrace and Berezin integral.
pub fn supertrace_constant(n: usize) -> Complex64 {
    Complex64::new(0.0, -2.0).powu((n / 2) as u32)
}

/// `|str(ρ(ω)) − (2/i)^{n/2} B(ω)|`.
pub fn supertrace_identity_error(basis: &SpinorBasis, gamma5: &SpinorOperator, omega: &Multivector) -> Result<f64> {
    let t = basis.rho(&quantize(omega))?;
    let lhs = gamma5.try_mul(&t)?.trace();
    let rhs = supertrace_constant(basis.dimension()) * omega.berezin();
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{exp_clifford, SpinElement};

    fn blade(n: usize, idx: &[usize]) -> CliffordElement {
        quantize(&Multivector::blade(n, idx).unwrap())
    }

    #[test]
    fn generators() {
        let n = 4;
        let id = SpinorOperator::identity(n).unwrap();
        assert_eq!(rho(&quantize(&Multivector::scalar(n, 1.0).unwrap())).unwrap(), id);
        for i in 1..=n {
            let gi = rho(&blade(n, &[i])).unwrap();
            assert!(gi.try_mul(&gi).unwrap().max_abs_diff(&id.scale(-1.0)) < 1e-15);
            assert!(gi.adjoint().max_abs_diff(&gi.scale(-1.0)) < 1e-15);
            for j in i + 1..=n {
                let gj = rho(&blade(n, &[j])).unwrap();
                let anti = gi.try_mul(&gj).unwrap().try_add(&gj.try_mul(&gi).unwrap()).unwrap();
                assert!(anti.max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rho_is_multiplicative() {
        let n = 4;
        let basis = SpinorBasis::new(n).unwrap();
        for a in 0u32..16 {
            for b in 0u32..16 {
                let ea = quantize(&Multivector::from_dense(n, unit(n, a)).unwrap());
                let eb = quantize(&Multivector::from_dense(n, unit(n, b)).unwrap());
                let lhs = basis.rho(&(&ea * &eb)).unwrap();
                let rhs = basis.rho(&ea).unwrap().try_mul(&basis.rho(&eb).unwrap()).unwrap();
                assert!(lhs.max_abs_diff(&rhs) < 1e-14);
            }
        }
    }

    fn unit(n: usize, mask: u32) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
        v[mask as usize] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn chirality_examples() {
        for n in [2, 4, 6] {
            let g = chirality(n).unwrap();
            let id = SpinorOperator::identity(n).unwrap();
            assert!(g.try_mul(&g).unwrap().max_abs_diff(&id) < 1e-14);
            assert!(g.adjoint().max_abs_diff(&g) < 1e-14);
            assert!(g.trace().norm() < 1e-14);
            let e1 = rho(&blade(n, &[1])).unwrap();
            let anti = g.try_mul(&e1).unwrap().try_add(&e1.try_mul(&g).unwrap()).unwrap();
            assert!(anti.max_abs() < 1e-14);
        }
    }

    #[test]
    fn supertrace_examples() {
        let n = 4;
        assert!(supertrace(&SpinorOperator::identity(n).unwrap()).unwrap().norm() < 1e-14);
        let top = supertrace(&rho(&quantize(&Multivector::top(n).unwrap())).unwrap()).unwrap();
        assert!((top - Complex64::new(-4.0, 0.0)).norm() < 1e-14);
        assert!(supertrace(&rho(&blade(n, &[1, 2])).unwrap()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn round_trip() {
        let n = 4;
        let e12 = blade(n, &[1, 2]);
        let back = clifford_from_matrix(&rho(&e12).unwrap()).unwrap();
        assert!(back.max_abs_diff(e12.as_multivector()) < 1e-15);
        let id = clifford_from_matrix(&SpinorOperator::identity(n).unwrap()).unwrap();
        assert!(id.max_abs_diff(&Multivector::scalar(n, 1.0).unwrap()) < 1e-15);
    }

    #[test]
    fn exponential_agrees_with_representation() {
        let n = 4;
        let a = SpinElement::from_coeffs(n, vec![0.3, -0.2, 0.5, 0.1, -0.4, 0.25]).unwrap();
        let lhs = rho(&exp_clifford(&a, 1e-16).unwrap()).unwrap();
        let rhs = matrix_exponential(&rho(&a.to_clifford()).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        assert!(lhs.unitarity_defect() < 1e-12);
    }
}
