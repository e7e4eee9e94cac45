//! Random test data: multivectors, `spin(n)` elements, vectors and algebraic
//! curvature tensors.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::clifford::SpinElement;
use crate::error::Result;
use crate::exterior::{check_dimension, Multivector, Vector};
use crate::geometry::RiemannTensor;

/// Complex coefficients uniform in `[−1, 1]²` on every blade.
pub fn random_multivector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Multivector> {
    check_dimension(n)?;
    let coeffs = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    Multivector::from_dense(n, coeffs)
}

/// Isotropic direction with norm uniform in `[0, max_norm]`.
pub fn random_spin_element<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> Result<SpinElement> {
    check_dimension(n)?;
    let d = n * (n - 1) / 2;
    let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    let norm = libm::sqrt(g.iter().map(|x| x * x).sum::<f64>()).max(f64::MIN_POSITIVE);
    let radius = rng.random_range(0.0..=max_norm);
    SpinElement::from_coeffs(n, g.into_iter().map(|x| x * radius / norm).collect())
}

/// Components uniform in `[−scale, scale]`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Result<Vector> {
    Vector::new((0..n).map(|_| rng.random_range(-scale..=scale)).collect())
}

/// Gaussian tensor projected onto algebraic curvature tensors and rescaled
/// to largest component `scale`.
///
/// The projection antisymmetrises in both index pairs, symmetrises under
/// pair exchange, then removes the cyclic part, `R ↦ R − b(R)` with
/// `b(R)_{ijkl} = (R_{ijkl} + R_{iklj} + R_{iljk}) / 3`.
pub fn random_riemann<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Result<RiemannTensor> {
    check_dimension(n)?;
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let raw: Vec<f64> = (0..n * n * n * n).map(|_| StandardNormal.sample(rng)).collect();
    let mut p = alloc::vec![0.0; raw.len()];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let anti = |a, b, c, d| raw[idx(a, b, c, d)] - raw[idx(b, a, c, d)] - raw[idx(a, b, d, c)] + raw[idx(b, a, d, c)];
                    p[idx(i, j, k, l)] = (anti(i, j, k, l) + anti(k, l, i, j)) / 8.0;
                }
            }
        }
    }
    let mut r = alloc::vec![0.0; raw.len()];
    let mut largest: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let cyclic = (p[idx(i, j, k, l)] + p[idx(i, k, l, j)] + p[idx(i, l, j, k)]) / 3.0;
                    let v = p[idx(i, j, k, l)] - cyclic;
                    largest = largest.max(libm::fabs(v));
                    r[idx(i, j, k, l)] = v;
                }
            }
        }
    }
    let factor = if largest > 0.0 { scale / largest } else { 0.0 };
    RiemannTensor::new(n, r.into_iter().map(|x| x * factor).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_tensors_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 4, 6] {
            let r = random_riemann(&mut rng, n, 0.8).unwrap();
            assert!((r.max_abs() - 0.8).abs() < 1e-12);
            let (a, p, b) = r.symmetry_defects();
            assert!(a < 1e-14 && p < 1e-14 && b < 1e-14);
        }
    }

    #[test]
    fn spin_elements_respect_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            assert!(random_spin_element(&mut rng, 4, 0.5).unwrap().norm() <= 0.5 + 1e-15);
        }
    }
}
