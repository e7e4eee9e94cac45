//! Brute-force reference computations that share no code with the series
//! engine: the one-dimensional Mehler kernel by eigenfunction summation and
//! the Â-form by explicit truncated power series.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{riemann_form_matrix, RiemannTensor};
use crate::math::{self, PI};
use crate::matrix::Coeff;
use crate::nilpotent::EvenForm;

/// Largest number of eigenfunctions summed by [`mehler_1d_oracle`].
pub const MEHLER_TERM_CAP: usize = 100_000;

/// Required bound on the neglected spectral tail.
pub const MEHLER_TAIL_BOUND: f64 = 1e-12;

/// Cramér's constant: `|ψ_k(x)| ≤ CRAMER · π^{−1/4}` for normalized Hermite functions.
const CRAMER: f64 = 1.086_435;

/// Heat kernel of `−d²/dx² + a²x²` at time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mehler1d {
    /// `√(a / 2π sinh 2at) · exp(−a((x²+y²) cosh 2at − 2xy) / 2 sinh 2at)`.
    pub closed: f64,
    /// `Σ_k e^{−(2k+1)at} φ_k(x) φ_k(y)`.
    pub spectral: f64,
    /// Number of eigenfunctions summed.
    pub terms: usize,
}

impl Mehler1d {
    pub fn relative_error(&self) -> f64 {
        math::abs(self.closed - self.spectral) / math::abs(self.closed)
    }
}

/// Closed form of the Mehler kernel.
pub fn mehler_1d_closed(a: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    if !(a > 0.0) || !(t > 0.0) {
        return Err(Error::InvalidParameter("Mehler oracle needs a > 0 and t > 0"));
    }
    let s = math::sinh(2.0 * a * t);
    let c = math::cosh(2.0 * a * t);
    Ok(math::sqrt(a / (2.0 * PI * s)) * math::exp(-a * ((x * x + y * y) * c - 2.0 * x * y) / (2.0 * s)))
}

/// Closed form and eigenfunction expansion, with the series cut once the
/// Cramér tail bound drops below [`MEHLER_TAIL_BOUND`].
pub fn mehler_1d_oracle(a: f64, t: f64, x: f64, y: f64) -> Result<Mehler1d> {
    let closed = mehler_1d_closed(a, t, x, y)?;
    let q = math::exp(-2.0 * a * t);
    // Σ_{k≥N} e^{−(2k+1)at} sup|φ_k|² ≤ √a C² π^{−1/2} e^{−(2N+1)at} / (1 − q).
    let envelope = math::sqrt(a) * CRAMER * CRAMER / math::sqrt(PI) / (1.0 - q);
    let tail = |terms: usize| envelope * math::exp(-(2.0 * terms as f64 + 1.0) * a * t);

    let sa = math::sqrt(a);
    let (xi, eta) = (sa * x, sa * y);
    let norm = math::sqrt(sa);
    let h0 = math::powf(PI, -0.25);
    let (mut px, mut px_prev) = (h0 * math::exp(-xi * xi / 2.0), 0.0);
    let (mut py, mut py_prev) = (h0 * math::exp(-eta * eta / 2.0), 0.0);
    let mut spectral = 0.0;
    let mut terms = 0;
    while terms < MEHLER_TERM_CAP {
        let k = terms as f64;
        spectral += math::exp(-(2.0 * k + 1.0) * a * t) * norm * px * norm * py;
        terms += 1;
        if tail(terms) < MEHLER_TAIL_BOUND {
            return Ok(Mehler1d { closed, spectral, terms });
        }
        let c1 = math::sqrt(2.0 / (k + 1.0));
        let c0 = math::sqrt(k / (k + 1.0));
        (px, px_prev) = (c1 * xi * px - c0 * px_prev, px);
        (py, py_prev) = (c1 * eta * py - c0 * py_prev, py);
    }
    Err(Error::TailBound { terms, bound: tail(terms) })
}

/// Free heat kernel `(4πt)^{−1/2} e^{−(x−y)²/4t}`, the `a → 0` limit.
pub fn free_heat_kernel(t: f64, x: f64, y: f64) -> f64 {
    math::exp(-(x - y) * (x - y) / (4.0 * t)) / math::sqrt(4.0 * PI * t)
}

/// `log(x / sinh x) = Σ_k c_k x^{2k}`, `c_1 … c_5`.
const LOG_X_OVER_SINH: [f64; 5] = [-1.0 / 6.0, 1.0 / 180.0, -1.0 / 2835.0, 1.0 / 37800.0, -1.0 / 467775.0];

/// `x / sinh x = Σ_k b_k x^{2k}`, `b_0 … b_5`.
const X_OVER_SINH: [f64; 6] =
    [1.0, -1.0 / 6.0, 7.0 / 360.0, -31.0 / 15120.0, 127.0 / 604800.0, -73.0 / 3421440.0];

type FormRows = Vec<EvenForm>;

fn mat_mul(n: usize, a: &[EvenForm], b: &[EvenForm]) -> FormRows {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = a[i * n].mul(&b[j]);
            for k in 1..n {
                acc = acc.add(&a[i * n + k].mul(&b[k * n + j]));
            }
            out.push(acc);
        }
    }
    out
}

/// Powers `M², M⁴, …` of `M = R_x / 2` up to form degree `n`.
fn even_powers(r: &RiemannTensor) -> Result<(usize, Vec<FormRows>)> {
    let n = r.dimension();
    let rx = riemann_form_matrix(r)?;
    let half: FormRows = rx.entries().iter().map(|f| f.scale(0.5)).collect();
    let square = mat_mul(n, &half, &half);
    let mut powers = Vec::new();
    let mut p = square.clone();
    // Entries of M^{2k} have degree 4k.
    for _ in 0..n / 4 {
        powers.push(p.clone());
        p = mat_mul(n, &p, &square);
    }
    Ok((n, powers))
}

/// Â-form as `exp(½ tr log(M / sinh M))`, `M = R_x/2`, with the logarithm
/// summed term by term from its Taylor coefficients.
pub fn ahat_series_oracle(r: &RiemannTensor) -> Result<EvenForm> {
    let (n, powers) = even_powers(r)?;
    let mut exponent = EvenForm::zero(n)?;
    for (k, p) in powers.iter().enumerate() {
        let trace = (0..n).fold(EvenForm::zero(n)?, |acc, i| acc.add(&p[i * n + i]));
        exponent = exponent.add(&trace.scale(0.5 * LOG_X_OVER_SINH[k]));
    }
    // exp of a nilpotent form: finite sum.
    let mut sum = EvenForm::constant(n, 1.0)?;
    let mut term = sum.clone();
    for k in 1..=n / 2 {
        term = term.mul(&exponent).scale(1.0 / k as f64);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// `det((M / sinh M))` for `M = R_x/2`, by permutation expansion of the
/// truncated matrix series. Equals the square of the Â-form.
pub fn ahat_squared_oracle(r: &RiemannTensor) -> Result<EvenForm> {
    let (n, powers) = even_powers(r)?;
    let mut f: FormRows = (0..n * n)
        .map(|i| EvenForm::constant(n, if i % (n + 1) == 0 { X_OVER_SINH[0] } else { 0.0 }))
        .collect::<Result<_>>()?;
    for (k, p) in powers.iter().enumerate() {
        for (e, q) in f.iter_mut().zip(p) {
            *e = e.add(&q.scale(X_OVER_SINH[k + 1]));
        }
    }
    leibniz_det(n, &f)
}

/// `Σ_π sgn(π) Π_i a_{i,π(i)}` over all permutations (Heap's algorithm).
pub fn leibniz_det(n: usize, a: &[EvenForm]) -> Result<EvenForm> {
    if a.len() != n * n || n == 0 {
        return Err(Error::DimensionMismatch { expected: n * n, found: a.len() });
    }
    let dim = a[0].dimension();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = alloc::vec![0usize; n];
    let mut sign = 1.0;
    let product = |perm: &[usize], sign: f64| -> Result<EvenForm> {
        let init = EvenForm::constant(dim, sign)?;
        Ok(perm.iter().enumerate().fold(init, |acc, (i, &j)| acc.mul(&a[i * n + j])))
    };
    let mut det = product(&perm, sign)?;
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let swap = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(swap, i);
            sign = -sign;
            det = det.add(&product(&perm, sign)?);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::getzler::ahat_form;
    use crate::sample::random_riemann;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mehler_reference_point() {
        let m = mehler_1d_oracle(1.0, 0.5, 0.3, -0.2).unwrap();
        assert!(m.relative_error() < 1e-12, "{m:?}");
        let m0 = mehler_1d_oracle(1.0, 0.5, 0.0, 0.0).unwrap();
        assert!(m0.relative_error() < 1e-12);
    }

    #[test]
    fn mehler_random_points_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let (a, t) = (rng.random_range(0.2..2.0), rng.random_range(0.1..2.0));
            let (x, y) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let m = mehler_1d_oracle(a, t, x, y).unwrap();
            assert!(m.relative_error() < 1e-9, "{a} {t} {x} {y}: {m:?}");
            assert_eq!(m.closed, mehler_1d_closed(a, t, y, x).unwrap());
        }
    }

    #[test]
    fn mehler_free_limit() {
        let (t, x, y) = (0.7, 0.4, -0.3);
        let e1 = (mehler_1d_closed(1e-2, t, x, y).unwrap() - free_heat_kernel(t, x, y)).abs();
        let e2 = (mehler_1d_closed(1e-3, t, x, y).unwrap() - free_heat_kernel(t, x, y)).abs();
        assert!(e1 < 1e-3 && (e1 / e2 - 100.0).abs() < 2.0, "{e1} {e2}");
    }

    #[test]
    fn mehler_tail_cap() {
        assert!(matches!(mehler_1d_oracle(1e-9, 1e-3, 0.0, 0.0), Err(Error::TailBound { .. })));
    }

    #[test]
    fn ahat_oracles_agree_with_series_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [2, 4, 6] {
            for _ in 0..5 {
                let r = random_riemann(&mut rng, n, 0.9).unwrap();
                let engine = ahat_form(&r).unwrap();
                let oracle = ahat_series_oracle(&r).unwrap();
                assert!(engine.max_abs_diff(&oracle) < 1e-12, "n={n}");
                let squared = ahat_squared_oracle(&r).unwrap();
                assert!(squared.max_abs_diff(&oracle.mul(&oracle)) < 1e-12);
            }
        }
        let flat = ahat_series_oracle(&RiemannTensor::zero(4).unwrap()).unwrap();
        assert_eq!(flat, EvenForm::constant(4, 1.0).unwrap());
    }

    #[test]
    fn leibniz_matches_triangular_product() {
        let c = |x: f64| EvenForm::constant(2, x).unwrap();
        let a = [c(2.0), c(5.0), c(0.0), c(3.0)];
        assert_eq!(leibniz_det(2, &a).unwrap().body(), 6.0);
        let b: Vec<EvenForm> = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0].iter().map(|x| c(*x)).collect();
        assert!((leibniz_det(3, &b).unwrap().body() + 3.0).abs() < 1e-12);
    }
}
