//! Gaussian–Grassmann integrals over `spin(n)`:
//! `(4πt)^{−d/2} ∫ e^{−|A|²/4t} Ψ(A) δ_t σ(exp_C A) dA`, `d = n(n−1)/2`,
//! i.e. the expectation of `Ψ(A) δ_t σ(exp_C A)` for `A ~ N(0, 2t·I_d)`.
//!
//! Node contributions are accumulated along a fixed binary tree over node
//! indices ([`split`]), so any evaluation order that respects the tree,
//! sequential or parallel, gives bit-identical sums.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::clifford::{EvenCliffordTable, SpinElement};
use crate::convergence::{fit_order, ConvergenceFit};
use crate::error::{Error, Result};
use crate::exterior::{check_dimension, Multivector};
use crate::math::{self, PI};
use crate::nilpotent::{AnalyticComposite, EvenForm, Evaluator};

/// Node ranges at or below this size are summed left to right.
pub const LEAF_SIZE: usize = 256;

/// Tolerance of the per-node Clifford exponential.
const EXP_TOLERANCE: f64 = 1e-17;

/// Quadrature rule over `spin(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum QuadratureRule {
    /// Tensor Gauss–Hermite rule with `order` nodes per coordinate.
    GaussHermite { order: usize },
    /// Plain Monte Carlo with a seeded stream per sample.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    /// Nodes with `|A|` beyond this radius contribute zero. Integrands such as
    /// `Φ₀` are only defined inside the injectivity region of `exp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_radius: Option<f64>,
    /// Polynomial degree of `Ψ` for which exactness is claimed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_degree: Option<usize>,
}

impl QuadratureSpec {
    pub fn gauss_hermite(order: usize) -> Self {
        Self { rule: QuadratureRule::GaussHermite { order }, support_radius: None, exact_degree: None }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self { rule: QuadratureRule::MonteCarlo { samples, seed }, support_radius: None, exact_degree: None }
    }

    pub fn with_support_radius(mut self, r: f64) -> Self {
        self.support_radius = Some(r);
        self
    }

    pub fn claiming_exactness(mut self, degree: usize) -> Self {
        self.exact_degree = Some(degree);
        self
    }

    fn validate(&self) -> Result<()> {
        match self.rule {
            QuadratureRule::GaussHermite { order } => {
                if order == 0 || order > 64 {
                    return Err(Error::InvalidParameter("Gauss-Hermite order must lie in 1..=64"));
                }
                if let Some(deg) = self.exact_degree {
                    let required = deg / 2 + 1;
                    if order < required {
                        return Err(Error::UnderResolved { required, order });
                    }
                }
            }
            QuadratureRule::MonteCarlo { samples, .. } => {
                if samples < 2 {
                    return Err(Error::InvalidParameter("Monte Carlo needs two or more samples"));
                }
                if self.exact_degree.is_some() {
                    return Err(Error::InvalidParameter("Monte Carlo cannot be exact"));
                }
            }
        }
        if let Some(r) = self.support_radius {
            if !(r > 0.0) {
                return Err(Error::InvalidParameter("support radius must be positive"));
            }
        }
        Ok(())
    }
}

/// Nodes and weights of the `order`-point rule for `∫ e^{−x²} f(x) dx`,
/// nodes ascending.
pub fn gauss_hermite(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::InvalidParameter("Gauss-Hermite order must be positive"));
    }
    let n = order;
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = math::powf(PI, -0.25);
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => math::sqrt(2.0 * nf + 1.0) - 1.85575 * math::powf(2.0 * nf + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * math::powf(nf, 0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            // Orthonormal Hermite recurrence.
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * math::sqrt(2.0 / (jf + 1.0)) * p2 - math::sqrt(jf / (jf + 1.0)) * p3;
            }
            pp = math::sqrt(2.0 * nf) * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if math::abs(z - z1) <= 1e-15 * math::abs(z).max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { operation: "Gauss-Hermite nodes", iterations: 100 });
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    x.reverse();
    w.reverse();
    Ok((x, w))
}

/// A real function on `spin(n)` in lexicographic pair coordinates.
pub trait Integrand: Sync {
    fn dimension(&self) -> usize;
    fn value(&self, coords: &[f64]) -> Result<f64>;
}

impl Integrand for Evaluator<'_> {
    fn dimension(&self) -> usize {
        self.composite().dimension
    }

    fn value(&self, coords: &[f64]) -> Result<f64> {
        self.eval(coords)
    }
}

/// Wraps a closure as an [`Integrand`].
pub struct Pointwise<F> {
    dimension: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Result<f64> + Sync> Pointwise<F> {
    pub fn new(dimension: usize, f: F) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(Self { dimension, f })
    }
}

impl<F: Fn(&[f64]) -> Result<f64> + Sync> Integrand for Pointwise<F> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, coords: &[f64]) -> Result<f64> {
        (self.f)(coords)
    }
}

/// Partial sums over a node range, indexed by blade mask.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSum {
    pub sum: Vec<f64>,
    pub sum_sq: Vec<f64>,
    pub skipped: usize,
}

impl PartialSum {
    fn zero(size: usize) -> Self {
        Self { sum: vec![0.0; size], sum_sq: vec![0.0; size], skipped: 0 }
    }

    /// `left + right`, the only combination step of the summation tree.
    pub fn combine(mut left: Self, right: &Self) -> Self {
        left.sum.iter_mut().zip(&right.sum).for_each(|(a, b)| *a += b);
        left.sum_sq.iter_mut().zip(&right.sum_sq).for_each(|(a, b)| *a += b);
        left.skipped += right.skipped;
        left
    }
}

/// Midpoint of a node range, or `None` for a leaf.
pub fn split(lo: usize, hi: usize) -> Option<usize> {
    if hi - lo <= LEAF_SIZE {
        None
    } else {
        Some(lo + (hi - lo) / 2)
    }
}

/// Everything needed to evaluate node contributions independently.
pub struct QuadraturePlan<'a, I: Integrand + ?Sized> {
    integrand: &'a I,
    n: usize,
    d: usize,
    t: f64,
    spec: QuadratureSpec,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    table: EvenCliffordTable,
}

impl<'a, I: Integrand + ?Sized> QuadraturePlan<'a, I> {
    pub fn new(integrand: &'a I, t: f64, spec: QuadratureSpec) -> Result<Self> {
        let n = integrand.dimension();
        check_dimension(n)?;
        if n > 4 {
            return Err(Error::InfeasibleDimension(n));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidParameter("variance parameter t must be positive"));
        }
        spec.validate()?;
        let (nodes, weights) = match spec.rule {
            QuadratureRule::GaussHermite { order } => {
                let (x, w) = gauss_hermite(order)?;
                let scale = 2.0 * math::sqrt(t);
                let norm = 1.0 / math::sqrt(PI);
                (x.into_iter().map(|x| x * scale).collect(), w.into_iter().map(|w| w * norm).collect())
            }
            QuadratureRule::MonteCarlo { .. } => (Vec::new(), Vec::new()),
        };
        Ok(Self { integrand, n, d: n * (n - 1) / 2, t, spec, nodes, weights, table: EvenCliffordTable::new(n)? })
    }

    pub fn len(&self) -> usize {
        match self.spec.rule {
            QuadratureRule::GaussHermite { order } => order.pow(self.d as u32),
            QuadratureRule::MonteCarlo { samples, .. } => samples,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates and weight of node `index`.
    fn node(&self, index: usize, coords: &mut [f64]) -> f64 {
        match self.spec.rule {
            QuadratureRule::GaussHermite { order } => {
                let mut rest = index;
                let mut weight = 1.0;
                for c in coords.iter_mut() {
                    let k = rest % order;
                    rest /= order;
                    *c = self.nodes[k];
                    weight *= self.weights[k];
                }
                weight
            }
            QuadratureRule::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index as u64);
                let sigma = math::sqrt(2.0 * self.t);
                for c in coords.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *c = sigma * z;
                }
                1.0 / samples as f64
            }
        }
    }

    /// Sum of weighted contributions `w Ψ(A) σ(exp_C A)` over `lo..hi`,
    /// before the `δ_t` rescaling.
    pub fn leaf(&self, lo: usize, hi: usize) -> Result<PartialSum> {
        let size = 1usize << self.n;
        let mut acc = PartialSum::zero(size);
        let mut coords = vec![0.0; self.d];
        for index in lo..hi {
            let weight = self.node(index, &mut coords);
            if let Some(r) = self.spec.support_radius {
                if coords.iter().map(|x| x * x).sum::<f64>() > r * r {
                    acc.skipped += 1;
                    continue;
                }
            }
            let psi = self.integrand.value(&coords)?;
            if psi == 0.0 {
                continue;
            }
            let e = self.table.exp_spin(&coords, EXP_TOLERANCE)?;
            let mc = matches!(self.spec.rule, QuadratureRule::MonteCarlo { .. });
            for (mask, x) in e.iter().enumerate() {
                if *x != 0.0 {
                    let v = psi * x;
                    acc.sum[mask] += weight * v;
                    if mc {
                        acc.sum_sq[mask] += weight * v * v;
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Applies `δ_t` and packages the result.
    pub fn finish(&self, total: PartialSum) -> Result<IntegralResult> {
        let scale = |mask: usize| math::powf(self.t, -((mask as u32).count_ones() as f64) / 2.0);
        let coeffs = total.sum.iter().enumerate().map(|(m, x)| Complex64::new(x * scale(m), 0.0)).collect();
        let value = Multivector::from_dense(self.n, coeffs)?;
        let standard_error = match self.spec.rule {
            QuadratureRule::MonteCarlo { samples, .. } => {
                let nf = samples as f64;
                let worst = total
                    .sum
                    .iter()
                    .zip(&total.sum_sq)
                    .enumerate()
                    .map(|(m, (mean, sq))| {
                        let var = (sq - mean * mean).max(0.0) * nf / (nf - 1.0);
                        math::sqrt(var / nf) * scale(m)
                    })
                    .fold(0.0, f64::max);
                Some(worst)
            }
            QuadratureRule::GaussHermite { .. } => None,
        };
        Ok(IntegralResult { value, nodes: self.len(), skipped: total.skipped, standard_error })
    }

    /// Sequential evaluation along the summation tree.
    pub fn integrate(&self) -> Result<IntegralResult> {
        let total = self.reduce(0, self.len())?;
        self.finish(total)
    }

    fn reduce(&self, lo: usize, hi: usize) -> Result<PartialSum> {
        match split(lo, hi) {
            None => self.leaf(lo, hi),
            Some(mid) => {
                let left = self.reduce(lo, mid)?;
                let right = self.reduce(mid, hi)?;
                Ok(PartialSum::combine(left, &right))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: Multivector,
    pub nodes: usize,
    /// Nodes outside the support radius.
    pub skipped: usize,
    /// Largest per-blade standard error (Monte Carlo only).
    pub standard_error: Option<f64>,
}

/// Gaussian–Grassmann integral of `Ψ` at variance parameter `t`.
pub fn gauss_grassmann_integral<I: Integrand + ?Sized>(psi: &I, t: f64, spec: QuadratureSpec) -> Result<IntegralResult> {
    QuadraturePlan::new(psi, t, spec)?.integrate()
}

/// One row of a localization study.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationRow {
    pub t: f64,
    pub value: Multivector,
    pub error: f64,
}

/// Integrals on a `t`-grid against the Grassmann value `Ψ(2e∧e*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationReport {
    pub target: EvenForm,
    pub rows: Vec<LocalizationRow>,
    pub fit: ConvergenceFit,
}

impl LocalizationReport {
    /// Fails unless the fitted order is at least one and the error at the
    /// smallest `t` is within `tolerance`.
    pub fn check(&self, tolerance: f64) -> Result<()> {
        if !self.fit.at_least(1.0) {
            return Err(Error::NoConvergence { fitted_order: self.fit.order.unwrap_or(f64::INFINITY) });
        }
        let last = self.finest();
        if !(last.error <= tolerance) {
            return Err(Error::WrongLimit { error: last.error, tolerance });
        }
        Ok(())
    }

    /// Row with the smallest `t`.
    pub fn finest(&self) -> &LocalizationRow {
        self.rows.iter().min_by(|a, b| a.t.total_cmp(&b.t)).expect("non-empty grid")
    }

    /// Error of the linear extrapolation to `t = 0` through the two
    /// smallest `t`; it removes the `O(t)` term of the integral.
    pub fn extrapolated_error(&self) -> f64 {
        let mut rows: Vec<&LocalizationRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.t.total_cmp(&b.t));
        let (a, b) = (rows[0], rows[1]);
        let w = a.t / (b.t - a.t);
        let limit = &a.value.scale(1.0 + w) - &b.value.scale(w);
        limit.max_abs_diff(&self.target.to_multivector())
    }
}

/// Runs the localization study, integrating with a caller-supplied routine
/// (sequential or parallel) for each `t`.
pub fn localization_study_with(
    psi: &AnalyticComposite,
    t_grid: &[f64],
    spec: QuadratureSpec,
    mut integrate: impl FnMut(&QuadraturePlan<'_, Evaluator<'_>>) -> Result<IntegralResult>,
) -> Result<LocalizationReport> {
    if t_grid.len() < 2 {
        return Err(Error::InvalidParameter("localization needs two or more t values"));
    }
    let evaluator = psi.evaluator()?;
    let target = evaluator.grassmann_eval(&SpinElement::zero(psi.dimension)?, 2.0)?;
    let target_mv = target.to_multivector();
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let plan = QuadraturePlan::new(&evaluator, t, spec)?;
        let value = integrate(&plan)?.value;
        let error = value.max_abs_diff(&target_mv);
        rows.push(LocalizationRow { t, value, error });
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let fit = fit_order(&ts, &errs)?;
    Ok(LocalizationReport { target, rows, fit })
}

/// Sequential localization study.
pub fn localization_limit_check(psi: &AnalyticComposite, t_grid: &[f64], spec: QuadratureSpec) -> Result<LocalizationReport> {
    localization_study_with(psi, t_grid, spec, |plan| plan.integrate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::ScalarExpr;

    #[test]
    fn gauss_hermite_moments() {
        for order in [1, 2, 5, 7, 9, 20] {
            let (x, w) = gauss_hermite(order).unwrap();
            let m0: f64 = w.iter().sum();
            assert!((m0 - PI.sqrt()).abs() < 1e-13, "order {order}");
            if order >= 2 {
                let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
                assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-13);
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn constant_integrand_in_dimension_two() {
        let one = AnalyticComposite::new(2, ScalarExpr::Const(1.0)).unwrap();
        let ev = one.evaluator().unwrap();
        for t in [0.3, 0.05] {
            let r = gauss_grassmann_integral(&ev, t, QuadratureSpec::gauss_hermite(30)).unwrap();
            assert!((r.value.coeff(0).re - (-t).exp()).abs() < 1e-13);
            assert!(r.value.coeff(0b11).norm() < 1e-13);
        }
    }

    #[test]
    fn linear_integrand_in_dimension_two() {
        let psi = AnalyticComposite::new(2, ScalarExpr::coord(1, 2)).unwrap();
        let ev = psi.evaluator().unwrap();
        let t = 0.1;
        let r = gauss_grassmann_integral(&ev, t, QuadratureSpec::gauss_hermite(30)).unwrap();
        // E[a sin a] = 2t e^{−t} for a ~ N(0, 2t).
        assert!((r.value.coeff(0b11).re - 2.0 * (-t).exp()).abs() < 1e-12);
    }

    #[test]
    fn exactness_claim_is_checked() {
        let spec = QuadratureSpec::gauss_hermite(3).claiming_exactness(6);
        let one = AnalyticComposite::new(2, ScalarExpr::Const(1.0)).unwrap();
        let ev = one.evaluator().unwrap();
        assert!(matches!(gauss_grassmann_integral(&ev, 0.1, spec), Err(Error::UnderResolved { required: 4, order: 3 })));
        let six = AnalyticComposite::new(6, ScalarExpr::Const(1.0)).unwrap();
        let ev6 = six.evaluator().unwrap();
        assert!(matches!(
            gauss_grassmann_integral(&ev6, 0.1, QuadratureSpec::gauss_hermite(3)),
            Err(Error::InfeasibleDimension(6))
        ));
    }

    #[test]
    fn monte_carlo_is_reproducible_and_close() {
        let one = AnalyticComposite::new(2, ScalarExpr::Const(1.0)).unwrap();
        let ev = one.evaluator().unwrap();
        let spec = QuadratureSpec::monte_carlo(4000, 11);
        let a = gauss_grassmann_integral(&ev, 0.2, spec).unwrap();
        let b = gauss_grassmann_integral(&ev, 0.2, spec).unwrap();
        assert_eq!(a, b);
        let se = a.standard_error.unwrap();
        assert!((a.value.coeff(0).re - (-0.2f64).exp()).abs() < 5.0 * se);
    }
}
