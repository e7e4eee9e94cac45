//! Getzler rescaling of polynomial kernel germs, symbol extraction and the
//! supertrace rule, together with the Mehler kernel, the Â-form, the index
//! density and the numerical model of the rescaled heat kernel.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::convergence::{fit_order, ConvergenceFit};
use crate::error::{Error, Result};
use crate::exterior::{check_dimension, same_dimension, Multivector, Vector};
use crate::geometry::{ahat_of, omega_from_riemann, riemann_form_matrix, CurvatureMap, RiemannTensor};
use crate::integrator::{IntegralResult, QuadraturePlan, QuadratureSpec};
use crate::math::{self, PI};
use crate::matrix::Coeff;
use crate::nilpotent::{analytic_apply, AnalyticComposite, EvenForm, Evaluator, MatrixExpr, Primitive, ScalarExpr};
use crate::spin_rep::supertrace_constant;

/// Imaginary residue tolerated in [`index_density`].
pub const IMAGINARY_TOLERANCE: f64 = 1e-12;

/// Monomial `v^α t^p u^q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub alpha: Vec<u32>,
    pub t_power: i32,
    pub u_power: i32,
}

impl Monomial {
    pub fn new(alpha: Vec<u32>, t_power: i32, u_power: i32) -> Self {
        Self { alpha, t_power, u_power }
    }

    pub fn constant(n: usize) -> Self {
        Self::new(alpha_zero(n), 0, 0)
    }

    pub fn v_degree(&self) -> u32 {
        self.alpha.iter().sum()
    }
}

fn alpha_zero(n: usize) -> Vec<u32> {
    alloc::vec![0; n]
}

/// Finite germ `Σ c_{α,p,q} v^α t^p u^q` with multivector coefficients,
/// optionally multiplied by the Gaussian `(4πt)^{−n/2} e^{−|v|²/4t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelExpansion {
    dim: usize,
    terms: BTreeMap<Monomial, Multivector>,
    prefactor: bool,
}

impl KernelExpansion {
    pub fn new(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { dim: n, terms: BTreeMap::new(), prefactor: false })
    }

    /// The germ `ω` with no `v`, `t` or `u` dependence.
    pub fn from_multivector(omega: &Multivector) -> Result<Self> {
        let mut k = Self::new(omega.dimension())?;
        k.add_term(Monomial::constant(omega.dimension()), omega)?;
        Ok(k)
    }

    pub fn with_prefactor(mut self) -> Self {
        self.prefactor = true;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn has_prefactor(&self) -> bool {
        self.prefactor
    }

    /// Adds `coeff · v^α t^p u^q`, merging equal monomials.
    pub fn add_term(&mut self, monomial: Monomial, coeff: &Multivector) -> Result<()> {
        same_dimension(self.dim, coeff.dimension())?;
        same_dimension(self.dim, monomial.alpha.len())?;
        match self.terms.get_mut(&monomial) {
            Some(c) => *c += coeff,
            None => {
                self.terms.insert(monomial, coeff.clone());
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Multivector)> {
        self.terms.iter()
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Multivector::is_zero)
    }

    /// Value at `(v, t, u)`, prefactor included.
    pub fn evaluate(&self, v: &Vector, t: f64, u: f64) -> Result<Multivector> {
        same_dimension(self.dim, v.dimension())?;
        let mut out = Multivector::zero(self.dim)?;
        for (m, c) in &self.terms {
            let mut w = math::powi(t, m.t_power) * math::powi(u, m.u_power);
            for (x, a) in v.as_slice().iter().zip(&m.alpha) {
                w *= math::powi(*x, *a as i32);
            }
            out += &c.scale(w);
        }
        if self.prefactor {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter("Gaussian prefactor needs t > 0"));
            }
            out = out.scale(gaussian(self.dim, v, t));
        }
        Ok(out)
    }

    /// `κ` at `v = 0`, `u = 1` (the diagonal germ); needs a `t`-free kernel.
    pub fn diagonal(&self) -> Result<Multivector> {
        if self.prefactor || self.terms.keys().any(|m| m.t_power != 0) {
            return Err(Error::TimeDependentKernel);
        }
        self.evaluate(&Vector::zero(self.dim), 1.0, 1.0)
    }

    fn map_coefficients(&self, f: impl Fn(&Monomial, &Multivector) -> Multivector) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))).collect();
        Self { dim: self.dim, terms, prefactor: self.prefactor }
    }

    /// Getzler exponents `q + |α| − j` of every non-zero blade component,
    /// with `parabolic` adding `2p` and `−n` for the prefactor.
    fn exponents(&self, parabolic: bool) -> Result<Vec<(i32, &Monomial, usize)>> {
        if self.prefactor && !parabolic {
            return Err(Error::PrefactorRequiresParabolic);
        }
        let shift = if self.prefactor { -(self.dim as i32) } else { 0 };
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let base = m.u_power + m.v_degree() as i32 + if parabolic { 2 * m.t_power + shift } else { 0 };
            for (mask, z) in c.terms() {
                if z != Complex64::new(0.0, 0.0) {
                    out.push((base - mask.count_ones() as i32, m, mask as usize));
                }
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyKernel);
        }
        Ok(out)
    }

    fn order_and_symbol(&self, parabolic: bool) -> Result<(i32, KernelExpansion)> {
        let exps = self.exponents(parabolic)?;
        let order = -exps.iter().map(|e| e.0).min().expect("non-empty");
        let mut symbol = KernelExpansion { dim: self.dim, terms: BTreeMap::new(), prefactor: self.prefactor };
        for (e, m, mask) in exps {
            if e == -order {
                let key = Monomial::new(m.alpha.clone(), m.t_power, 0);
                let mut c = Multivector::zero(self.dim)?;
                c.set_coeff(mask as u32, self.terms[m].coeff(mask as u32));
                symbol.add_term(key, &c)?;
            }
        }
        Ok((order, symbol))
    }
}

fn gaussian(n: usize, v: &Vector, t: f64) -> f64 {
    math::powf(4.0 * PI * t, -(n as f64) / 2.0) * math::exp(-v.norm_sq() / (4.0 * t))
}

fn check_u(u: f64) -> Result<()> {
    if u == 0.0 || !u.is_finite() {
        return Err(Error::InvalidParameter("rescaling parameter u must be finite and non-zero"));
    }
    Ok(())
}

/// `δ_u κ`: degree-`j` components times `u^{−j}`, `v`-monomials of degree
/// `d` times `u^d`, evaluated numerically into the coefficients.
pub fn getzler_rescale(kappa: &KernelExpansion, u: f64) -> Result<KernelExpansion> {
    check_u(u)?;
    if kappa.prefactor {
        return Err(Error::PrefactorRequiresParabolic);
    }
    Ok(kappa.map_coefficients(|m, c| {
        c.grade_weighted(|j| math::powi(u, -(j as i32))).scale(math::powi(u, m.v_degree() as i32))
    }))
}

/// Parabolic rescaling: [`getzler_rescale`] with `t ↦ u²t`, so `t^p`
/// contributes `u^{2p}` and the prefactor `u^{−n}`.
pub fn parabolic_rescale(kappa: &KernelExpansion, u: f64) -> Result<KernelExpansion> {
    check_u(u)?;
    let pre = if kappa.prefactor { math::powi(u, -(kappa.dim as i32)) } else { 1.0 };
    Ok(kappa.map_coefficients(|m, c| {
        let w = math::powi(u, m.v_degree() as i32 + 2 * m.t_power) * pre;
        c.grade_weighted(|j| math::powi(u, -(j as i32))).scale(w)
    }))
}

/// Getzler order `m` and symbol (the `u⁰` part of `u^m δ_u κ`, with `u`-powers
/// cleared).
pub fn getzler_order_and_symbol(kappa: &KernelExpansion) -> Result<(i32, KernelExpansion)> {
    kappa.order_and_symbol(false)
}

/// Parabolic Getzler order and symbol.
pub fn parabolic_order_and_symbol(kappa: &KernelExpansion) -> Result<(i32, KernelExpansion)> {
    kappa.order_and_symbol(true)
}

/// Supertrace of the diagonal germ from its Getzler symbol: `0` below order
/// `n`, `(2/i)^{n/2} B(σ^G(0))` at order `n`.
pub fn supertrace_from_symbol(kappa: &KernelExpansion) -> Result<Complex64> {
    if kappa.prefactor || kappa.terms.keys().any(|m| m.t_power != 0) {
        return Err(Error::TimeDependentKernel);
    }
    let n = kappa.dim;
    let (order, symbol) = getzler_order_and_symbol(kappa)?;
    if order > n as i32 {
        return Err(Error::OrderTooLarge { order, dimension: n });
    }
    if order < n as i32 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let at_zero = symbol.evaluate(&Vector::zero(n), 1.0, 1.0)?;
    Ok(supertrace_constant(n) * at_zero.berezin())
}

/// `det^{1/2}((R_x/2) / sinh(R_x/2))`.
pub fn ahat_form(r: &RiemannTensor) -> Result<EvenForm> {
    ahat_of(&riemann_form_matrix(r)?)
}

/// `(4πt)^{−n/2} det^{1/2}((tR_x/2)/sinh(tR_x/2)) exp(−⟨v, (tR_x/2) coth(tR_x/2) v⟩ / 4t)`.
pub fn mehler_kernel(r: &RiemannTensor, v: &Vector, t: f64) -> Result<EvenForm> {
    let n = r.dimension();
    same_dimension(n, v.dimension())?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("Mehler kernel needs t > 0"));
    }
    let rx = riemann_form_matrix(r)?.scale(t);
    let ahat = ahat_of(&rx)?;
    let q = analytic_apply(Primitive::XCothX, &rx.scale(0.5))?.quadratic(v.as_slice())?;
    let gauss = q.scale(-1.0).div_scalar(4.0 * t).exp();
    Ok(ahat.mul(&gauss).scale(math::powf(4.0 * PI * t, -(n as f64) / 2.0)))
}

/// `(2/i)^{n/2} (4π)^{−n/2} B(Â)`.
pub fn index_density(r: &RiemannTensor) -> Result<f64> {
    let n = r.dimension();
    let b = ahat_form(r)?.berezin();
    let z = supertrace_constant(n) * b * math::powf(4.0 * PI, -(n as f64) / 2.0);
    if math::abs(z.im) > IMAGINARY_TOLERANCE {
        return Err(Error::ResidualImaginary(z.im));
    }
    Ok(z.re)
}

/// Integrand of the rescaled heat-kernel model:
/// `exp(−¼⟨v, (τ(A·Ω)/4) coth(τ(A·Ω)/4) v⟩) · Φ₀(A) · J(A)`, with the
/// adjoint factors of `Φ₀` and `J` merged into `det^{1/2}(sinh(ad_A/2)/(ad_A/2))`.
pub fn heat_symbol_composite(v: &Vector, omega: &CurvatureMap) -> Result<AnalyticComposite> {
    let quadratic = MatrixExpr::TauCurvature.scale(0.25).apply(Primitive::XCothX).quadratic();
    let expr = quadratic.scale(-0.25).apply(Primitive::Exp)
        * MatrixExpr::AdSpin.apply(Primitive::SinhcHalf).det_pow(0.5)
        * MatrixExpr::TauCurvature.scale(0.5).apply(Primitive::SinhcHalf).det_pow(-0.5);
    AnalyticComposite::new(omega.dimension(), ScalarExpr::Const(1.0))?
        .with_vector(v.clone())?
        .with_curvature(omega.clone())?
        .replace(expr)
}

/// `κ_n = d(n+1)/3`, `d = n(n−1)/2`: the spinor Casimir `d` plus `|ρ|²` of
/// `spin(n)`. The flat Gaussian weighted by `det^{1/2}(sinh(ad/2)/(ad/2))`
/// pushes forward to the group heat kernel times `e^{−|ρ|²t}`, and the spin
/// representation decays as `e^{−dt}` under it.
pub fn casimir_shift(n: usize) -> f64 {
    let d = (n * (n - 1) / 2) as f64;
    d * (n as f64 + 1.0) / 3.0
}

/// Radius of the ball in `spin(n)` on which `sinh(ad_A/2)/(ad_A/2)` stays
/// invertible.
pub fn adjoint_radius(n: usize) -> Result<f64> {
    // ‖ad_A‖ ≤ 2√2|A| on spin(4) (ad splits over su(2) ⊕ su(2)); spin(2) is abelian.
    match n {
        2 => Ok(f64::INFINITY),
        4 => Ok(PI / math::sqrt(2.0)),
        _ => Err(Error::InfeasibleDimension(n)),
    }
}

/// Radius of the ball in `spin(n)` on which functions of `τ(A·Ω)/4` with
/// poles at `±iπ` stay analytic.
pub fn curvature_radius(omega: &CurvatureMap) -> f64 {
    let frob: f64 = omega.pairing_basis().iter().map(|m| m.frobenius() * m.frobenius()).sum();
    if frob > 0.0 {
        4.0 * PI / math::sqrt(frob)
    } else {
        f64::INFINITY
    }
}

/// Radius of the ball in `spin(n)` on which the integrand of
/// [`heat_symbol_composite`] is analytic for the given curvature.
pub fn heat_symbol_radius(omega: &CurvatureMap) -> Result<f64> {
    Ok(adjoint_radius(omega.dimension())?.min(curvature_radius(omega)) * (1.0 - 1e-9))
}

/// One grid point of the rescaled heat-kernel study.
#[derive(Clone, Debug, PartialEq)]
pub struct Theorem3Row {
    pub u: f64,
    /// `u^n δ_u k(v)` from the model.
    pub value: Multivector,
    /// Distance of `u^n δ_u k` from the Mehler kernel.
    pub error: f64,
    /// Distance of `u^{n−1} δ_u k` from the Mehler kernel.
    pub error_lower: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem3Report {
    pub target: EvenForm,
    pub rows: Vec<Theorem3Row>,
    pub fit: ConvergenceFit,
    pub fit_lower: ConvergenceFit,
}

impl Theorem3Report {
    /// Passes when `u^n δ_u k` converges with order at least one and
    /// `u^{n−1} δ_u k` does not converge.
    pub fn check(&self) -> Result<()> {
        if !self.fit.at_least(1.0) {
            return Err(Error::NoConvergence { fitted_order: self.fit.order.unwrap_or(f64::INFINITY) });
        }
        if self.fit_lower.order.is_none_or(|p| p > 0.0) {
            return Err(Error::NoConvergence { fitted_order: self.fit_lower.order.unwrap_or(f64::INFINITY) });
        }
        Ok(())
    }
}

/// Assembles `u^n δ_u k(v) = (4π)^{−n/2} e^{κ_n u²} I(u²)` on the grid, where
/// `I(s)` is the Gaussian–Grassmann integral of [`heat_symbol_composite`] at
/// variance parameter `s`, and compares with `mehler_kernel(R, v, 1)`.
pub fn theorem3_check_with(
    r: &RiemannTensor,
    v: &Vector,
    u_grid: &[f64],
    spec: QuadratureSpec,
    mut integrate: impl FnMut(&QuadraturePlan<'_, Evaluator<'_>>) -> Result<IntegralResult>,
) -> Result<Theorem3Report> {
    let n = r.dimension();
    same_dimension(n, v.dimension())?;
    if u_grid.len() < 2 || u_grid.iter().any(|u| !(*u > 0.0)) {
        return Err(Error::InvalidParameter("u-grid needs two or more positive values"));
    }
    let omega = omega_from_riemann(r)?;
    let psi = heat_symbol_composite(v, &omega)?;
    let evaluator = psi.evaluator()?;
    let spec = match spec.support_radius {
        Some(_) => spec,
        None => spec.with_support_radius(heat_symbol_radius(&omega)?),
    };
    let target = mehler_kernel(r, v, 1.0)?;
    let target_mv = target.to_multivector();
    let norm = math::powf(4.0 * PI, -(n as f64) / 2.0);
    let mut rows = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        let s = u * u;
        let plan = QuadraturePlan::new(&evaluator, s, spec)?;
        let integral = integrate(&plan)?.value;
        let value = integral.scale(norm * math::exp(casimir_shift(n) * s));
        let error = value.max_abs_diff(&target_mv);
        let error_lower = value.scale(1.0 / u).max_abs_diff(&target_mv);
        rows.push(Theorem3Row { u, value, error, error_lower });
    }
    let us: Vec<f64> = rows.iter().map(|r| r.u).collect();
    let fit = fit_order(&us, &rows.iter().map(|r| r.error).collect::<Vec<_>>())?;
    let fit_lower = fit_order(&us, &rows.iter().map(|r| r.error_lower).collect::<Vec<_>>())?;
    Ok(Theorem3Report { target, rows, fit, fit_lower })
}

/// Sequential [`theorem3_check_with`].
pub fn theorem3_check(r: &RiemannTensor, v: &Vector, u_grid: &[f64], spec: QuadratureSpec) -> Result<Theorem3Report> {
    theorem3_check_with(r, v, u_grid, spec, |plan| plan.integrate())
}

/// `(2/i)^{n/2} B(σ(ω))` against the spinor-matrix supertrace, for
/// cross-checking [`supertrace_from_symbol`].
pub fn assembled_supertrace(kappa: &KernelExpansion) -> Result<Complex64> {
    let omega = kappa.diagonal()?;
    let basis = crate::spin_rep::SpinorBasis::new(kappa.dim)?;
    let op = basis.rho(&crate::clifford::quantize(&omega))?;
    crate::spin_rep::supertrace(&op)
}
