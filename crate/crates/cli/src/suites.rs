//! Invariant suites behind `getzler verify`. Samples are drawn from
//! independent ChaCha streams keyed by the seed, so the report does not
//! depend on the number of worker threads.

use clap::ValueEnum;
use getzler_core::clifford::{exp_clifford, sigma};
use getzler_core::convergence::fit_order;
use getzler_core::exterior::Multivector;
use getzler_core::geometry::{coth_form_composite, omega_from_riemann, phi0_composite, theorem1_sides, theorem2_sides};
use getzler_core::getzler::{ahat_form, curvature_radius, heat_symbol_radius, theorem3_check_with};
use getzler_core::integrator::{localization_study_with, QuadratureSpec};
use getzler_core::nilpotent::{h_operator, AnalyticComposite, ScalarExpr};
use getzler_core::oracles::{ahat_series_oracle, free_heat_kernel, mehler_1d_closed, mehler_1d_oracle};
use getzler_core::sample::{random_multivector, random_riemann, random_spin_element, random_vector};
use getzler_core::spin_rep::{chirality, supertrace_identity_error, SpinorBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{blade_label, even_form_json, multivector_json};
use crate::parallel;
use crate::report::{Check, Report, Table};
use crate::InputError;

pub const SUPERTRACE_TOLERANCE: f64 = 1e-10;
pub const H_OPERATOR_TOLERANCE: f64 = 1e-8;
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
pub const MEHLER_1D_TOLERANCE: f64 = 1e-8;
pub const THEOREM3_LIMIT_TOLERANCE: f64 = 1e-4;

pub const T_GRID: [f64; 4] = [0.2, 0.1, 0.05, 0.02];
pub const U_GRID: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Supertrace,
    Hoperator,
    Theorem1,
    Theorem2,
    Theorem3,
    Localization,
    Oracle1d,
}

impl Suite {
    pub fn dimensions(self) -> &'static [usize] {
        match self {
            Suite::Supertrace => &[2, 4, 6],
            Suite::Oracle1d => &[2, 4, 6],
            _ => &[2, 4],
        }
    }
}

/// Gauss–Hermite order per axis for integrals over `spin(n)`.
pub fn gh_order(n: usize) -> usize {
    if n == 2 {
        40
    } else {
        6
    }
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Largest error over the samples, with the offending sample attached.
fn worst(name: &str, samples: Vec<getzler_core::Result<(f64, Value)>>, tolerance: f64) -> Check {
    let mut max = (f64::NEG_INFINITY, Value::Null);
    for (i, s) in samples.into_iter().enumerate() {
        match s {
            Ok((e, v)) => {
                if !(e <= max.0) {
                    max = (e, json!({ "sample": i, "error": e, "input": v }));
                }
            }
            Err(e) => return Check::failed(name, json!({ "sample": i, "error": e.to_string() })),
        }
    }
    Check::bounded(name, max.0, tolerance, max.1)
}

fn sampled<T: Send>(seed: u64, count: u64, f: impl Fn(&mut ChaCha8Rng) -> T + Sync) -> Vec<T> {
    (0..count).into_par_iter().map(|i| f(&mut stream(seed, i))).collect()
}

pub fn verify(suite: Suite, seed: u64, n: usize) -> Result<Report, InputError> {
    if !suite.dimensions().contains(&n) {
        return Err(InputError::Usage(format!(
            "suite {suite:?} runs for n in {:?}, found {n}",
            suite.dimensions()
        )));
    }
    let flags = json!({ "suite": suite, "seed": seed, "n": n }).to_string();
    let mut report = Report::new("verify", &[b"verify", flags.as_bytes()]);
    match suite {
        Suite::Supertrace => supertrace(&mut report, seed, n),
        Suite::Hoperator => hoperator(&mut report, seed, n),
        Suite::Theorem1 => theorem1(&mut report, seed, n),
        Suite::Theorem2 => theorem2(&mut report, seed, n),
        Suite::Theorem3 => theorem3(&mut report, seed, n),
        Suite::Localization => localization(&mut report, seed, n),
        Suite::Oracle1d => oracle1d(&mut report, seed),
    }
    Ok(report)
}

fn supertrace(report: &mut Report, seed: u64, n: usize) {
    let basis = match SpinorBasis::new(n) {
        Ok(b) => b,
        Err(e) => return report.check(Check::failed("blades", json!({ "error": e.to_string() }))),
    };
    let gamma = chirality(n).expect("even dimension");
    let blades: Vec<_> = (0..1u32 << n)
        .into_par_iter()
        .map(|mask| {
            let omega = Multivector::from_dense(
                n,
                (0..1u32 << n).map(|m| if m == mask { 1.0.into() } else { 0.0.into() }).collect(),
            )?;
            Ok((supertrace_identity_error(&basis, &gamma, &omega)?, json!(blade_label(mask))))
        })
        .collect();
    report.check(worst("blades", blades, SUPERTRACE_TOLERANCE));
    let random = sampled(seed, 100, |rng| {
        let omega = random_multivector(rng, n)?;
        Ok((supertrace_identity_error(&basis, &gamma, &omega)?, multivector_json(&omega)))
    });
    report.check(worst("random", random, SUPERTRACE_TOLERANCE));
}

fn hoperator(report: &mut Report, seed: u64, n: usize) {
    let samples = sampled(seed, 50, |rng| {
        let a = random_spin_element(rng, n, 0.5)?;
        let lhs = sigma(&exp_clifford(&a, 1e-17)?);
        let rhs = h_operator(&a)?.apply(&a.to_form().exp_wedge())?;
        Ok((lhs.max_abs_diff(&rhs), json!(a)))
    });
    report.check(worst("sigma_exp_equals_h_exp_wedge", samples, H_OPERATOR_TOLERANCE));
}

fn theorem1(report: &mut Report, seed: u64, n: usize) {
    let samples = sampled(seed, 20, |rng| {
        let r = random_riemann(rng, n, 1.0)?;
        Ok((theorem1_sides(&r)?.error(), json!(r)))
    });
    report.check(worst("phi0_at_2ee_equals_ahat", samples, IDENTITY_TOLERANCE));
    let samples = sampled(seed ^ 0x5eed, 20, |rng| {
        let r = random_riemann(rng, n, 1.0)?;
        Ok((ahat_form(&r)?.max_abs_diff(&ahat_series_oracle(&r)?), json!(r)))
    });
    report.check(worst("ahat_series_oracle", samples, IDENTITY_TOLERANCE));
}

fn theorem2(report: &mut Report, seed: u64, n: usize) {
    let samples = sampled(seed, 20, |rng| {
        let r = random_riemann(rng, n, 1.0)?;
        let v = random_vector(rng, n, 1.5)?;
        Ok((theorem2_sides(&v, &r)?.error(), json!({ "R": r, "v": v })))
    });
    report.check(worst("jacobian_form_equals_coth_form", samples, IDENTITY_TOLERANCE));
}

#[allow(clippy::redundant_closure)]
fn theorem3(report: &mut Report, seed: u64, n: usize) {
    let mut rng = stream(seed, 0);
    let (r, v) = match (random_riemann(&mut rng, n, 0.8), random_vector(&mut rng, n, 1.0)) {
        (Ok(r), Ok(v)) => (r, v),
        (Err(e), _) | (_, Err(e)) => return report.check(Check::failed("sample", json!({ "error": e.to_string() }))),
    };
    let spec = QuadratureSpec::gauss_hermite(gh_order(n));
    let input = json!({ "R": r, "v": v });
    let study = match theorem3_check_with(&r, &v, &U_GRID, spec, |plan| parallel::integrate(plan)) {
        Ok(s) => s,
        Err(e) => return report.check(Check::failed("theorem3", json!({ "error": e.to_string(), "input": input }))),
    };
    let mut table = Table::new("theorem3", &["u", "error_u^n", "error_u^(n-1)"]);
    for row in &study.rows {
        table.push(vec![json!(row.u), json!(row.error), json!(row.error_lower)]);
    }
    let last = study.rows.last().expect("non-empty grid");
    let details = json!({
        "input": input,
        "errors": study.rows.iter().map(|r| r.error).collect::<Vec<_>>(),
        "errors_lower": study.rows.iter().map(|r| r.error_lower).collect::<Vec<_>>(),
    });
    report.check(Check::order(
        "u^n_rescaling_converges",
        study.fit.order,
        ">= 1",
        study.fit.at_least(1.0),
        last.error,
        details.clone(),
    ));
    report.check(Check::order(
        "u^(n-1)_rescaling_diverges",
        study.fit_lower.order,
        "<= 0",
        study.fit_lower.order.is_some_and(|p| p <= 0.0),
        last.error_lower,
        details.clone(),
    ));
    report.check(Check::bounded(
        "limit_is_mehler_kernel",
        last.error,
        THEOREM3_LIMIT_TOLERANCE,
        json!({ "input": details, "mehler": even_form_json(&study.target), "value": multivector_json(&last.value) }),
    ));
    report.table(table);
}

struct Entry {
    name: &'static str,
    psi: AnalyticComposite,
    /// Radius of the ball on which `psi` is analytic.
    radius: f64,
    input: Value,
}

/// Composites with a known Grassmann value at `2e∧e*`.
fn localization_corpus(seed: u64, n: usize) -> getzler_core::Result<Vec<Entry>> {
    let mut rng = stream(seed, 0);
    let r = random_riemann(&mut rng, n, 0.8)?;
    let v = random_vector(&mut rng, n, 1.0)?;
    let omega = omega_from_riemann(&r)?;
    let mut corpus = Vec::new();
    if n == 2 {
        let psi = AnalyticComposite::new(n, ScalarExpr::Const(1.0))?;
        corpus.push(Entry { name: "constant", psi, radius: f64::INFINITY, input: Value::Null });
    }
    corpus.push(Entry {
        name: "phi0",
        psi: phi0_composite(&omega)?,
        radius: heat_symbol_radius(&omega)?,
        input: json!({ "R": r }),
    });
    corpus.push(Entry {
        name: "coth_form",
        psi: coth_form_composite(&v, &omega)?,
        radius: curvature_radius(&omega) * (1.0 - 1e-9),
        input: json!({ "R": r, "v": v }),
    });
    Ok(corpus)
}

#[allow(clippy::redundant_closure)]
fn localization(report: &mut Report, seed: u64, n: usize) {
    let corpus = match localization_corpus(seed, n) {
        Ok(c) => c,
        Err(e) => return report.check(Check::failed("corpus", json!({ "error": e.to_string() }))),
    };
    let mut table = Table::new("localization", &["composite", "t", "error"]);
    let mut extrapolated = Table::new("extrapolated", &["composite", "error"]);
    for Entry { name, psi, radius, input } in corpus {
        let mut spec = QuadratureSpec::gauss_hermite(gh_order(n));
        if radius.is_finite() {
            spec = spec.with_support_radius(radius);
        }
        let study = match localization_study_with(&psi, &T_GRID, spec, |plan| parallel::integrate(plan)) {
            Ok(s) => s,
            Err(e) => {
                report.check(Check::failed(name, json!({ "error": e.to_string(), "input": input })));
                continue;
            }
        };
        for row in &study.rows {
            table.push(vec![json!(name), json!(row.t), json!(row.error)]);
        }
        extrapolated.push(vec![json!(name), json!(study.extrapolated_error())]);
        report.check(Check::order(
            format!("{name}_converges"),
            study.fit.order,
            ">= 1",
            study.fit.at_least(1.0),
            study.finest().error,
            json!({
                "input": input,
                "target": even_form_json(&study.target),
                "errors": study.rows.iter().map(|r| r.error).collect::<Vec<_>>(),
            }),
        ));
    }
    report.table(table);
    report.table(extrapolated);
}

fn oracle1d(report: &mut Report, seed: u64) {
    let at = |a: f64, t: f64, x: f64, y: f64| -> getzler_core::Result<(f64, Value)> {
        let m = mehler_1d_oracle(a, t, x, y)?;
        Ok((m.relative_error(), json!({ "a": a, "t": t, "x": x, "y": y, "closed": m.closed, "spectral": m.spectral, "terms": m.terms })))
    };
    report.check(worst("reference_point", vec![at(1.0, 0.5, 0.3, -0.2)], MEHLER_1D_TOLERANCE));
    let samples = sampled(seed, 20, |rng| {
        at(rng.random_range(0.2..2.0), rng.random_range(0.1..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
    });
    report.check(worst("random_points", samples, MEHLER_1D_TOLERANCE));

    let (t, x, y) = (0.5, 0.3, -0.2);
    let free = free_heat_kernel(t, x, y);
    let scales = [1e-1, 1e-2, 1e-3];
    let errors: Vec<f64> = scales.iter().map(|&a| mehler_1d_closed(a, t, x, y).map_or(f64::NAN, |k| (k - free).abs())).collect();
    let mut table = Table::new("free_limit", &["a", "error"]);
    for (a, e) in scales.iter().zip(&errors) {
        table.push(vec![json!(a), json!(e)]);
    }
    match fit_order(&scales, &errors) {
        Ok(fit) => report.check(Check::order(
            "free_limit_is_second_order",
            fit.order,
            ">= 1.9",
            fit.at_least(1.9),
            *errors.last().expect("three scales"),
            json!({ "a": scales, "errors": errors }),
        )),
        Err(e) => report.check(Check::failed("free_limit_is_second_order", json!({ "error": e.to_string() }))),
    }
    report.table(table);
}
