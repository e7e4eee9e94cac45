use std::f64::consts::PI;
use std::path::Path;

use getzler_core::exterior::{blade_indices, Multivector, Vector};
use getzler_core::geometry::theorem2_sides;
use getzler_core::getzler::{ahat_form, index_density, mehler_kernel};
use getzler_core::matrix::Coeff;
use getzler_core::nilpotent::EvenForm;
use getzler_core::oracles::ahat_series_oracle;
use serde_json::{json, Value};

use crate::curvature_file::CurvatureFile;
use crate::report::{Check, Report, Table};
use crate::InputError;

pub const ORACLE_TOLERANCE: f64 = 1e-10;

pub fn blade_label(mask: u32) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    blade_indices(mask).iter().map(|i| format!("e{i}")).collect::<Vec<_>>().join("^")
}

/// Every even blade, grouped by degree, optionally restricted to one degree.
pub fn form_table(name: &str, form: &EvenForm, degree: Option<usize>) -> Table {
    let n = form.dimension();
    let mut masks: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() % 2 == 0).collect();
    masks.sort_by_key(|m| (m.count_ones(), blade_indices(*m)));
    let mut table = Table::new(name, &["degree", "blade", "coefficient"]);
    for m in masks {
        let d = m.count_ones() as usize;
        if degree.is_some_and(|k| k != d) {
            continue;
        }
        table.push(vec![json!(d), json!(blade_label(m)), json!(form.coeff(m))]);
    }
    table
}

/// Non-zero coefficients as `{blade: [re, im]}`.
pub fn multivector_json(m: &Multivector) -> Value {
    let map = m
        .terms()
        .filter(|(_, c)| c.norm() != 0.0)
        .map(|(mask, c)| (blade_label(mask), json!([c.re, c.im])))
        .collect::<serde_json::Map<_, _>>();
    Value::Object(map)
}

pub fn even_form_json(f: &EvenForm) -> Value {
    multivector_json(&f.to_multivector())
}

fn failure(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

pub fn ahat(file: &Path, degree: Option<usize>, density: bool) -> Result<Report, InputError> {
    let (curv, bytes) = CurvatureFile::load(file)?;
    let n = curv.dimension;
    if let Some(k) = degree {
        if k % 2 == 1 || k > n {
            return Err(InputError::Usage(format!("--degree must be even and at most {n}, found {k}")));
        }
    }
    let flags = json!({ "degree": degree, "density": density }).to_string();
    let mut report = Report::new("ahat", &[b"ahat", &bytes, flags.as_bytes()]);

    match (ahat_form(&curv.tensor), ahat_series_oracle(&curv.tensor)) {
        (Ok(form), Ok(oracle)) => {
            let err = form.max_abs_diff(&oracle);
            report.check(Check::bounded(
                "series_oracle",
                err,
                ORACLE_TOLERANCE,
                json!({ "ahat": even_form_json(&form), "oracle": even_form_json(&oracle) }),
            ));
            report.table(form_table("ahat", &form, degree));
        }
        (Err(e), _) | (_, Err(e)) => report.check(Check::failed("series_oracle", failure(e))),
    }
    if density {
        match index_density(&curv.tensor) {
            Ok(d) => {
                report.check(Check::bounded("density_real", 0.0, 0.0, Value::Null));
                let mut t = Table::new("density", &["index_density"]);
                t.push(vec![json!(d + 0.0)]);
                report.table(t);
            }
            Err(e) => report.check(Check::failed("density_real", failure(e))),
        }
    }
    Ok(report)
}

/// `(4πt)^{−n/2} Â(tR) exp(−Q/4t)` with `Â` from the power-series oracle and
/// `Q` from Grassmann evaluation of the inverse-Jacobian form at `tR`.
fn mehler_dual(curv: &CurvatureFile, v: &Vector, t: f64) -> getzler_core::Result<EvenForm> {
    let rt = curv.tensor.scale(t);
    let ahat = ahat_series_oracle(&rt)?;
    let q = theorem2_sides(v, &rt)?.lhs;
    let gauss = q.scale(-1.0 / (4.0 * t)).exp();
    Ok(ahat.try_mul(&gauss)?.scale((4.0 * PI * t).powf(-(curv.dimension as f64) / 2.0)))
}

pub fn mehler(file: &Path, v: &[f64], t: f64) -> Result<Report, InputError> {
    let (curv, bytes) = CurvatureFile::load(file)?;
    let n = curv.dimension;
    if v.len() != n {
        return Err(InputError::Usage(format!("--v needs {n} components, found {}", v.len())));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(InputError::Usage(format!("--t must be positive, found {t}")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(InputError::Usage("--v components must be finite".into()));
    }
    let vec = Vector::new(v.to_vec()).map_err(|e| InputError::Usage(e.to_string()))?;
    let flags = json!({ "v": v, "t": t }).to_string();
    let mut report = Report::new("mehler", &[b"mehler", &bytes, flags.as_bytes()]);

    let flat = (4.0 * PI * t).powf(-(n as f64) / 2.0) * (-vec.norm_sq() / (4.0 * t)).exp();
    let mut sanity = Table::new("flat", &["quantity", "value"]);
    sanity.push(vec![json!("flat_gaussian"), json!(flat)]);

    match mehler_kernel(&curv.tensor, &vec, t) {
        Ok(k) => {
            let err = (k.coeff(0) - flat).abs();
            report.check(Check::bounded(
                "flat_part",
                err,
                1e-14 * flat,
                json!({ "degree_zero": k.coeff(0), "flat_gaussian": flat }),
            ));
            match mehler_dual(&curv, &vec, t) {
                Ok(dual) => report.check(Check::bounded(
                    "dual_path",
                    k.max_abs_diff(&dual),
                    ORACLE_TOLERANCE,
                    json!({ "mehler": even_form_json(&k), "dual": even_form_json(&dual) }),
                )),
                Err(e) => report.check(Check::failed("dual_path", failure(e))),
            }
            sanity.push(vec![json!("degree_zero"), json!(k.coeff(0))]);
            report.table(form_table("mehler", &k, None));
        }
        Err(e) => report.check(Check::failed("mehler_kernel", failure(e))),
    }
    report.table(sanity);
    Ok(report)
}
