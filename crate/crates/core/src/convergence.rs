//! Power-law fits `error ≈ C·h^p` for convergence studies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

/// Errors at or below this level count as exact agreement.
pub const EXACT_FLOOR: f64 = 1e-13;

/// Allowance below a required order. An error `C·h·(1 − ch)` fitted on a
/// grid reaching `h = 0.2` has a least-squares slope just under one.
pub const ORDER_SLACK: f64 = 0.1;

/// Least-squares fit of `ln error = ln C + p ln h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    /// Fitted order `p`; `None` when every error is at the exact floor.
    pub order: Option<f64>,
    /// Fitted constant `C`.
    pub constant: Option<f64>,
}

impl ConvergenceFit {
    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Whether the fit shows at least the given order, within
    /// [`ORDER_SLACK`] (exact counts).
    pub fn at_least(&self, order: f64) -> bool {
        self.order.is_none_or(|p| p >= order - ORDER_SLACK)
    }
}

/// Fits errors against step sizes; needs at least two points with positive steps.
pub fn fit_order(steps: &[f64], errors: &[f64]) -> Result<ConvergenceFit> {
    if steps.len() != errors.len() {
        return Err(Error::DimensionMismatch { expected: steps.len(), found: errors.len() });
    }
    if steps.len() < 2 || steps.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidParameter("convergence fit needs two or more positive steps"));
    }
    if errors.iter().all(|e| *e <= EXACT_FLOOR) {
        return Ok(ConvergenceFit { order: None, constant: None });
    }
    let floor = |e: f64| e.max(EXACT_FLOOR * 1e-3);
    let m = steps.len() as f64;
    let xs: alloc::vec::Vec<f64> = steps.iter().map(|h| math::ln(*h)).collect();
    let ys: alloc::vec::Vec<f64> = errors.iter().map(|e| math::ln(floor(*e))).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("convergence fit needs distinct steps"));
    }
    let p = sxy / sxx;
    Ok(ConvergenceFit { order: Some(p), constant: Some(math::exp(my - p * mx)) })
}
