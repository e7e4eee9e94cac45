//! Analytic primitives and their power series over nilpotent-extended rings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{self, PI};
use crate::matrix::{Coeff, Mat, RealMatrix};

use super::EvenForm;

/// Matrix with even-form entries.
pub type FormMatrix = Mat<EvenForm>;

/// Scalar analytic functions with a known expansion and radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    /// `e^x`.
    Exp,
    /// `(1 − e^{−x}) / x`.
    ExpDiff,
    /// `sinh(x/2) / (x/2)`.
    SinhcHalf,
    /// `x coth x`.
    XCothX,
    /// `tanh(x) / x`.
    TanhcX,
    /// `x / sinh x`.
    XOverSinhX,
    /// `log(x / sinh x)`.
    LogXOverSinhX,
    /// Principal logarithm.
    Log,
    /// Principal square root.
    Sqrt,
    /// Principal `x^{−1/2}`.
    InvSqrt,
}

const TERM_CAP: usize = 2000;
const NEGLIGIBLE_RUN: usize = 3;

impl Primitive {
    pub const ALL: [Primitive; 10] = [
        Primitive::Exp,
        Primitive::ExpDiff,
        Primitive::SinhcHalf,
        Primitive::XCothX,
        Primitive::TanhcX,
        Primitive::XOverSinhX,
        Primitive::LogXOverSinhX,
        Primitive::Log,
        Primitive::Sqrt,
        Primitive::InvSqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Exp => "exp",
            Primitive::ExpDiff => "(1-exp(-x))/x",
            Primitive::SinhcHalf => "sinh(x/2)/(x/2)",
            Primitive::XCothX => "x coth x",
            Primitive::TanhcX => "tanh(x)/x",
            Primitive::XOverSinhX => "x/sinh x",
            Primitive::LogXOverSinhX => "log(x/sinh x)",
            Primitive::Log => "log",
            Primitive::Sqrt => "sqrt",
            Primitive::InvSqrt => "x^(-1/2)",
        }
    }

    /// Convergence radius of the expansion at the origin (`None` for entire
    /// functions; the centred primitives report `None` here as well).
    pub fn radius(self) -> Option<f64> {
        match self {
            Primitive::XCothX | Primitive::XOverSinhX | Primitive::LogXOverSinhX => Some(PI),
            Primitive::TanhcX => Some(PI / 2.0),
            _ => None,
        }
    }

    fn is_even(self) -> bool {
        matches!(
            self,
            Primitive::SinhcHalf
                | Primitive::XCothX
                | Primitive::TanhcX
                | Primitive::XOverSinhX
                | Primitive::LogXOverSinhX
        )
    }

    fn is_centred(self) -> bool {
        matches!(self, Primitive::Log | Primitive::Sqrt | Primitive::InvSqrt)
    }

    /// Closed-form value at a real point.
    pub fn eval(self, x: f64) -> Result<f64> {
        let small = math::abs(x) < 1e-4;
        let x2 = x * x;
        Ok(match self {
            Primitive::Exp => math::exp(x),
            Primitive::ExpDiff => {
                if small {
                    1.0 - x / 2.0 + x2 / 6.0 - x2 * x / 24.0
                } else {
                    -libm::expm1(-x) / x
                }
            }
            Primitive::SinhcHalf => {
                if small {
                    1.0 + x2 / 24.0 + x2 * x2 / 1920.0
                } else {
                    math::sinh(x / 2.0) / (x / 2.0)
                }
            }
            Primitive::XCothX => {
                if small {
                    1.0 + x2 / 3.0 - x2 * x2 / 45.0
                } else {
                    x / libm::tanh(x)
                }
            }
            Primitive::TanhcX => {
                if small {
                    1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0
                } else {
                    libm::tanh(x) / x
                }
            }
            Primitive::XOverSinhX => {
                if small {
                    1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
                } else {
                    x / math::sinh(x)
                }
            }
            Primitive::LogXOverSinhX => {
                if small {
                    -x2 / 6.0 + x2 * x2 / 180.0
                } else {
                    math::ln(x / math::sinh(x))
                }
            }
            Primitive::Log => {
                if x <= 0.0 {
                    return Err(Error::NotPositive("log"));
                }
                math::ln(x)
            }
            Primitive::Sqrt => {
                if x < 0.0 {
                    return Err(Error::NotPositive("sqrt"));
                }
                math::sqrt(x)
            }
            Primitive::InvSqrt => {
                if x <= 0.0 {
                    return Err(Error::NotPositive("x^(-1/2)"));
                }
                1.0 / math::sqrt(x)
            }
        })
    }
}

/// Riemann zeta at a real `s ≥ 2` by Euler–Maclaurin summation.
pub(crate) fn zeta(s: f64) -> f64 {
    const N: usize = 16;
    // B_{2j} / (2j)!
    const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let nf = N as f64;
    let mut sum: f64 = (1..N).map(|m| math::powf(m as f64, -s)).sum();
    sum += math::powf(nf, 1.0 - s) / (s - 1.0) + 0.5 * math::powf(nf, -s);
    // Rising factorial s (s+1) ⋯ (s+2j−2) times N^{−s−2j+1}.
    let mut rising = s;
    let mut power = math::powf(nf, -s - 1.0);
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let k = 2.0 * j as f64;
            rising *= (s + k - 1.0) * (s + k);
            power /= nf * nf;
        }
        sum += b * rising * power;
    }
    sum
}

/// Normalised coefficients `d_k` of a primitive: the series is
/// `offset + factor · Σ d_k Y^k` with `Y = (X − c)/ρ`, or with `Y = (X/ρ)²`
/// for even primitives.
struct Stream {
    prim: Primitive,
    rho: f64,
    k: usize,
    last: f64,
}

impl Stream {
    fn new(prim: Primitive, rho: f64) -> Self {
        Self { prim, rho, k: 0, last: 1.0 }
    }

    fn next(&mut self) -> f64 {
        let k = self.k;
        let kf = k as f64;
        let rho = self.rho;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let d = match self.prim {
            Primitive::Exp => {
                if k == 0 {
                    1.0
                } else {
                    self.last * rho / kf
                }
            }
            Primitive::ExpDiff => {
                if k == 0 {
                    1.0
                } else {
                    -self.last * rho / (kf + 1.0)
                }
            }
            Primitive::SinhcHalf => {
                if k == 0 {
                    1.0
                } else {
                    self.last * rho * rho / (4.0 * (2.0 * kf) * (2.0 * kf + 1.0))
                }
            }
            Primitive::XCothX => {
                if k == 0 {
                    1.0
                } else {
                    -sign * 2.0 * zeta(2.0 * kf)
                }
            }
            Primitive::XOverSinhX => {
                if k == 0 {
                    1.0
                } else {
                    let s = 2.0 * kf;
                    sign * 2.0 * (1.0 - math::powf(2.0, 1.0 - s)) * zeta(s)
                }
            }
            Primitive::TanhcX => {
                let s = 2.0 * kf + 2.0;
                sign * 2.0 * (1.0 - math::powf(2.0, -s)) * zeta(s) * 4.0 / (PI * PI)
            }
            Primitive::LogXOverSinhX => {
                if k == 0 {
                    0.0
                } else {
                    sign * zeta(2.0 * kf) / kf
                }
            }
            Primitive::Log => {
                if k == 0 {
                    0.0
                } else {
                    -sign / kf
                }
            }
            Primitive::Sqrt => {
                if k == 0 {
                    1.0
                } else {
                    self.last * (0.5 - (kf - 1.0)) / kf
                }
            }
            Primitive::InvSqrt => {
                if k == 0 {
                    1.0
                } else {
                    self.last * (-0.5 - (kf - 1.0)) / kf
                }
            }
        };
        self.k += 1;
        self.last = d;
        d
    }
}

/// `f(M)` for a primitive `f`, by its power series in the full matrix.
///
/// Body and nilpotent part of `M` need not commute; the series is summed in
/// `M` itself and terminates exactly once the powers vanish. The body
/// spectrum must lie inside the (centred) disc of convergence.
pub fn analytic_apply<T: Coeff>(f: Primitive, m: &Mat<T>) -> Result<Mat<T>> {
    let n = m.size();
    let proto = m.proto().clone();
    let body = m.body();
    let body_bound = body.spectral_radius_bound(f64::INFINITY);

    let (center, rho) = if f.is_centred() {
        let (lo, hi) = body.gershgorin();
        if hi <= 0.0 {
            return Err(Error::NotPositive(f.name()));
        }
        let c = if lo > 0.0 { 0.5 * (lo + hi) } else { hi };
        (c, c)
    } else {
        (0.0, f.radius().unwrap_or_else(|| body_bound.max(1.0)))
    };

    let shifted = if center != 0.0 { m.shift_diagonal(-center) } else { m.clone() };
    let y = if f.is_even() {
        let s = shifted.scale(1.0 / rho);
        s.mul(&s)?
    } else {
        shifted.scale(1.0 / rho)
    };
    if f.radius().is_some() || f.is_centred() {
        let r = y.body().spectral_radius_bound(1.0);
        if r >= 1.0 {
            let radius = if f.is_centred() { center } else { rho };
            let actual = if f.is_even() { math::sqrt(r) * rho } else { r * rho };
            return Err(Error::OutsideRadius { primitive: f.name(), spectral_radius: actual, radius });
        }
    }

    let mut stream = Stream::new(f, rho);
    let mut sum = Mat::scalar_like(&proto, n, stream.next());
    let mut power = Mat::scalar_like(&proto, n, 1.0);
    let mut quiet = 0;
    for _ in 1..TERM_CAP {
        let d = stream.next();
        power = power.mul(&y)?;
        if power.is_zero() {
            return Ok(finish(f, center, sum));
        }
        let term = power.scale(d);
        let size = term.max_abs();
        sum = sum.add(&term)?;
        if size <= 1e-17 * sum.max_abs().max(1.0) {
            quiet += 1;
            if quiet >= NEGLIGIBLE_RUN {
                return Ok(finish(f, center, sum));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { operation: f.name(), iterations: TERM_CAP })
}

fn finish<T: Coeff>(f: Primitive, center: f64, sum: Mat<T>) -> Mat<T> {
    match f {
        Primitive::Log => sum.shift_diagonal(math::ln(center)),
        Primitive::Sqrt => sum.scale(math::sqrt(center)),
        Primitive::InvSqrt => sum.scale(1.0 / math::sqrt(center)),
        _ => sum,
    }
}

/// `f(x)` for a scalar ring element, via the `1 × 1` matrix case.
pub fn analytic_scalar<T: Coeff>(f: Primitive, x: &T) -> Result<T> {
    let m = Mat::from_fn(1, |_, _| x.clone());
    Ok(analytic_apply(f, &m)?.get(0, 0).clone())
}

/// `det^{1/2}(M)` on the principal branch, for a symmetric positive-definite body.
pub fn det_sqrt(m: &FormMatrix) -> Result<EvenForm> {
    let body = m.body();
    if body.max_asymmetry() > 1e-12 * body.max_abs().max(1.0) || !body.is_positive_definite() {
        return Err(Error::NotPositive("det_sqrt body"));
    }
    m.det_power(0.5)
}

/// Real matrix version of [`analytic_apply`].
pub fn analytic_apply_real(f: Primitive, m: &RealMatrix) -> Result<RealMatrix> {
    analytic_apply(f, m)
}
