//! The commutative even-form ring, matrices over it, analytic functions with
//! exactly truncating series, and Grassmann evaluation of composites.

mod composite;
mod even_form;
mod hoperator;
mod series;

pub use even_form::EvenForm;
pub use series::{analytic_apply, analytic_apply_real, analytic_scalar, det_sqrt, FormMatrix, Primitive};
pub use composite::{grassmann_eval, nilpotent_coordinates, AnalyticComposite, Evaluable, Evaluator, MatrixExpr, ScalarExpr};
pub use hoperator::{h_operator, h_operator_with, HOperator};
