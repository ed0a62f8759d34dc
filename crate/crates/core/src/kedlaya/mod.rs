//! Kedlaya-style computation of the zeta function numerator of
//! `y^2 = Q(x)` over `F_q`, for odd and even degree models, on either the
//! `x^i dx/y` basis or the `x^i dx/y^3` pseudo-basis.
//!
//! The stages are exposed individually so that callers (and tests) can
//! inspect intermediate objects:
//!
//! 1. [`normalize_model`], [`select_basis`], [`plan_precision`]
//! 2. [`LiftedCurve::new`] and [`frobenius_y_series`]
//! 3. [`frobenius_image`] and [`reduce_to_basis`] for each basis element,
//!    assembled by [`build_frobenius_matrix`]
//! 4. [`twisted_power`], [`charpoly_mod`], [`lift_lpoly`]
//!
//! [`zeta_pipeline`] runs all of them.

mod lpoly;
mod matrix;
mod model;
mod pipeline;
mod reduction;
mod series;

use thiserror::Error;

use crate::gf::GfError;
use crate::zq::ZqError;

pub use lpoly::{lift_lpoly, LPolynomial};
pub use matrix::{
    build_frobenius_matrix, charpoly_full, charpoly_mod, twisted_power, FrobMatrix,
};
pub use model::{
    floor_log, normalize_model, plan_precision, select_basis, Basis, BasisChoice, CurveData,
    LiftedCurve, PrecisionPlan, Strip,
};
pub use pipeline::{zeta_pipeline, Overrides, Stage, ZetaResult};
pub use reduction::{
    exact_differential, frobenius_image, kernel_generator, redn_a_step, redn_b_reduce,
    reduce_to_basis, DiffForm,
};
pub use series::{binomial_half_coefficients, frobenius_y_series};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KedlayaError {
    #[error("Q is not separable (gcd(Q, Q') != 1)")]
    NotSeparable,
    #[error("degree {0} is too small for a hyperelliptic model (need at least 3)")]
    DegreeTooSmall(usize),
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("non-basis residual at y^-{exponent}: degree {degree} >= d - 1")]
    NonBasisResidual { exponent: usize, degree: usize },
    #[error("form has terms below the target exponent {0}")]
    BelowTarget(usize),
    #[error("kernel generator requires an even degree model")]
    OddDegree,
    #[error("power sum / coefficient round trip failed: {0}")]
    NewtonDivisionFailure(String),
    #[error("coefficient of X^{index} is {value}, outside the Weil bound {bound}")]
    WeilBoundViolation { index: usize, value: String, bound: String },
    #[error("L(1) = {0} is not positive")]
    NonPositiveJacobianOrder(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Zq(ZqError),
}

impl From<ZqError> for KedlayaError {
    fn from(e: ZqError) -> Self {
        match e {
            ZqError::PrecisionExhausted(s) => KedlayaError::PrecisionExhausted(s),
            ZqError::NotIntegral(v) => KedlayaError::PrecisionExhausted(format!(
                "expected an integral value, found valuation {v}"
            )),
            other => KedlayaError::Zq(other),
        }
    }
}

impl KedlayaError {
    /// Errors that indicate a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            KedlayaError::WeilBoundViolation { .. }
                | KedlayaError::NonBasisResidual { .. }
                | KedlayaError::NonPositiveJacobianOrder(_)
                | KedlayaError::NewtonDivisionFailure(_)
        )
    }
}
