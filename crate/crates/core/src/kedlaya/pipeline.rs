use std::time::{Duration, Instant};

use super::model::{b1_is_integral, plan_with_target};
use super::{
    build_frobenius_matrix, charpoly_mod, lift_lpoly, normalize_model, select_basis,
    twisted_power, Basis, BasisChoice, KedlayaError, LPolynomial, LiftedCurve, PrecisionPlan,
};
use crate::gf::{FieldDesc, FqPoly};
use crate::zq::ZqContext;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    /// Force a basis instead of the automatic choice.
    pub basis: Option<Basis>,
    /// Force the target precision `N` (digits of the returned residues).
    pub precision: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Setup,
    /// Series expansion, Frobenius images and their reduction.
    Matrix,
    Powering,
    Charpoly,
    Lift,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Setup => "setup",
            Stage::Matrix => "matrix",
            Stage::Powering => "powering",
            Stage::Charpoly => "charpoly",
            Stage::Lift => "lift",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZetaResult {
    pub l: LPolynomial,
    pub q: u128,
    pub d: usize,
    pub g: usize,
    pub basis: BasisChoice,
    pub plan: PrecisionPlan,
    pub twisted: bool,
    pub matrix_min_valuation: Option<i32>,
    pub timings: Vec<(Stage, Duration)>,
    pub warnings: Vec<String>,
}

/// Computes `L(X)` for `y^2 = q_raw(x)` over `field`.
pub fn zeta_pipeline(
    field: &FieldDesc,
    q_raw: &FqPoly,
    overrides: &Overrides,
) -> Result<ZetaResult, KedlayaError> {
    let mut timings = Vec::new();
    let mut warnings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |stage: Stage, timings: &mut Vec<(Stage, Duration)>| {
        let now = Instant::now();
        timings.push((stage, now - clock));
        clock = now;
    };

    let curve = normalize_model(field, q_raw)?;
    let (p, n) = (field.p(), field.n());
    let (d, g) = (curve.d, curve.g);
    let basis = match overrides.basis {
        Some(b) => BasisChoice::new(b, d),
        None => select_basis(p, g, d),
    };
    if curve.twisted {
        warnings.push("leading coefficient is a non-square: computed on the twist".into());
    }
    let plan = plan_with_target(p, n, g, d, basis.which, overrides.precision);
    if plan.n < plan.n1 {
        warnings.push(format!(
            "precision {} is below the {} digits needed for a unique lift",
            plan.n, plan.n1
        ));
    }
    let ctx = ZqContext::new(field, plan.nwork)?;
    let lifted = LiftedCurve::new(&curve, &ctx)?;
    lap(Stage::Setup, &mut timings);

    let m = build_frobenius_matrix(&lifted, basis.which, &plan)?;
    let matrix_min_valuation = m.min_valuation();
    if basis.which == Basis::B1 && !b1_is_integral(p, g, d) {
        warnings.push(format!(
            "dx/y basis with p = {p} too small for g = {g}: entries may be non-integral, \
             observed minimum valuation {}",
            matrix_min_valuation.map_or("none".into(), |v| v.to_string())
        ));
    }
    lap(Stage::Matrix, &mut timings);

    let nmat = twisted_power(&m, n, &ctx);
    lap(Stage::Powering, &mut timings);

    let q = field.q();
    let residues = charpoly_mod(&nmat, g, basis, q, plan.n, &ctx)?;
    lap(Stage::Charpoly, &mut timings);

    let modulus = (p as u128).pow(plan.n) as u64;
    let l = lift_lpoly(&residues, modulus, g, q, curve.twisted)?;
    lap(Stage::Lift, &mut timings);

    Ok(ZetaResult {
        l,
        q,
        d,
        g,
        basis,
        plan,
        twisted: curve.twisted,
        matrix_min_valuation,
        timings,
        warnings,
    })
}
