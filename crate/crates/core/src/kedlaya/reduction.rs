use std::collections::BTreeMap;

use super::{floor_log, Basis, KedlayaError, LiftedCurve, PrecisionPlan};
use crate::zq::{ZqContext, ZqElement, ZqPoly};

/// A differential `sum_m P_m(x) dx / y^m` over odd `m`.
///
/// In standard form every `P_m` with `m >= 3` has degree `< d`; the `m = 1`
/// term may have any degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffForm {
    terms: BTreeMap<usize, ZqPoly>,
}

impl DiffForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<usize, ZqPoly> {
        &self.terms
    }

    pub fn term(&self, m: usize) -> Option<&ZqPoly> {
        self.terms.get(&m)
    }

    pub fn max_exponent(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<usize> {
        self.terms.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `poly dx / y^m` without normalizing.
    pub fn add_raw(&mut self, m: usize, poly: &ZqPoly, ctx: &ZqContext) {
        assert!(m % 2 == 1, "exponent of y must be odd");
        if poly.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        e.add_assign(poly, ctx);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Adds `poly dx / y^m`, splitting off multiples of `Q` (which lower the
    /// exponent by two) until the polynomial has degree `< d` or `m = 1`.
    pub fn add_standard(
        &mut self,
        mut m: usize,
        poly: &ZqPoly,
        curve: &LiftedCurve,
    ) -> Result<(), KedlayaError> {
        let ctx = &curve.ctx;
        let mut p = poly.clone();
        while m >= 3 && p.degree().is_some_and(|dg| dg >= curve.d) {
            let (quo, rem) = p.divrem(&curve.qlift, ctx)?;
            self.add_raw(m, &rem, ctx);
            p = quo;
            m -= 2;
        }
        self.add_raw(m, &p, ctx);
        Ok(())
    }

    fn take(&mut self, m: usize) -> Option<ZqPoly> {
        self.terms.remove(&m)
    }
}

/// `phi(x^i dx / y^{2k+1})` in standard form, from the series returned by
/// [`frobenius_y_series`](super::frobenius_y_series):
/// `p x^{pi-1} A_j dx / y^{(2k+1)p + 2j}`.
pub fn frobenius_image(
    curve: &LiftedCurve,
    i: usize,
    k: usize,
    series: &[ZqPoly],
    plan: &PrecisionPlan,
) -> Result<DiffForm, KedlayaError> {
    let ctx = &curve.ctx;
    let p = curve.p() as usize;
    let pz = ctx.from_int(p as i64);
    let mut form = DiffForm::new();
    for (j, a) in series.iter().enumerate() {
        let m = (2 * k + 1) * p + 2 * j;
        if m > plan.tail_bound || a.is_zero() {
            continue;
        }
        // x^i dx -> x^{pi} d(x^p) = p x^{p(i+1)-1} dx
        let term = a.shift_up(ctx, p * (i + 1) - 1).scale(&pz, ctx);
        form.add_standard(m, &term, curve)?;
    }
    Ok(form)
}

/// One step of the `y`-exponent reduction: rewrites `S dx / y^m` (`m >= 3`)
/// as `T dx / y^{m-2}` modulo exact differentials.
///
/// With `S = A Q + B Q'` and `deg B < d`,
/// `B Q' / y^m = (2/(m-2)) B' / y^{m-2} - d(2 B / ((m-2) y^{m-2}))`,
/// so `T = A + (2/(m-2)) B'`.
pub fn redn_a_step(s: &ZqPoly, m: usize, curve: &LiftedCurve) -> Result<ZqPoly, KedlayaError> {
    assert!(m >= 3 && m % 2 == 1);
    let ctx = &curve.ctx;
    if s.is_zero() {
        return Ok(ZqPoly::zero());
    }
    let b = s.mul(&curve.bezout_v, ctx).rem(&curve.qlift, ctx)?;
    let (a, _) = s.sub(&b.mul(&curve.dq, ctx), ctx).divrem(&curve.qlift, ctx)?;
    let db = b.derivative(ctx);
    let two = ctx.from_int(2);
    let factor = ctx.div_int(&two, (m - 2) as i64)?;
    Ok(a.add(&db.scale(&factor, ctx), ctx))
}

/// Reduces `T dx / y` to degree `< d - 1` using
/// `d(x^r y) = (r x^{r-1} Q + x^r Q'/2) dx / y`, returning the coordinates
/// on `x^i dx/y`, `0 <= i <= d-2`.
pub fn redn_b_reduce(t: &ZqPoly, curve: &LiftedCurve) -> Result<Vec<ZqElement>, KedlayaError> {
    let ctx = &curve.ctx;
    let d = curve.d;
    let mut c: Vec<ZqElement> = t.coeffs().to_vec();
    if c.len() < d - 1 {
        c.resize(d - 1, ctx.zero());
    }
    let q = curve.qlift.coeffs();
    let dq = curve.dq.coeffs();
    for deg in (d - 1..c.len()).rev() {
        if c[deg].is_zero() {
            continue;
        }
        let r = deg + 1 - d;
        // 2 d(x^r y) = (2r x^{r-1} Q + x^r Q') dx/y, leading coefficient 2r + d
        let f = ctx.div_int(&c[deg], (2 * r + d) as i64)?;
        if r >= 1 {
            let f2r = ctx.mul_int(&f, 2 * r as i64);
            for (j, qj) in q.iter().enumerate() {
                let idx = r - 1 + j;
                c[idx] = ctx.sub(&c[idx], &ctx.mul(&f2r, qj));
            }
        }
        for (j, dj) in dq.iter().enumerate() {
            let idx = r + j;
            c[idx] = ctx.sub(&c[idx], &ctx.mul(&f, dj));
        }
        c[deg] = ctx.zero();
    }
    c.truncate(d - 1);
    Ok(c)
}

/// Reduces a standard-form differential to coordinates on the basis.
/// For `B1` everything is brought down to `y^-1`; for `B2` to `y^-3`, where a
/// residual of degree `>= d - 1` means the input was not in the span.
pub fn reduce_to_basis(
    form: &DiffForm,
    basis: Basis,
    curve: &LiftedCurve,
) -> Result<Vec<ZqElement>, KedlayaError> {
    let ctx = &curve.ctx;
    let target = basis.exponent();
    if let Some(lo) = form.min_exponent() {
        if lo < target {
            return Err(KedlayaError::BelowTarget(target));
        }
    }
    let mut work = form.clone();
    let top = form.max_exponent().unwrap_or(target);
    let mut m = top;
    while m > target {
        if let Some(s) = work.take(m) {
            let t = redn_a_step(&s, m, curve)?;
            work.add_raw(m - 2, &t, ctx);
        }
        m -= 2;
    }
    let last = work.take(target).unwrap_or_default();
    match basis {
        Basis::B1 => redn_b_reduce(&last, curve),
        Basis::B2 => {
            let d = curve.d;
            // digits below this are rounding noise from the divisions by m - 2
            let base = form.terms().values().filter_map(|t| t.min_valuation()).min().unwrap_or(0);
            let noise = base + ctx.nwork() as i32 - floor_log(curve.p(), top as u64) as i32 - 1;
            for (i, c) in last.coeffs().iter().enumerate().skip(d - 1) {
                if c.valuation().is_some_and(|v| v < noise) {
                    return Err(KedlayaError::NonBasisResidual { exponent: 3, degree: i });
                }
            }
            Ok((0..d - 1).map(|i| last.coeff(ctx, i)).collect())
        }
    }
}

/// `d(x^r / y^s)` in standard form, differentiated symbolically:
/// `r x^{r-1} dx / y^s - (s/2) x^r Q' dx / y^{s+2}`.
pub fn exact_differential(
    curve: &LiftedCurve,
    r: usize,
    s: usize,
) -> Result<DiffForm, KedlayaError> {
    assert!(s % 2 == 1);
    let ctx = &curve.ctx;
    let mut form = DiffForm::new();
    if r > 0 {
        let t = ZqPoly::monomial(ctx, ctx.from_int(r as i64), r - 1);
        form.add_standard(s, &t, curve)?;
    }
    let half_s = ctx.div_int(&ctx.from_int(-(s as i64)), 2)?;
    let t = curve.dq.shift_up(ctx, r).scale(&half_s, ctx);
    form.add_standard(s + 2, &t, curve)?;
    Ok(form)
}

/// For even `d`: the monic `S` of degree `g + 1` and `V = S Q' - 2 S' Q`
/// with `deg V < d - 1`. Since `V dx/y^3 = -2 d(S/y)`, `V` spans the kernel
/// of the `dx/y^3` coordinates in cohomology.
pub fn kernel_generator(curve: &LiftedCurve) -> Result<(ZqPoly, ZqPoly), KedlayaError> {
    if curve.d % 2 == 1 {
        return Err(KedlayaError::OddDegree);
    }
    let ctx = &curve.ctx;
    let (g, d) = (curve.g, curve.d);
    let v_of = |s: &ZqPoly| {
        let two_ds = s.derivative(ctx).scale(&ctx.from_int(2), ctx);
        s.mul(&curve.dq, ctx).sub(&two_ds.mul(&curve.qlift, ctx), ctx)
    };
    let mut b = vec![ctx.zero(); g + 2];
    b[g + 1] = ctx.one();
    // b_i enters the coefficient of x^{i+d-1} with factor d - 2i = 2g + 2 - 2i
    // and nothing above it, so solve from the top down.
    for i in (0..=g).rev() {
        let c = v_of(&ZqPoly::new(b.clone())).coeff(ctx, i + d - 1);
        if !c.is_zero() {
            let t = ctx.div_int(&c, (2 * g + 2 - 2 * i) as i64)?;
            b[i] = ctx.sub(&b[i], &t);
        }
    }
    let s = ZqPoly::new(b);
    let v = v_of(&s);
    Ok((s, v))
}
