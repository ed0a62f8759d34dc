use super::{KedlayaError, LiftedCurve, PrecisionPlan};
use crate::zq::{ZqContext, ZqElement, ZqPoly};

/// Coefficients of `(1 + t)^{-(2k+1)/2}` for `j = 0..count`:
/// `binom(-1/2, j) = (-1)^j binom(2j, j) / 4^j` and
/// `binom(-3/2, j) = (-1)^j (2j + 1) binom(2j, j) / 4^j`.
pub fn binomial_half_coefficients(
    ctx: &ZqContext,
    k: usize,
    count: usize,
) -> Result<Vec<ZqElement>, KedlayaError> {
    let mut out = Vec::with_capacity(count);
    let mut c = ctx.one();
    for j in 0..count {
        if j > 0 {
            // c_j = c_{j-1} * (-(2k+1)/2 - (j-1)) / j
            let num = -((2 * k + 1) as i64 + 2 * (j as i64 - 1));
            c = ctx.div_int(&ctx.mul_int(&c, num), 2 * j as i64)?;
        }
        out.push(c.clone());
    }
    Ok(out)
}

/// A series `sum_s u_s w^s` in `w = y^-2` with `deg u_s < d`.
type WSeries = Vec<ZqPoly>;

/// Product of two series whose terms have `w`-degree at least one, reduced
/// so every coefficient has degree `< d` again: `c Q w^t = c w^(t-1)`.
fn mul_series(
    a: &WSeries,
    b: &WSeries,
    q: &ZqPoly,
    max_deg: usize,
    ctx: &ZqContext,
) -> Result<WSeries, KedlayaError> {
    let mut out: WSeries = vec![ZqPoly::zero(); max_deg + 1];
    for (s, u) in a.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for (t, v) in b.iter().enumerate() {
            if v.is_zero() || s + t > max_deg + 1 {
                continue;
            }
            debug_assert!(s + t >= 1);
            let (h, r) = u.mul(v, ctx).divrem(q, ctx)?;
            if s + t <= max_deg {
                out[s + t].add_assign(&r, ctx);
            }
            out[s + t - 1].add_assign(&h, ctx);
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// `(1 + p Z)^{-(2k+1)/2}` as a polynomial in `w = y^-2` with
/// coefficients of degree `< d`, where `p Z = (Q^sigma(x^p) - Q(x)^p) / Q^p`.
/// Only terms that can land at `y^-m` with `m <= tail_bound` are kept.
///
/// Entry `j` of the result is the coefficient `A_j` of `w^j`.
pub fn frobenius_y_series(
    curve: &LiftedCurve,
    k: usize,
    plan: &PrecisionPlan,
) -> Result<Vec<ZqPoly>, KedlayaError> {
    let ctx = &curve.ctx;
    let p = curve.p() as usize;
    let q = &curve.qlift;
    let m0 = (2 * k + 1) * p;
    if m0 > plan.tail_bound {
        return Ok(vec![ZqPoly::constant(ctx.one())]);
    }
    let max_deg = (plan.tail_bound - m0) / 2;

    let q_sigma = q.sigma_pow(ctx, 1).compose_power(ctx, p);
    let mut q_pow = ZqPoly::constant(ctx.one());
    for _ in 0..p {
        q_pow = q_pow.mul(q, ctx);
    }
    let mut delta = q_sigma.sub(&q_pow, ctx);
    // Q-adic digits of delta: delta = sum_{i<p} a_i Q^i, and a_i Q^i / Q^p = a_i w^(p-i).
    let mut z: WSeries = vec![ZqPoly::zero(); p + 1];
    for i in 0..p {
        let (quo, rem) = delta.divrem(q, ctx)?;
        z[p - i] = rem;
        delta = quo;
    }
    if !delta.is_zero_mod(ctx.nwork() as i32) {
        return Err(KedlayaError::PrecisionExhausted(
            "Q^sigma(x^p) - Q^p has degree >= p d".into(),
        ));
    }
    z.truncate(max_deg + 1);
    while z.last().is_some_and(|c| c.is_zero()) {
        z.pop();
    }

    let terms = (ctx.nwork() as usize).min(max_deg + 1);
    let coeffs = binomial_half_coefficients(ctx, k, terms)?;
    let mut out: WSeries = vec![ZqPoly::zero(); max_deg + 1];
    out[0] = ZqPoly::constant(ctx.one());
    let mut power = z.clone();
    for (j, c) in coeffs.iter().enumerate().skip(1) {
        if power.is_empty() {
            break;
        }
        for (s, u) in power.iter().enumerate() {
            out[s].add_assign(&u.scale(c, ctx), ctx);
        }
        if j + 1 < terms {
            power = mul_series(&power, &z, q, max_deg, ctx)?;
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{FieldDesc, FqPoly};
    use crate::kedlaya::{normalize_model, plan_precision, Basis};
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    fn rational_binom(num: i64, den: i64, j: usize) -> BigRational {
        let a = BigRational::new(BigInt::from(num), BigInt::from(den));
        let mut acc = BigRational::one();
        for i in 0..j {
            acc = acc * (&a - BigRational::from_integer(BigInt::from(i)))
                / BigRational::from_integer(BigInt::from(i + 1));
        }
        acc
    }

    #[test]
    fn binomial_coefficients_match_rational_oracle() {
        for p in [3u64, 5, 7] {
            let f = FieldDesc::prime(p).unwrap();
            let ctx = ZqContext::new(&f, 6).unwrap();
            let m = BigInt::from(p).pow(6);
            for k in 0..2 {
                let cs = binomial_half_coefficients(&ctx, k, 12).unwrap();
                for (j, c) in cs.iter().enumerate() {
                    let r = rational_binom(-(2 * k as i64 + 1), 2, j);
                    // denominators are powers of 2, so r is p-integral
                    assert!(r.denom().gcd(&BigInt::from(p)).is_one());
                    let den_inv = r.denom().modinv(&m).unwrap();
                    let expect = (r.numer() * den_inv).mod_floor(&m).to_u64().unwrap();
                    assert_eq!(ctx.zp_residue(c, 6).unwrap(), expect, "p={p} k={k} j={j}");
                }
            }
        }
        let f = FieldDesc::prime(3).unwrap();
        let ctx = ZqContext::new(&f, 4).unwrap();
        let cs = binomial_half_coefficients(&ctx, 0, 3).unwrap();
        // 1, -1/2, 3/8
        assert_eq!(ctx.zp_residue(&cs[1], 4).unwrap(), 40);
        let r = rational_binom(-1, 2, 2);
        assert!(!r.is_negative() && !r.is_zero());
    }

    // Evaluating at a point: the truncated series A(x, w) at x = x0 with
    // w = 1/Q(x0) must agree with (1 + Delta(x0) w^p)^{-1/2} summed directly.
    #[test]
    fn series_matches_pointwise_expansion() {
        let f = FieldDesc::prime(5).unwrap();
        let q = FqPoly::from_ints(&f, &[1, 2, 0, 1]);
        let curve = normalize_model(&f, &q).unwrap();
        let plan = plan_precision(5, 1, 1, 3, Basis::B1);
        let ctx = ZqContext::new(&f, plan.nwork).unwrap();
        let lc = LiftedCurve::new(&curve, &ctx).unwrap();
        let series = frobenius_y_series(&lc, 0, &plan).unwrap();
        assert!(series.iter().all(|a| a.len() <= 3));

        // choose x0 = p * t so that w = 1/Q(x0) is a unit and each A_j w^j
        // is a valuation-safe sum; compare the sum over all kept terms.
        for x0 in [2i64, 3, 4] {
            let x = ctx.from_int(x0);
            let qx = lc.qlift.eval(&x, &ctx);
            let w = ctx.inv(&qx).unwrap();
            let qs = lc.qlift.sigma_pow(&ctx, 1).compose_power(&ctx, 5).eval(&x, &ctx);
            let delta = ctx.sub(&qs, &ctx.pow(&qx, 5));
            let t = ctx.mul(&delta, &ctx.pow(&w, 5));
            let coeffs = binomial_half_coefficients(&ctx, 0, plan.nwork as usize + 2).unwrap();
            let mut direct = ctx.zero();
            let mut tp = ctx.one();
            for c in &coeffs {
                direct = ctx.add(&direct, &ctx.mul(c, &tp));
                tp = ctx.mul(&tp, &t);
            }
            let mut via = ctx.zero();
            let mut wp = ctx.one();
            for a in &series {
                via = ctx.add(&via, &ctx.mul(&a.eval(&x, &ctx), &wp));
                wp = ctx.mul(&wp, &w);
            }
            // tail terms beyond the bound have valuation >= nwork - 1 here
            assert!(ctx.eq_mod(&direct, &via, 2), "x0={x0}");
        }
    }
}
