//! The unramified ring `W(F_q)` truncated to a fixed number of p-adic digits.
//!
//! A [`ZqElement`] is `p^val * u` where `u` is a coordinate vector in the power
//! basis of `theta` (a root of the lifted field modulus) with entries modulo
//! `p^nwork`. Mantissas are kept normalized, so `u` is a unit unless the
//! element is zero, and every element carries `nwork` digits of relative
//! precision. Negative `val` represents the p-power denominators produced by
//! the cohomological reductions.
//!
//! Arithmetic goes through the context (`ctx.mul(&a, &b)`), which owns the
//! modulus, the precision, and the cached images `sigma^j(theta)`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::gf::{FieldDesc, FqElement, FqPoly, GfError};

/// Coordinates modulo `p^nwork`.
pub type Mant = SmallVec<[u64; 4]>;

/// `p^nwork` must stay below this so products fit in `u128` comfortably.
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZqError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("p^{nwork} exceeds the supported modulus size")]
    PrecisionTooLarge { nwork: u32 },
    #[error("value is not p-integral (valuation {0})")]
    NotIntegral(i32),
    #[error("value does not lie in Z_p")]
    NotInZp,
    #[error(transparent)]
    Field(#[from] GfError),
}

struct ZqInner {
    field: FieldDesc,
    nwork: u32,
    pn: u64,
    p_pows: Vec<u64>,
    lifted_modulus: Vec<u64>,
    /// `sigma^j(theta)` for `j = 0..n`.
    sigma_pows: Vec<Mant>,
    newton_steps: u32,
}

/// Shared description of `W(F_q)/p^nwork`. Immutable and cheap to clone.
#[derive(Clone)]
pub struct ZqContext(Arc<ZqInner>);

impl fmt::Debug for ZqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Zq({:?}, p^{})", self.field(), self.nwork())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZqElement {
    val: i32,
    mant: Mant,
}

impl fmt::Debug for ZqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "p^{}*{:?}", self.val, self.mant.as_slice())
        }
    }
}

impl ZqElement {
    pub fn is_zero(&self) -> bool {
        self.mant.iter().all(|&c| c == 0)
    }

    /// p-adic valuation, `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.val)
    }

    pub fn mantissa(&self) -> &[u64] {
        &self.mant
    }
}

impl ZqContext {
    /// Builds the context for `W(field)/p^nwork`, lifting the field modulus
    /// coefficient-wise and computing `sigma(theta)` by Newton iteration from
    /// `theta^p mod p`.
    pub fn new(field: &FieldDesc, nwork: u32) -> Result<Self, ZqError> {
        if nwork == 0 {
            return Err(ZqError::PrecisionExhausted("nwork must be at least 1".into()));
        }
        let p = field.p();
        let mut p_pows = vec![1u64];
        for _ in 0..nwork {
            let next = p_pows
                .last()
                .unwrap()
                .checked_mul(p)
                .filter(|&v| v < MAX_MODULUS)
                .ok_or(ZqError::PrecisionTooLarge { nwork })?;
            p_pows.push(next);
        }
        let pn = p_pows[nwork as usize];
        let n = field.n();
        let mut inner = ZqInner {
            field: field.clone(),
            nwork,
            pn,
            p_pows,
            lifted_modulus: field.modulus().to_vec(),
            sigma_pows: Vec::new(),
            newton_steps: 0,
        };
        if n == 1 {
            // sigma is the identity on Z_p; theta plays no role.
            inner.sigma_pows = vec![smallvec![0]];
            return Ok(ZqContext(Arc::new(inner)));
        }
        let mut ctx = ZqContext(Arc::new(inner));
        let (sigma_theta, steps) = ctx.newton_sigma_image();
        let mut pows: Vec<Mant> = Vec::with_capacity(n);
        let mut theta: Mant = smallvec![0; n];
        theta[1] = 1;
        pows.push(theta);
        pows.push(sigma_theta);
        for j in 2..n {
            let prev = pows[j - 1].clone();
            let next = ctx.raw_eval_at(&prev, &pows[1]);
            pows.push(next);
        }
        let inner = Arc::get_mut(&mut ctx.0).expect("context not yet shared");
        inner.sigma_pows = pows;
        inner.newton_steps = steps;
        Ok(ctx)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.0.field
    }

    pub fn p(&self) -> u64 {
        self.0.field.p()
    }

    pub fn n(&self) -> usize {
        self.0.field.n()
    }

    pub fn nwork(&self) -> u32 {
        self.0.nwork
    }

    /// `p^nwork`.
    pub fn modulus_power(&self) -> u64 {
        self.0.pn
    }

    pub fn lifted_modulus(&self) -> &[u64] {
        &self.0.lifted_modulus
    }

    /// Coordinates of `sigma(theta)`.
    pub fn sigma_image(&self) -> &[u64] {
        &self.0.sigma_pows[1.min(self.0.sigma_pows.len() - 1)]
    }

    /// Newton steps taken to refine `sigma(theta)` (diagnostic).
    pub fn newton_steps(&self) -> u32 {
        self.0.newton_steps
    }

    fn p_pow(&self, e: u32) -> u64 {
        self.0.p_pows[e as usize]
    }

    // ---- raw arithmetic on mantissas mod p^nwork ------------------------

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0.pn as u128) as u64
    }

    #[inline]
    fn addmod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0.pn {
            s - self.0.pn
        } else {
            s
        }
    }

    #[inline]
    fn submod(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0.pn - b
        }
    }

    fn raw_add(&self, a: &[u64], b: &[u64]) -> Mant {
        a.iter().zip(b).map(|(&x, &y)| self.addmod(x, y)).collect()
    }

    fn raw_sub(&self, a: &[u64], b: &[u64]) -> Mant {
        a.iter().zip(b).map(|(&x, &y)| self.submod(x, y)).collect()
    }

    fn raw_scale(&self, a: &[u64], s: u64) -> Mant {
        a.iter().map(|&x| self.mulmod(x, s)).collect()
    }

    fn raw_mul(&self, a: &[u64], b: &[u64]) -> Mant {
        let n = self.n();
        if n == 1 {
            return smallvec![self.mulmod(a[0], b[0])];
        }
        let mut prod: SmallVec<[u64; 8]> = smallvec![0; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = self.addmod(prod[i + j], self.mulmod(x, y));
            }
        }
        let m = &self.0.lifted_modulus;
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                prod[k - n + j] = self.submod(prod[k - n + j], self.mulmod(c, m[j]));
            }
        }
        prod[..n].iter().copied().collect()
    }

    fn raw_one(&self) -> Mant {
        let mut m: Mant = smallvec![0; self.n()];
        m[0] = 1;
        m
    }

    fn raw_is_zero(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Evaluates the mantissa polynomial `a(theta)` at `z` (Horner).
    fn raw_eval_at(&self, a: &[u64], z: &[u64]) -> Mant {
        let n = self.n();
        let mut acc: Mant = smallvec![0; n];
        for &c in a.iter().rev() {
            acc = self.raw_mul(&acc, z);
            acc[0] = self.addmod(acc[0], c);
        }
        acc
    }

    /// Evaluates the lifted modulus and its derivative at `y`.
    fn raw_modulus_and_deriv_at(&self, y: &[u64]) -> (Mant, Mant) {
        let n = self.n();
        let m = &self.0.lifted_modulus;
        let mut f: Mant = smallvec![0; n];
        let mut df: Mant = smallvec![0; n];
        for &c in m.iter().rev() {
            df = self.raw_mul(&df, y);
            df = self.raw_add(&df, &f);
            f = self.raw_mul(&f, y);
            f[0] = self.addmod(f[0], c);
        }
        (f, df)
    }

    /// Inverse of a unit mantissa: invert mod p in `F_q`, then Newton-lift.
    fn raw_inv_unit(&self, a: &[u64]) -> Option<Mant> {
        let p = self.p();
        let abar: SmallVec<[u64; 4]> = a.iter().map(|&c| c % p).collect();
        let inv0 = self.0.field.raw_inv(&abar)?;
        let mut x: Mant = inv0.iter().copied().collect();
        let mut digits = 1u32;
        while digits < self.nwork() {
            let ax = self.raw_mul(a, &x);
            let mut two_minus = self.raw_sub(&Mant::from_elem(0, self.n()), &ax);
            two_minus[0] = self.addmod(two_minus[0], 2 % self.0.pn);
            x = self.raw_mul(&x, &two_minus);
            digits *= 2;
        }
        Some(x)
    }

    fn newton_sigma_image(&self) -> (Mant, u32) {
        let field = &self.0.field;
        let theta_p = field.generator().frobenius();
        let mut y: Mant = theta_p.coords().iter().copied().collect();
        let mut steps = 0;
        loop {
            let (f, df) = self.raw_modulus_and_deriv_at(&y);
            if Self::raw_is_zero(&f) {
                return (y, steps);
            }
            let inv = self
                .raw_inv_unit(&df)
                .expect("modulus separable mod p, so f'(theta^p) is a unit");
            y = self.raw_sub(&y, &self.raw_mul(&f, &inv));
            steps += 1;
            assert!(steps < 64, "Newton iteration for sigma(theta) failed to converge");
        }
    }

    fn vp_u64(&self, mut c: u64) -> u32 {
        let p = self.p();
        let mut v = 0;
        while c.is_multiple_of(p) {
            c /= p;
            v += 1;
        }
        v
    }

    fn normalize(&self, val: i32, mut mant: Mant) -> ZqElement {
        let v = mant.iter().filter(|&&c| c != 0).map(|&c| self.vp_u64(c)).min();
        match v {
            None => self.zero(),
            Some(0) => ZqElement { val, mant },
            Some(v) => {
                let d = self.p_pow(v);
                for c in mant.iter_mut() {
                    *c /= d;
                }
                ZqElement { val: val + v as i32, mant }
            }
        }
    }

    // ---- elements --------------------------------------------------------

    pub fn zero(&self) -> ZqElement {
        ZqElement { val: 0, mant: smallvec![0; self.n()] }
    }

    pub fn one(&self) -> ZqElement {
        ZqElement { val: 0, mant: self.raw_one() }
    }

    pub fn from_int(&self, c: i64) -> ZqElement {
        self.from_i128(c as i128)
    }

    pub fn from_i128(&self, c: i128) -> ZqElement {
        if c == 0 {
            return self.zero();
        }
        let p = self.p() as i128;
        let mut u = c;
        let mut v = 0i32;
        while u % p == 0 {
            u /= p;
            v += 1;
        }
        let mut m: Mant = smallvec![0; self.n()];
        m[0] = u.rem_euclid(self.0.pn as i128) as u64;
        ZqElement { val: v, mant: m }
    }

    /// `p^val` times the given coordinates (reduced mod `p^nwork`).
    pub fn from_parts(&self, val: i32, coords: &[u64]) -> ZqElement {
        let mut m: Mant = smallvec![0; self.n()];
        for (i, &c) in coords.iter().enumerate() {
            m[i] = c % self.0.pn;
        }
        self.normalize(val, m)
    }

    /// Least-nonnegative coordinate-wise lift of an `F_q` element.
    pub fn lift(&self, a: &FqElement) -> ZqElement {
        self.from_parts(0, a.coords())
    }

    /// Reduction mod p; requires a p-integral value.
    pub fn reduce(&self, a: &ZqElement) -> Result<FqElement, ZqError> {
        if a.is_zero() || a.val > 0 {
            return Ok(self.0.field.zero());
        }
        if a.val < 0 {
            return Err(ZqError::NotIntegral(a.val));
        }
        let p = self.p();
        let c: Vec<u64> = a.mant.iter().map(|&x| x % p).collect();
        Ok(self.0.field.element(&c)?)
    }

    pub fn neg(&self, a: &ZqElement) -> ZqElement {
        if a.is_zero() {
            return a.clone();
        }
        ZqElement { val: a.val, mant: self.raw_sub(&Mant::from_elem(0, self.n()), &a.mant) }
    }

    pub fn add(&self, a: &ZqElement, b: &ZqElement) -> ZqElement {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let (lo, hi) = if a.val <= b.val { (a, b) } else { (b, a) };
        let shift = (hi.val - lo.val) as u32;
        if shift >= self.nwork() {
            return lo.clone();
        }
        let mant = if shift == 0 {
            self.raw_add(&lo.mant, &hi.mant)
        } else {
            let s = self.p_pow(shift);
            lo.mant
                .iter()
                .zip(&hi.mant)
                .map(|(&x, &y)| self.addmod(x, self.mulmod(y, s)))
                .collect()
        };
        if shift == 0 {
            self.normalize(lo.val, mant)
        } else {
            // lo's mantissa is a unit, so the sum is too.
            ZqElement { val: lo.val, mant }
        }
    }

    pub fn sub(&self, a: &ZqElement, b: &ZqElement) -> ZqElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &ZqElement, b: &ZqElement) -> ZqElement {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        ZqElement { val: a.val + b.val, mant: self.raw_mul(&a.mant, &b.mant) }
    }

    pub fn mul_int(&self, a: &ZqElement, c: i64) -> ZqElement {
        self.mul(a, &self.from_int(c))
    }

    /// `p^k * a`.
    pub fn shift(&self, a: &ZqElement, k: i32) -> ZqElement {
        if a.is_zero() {
            return a.clone();
        }
        ZqElement { val: a.val + k, mant: a.mant.clone() }
    }

    pub fn inv(&self, a: &ZqElement) -> Result<ZqElement, ZqError> {
        if a.is_zero() {
            return Err(ZqError::DivisionByZero);
        }
        let m = self.raw_inv_unit(&a.mant).ok_or(ZqError::DivisionByZero)?;
        Ok(ZqElement { val: -a.val, mant: m })
    }

    pub fn div(&self, a: &ZqElement, b: &ZqElement) -> Result<ZqElement, ZqError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Exact division by a nonzero integer; the p-part of `c` lowers the
    /// valuation.
    pub fn div_int(&self, a: &ZqElement, c: i64) -> Result<ZqElement, ZqError> {
        if c == 0 {
            return Err(ZqError::DivisionByZero);
        }
        if a.is_zero() {
            return Ok(a.clone());
        }
        let cz = self.from_int(c);
        let unit_inv = crate::gf::inv_mod_u64(cz.mant[0], self.0.pn);
        Ok(ZqElement { val: a.val - cz.val, mant: self.raw_scale(&a.mant, unit_inv) })
    }

    pub fn pow(&self, a: &ZqElement, mut e: u64) -> ZqElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The p-Frobenius automorphism `sigma`.
    pub fn sigma(&self, a: &ZqElement) -> ZqElement {
        self.sigma_pow(a, 1)
    }

    /// `sigma^j(a)`, using the cached image of `theta` under `sigma^j`.
    pub fn sigma_pow(&self, a: &ZqElement, j: usize) -> ZqElement {
        let n = self.n();
        let j = j % n;
        if j == 0 || a.is_zero() {
            return a.clone();
        }
        let mant = self.raw_eval_at(&a.mant, &self.0.sigma_pows[j]);
        ZqElement { val: a.val, mant }
    }

    /// True when `a = b` modulo `p^prec`.
    pub fn eq_mod(&self, a: &ZqElement, b: &ZqElement, prec: i32) -> bool {
        let d = self.sub(a, b);
        d.is_zero() || d.val >= prec
    }

    /// The coordinates of a p-integral value modulo `p^prec`.
    pub fn residue(&self, a: &ZqElement, prec: u32) -> Result<Mant, ZqError> {
        let n = self.n();
        if a.is_zero() || a.val >= prec as i32 {
            return Ok(smallvec![0; n]);
        }
        if a.val < 0 {
            return Err(ZqError::NotIntegral(a.val));
        }
        if a.val as u32 + self.nwork() < prec {
            return Err(ZqError::PrecisionExhausted(format!(
                "need {prec} digits, have {}",
                a.val as u32 + self.nwork()
            )));
        }
        let target = self.p_pow(prec.min(self.nwork()));
        let scale = self.p_pow(a.val as u32);
        Ok(a.mant.iter().map(|&c| self.mulmod(c, scale) % target).collect())
    }

    /// The value of an element of `Z_p` modulo `p^prec` (`prec <= nwork`).
    pub fn zp_residue(&self, a: &ZqElement, prec: u32) -> Result<u64, ZqError> {
        let r = self.residue(a, prec)?;
        if r[1..].iter().any(|&c| c != 0) {
            return Err(ZqError::NotInZp);
        }
        Ok(r[0])
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ZqElement {
        let m: Mant = (0..self.n()).map(|_| rng.gen_range(0..self.0.pn)).collect();
        self.normalize(0, m)
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> ZqElement {
        loop {
            let a = self.random(rng);
            if !a.is_zero() && a.val == 0 {
                return a;
            }
        }
    }
}

/// Multiplicative inverse of an integer modulo `m` (gcd must be 1).
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Polynomial over the truncated ring, coefficients ascending, trimmed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZqPoly {
    coeffs: Vec<ZqElement>,
}

impl fmt::Debug for ZqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl ZqPoly {
    pub fn new(mut coeffs: Vec<ZqElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZqPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZqPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: ZqElement) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(ctx: &ZqContext, c: ZqElement, k: usize) -> Self {
        let mut cs = vec![ctx.zero(); k];
        cs.push(c);
        Self::new(cs)
    }

    pub fn from_ints(ctx: &ZqContext, cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    /// Least-nonnegative lift of a polynomial over `F_q`.
    pub fn lift(ctx: &ZqContext, f: &FqPoly) -> Self {
        Self::new(f.coeffs().iter().map(|c| ctx.lift(c)).collect())
    }

    pub fn coeffs(&self) -> &[ZqElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ZqElement> {
        self.coeffs
    }

    pub fn coeff(&self, ctx: &ZqContext, i: usize) -> ZqElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Minimum coefficient valuation, `None` for the zero polynomial.
    pub fn min_valuation(&self) -> Option<i32> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn add(&self, other: &ZqPoly, ctx: &ZqContext) -> ZqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = ctx.zero();
        Self::new(
            (0..n)
                .map(|i| {
                    ctx.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn add_assign(&mut self, other: &ZqPoly, ctx: &ZqContext) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), ctx.zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = ctx.add(a, b);
        }
        let trimmed = std::mem::take(&mut self.coeffs);
        *self = Self::new(trimmed);
    }

    pub fn sub(&self, other: &ZqPoly, ctx: &ZqContext) -> ZqPoly {
        self.add(&other.neg(ctx), ctx)
    }

    pub fn neg(&self, ctx: &ZqContext) -> ZqPoly {
        ZqPoly { coeffs: self.coeffs.iter().map(|c| ctx.neg(c)).collect() }
    }

    pub fn scale(&self, c: &ZqElement, ctx: &ZqContext) -> ZqPoly {
        Self::new(self.coeffs.iter().map(|a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &ZqPoly, ctx: &ZqContext) -> ZqPoly {
        if self.is_zero() || other.is_zero() {
            return ZqPoly::zero();
        }
        let mut out = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = ctx.add(&out[i + j], &ctx.mul(a, b));
            }
        }
        Self::new(out)
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, ctx: &ZqContext, k: usize) -> ZqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut cs = vec![ctx.zero(); k];
        cs.extend(self.coeffs.iter().cloned());
        ZqPoly { coeffs: cs }
    }

    pub fn derivative(&self, ctx: &ZqContext) -> ZqPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| ctx.mul_int(c, i as i64))
                .collect(),
        )
    }

    /// Division with remainder by a polynomial with unit leading coefficient.
    pub fn divrem(&self, b: &ZqPoly, ctx: &ZqContext) -> Result<(ZqPoly, ZqPoly), ZqError> {
        let db = b.degree().ok_or(ZqError::DivisionByZero)?;
        let lead = b.coeffs.last().unwrap();
        let monic = lead.val == 0 && lead.mant[0] == 1 && lead.mant[1..].iter().all(|&c| c == 0);
        let lead_inv = if monic { None } else { Some(ctx.inv(lead)?) };
        if self.coeffs.len() <= db {
            return Ok((ZqPoly::zero(), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut quo = vec![ctx.zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            let c = match &lead_inv {
                None => r[k].clone(),
                Some(li) => ctx.mul(&r[k], li),
            };
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate().take(db) {
                r[k - db + j] = ctx.sub(&r[k - db + j], &ctx.mul(&c, bj));
            }
            r[k] = ctx.zero();
            quo[k - db] = c;
        }
        r.truncate(db);
        Ok((Self::new(quo), Self::new(r)))
    }

    pub fn rem(&self, b: &ZqPoly, ctx: &ZqContext) -> Result<ZqPoly, ZqError> {
        Ok(self.divrem(b, ctx)?.1)
    }

    /// Applies `sigma^j` to every coefficient.
    pub fn sigma_pow(&self, ctx: &ZqContext, j: usize) -> ZqPoly {
        ZqPoly { coeffs: self.coeffs.iter().map(|c| ctx.sigma_pow(c, j)).collect() }
    }

    pub fn eval(&self, x: &ZqElement, ctx: &ZqContext) -> ZqElement {
        self.coeffs.iter().rev().fold(ctx.zero(), |acc, c| ctx.add(&ctx.mul(&acc, x), c))
    }

    /// Polynomial in `x^k`: `f(x) -> f(x^k)`.
    pub fn compose_power(&self, ctx: &ZqContext, k: usize) -> ZqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut cs = vec![ctx.zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            cs[i * k] = c.clone();
        }
        Self::new(cs)
    }

    /// True if every coefficient vanishes modulo `p^prec`.
    pub fn is_zero_mod(&self, prec: i32) -> bool {
        self.coeffs.iter().all(|c| c.is_zero() || c.val >= prec)
    }
}
