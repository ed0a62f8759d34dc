//! Finite fields `F_q = F_p[t]/(m(t))` and univariate polynomials over them.
//!
//! Elements are stored as coordinate vectors in the power basis of the
//! supplied modulus. Nothing here is tuned for speed; the hot loops of the
//! point-counting engine run over the p-adic ring in [`crate::zq`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;
use smallvec::SmallVec;
use thiserror::Error;

/// Coordinates of a field element, length `n`.
pub type Coords = SmallVec<[u64; 4]>;

/// Largest supported characteristic (products of residues fit in `u64`).
pub const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("extension degree {0} needs an explicit modulus")]
    MissingModulus(usize),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("field parameters exceed supported size")]
    FieldTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("degree {0} is too small for a hyperelliptic model (need at least 3)")]
    DegreeTooSmall(usize),
}

/// Trial division; characteristics are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut f = 3u64;
    while f * f <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

struct FieldInner {
    p: u64,
    n: usize,
    /// Monic modulus, ascending coefficients, length `n + 1`.
    modulus: Vec<u64>,
    q: u128,
}

/// The field `F_q = F_p[t]/(m(t))`. Cheap to clone.
#[derive(Clone)]
pub struct FieldDesc(Arc<FieldInner>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() == 1 {
            write!(f, "F_{}", self.p())
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p(), self.n(), self.modulus())
        }
    }
}

impl FieldDesc {
    /// Builds and validates `F_{p^n}`. For `n = 1` the modulus may be omitted
    /// (the prime field, generator `t = 0`); for `n > 1` it is required and
    /// must be monic and irreducible over `F_p`.
    pub fn new(p: u64, n: usize, modulus: Option<&[u64]>) -> Result<Self, GfError> {
        if p == 2 {
            return Err(GfError::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(GfError::FieldTooLarge);
        }
        if n == 0 {
            return Err(GfError::BadModulus("extension degree must be positive".into()));
        }
        let modulus: Vec<u64> = match modulus {
            None if n == 1 => vec![0, 1],
            None => return Err(GfError::MissingModulus(n)),
            Some(m) => {
                if m.len() != n + 1 {
                    return Err(GfError::BadModulus(format!(
                        "expected {} coefficients, got {}",
                        n + 1,
                        m.len()
                    )));
                }
                if let Some(c) = m.iter().find(|&&c| c >= p) {
                    return Err(GfError::BadModulus(format!("coefficient {c} not in [0, {p})")));
                }
                if m[n] != 1 {
                    return Err(GfError::BadModulus("modulus must be monic".into()));
                }
                m.to_vec()
            }
        };
        let q = (p as u128).checked_pow(n as u32).ok_or(GfError::FieldTooLarge)?;
        if q > (1u128 << 100) {
            return Err(GfError::FieldTooLarge);
        }
        let field = FieldDesc(Arc::new(FieldInner { p, n, modulus, q }));
        if n > 1 && !field.modulus_is_irreducible() {
            return Err(GfError::ReducibleModulus { p });
        }
        Ok(field)
    }

    pub fn prime(p: u64) -> Result<Self, GfError> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn q(&self) -> u128 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn prime_field(&self) -> FieldDesc {
        if self.n() == 1 && self.0.modulus == [0, 1] {
            self.clone()
        } else {
            FieldDesc::prime(self.p()).expect("characteristic already validated")
        }
    }

    // gcd(t^{p^i} - t, m) = 1 for 0 < i < n and t^{p^n} = t mod m.
    fn modulus_is_irreducible(&self) -> bool {
        let fp = self.prime_field();
        let m = FqPoly::from_u64s(&fp, &self.0.modulus);
        let t = FqPoly::x(&fp);
        let mut frob = t.clone();
        for i in 1..=self.n() {
            frob = frob.pow_mod(self.p() as u128, &m);
            let diff = &frob - &t;
            if i < self.n() {
                match poly_gcd(&diff, &m) {
                    Ok(g) if g.degree() == Some(0) => {}
                    _ => return false,
                }
            } else if !diff.is_zero() {
                return false;
            }
        }
        true
    }

    // ---- raw coordinate arithmetic -------------------------------------

    pub(crate) fn raw_add(&self, a: &[u64], b: &[u64]) -> Coords {
        let p = self.p();
        a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect()
    }

    pub(crate) fn raw_sub(&self, a: &[u64], b: &[u64]) -> Coords {
        let p = self.p();
        a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
    }

    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64]) -> Coords {
        let p = self.p();
        let n = self.n();
        if n == 1 {
            return smallvec::smallvec![a[0] * b[0] % p];
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let m = &self.0.modulus;
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                prod[k - n + j] = (prod[k - n + j] + c * (p - m[j])) % p;
            }
        }
        prod.truncate(n);
        prod.into_iter().collect()
    }

    /// Inverse via the extended Euclidean algorithm in `F_p[t]`.
    pub(crate) fn raw_inv(&self, a: &[u64]) -> Option<Coords> {
        if a.iter().all(|&c| c == 0) {
            return None;
        }
        let p = self.p();
        let n = self.n();
        if n == 1 {
            return Some(smallvec::smallvec![inv_mod_u64(a[0], p)]);
        }
        let fp = self.prime_field();
        let m = FqPoly::from_u64s(&fp, &self.0.modulus);
        let av = FqPoly::from_u64s(&fp, a);
        let (g, s, _) = poly_xgcd(&av, &m).ok()?;
        // g is a nonzero constant since m is irreducible and a != 0 mod m.
        let ginv = g.coeff(0).inv().ok()?;
        let s = s.scale(&ginv);
        let mut out: Coords = smallvec::smallvec![0; n];
        for (i, c) in s.coeffs().iter().enumerate() {
            out[i] = c.c[0];
        }
        Some(out)
    }

    // ---- element construction ------------------------------------------

    pub fn zero(&self) -> FqElement {
        FqElement { field: self.clone(), c: smallvec::smallvec![0; self.n()] }
    }

    pub fn one(&self) -> FqElement {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FqElement {
        let mut e = self.zero();
        e.c[0] = v.rem_euclid(self.p() as i64) as u64;
        e
    }

    /// The class of `t`.
    pub fn generator(&self) -> FqElement {
        if self.n() == 1 {
            return self.from_int(-(self.0.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.c[1] = 1;
        e
    }

    /// Element from power-basis coordinates (reduced mod p); missing
    /// high coordinates are zero.
    pub fn element(&self, coords: &[u64]) -> Result<FqElement, GfError> {
        if coords.len() > self.n() {
            return Err(GfError::BadModulus(format!(
                "element has {} coordinates, field degree is {}",
                coords.len(),
                self.n()
            )));
        }
        let mut e = self.zero();
        for (i, &c) in coords.iter().enumerate() {
            e.c[i] = c % self.p();
        }
        Ok(e)
    }

    pub(crate) fn make_element(&self, c: Coords) -> FqElement {
        debug_assert_eq!(c.len(), self.n());
        FqElement { field: self.clone(), c }
    }

    /// The element whose base-`p` digits are its coordinates.
    pub fn element_from_index(&self, mut idx: u128) -> FqElement {
        let p = self.p() as u128;
        let mut e = self.zero();
        for i in 0..self.n() {
            e.c[i] = (idx % p) as u64;
            idx /= p;
        }
        e
    }

    /// All `q` elements, ordered by [`FqElement::index`].
    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.q()).map(move |i| self.element_from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElement {
        let p = self.p();
        let c = (0..self.n()).map(|_| rng.gen_range(0..p)).collect();
        self.make_element(c)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElement {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }
}

pub(crate) fn inv_mod_u64(a: u64, m: u64) -> u64 {
    use num_integer::Integer;
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// An element of `F_q`.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElement {
    field: FieldDesc,
    pub(crate) c: Coords,
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let parts: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(":"))
    }
}

impl FqElement {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// Base-`p` integer encoding of the coordinates.
    pub fn index(&self) -> u128 {
        let p = self.field.p() as u128;
        self.c.iter().rev().fold(0u128, |acc, &d| acc * p + d as u128)
    }

    fn same_field(&self, other: &FqElement) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &FqElement) -> Result<FqElement, GfError> {
        self.same_field(other)?;
        Ok(self.field.make_element(self.field.raw_add(&self.c, &other.c)))
    }

    pub fn checked_sub(&self, other: &FqElement) -> Result<FqElement, GfError> {
        self.same_field(other)?;
        Ok(self.field.make_element(self.field.raw_sub(&self.c, &other.c)))
    }

    pub fn checked_mul(&self, other: &FqElement) -> Result<FqElement, GfError> {
        self.same_field(other)?;
        Ok(self.field.make_element(self.field.raw_mul(&self.c, &other.c)))
    }

    pub fn checked_div(&self, other: &FqElement) -> Result<FqElement, GfError> {
        self.same_field(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn inv(&self) -> Result<FqElement, GfError> {
        self.field
            .raw_inv(&self.c)
            .map(|c| self.field.make_element(c))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn pow(&self, mut e: u128) -> FqElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `a -> a^p`.
    pub fn frobenius(&self) -> FqElement {
        self.pow(self.field.p() as u128)
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self) -> bool {
        self.is_zero() || self.pow((self.field.q() - 1) / 2).is_one()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&FqElement> for &FqElement {
            type Output = FqElement;
            fn $m(self, rhs: &FqElement) -> FqElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $tr<FqElement> for FqElement {
            type Output = FqElement;
            fn $m(self, rhs: FqElement) -> FqElement {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        let p = self.field.p();
        self.field.make_element(self.c.iter().map(|&x| (p - x) % p).collect())
    }
}

impl Neg for FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        -&self
    }
}

/// A polynomial over `F_q`, coefficients ascending, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct FqPoly {
    field: FieldDesc,
    coeffs: Vec<FqElement>,
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqPoly{:?}", self.coeffs)
    }
}

impl FqPoly {
    pub fn new(field: &FieldDesc, coeffs: Vec<FqElement>) -> Result<Self, GfError> {
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(GfError::FieldMismatch);
        }
        Ok(Self::from_trusted(field, coeffs))
    }

    fn from_trusted(field: &FieldDesc, mut coeffs: Vec<FqElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly { field: field.clone(), coeffs }
    }

    /// Polynomial over a prime-field-like `field` from integer coefficients.
    pub fn from_u64s(field: &FieldDesc, coeffs: &[u64]) -> Self {
        let cs = coeffs.iter().map(|&c| field.from_int((c % field.p()) as i64)).collect();
        Self::from_trusted(field, cs)
    }

    pub fn from_ints(field: &FieldDesc, coeffs: &[i64]) -> Self {
        let cs = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Self::from_trusted(field, cs)
    }

    pub fn zero(field: &FieldDesc) -> Self {
        FqPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldDesc) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FqElement) -> Self {
        let f = c.field().clone();
        Self::from_trusted(&f, vec![c])
    }

    pub fn x(field: &FieldDesc) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: FqElement, k: usize) -> Self {
        let f = c.field().clone();
        let mut cs = vec![f.zero(); k];
        cs.push(c);
        Self::from_trusted(&f, cs)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FqElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &FqElement) -> FqPoly {
        Self::from_trusted(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> FqPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn derivative(&self) -> FqPoly {
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.from_int((i as u64 % self.field.p()) as i64) * c)
            .collect();
        Self::from_trusted(&self.field, cs)
    }

    pub fn eval(&self, x: &FqElement) -> FqElement {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Euclidean division; `Err(DivisionByZero)` for a zero divisor.
    pub fn divrem(&self, b: &FqPoly) -> Result<(FqPoly, FqPoly), GfError> {
        if self.field != b.field {
            return Err(GfError::FieldMismatch);
        }
        let db = b.degree().ok_or(GfError::DivisionByZero)?;
        let lead_inv = b.lead().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((FqPoly::zero(&self.field), self.clone()));
        }
        let mut quo = vec![self.field.zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            let c = &r[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[k - db + j] = &r[k - db + j] - &(&c * bj);
            }
            quo[k - db] = c;
        }
        r.truncate(db);
        Ok((Self::from_trusted(&self.field, quo), Self::from_trusted(&self.field, r)))
    }

    pub fn rem(&self, b: &FqPoly) -> Result<FqPoly, GfError> {
        Ok(self.divrem(b)?.1)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &FqPoly) -> FqPoly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = FqPoly::one(&self.field).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m).unwrap();
            }
            base = (&base * &base).rem(m).unwrap();
            e >>= 1;
        }
        acc
    }

    /// Irreducibility over `F_q`: `gcd(x^{q^i} - x, h) = 1` for `0 < i < deg`
    /// and `x^{q^deg} = x mod h`.
    pub fn is_irreducible(&self) -> bool {
        let Some(deg) = self.degree() else { return false };
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        let x = FqPoly::x(&self.field);
        let mut frob = x.clone();
        for i in 1..=deg {
            frob = frob.pow_mod(self.field.q(), self);
            let diff = &frob - &x;
            if i < deg {
                match poly_gcd(&diff, self) {
                    Ok(g) if g.degree() == Some(0) => {}
                    _ => return false,
                }
            } else if !diff.is_zero() {
                return false;
            }
        }
        true
    }

    fn combine(&self, other: &FqPoly, f: impl Fn(&FqElement, &FqElement) -> FqElement) -> FqPoly {
        assert!(self.field == other.field, "field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let cs = (0..n)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::from_trusted(&self.field, cs)
    }
}

impl Add<&FqPoly> for &FqPoly {
    type Output = FqPoly;
    fn add(self, rhs: &FqPoly) -> FqPoly {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub<&FqPoly> for &FqPoly {
    type Output = FqPoly;
    fn sub(self, rhs: &FqPoly) -> FqPoly {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul<&FqPoly> for &FqPoly {
    type Output = FqPoly;
    fn mul(self, rhs: &FqPoly) -> FqPoly {
        assert!(self.field == rhs.field, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return FqPoly::zero(&self.field);
        }
        let mut cs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                cs[i + j] = &cs[i + j] + &(a * b);
            }
        }
        FqPoly::from_trusted(&self.field, cs)
    }
}

impl Neg for &FqPoly {
    type Output = FqPoly;
    fn neg(self) -> FqPoly {
        FqPoly::from_trusted(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Monic greatest common divisor.
pub fn poly_gcd(a: &FqPoly, b: &FqPoly) -> Result<FqPoly, GfError> {
    Ok(poly_xgcd(a, b)?.0)
}

/// Returns `(g, s, t)` with `g = s*a + t*b` monic.
pub fn poly_xgcd(a: &FqPoly, b: &FqPoly) -> Result<(FqPoly, FqPoly, FqPoly), GfError> {
    if a.field != b.field {
        return Err(GfError::FieldMismatch);
    }
    if a.is_zero() && b.is_zero() {
        return Err(GfError::BothZero);
    }
    let f = &a.field;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (FqPoly::one(f), FqPoly::zero(f));
    let (mut t0, mut t1) = (FqPoly::zero(f), FqPoly::one(f));
    while !r1.is_zero() {
        let (quo, rem) = r0.divrem(&r1)?;
        let s2 = &s0 - &(&quo * &s1);
        let t2 = &t0 - &(&quo * &t1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let linv = r0.lead().expect("nonzero gcd").inv()?;
    Ok((r0.scale(&linv), s0.scale(&linv), t0.scale(&linv)))
}

/// `gcd(Q, Q') = 1`, the condition for `y^2 = Q(x)` to be smooth.
pub fn is_separable(q: &FqPoly) -> Result<bool, GfError> {
    let d = q.degree().unwrap_or(0);
    if d < 3 {
        return Err(GfError::DegreeTooSmall(d));
    }
    let dq = q.derivative();
    if dq.is_zero() {
        return Ok(false);
    }
    Ok(poly_gcd(q, &dq)?.degree() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f9() -> FieldDesc {
        FieldDesc::new(3, 2, Some(&[1, 0, 1])).unwrap()
    }

    fn test_fields() -> Vec<FieldDesc> {
        vec![
            FieldDesc::prime(3).unwrap(),
            FieldDesc::prime(7).unwrap(),
            f9(),
            FieldDesc::new(5, 2, Some(&[2, 0, 1])).unwrap(),
            FieldDesc::new(3, 3, Some(&[1, 2, 0, 1])).unwrap(),
        ]
    }

    #[test]
    fn construction_errors() {
        assert!(FieldDesc::prime(7).is_ok());
        assert_eq!(FieldDesc::prime(2).unwrap_err(), GfError::EvenCharacteristic(2));
        assert_eq!(FieldDesc::prime(9).unwrap_err(), GfError::NotPrime(9));
        assert_eq!(FieldDesc::new(5, 2, None).unwrap_err(), GfError::MissingModulus(2));
        // t^2 + 2 = (t + 1)(t + 2) over F_3
        assert_eq!(
            FieldDesc::new(3, 2, Some(&[2, 0, 1])).unwrap_err(),
            GfError::ReducibleModulus { p: 3 }
        );
        assert!(matches!(FieldDesc::new(3, 2, Some(&[1, 0, 2])), Err(GfError::BadModulus(_))));
    }

    #[test]
    fn f9_accepts_t2_plus_1() {
        // no root of t^2 + 1 among {0, 1, 2}
        assert!((0..3u64).all(|t| (t * t + 1) % 3 != 0));
        let f = f9();
        assert_eq!(f.q(), 9);
    }

    #[test]
    fn frobenius_of_generator_in_f9() {
        let f = f9();
        let t = f.generator();
        assert_eq!(t.frobenius().coords(), &[0, 2]);
        assert_eq!(f.one().inv().unwrap(), f.one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(f9().zero().inv().unwrap_err(), GfError::DivisionByZero);
    }

    #[test]
    fn mismatched_fields() {
        let a = f9().one();
        let b = FieldDesc::prime(3).unwrap().one();
        assert_eq!(a.checked_add(&b).unwrap_err(), GfError::FieldMismatch);
        assert_eq!(
            FqPoly::new(&f9(), vec![b]).unwrap_err(),
            GfError::FieldMismatch
        );
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in test_fields() {
            for _ in 0..200 {
                let a = f.random(&mut rng);
                let b = f.random_nonzero(&mut rng);
                assert_eq!(&(&a * &b) * &b.inv().unwrap(), a);
                assert!(b.pow(f.q() - 1).is_one());
                let mut fr = a.clone();
                for _ in 0..f.n() {
                    fr = fr.frobenius();
                }
                assert_eq!(fr, a);
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_field() {
        for f in test_fields() {
            let fixed = f.elements().filter(|a| a.frobenius() == *a).count();
            assert_eq!(fixed as u64, f.p());
        }
    }

    #[test]
    fn gcd_examples() {
        let f5 = FieldDesc::prime(5).unwrap();
        let a = FqPoly::from_ints(&f5, &[-1, 0, 1]);
        let b = FqPoly::from_ints(&f5, &[-1, 1]);
        assert_eq!(poly_gcd(&a, &b).unwrap(), b);
        let g = poly_gcd(&FqPoly::from_ints(&f5, &[0, 0, 1]), &FqPoly::from_ints(&f5, &[0, 2]))
            .unwrap();
        assert_eq!(g, FqPoly::x(&f5));
        let f7 = FieldDesc::prime(7).unwrap();
        let q = FqPoly::from_ints(&f7, &[0, 1, 0, 1]);
        assert_eq!(poly_gcd(&q, &q.derivative()).unwrap(), FqPoly::one(&f7));
        assert_eq!(
            poly_gcd(&FqPoly::zero(&f7), &FqPoly::zero(&f7)).unwrap_err(),
            GfError::BothZero
        );
    }

    #[test]
    fn xgcd_bezout_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = f9();
        for _ in 0..50 {
            let a = FqPoly::new(&f, (0..5).map(|_| f.random(&mut rng)).collect()).unwrap();
            let b = FqPoly::new(&f, (0..4).map(|_| f.random(&mut rng)).collect()).unwrap();
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let (g, s, t) = poly_xgcd(&a, &b).unwrap();
            assert_eq!(&(&s * &a) + &(&t * &b), g);
            assert!(g.is_monic());
        }
    }

    #[test]
    fn separability_examples() {
        let f7 = FieldDesc::prime(7).unwrap();
        assert!(is_separable(&FqPoly::from_ints(&f7, &[0, 1, 0, 1])).unwrap());
        let f5 = FieldDesc::prime(5).unwrap();
        assert!(!is_separable(&FqPoly::from_ints(&f5, &[0, 0, 0, 1])).unwrap());
        assert_eq!(
            is_separable(&FqPoly::from_ints(&f5, &[1, 0, 1])).unwrap_err(),
            GfError::DegreeTooSmall(2)
        );
    }

    #[test]
    fn x4_plus_1_over_f3() {
        // Euclid by hand: Q' = 4x^3 = x^3; Q mod x^3 = 1, so gcd = 1.
        let f3 = FieldDesc::prime(3).unwrap();
        let q = FqPoly::from_ints(&f3, &[1, 0, 0, 0, 1]);
        assert!(is_separable(&q).unwrap());
        // but it factors: (x^2 + x + 2)(x^2 + 2x + 2)
        let a = FqPoly::from_ints(&f3, &[2, 1, 1]);
        let b = FqPoly::from_ints(&f3, &[2, 2, 1]);
        assert_eq!(&a * &b, q);
        assert!(!q.is_irreducible());
    }

    // gcd(a, b) divides both, and every common divisor divides it:
    // exhaustive over monic divisors of degree <= 3 over F_3.
    #[test]
    fn gcd_is_greatest_common_divisor_exhaustive() {
        let f3 = FieldDesc::prime(3).unwrap();
        let mut divisors = Vec::new();
        for deg in 1..=3usize {
            for idx in 0..3u64.pow(deg as u32) {
                let mut cs: Vec<i64> = (0..deg).map(|i| ((idx / 3u64.pow(i as u32)) % 3) as i64).collect();
                cs.push(1);
                divisors.push(FqPoly::from_ints(&f3, &cs));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let rp = |rng: &mut ChaCha8Rng| {
                let deg = rng.gen_range(1..=3);
                FqPoly::new(&f3, (0..=deg).map(|_| f3.random(rng)).collect()).unwrap()
            };
            let (a, b) = (rp(&mut rng), rp(&mut rng));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let g = poly_gcd(&a, &b).unwrap();
            assert!(a.rem(&g).unwrap().is_zero() && b.rem(&g).unwrap().is_zero());
            for dv in &divisors {
                if a.rem(dv).unwrap().is_zero() && b.rem(dv).unwrap().is_zero() {
                    assert!(g.rem(dv).unwrap().is_zero());
                }
            }
        }
    }

    // Separable iff d distinct roots in a splitting field. Irreducible factors
    // of a cubic over F_3 have degree 1, 2 or 3, so the distinct roots are
    // those in F_9 plus those in F_27 minus the ones in F_3.
    #[test]
    fn separability_matches_root_count_for_cubics_over_f3() {
        let f3 = FieldDesc::prime(3).unwrap();
        let exts = [f9(), FieldDesc::new(3, 3, Some(&[1, 2, 0, 1])).unwrap()];
        let roots_in = |f: &FieldDesc, q: &FqPoly| {
            let big: Vec<FqElement> =
                q.coeffs().iter().map(|c| f.from_int(c.coords()[0] as i64)).collect();
            let qb = FqPoly::new(f, big).unwrap();
            f.elements().filter(|x| qb.eval(x).is_zero()).count()
        };
        for idx in 0..27u64 {
            let cs = [(idx % 3) as i64, ((idx / 3) % 3) as i64, ((idx / 9) % 3) as i64, 1];
            let q = FqPoly::from_ints(&f3, &cs);
            let roots = roots_in(&exts[0], &q) + roots_in(&exts[1], &q) - roots_in(&f3, &q);
            assert_eq!(is_separable(&q).unwrap(), roots == 3, "Q = {cs:?}");
        }
    }
}
