//! Brute-force point counting on `y^2 = Q(x)` over extensions of `F_q`, and
//! the zeta numerator recovered from the counts. Independent of the p-adic
//! code; used to check it.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{is_separable, FieldDesc, FqPoly, GfError};
use crate::kedlaya::LPolynomial;

/// Largest extension the oracle will enumerate.
pub const MAX_ORACLE_ELEMENTS: u128 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("F_{{q^{r}}} has {size} elements, above the enumeration limit")]
    TooLarge { r: usize, size: u128 },
    #[error("Newton identities gave a non-integral coefficient at X^{0}")]
    NonIntegralCoefficient(usize),
    #[error("the curve is singular or of degree < 3")]
    BadCurve,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `F_q[u]/(h)` for a monic irreducible `h` of degree `r`. Elements are flat
/// coordinate vectors: `r` blocks of `n` prime-field coordinates.
pub struct Extension {
    base: FieldDesc,
    r: usize,
    /// Low `r` coefficients of `h`, one block each.
    h_low: Vec<Vec<u64>>,
}

impl Extension {
    /// Picks `h` by seeded random search (`h = u` for `r = 1`).
    pub fn new(base: &FieldDesc, r: usize, seed: u64) -> Self {
        assert!(r >= 1);
        let h = if r == 1 {
            FqPoly::x(base)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (r as u64).wrapping_mul(0x9e37_79b9));
            loop {
                let mut cs: Vec<_> = (0..r).map(|_| base.random(&mut rng)).collect();
                cs.push(base.one());
                let h = FqPoly::new(base, cs).unwrap();
                if h.is_irreducible() {
                    break h;
                }
            }
        };
        let h_low = (0..r).map(|i| h.coeff(i).coords().to_vec()).collect();
        Extension { base: base.clone(), r, h_low }
    }

    pub fn size(&self) -> u128 {
        self.base.q().pow(self.r as u32)
    }

    fn width(&self) -> usize {
        self.r * self.base.n()
    }

    fn element_at(&self, mut idx: u128) -> Vec<u64> {
        let p = self.base.p() as u128;
        (0..self.width())
            .map(|_| {
                let c = (idx % p) as u64;
                idx /= p;
                c
            })
            .collect()
    }

    fn index(&self, a: &[u64]) -> usize {
        let p = self.base.p() as usize;
        a.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize)
    }

    fn embed(&self, c: &[u64]) -> Vec<u64> {
        let mut v = vec![0; self.width()];
        v[..c.len()].copy_from_slice(c);
        v
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.base.p();
        a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.base.n();
        let r = self.r;
        let f = &self.base;
        if r == 1 {
            return f.raw_mul(a, b).to_vec();
        }
        let mut prod: Vec<Vec<u64>> = vec![vec![0; n]; 2 * r - 1];
        for i in 0..r {
            let ai = &a[i * n..(i + 1) * n];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..r {
                let bj = &b[j * n..(j + 1) * n];
                let t = f.raw_mul(ai, bj);
                prod[i + j] = f.raw_add(&prod[i + j], &t).to_vec();
            }
        }
        for k in (r..2 * r - 1).rev() {
            let c = std::mem::replace(&mut prod[k], vec![0; n]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..r {
                let t = f.raw_mul(&c, &self.h_low[j]);
                prod[k - r + j] = f.raw_sub(&prod[k - r + j], &t).to_vec();
            }
        }
        prod.truncate(r);
        prod.concat()
    }

    /// Marks every square. One squaring per element is far cheaper than an
    /// Euler-criterion exponentiation per evaluation.
    fn square_table(&self) -> Vec<AtomicBool> {
        let size = self.size() as usize;
        let table: Vec<AtomicBool> = (0..size).map(|_| AtomicBool::new(false)).collect();
        (0..size).into_par_iter().for_each(|i| {
            let a = self.element_at(i as u128);
            let s = self.mul(&a, &a);
            table[self.index(&s)].store(true, Ordering::Relaxed);
        });
        table
    }
}

fn chi(table: &[AtomicBool], idx: usize) -> i64 {
    if idx == 0 {
        0
    } else if table[idx].load(Ordering::Relaxed) {
        1
    } else {
        -1
    }
}

/// `#X(F_{q^r})` for the smooth projective model of `y^2 = Q(x)`: affine
/// points plus one point at infinity for odd degree, `1 + chi(lc)` for even.
pub fn count_points_on(q: &FqPoly, r: usize, seed: u64) -> Result<u128, OracleError> {
    let field = q.field();
    let ext = Extension::new(field, r, seed);
    let size = ext.size();
    if size > MAX_ORACLE_ELEMENTS {
        return Err(OracleError::TooLarge { r, size });
    }
    let d = q.degree().ok_or(OracleError::BadCurve)?;
    let table = ext.square_table();
    let coeffs: Vec<Vec<u64>> = q.coeffs().iter().map(|c| ext.embed(c.coords())).collect();
    let affine: i64 = (0..size as usize)
        .into_par_iter()
        .map(|i| {
            let x = ext.element_at(i as u128);
            let mut acc = coeffs[d].clone();
            for c in coeffs[..d].iter().rev() {
                acc = ext.add(&ext.mul(&acc, &x), c);
            }
            1 + chi(&table, ext.index(&acc))
        })
        .sum();
    let infinity = if d % 2 == 1 { 1 } else { 1 + chi(&table, ext.index(&coeffs[d])) };
    Ok((affine + infinity) as u128)
}

/// Counts over `F_{q^r}` for `r = 1..=rmax`.
pub fn count_vector(q: &FqPoly, rmax: usize, seed: u64) -> Result<Vec<u128>, OracleError> {
    (1..=rmax).map(|r| count_points_on(q, r, seed)).collect()
}

/// `L(X)` from `#X(F_{q^r})`, `r = 1..=g`. With `S_i = q^i + 1 - N_i` the
/// reversed coefficients `a_r = c_{2g-r}` satisfy `r a_r = -sum_{i=1}^r S_i a_{r-i}`;
/// the functional equation gives the lower half.
pub fn lpoly_from_counts(counts: &[u128], q: u128, g: usize) -> Result<LPolynomial, OracleError> {
    assert!(counts.len() >= g);
    let qb = BigInt::from(q);
    let s: Vec<BigRational> = (1..=g)
        .map(|i| {
            BigRational::from_integer(qb.pow(i as u32) + 1 - BigInt::from(counts[i - 1]))
        })
        .collect();
    let mut c: Vec<BigRational> = vec![BigRational::one()];
    for r in 1..=g {
        let mut acc = BigRational::zero();
        for i in 1..=r {
            acc -= &s[i - 1] * &c[r - i];
        }
        c.push(acc / BigRational::from_integer(BigInt::from(r)));
    }
    let mut coeffs = vec![BigInt::zero(); 2 * g + 1];
    for (r, a) in c.iter().enumerate() {
        if !a.is_integer() {
            return Err(OracleError::NonIntegralCoefficient(2 * g - r));
        }
        coeffs[2 * g - r] = a.to_integer();
    }
    for i in 0..g {
        coeffs[i] = qb.pow((g - i) as u32) * &coeffs[2 * g - i];
    }
    Ok(LPolynomial::new(q, g, coeffs))
}

/// `L(X)` of `y^2 = Q(x)` by enumeration.
pub fn oracle_lpoly(q: &FqPoly, seed: u64) -> Result<LPolynomial, OracleError> {
    let d = q.degree().unwrap_or(0);
    if d < 3 || !is_separable(q)? {
        return Err(OracleError::BadCurve);
    }
    let g = (d - 1) / 2;
    let counts = count_vector(q, g, seed)?;
    lpoly_from_counts(&counts, q.field().q(), g)
}
