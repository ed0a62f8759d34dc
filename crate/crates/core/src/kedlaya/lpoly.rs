use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::model::binomial;
use super::KedlayaError;

/// `L(X) = X^{2g} + c_{2g-1} X^{2g-1} + ... + c_0`, the characteristic
/// polynomial of the q-power Frobenius, with `c_0 = q^g`. Coefficients are
/// stored in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub q: u128,
    pub g: usize,
    pub coeffs: Vec<BigInt>,
}

impl LPolynomial {
    pub fn new(q: u128, g: usize, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), 2 * g + 1);
        LPolynomial { q, g, coeffs }
    }

    /// `L(1) = #J(F_q)`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `L(-X)`, the polynomial of the quadratic twist.
    pub fn twist(&self) -> LPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        LPolynomial { q: self.q, g: self.g, coeffs }
    }

    /// Power sums `S_r` of the reciprocal roots, `r = 1..=rmax`, so that
    /// `#X(F_{q^r}) = q^r + 1 - S_r`.
    pub fn power_sums(&self, rmax: usize) -> Vec<BigInt> {
        // L(X) = prod (X - a_i): e_i = (-1)^i c_{2g-i}
        let top = 2 * self.g;
        let e = |i: usize| -> BigInt {
            if i > top {
                BigInt::zero()
            } else if i.is_multiple_of(2) {
                self.coeffs[top - i].clone()
            } else {
                -&self.coeffs[top - i]
            }
        };
        let mut s: Vec<BigInt> = Vec::with_capacity(rmax);
        for r in 1..=rmax {
            let mut acc = e(r) * BigInt::from(r);
            if r % 2 == 0 {
                acc = -acc;
            }
            for i in 1..r {
                let term = e(i) * &s[r - i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            s.push(acc);
        }
        s
    }

    /// `#X(F_{q^r})` for `r = 1..=rmax`.
    pub fn point_counts(&self, rmax: usize) -> Vec<BigInt> {
        self.power_sums(rmax)
            .into_iter()
            .enumerate()
            .map(|(i, s)| BigInt::from(self.q).pow(i as u32 + 1) + 1 - s)
            .collect()
    }

    /// Checks the functional equation, the Weil bounds and `L(1) > 0`.
    pub fn check(&self) -> Result<(), KedlayaError> {
        let g = self.g;
        let q = BigInt::from(self.q);
        if self.coeffs[2 * g] != BigInt::from(1) {
            return Err(KedlayaError::WeilBoundViolation {
                index: 2 * g,
                value: self.coeffs[2 * g].to_string(),
                bound: "1".into(),
            });
        }
        for i in 0..g {
            let expect = q.pow((g - i) as u32) * &self.coeffs[2 * g - i];
            if self.coeffs[i] != expect {
                return Err(KedlayaError::WeilBoundViolation {
                    index: i,
                    value: self.coeffs[i].to_string(),
                    bound: format!("= q^{} c_{}", g - i, 2 * g - i),
                });
            }
        }
        for i in 1..=g {
            weil_ok(&self.coeffs[2 * g - i], g, i, &q)?;
        }
        let l1 = self.eval_at_one();
        if !l1.is_positive() {
            return Err(KedlayaError::NonPositiveJacobianOrder(l1.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for LPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 if a == BigInt::from(1) => write!(f, "X")?,
                1 => write!(f, "{a}*X")?,
                _ if a == BigInt::from(1) => write!(f, "X^{i}")?,
                _ => write!(f, "{a}*X^{i}")?,
            }
        }
        Ok(())
    }
}

/// `|c_{2g-i}| <= binom(2g, i) q^{i/2}`, checked exactly as `c^2 <= binom^2 q^i`.
fn weil_ok(c: &BigInt, g: usize, i: usize, q: &BigInt) -> Result<(), KedlayaError> {
    let b = BigInt::from(binomial(2 * g, i));
    if c * c > &b * &b * q.pow(i as u32) {
        return Err(KedlayaError::WeilBoundViolation {
            index: 2 * g - i,
            value: c.to_string(),
            bound: format!("{b} * q^({i}/2)"),
        });
    }
    Ok(())
}

/// Recovers `L(X)` from `c_{2g-1}, ..., c_g` modulo `modulus`, using the
/// symmetric lift and `c_i = q^{g-i} c_{2g-i}`. `twisted` replaces the
/// result by `L(-X)`.
pub fn lift_lpoly(
    residues: &[u64],
    modulus: u64,
    g: usize,
    q: u128,
    twisted: bool,
) -> Result<LPolynomial, KedlayaError> {
    assert_eq!(residues.len(), g);
    let m = BigInt::from(modulus);
    let half = &m / 2;
    let qb = BigInt::from(q);
    let mut coeffs = vec![BigInt::zero(); 2 * g + 1];
    coeffs[2 * g] = BigInt::from(1);
    for (r, &res) in residues.iter().enumerate() {
        // c_{2g-r-1}
        let mut c = BigInt::from(res % modulus);
        if c > half {
            c -= &m;
        }
        coeffs[2 * g - r - 1] = c;
    }
    for i in 0..g {
        coeffs[i] = qb.pow((g - i) as u32) * &coeffs[2 * g - i];
    }
    let mut l = LPolynomial::new(q, g, coeffs);
    if twisted {
        l = l.twist();
    }
    l.check()?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn symmetric_lift_and_functional_equation() {
        // y^2 = x^3 + x over F_3: L = X^2 + 3
        let l = lift_lpoly(&[0], 27, 1, 3, false).unwrap();
        assert_eq!(l.coeffs, ints(&[3, 0, 1]));
        // c_1 = -2 stored as 25 mod 27
        let l = lift_lpoly(&[25], 27, 1, 5, false).unwrap();
        assert_eq!(l.coeffs, ints(&[5, -2, 1]));
        assert_eq!(l.twist().coeffs, ints(&[5, 2, 1]));
        assert_eq!(lift_lpoly(&[25], 27, 1, 5, true).unwrap().coeffs, ints(&[5, 2, 1]));
    }

    #[test]
    fn weil_violation_detected() {
        // |c_1| <= 2 sqrt(5) ~ 4.47, so 5 is out of range
        let e = lift_lpoly(&[5], 1000, 1, 5, false).unwrap_err();
        assert!(matches!(e, KedlayaError::WeilBoundViolation { index: 1, .. }));
        assert!(lift_lpoly(&[4], 1000, 1, 5, false).is_ok());
    }

    #[test]
    fn point_counts_from_l() {
        let l = LPolynomial::new(3, 1, ints(&[3, 0, 1]));
        assert_eq!(l.point_counts(2), ints(&[4, 16]));
        assert_eq!(l.eval_at_one(), BigInt::from(4));
        assert_eq!(l.to_string(), "X^2 + 3");
        let l = LPolynomial::new(5, 1, ints(&[5, -2, 1]));
        assert_eq!(l.to_string(), "X^2 - 2*X + 5");
        assert_eq!(l.point_counts(1), ints(&[4]));
    }
}
