#![allow(dead_code)]

use rand::Rng;
use zetafrob::gf::{is_separable, FieldDesc, FqPoly};

/// `F_{p^n}` with the first irreducible modulus in lexicographic order.
pub fn field(p: u64, n: usize) -> FieldDesc {
    if n == 1 {
        return FieldDesc::prime(p).unwrap();
    }
    let total = p.pow(n as u32);
    for idx in 0..total {
        let mut m: Vec<u64> = (0..n).map(|i| idx / p.pow(i as u32) % p).collect();
        m.push(1);
        if let Ok(f) = FieldDesc::new(p, n, Some(&m)) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Random separable polynomial of exact degree `d`; monic when `monic`.
pub fn random_curve<R: Rng>(f: &FieldDesc, d: usize, monic: bool, rng: &mut R) -> FqPoly {
    loop {
        let mut cs: Vec<_> = (0..d).map(|_| f.random(rng)).collect();
        cs.push(if monic { f.one() } else { f.random_nonzero(rng) });
        let q = FqPoly::new(f, cs).unwrap();
        if is_separable(&q).unwrap() {
            return q;
        }
    }
}
