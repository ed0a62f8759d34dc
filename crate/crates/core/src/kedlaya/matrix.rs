use rayon::prelude::*;

use super::{
    frobenius_image, frobenius_y_series, reduce_to_basis, Basis, BasisChoice, KedlayaError,
    LiftedCurve, PrecisionPlan, Strip,
};
use crate::zq::{ZqContext, ZqElement};

/// Square matrix over the truncated ring. Column `j` holds the coordinates of
/// the image of basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobMatrix {
    size: usize,
    entries: Vec<ZqElement>,
}

impl FrobMatrix {
    pub fn from_columns(cols: Vec<Vec<ZqElement>>) -> Self {
        let size = cols.len();
        let mut entries = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in &cols {
                assert_eq!(c.len(), size, "matrix must be square");
                entries.push(c[r].clone());
            }
        }
        FrobMatrix { size, entries }
    }

    pub fn identity(ctx: &ZqContext, size: usize) -> Self {
        let mut entries = vec![ctx.zero(); size * size];
        for i in 0..size {
            entries[i * size + i] = ctx.one();
        }
        FrobMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &ZqElement {
        &self.entries[row * self.size + col]
    }

    pub fn column(&self, col: usize) -> Vec<ZqElement> {
        (0..self.size).map(|r| self.get(r, col).clone()).collect()
    }

    /// Minimum valuation over all entries, `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i32> {
        self.entries.iter().filter_map(|e| e.valuation()).min()
    }

    /// Minimum valuation of each image vector (column).
    pub fn column_min_valuations(&self) -> Vec<Option<i32>> {
        (0..self.size)
            .map(|c| (0..self.size).filter_map(|r| self.get(r, c).valuation()).min())
            .collect()
    }

    pub fn mul(&self, other: &FrobMatrix, ctx: &ZqContext) -> FrobMatrix {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let entries = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (r, c) = (idx / n, idx % n);
                (0..n).fold(ctx.zero(), |acc, k| {
                    ctx.add(&acc, &ctx.mul(self.get(r, k), other.get(k, c)))
                })
            })
            .collect();
        FrobMatrix { size: n, entries }
    }

    pub fn sigma_pow(&self, j: usize, ctx: &ZqContext) -> FrobMatrix {
        FrobMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| ctx.sigma_pow(e, j)).collect(),
        }
    }

    pub fn trace(&self, ctx: &ZqContext) -> ZqElement {
        (0..self.size).fold(ctx.zero(), |acc, i| ctx.add(&acc, self.get(i, i)))
    }

    /// Entries as `Z_q` residues mod `p^prec`, row-major.
    pub fn residues(&self, ctx: &ZqContext, prec: u32) -> Result<Vec<Vec<u64>>, KedlayaError> {
        self.entries
            .iter()
            .map(|e| Ok(ctx.residue(e, prec)?.to_vec()))
            .collect()
    }
}

/// The matrix of the p-power Frobenius on the chosen basis.
pub fn build_frobenius_matrix(
    curve: &LiftedCurve,
    basis: Basis,
    plan: &PrecisionPlan,
) -> Result<FrobMatrix, KedlayaError> {
    let k = basis.k();
    let series = frobenius_y_series(curve, k, plan)?;
    let cols = (0..curve.d - 1)
        .into_par_iter()
        .map(|i| {
            let form = frobenius_image(curve, i, k, &series, plan)?;
            reduce_to_basis(&form, basis, curve)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FrobMatrix::from_columns(cols))
}

/// `M sigma(M) ... sigma^{n-1}(M)`, the matrix of the q-power Frobenius.
pub fn twisted_power(m: &FrobMatrix, n: usize, ctx: &ZqContext) -> FrobMatrix {
    assert!(n >= 1);
    // T_{2k} = T_k sigma^k(T_k), T_{2k+1} = T_{2k} sigma^{2k}(M)
    let mut t = m.clone();
    let mut len = 1usize;
    let bits = usize::BITS - n.leading_zeros();
    for b in (0..bits - 1).rev() {
        t = t.mul(&t.sigma_pow(len, ctx), ctx);
        len *= 2;
        if (n >> b) & 1 == 1 {
            t = t.mul(&m.sigma_pow(len, ctx), ctx);
            len += 1;
        }
    }
    debug_assert_eq!(len, n);
    t
}

/// The coefficients `c_{2g-1}, ..., c_g` of the characteristic polynomial of
/// the q-power Frobenius (after removing the redundant eigenvalue), as
/// residues mod `p^prec`. Entry `r - 1` is `c_{2g-r}`.
pub fn charpoly_mod(
    nmat: &FrobMatrix,
    g: usize,
    choice: BasisChoice,
    q: u128,
    prec: u32,
    ctx: &ZqContext,
) -> Result<Vec<u64>, KedlayaError> {
    let mut traces = Vec::with_capacity(g);
    let mut pw = nmat.clone();
    let qz = ctx.from_i128(q as i128);
    for r in 1..=g {
        if r > 1 {
            pw = pw.mul(nmat, ctx);
        }
        let mut t = pw.trace(ctx);
        match choice.strip {
            Strip::None => {}
            Strip::MinusQ => t = ctx.sub(&t, &ctx.pow(&qz, r as u64)),
            Strip::MinusOne => t = ctx.sub(&t, &ctx.one()),
        }
        traces.push(t);
    }
    // e_r = (1/r) sum_{i=1}^r (-1)^{i-1} e_{r-i} t_i
    let mut e = vec![ctx.one()];
    for r in 1..=g {
        let mut acc = ctx.zero();
        for i in 1..=r {
            let term = ctx.mul(&e[r - i], &traces[i - 1]);
            acc = if i % 2 == 1 { ctx.add(&acc, &term) } else { ctx.sub(&acc, &term) };
        }
        e.push(ctx.div_int(&acc, r as i64)?);
    }
    // round trip: p_r = sum_{i=1}^{r-1} (-1)^{i-1} e_i p_{r-i} + (-1)^{r-1} r e_r
    for r in 1..=g {
        let mut acc = ctx.mul_int(&e[r], r as i64);
        if r % 2 == 0 {
            acc = ctx.neg(&acc);
        }
        for i in 1..r {
            let term = ctx.mul(&e[i], &traces[r - i - 1]);
            acc = if i % 2 == 1 { ctx.add(&acc, &term) } else { ctx.sub(&acc, &term) };
        }
        if !ctx.eq_mod(&acc, &traces[r - 1], prec as i32) {
            return Err(KedlayaError::NewtonDivisionFailure(format!(
                "power sum {r} does not round trip mod p^{prec}"
            )));
        }
    }
    (1..=g)
        .map(|r| {
            let c = if r % 2 == 1 { ctx.neg(&e[r]) } else { e[r].clone() };
            Ok(ctx.zp_residue(&c, prec)?)
        })
        .collect()
}

/// Full characteristic polynomial `det(X I - A)` by Berkowitz's division-free
/// algorithm, coefficients in ascending order.
pub fn charpoly_full(a: &FrobMatrix, ctx: &ZqContext) -> Vec<ZqElement> {
    let n = a.size();
    // descending coefficients
    let mut v = vec![ctx.one()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C
        let mut t = vec![ctx.one(), ctx.neg(a.get(r, r))];
        let mut col: Vec<ZqElement> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(ctx.zero(), |acc, j| ctx.add(&acc, &ctx.mul(a.get(r, j), &col[j])));
            t.push(ctx.neg(&rc));
            col = (0..r)
                .map(|i| {
                    (0..r).fold(ctx.zero(), |acc, j| ctx.add(&acc, &ctx.mul(a.get(i, j), &col[j])))
                })
                .collect();
        }
        let mut nv = vec![ctx.zero(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                if i - j < t.len() {
                    *slot = ctx.add(slot, &ctx.mul(&t[i - j], vj));
                }
            }
        }
        v = nv;
    }
    v.reverse();
    v
}
