use rustc_hash::FxHashMap;

use super::{Accumulator, Context, Element, Monomial};
use crate::error::{Error, Result};
use crate::modp;

/// An `n×n` matrix over F_p acting on `P_n`.
///
/// Convention: `g` sends `x_j ↦ Σ_i g_{ij} x_i` and `y_j ↦ Σ_i g_{ij} y_i`,
/// i.e. the variable row vector is multiplied by `g` on the right. This is a
/// left action, `apply(g, apply(h, a)) == apply(g·h, a)`, and the upper
/// unitriangular matrices fix `x_1` and `y_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixFp {
    ctx: Context,
    entries: Vec<u64>,
}

impl MatrixFp {
    pub fn new(ctx: Context, rows: &[Vec<u64>]) -> Result<Self> {
        let n = ctx.n();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("matrix must be {n}x{n}")));
        }
        let entries = rows.iter().flatten().map(|&v| v % ctx.p()).collect();
        Ok(MatrixFp { ctx, entries })
    }

    pub fn identity(ctx: Context) -> Self {
        let n = ctx.n();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        MatrixFp { ctx, entries }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    /// Entry `g_{ij}`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[(i - 1) * self.ctx.n() + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.ctx.n()).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(self.ctx, other.ctx));
        }
        let (n, p) = (self.ctx.n(), self.ctx.p());
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for k in 0..n {
                    s = (s + modp::mul_mod(self.entries[i * n + k], other.entries[k * n + j], p)) % p;
                }
                entries[i * n + j] = s;
            }
        }
        Ok(MatrixFp { ctx: self.ctx, entries })
    }

    /// Determinant by Gaussian elimination mod p.
    pub fn det(&self) -> u64 {
        let (n, p) = (self.ctx.n(), self.ctx.p());
        let mut a = self.entries.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = (p - det) % p;
            }
            let pv = a[col * n + col];
            det = modp::mul_mod(det, pv, p);
            let inv = modp::inv_mod(pv, p);
            for r in col + 1..n {
                let f = modp::mul_mod(a[r * n + col], inv, p);
                if f == 0 {
                    continue;
                }
                for k in col..n {
                    let sub = modp::mul_mod(f, a[col * n + k], p);
                    a[r * n + k] = (a[r * n + k] + p - sub) % p;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    /// Upper triangular with ones on the diagonal.
    pub fn is_unitriangular(&self) -> bool {
        let n = self.ctx.n();
        (1..=n).all(|i| {
            (1..=n).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v == 1
                } else if i > j {
                    v == 0
                } else {
                    true
                }
            })
        })
    }

    /// Membership in `SL_n^d = {g : det(g)^d = 1}`.
    pub fn in_sl_d(&self, d: u64) -> bool {
        modp::pow_mod(self.det(), d, self.ctx.p()) == 1
    }

    /// Image of the generator column `j` as (coefficient, target index) pairs.
    fn column(&self, j: usize) -> Vec<(u64, usize)> {
        (1..=self.ctx.n())
            .filter_map(|i| {
                let c = self.get(i, j);
                (c != 0).then_some((c, i))
            })
            .collect()
    }

    /// Substitutes the linear change of variables into `a`.
    pub fn apply(&self, a: &Element) -> Result<Element> {
        a.same_ctx(&Element::zero(self.ctx))?;
        let ctx = self.ctx;
        let n = ctx.n();
        let x_images: Vec<Element> = (1..=n)
            .map(|j| {
                Element::from_terms(
                    ctx,
                    self.column(j).into_iter().map(|(c, i)| (c, Monomial::ONE.with_ext(1 << (i - 1)))),
                )
            })
            .collect::<Result<_>>()?;
        let y_images: Vec<Element> = (1..=n)
            .map(|j| {
                Element::from_terms(
                    ctx,
                    self.column(j).into_iter().map(|(c, i)| {
                        let mut m = Monomial::ONE;
                        m.exps[i - 1] = 1;
                        (c, m)
                    }),
                )
            })
            .collect::<Result<_>>()?;
        let mut y_pow_cache: FxHashMap<(usize, u64), Element> = FxHashMap::default();
        let mut acc = Accumulator::new(ctx);
        for t in a.terms() {
            let mut img = Element::constant(ctx, t.coeff);
            for i in t.mono.ext_indices() {
                img = img.mul(&x_images[i - 1])?;
            }
            for j in 1..=n {
                let e = t.mono.exp(j);
                if e == 0 {
                    continue;
                }
                let pw = match y_pow_cache.get(&(j, e)) {
                    Some(pw) => pw.clone(),
                    None => {
                        let pw = y_images[j - 1].pow(e)?;
                        y_pow_cache.insert((j, e), pw.clone());
                        pw
                    }
                };
                img = img.mul(&pw)?;
            }
            for s in img.terms() {
                acc.add(s.mono, s.coeff);
            }
        }
        Ok(acc.finish())
    }
}
