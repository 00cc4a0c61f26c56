//! Oracles shared by the integration tests. Everything here is written from
//! the defining relations only and shares no code with the engine.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use modinv_core::{Context, Element, MatrixFp, Monomial};
use rand::Rng;

#[derive(Clone, Copy, Debug)]
enum Gen {
    X(usize),
    Y(usize),
}

/// `St^{S,R}(a)` by the two-factor Cartan formula
/// `St^{S,R}(uv) = Σ (-1)^{(dim u + ℓ(S1))ℓ(S2)} (S:S1,S2) St^{S1,R1}(u) St^{S2,R2}(v)`
/// applied to the fully unfolded generator word of each term (`y_i^m` as `m`
/// letters), with the generator values
/// `St^{(u)}x = y^{p^u}`, `St^{Δ_j}y = y^{p^j}` and every other non-identity
/// operation killing a generator.
pub fn naive_apply(ctx: Context, s: &[u32], r: &[u64], a: &Element) -> Element {
    let mut total = Element::zero(ctx);
    for t in a.terms() {
        let mut word = Vec::new();
        for i in t.mono.ext_indices() {
            word.push(Gen::X(i));
        }
        for i in 1..=ctx.n() {
            for _ in 0..t.mono.exp(i) {
                word.push(Gen::Y(i));
            }
        }
        let mut memo = HashMap::new();
        let value = unfold(ctx, &word, 0, s.to_vec(), r.to_vec(), &mut memo);
        total = total.add(&value.scalar_mul(t.coeff)).unwrap();
    }
    total
}

type Memo = HashMap<(usize, Vec<u32>, Vec<u64>), Element>;

fn unfold(ctx: Context, word: &[Gen], pos: usize, s: Vec<u32>, r: Vec<u64>, memo: &mut Memo) -> Element {
    if pos == word.len() {
        return if s.is_empty() && r.iter().all(|&x| x == 0) { Element::one(ctx) } else { Element::zero(ctx) };
    }
    let key = (pos, s.clone(), r.clone());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let p = ctx.p();
    let mut out = Element::zero(ctx);
    match word[pos] {
        Gen::X(i) => {
            // identity on x: S1 = ∅, sign (-1)^{|S|}
            let rest = unfold(ctx, word, pos + 1, s.clone(), r.clone(), memo);
            let sign = if s.len() % 2 == 1 { p - 1 } else { 1 };
            out = out.add(&Element::x(ctx, i).unwrap().mul(&rest).unwrap().scalar_mul(sign)).unwrap();
            // one Q_u lands on x: S1 = (u) at position t, so the sign is
            // (-1)^{(1 + 1)(|S|-1)} (S:S1,S2) = (-1)^t
            for t in 0..s.len() {
                let mut s2 = s.clone();
                let u = s2.remove(t);
                let rest = unfold(ctx, word, pos + 1, s2, r.clone(), memo);
                let img = Element::y_pow(ctx, i, p.pow(u)).unwrap();
                let term = img.mul(&rest).unwrap();
                out = out.add(&if t % 2 == 1 { term.neg() } else { term }).unwrap();
            }
        }
        Gen::Y(i) => {
            let rest = unfold(ctx, word, pos + 1, s.clone(), r.clone(), memo);
            out = out.add(&Element::y(ctx, i).unwrap().mul(&rest).unwrap()).unwrap();
            for j in 0..r.len() {
                if r[j] == 0 {
                    continue;
                }
                let mut r2 = r.clone();
                r2[j] -= 1;
                let rest = unfold(ctx, word, pos + 1, s.clone(), r2, memo);
                let img = Element::y_pow(ctx, i, p.pow(j as u32 + 1)).unwrap();
                out = out.add(&img.mul(&rest).unwrap()).unwrap();
            }
        }
    }
    memo.insert(key, out.clone());
    out
}

/// Element from `(coeff, exterior indices, exponents)` triples.
pub fn element(ctx: Context, terms: &[(u64, Vec<usize>, Vec<u64>)]) -> Element {
    Element::from_terms(ctx, terms.iter().map(|(c, ext, exps)| (*c, Monomial::new(ext, exps).expect("valid monomial"))))
        .unwrap()
}

/// A random element with at most `max_terms` terms and `y`-exponents up to
/// `max_exp`.
pub fn random_element(ctx: Context, rng: &mut impl Rng, max_terms: usize, max_exp: u64) -> Element {
    let n = ctx.n();
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..count)
        .map(|_| {
            let ext: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
            let exps: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
            (rng.gen_range(1..ctx.p()), ext, exps)
        })
        .collect();
    element(ctx, &terms)
}

/// A random non-zero homogeneous element: every term has `ext_count` exterior
/// letters and `y`-degree `ydeg`.
pub fn random_homogeneous(ctx: Context, rng: &mut impl Rng, max_terms: usize, ext_count: usize, ydeg: u64) -> Element {
    loop {
        let a = homogeneous_attempt(ctx, rng, max_terms, ext_count, ydeg);
        if !a.is_zero() {
            return a;
        }
    }
}

fn homogeneous_attempt(ctx: Context, rng: &mut impl Rng, max_terms: usize, ext_count: usize, ydeg: u64) -> Element {
    let n = ctx.n();
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..count)
        .map(|_| {
            let mut pool: Vec<usize> = (1..=n).collect();
            let mut ext = Vec::new();
            for _ in 0..ext_count.min(n) {
                ext.push(pool.remove(rng.gen_range(0..pool.len())));
            }
            ext.sort_unstable();
            let mut exps = vec![0u64; n];
            for _ in 0..ydeg {
                exps[rng.gen_range(0..n)] += 1;
            }
            (rng.gen_range(1..ctx.p()), ext, exps)
        })
        .collect();
    element(ctx, &terms)
}

fn det_mod(rows: &[Vec<u64>], p: u64) -> u64 {
    // cofactor expansion; matrices here are at most 4x4
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0u64;
    for j in 0..n {
        let minor: Vec<Vec<u64>> = rows[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &v)| v).collect())
            .collect();
        let term = rows[0][j] * det_mod(&minor, p) % p;
        total = if j % 2 == 0 { (total + term) % p } else { (total + p - term) % p };
    }
    total
}

pub fn random_invertible(ctx: Context, rng: &mut impl Rng) -> MatrixFp {
    let (p, n) = (ctx.p(), ctx.n());
    loop {
        let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        if det_mod(&rows, p) != 0 {
            return MatrixFp::new(ctx, &rows).unwrap();
        }
    }
}

pub fn random_unitriangular(ctx: Context, rng: &mut impl Rng) -> MatrixFp {
    let (p, n) = (ctx.p(), ctx.n());
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => 0,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Greater => rng.gen_range(0..p),
                })
                .collect()
        })
        .collect();
    MatrixFp::new(ctx, &rows).unwrap()
}

/// Rejection sampling of `g` with `det(g)^d = 1`.
pub fn random_sl_d(ctx: Context, rng: &mut impl Rng, d: u64) -> MatrixFp {
    let p = ctx.p();
    loop {
        let g = random_invertible(ctx, rng);
        let det = det_mod(&g.rows(), p);
        let mut pow = 1;
        for _ in 0..d {
            pow = pow * det % p;
        }
        if pow == 1 {
            return g;
        }
    }
}

pub fn det_of(g: &MatrixFp) -> u64 {
    det_mod(&g.rows(), g.ctx().p())
}

/// `I(u,v)` from the base cases `I(u,u+1) = I(u,u+2) = {0}` and the
/// recursion `I(u,v+2) = I(u,v+1) ∪ (p^{v-1} + I(u,v))`.
pub fn i_by_recursion(p: u64, u: u32, v: u32) -> BTreeSet<u64> {
    assert!(u < v);
    if v <= u + 2 {
        return BTreeSet::from([0]);
    }
    let w = v - 2;
    let mut out = i_by_recursion(p, u, w + 1);
    let shift = p.pow(w - 1);
    out.extend(i_by_recursion(p, u, w).into_iter().map(|a| shift + a));
    out
}

/// `J(u,v)` from `J(u,u+1) = J(u,u+2) = {0}`, `J(u,u) = ∅` and the recursion
/// `J(u,v+3) = J(u,v+2) ∪ (p^v + J(u,v+1)) ∪ (p^v + p^{v-1} + J(u,v))`.
/// Also asserts that the three pieces are pairwise disjoint.
pub fn j_by_recursion(p: u64, u: u32, v: u32) -> BTreeSet<u64> {
    if v <= u {
        return BTreeSet::new();
    }
    if v <= u + 2 {
        return BTreeSet::from([0]);
    }
    let w = v - 3;
    let a = j_by_recursion(p, u, w + 2);
    let b: BTreeSet<u64> = j_by_recursion(p, u, w + 1).into_iter().map(|x| p.pow(w) + x).collect();
    let c: BTreeSet<u64> = if w > u {
        j_by_recursion(p, u, w).into_iter().map(|x| p.pow(w) + p.pow(w - 1) + x).collect()
    } else {
        BTreeSet::new()
    };
    assert!(a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c), "pieces overlap at u={u} v={v}");
    a.union(&b).chain(c.iter()).copied().collect()
}
