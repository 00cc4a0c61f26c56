//! Action of the Steenrod–Milnor operations `St^{S,R}` on `P_n`.
//!
//! On generators:
//!
//! * `St^{S,R} x_k` is `x_k` for `(∅, 0)`, `y_k^{p^u}` for `((u), 0)`, else 0;
//! * `St^{S,R} y_k` is `y_k` for `(∅, 0)`, `y_k^{p^i}` for `(∅, Δ_i)`, else 0;
//!
//! and on products by the Cartan formula
//!
//! ```text
//! St^{S,R}(uv) = Σ (-1)^{(dim u + ℓ(S1))·ℓ(S2)} (S:S1,S2) St^{S1,R1}(u) St^{S2,R2}(v)
//! ```
//!
//! over disjoint `S1 ∪ S2 = S` and `R1 + R2 = R`.
//!
//! [`apply`] evaluates a term in closed form. Writing the term as the ordered
//! sequence `x_{i_1} … x_{i_k} · y_1^{m_1} … y_n^{m_n}`, every element of `S`
//! has to land on a distinct exterior factor (the `y` relations kill any `S`
//! part), and `R` is shared out among the `y`-blocks with
//!
//! ```text
//! St^{∅,R}(y^m) = multinomial(m; m - Σr_i, r_1, r_2, …) · y^{m + Σ r_i (p^i - 1)}
//! ```
//!
//! The multinomial is reduced mod `p` digit by digit, so only the `R`-splits
//! with a non-zero coefficient are ever enumerated.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::modp;
use crate::poly::{Accumulator, Degree, Element, MAX_VARS};

/// The index `(S, R)` of `St^{S,R}`.
///
/// `S` is strictly increasing; trailing zeros of `R` are dropped so equal
/// operations compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MilnorOp {
    s: Vec<u32>,
    r: Vec<u64>,
}

impl MilnorOp {
    pub fn new(s: Vec<u32>, mut r: Vec<u64>) -> Result<Self> {
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!("S must be strictly increasing, got {s:?}")));
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        Ok(MilnorOp { s, r })
    }

    /// `St^{∅,(0)}`, the identity.
    pub fn identity() -> Self {
        MilnorOp::default()
    }

    /// `St_u = St^{(u),(0)}`.
    pub fn st_u(u: u32) -> Self {
        MilnorOp { s: vec![u], r: Vec::new() }
    }

    /// `St^{Δ_i}` for `i ≥ 1`.
    pub fn delta(i: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidArgument("Δ_i needs i ≥ 1".into()));
        }
        let mut r = vec![0; i];
        r[i - 1] = 1;
        Ok(MilnorOp { s: Vec::new(), r })
    }

    /// `P^r = St^{∅,(r)}`.
    pub fn steenrod_p(r: u64) -> Self {
        MilnorOp::new(Vec::new(), vec![r]).expect("empty S")
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn r(&self) -> &[u64] {
        &self.r
    }

    /// `Σ_{s∈S} (2p^s - 1) + Σ_i r_i (2p^i - 2)`.
    pub fn dimension_shift(&self, p: u64) -> Result<u64> {
        let overflow = || Error::Overflow("dimension shift");
        let mut total = 0u64;
        for &s in &self.s {
            let q = modp::checked_pow(p, s as u64).ok_or_else(overflow)?;
            total = total.checked_add(2 * q - 1).ok_or_else(overflow)?;
        }
        for (idx, &r) in self.r.iter().enumerate() {
            let q = modp::checked_pow(p, idx as u64 + 1).ok_or_else(overflow)?;
            let step = r.checked_mul(2 * q - 2).ok_or_else(overflow)?;
            total = total.checked_add(step).ok_or_else(overflow)?;
        }
        Ok(total)
    }
}

impl fmt::Display for MilnorOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "St^({:?},{:?})", self.s, self.r)
    }
}

/// A split `S = S1 ⊔ S2` together with the sign `(S:S1,S2)` of the
/// permutation taking `S` to the concatenation `S1 S2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSplit {
    pub s1: Vec<u32>,
    pub s2: Vec<u32>,
    pub negative: bool,
}

/// All `2^|S|` splits of `S`.
pub fn s_splits(s: &[u32]) -> Vec<SSplit> {
    let k = s.len();
    (0u32..1 << k)
        .map(|mask| {
            let mut s1 = Vec::new();
            let mut s2 = Vec::new();
            let mut inversions = 0usize;
            for (idx, &v) in s.iter().enumerate() {
                if mask >> idx & 1 == 1 {
                    // every S2 element already placed sits left of v in S
                    inversions += s2.len();
                    s1.push(v);
                } else {
                    s2.push(v);
                }
            }
            SSplit { s1, s2, negative: inversions % 2 == 1 }
        })
        .collect()
}

/// All `R1` with `R1 ≤ R` componentwise.
pub(crate) fn r_splits(r: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &ri in r {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=ri).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// One way `St^{∅,R_j}` acts non-trivially on a block `y^m`.
#[derive(Clone, Debug)]
struct BlockOption {
    part: Vec<u64>,
    coeff: u64,
    added: u64,
}

/// Non-zero options of `St^{∅,R'}(y^m)` over all `R' ≤ bound`.
fn block_options(m: u64, bound: &[u64], p: u64) -> Result<Vec<BlockOption>> {
    let len = bound.len();
    let mut out = vec![BlockOption { part: vec![0; len], coeff: 1, added: 0 }];
    if len == 0 {
        return Ok(out);
    }
    let mut place = 1u64;
    for d in modp::digits(m, p) {
        let mut next = Vec::new();
        for opt in &out {
            // distribute at most d units of this digit among the len components
            let mut comp = vec![0u64; len];
            loop {
                let used: u64 = comp.iter().sum();
                if used <= d {
                    let mut part = opt.part.clone();
                    let mut ok = true;
                    for (slot, &c) in part.iter_mut().zip(&comp) {
                        *slot += c * place;
                    }
                    for (slot, &b) in part.iter().zip(bound) {
                        if *slot > b {
                            ok = false;
                        }
                    }
                    if ok {
                        let c = modp::multinomial_mod(d, &comp, p);
                        if c != 0 {
                            next.push(BlockOption { part, coeff: modp::mul_mod(opt.coeff, c, p), added: 0 });
                        }
                    }
                }
                // odometer over comp with each entry ≤ d
                let mut idx = 0;
                loop {
                    if idx == len {
                        break;
                    }
                    comp[idx] += 1;
                    if comp[idx] <= d {
                        break;
                    }
                    comp[idx] = 0;
                    idx += 1;
                }
                if idx == len {
                    break;
                }
            }
        }
        out = next;
        place = place.saturating_mul(p);
    }
    for opt in out.iter_mut() {
        let mut added = 0u64;
        for (idx, &r) in opt.part.iter().enumerate() {
            let q = modp::checked_pow(p, idx as u64 + 1).ok_or(Error::Overflow("p^i"))?;
            added = r.checked_mul(q - 1).and_then(|v| v.checked_add(added)).ok_or(Error::Overflow("exponent"))?;
        }
        opt.added = added;
    }
    Ok(out)
}

/// Ways of feeding the elements of `S` to the exterior factors of a term:
/// `(surviving exterior mask, exponent increments, negative)`.
fn distribute_s(ext: u16, s: &[u32], p: u64) -> Result<Vec<(u16, [u64; MAX_VARS], bool)>> {
    let mut powers = Vec::with_capacity(s.len());
    for &v in s {
        powers.push(modp::checked_pow(p, v as u64).ok_or(Error::Overflow("p^s"))?);
    }
    let xs: Vec<usize> = (0..MAX_VARS).filter(|b| ext >> b & 1 == 1).collect();
    if s.len() > xs.len() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    // remaining: ascending indices into S still to be absorbed
    fn go(
        xs: &[usize],
        remaining: &mut Vec<usize>,
        powers: &[u64],
        kept: u16,
        inc: [u64; MAX_VARS],
        negative: bool,
        out: &mut Vec<(u16, [u64; MAX_VARS], bool)>,
    ) {
        let Some((&x, rest)) = xs.split_first() else {
            if remaining.is_empty() {
                out.push((kept, inc, negative));
            }
            return;
        };
        if remaining.len() > xs.len() {
            return;
        }
        // x stays: the rest of S moves past an odd generator
        go(rest, remaining, powers, kept | 1 << x, inc, negative ^ (remaining.len() % 2 == 1), out);
        for t in 0..remaining.len() {
            let idx = remaining.remove(t);
            let mut inc2 = inc;
            inc2[x] += powers[idx];
            go(rest, remaining, powers, kept, inc2, negative ^ (t % 2 == 1), out);
            remaining.insert(t, idx);
        }
    }
    let mut remaining: Vec<usize> = (0..s.len()).collect();
    go(&xs, &mut remaining, &powers, 0, [0; MAX_VARS], false, &mut out);
    Ok(out)
}

/// `St^{S,R}(a)`.
pub fn apply(op: &MilnorOp, a: &Element) -> Result<Element> {
    let ctx = a.ctx();
    let p = ctx.p();
    let n = ctx.n();
    let mut opts_cache: FxHashMap<u64, Vec<BlockOption>> = FxHashMap::default();
    let mut acc = Accumulator::new(ctx);

    for t in a.terms() {
        let dists = distribute_s(t.mono.ext_mask(), &op.s, p)?;
        if dists.is_empty() {
            continue;
        }
        // blocks: (variable, options keyed by their R-part)
        let mut blocks: Vec<(usize, &Vec<BlockOption>)> = Vec::new();
        for j in 1..=n {
            let m = t.mono.exp(j);
            if m == 0 {
                continue;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = opts_cache.entry(m) {
                e.insert(block_options(m, &op.r, p)?);
            }
        }
        for j in 1..=n {
            let m = t.mono.exp(j);
            if m != 0 {
                blocks.push((j, &opts_cache[&m]));
            }
        }

        let mut r_results: Vec<([u64; MAX_VARS], u64)> = Vec::new();
        let mut chosen = vec![0u64; MAX_VARS];
        share_r(&blocks, &op.r, &mut chosen, 1, p, &mut r_results);

        for &(kept, inc, negative) in &dists {
            for (added, coeff) in &r_results {
                let mut mono = t.mono.with_ext(kept);
                for j in 1..=n {
                    mono.add_exp(j, inc[j - 1])?;
                    mono.add_exp(j, added[j - 1])?;
                }
                acc.add_signed(mono, modp::mul_mod(t.coeff, *coeff, p), negative);
            }
        }
    }
    Ok(acc.finish())
}

/// Depth-first split of `R` over the blocks; pushes (per-variable exponent
/// increments, coefficient) for every complete split.
fn share_r(
    blocks: &[(usize, &Vec<BlockOption>)],
    remaining: &[u64],
    added: &mut Vec<u64>,
    coeff: u64,
    p: u64,
    out: &mut Vec<([u64; MAX_VARS], u64)>,
) {
    let Some(((var, opts), rest)) = blocks.split_first() else {
        if remaining.iter().all(|&r| r == 0) {
            let mut arr = [0; MAX_VARS];
            arr.copy_from_slice(&added[..MAX_VARS]);
            out.push((arr, coeff));
        }
        return;
    };
    for opt in opts.iter() {
        if opt.part.iter().zip(remaining).any(|(a, b)| a > b) {
            continue;
        }
        if rest.is_empty() && opt.part.as_slice() != remaining {
            continue;
        }
        let left: Vec<u64> = remaining.iter().zip(&opt.part).map(|(a, b)| a - b).collect();
        added[var - 1] = opt.added;
        share_r(rest, &left, added, modp::mul_mod(coeff, opt.coeff, p), p, out);
        added[var - 1] = 0;
    }
}

/// `St_u(a)`, computed as an antiderivation: `St_u(x_k) = y_k^{p^u}` and
/// `St_u(y_k) = 0`.
pub fn st_u(u: u32, a: &Element) -> Result<Element> {
    let ctx = a.ctx();
    let p = ctx.p();
    let q = modp::checked_pow(p, u as u64).ok_or(Error::Overflow("p^u"))?;
    let mut acc = Accumulator::new(ctx);
    for t in a.terms() {
        let ext = t.mono.ext_mask();
        for (pos, k) in t.mono.ext_indices().enumerate() {
            let mut mono = t.mono.with_ext(ext & !(1 << (k - 1)));
            mono.add_exp(k, q)?;
            acc.add_signed(mono, t.coeff, pos % 2 == 1);
        }
    }
    Ok(acc.finish())
}

/// `St^{Δ_i}(a)`, computed as a derivation: `St^{Δ_i}(y_k) = y_k^{p^i}` and
/// `St^{Δ_i}(x_k) = 0`.
pub fn st_delta(i: usize, a: &Element) -> Result<Element> {
    if i == 0 {
        return Err(Error::InvalidArgument("Δ_i needs i ≥ 1".into()));
    }
    let ctx = a.ctx();
    let p = ctx.p();
    let shift = modp::checked_pow(p, i as u64).ok_or(Error::Overflow("p^i"))? - 1;
    let mut acc = Accumulator::new(ctx);
    for t in a.terms() {
        for j in 1..=ctx.n() {
            let m = t.mono.exp(j);
            if m % p == 0 {
                continue;
            }
            let mut mono = t.mono;
            mono.add_exp(j, shift)?;
            acc.add(mono, modp::mul_mod(t.coeff, m % p, p));
        }
    }
    Ok(acc.finish())
}

/// `P^r(a)`: every `y_j^{m_j}` takes a share `r_j` with `Σ r_j = r`,
/// weighted by `Π C(m_j, r_j)`.
pub fn steenrod_p(r: u64, a: &Element) -> Result<Element> {
    if r == 0 {
        return Ok(a.clone());
    }
    let ctx = a.ctx();
    let p = ctx.p();
    let mut acc = Accumulator::new(ctx);
    let mut shares: FxHashMap<u64, Vec<u64>> = FxHashMap::default();
    for t in a.terms() {
        let vars: Vec<usize> = (1..=ctx.n()).filter(|&j| t.mono.exp(j) > 0).collect();
        let total: u64 = vars.iter().map(|&j| t.mono.exp(j)).sum();
        if total < r {
            continue;
        }
        for &j in &vars {
            let m = t.mono.exp(j);
            shares.entry(m).or_insert_with(|| dominated(m, r, p));
        }
        let lists: Vec<&[u64]> = vars.iter().map(|&j| shares[&t.mono.exp(j)].as_slice()).collect();
        let mut combos = Vec::new();
        p_shares(&lists, r, &mut Vec::with_capacity(vars.len()), &mut combos);
        for combo in combos {
            let mut mono = t.mono;
            let mut c = t.coeff;
            for (&rj, &j) in combo.iter().zip(&vars) {
                c = modp::mul_mod(c, modp::binomial_mod(t.mono.exp(j), rj, p), p);
                mono.add_exp(j, rj.checked_mul(p - 1).ok_or(Error::Overflow("exponent"))?)?;
            }
            acc.add(mono, c);
        }
    }
    Ok(acc.finish())
}

/// Values `0 ≤ v ≤ bound` whose base-`p` digits are dominated by those of `m`,
/// ascending.
fn dominated(m: u64, bound: u64, p: u64) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut place = 1u64;
    for d in modp::digits(m, p) {
        let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
        for &v in &out {
            for c in 0..=d {
                let w = v + c * place;
                if w <= bound {
                    next.push(w);
                }
            }
        }
        out = next;
        place = place.saturating_mul(p);
    }
    out.sort_unstable();
    out
}

fn p_shares(lists: &[&[u64]], remaining: u64, picked: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    match lists {
        [] => {
            if remaining == 0 {
                out.push(picked.clone());
            }
        }
        [last] => {
            if last.binary_search(&remaining).is_ok() {
                picked.push(remaining);
                out.push(picked.clone());
                picked.pop();
            }
        }
        [first, rest @ ..] => {
            for &v in first.iter().take_while(|&&v| v <= remaining) {
                picked.push(v);
                p_shares(rest, remaining - v, picked, out);
                picked.pop();
            }
        }
    }
}

/// The Cartan formula applied to a product `u·v`, with the two factors acted
/// on independently. `u` must be homogeneous.
pub fn cartan_product(op: &MilnorOp, u: &Element, v: &Element) -> Result<Element> {
    let dim_u = match u.degree() {
        Degree::Zero => return Ok(Element::zero(u.ctx())),
        Degree::Homogeneous(d) => d,
        Degree::Inhomogeneous => return Err(Error::InvalidArgument("left Cartan factor must be homogeneous".into())),
    };
    let mut pieces = Vec::new();
    for split in s_splits(&op.s) {
        let exponent = (dim_u + split.s1.len() as u64) * split.s2.len() as u64;
        let negative = (exponent % 2 == 1) ^ split.negative;
        for r1 in r_splits(&op.r) {
            let r2: Vec<u64> = op.r.iter().zip(&r1).map(|(a, b)| a - b).collect();
            let left = apply(&MilnorOp::new(split.s1.clone(), r1)?, u)?;
            if left.is_zero() {
                continue;
            }
            let right = apply(&MilnorOp::new(split.s2.clone(), r2)?, v)?;
            let prod = left.mul(&right)?;
            pieces.push(if negative { prod.neg() } else { prod });
        }
    }
    Element::sum(u.ctx(), &pieces)
}

impl Element {
    pub fn steenrod(&self, op: &MilnorOp) -> Result<Element> {
        apply(op, self)
    }
}
