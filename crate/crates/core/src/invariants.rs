//! Determinant invariants `[k; e_{k+1}, …, e_m]` and the Dickson and Mùi
//! invariants built from them.
//!
//! Brackets are expanded along their exterior rows:
//!
//! ```text
//! [k; e] = Σ_I sign(σ_I) · x_I · [e](y_{i_{k+1}}, …, y_{i_m})
//! ```
//!
//! over `k`-subsets `I ⊂ {1..m}`, where `σ_I` lists `I` ascending followed by
//! its complement ascending. No division by `k!` is needed.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::modp;
use crate::poly::{Accumulator, Context, Element, Monomial, MAX_VARS};

/// The data `(k; e_{k+1}, …, e_m)` of a bracket in the variables `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BracketSpec {
    pub k: usize,
    pub e: Vec<u32>,
    pub m: usize,
}

impl BracketSpec {
    pub fn new(k: usize, e: Vec<u32>, m: usize) -> Self {
        BracketSpec { k, e, m }
    }

    /// `[e_1, …, e_m]`, the `k = 0` case.
    pub fn y_only(e: Vec<u32>) -> Self {
        let m = e.len();
        BracketSpec { k: 0, e, m }
    }

    pub fn has_distinct_entries(&self) -> bool {
        let mut sorted = self.e.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    fn validate(&self, ctx: Context) -> Result<()> {
        if self.m > ctx.n() {
            return Err(Error::InvalidArgument(format!("bracket uses {} variables but n = {}", self.m, ctx.n())));
        }
        if self.k > self.m || self.e.len() != self.m - self.k {
            return Err(Error::InvalidArgument(format!(
                "bracket arity: k = {}, |e| = {}, m = {}",
                self.k,
                self.e.len(),
                self.m
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BracketSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.e.iter().map(|v| v.to_string()).collect();
        write!(f, "[{};{}]_{}", self.k, e.join(","), self.m)
    }
}

/// `[k; e]` as an element of `P_n`.
pub fn bracket(ctx: Context, spec: &BracketSpec) -> Result<Element> {
    spec.validate(ctx)?;
    let p = ctx.p();
    let (k, m) = (spec.k, spec.m);
    let mut powers = Vec::with_capacity(spec.e.len());
    for &e in &spec.e {
        powers.push(modp::checked_pow(p, e as u64).ok_or(Error::Overflow("p^e"))?);
    }
    let mut acc = Accumulator::new(ctx);
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != k {
            continue;
        }
        // inversions of σ_I: pairs (a ∈ I, b ∉ I) with b < a
        let mut inversions = 0usize;
        let mut outside = 0usize;
        let mut complement = Vec::with_capacity(m - k);
        for v in 0..m {
            if mask >> v & 1 == 1 {
                inversions += outside;
            } else {
                outside += 1;
                complement.push(v);
            }
        }
        let base = Monomial::ONE.with_ext(mask as u16);
        let mut remaining: Vec<usize> = (0..powers.len()).collect();
        expand_det(&complement, &powers, &mut remaining, base, inversions % 2 == 1, &mut acc)?;
    }
    Ok(acc.finish())
}

/// Leibniz expansion of `det(y_{c_a}^{q_b})`, first row first.
fn expand_det(
    vars: &[usize],
    powers: &[u64],
    remaining: &mut Vec<usize>,
    mono: Monomial,
    negative: bool,
    acc: &mut Accumulator,
) -> Result<()> {
    let Some((&v, rest)) = vars.split_first() else {
        acc.add_signed(mono, 1, negative);
        return Ok(());
    };
    for t in 0..remaining.len() {
        let idx = remaining.remove(t);
        let mut next = mono;
        next.add_exp(v + 1, powers[idx])?;
        let r = expand_det(rest, powers, remaining, next, negative ^ (t % 2 == 1), acc);
        remaining.insert(t, idx);
        r?;
    }
    Ok(())
}

/// Shorthand for `[e_1, …, e_m]` in the first `m = |e|` variables.
pub fn det_bracket(ctx: Context, e: &[u32]) -> Result<Element> {
    bracket(ctx, &BracketSpec::y_only(e.to_vec()))
}

/// Named invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InvariantName {
    L(usize),
    Ls(usize, usize),
    Q(usize, usize),
    V(usize),
    M(usize, Vec<u32>),
    Md(usize, u64, Vec<u32>),
}

impl fmt::Display for InvariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &[u32]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        match self {
            InvariantName::L(m) => write!(f, "L({m})"),
            InvariantName::Ls(m, s) => write!(f, "Ls({m},{s})"),
            InvariantName::Q(n, s) => write!(f, "Q({n},{s})"),
            InvariantName::V(m) => write!(f, "V({m})"),
            InvariantName::M(m, s) => write!(f, "M({m};{})", list(s)),
            InvariantName::Md(m, d, s) => write!(f, "Md({m},{d};{})", list(s)),
        }
    }
}

type CacheKey = (u64, usize, InvariantName);

fn cache() -> &'static RwLock<HashMap<CacheKey, Element>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Element>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(ctx: Context, name: InvariantName, build: impl FnOnce() -> Result<Element>) -> Result<Element> {
    let key = (ctx.p(), ctx.n(), name);
    if let Some(hit) = cache().read().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let value = build()?;
    cache().write().expect("cache lock").insert(key, value.clone());
    Ok(value)
}

fn check_m(ctx: Context, m: usize) -> Result<()> {
    if m > ctx.n() {
        return Err(Error::InvalidArgument(format!("invariant needs {m} variables but n = {}", ctx.n())));
    }
    Ok(())
}

/// `L_m = [0, 1, …, m-1]`; `L_0 = 1`.
pub fn l(ctx: Context, m: usize) -> Result<Element> {
    check_m(ctx, m)?;
    cached(ctx, InvariantName::L(m), || {
        let e: Vec<u32> = (0..m as u32).collect();
        det_bracket(ctx, &e)
    })
}

/// `L_{m,s} = [0, …, ŝ, …, m]` for `0 ≤ s ≤ m`.
pub fn ls(ctx: Context, m: usize, s: usize) -> Result<Element> {
    check_m(ctx, m)?;
    if s > m {
        return Err(Error::InvalidArgument(format!("L_{{m,s}} needs s ≤ m, got m = {m}, s = {s}")));
    }
    cached(ctx, InvariantName::Ls(m, s), || {
        let e: Vec<u32> = (0..=m as u32).filter(|&v| v as usize != s).collect();
        det_bracket(ctx, &e)
    })
}

/// Dickson invariant `Q_{n,s}` by `Q_{n,s} = Q_{n-1,s-1}^p + Q_{n-1,s} V_n^{p-1}`,
/// `Q_{n,n} = 1`, `Q_{n,t} = 0` for `t < 0`.
pub fn dickson_q(ctx: Context, n: usize, s: i64) -> Result<Element> {
    check_m(ctx, n)?;
    if s < 0 {
        return Ok(Element::zero(ctx));
    }
    let s = s as usize;
    if s > n {
        return Err(Error::InvalidArgument(format!("Q_{{n,s}} needs s ≤ n, got n = {n}, s = {s}")));
    }
    if s == n {
        return Ok(Element::one(ctx));
    }
    cached(ctx, InvariantName::Q(n, s), || {
        let p = ctx.p();
        let first = dickson_q(ctx, n - 1, s as i64 - 1)?.frobenius(1)?;
        let second = dickson_q(ctx, n - 1, s as i64)?;
        let v = mui_v(ctx, n)?.pow(p - 1)?;
        first.add(&second.mul(&v)?)
    })
}

/// Mùi invariant `V_m = Σ_{s<m} (-1)^{m+s-1} Q_{m-1,s} y_m^{p^s}`.
pub fn mui_v(ctx: Context, m: usize) -> Result<Element> {
    check_m(ctx, m)?;
    if m == 0 {
        return Err(Error::InvalidArgument("V_m needs m ≥ 1".into()));
    }
    cached(ctx, InvariantName::V(m), || {
        let p = ctx.p();
        let mut parts = Vec::with_capacity(m);
        for s in 0..m {
            let q = dickson_q(ctx, m - 1, s as i64)?;
            let y = Element::y_pow(ctx, m, modp::checked_pow(p, s as u64).ok_or(Error::Overflow("p^s"))?)?;
            parts.push(q.mul(&y)?.signed((m + s - 1) as u64));
        }
        Element::sum(ctx, &parts)
    })
}

fn check_s_list(m: usize, s: &[u32]) -> Result<()> {
    if s.windows(2).any(|w| w[0] >= w[1]) || s.last().is_some_and(|&v| v as usize >= m) {
        return Err(Error::InvalidArgument(format!("s-list must satisfy 0 ≤ s_1 < … < s_k < m = {m}, got {s:?}")));
    }
    Ok(())
}

/// The exponent list `0, …, ŝ_1, …, ŝ_k, …, m-1` of `M_{m,s}`.
pub fn hatted_range(m: usize, s: &[u32]) -> Vec<u32> {
    (0..m as u32).filter(|v| !s.contains(v)).collect()
}

/// `M_{m,s_1,…,s_k}^{(d)} = [k; 0, …, ŝ_1, …, ŝ_k, …, m-1] · L_m^{d-1}`.
pub fn mui_m(ctx: Context, m: usize, s: &[u32], d: u64) -> Result<Element> {
    check_m(ctx, m)?;
    check_s_list(m, s)?;
    if d == 0 || d >= ctx.p() {
        return Err(Error::InvalidArgument(format!("d must satisfy 1 ≤ d ≤ p-1, got {d}")));
    }
    if d == 1 {
        return cached(ctx, InvariantName::M(m, s.to_vec()), || {
            bracket(ctx, &BracketSpec::new(s.len(), hatted_range(m, s), m))
        });
    }
    cached(ctx, InvariantName::Md(m, d, s.to_vec()), || mui_m(ctx, m, s, 1)?.mul(&l(ctx, m)?.pow(d - 1)?))
}

/// Evaluates a named invariant.
pub fn invariant(ctx: Context, name: &InvariantName) -> Result<Element> {
    match name {
        InvariantName::L(m) => l(ctx, *m),
        InvariantName::Ls(m, s) => ls(ctx, *m, *s),
        InvariantName::Q(n, s) => {
            if *s >= *n {
                if *s == *n {
                    return Ok(Element::one(ctx));
                }
                return Err(Error::InvalidArgument(format!("Q({n},{s}) needs s < n")));
            }
            dickson_q(ctx, *n, *s as i64)
        }
        InvariantName::V(m) => mui_v(ctx, *m),
        InvariantName::M(m, s) => mui_m(ctx, *m, s, 1),
        InvariantName::Md(m, d, s) => mui_m(ctx, *m, s, *d),
    }
}

/// All `k`-subsets of `0..n`, ascending, in lexicographic order.
pub fn k_subsets(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Both sides of Mùi's expansion multiplied through by `L_n`:
///
/// ```text
/// [k; e]·L_n = (-1)^{k(k-1)/2} Σ_{s_1<…<s_k<n} (-1)^{Σ s} M_{n,s} [s_1, …, s_k, e]
/// ```
pub fn mui_expansion_sides(ctx: Context, spec: &BracketSpec) -> Result<(Element, Element)> {
    spec.validate(ctx)?;
    let (k, n) = (spec.k, spec.m);
    if k == 0 {
        return Err(Error::Hypothesis("expansion needs k ≥ 1".into()));
    }
    if !spec.has_distinct_entries() {
        return Err(Error::Hypothesis("expansion needs distinct exponents".into()));
    }
    let lhs = bracket(ctx, spec)?.mul(&l(ctx, n)?)?;
    let mut parts = Vec::new();
    for s in k_subsets(n as u32, k) {
        let mut e = s.clone();
        e.extend_from_slice(&spec.e);
        let d = det_bracket(ctx, &e)?;
        if d.is_zero() {
            continue;
        }
        let sign = s.iter().map(|&v| v as u64).sum::<u64>() + (k * (k - 1) / 2) as u64;
        parts.push(mui_m(ctx, n, &s, 1)?.mul(&d)?.signed(sign));
    }
    Ok((lhs, Element::sum(ctx, &parts)?))
}

pub fn mui_expansion_check(ctx: Context, spec: &BracketSpec) -> Result<bool> {
    let (lhs, rhs) = mui_expansion_sides(ctx, spec)?;
    Ok(lhs == rhs)
}

const _: () = assert!(MAX_VARS <= 16);
