//! Base-`p` digit combinatorics: the index sets `I(u,v)` and `J(u,v)`, the
//! block decomposition of elements of `J(u,v)` and the exponent functions
//! `b_{u,v}`, `c_{u,v}`.
//!
//! Both sets only allow non-zero digits at positions `u ≤ i < v-2`.
//!
//! * `I(u,v)`: `α_i + α_{i+1} ≤ 1`, so digits are 0/1 with no two adjacent 1s.
//! * `J(u,v)`: digits 0/1 with no three consecutive 1s.
//!
//! An element of `J(u,v)` splits uniquely as
//! `a_0 + (p^{i_1} + p^{i_1+1}) + a_1 + … + (p^{i_k} + p^{i_k+1}) + a_k`
//! where the blocks are its adjacent pairs of 1s and `a_j` collects the
//! isolated 1s between block `j` and block `j+1`. With `i_0 = u-3` and
//! `i_{k+1} = v-1`, the part `a_j` lies in `I(i_j+3, i_{j+1}+1)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::modp;

/// `a` together with its base-`p` digits, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicDigits {
    pub a: u64,
    pub p: u64,
    pub digits: Vec<u64>,
}

impl PadicDigits {
    pub fn new(a: u64, p: u64) -> Self {
        PadicDigits { a, p, digits: modp::digits(a, p) }
    }

    /// `α_i(a)`, zero for negative `i` and beyond the top digit.
    pub fn alpha(&self, i: i64) -> u64 {
        if i < 0 {
            return 0;
        }
        self.digits.get(i as usize).copied().unwrap_or(0)
    }
}

fn check(p: u64, u: u32, v: u32) -> Result<()> {
    if p < 3 || !modp::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if u >= v {
        return Err(Error::InvalidArgument(format!("index set needs u < v, got u = {u}, v = {v}")));
    }
    modp::checked_pow(p, v as u64 + 1).ok_or(Error::Overflow("p^v"))?;
    Ok(())
}

fn pw(p: u64, e: u32) -> u64 {
    modp::checked_pow(p, e as u64).expect("range checked by caller")
}

/// Every 0/1 digit pattern on positions `u..v-2` accepted by `keep`,
/// returned as integers in ascending order.
fn enumerate(p: u64, u: u32, v: u32, keep: impl Fn(&[u8]) -> bool) -> Vec<u64> {
    let width = v.saturating_sub(2).saturating_sub(u) as usize;
    let mut out = Vec::new();
    let mut bits = vec![0u8; width];
    for mask in 0u64..(1u64 << width) {
        for (i, b) in bits.iter_mut().enumerate() {
            *b = (mask >> i & 1) as u8;
        }
        if keep(&bits) {
            let a = bits.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| pw(p, u + i as u32)).sum();
            out.push(a);
        }
    }
    out.sort_unstable();
    out
}

/// `I(u,v)`, ascending.
pub fn index_set_i(p: u64, u: u32, v: u32) -> Result<Vec<u64>> {
    check(p, u, v)?;
    Ok(enumerate(p, u, v, |b| b.windows(2).all(|w| w[0] + w[1] <= 1)))
}

/// `J(u,v)`, ascending.
pub fn index_set_j(p: u64, u: u32, v: u32) -> Result<Vec<u64>> {
    check(p, u, v)?;
    Ok(enumerate(p, u, v, |b| b.windows(3).all(|w| w[0] + w[1] + w[2] <= 2)))
}

/// Membership test straight from the digit conditions.
pub fn in_j(p: u64, u: u32, v: u32, a: u64) -> bool {
    let d = PadicDigits::new(a, p);
    let lo = u as i64;
    let hi = v as i64 - 2;
    d.digits.iter().enumerate().all(|(i, &x)| x <= 1 && (x == 0 || (i as i64 >= lo && (i as i64) < hi)))
        && (0..d.digits.len() as i64).all(|i| d.alpha(i) + d.alpha(i + 1) + d.alpha(i + 2) <= 2)
}

pub fn in_i(p: u64, u: u32, v: u32, a: u64) -> bool {
    let d = PadicDigits::new(a, p);
    let lo = u as i64;
    let hi = v as i64 - 2;
    d.digits.iter().enumerate().all(|(i, &x)| x == 0 || (i as i64 >= lo && (i as i64) < hi))
        && (0..d.digits.len() as i64).all(|i| d.alpha(i) + d.alpha(i + 1) <= 1)
}

/// The block decomposition of an element of `J(u,v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JDecomposition {
    /// `i_1 < … < i_k`.
    pub blocks: Vec<u32>,
    /// `a_0, …, a_k`.
    pub parts: Vec<u64>,
}

impl JDecomposition {
    pub fn reassemble(&self, p: u64) -> u64 {
        let pairs: u64 = self.blocks.iter().map(|&i| pw(p, i) + pw(p, i + 1)).sum();
        pairs + self.parts.iter().sum::<u64>()
    }

    /// `(i_j + 3, i_{j+1} + 1)` for each part, the `I`-window it lives in.
    pub fn part_windows(&self, u: u32, v: u32) -> Vec<(i64, i64)> {
        let mut bounds = vec![u as i64 - 3];
        bounds.extend(self.blocks.iter().map(|&i| i as i64));
        bounds.push(v as i64 - 1);
        bounds.windows(2).map(|w| (w[0] + 3, w[1] + 1)).collect()
    }
}

impl fmt::Display for JDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "blocks={:?} parts={:?}", self.blocks, self.parts)
    }
}

pub fn j_decompose(p: u64, u: u32, v: u32, a: u64) -> Result<JDecomposition> {
    check(p, u, v)?;
    if !in_j(p, u, v, a) {
        return Err(Error::InvalidArgument(format!("{a} is not in J({u},{v}) for p = {p}")));
    }
    let d = PadicDigits::new(a, p);
    let mut blocks = Vec::new();
    let mut parts = vec![0u64];
    let mut i = 0usize;
    while i < d.digits.len() {
        if d.digits[i] == 1 {
            if d.alpha(i as i64 + 1) == 1 {
                blocks.push(i as u32);
                parts.push(0);
                i += 2;
                continue;
            }
            *parts.last_mut().expect("non-empty") += pw(p, i as u32);
        }
        i += 1;
    }
    Ok(JDecomposition { blocks, parts })
}

/// `b_{u,v}(a) = (p^{v-1} - p^u)/(p-1) - (p+1)a + p(p^{i_1} + … + p^{i_k})`.
///
/// Negative values are reported as errors.
pub fn b_func(p: u64, u: u32, v: u32, a: u64) -> Result<u64> {
    let dec = j_decompose(p, u, v, a)?;
    let p_i = p as i128;
    let geometric = (pw(p, v - 1) as i128 - pw(p, u) as i128) / (p_i - 1);
    let blocks: i128 = dec.blocks.iter().map(|&i| pw(p, i) as i128).sum();
    let b = geometric - (p_i + 1) * a as i128 + p_i * blocks;
    u64::try_from(b).map_err(|_| Error::InvalidArgument(format!("b_({u},{v})({a}) = {b} is negative")))
}

/// `c_{u,v}(a) = a_0 + … + a_k`.
pub fn c_func(p: u64, u: u32, v: u32, a: u64) -> Result<u64> {
    Ok(j_decompose(p, u, v, a)?.parts.iter().sum())
}
