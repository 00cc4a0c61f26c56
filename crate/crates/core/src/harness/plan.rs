//! Parameter grids for sweeps.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

use super::registry::info;
use super::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(Error::InvalidArgument(format!("unknown profile '{other}' (quick|full)"))),
        }
    }
}

/// A finite list of cases for one identity, evaluated in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepPlan {
    pub id: &'static str,
    pub cases: Vec<Params>,
}

/// Ordered lists of `len` distinct entries from `0..=max`.
pub fn distinct_lists(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn go(len: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..=max {
            if !cur.contains(&x) {
                cur.push(x);
                go(len, max, cur, out);
                cur.pop();
            }
        }
    }
    go(len, max, &mut Vec::new(), &mut out);
    out
}

/// All lists of length `len` with entries in `0..=max`.
pub fn all_lists(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=max).map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    out
}

/// Non-empty strictly increasing lists with entries below `n`.
pub fn s_lists(n: usize) -> Vec<Vec<u32>> {
    (1u32..1 << n).map(|mask| (0..n as u32).filter(|&b| mask >> b & 1 == 1).collect()).collect()
}

struct Bounds {
    /// largest `n` for the invariant statements
    n: usize,
    /// largest `n` for the determinant lemmas and recursions
    n_bracket: usize,
    /// largest bracket exponent entry
    e_max: u32,
    /// largest `u` / `i` in the determinant lemmas
    op_max: u32,
    /// `i, u ≤ n + extra`
    extra: u32,
    /// starting values of `u` in the two/three variable sweeps
    u_starts: u32,
    /// `w - u` (or `v + 1 - u`) ceiling
    span: u32,
    /// `v - u` ceiling for the J-expansion
    span_j: u32,
    /// `v - u` ceiling for the J-set recursion
    span_j_sets: u32,
}

fn bounds(p: u64, profile: Profile) -> Bounds {
    match profile {
        Profile::Full => Bounds {
            n: 3,
            n_bracket: 4,
            e_max: 4,
            op_max: 5,
            extra: 3,
            u_starts: 3,
            span: 5,
            span_j: if p == 3 { 5 } else { 3 },
            span_j_sets: 9,
        },
        Profile::Quick => Bounds {
            n: 3,
            n_bracket: 3,
            e_max: 3,
            op_max: 3,
            extra: 2,
            u_starts: 1,
            span: 4,
            span_j: if p == 3 { 4 } else { 2 },
            span_j_sets: 4,
        },
    }
}

impl SweepPlan {
    pub fn new(id: &'static str, cases: Vec<Params>) -> Self {
        SweepPlan { id, cases }
    }

    pub fn empty(id: &'static str) -> Self {
        SweepPlan { id, cases: Vec::new() }
    }

    /// The standard grid of an identity at one prime.
    pub fn standard(id: &str, p: u64, profile: Profile) -> Result<SweepPlan> {
        let id = info(id)?.id;
        let b = bounds(p, profile);
        let base = Params::new(p);
        let mut cases = Vec::new();
        let d_values = 1..p as i64;
        match id {
            "lem2.2" | "lem2.3" | "prop3.3" | "mui-expansion" => {
                let (n_max, e_max) = match id {
                    "prop3.3" => (3, 3),
                    "mui-expansion" => (b.n_bracket, 3),
                    _ => (b.n_bracket, b.e_max),
                };
                for n in 1..=n_max {
                    let k_range = if id == "mui-expansion" { 1..=n } else { 0..=n - 1 };
                    for k in k_range {
                        for e in distinct_lists(n - k, e_max) {
                            let c = base.clone().int("n", n as i64).int("k", k as i64).list("e", e.clone());
                            match id {
                                "lem2.2" => {
                                    for u in 0..=b.op_max {
                                        cases.push(c.clone().int("u", u as i64));
                                    }
                                }
                                "lem2.3" => {
                                    if e.iter().skip(1).any(|&x| x <= e[0]) {
                                        continue;
                                    }
                                    for i in 1..=b.op_max {
                                        cases.push(c.clone().int("i", i as i64));
                                    }
                                }
                                "prop3.3" => {
                                    // P^r vanishes on classes of degree below 2r
                                    let top: u64 = e.iter().map(|&x| p.pow(x)).sum::<u64>() + k as u64 / 2;
                                    for r in 0..=top {
                                        cases.push(c.clone().int("r", r as i64));
                                    }
                                }
                                _ => cases.push(c),
                            }
                        }
                    }
                }
            }
            "thm2.4-ct5" => {
                for n in 1..=b.n_bracket {
                    for e in all_lists(n, 3) {
                        cases.push(base.clone().int("n", n as i64).list("e", e));
                    }
                }
            }
            "thm2.4-ct6" => {
                for n in 1..=b.n_bracket {
                    for k in 0..n {
                        for e in all_lists(n - k, 3) {
                            cases.push(base.clone().int("n", n as i64).int("k", k as i64).list("e", e));
                        }
                    }
                }
            }
            "thm3.1" | "cor3.2" | "thm3.4" => {
                for n in 1..=b.n {
                    for s in 0..n {
                        let is: Vec<u32> = match id {
                            "thm3.1" => (1..=n as u32 + b.extra).collect(),
                            "cor3.2" => (1..=n as u32).collect(),
                            _ => (n as u32..=n as u32 + 2).collect(),
                        };
                        for i in is {
                            cases.push(base.clone().int("n", n as i64).int("s", s as i64).int("i", i as i64));
                        }
                    }
                }
            }
            "thm3.5" | "cor3.6" => {
                for n in 1..=b.n {
                    let top = if id == "thm3.5" { n as u32 + b.extra } else { n as u32 };
                    for i in 1..=top {
                        cases.push(base.clone().int("n", n as i64).int("i", i as i64));
                    }
                }
            }
            "thm3.7" | "thm3.8" => {
                for n in 1..=b.n {
                    for s in s_lists(n) {
                        for d in d_values.clone() {
                            let c = base.clone().int("n", n as i64).list("s", s.clone()).int("d", d);
                            if id == "thm3.7" {
                                for i in 1..=n as i64 + b.extra as i64 {
                                    cases.push(c.clone().int("i", i));
                                }
                            } else {
                                for u in 0..=n as i64 + b.extra as i64 {
                                    cases.push(c.clone().int("u", u));
                                }
                            }
                        }
                    }
                }
            }
            "thm3.9" => {
                for n in 1..=b.n {
                    let shifts = n as i64..=n as i64 + 2;
                    for i in shifts.clone() {
                        if i >= 2 {
                            cases.push(base.clone().int("form", 1).int("n", n as i64).int("i", i));
                        }
                    }
                    for s in s_lists(n) {
                        for d in d_values.clone() {
                            let c = base.clone().int("n", n as i64).list("s", s.clone()).int("d", d);
                            for i in shifts.clone() {
                                cases.push(c.clone().int("form", 2).int("i", i));
                            }
                            for u in shifts.clone() {
                                cases.push(c.clone().int("form", 3).int("u", u));
                            }
                        }
                    }
                }
            }
            "rem3.10" => {
                let n_min = if profile == Profile::Full { 1 } else { 2 };
                for n in n_min..=b.n {
                    let c = base.clone().int("n", n as i64);
                    for s in 0..n as i64 {
                        cases.push(c.clone().int("form", 1).int("s", s));
                        cases.push(c.clone().int("form", 2).int("s", s));
                    }
                    cases.push(c.clone().int("form", 3));
                    for s in s_lists(n) {
                        for d in d_values.clone() {
                            let cs = c.clone().list("s", s.clone()).int("d", d);
                            cases.push(cs.clone().int("form", 4));
                            cases.push(cs.int("form", if s[0] > 0 { 5 } else { 6 }));
                        }
                    }
                }
            }
            "prop4.1-ct7" | "prop4.2" => {
                for u in 0..b.u_starts {
                    for v in u + 1..=u + b.span {
                        cases.push(base.clone().int("u", u as i64).int("v", v as i64));
                    }
                }
            }
            "prop4.1-ct8" => {
                for u in 0..b.u_starts {
                    for v in u + 1..=u + b.span {
                        for w in v + 1..=u + b.span {
                            cases.push(base.clone().int("u", u as i64).int("v", v as i64).int("w", w as i64));
                        }
                    }
                }
            }
            "ct9" => {
                for u in 0..b.u_starts {
                    for v in u + 1..u + b.span {
                        cases.push(base.clone().int("u", u as i64).int("v", v as i64));
                    }
                }
            }
            "prop4.3" => {
                for u in 0..b.u_starts {
                    for v in u + 1..=u + b.span_j {
                        cases.push(base.clone().int("u", u as i64).int("v", v as i64));
                    }
                }
            }
            "lem4.4" => {
                for u in 0..=b.u_starts {
                    for v in u + 1..=u + b.span_j_sets {
                        cases.push(base.clone().int("u", u as i64).int("v", v as i64));
                    }
                }
            }
            "lem4.5" => {
                for u in 0..b.u_starts {
                    for v in u + 1..=u + 2 {
                        cases.push(base.clone().int("u", u as i64).int("v", v as i64));
                    }
                }
            }
            _ => unreachable!("every registered id has a grid"),
        }
        Ok(SweepPlan { id, cases })
    }
}
