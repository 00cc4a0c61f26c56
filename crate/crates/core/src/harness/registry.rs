//! The identity registry. Each entry checks its hypotheses, builds both sides
//! and compares them.

use crate::error::{Error, Result};
use crate::invariants::{self, hatted_range, BracketSpec};
use crate::milnor::{self, MilnorOp};
use crate::modp;
use crate::padic;
use crate::poly::{Context, Element, MAX_VARS};

use super::{IdentityCase, Params, Status};

/// Registry metadata.
#[derive(Clone, Copy, Debug)]
pub struct IdentityInfo {
    pub id: &'static str,
    pub statement: &'static str,
    /// Parameter names besides `p`.
    pub params: &'static str,
}

pub const IDENTITIES: &[IdentityInfo] = &[
    IdentityInfo {
        id: "lem2.2",
        statement: "St_u[k;e] = (-1)^{k-1}[k-1;u,e] for k>0, 0 for k=0 (distinct e)",
        params: "n k e u",
    },
    IdentityInfo {
        id: "lem2.3",
        statement: "St^{Δ_i}[k;e] = [k;i,e_{k+2},…] if e_{k+1}=0, else 0 (e_{k+1} minimal)",
        params: "n k e i",
    },
    IdentityInfo {
        id: "thm2.4-ct5",
        statement: "[e_1,…,e_{n-1},e_n+n-1] = Σ_{s≤n-2} (-1)^{n+s}[e_1,…,e_n+s]Q_{n-1,s}^{p^{e_n}} + [e_1,…,e_{n-1}]V_n^{p^{e_n}}",
        params: "n e",
    },
    IdentityInfo {
        id: "thm2.4-ct6",
        statement: "[k;e_{k+1},…,e_n+n] = Σ_{s<n} (-1)^{n+s-1}[k;e_{k+1},…,e_n+s]Q_{n,s}^{p^{e_n}}",
        params: "n k e",
    },
    IdentityInfo {
        id: "thm3.1",
        statement: "St^{Δ_i}Q_{n,s} = (-1)^n[0,…,ŝ,…,n-1,i]L_n^{p-2}",
        params: "n s i",
    },
    IdentityInfo {
        id: "cor3.2",
        statement: "St^{Δ_i}Q_{n,s} = (-1)^{s-1}Q_{n,0} if i=s>0; (-1)^n Q_{n,0}Q_{n,s} if i=n; else 0",
        params: "n s i",
    },
    IdentityInfo {
        id: "prop3.3",
        statement: "P^r[k;e] = [k;e+ε] if r = Σ ε_j p^{e_j} with ε_j ∈ {0,1}, else 0",
        params: "n k e r",
    },
    IdentityInfo { id: "thm3.4", statement: "St^{Δ_{i+1}}Q_{n,s} = P^{p^i} St^{Δ_i}Q_{n,s} for n ≤ i", params: "n s i" },
    IdentityInfo { id: "thm3.5", statement: "St^{Δ_i}V_n = (-1)^{n-1}[0,…,n-2,i]L_{n-1}^{p-2}", params: "n i" },
    IdentityInfo {
        id: "cor3.6",
        statement: "St^{Δ_i}V_n = 0 if i<n-1; (-1)^{n-1}Q_{n-1,0}V_n if i=n-1; (-1)^{n-1}Q_{n-1,0}(Q_{n-1,n-2}^p V_n + V_n^p) if i=n",
        params: "n i",
    },
    IdentityInfo { id: "thm3.7", statement: "St^{Δ_i}M^{(d)}_{n,s}: four-case formula", params: "n s d i" },
    IdentityInfo { id: "thm3.8", statement: "St_u M^{(d)}_{n,s}: three-case formula", params: "n s d u" },
    IdentityInfo {
        id: "thm3.9",
        statement: "form 1: St^{Δ_i}V_n = P^{p^{i-1}}St^{Δ_{i-1}}V_n; form 2: St^{Δ_{i+1}}M^{(d)} = P^{p^i}St^{Δ_i}M^{(d)}; form 3: St_{u+1}M^{(d)} = P^{p^u}St_u M^{(d)}",
        params: "form n [s d] i|u",
    },
    IdentityInfo {
        id: "rem3.10",
        statement: "closed forms of St^{Δ_{n+1}}Q, St^{Δ_{n+2}}Q, St^{Δ_{n+1}}V_n, St_n M^{(d)}, St^{Δ_n}M^{(d)} (s_1>0 and s_1=0)",
        params: "form n [s d]",
    },
    IdentityInfo {
        id: "prop4.1-ct7",
        statement: "[u,v] = Σ_{s=u}^{v-1} V_1^{p^v-p^{s+1}+p^u}V_2^{p^s}",
        params: "u v",
    },
    IdentityInfo {
        id: "prop4.1-ct8",
        statement: "[u,v,w]L_2^{p^w} = Σ_{s=u}^{v-1}[u,s+1][v,w]L_2^{p^w-p^{s+1}}V_3^{p^s} + Σ_{s=v}^{w-1}[u,v][s+1,w]L_2^{p^w-p^{s+1}}V_3^{p^s}",
        params: "u v w",
    },
    IdentityInfo {
        id: "ct9",
        statement: "[u,v,v+1] = Σ_{s=u}^{v-1}[u,s+1]L_2^{p^v-p^{s+1}}V_3^{p^s}",
        params: "u v",
    },
    IdentityInfo {
        id: "prop4.2",
        statement: "[u,v] = Σ_{a∈I(u,v)} (-1)^a L_2^{p^u+p(p-1)a} Q_{2,1}^{(p^{v-1}-p^u)/(p-1)-(p+1)a}",
        params: "u v",
    },
    IdentityInfo {
        id: "prop4.3",
        statement: "[u,v,v+1] = Σ_{a∈J(u,v)} (-1)^a L_3^{p^u+p(p-1)a} Q_{3,1}^{b(a)} Q_{3,2}^{c(a)}",
        params: "u v",
    },
    IdentityInfo {
        id: "lem4.4",
        statement: "J(u,v+3) = J(u,v+2) ⊔ (p^v+J(u,v+1)) ⊔ (p^v+p^{v-1}+J(u,v)) with the b/c transfer rules; unique block decomposition",
        params: "u v",
    },
    IdentityInfo {
        id: "lem4.5",
        statement: "[u,v+3,v+4] = [u,v+2,v+3]Q_{3,1}^{p^{v+1}} - [u,v+1,v+2]Q_{3,0}^{p^{v+1}}Q_{3,2}^{p^v} + [u,v,v+1]Q_{3,0}^{p^{v+1}+p^v}",
        params: "u v",
    },
    IdentityInfo {
        id: "mui-expansion",
        statement: "[k;e]L_n = (-1)^{k(k-1)/2} Σ_{s_1<…<s_k} (-1)^{Σs} M_{n,s}[s_1,…,s_k,e]",
        params: "n k e",
    },
];

pub fn info(id: &str) -> Result<&'static IdentityInfo> {
    IDENTITIES.iter().find(|i| i.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Evaluates one case. Hypothesis violations are errors, raised before any
/// side is built; a false identity is a `Fail` status.
pub fn check(id: &str, params: &Params) -> Result<IdentityCase> {
    let meta = info(id)?;
    let p = params.p;
    if p < 3 || !modp::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let outcome = match id {
        "lem2.2" => lem_st_u_bracket(params)?,
        "lem2.3" => lem_delta_bracket(params)?,
        "thm2.4-ct5" => bracket_recursion_v(params)?,
        "thm2.4-ct6" => bracket_recursion_q(params)?,
        "thm3.1" => delta_q(params)?,
        "cor3.2" => delta_q_cases(params)?,
        "prop3.3" => power_on_bracket(params)?,
        "thm3.4" => wilkerson_q(params)?,
        "thm3.5" => delta_v(params)?,
        "cor3.6" => delta_v_cases(params)?,
        "thm3.7" => delta_m(params)?,
        "thm3.8" => st_u_m(params)?,
        "thm3.9" => wilkerson_mui(params)?,
        "rem3.10" => closed_forms(params)?,
        "prop4.1-ct7" => two_bracket_in_v(params)?,
        "prop4.1-ct8" => three_bracket_in_v(params)?,
        "ct9" => consecutive_bracket_in_v(params)?,
        "prop4.2" => two_bracket_in_dickson(params)?,
        "prop4.3" => three_bracket_in_dickson(params)?,
        "lem4.4" => j_recursion(params)?,
        "lem4.5" => three_bracket_recursion(params)?,
        "mui-expansion" => mui_expansion(params)?,
        _ => unreachable!("registry and dispatch list agree"),
    };
    Ok(outcome.into_case(meta.id, params.clone()))
}

/// Sides or a non-element verdict, plus the branch label.
enum Outcome {
    Sides { branch: String, lhs: Element, rhs: Element },
    Verdict { branch: String, failure: Option<String> },
}

impl Outcome {
    fn sides(branch: impl Into<String>, lhs: Element, rhs: Element) -> Result<Outcome> {
        Ok(Outcome::Sides { branch: branch.into(), lhs, rhs })
    }

    fn into_case(self, id: &'static str, params: Params) -> IdentityCase {
        match self {
            Outcome::Sides { branch, lhs, rhs } => {
                let (lhs_terms, rhs_terms) = (lhs.len(), rhs.len());
                let status = if lhs == rhs {
                    Status::Pass
                } else {
                    let diff = lhs.sub(&rhs).expect("same context");
                    Status::Fail { detail: format!("lhs - rhs has {} terms", diff.len()), diff: Some(diff) }
                };
                IdentityCase { id, params, branch, status, lhs_terms, rhs_terms }
            }
            Outcome::Verdict { branch, failure } => IdentityCase {
                id,
                params,
                branch,
                status: match failure {
                    None => Status::Pass,
                    Some(detail) => Status::Fail { diff: None, detail },
                },
                lhs_terms: 0,
                rhs_terms: 0,
            },
        }
    }
}

fn hyp<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Hypothesis(msg.into()))
}

fn ctx_for(p: u64, n: usize) -> Result<Context> {
    if n == 0 || n > MAX_VARS {
        return hyp(format!("n = {n} outside 1..={MAX_VARS}"));
    }
    Context::new(p, n)
}

fn get_n(params: &Params) -> Result<usize> {
    let n = params.get_nat("n")? as usize;
    if n == 0 || n > MAX_VARS {
        return hyp(format!("n = {n} outside 1..={MAX_VARS}"));
    }
    Ok(n)
}

fn distinct(e: &[u32]) -> bool {
    let mut s = e.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

fn pw(p: u64, e: u64) -> Result<u64> {
    modp::checked_pow(p, e).ok_or(Error::Overflow("p^e"))
}

fn br(c: Context, k: usize, e: Vec<u32>, m: usize) -> Result<Element> {
    invariants::bracket(c, &BracketSpec::new(k, e, m))
}

fn det(c: Context, e: &[u32]) -> Result<Element> {
    invariants::det_bracket(c, e)
}

fn q(c: Context, n: usize, s: i64) -> Result<Element> {
    invariants::dickson_q(c, n, s)
}

fn v(c: Context, m: usize) -> Result<Element> {
    invariants::mui_v(c, m)
}

fn l(c: Context, m: usize) -> Result<Element> {
    invariants::l(c, m)
}

fn mm(c: Context, n: usize, s: &[u32], d: u64) -> Result<Element> {
    invariants::mui_m(c, n, s, d)
}

fn delta(i: u64, a: &Element) -> Result<Element> {
    milnor::apply(&MilnorOp::delta(i as usize)?, a)
}

fn st(u: u64, a: &Element) -> Result<Element> {
    milnor::apply(&MilnorOp::st_u(u as u32), a)
}

fn power(r: u64, a: &Element) -> Result<Element> {
    milnor::apply(&MilnorOp::steenrod_p(r), a)
}

fn sum(c: Context, parts: &[Element]) -> Result<Element> {
    Element::sum(c, parts)
}

fn s_list(params: &Params, n: usize) -> Result<Vec<u32>> {
    let s = params.get_list("s")?;
    if s.is_empty() {
        return hyp("s-list must be non-empty");
    }
    if s.windows(2).any(|w| w[0] >= w[1]) || *s.last().expect("non-empty") as usize >= n {
        return hyp(format!("s-list {s:?} must satisfy 0 ≤ s_1 < … < s_k < n = {n}"));
    }
    Ok(s)
}

fn d_param(params: &Params) -> Result<u64> {
    let d = params.get_nat("d")? as u64;
    if d == 0 || d >= params.p {
        return hyp(format!("d = {d} outside 1..=p-1"));
    }
    Ok(d)
}

fn without(s: &[u32], idx: usize) -> Vec<u32> {
    s.iter().enumerate().filter(|&(j, _)| j != idx).map(|(_, &x)| x).collect()
}

// ---- determinant lemmas -------------------------------------------------

fn bracket_params(params: &Params) -> Result<(usize, usize, Vec<u32>)> {
    let n = get_n(params)?;
    let k = params.get_nat("k")? as usize;
    let e = params.get_list("e")?;
    if k >= n {
        return hyp(format!("need k < n, got k = {k}, n = {n}"));
    }
    if e.len() != n - k {
        return hyp(format!("e must have n - k = {} entries", n - k));
    }
    Ok((n, k, e))
}

fn lem_st_u_bracket(params: &Params) -> Result<Outcome> {
    let (n, k, e) = bracket_params(params)?;
    let u = params.get_nat("u")?;
    if !distinct(&e) {
        return hyp("e entries must be distinct");
    }
    let c = ctx_for(params.p, n)?;
    let lhs = st(u as u64, &br(c, k, e.clone(), n)?)?;
    if k == 0 {
        return Outcome::sides("k=0", lhs, Element::zero(c));
    }
    let mut e2 = vec![u];
    e2.extend(e);
    let rhs = br(c, k - 1, e2, n)?.signed(k as u64 - 1);
    Outcome::sides("k>0", lhs, rhs)
}

fn lem_delta_bracket(params: &Params) -> Result<Outcome> {
    let (n, k, e) = bracket_params(params)?;
    let i = params.get_nat("i")?;
    if i == 0 {
        return hyp("need i ≥ 1");
    }
    if !distinct(&e) || e.iter().skip(1).any(|&x| x <= e[0]) {
        return hyp("e entries must be distinct with e_{k+1} the smallest");
    }
    let c = ctx_for(params.p, n)?;
    let lhs = delta(i as u64, &br(c, k, e.clone(), n)?)?;
    if e[0] > 0 {
        return Outcome::sides("e1>0", lhs, Element::zero(c));
    }
    let mut e2 = e;
    e2[0] = i;
    Outcome::sides("e1=0", lhs, br(c, k, e2, n)?)
}

fn bracket_recursion_v(params: &Params) -> Result<Outcome> {
    let n = get_n(params)?;
    let e = params.get_list("e")?;
    if e.len() != n {
        return hyp("e must have n entries");
    }
    let c = ctx_for(params.p, n)?;
    let en = e[n - 1];
    let with_last = |add: u32| {
        let mut f = e.clone();
        f[n - 1] = en + add;
        f
    };
    let lhs = det(c, &with_last(n as u32 - 1))?;
    let mut parts = Vec::new();
    for s in 0..n.saturating_sub(1) {
        let b = det(c, &with_last(s as u32))?;
        if b.is_zero() {
            continue;
        }
        parts.push(b.mul(&q(c, n - 1, s as i64)?.frobenius(en as u64)?)?.signed((n + s) as u64));
    }
    parts.push(det(c, &e[..n - 1])?.mul(&v(c, n)?.frobenius(en as u64)?)?);
    Outcome::sides("", lhs, sum(c, &parts)?)
}

fn bracket_recursion_q(params: &Params) -> Result<Outcome> {
    let (n, k, e) = bracket_params(params)?;
    let c = ctx_for(params.p, n)?;
    let en = *e.last().expect("k < n");
    let with_last = |add: u32| {
        let mut f = e.clone();
        *f.last_mut().expect("non-empty") = en + add;
        f
    };
    let lhs = br(c, k, with_last(n as u32), n)?;
    let mut parts = Vec::new();
    for s in 0..n {
        let b = br(c, k, with_last(s as u32), n)?;
        if b.is_zero() {
            continue;
        }
        let sign = if (n + s + 1) % 2 == 0 { 1 } else { c.p() - 1 };
        parts.push((sign, b, q(c, n, s as i64)?.frobenius(en as u64)?));
    }
    let rhs = Element::sum_of_products(c, parts.iter().map(|(sign, b, qs)| (*sign, b, qs)))?;
    Outcome::sides("", lhs, rhs)
}

// ---- Dickson invariants -------------------------------------------------

fn q_params(params: &Params) -> Result<(usize, usize, u64)> {
    let n = get_n(params)?;
    let s = params.get_nat("s")? as usize;
    let i = params.get_nat("i")? as u64;
    if s >= n {
        return hyp(format!("need s < n, got s = {s}, n = {n}"));
    }
    if i == 0 {
        return hyp("need i ≥ 1");
    }
    Ok((n, s, i))
}

fn delta_q_formula(c: Context, n: usize, s: usize, i: u64) -> Result<Element> {
    let mut e = hatted_range(n, &[s as u32]);
    e.push(i as u32);
    Ok(det(c, &e)?.mul(&l(c, n)?.pow(c.p() - 2)?)?.signed(n as u64))
}

fn delta_q(params: &Params) -> Result<Outcome> {
    let (n, s, i) = q_params(params)?;
    let c = ctx_for(params.p, n)?;
    let lhs = delta(i, &q(c, n, s as i64)?)?;
    Outcome::sides("", lhs, delta_q_formula(c, n, s, i)?)
}

fn delta_q_cases(params: &Params) -> Result<Outcome> {
    let (n, s, i) = q_params(params)?;
    if i as usize > n {
        return hyp("need i ≤ n");
    }
    let c = ctx_for(params.p, n)?;
    let lhs = delta(i, &q(c, n, s as i64)?)?;
    if i as usize == s && s > 0 {
        return Outcome::sides("i=s>0", lhs, q(c, n, 0)?.signed(s as u64 - 1));
    }
    if i as usize == n {
        return Outcome::sides("i=n", lhs, q(c, n, 0)?.mul(&q(c, n, s as i64)?)?.signed(n as u64));
    }
    Outcome::sides("otherwise", lhs, Element::zero(c))
}

fn power_on_bracket(params: &Params) -> Result<Outcome> {
    let (n, k, e) = bracket_params(params)?;
    let r = params.get_nat("r")? as u64;
    if !distinct(&e) {
        return hyp("e entries must be distinct");
    }
    let c = ctx_for(params.p, n)?;
    let lhs = power(r, &br(c, k, e.clone(), n)?)?;
    let powers: Vec<u64> = e.iter().map(|&x| pw(c.p(), x as u64)).collect::<Result<_>>()?;
    for mask in 0u32..(1 << e.len()) {
        let total: u64 = (0..e.len()).filter(|&j| mask >> j & 1 == 1).map(|j| powers[j]).sum();
        if total == r {
            let shifted: Vec<u32> = e.iter().enumerate().map(|(j, &x)| x + (mask >> j & 1)).collect();
            return Outcome::sides("r=Σε p^e", lhs, br(c, k, shifted, n)?);
        }
    }
    Outcome::sides("other r", lhs, Element::zero(c))
}

fn wilkerson_q(params: &Params) -> Result<Outcome> {
    let (n, s, i) = q_params(params)?;
    if (i as usize) < n {
        return hyp("need n ≤ i");
    }
    let c = ctx_for(params.p, n)?;
    let qs = q(c, n, s as i64)?;
    let lhs = delta(i + 1, &qs)?;
    let rhs = power(pw(c.p(), i)?, &delta(i, &qs)?)?;
    Outcome::sides("", lhs, rhs)
}

// ---- Mùi invariants -----------------------------------------------------

fn delta_v(params: &Params) -> Result<Outcome> {
    let n = get_n(params)?;
    let i = params.get_nat("i")? as u64;
    if i == 0 {
        return hyp("need i ≥ 1");
    }
    let c = ctx_for(params.p, n)?;
    let lhs = delta(i, &v(c, n)?)?;
    let mut e: Vec<u32> = (0..n as u32 - 1).collect();
    e.push(i as u32);
    let rhs = det(c, &e)?.mul(&l(c, n - 1)?.pow(c.p() - 2)?)?.signed(n as u64 - 1);
    Outcome::sides("", lhs, rhs)
}

fn delta_v_cases(params: &Params) -> Result<Outcome> {
    let n = get_n(params)?;
    let i = params.get_nat("i")? as usize;
    if i == 0 || i > n {
        return hyp("need 0 < i ≤ n");
    }
    let c = ctx_for(params.p, n)?;
    let vn = v(c, n)?;
    let lhs = delta(i as u64, &vn)?;
    let sign = n as u64 - 1;
    if i + 1 < n {
        return Outcome::sides("i<n-1", lhs, Element::zero(c));
    }
    let q0 = q(c, n - 1, 0)?;
    if i + 1 == n {
        return Outcome::sides("i=n-1", lhs, q0.mul(&vn)?.signed(sign));
    }
    let inner = q(c, n - 1, n as i64 - 2)?.frobenius(1)?.mul(&vn)?.add(&vn.pow(c.p())?)?;
    Outcome::sides("i=n", lhs, q0.mul(&inner)?.signed(sign))
}

fn m_params(params: &Params) -> Result<(usize, Vec<u32>, u64, Context)> {
    let n = get_n(params)?;
    let s = s_list(params, n)?;
    let d = d_param(params)?;
    Ok((n, s, d, ctx_for(params.p, n)?))
}

fn delta_m(params: &Params) -> Result<Outcome> {
    let (n, s, d, c) = m_params(params)?;
    let i = params.get_nat("i")?;
    if i == 0 {
        return hyp("need i ≥ 1");
    }
    let k = s.len();
    let lhs = delta(i as u64, &mm(c, n, &s, d)?)?;
    if s[0] > 0 {
        if let Some(t) = s.iter().position(|&x| x == i) {
            let mut list = vec![0];
            list.extend(without(&s, t));
            let rhs = mm(c, n, &list, d)?.signed((i as usize + t + 1) as u64);
            return Outcome::sides("i=s_t", lhs, rhs);
        }
    }
    if (i as usize) < n {
        return Outcome::sides("otherwise", lhs, Element::zero(c));
    }
    let mut tail: Vec<u32> = (1..n as u32).collect();
    tail.push(i);
    // (d-1) M [1,…,n-1,i] L_n^{d-2}, absent for d = 1
    let second = if d >= 2 {
        mm(c, n, &s, 1)?.mul(&det(c, &tail)?)?.mul(&l(c, n)?.pow(d - 2)?)?.scalar_mul(d - 1)
    } else {
        Element::zero(c)
    };
    if s[0] == 0 {
        return Outcome::sides("i≥n,s1=0", lhs, second.signed(n as u64 - 1));
    }
    let mut e: Vec<u32> = (1..n as u32).filter(|x| !s.contains(x)).collect();
    e.push(i);
    let first = br(c, k, e, n)?.mul(&l(c, n)?.pow(d - 1)?)?.signed(k as u64);
    Outcome::sides("i≥n,s1>0", lhs, first.add(&second)?.signed(n as u64 - 1))
}

fn st_u_m(params: &Params) -> Result<Outcome> {
    let (n, s, d, c) = m_params(params)?;
    let u = params.get_nat("u")?;
    let k = s.len();
    let lhs = st(u as u64, &mm(c, n, &s, d)?)?;
    if let Some(t) = s.iter().position(|&x| x == u) {
        let rhs = mm(c, n, &without(&s, t), d)?.signed((k + u as usize + t + 1) as u64);
        return Outcome::sides("u=s_t", lhs, rhs);
    }
    if (u as usize) < n {
        return Outcome::sides("otherwise", lhs, Element::zero(c));
    }
    let mut e = hatted_range(n, &s);
    e.push(u);
    let rhs = br(c, k - 1, e, n)?.mul(&l(c, n)?.pow(d - 1)?)?.signed(n as u64 - 1);
    Outcome::sides("u≥n", lhs, rhs)
}

fn wilkerson_mui(params: &Params) -> Result<Outcome> {
    let form = params.get_nat("form")?;
    let n = get_n(params)?;
    let p = params.p;
    match form {
        1 => {
            let i = params.get_nat("i")? as u64;
            if (i as usize) < n {
                return hyp("need i ≥ n");
            }
            if i < 2 {
                return hyp("form 1 needs i ≥ 2 so that Δ_{i-1} exists");
            }
            let c = ctx_for(p, n)?;
            let vn = v(c, n)?;
            let lhs = delta(i, &vn)?;
            let rhs = power(pw(p, i - 1)?, &delta(i - 1, &vn)?)?;
            Outcome::sides("form 1", lhs, rhs)
        }
        2 => {
            let (n, s, d, c) = m_params(params)?;
            let i = params.get_nat("i")? as u64;
            if (i as usize) < n {
                return hyp("need i ≥ n");
            }
            let m = mm(c, n, &s, d)?;
            let lhs = delta(i + 1, &m)?;
            let rhs = power(pw(p, i)?, &delta(i, &m)?)?;
            Outcome::sides("form 2", lhs, rhs)
        }
        3 => {
            let (n, s, d, c) = m_params(params)?;
            let u = params.get_nat("u")? as u64;
            if (u as usize) < n {
                return hyp("need u ≥ n");
            }
            let m = mm(c, n, &s, d)?;
            let lhs = st(u + 1, &m)?;
            let rhs = power(pw(p, u)?, &st(u, &m)?)?;
            Outcome::sides("form 3", lhs, rhs)
        }
        _ => hyp("form must be 1, 2 or 3"),
    }
}

fn closed_forms(params: &Params) -> Result<Outcome> {
    let form = params.get_nat("form")?;
    let n = get_n(params)?;
    let p = params.p;
    let c = ctx_for(p, n)?;
    let ni = n as i64;
    match form {
        1 | 2 => {
            let s = params.get_nat("s")? as i64;
            if s >= ni {
                return hyp("need s < n");
            }
            let qs = q(c, n, s)?;
            let q0 = q(c, n, 0)?;
            if form == 1 {
                let lhs = delta(n as u64 + 1, &qs)?;
                let inner = q(c, n, ni - 1)?.frobenius(1)?.mul(&qs)?.sub(&q(c, n, s - 1)?.frobenius(1)?)?;
                return Outcome::sides("form 1", lhs, q0.mul(&inner)?.signed(n as u64));
            }
            let lhs = delta(n as u64 + 2, &qs)?;
            let top = q(c, n, ni - 1)?;
            let parts = [
                top.frobenius(2)?.mul(&top.frobenius(1)?)?.mul(&qs)?,
                q(c, n, ni - 2)?.frobenius(2)?.mul(&qs)?.neg(),
                q(c, n, s - 2)?.frobenius(2)?,
                q(c, n, s - 1)?.frobenius(1)?.mul(&top.frobenius(2)?)?.neg(),
            ];
            Outcome::sides("form 2", lhs, q0.mul(&sum(c, &parts)?)?.signed(n as u64))
        }
        3 => {
            let vn = v(c, n)?;
            let lhs = delta(n as u64 + 1, &vn)?;
            let a = q(c, n - 1, ni - 2)?;
            let coeff = a.frobenius(2)?.mul(&a.frobenius(1)?)?.sub(&q(c, n - 1, ni - 3)?.frobenius(2)?)?;
            let parts = [coeff.mul(&vn)?, a.frobenius(2)?.mul(&vn.pow(p)?)?, vn.pow(p * p)?];
            let rhs = q(c, n - 1, 0)?.mul(&sum(c, &parts)?)?.signed(n as u64 - 1);
            Outcome::sides("form 3", lhs, rhs)
        }
        4 => {
            let (n, s, d, c) = m_params(params)?;
            let k = s.len();
            let lhs = st(n as u64, &mm(c, n, &s, d)?)?;
            let mut parts = Vec::new();
            for (idx, &st_) in s.iter().enumerate() {
                let t = idx + 1;
                let sign = (n - 1 + k + t) as u64;
                parts.push(mm(c, n, &without(&s, idx), d)?.mul(&q(c, n, st_ as i64)?)?.signed(sign));
            }
            Outcome::sides("form 4", lhs, sum(c, &parts)?)
        }
        5 | 6 => {
            let (n, s, d, c) = m_params(params)?;
            let m = mm(c, n, &s, d)?;
            let lhs = delta(n as u64, &m)?;
            let q0 = q(c, n, 0)?;
            if form == 6 {
                if s[0] != 0 {
                    return hyp("form 6 needs s_1 = 0");
                }
                let rhs = m.mul(&q0)?.scalar_mul(d - 1).signed(n as u64 - 1);
                return Outcome::sides("form 6", lhs, rhs);
            }
            if s[0] == 0 {
                return hyp("form 5 needs s_1 > 0");
            }
            let mut parts = Vec::new();
            for (idx, &st_) in s.iter().enumerate() {
                let t = idx + 1;
                let mut list = vec![0];
                list.extend(without(&s, idx));
                parts.push(mm(c, n, &list, d)?.mul(&q(c, n, st_ as i64)?)?.signed(t as u64));
            }
            parts.push(m.mul(&q0)?.scalar_mul(d));
            Outcome::sides("form 5", lhs, sum(c, &parts)?.signed(n as u64 - 1))
        }
        _ => hyp("form must be 1..=6"),
    }
}

// ---- two and three variable brackets ------------------------------------

fn uv(params: &Params) -> Result<(u32, u32)> {
    let u = params.get_nat("u")?;
    let v = params.get_nat("v")?;
    if u >= v {
        return hyp(format!("need u < v, got u = {u}, v = {v}"));
    }
    Ok((u, v))
}

fn two_bracket_in_v(params: &Params) -> Result<Outcome> {
    let (u, v) = uv(params)?;
    let p = params.p;
    let c = ctx_for(p, 2)?;
    let lhs = det(c, &[u, v])?;
    let (v1, v2) = (self::v(c, 1)?, self::v(c, 2)?);
    let mut parts = Vec::new();
    for s in u..v {
        let e1 = pw(p, v as u64)? - pw(p, s as u64 + 1)? + pw(p, u as u64)?;
        parts.push(v1.pow(e1)?.mul(&v2.frobenius(s as u64)?)?);
    }
    Outcome::sides("", lhs, sum(c, &parts)?)
}

/// `L_2^{p^top - p^{s+1}} V_3^{p^s}`.
fn l2_v3(c: Context, top: u64, s: u32) -> Result<Element> {
    let p = c.p();
    let lexp = pw(p, top)? - pw(p, s as u64 + 1)?;
    l(c, 2)?.pow(lexp)?.mul(&v(c, 3)?.frobenius(s as u64)?)
}

fn three_bracket_in_v(params: &Params) -> Result<Outcome> {
    let (u, v) = uv(params)?;
    let w = params.get_nat("w")?;
    if v >= w {
        return hyp(format!("need v < w, got v = {v}, w = {w}"));
    }
    let p = params.p;
    let c = ctx_for(p, 3)?;
    let lhs = det(c, &[u, v, w])?.mul(&l(c, 2)?.frobenius(w as u64)?)?;
    let mut parts = Vec::new();
    let vw = det(c, &[v, w])?;
    for s in u..v {
        parts.push(det(c, &[u, s + 1])?.mul(&vw)?.mul(&l2_v3(c, w as u64, s)?)?);
    }
    let uvb = det(c, &[u, v])?;
    for s in v..w {
        let b = det(c, &[s + 1, w])?;
        if b.is_zero() {
            continue;
        }
        parts.push(uvb.mul(&b)?.mul(&l2_v3(c, w as u64, s)?)?);
    }
    Outcome::sides("", lhs, sum(c, &parts)?)
}

fn consecutive_bracket_in_v(params: &Params) -> Result<Outcome> {
    let (u, v) = uv(params)?;
    let c = ctx_for(params.p, 3)?;
    let lhs = det(c, &[u, v, v + 1])?;
    let mut parts = Vec::new();
    for s in u..v {
        parts.push(det(c, &[u, s + 1])?.mul(&l2_v3(c, v as u64, s)?)?);
    }
    Outcome::sides("", lhs, sum(c, &parts)?)
}

fn parity(a: u64) -> u64 {
    a % 2
}

fn two_bracket_in_dickson(params: &Params) -> Result<Outcome> {
    let (u, v) = uv(params)?;
    let p = params.p;
    let c = ctx_for(p, 2)?;
    let lhs = det(c, &[u, v])?;
    let (l2, q21) = (l(c, 2)?, q(c, 2, 1)?);
    let geometric = (pw(p, v as u64 - 1)? - pw(p, u as u64)?) / (p - 1);
    let mut parts = Vec::new();
    for a in padic::index_set_i(p, u, v)? {
        let lexp = pw(p, u as u64)? + p * (p - 1) * a;
        let qexp = geometric
            .checked_sub((p + 1) * a)
            .ok_or_else(|| Error::Hypothesis(format!("negative Q_{{2,1}} exponent at a = {a}")))?;
        parts.push(l2.pow(lexp)?.mul(&q21.pow(qexp)?)?.signed(parity(a)));
    }
    Outcome::sides("", lhs, sum(c, &parts)?)
}

fn three_bracket_in_dickson(params: &Params) -> Result<Outcome> {
    let (u, v) = uv(params)?;
    let p = params.p;
    let c = ctx_for(p, 3)?;
    let lhs = det(c, &[u, v, v + 1])?;
    let (l3, q31, q32) = (l(c, 3)?, q(c, 3, 1)?, q(c, 3, 2)?);
    let mut parts = Vec::new();
    for a in padic::index_set_j(p, u, v)? {
        let b = padic::b_func(p, u, v, a)?;
        let cc = padic::c_func(p, u, v, a)?;
        let lexp = pw(p, u as u64)? + p * (p - 1) * a;
        parts.push(l3.pow(lexp)?.mul(&q31.pow(b)?)?.mul(&q32.pow(cc)?)?.signed(parity(a)));
    }
    Outcome::sides("", lhs, sum(c, &parts)?)
}

fn three_bracket_recursion(params: &Params) -> Result<Outcome> {
    let (u, v) = uv(params)?;
    let p = params.p;
    let c = ctx_for(p, 3)?;
    let t = |a: u32| det(c, &[u, v + a, v + a + 1]);
    let lhs = t(3)?;
    let (q30, q31, q32) = (q(c, 3, 0)?, q(c, 3, 1)?, q(c, 3, 2)?);
    let vv = v as u64;
    let parts = [
        t(2)?.mul(&q31.frobenius(vv + 1)?)?,
        t(1)?.mul(&q30.frobenius(vv + 1)?)?.mul(&q32.frobenius(vv)?)?.neg(),
        t(0)?.mul(&q30.frobenius(vv + 1)?)?.mul(&q30.frobenius(vv)?)?,
    ];
    Outcome::sides("", lhs, sum(c, &parts)?)
}

/// Every decomposition of `a` into blocks `p^i + p^{i+1}` (gaps ≥ 3, inside
/// the digit window) plus parts `a_j ∈ I(i_j+3, i_{j+1}+1)`.
pub fn all_j_decompositions(p: u64, u: u32, v: u32, a: u64) -> Vec<padic::JDecomposition> {
    let mut out = Vec::new();
    let mut blocks: Vec<u32> = Vec::new();
    fn go(p: u64, u: u32, v: u32, a: u64, start: i64, blocks: &mut Vec<u32>, out: &mut Vec<padic::JDecomposition>) {
        // try closing here
        let pairs: u64 = blocks.iter().map(|&i| p.pow(i) + p.pow(i + 1)).sum();
        if pairs <= a {
            let rest = a - pairs;
            let dec = padic::JDecomposition { blocks: blocks.clone(), parts: Vec::new() };
            let windows = dec.part_windows(u, v);
            // assign each digit of `rest` to the window containing it
            let digits = modp::digits(rest, p);
            let mut parts = vec![0u64; windows.len()];
            let mut ok = true;
            for (pos, &dg) in digits.iter().enumerate() {
                if dg == 0 {
                    continue;
                }
                match windows.iter().position(|&(lo, top)| pos as i64 >= lo && (pos as i64) < top - 2) {
                    Some(j) => parts[j] += dg * p.pow(pos as u32),
                    None => ok = false,
                }
            }
            if ok {
                ok = windows.iter().zip(&parts).all(|(&(lo, top), &part)| {
                    let lo = lo.max(0) as u32;
                    let top = top.max(lo as i64 + 1) as u32;
                    padic::in_i(p, lo, top, part)
                });
            }
            if ok {
                out.push(padic::JDecomposition { blocks: blocks.clone(), parts });
            }
        }
        let hi = v as i64 - 2;
        let mut i = start;
        while i + 1 < hi {
            blocks.push(i as u32);
            go(p, u, v, a, i + 3, blocks, out);
            blocks.pop();
            i += 1;
        }
    }
    go(p, u, v, a, u as i64, &mut blocks, &mut out);
    out
}

fn j_recursion(params: &Params) -> Result<Outcome> {
    let (u, v) = uv(params)?;
    let p = params.p;
    let big = padic::index_set_j(p, u, v + 3)?;
    let a2 = padic::index_set_j(p, u, v + 2)?;
    let a1 = padic::index_set_j(p, u, v + 1)?;
    let a0 = padic::index_set_j(p, u, v)?;
    let pv = pw(p, v as u64)?;
    let pv1 = pw(p, v as u64 - 1)?;
    let mut union: Vec<u64> = a2.clone();
    union.extend(a1.iter().map(|a| pv + a));
    union.extend(a0.iter().map(|a| pv + pv1 + a));
    let total = union.len();
    union.sort_unstable();
    union.dedup();
    let mut failures = Vec::new();
    if union.len() != total {
        failures.push("the three pieces overlap".to_string());
    }
    if union != big {
        failures.push(format!("set mismatch: |J(u,v+3)| = {}, |union| = {}", big.len(), union.len()));
    }
    let b = |vv: u32, a: u64| padic::b_func(p, u, vv, a);
    let cf = |vv: u32, a: u64| padic::c_func(p, u, vv, a);
    for &a in &a2 {
        if b(v + 3, a)? != pw(p, v as u64 + 1)? + b(v + 2, a)? || cf(v + 3, a)? != cf(v + 2, a)? {
            failures.push(format!("transfer from J(u,v+2) fails at a = {a}"));
        }
    }
    for &a in &a1 {
        if b(v + 3, pv + a)? != b(v + 1, a)? || cf(v + 3, pv + a)? != pv + cf(v + 1, a)? {
            failures.push(format!("transfer from J(u,v+1) fails at a = {a}"));
        }
    }
    for &a in &a0 {
        if b(v + 3, pv + pv1 + a)? != b(v, a)? || cf(v + 3, pv + pv1 + a)? != cf(v, a)? {
            failures.push(format!("transfer from J(u,v) fails at a = {a}"));
        }
    }
    for &a in &big {
        let dec = padic::j_decompose(p, u, v + 3, a)?;
        if dec.reassemble(p) != a {
            failures.push(format!("decomposition of {a} does not reassemble"));
        }
        let all = all_j_decompositions(p, u, v + 3, a);
        if all.len() != 1 || all[0] != dec {
            failures.push(format!("{a} has {} decompositions", all.len()));
        }
    }
    Ok(Outcome::Verdict { branch: String::new(), failure: failures.first().cloned() })
}

fn mui_expansion(params: &Params) -> Result<Outcome> {
    let n = get_n(params)?;
    let k = params.get_nat("k")? as usize;
    let e = params.get_list("e")?;
    if k == 0 || k > n || e.len() != n - k {
        return hyp("need 1 ≤ k ≤ n and |e| = n - k");
    }
    if !distinct(&e) {
        return hyp("e entries must be distinct");
    }
    let c = ctx_for(params.p, n)?;
    let (lhs, rhs) = invariants::mui_expansion_sides(c, &BracketSpec::new(k, e, n))?;
    Outcome::sides("", lhs, rhs)
}
