//! Scalar arithmetic in F_p and binomial coefficients modulo p.
//!
//! Binomial and multinomial coefficients are reduced digit by digit in base
//! `p` (Lucas), so arguments of size `p^k` never require factorials.

/// Trial-division primality test; moduli here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if a | b < 1 << 32 {
        return a * b % p;
    }
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a non-zero residue (Fermat).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// `(-1)^k` as a residue.
pub fn sign_mod(k: u64, p: u64) -> u64 {
    if k.is_multiple_of(2) {
        1
    } else {
        p - 1
    }
}

/// Base-`p` digits of `a`, least significant first. Zero has no digits.
pub fn digits(mut a: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while a > 0 {
        out.push(a % p);
        a /= p;
    }
    out
}

/// `C(n, k) mod p` for `n < p`.
fn small_binomial(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for j in 0..k {
        num = mul_mod(num, n - j, p);
        den = mul_mod(den, j + 1, p);
    }
    mul_mod(num, inv_mod(den, p), p)
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = mul_mod(acc, small_binomial(nd, kd, p), p);
        n /= p;
        k /= p;
    }
    acc
}

/// `m! / ((m - Σ parts)! · Π parts!) mod p`, zero when `Σ parts > m`.
pub fn multinomial_mod(m: u64, parts: &[u64], p: u64) -> u64 {
    let mut rest = m;
    let mut acc = 1u64;
    for &r in parts {
        if r > rest {
            return 0;
        }
        acc = mul_mod(acc, binomial_mod(rest, r, p), p);
        if acc == 0 {
            return 0;
        }
        rest -= r;
    }
    acc
}

/// Checked `p^e`.
pub fn checked_pow(p: u64, e: u64) -> Option<u64> {
    let e: u32 = e.try_into().ok()?;
    p.checked_pow(e)
}
