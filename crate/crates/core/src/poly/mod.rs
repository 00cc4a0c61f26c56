//! The graded-commutative algebra `E(x_1..x_n) ⊗ F_p[y_1..y_n]`.
//!
//! Odd generators `x_i` (degree 1) anticommute and square to zero, even
//! generators `y_i` (degree 2) are central. An [`Element`] is a sparse sum of
//! [`Term`]s kept in canonical form: no zero coefficients, no repeated
//! monomials, terms sorted in descending [`Monomial`] order.

mod div;
mod matrix;
mod text;

use std::cmp::{Ordering, Reverse};
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::modp;

pub use matrix::MatrixFp;
pub use text::{ElementJson, TermJson};

/// Largest supported number of variable pairs.
pub const MAX_VARS: usize = 8;

const _: () = assert!(MAX_VARS <= 16, "exterior mask is a u16");

/// The ambient algebra: the prime `p` and the number `n` of `(x_i, y_i)` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    p: u64,
    n: usize,
}

impl Context {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if p < 3 || !modp::is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidPrime(p));
        }
        if n == 0 || n > MAX_VARS {
            return Err(Error::InvalidVariableCount { n, max: MAX_VARS });
        }
        Ok(Context { p, n })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, n={})", self.p, self.n)
    }
}

/// Which generator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    X,
    Y,
}

/// Coefficient-free monomial `x_I · y^α`.
///
/// Bit `i-1` of the exterior mask stands for `x_i`; the exponent of `y_i`
/// sits at slot `i-1`. Unused slots stay zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u64; MAX_VARS],
    ext: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_VARS], ext: 0 };

    pub fn new(ext: &[usize], exps: &[u64]) -> Option<Monomial> {
        let mut m = Monomial::ONE;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = e;
        }
        let mut last = 0;
        for &i in ext {
            if i <= last || i > MAX_VARS {
                return None;
            }
            m.ext |= 1 << (i - 1);
            last = i;
        }
        Some(m)
    }

    pub fn ext_mask(&self) -> u16 {
        self.ext
    }

    /// Exterior indices, ascending and 1-based.
    pub fn ext_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_VARS).filter(move |b| self.ext >> b & 1 == 1).map(|b| b + 1)
    }

    pub fn ext_len(&self) -> u32 {
        self.ext.count_ones()
    }

    /// Exponent of `y_i` (1-based).
    pub fn exp(&self, i: usize) -> u64 {
        self.exps[i - 1]
    }

    pub fn exps(&self) -> &[u64; MAX_VARS] {
        &self.exps
    }

    pub fn is_y_only(&self) -> bool {
        self.ext == 0
    }

    /// `|I| + 2·Σα`, saturating (only used for ordering).
    pub fn degree(&self) -> u64 {
        let y: u64 = self.exps.iter().fold(0u64, |acc, &e| acc.saturating_add(e));
        y.saturating_mul(2).saturating_add(self.ext_len() as u64)
    }

    pub(crate) fn with_ext(mut self, ext: u16) -> Monomial {
        self.ext = ext;
        self
    }

    pub(crate) fn add_exp(&mut self, i: usize, by: u64) -> Result<()> {
        self.exps[i - 1] = self.exps[i - 1].checked_add(by).ok_or(Error::Overflow("exponent"))?;
        Ok(())
    }

    /// Product of monomials. `None` when an exterior index repeats; otherwise
    /// the monomial together with whether the Koszul sign is negative.
    pub fn mul(&self, other: &Monomial) -> Result<Option<(Monomial, bool)>> {
        if self.ext & other.ext != 0 {
            return Ok(None);
        }
        let mut exps = self.exps;
        for (e, &o) in exps.iter_mut().zip(&other.exps) {
            *e = e.checked_add(o).ok_or(Error::Overflow("exponent"))?;
        }
        Ok(Some((Monomial { exps, ext: self.ext | other.ext }, merge_sign(self.ext, other.ext))))
    }

    /// `y`-exponentwise quotient; `None` unless `other` divides `self`.
    fn y_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = *self;
        for (e, &o) in out.exps.iter_mut().zip(&other.exps) {
            *e = e.checked_sub(o)?;
        }
        Some(out)
    }
}

/// Parity of the permutation sorting the concatenation of two disjoint
/// ascending index lists: `true` means odd.
pub(crate) fn merge_sign(left: u16, right: u16) -> bool {
    let mut inversions = 0u32;
    let mut r = right;
    while r != 0 {
        let j = r.trailing_zeros();
        inversions += (left >> (j + 1)).count_ones();
        r &= r - 1;
    }
    inversions % 2 == 1
}

/// Sort key realizing the monomial order: total degree, then the exterior
/// index list lexicographically (1-based indices padded with 0, so a proper
/// prefix sorts first), then the exponent vector reverse-lexicographically
/// (a smaller exponent in the last differing variable is larger).
type OrderKey = (u64, [u8; MAX_VARS], [Reverse<u64>; MAX_VARS]);

impl Monomial {
    fn order_key(&self) -> OrderKey {
        let mut ext = [0u8; MAX_VARS];
        for (slot, i) in ext.iter_mut().zip(self.ext_indices()) {
            *slot = i as u8;
        }
        let mut exps = [Reverse(0); MAX_VARS];
        for (slot, &e) in exps.iter_mut().zip(self.exps.iter().rev()) {
            *slot = Reverse(e);
        }
        (self.degree(), ext, exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    /// Representative in `1..p`.
    pub coeff: u64,
    pub mono: Monomial,
}

impl Term {
    pub fn ext(&self) -> Vec<usize> {
        self.mono.ext_indices().collect()
    }

    pub fn degree(&self) -> u64 {
        self.mono.degree()
    }
}

/// Homogeneity report; zero is homogeneous of no particular degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(u64),
    Inhomogeneous,
}

/// An element of `P_n` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    ctx: Context,
    terms: Vec<Term>,
}

/// Sparse accumulator used by every operation that produces many terms.
pub(crate) struct Accumulator {
    ctx: Context,
    map: FxHashMap<Monomial, u64>,
}

impl Accumulator {
    pub(crate) fn new(ctx: Context) -> Self {
        Accumulator { ctx, map: FxHashMap::default() }
    }

    /// Adds `c` (any residue) to the coefficient of `m`.
    #[inline]
    pub(crate) fn add(&mut self, m: Monomial, c: u64) {
        let p = self.ctx.p;
        let slot = self.map.entry(m).or_insert(0);
        *slot += c;
        if *slot >= p << 32 {
            *slot %= p;
        }
    }

    #[inline]
    pub(crate) fn add_signed(&mut self, m: Monomial, c: u64, negative: bool) {
        let c = c % self.ctx.p;
        self.add(m, if negative && c != 0 { self.ctx.p - c } else { c });
    }

    pub(crate) fn finish(self) -> Element {
        let p = self.ctx.p;
        let mut terms: Vec<Term> = self
            .map
            .into_iter()
            .filter_map(|(mono, c)| {
                let c = c % p;
                (c != 0).then_some(Term { coeff: c, mono })
            })
            .collect();
        terms.sort_by_cached_key(|t| Reverse(t.mono.order_key()));
        Element { ctx: self.ctx, terms }
    }
}

impl Element {
    pub fn zero(ctx: Context) -> Element {
        Element { ctx, terms: Vec::new() }
    }

    pub fn one(ctx: Context) -> Element {
        Element::constant(ctx, 1)
    }

    pub fn constant(ctx: Context, c: u64) -> Element {
        Element::monomial(ctx, c, Monomial::ONE)
    }

    pub fn monomial(ctx: Context, c: u64, mono: Monomial) -> Element {
        let c = c % ctx.p;
        if c == 0 {
            return Element::zero(ctx);
        }
        Element { ctx, terms: vec![Term { coeff: c, mono }] }
    }

    /// The generator `x_i` or `y_i`.
    pub fn generator(ctx: Context, kind: GenKind, i: usize) -> Result<Element> {
        ctx.check_index(i)?;
        let mut mono = Monomial::ONE;
        match kind {
            GenKind::X => mono.ext = 1 << (i - 1),
            GenKind::Y => mono.exps[i - 1] = 1,
        }
        Ok(Element::monomial(ctx, 1, mono))
    }

    pub fn x(ctx: Context, i: usize) -> Result<Element> {
        Element::generator(ctx, GenKind::X, i)
    }

    pub fn y(ctx: Context, i: usize) -> Result<Element> {
        Element::generator(ctx, GenKind::Y, i)
    }

    /// `y_i^e`.
    pub fn y_pow(ctx: Context, i: usize, e: u64) -> Result<Element> {
        ctx.check_index(i)?;
        let mut mono = Monomial::ONE;
        mono.exps[i - 1] = e;
        Ok(Element::monomial(ctx, 1, mono))
    }

    /// Builds a canonical element from arbitrary `(coefficient, monomial)`
    /// pairs; coefficients are reduced mod `p` and duplicates merged.
    pub fn from_terms<I>(ctx: Context, terms: I) -> Result<Element>
    where
        I: IntoIterator<Item = (u64, Monomial)>,
    {
        let mut acc = Accumulator::new(ctx);
        for (c, m) in terms {
            for i in ctx.n..MAX_VARS {
                if m.exps[i] != 0 || m.ext >> i & 1 == 1 {
                    return Err(Error::IndexOutOfRange { index: i + 1, n: ctx.n });
                }
            }
            acc.add(m, c % ctx.p);
        }
        Ok(acc.finish())
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading (largest) term.
    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn is_y_only(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_y_only())
    }

    pub(crate) fn same_ctx(&self, other: &Element) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.ctx, other.ctx))
        }
    }

    pub fn degree(&self) -> Degree {
        let mut it = self.terms.iter().map(|t| t.mono.degree());
        match it.next() {
            None => Degree::Zero,
            Some(d) if it.all(|e| e == d) => Degree::Homogeneous(d),
            Some(_) => Degree::Inhomogeneous,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() != Degree::Inhomogeneous
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_ctx(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.same_ctx(other)?;
        Ok(self.merge(other, true))
    }

    /// Merge of two sorted term lists.
    fn merge(&self, other: &Element, negate_other: bool) -> Element {
        let p = self.ctx.p;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: u64| if negate_other { p - c } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.mono.cmp(&b.mono) {
                Ordering::Greater => {
                    out.push(*a);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { coeff: fix(b.coeff), mono: b.mono });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (a.coeff + fix(b.coeff)) % p;
                    if c != 0 {
                        out.push(Term { coeff: c, mono: a.mono });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(other.terms[j..].iter().map(|b| Term { coeff: fix(b.coeff), mono: b.mono }));
        Element { ctx: self.ctx, terms: out }
    }

    pub fn neg(&self) -> Element {
        self.scalar_mul(self.ctx.p - 1)
    }

    pub fn scalar_mul(&self, c: u64) -> Element {
        let p = self.ctx.p;
        let c = c % p;
        if c == 0 {
            return Element::zero(self.ctx);
        }
        Element {
            ctx: self.ctx,
            terms: self.terms.iter().map(|t| Term { coeff: modp::mul_mod(t.coeff, c, p), mono: t.mono }).collect(),
        }
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(&self, k: u64) -> Element {
        if k.is_multiple_of(2) {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Koszul-signed product.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_ctx(other)?;
        let mut acc = Accumulator::new(self.ctx);
        self.mul_into(other, 1, &mut acc)?;
        Ok(acc.finish())
    }

    /// Adds `c·self·other` to `acc`.
    fn mul_into(&self, other: &Element, c: u64, acc: &mut Accumulator) -> Result<()> {
        let p = self.ctx.p;
        let c = c % p;
        if c == 0 || self.is_zero() || other.is_zero() {
            return Ok(());
        }
        acc.map.reserve(self.terms.len().saturating_mul(other.terms.len()).min(1 << 16));
        for l in &self.terms {
            let lc = modp::mul_mod(l.coeff, c, p);
            for r in &other.terms {
                if let Some((m, neg)) = l.mono.mul(&r.mono)? {
                    acc.add_signed(m, modp::mul_mod(lc, r.coeff, p), neg);
                }
            }
        }
        Ok(())
    }

    /// `Σ c_j · a_j · b_j` without building the individual products.
    pub fn sum_of_products<'a, I>(ctx: Context, items: I) -> Result<Element>
    where
        I: IntoIterator<Item = (u64, &'a Element, &'a Element)>,
    {
        let mut acc = Accumulator::new(ctx);
        let zero = Element::zero(ctx);
        for (c, a, b) in items {
            a.same_ctx(&zero)?;
            b.same_ctx(&zero)?;
            a.mul_into(b, c, &mut acc)?;
        }
        Ok(acc.finish())
    }

    /// Product of a list of factors; the empty product is one.
    pub fn product<'a, I>(ctx: Context, factors: I) -> Result<Element>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let mut acc = Element::one(ctx);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Sum of a list of elements.
    pub fn sum<'a, I>(ctx: Context, items: I) -> Result<Element>
    where
        I: IntoIterator<Item = &'a Element>,
    {
        let mut acc = Accumulator::new(ctx);
        for e in items {
            e.same_ctx(&Element::zero(ctx))?;
            for t in &e.terms {
                acc.add(t.mono, t.coeff);
            }
        }
        Ok(acc.finish())
    }

    /// `a^m`. `y`-only elements go through the Frobenius twist digit by
    /// digit; anything else uses repeated squaring.
    pub fn pow(&self, m: u64) -> Result<Element> {
        if self.is_y_only() {
            self.pow_frobenius(m)
        } else {
            self.pow_by_squaring(m)
        }
    }

    pub fn pow_by_squaring(&self, mut m: u64) -> Result<Element> {
        let mut acc = Element::one(self.ctx);
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `a^m = Π_j ((a^{d_j})^{p^j})` for the base-`p` digits `d_j` of `m`.
    fn pow_frobenius(&self, m: u64) -> Result<Element> {
        let p = self.ctx.p;
        let mut acc = Element::one(self.ctx);
        for (j, d) in modp::digits(m, p).into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let part = self.pow_by_squaring(d)?;
            let twisted = part.frobenius(j as u64)?;
            acc = acc.mul(&twisted)?;
        }
        Ok(acc)
    }

    /// `a^{p^e}` for a `y`-only element: every exponent scales by `p^e`.
    ///
    /// Elements with exterior content are rejected.
    pub fn frobenius(&self, e: u64) -> Result<Element> {
        if !self.is_y_only() {
            return Err(Error::InvalidArgument("Frobenius twist of an element with exterior part".into()));
        }
        let q = modp::checked_pow(self.ctx.p, e).ok_or(Error::Overflow("p^e"))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut mono = t.mono;
            for x in mono.exps.iter_mut() {
                *x = x.checked_mul(q).ok_or(Error::Overflow("exponent"))?;
            }
            terms.push(Term { coeff: t.coeff, mono });
        }
        // Scaling every exponent by the same factor preserves the order.
        Ok(Element { ctx: self.ctx, terms })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
