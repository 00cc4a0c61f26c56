use std::collections::BTreeMap;

use super::{Element, Monomial, Term};
use crate::error::{Error, Result};
use crate::modp;

impl Element {
    /// Exact quotient `a / b` for a `y`-only divisor `b`.
    ///
    /// Leading-term elimination in the canonical order; any remainder is an
    /// error, so on success `q · b == a` holds exactly.
    pub fn exact_div(&self, divisor: &Element) -> Result<Element> {
        self.same_ctx(divisor)?;
        let lead = *divisor.leading().ok_or(Error::DivisionByZero)?;
        if !divisor.is_y_only() {
            return Err(Error::DivisorHasExterior);
        }
        let p = self.ctx.p;
        let inv_lead = modp::inv_mod(lead.coeff, p);
        let mut rem: BTreeMap<Monomial, u64> = self.terms.iter().map(|t| (t.mono, t.coeff)).collect();
        let mut quotient: Vec<Term> = Vec::new();

        while let Some((&top, &c)) = rem.last_key_value() {
            let q_mono = top.y_div(&lead.mono).ok_or(Error::NotDivisible)?;
            let q_coeff = modp::mul_mod(c, inv_lead, p);
            for t in &divisor.terms {
                // q_mono carries the exterior part, t is y-only: no sign.
                let (m, _) = q_mono.mul(&t.mono)?.expect("y-only divisor");
                let delta = modp::mul_mod(q_coeff, t.coeff, p);
                let slot = rem.entry(m).or_insert(0);
                *slot = (*slot + p - delta) % p;
                if *slot == 0 {
                    rem.remove(&m);
                }
            }
            quotient.push(Term { coeff: q_coeff, mono: q_mono });
        }
        // Leading monomials were produced in strictly decreasing order.
        Ok(Element { ctx: self.ctx, terms: quotient })
    }
}
