//! Evaluation of expressions to canonical elements.

use modinv_core::invariants::{self, BracketSpec, InvariantName};
use modinv_core::{milnor, Context, Element, Error, MatrixFp, MilnorOp};

use crate::ast::{Expr, Invariant, Op};

fn small<T: TryFrom<u64>>(v: u64, what: &str) -> Result<T, Error> {
    T::try_from(v).map_err(|_| Error::InvalidArgument(format!("{what} = {v} is too large")))
}

fn small_list(v: &[u64], what: &str) -> Result<Vec<u32>, Error> {
    v.iter().map(|&x| small(x, what)).collect()
}

fn invariant(ctx: Context, inv: &Invariant) -> Result<Element, Error> {
    let name = match inv {
        Invariant::L(m) => InvariantName::L(small(*m, "m")?),
        Invariant::Ls(m, s) => InvariantName::Ls(small(*m, "m")?, small(*s, "s")?),
        Invariant::Q(n, s) => InvariantName::Q(small(*n, "n")?, small(*s, "s")?),
        Invariant::V(m) => InvariantName::V(small(*m, "m")?),
        Invariant::M(m, s) => InvariantName::M(small(*m, "m")?, small_list(s, "s")?),
        Invariant::Md(m, d, s) => InvariantName::Md(small(*m, "m")?, *d, small_list(s, "s")?),
        Invariant::B(k, e, m) => {
            let spec = BracketSpec::new(small(*k, "k")?, small_list(e, "e")?, small(*m, "m")?);
            return invariants::bracket(ctx, &spec);
        }
    };
    invariants::invariant(ctx, &name)
}

/// Evaluates `e` in `ctx`.
pub fn eval(ctx: Context, e: &Expr) -> Result<Element, Error> {
    match e {
        Expr::Int(v) => Ok(Element::constant(ctx, v % ctx.p())),
        Expr::X(i) => Element::x(ctx, small(*i, "index")?),
        Expr::Y(i) => Element::y(ctx, small(*i, "index")?),
        Expr::Invariant(inv) => invariant(ctx, inv),
        Expr::Apply(op, arg) => {
            let a = eval(ctx, arg)?;
            match op {
                Op::Stu(u) => milnor::st_u(small(*u, "u")?, &a),
                Op::StDelta(i) => milnor::st_delta(small(*i, "i")?, &a),
                Op::P(r) => milnor::steenrod_p(*r, &a),
                Op::StSR(s, r) => milnor::apply(&MilnorOp::new(small_list(s, "s")?, r.clone())?, &a),
            }
        }
        Expr::Act(rows, arg) => {
            let g = MatrixFp::new(ctx, rows)?;
            g.apply(&eval(ctx, arg)?)
        }
        Expr::Add(a, b) => eval(ctx, a)?.add(&eval(ctx, b)?),
        Expr::Sub(a, b) => eval(ctx, a)?.sub(&eval(ctx, b)?),
        Expr::Mul(a, b) => eval(ctx, a)?.mul(&eval(ctx, b)?),
        Expr::Pow(a, k) => eval(ctx, a)?.pow(*k),
    }
}
