//! Expression syntax tree and its canonical printer.
//!
//! Every integer argument is kept as written (`u64`); range checks against the
//! context happen at evaluation time, so printing and re-parsing any tree gives
//! the same tree back.

use std::fmt;

use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariant {
    /// `L(m)`
    L(u64),
    /// `Ls(m,s)`
    Ls(u64, u64),
    /// `Q(n,s)`
    Q(u64, u64),
    /// `V(m)`
    V(u64),
    /// `M(m;s1,…,sk)`
    M(u64, Vec<u64>),
    /// `Md(m,d;s1,…,sk)`
    Md(u64, u64, Vec<u64>),
    /// `B(k;[e…];m)`
    B(u64, Vec<u64>, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    /// `Stu(u, ·)`
    Stu(u64),
    /// `StDelta(i, ·)`
    StDelta(u64),
    /// `P(r, ·)`
    P(u64),
    /// `StSR([S],[R], ·)`
    StSR(Vec<u64>, Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    X(u64),
    Y(u64),
    Invariant(Invariant),
    Apply(Op, Box<Expr>),
    /// `Act([[row],…], ·)`: linear substitution by a matrix.
    Act(Vec<Vec<u64>>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

/// Binding strength of a node's outermost operator.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Mul(..) => 1,
        Expr::Pow(..) => 2,
        _ => 3,
    }
}

fn list(f: &mut fmt::Formatter<'_>, items: &[u64]) -> fmt::Result {
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// Prints `e`, parenthesized when it binds looser than `min`.
fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::L(m) => write!(f, "L({m})"),
            Invariant::Ls(m, s) => write!(f, "Ls({m},{s})"),
            Invariant::Q(n, s) => write!(f, "Q({n},{s})"),
            Invariant::V(m) => write!(f, "V({m})"),
            Invariant::M(m, s) => {
                write!(f, "M({m};")?;
                list(f, s)?;
                f.write_str(")")
            }
            Invariant::Md(m, d, s) => {
                write!(f, "Md({m},{d};")?;
                list(f, s)?;
                f.write_str(")")
            }
            Invariant::B(k, e, m) => {
                write!(f, "B({k};[")?;
                list(f, e)?;
                write!(f, "];{m})")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::X(i) => write!(f, "x({i})"),
            Expr::Y(i) => write!(f, "y({i})"),
            Expr::Invariant(inv) => write!(f, "{inv}"),
            Expr::Apply(op, arg) => {
                match op {
                    Op::Stu(u) => write!(f, "Stu({u}, ")?,
                    Op::StDelta(i) => write!(f, "StDelta({i}, ")?,
                    Op::P(r) => write!(f, "P({r}, ")?,
                    Op::StSR(s, r) => {
                        f.write_str("StSR([")?;
                        list(f, s)?;
                        f.write_str("],[")?;
                        list(f, r)?;
                        f.write_str("], ")?;
                    }
                }
                write!(f, "{arg})")
            }
            Expr::Act(rows, arg) => {
                f.write_str("Act([")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str("[")?;
                    list(f, row)?;
                    f.write_str("]")?;
                }
                write!(f, "], {arg})")
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                child(f, a, 0)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                child(f, b, 1)
            }
            Expr::Mul(a, b) => {
                child(f, a, 1)?;
                f.write_str(" * ")?;
                child(f, b, 2)
            }
            Expr::Pow(base, k) => {
                child(f, base, 3)?;
                write!(f, "^{k}")
            }
        }
    }
}

impl Expr {
    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn difference(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn product(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, k: u64) -> Expr {
        Expr::Pow(Box::new(a), k)
    }

    pub fn apply(op: Op, a: Expr) -> Expr {
        Expr::Apply(op, Box::new(a))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Int(_) | Expr::X(_) | Expr::Y(_) | Expr::Invariant(_) => 1,
            Expr::Apply(_, a) | Expr::Act(_, a) | Expr::Pow(a, _) => 1 + a.size(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => 1 + a.size() + b.size(),
        }
    }
}

fn small_list(rng: &mut impl Rng, max_len: usize, max: u64) -> Vec<u64> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..=max)).collect()
}

/// A random tree of depth at most `depth`, for round-trip fuzzing. Arguments
/// are syntactically valid but not necessarily meaningful in any context.
pub fn random_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => Expr::Int(rng.gen_range(0..1000)),
            1 => Expr::X(rng.gen_range(0..9)),
            2 => Expr::Y(rng.gen_range(0..9)),
            3 => Expr::Invariant(Invariant::L(rng.gen_range(0..5))),
            4 => Expr::Invariant(Invariant::Ls(rng.gen_range(0..5), rng.gen_range(0..5))),
            5 => Expr::Invariant(Invariant::Q(rng.gen_range(0..5), rng.gen_range(0..5))),
            6 => Expr::Invariant(Invariant::V(rng.gen_range(0..5))),
            7 => Expr::Invariant(Invariant::M(rng.gen_range(0..5), small_list(rng, 3, 4))),
            8 => Expr::Invariant(Invariant::Md(rng.gen_range(0..5), rng.gen_range(0..5), small_list(rng, 3, 4))),
            _ => Expr::Invariant(Invariant::B(rng.gen_range(0..4), small_list(rng, 4, 5), rng.gen_range(0..5))),
        };
    }
    let sub = |rng: &mut _| Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..9) {
        0 => Expr::Add(sub(rng), sub(rng)),
        1 => Expr::Sub(sub(rng), sub(rng)),
        2 => Expr::Mul(sub(rng), sub(rng)),
        3 => Expr::Pow(sub(rng), rng.gen_range(0..20)),
        4 => Expr::Apply(Op::Stu(rng.gen_range(0..5)), sub(rng)),
        5 => Expr::Apply(Op::StDelta(rng.gen_range(0..5)), sub(rng)),
        6 => Expr::Apply(Op::P(rng.gen_range(0..30)), sub(rng)),
        7 => Expr::Apply(Op::StSR(small_list(rng, 3, 4), small_list(rng, 3, 4)), sub(rng)),
        _ => {
            let n = rng.gen_range(0..4);
            let rows = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..5)).collect()).collect();
            Expr::Act(rows, sub(rng))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_parenthesizes_by_precedence() {
        let x1 = Expr::X(1);
        let y2 = Expr::Y(2);
        assert_eq!(
            Expr::difference(x1.clone(), Expr::difference(y2.clone(), Expr::Int(1))).to_string(),
            "x(1) - (y(2) - 1)"
        );
        assert_eq!(Expr::product(Expr::sum(x1.clone(), y2.clone()), y2.clone()).to_string(), "(x(1) + y(2)) * y(2)");
        assert_eq!(Expr::pow(Expr::pow(y2.clone(), 2), 3).to_string(), "(y(2)^2)^3");
        assert_eq!(Expr::product(x1, Expr::pow(y2, 2)).to_string(), "x(1) * y(2)^2");
        let b = Expr::Invariant(Invariant::B(1, vec![1], 2));
        assert_eq!(Expr::product(b, Expr::pow(Expr::Invariant(Invariant::L(2)), 2)).to_string(), "B(1;[1];2) * L(2)^2");
        let op = Expr::apply(Op::StSR(vec![0, 1], vec![]), Expr::Invariant(Invariant::M(2, vec![])));
        assert_eq!(op.to_string(), "StSR([0,1],[], M(2;))");
    }
}
