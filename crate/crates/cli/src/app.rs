//! Argument handling and command dispatch.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use modinv_core::harness::{self, Params, Profile, SweepPlan};
use modinv_core::{padic, Context, Degree, Element};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::json;

use crate::ast::{random_expr, Expr};
use crate::error::{CliError, Result};
use crate::eval::eval;
use crate::parse::parse_expr;

#[derive(Debug, Parser)]
#[command(name = "modinv", version, about = "Exact algebra over E(x)⊗F_p[y] with Steenrod-Milnor operations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Odd prime; `verify` and `verify-all` also accept a list such as 3,5.
    #[arg(long, global = true, default_value = "3")]
    pub p: String,
    /// Number of variables.
    #[arg(long, global = true, default_value_t = 3)]
    pub n: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Verification grid size: quick or full.
    #[arg(long, global = true, default_value = "quick")]
    pub profile: String,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression and print it in canonical form.
    Eval { expr: String },
    /// Check one identity, at the given parameters or over its standard grid.
    Verify {
        #[arg(long)]
        id: String,
        /// Parameter assignment such as n=3 or e=0,2 (repeatable).
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
    /// Check every registered identity over its standard grid.
    VerifyAll,
    /// Print the index set I(u,v) or J(u,v); J also lists block decompositions.
    IndexSet {
        #[arg(long, value_enum, ignore_case = true)]
        kind: SetKind,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
    },
    /// Print a named invariant such as Q(3,1) or M(3;0,2).
    Invariant { name: String },
    /// Print/parse round trip on random expressions.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    I,
    J,
}

fn primes(src: &str) -> Result<Vec<u64>> {
    let ps: Vec<u64> = src
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad prime list '{src}'"))))
        .collect::<Result<_>>()?;
    for &p in &ps {
        // validates oddness and primality independently of n
        Context::new(p, 1)?;
    }
    Ok(ps)
}

fn single_prime(src: &str) -> Result<u64> {
    match primes(src)?.as_slice() {
        [p] => Ok(*p),
        _ => Err(CliError::Usage("this command takes a single prime".into())),
    }
}

fn degree_json(d: Degree) -> serde_json::Value {
    match d {
        Degree::Zero => json!(null),
        Degree::Homogeneous(k) => json!(k),
        Degree::Inhomogeneous => json!("inhomogeneous"),
    }
}

fn degree_text(d: Degree) -> String {
    match d {
        Degree::Zero => "none (zero)".into(),
        Degree::Homogeneous(k) => k.to_string(),
        Degree::Inhomogeneous => "inhomogeneous".into(),
    }
}

fn print_element(out: &mut dyn Write, json: bool, label: &str, a: &Element) -> Result<()> {
    if json {
        let v = json!({
            "expr": label,
            "element": a.to_json_value(),
            "degree": degree_json(a.degree()),
            "terms": a.len(),
        });
        writeln!(out, "{v}").ok();
    } else {
        writeln!(out, "{}", a.to_text()).ok();
        writeln!(out, "degree: {}", degree_text(a.degree())).ok();
        writeln!(out, "terms: {}", a.len()).ok();
    }
    Ok(())
}

fn cmd_eval(g: &GlobalArgs, src: &str, out: &mut dyn Write) -> Result<i32> {
    let ctx = Context::new(single_prime(&g.p)?, g.n)?;
    let e = parse_expr(src)?;
    let a = eval(ctx, &e)?;
    print_element(out, g.json, &e.to_string(), &a)?;
    Ok(0)
}

fn cmd_invariant(g: &GlobalArgs, src: &str, out: &mut dyn Write) -> Result<i32> {
    let ctx = Context::new(single_prime(&g.p)?, g.n)?;
    let e = parse_expr(src)?;
    if !matches!(e, Expr::Invariant(_)) {
        return Err(CliError::Usage(format!("'{e}' is not an invariant name")));
    }
    let a = eval(ctx, &e)?;
    if !g.json {
        writeln!(out, "{e} in {ctx}:").ok();
    }
    print_element(out, g.json, &e.to_string(), &a)?;
    Ok(0)
}

fn cmd_verify(g: &GlobalArgs, id: &str, assignments: &[String], out: &mut dyn Write) -> Result<i32> {
    harness::info(id)?;
    let ps = primes(&g.p)?;
    let profile: Profile = g.profile.parse()?;
    if assignments.is_empty() {
        let plans =
            ps.iter().map(|&p| SweepPlan::standard(id, p, profile)).collect::<std::result::Result<Vec<_>, _>>()?;
        return report_sweep(g, &ps, &plans, out);
    }
    let mut all_ok = true;
    let mut cases = Vec::new();
    for &p in &ps {
        let mut params = Params::new(p);
        for a in assignments {
            let (k, v) = Params::parse_assignment(a)?;
            params.set(&k, v);
        }
        let case = harness::check(id, &params)?;
        all_ok &= case.passed();
        let detail = match &case.status {
            harness::Status::Pass => None,
            harness::Status::Fail { diff, detail } => Some((detail.clone(), diff.as_ref().map(|d| d.to_text()))),
        };
        if g.json {
            cases.push(json!({
                "id": case.id,
                "params": case.params,
                "branch": case.branch,
                "pass": case.passed(),
                "lhs_terms": case.lhs_terms,
                "rhs_terms": case.rhs_terms,
                "detail": detail.as_ref().map(|d| &d.0),
                "diff": detail.as_ref().and_then(|d| d.1.clone()),
            }));
        } else {
            let branch = if case.branch.is_empty() { String::new() } else { format!(" ({})", case.branch) };
            let verdict = if case.passed() { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{verdict} {id} {}{branch}  lhs {} terms, rhs {} terms",
                case.params, case.lhs_terms, case.rhs_terms
            )
            .ok();
            if let Some((detail, diff)) = detail {
                writeln!(out, "    {detail}").ok();
                if let Some(d) = diff {
                    writeln!(out, "    lhs - rhs = {d}").ok();
                }
            }
        }
    }
    if g.json {
        writeln!(out, "{}", json!({ "cases": cases, "pass": all_ok })).ok();
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_verify_all(g: &GlobalArgs, out: &mut dyn Write) -> Result<i32> {
    let ps = primes(&g.p)?;
    let profile: Profile = g.profile.parse()?;
    let mut plans = Vec::new();
    for &p in &ps {
        for meta in harness::IDENTITIES {
            plans.push(SweepPlan::standard(meta.id, p, profile)?);
        }
    }
    report_sweep(g, &ps, &plans, out)
}

fn report_sweep(g: &GlobalArgs, ps: &[u64], plans: &[SweepPlan], out: &mut dyn Write) -> Result<i32> {
    let per_prime = plans.len() / ps.len();
    let report = harness::sweep_all(plans);
    if g.json {
        let entries: Vec<_> =
            report.entries.iter().enumerate().map(|(i, e)| json!({ "p": ps[i / per_prime], "report": e })).collect();
        let v = json!({ "pass": report.ok(), "total": report.total(), "failing": report.failed(), "entries": entries });
        writeln!(out, "{v}").ok();
    } else {
        for (i, e) in report.entries.iter().enumerate() {
            writeln!(out, "p={} {e}", ps[i / per_prime]).ok();
        }
        writeln!(
            out,
            "{}: {} cases, {} failing",
            if report.ok() { "ALL PASS" } else { "FAILURES" },
            report.total(),
            report.failed()
        )
        .ok();
    }
    Ok(if report.ok() { 0 } else { 1 })
}

fn cmd_index_set(g: &GlobalArgs, kind: SetKind, u: u32, v: u32, out: &mut dyn Write) -> Result<i32> {
    let p = single_prime(&g.p)?;
    let name = if kind == SetKind::I { "I" } else { "J" };
    let set = match kind {
        SetKind::I => padic::index_set_i(p, u, v)?,
        SetKind::J => padic::index_set_j(p, u, v)?,
    };
    let mut rows = Vec::new();
    if kind == SetKind::J {
        for &a in &set {
            let dec = padic::j_decompose(p, u, v, a)?;
            rows.push((a, dec, padic::b_func(p, u, v, a)?, padic::c_func(p, u, v, a)?));
        }
    }
    if g.json {
        let decs: Vec<_> = rows
            .iter()
            .map(|(a, d, b, c)| json!({ "a": a, "blocks": d.blocks, "parts": d.parts, "b": b, "c": c }))
            .collect();
        let mut v_json = json!({ "kind": name, "p": p, "u": u, "v": v, "set": set });
        if kind == SetKind::J {
            v_json["decompositions"] = json!(decs);
        }
        writeln!(out, "{v_json}").ok();
    } else {
        let items: Vec<String> = set.iter().map(|a| a.to_string()).collect();
        writeln!(out, "{name}({u},{v}) at p={p}: {{{}}} ({} elements)", items.join(", "), set.len()).ok();
        for (a, d, b, c) in &rows {
            writeln!(out, "  a={a}  {d}  b={b}  c={c}").ok();
        }
    }
    Ok(0)
}

fn cmd_fuzz(g: &GlobalArgs, count: usize, out: &mut dyn Write) -> Result<i32> {
    let mut rng = StdRng::seed_from_u64(g.seed);
    for i in 0..count {
        let e = random_expr(&mut rng, 5);
        let src = e.to_string();
        let back = parse_expr(&src)?;
        if back != e || back.to_string() != src {
            writeln!(out, "round trip failed at case {i}: {src}").ok();
            return Ok(1);
        }
    }
    if g.json {
        writeln!(out, "{}", json!({ "count": count, "seed": g.seed, "pass": true })).ok();
    } else {
        writeln!(out, "round trip ok: {count} expressions (seed {})", g.seed).ok();
    }
    Ok(0)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Eval { expr } => cmd_eval(g, expr, out),
        Command::Verify { id, params } => cmd_verify(g, id, params, out),
        Command::VerifyAll => cmd_verify_all(g, out),
        Command::IndexSet { kind, u, v } => cmd_index_set(g, *kind, *u, *v, out),
        Command::Invariant { name } => cmd_invariant(g, name, out),
        Command::Fuzz { count } => cmd_fuzz(g, *count, out),
    }
}

/// Runs the program on `args` (including the program name). Returns the
/// exit code: 0 success, 1 a verification failed, 2 any error. Errors are
/// reported on `err` as one `error[kind]: message` line.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            write!(out, "{}", e.render()).ok();
            return 0;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            writeln!(err, "{}", CliError::Usage(first).report()).ok();
            return 2;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "{}", e.report()).ok();
            2
        }
    }
}
