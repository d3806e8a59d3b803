//! `klein`: JSON verification certificates for the ADE Klein-surface
//! fibrations. Exit 0 when every check is verified, 1 when one failed,
//! 2 on a usage or input error.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use klein_core::autos::{diagonal_group, parse_shear_poly, tau_report, verify_an_wild_family};
use klein_core::catalog::Catalog;
use klein_core::curves::{
    certify_s6_lines, enumerate_an, enumerate_dn, enumerate_s7, enumerate_s8, Family, CurveError,
};
use klein_core::exact::parse_rational;
use klein_core::exec::{init_threads_from_env, Execution};
use klein_core::galois::{analyze, rationality_verdict, verdict_grid, BaseExtension, Case, DEFAULT_GRID_CASES};
use klein_core::geometry::SurfaceName;
use klein_core::lattice::{build_root_system, minus_one_classes, PicardLattice};
use klein_core::oracle::{audit_case, NumericConfig};
use klein_core::report::{reproduce_paper, Check, Status, SuiteOptions, PLUMBING};

const SCHEMA: &str = "klein-cert/1";

#[derive(Parser)]
#[command(name = "klein", version, about = "Exact verification of exceptional curves, Galois orbits and rationality degrees")]
struct Cli {
    /// Also write the certificate to this file.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Omit timings so that repeated runs are byte-identical.
    #[arg(long, global = true)]
    stable: bool,
    /// Run without data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified (-1)-curves of s6, s7, s8, dn:N or an:N.
    Curves { surface: String },
    /// Rationality over C(t^(1/m)) for e6, e7, e8, dN or aN.
    Verdict {
        case: String,
        #[arg(long)]
        ext: u32,
    },
    /// Verdicts for several cases and m = 1..max-m.
    VerdictGrid {
        /// Comma-separated cases.
        #[arg(long, value_delimiter = ',')]
        cases: Option<Vec<String>>,
        #[arg(long, default_value_t = 30)]
        max_m: u32,
    },
    /// (-1)-classes and root system of the lattice of P^2 blown up in r points.
    Lattice { r: usize },
    /// Automorphism checks: d4 (tau and diagonal maps), e6, e7, e8, dN, or an/aN with --poly.
    Autos {
        surface: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value = "1")]
        poly: String,
    },
    /// Numeric reconstruction of the curves at a value of t.
    Audit {
        surface: String,
        #[arg(long, default_value = "2")]
        t: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Every acceptance criterion in one run.
    ReproducePaper {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        mutations: usize,
        /// Mutate one catalog coefficient (chosen by this seed) first.
        #[arg(long, hide = true)]
        inject_fault: Option<u64>,
    },
}

/// An input the command cannot work with (exit 2).
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Outcome {
    inputs: Value,
    checks: Vec<Check>,
    result: Value,
}

#[derive(Serialize)]
struct Certificate<'a> {
    schema: &'a str,
    command: &'a str,
    inputs: Value,
    engine: String,
    status: Status,
    checks: Vec<Check>,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn failed(name: &str, e: impl std::fmt::Display) -> Check {
    Check::new(name, false, format!("error: {e}"), PLUMBING)
}

fn family_json(f: &Family) -> Value {
    json!({
        "family": f.label.to_string(),
        "count": f.count(),
        "tower": f.relation(),
        "vars": f.vars,
        "equations": f.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "parameter": f.parameter,
        "order": f.order,
        "constants": f.constants,
        "residue": f.residue.to_string(),
    })
}

fn curves(cat: &Catalog, surface: &str) -> Result<Outcome, InputError> {
    let name: SurfaceName = surface.parse()?;
    let inputs = json!({ "surface": name.to_string() });
    let (want, reference, fams): (usize, &str, Result<(Vec<_>, Value), CurveError>) = match name {
        SurfaceName::S6 => (27, "S6 carries 27 lines", certify_s6_lines(cat).map(|s| (s.families, Value::Null))),
        SurfaceName::S7 => (
            56,
            "S7 has 56 (-1)-curves",
            enumerate_s7(cat).map(|s| {
                let extra = json!({ "Q": s.q.to_string(), "Q_real_roots": s.q_real_roots, "guards": s.guards, "trace": s.trace });
                (s.families, extra)
            }),
        ),
        SurfaceName::S8 => (
            240,
            "S8 has 240 (-1)-curves",
            enumerate_s8(cat).map(|s| {
                let b: Vec<Value> = s
                    .branches
                    .iter()
                    .map(|b| json!({ "P": b.p.to_string(), "Q": b.q.to_string(), "real_roots": b.real_roots }))
                    .collect();
                (s.families, json!({ "branches": b, "guards": s.guards, "trace": s.trace }))
            }),
        ),
        SurfaceName::Dn(n) => (2 * n as usize, PLUMBING, enumerate_dn(cat, n).map(|f| (f, Value::Null))),
        SurfaceName::An(n) => (2 * n as usize, PLUMBING, enumerate_an(cat, n).map(|f| (f, Value::Null))),
        other => return Err(InputError(format!("{other} has no curve enumeration (use s6, s7, s8, dn:N or an:N)"))),
    };
    let (fams, extra) = match fams {
        Ok(x) => x,
        Err(e) => return Ok(Outcome { inputs, checks: vec![failed("enumeration", e)], result: Value::Null }),
    };
    let count: usize = fams.iter().map(|f| f.count()).sum();
    let checks = vec![
        Check::new("count", count == want, count.to_string(), reference),
        Check::new(
            "membership residues",
            fams.iter().all(|f| f.certified()),
            "every family restricts the surface equation to 0",
            PLUMBING,
        ),
    ];
    let members: Vec<Value> = fams
        .iter()
        .flat_map(|f| f.members())
        .map(|c| json!({ "family": c.label().to_string(), "root": c.root, "power": c.power }))
        .collect();
    let result = json!({
        "count": count,
        "families": fams.iter().map(|f| family_json(f)).collect::<Vec<_>>(),
        "curves": members,
        "details": extra,
    });
    Ok(Outcome { inputs, checks, result })
}

fn verdict(cat: &Catalog, case: &str, m: u32) -> Result<Outcome, InputError> {
    let case: Case = case.parse()?;
    let ext = BaseExtension::new(m)?;
    let inputs = json!({ "case": case.to_string(), "ext": m });
    let v = analyze(cat, case).map_err(|e| e.to_string()).and_then(|d| rationality_verdict(&d, ext).map_err(|e| e.to_string()));
    Ok(match v {
        Ok(v) => {
            let check = Check::new(
                "rule table agrees with a | m",
                v.rational == (m % v.a == 0),
                format!("rational = {}, a = {}", v.rational, v.a),
                "rational over C(t^(1/m)) exactly when a divides m",
            );
            Outcome { inputs, checks: vec![check], result: to_value(&v) }
        }
        Err(e) => Outcome { inputs, checks: vec![failed("verdict", e)], result: Value::Null },
    })
}

fn grid(cat: &Catalog, cases: Option<Vec<String>>, max_m: u32, exec: Execution) -> Result<Outcome, InputError> {
    let cases: Vec<Case> = match cases {
        Some(c) => c.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        None => DEFAULT_GRID_CASES.to_vec(),
    };
    if max_m == 0 {
        return Err(InputError("--max-m must be at least 1".into()));
    }
    let ms: Vec<u32> = (1..=max_m).collect();
    let inputs = json!({ "cases": cases.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "max_m": max_m });
    Ok(match verdict_grid(cat, &cases, &ms, exec) {
        Ok(cells) => {
            let bad = cells.iter().filter(|c| c.rational != c.divides).count();
            let check = Check::new(
                "verdict equals a | m in every cell",
                bad == 0,
                format!("{} cells, {bad} disagreements", cells.len()),
                "rational over C(t^(1/m)) exactly when a divides m",
            );
            Outcome { inputs, checks: vec![check], result: json!({ "cells": cells }) }
        }
        Err(e) => Outcome { inputs, checks: vec![failed("grid", e)], result: Value::Null },
    })
}

/// Number of (-1)-classes on ℙ² blown up in r general points.
const CLASSES: [usize; 9] = [0, 1, 3, 6, 10, 16, 27, 56, 240];

fn lattice(r: usize, exec: Execution) -> Result<Outcome, InputError> {
    if r > 8 {
        return Err(InputError(format!("r must be at most 8, got {r}")));
    }
    let inputs = json!({ "r": r });
    let classes = minus_one_classes(r, exec)?;
    let lat = PicardLattice::new(r);
    let (form, k) = (lat.form(), lat.canonical());
    let reference = if r >= 6 { "27, 56 and 240 (-1)-curves in degrees 3, 2 and 1" } else { PLUMBING };
    let mut checks = vec![
        Check::new("class count", classes.len() == CLASSES[r], classes.len().to_string(), reference),
        Check::new(
            "v.v = -1 and v.K = -1",
            classes.iter().all(|v| form.dot(v, v) == -1 && form.dot(v, &k) == -1),
            format!("{} classes", classes.len()),
            PLUMBING,
        ),
    ];
    let roots = match build_root_system(r) {
        Ok(rs) => {
            checks.push(Check::new(
                "Coxeter number",
                rs.root_count % rs.rank() == 0 && (rs.root_count / rs.rank()) as u64 == rs.coxeter_number,
                format!("{} by reflections, {}/{} roots per rank", rs.coxeter_number, rs.root_count, rs.rank()),
                "Coxeter numbers 12, 18, 30 and 2(n-1)",
            ));
            to_value(&rs)
        }
        Err(_) => Value::Null,
    };
    let result = json!({
        "count": classes.len(),
        "classes": classes.iter().map(|v| lat.show(v)).collect::<Vec<_>>(),
        "root_system": roots,
    });
    Ok(Outcome { inputs, checks, result })
}

fn autos(cat: &Catalog, surface: &str, n: Option<u32>, poly: &str, exec: Execution) -> Result<Outcome, InputError> {
    let s = surface.to_ascii_lowercase();
    if s == "an" || s.starts_with('a') {
        let n = match (n, s.trim_start_matches('a')) {
            (Some(n), _) => n,
            (None, rest) => rest.parse().map_err(|_| InputError(format!("{surface}: give --n or aN")))?,
        };
        let p = parse_shear_poly(poly)?;
        let inputs = json!({ "surface": format!("a{n}"), "poly": p.to_string() });
        return Ok(match verify_an_wild_family(cat, n, &p) {
            Ok(r) => {
                let check = Check::new(
                    "shear preserves x^n - yz",
                    r.verified && r.divisible,
                    r.invariance.clone(),
                    "(x + yP, y, z + ((x + yP)^n - x^n)/y) preserves x^n - yz",
                );
                Outcome { inputs, checks: vec![check], result: to_value(&r) }
            }
            Err(e) => Outcome { inputs, checks: vec![failed("shear", e)], result: Value::Null },
        });
    }
    let case: Case = s.parse()?;
    let inputs = json!({ "surface": case.to_string() });
    let mut checks = Vec::new();
    let mut result = serde_json::Map::new();
    let reference = "diagonal automorphisms of the Klein surface";
    match diagonal_group(cat, case, 7, exec) {
        Ok(g) => {
            checks.extend(g.checks.iter().map(|c| Check::new(c.name.clone(), c.passed, c.detail.clone(), reference)));
            result.insert("diagonal".into(), to_value(&g));
        }
        Err(e) => checks.push(failed("diagonal group", e)),
    }
    if case == Case::Dn(4) {
        match tau_report(cat, 6, 3) {
            Ok(t) => {
                let reference = "tau has order 3 and preserves d4";
                checks.extend(t.checks.iter().map(|c| Check::new(c.name.clone(), c.passed, c.detail.clone(), reference)));
                result.insert("tau".into(), to_value(&t));
            }
            Err(e) => checks.push(failed("tau", e)),
        }
    }
    Ok(Outcome { inputs, checks, result: Value::Object(result) })
}

fn audit(cat: &Catalog, surface: &str, t: &str, tol: f64, exec: Execution) -> Result<Outcome, InputError> {
    let case = match surface.parse::<SurfaceName>() {
        Ok(SurfaceName::S6) => Case::E6,
        Ok(SurfaceName::S7) => Case::E7,
        Ok(SurfaceName::S8) => Case::E8,
        Ok(SurfaceName::Dn(n)) => Case::Dn(n),
        Ok(SurfaceName::An(n)) => Case::An(n),
        _ => surface.parse::<Case>()?,
    };
    let t = parse_rational(t).ok_or_else(|| InputError(format!("t = {t:?} is not a rational number")))?;
    if t.numer().bits() == 0 || !(tol > 0.0 && tol < 1.0) {
        return Err(InputError("need t != 0 and 0 < tol < 1".into()));
    }
    let cfg = NumericConfig { t: t.clone(), tol, ..Default::default() };
    let inputs = json!({ "surface": case.surface().to_string(), "t": t.to_string(), "tol": tol });
    Ok(match audit_case(cat, case, &[cfg], exec) {
        Ok(mut r) => {
            let r = r.remove(0);
            let mut checks: Vec<Check> = r
                .checks
                .iter()
                .map(|c| Check::new(c.name.clone(), c.passed, c.detail.clone(), "numeric reconstruction agrees with the exact curves"))
                .collect();
            checks.push(Check::new(
                "residues below tolerance",
                r.max_residue < tol,
                format!("{:e} at {}", r.max_residue, r.worst_curve),
                PLUMBING,
            ));
            Outcome { inputs, checks, result: to_value(&r) }
        }
        Err(e) => Outcome { inputs, checks: vec![failed("audit", e)], result: Value::Null },
    })
}

fn reproduce(cat: &Catalog, seed: u64, mutations: usize, fault: Option<u64>, exec: Execution) -> Outcome {
    let mut inputs = json!({ "seed": seed, "mutations": mutations });
    let (report, injected) = match fault {
        Some(f) => {
            inputs["inject_fault"] = json!(f);
            let (bad, m) = cat.mutate(f);
            let opts = SuiteOptions { fail_fast: true, mutations: 0, seed };
            (reproduce_paper(&bad, &opts, exec), Some(m))
        }
        None => (reproduce_paper(cat, &SuiteOptions { fail_fast: false, mutations, seed }, exec), None),
    };
    for c in &report.criteria {
        eprintln!("criterion {}: {} ({})", c.id, if c.passed { "PASS" } else { "FAIL" }, c.title);
    }
    let checks = report
        .criteria
        .iter()
        .flat_map(|c| c.checks.iter().map(move |k| Check { name: format!("[{}] {}", c.id, k.name), ..k.clone() }))
        .collect();
    let summary: Vec<Value> = report
        .criteria
        .iter()
        .map(|c| json!({ "id": c.id, "title": c.title, "passed": c.passed, "checks": c.checks.len() }))
        .collect();
    let result = json!({ "passed": report.passed, "criteria": summary, "errata": report.errata, "injected": injected });
    Outcome { inputs, checks, result }
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Curves { .. } => "curves",
        Command::Verdict { .. } => "verdict",
        Command::VerdictGrid { .. } => "verdict-grid",
        Command::Lattice { .. } => "lattice",
        Command::Autos { .. } => "autos",
        Command::Audit { .. } => "audit",
        Command::ReproducePaper { .. } => "reproduce-paper",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads_from_env();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let cat = Catalog::paper();
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Curves { surface } => curves(&cat, surface),
        Command::Verdict { case, ext } => verdict(&cat, case, *ext),
        Command::VerdictGrid { cases, max_m } => grid(&cat, cases.clone(), *max_m, exec),
        Command::Lattice { r } => lattice(*r, exec),
        Command::Autos { surface, n, poly } => autos(&cat, surface, *n, poly, exec),
        Command::Audit { surface, t, tol } => audit(&cat, surface, t, *tol, exec),
        Command::ReproducePaper { seed, mutations, inject_fault: fault } => Ok(reproduce(&cat, *seed, *mutations, *fault, exec)),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(InputError(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ok = outcome.checks.iter().all(|c| !c.failed());
    let cert = Certificate {
        schema: SCHEMA,
        command: name(&cli.command),
        inputs: outcome.inputs,
        engine: format!("klein {}", env!("CARGO_PKG_VERSION")),
        status: if ok { Status::Verified } else { Status::Failed },
        checks: outcome.checks,
        result: outcome.result,
        elapsed_ms: (!cli.stable).then(|| start.elapsed().as_millis()),
    };
    let text = serde_json::to_string_pretty(&cert).expect("serializable");
    println!("{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {path}: {e}");
            return ExitCode::from(2);
        }
    }
    if !ok {
        for c in cert.checks.iter().filter(|c| c.failed()) {
            eprintln!("failed: {}: {}", c.name, c.value);
        }
    }
    ExitCode::from(if ok { 0 } else { 1 })
}
