//! Command-line front end: exact homology, local cohomology and residue
//! computations with deterministic JSON reports.
//!
//! Exit codes: 0 on success/agreement, 1 on parse or validation errors,
//! 2 when independently computed values disagree.

mod parser;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};

use residua::exactlin::{rat_to_string, Rat};
use residua::hochschild::{hh_dims, hh_dims_graded, parse_algebra_file};
use residua::kforms::RingSpec;
use residua::laurent::{residue_oracle_nd, LaurentPoly, VarOrder};
use residua::localcoh::{
    cech_h_dims, cousin_row_p1, top_degree_basis, CechModule, LocalClass, Poly, PointDescriptor,
    RationalOneForm, SupportSeq,
};
use residua::ressym::{abstract_symbol, tate_residue_1d, SymbolInput};

use parser::{eval, parse, Frac, Value as ExprValue};

#[derive(Parser)]
#[command(name = "residua", version, about = "Exact Hochschild homology, local cohomology and residue symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild homology dimensions of an algebra file.
    Hh(HhArgs),
    /// Local cohomology dimensions for a coordinate support.
    Localcoh(LocalcohArgs),
    /// Residues of a rational 1-form at every point of P¹ plus their sum.
    CousinP1(CousinArgs),
    /// One-variable residue via Tate's formula, the abstract symbol and
    /// the coefficient oracle.
    Residue(ResidueArgs),
    /// Two-variable residue symbol against the Jacobian oracle.
    Residue2(Residue2Args),
    /// Evaluate a symbol and dump the full chain trace as JSON.
    AuditSymbol(AuditArgs),
}

#[derive(Args)]
struct HhArgs {
    /// Algebra file (JSON: dim, basis, unit, mul, optional grading).
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    max_degree: usize,
    /// Internal-degree window "A..B" for graded algebras.
    #[arg(long, allow_hyphen_values = true)]
    grade_window: Option<String>,
}

#[derive(Args)]
struct LocalcohArgs {
    /// Comma-separated polynomial ring variables, e.g. "x,y".
    #[arg(long)]
    ring: String,
    /// Comma-separated support variables (must be all ring variables).
    #[arg(long)]
    support: String,
    /// Coefficient module: "R" or "omega^k".
    #[arg(long)]
    module: String,
    /// Internal-degree window "A..B".
    #[arg(long, allow_hyphen_values = true)]
    window: String,
}

#[derive(Args)]
struct CousinArgs {
    /// A rational 1-form in x, e.g. "d(x) * (x^2+1)^-1".
    #[arg(long, allow_hyphen_values = true)]
    form: String,
}

#[derive(Args)]
struct ResidueArgs {
    /// The single Laurent variable, e.g. "t".
    #[arg(long)]
    vars: String,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// tate | symbol | oracle | all
    #[arg(long, default_value = "all")]
    method: String,
}

#[derive(Args)]
struct Residue2Args {
    /// Two comma-separated variables, innermost first, e.g. "t1,t2".
    #[arg(long)]
    vars: String,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g1: String,
    #[arg(long, allow_hyphen_values = true)]
    g2: String,
    /// symbol | oracle | all
    #[arg(long, default_value = "all")]
    method: String,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    vars: String,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g2: Option<String>,
    /// Where to write the SymbolTrace JSON.
    #[arg(long)]
    dump_trace: PathBuf,
}

/// Anything that should terminate with exit code 1.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version output.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Hh(a) => run_hh(a),
        Command::Localcoh(a) => run_localcoh(a),
        Command::CousinP1(a) => run_cousin_p1(a),
        Command::Residue(a) => run_residue(a),
        Command::Residue2(a) => run_residue2(a),
        Command::AuditSymbol(a) => run_audit(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_window(s: &str) -> Result<(i64, i64), Invalid> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Invalid(format!("window `{s}` must look like A..B")))?;
    let lo: i64 = a.trim().parse().map_err(|_| Invalid(format!("bad window bound `{a}`")))?;
    let hi: i64 = b.trim().parse().map_err(|_| Invalid(format!("bad window bound `{b}`")))?;
    if lo > hi {
        return Err(Invalid(format!("window `{s}` is empty")));
    }
    Ok((lo, hi))
}

fn split_vars(s: &str) -> Vec<String> {
    s.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
}

fn order_from(vars: &str) -> Result<Arc<VarOrder>, Invalid> {
    Ok(VarOrder::new(split_vars(vars))?)
}

fn scalar_from(text: &str, order: &Arc<VarOrder>) -> Result<LaurentPoly, Invalid> {
    let expr = parse(text)?;
    match eval(&expr, order)? {
        ExprValue::Scalar(f) => Ok(f.to_laurent()?),
        ExprValue::Form(_) => Err(Invalid(format!("`{text}` is a form, expected a scalar"))),
    }
}

/// Canonical rendering of the input expression, echoed in reports.
fn canonical(text: &str) -> Result<String, Invalid> {
    Ok(parse(text)?.print())
}

fn emit(report: &Value) {
    println!("{}", serde_json::to_string_pretty(report).expect("serializable report"));
}

fn run_hh(a: HhArgs) -> Result<ExitCode, Invalid> {
    let text = std::fs::read_to_string(&a.algebra)
        .map_err(|e| Invalid(format!("cannot read {}: {e}", a.algebra.display())))?;
    let algebra = parse_algebra_file(&text)?;
    let mut report = json!({
        "algebra": a.algebra.display().to_string(),
        "dim": algebra.dim(),
        "max_degree": a.max_degree,
    });
    match &a.grade_window {
        None => {
            let h = hh_dims(&algebra, a.max_degree)?;
            report["hh"] = json!(h
                .into_iter()
                .map(|(m, d)| (m.to_string(), d))
                .collect::<std::collections::BTreeMap<_, _>>());
        }
        Some(w) => {
            let window = parse_window(w)?;
            let h = hh_dims_graded(&algebra, a.max_degree, window)?;
            let table: std::collections::BTreeMap<String, std::collections::BTreeMap<String, usize>> = h
                .into_iter()
                .map(|(m, per)| {
                    (
                        m.to_string(),
                        per.into_iter().map(|(d, c)| (d.to_string(), c)).collect(),
                    )
                })
                .collect();
            report["grade_window"] = json!(w);
            report["hh_graded"] = json!(table);
        }
    }
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

fn run_localcoh(a: LocalcohArgs) -> Result<ExitCode, Invalid> {
    let ring = RingSpec::polynomial(split_vars(&a.ring))?;
    let support_names = split_vars(&a.support);
    let support_refs: Vec<&str> = support_names.iter().map(String::as_str).collect();
    let support = SupportSeq::new(&ring, &support_refs)?;
    let module = match a.module.trim() {
        "R" | "r" => CechModule::Ring,
        other => {
            let k = other
                .strip_prefix("omega^")
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| Invalid(format!("module `{other}` must be R or omega^k")))?;
            CechModule::Omega(k)
        }
    };
    let window = parse_window(&a.window)?;
    let dims = cech_h_dims(&support, module, window)?;
    let n = support.len();
    let mut dim_table = std::collections::BTreeMap::new();
    for (p, per) in &dims {
        dim_table.insert(
            p.to_string(),
            per.iter().map(|(d, c)| (d.to_string(), *c)).collect::<std::collections::BTreeMap<_, _>>(),
        );
    }
    let mut bases = std::collections::BTreeMap::new();
    for d in window.0..=window.1 {
        let basis = top_degree_basis(&support, module, d);
        if !basis.is_empty() {
            bases.insert(d.to_string(), basis);
        }
    }
    emit(&json!({
        "ring": a.ring,
        "support": a.support,
        "module": a.module,
        "window": a.window,
        "top_degree": n,
        "dims": dim_table,
        "top_bases": bases,
    }));
    Ok(ExitCode::SUCCESS)
}

/// A one-variable Laurent polynomial as x^shift * polynomial.
fn laurent_to_poly(p: &LaurentPoly) -> (Poly, i64) {
    if p.is_zero() {
        return (Poly::zero(), 0);
    }
    let min = p.terms().map(|(e, _)| e[0]).min().unwrap();
    let mut coeffs = vec![Rat::zero(); (p.terms().map(|(e, _)| e[0]).max().unwrap() - min + 1) as usize];
    for (e, c) in p.terms() {
        coeffs[(e[0] - min) as usize] = c.clone();
    }
    (Poly::new(coeffs), min)
}

fn frac_to_one_form(frac: &Frac) -> Result<RationalOneForm, Invalid> {
    let (num, ns) = laurent_to_poly(&frac.num);
    let (den, ds) = laurent_to_poly(&frac.den);
    let shift = ns - ds;
    let (num, den) = if shift >= 0 {
        let mut xs = vec![Rat::zero(); shift as usize];
        xs.push(Rat::from_integer(1.into()));
        (num.mul(&Poly::new(xs)), den)
    } else {
        let mut xs = vec![Rat::zero(); (-shift) as usize];
        xs.push(Rat::from_integer(1.into()));
        (num, den.mul(&Poly::new(xs)))
    };
    Ok(RationalOneForm::new(num, den)?)
}

fn run_cousin_p1(a: CousinArgs) -> Result<ExitCode, Invalid> {
    let order = VarOrder::new(vec!["x"])?;
    let expr = parse(&a.form)?;
    let form = match eval(&expr, &order)? {
        ExprValue::Form(f) if f.degree == 1 => f,
        ExprValue::Form(f) => {
            return Err(Invalid(format!("expected a 1-form, got degree {}", f.degree)))
        }
        ExprValue::Scalar(_) => return Err(Invalid("expected a 1-form like f * d(x)".into())),
    };
    let coeff = match form.terms.len() {
        0 => Frac {
            num: LaurentPoly::zero(order.clone()),
            den: LaurentPoly::one(order.clone()),
        },
        1 => form.terms[0].1.clone(),
        _ => unreachable!("one variable has a single 1-form component"),
    };
    let omega = frac_to_one_form(&coeff)?;
    let row = cousin_row_p1(&omega)?;
    let mut entries = Vec::new();
    let mut total = Rat::zero();
    for (point, class) in &row.entries {
        let (order_str, residue) = match class {
            LocalClass::PolePart { order, residue } => (order, residue),
            _ => unreachable!("P¹ rows carry pole parts"),
        };
        total += residue.clone();
        let point_str = match point {
            PointDescriptor::FinitePoint(p) => format!("{p:?}"),
            PointDescriptor::Infinity => "infinity".to_string(),
            PointDescriptor::Coordinate(names) => names.join(","),
        };
        entries.push(json!({
            "point": point_str,
            "pole_order": order_str,
            "residue": rat_to_string(residue),
        }));
    }
    let report = json!({
        "form": canonical(&a.form)?,
        "entries": entries,
        "sum": rat_to_string(&total),
    });
    emit(&report);
    if total.is_zero() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn run_residue(a: ResidueArgs) -> Result<ExitCode, Invalid> {
    let order = order_from(&a.vars)?;
    if order.len() != 1 {
        return Err(Invalid("residue expects exactly one variable".into()));
    }
    let f = scalar_from(&a.f, &order)?;
    let g = scalar_from(&a.g, &order)?;
    let mut methods = std::collections::BTreeMap::new();
    let want = |name: &str| a.method == "all" || a.method == name;
    if !["all", "tate", "symbol", "oracle"].contains(&a.method.as_str()) {
        return Err(Invalid(format!("unknown method `{}`", a.method)));
    }
    if want("tate") {
        methods.insert("tate".to_string(), tate_residue_1d(&f, &g)?);
    }
    if want("symbol") {
        let trace = abstract_symbol(&SymbolInput::new(f.clone(), vec![g.clone()])?)?;
        methods.insert("symbol".to_string(), trace.value);
    }
    if want("oracle") {
        methods.insert(
            "oracle".to_string(),
            residue_oracle_nd(&f, std::slice::from_ref(&g))?,
        );
    }
    let mut values = methods.values();
    let first = values.next().cloned();
    let agree = values.all(|v| Some(v.clone()) == first);
    let report = json!({
        "vars": a.vars,
        "f": canonical(&a.f)?,
        "g": canonical(&a.g)?,
        "methods": methods
            .iter()
            .map(|(k, v)| (k.clone(), rat_to_string(v)))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "verdict": if agree { "AGREE" } else { "DISAGREE" },
    });
    emit(&report);
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run_residue2(a: Residue2Args) -> Result<ExitCode, Invalid> {
    let order = order_from(&a.vars)?;
    if order.len() != 2 {
        return Err(Invalid("residue2 expects exactly two variables".into()));
    }
    if !["all", "symbol", "oracle"].contains(&a.method.as_str()) {
        return Err(Invalid(format!("unknown method `{}`", a.method)));
    }
    let f = scalar_from(&a.f, &order)?;
    let g1 = scalar_from(&a.g1, &order)?;
    let g2 = scalar_from(&a.g2, &order)?;
    let mut methods = std::collections::BTreeMap::new();
    if a.method == "all" || a.method == "symbol" {
        let trace = abstract_symbol(&SymbolInput::new(f.clone(), vec![g1.clone(), g2.clone()])?)?;
        methods.insert("symbol".to_string(), trace.value);
    }
    if a.method == "all" || a.method == "oracle" {
        methods.insert("oracle".to_string(), residue_oracle_nd(&f, &[g1, g2])?);
    }
    let mut values = methods.values();
    let first = values.next().cloned();
    let agree = values.all(|v| Some(v.clone()) == first);
    let report = json!({
        "vars": a.vars,
        "f": canonical(&a.f)?,
        "g1": canonical(&a.g1)?,
        "g2": canonical(&a.g2)?,
        "pinned_sign": residua::ressym::SYMBOL_SIGN_2D.to_string(),
        "methods": methods
            .iter()
            .map(|(k, v)| (k.clone(), rat_to_string(v)))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "verdict": if agree { "AGREE" } else { "DISAGREE" },
    });
    emit(&report);
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run_audit(a: AuditArgs) -> Result<ExitCode, Invalid> {
    let order = order_from(&a.vars)?;
    let f = scalar_from(&a.f, &order)?;
    let gs: Vec<LaurentPoly> = match (order.len(), &a.g, &a.g1, &a.g2) {
        (1, Some(g), None, None) => vec![scalar_from(g, &order)?],
        (2, None, Some(g1), Some(g2)) => {
            vec![scalar_from(g1, &order)?, scalar_from(g2, &order)?]
        }
        (1, ..) => return Err(Invalid("one variable needs exactly --g".into())),
        (2, ..) => return Err(Invalid("two variables need --g1 and --g2".into())),
        (n, ..) => return Err(Invalid(format!("unsupported arity {n}"))),
    };
    let trace = abstract_symbol(&SymbolInput::new(f, gs)?)?;
    let payload = trace.to_json();
    std::fs::write(&a.dump_trace, serde_json::to_string_pretty(&payload).expect("serializable"))
        .map_err(|e| Invalid(format!("cannot write {}: {e}", a.dump_trace.display())))?;
    emit(&json!({
        "value": rat_to_string(&trace.value),
        "oracle": rat_to_string(&trace.oracle),
        "tate": trace.tate.as_ref().map(rat_to_string),
        "agree": trace.agree,
        "trace_file": a.dump_trace.display().to_string(),
        "steps": trace.steps.len(),
    }));
    Ok(if trace.agree { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
