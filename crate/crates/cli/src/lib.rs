//! Command-line front end for `evoaut`: reads algebra and graph files, runs
//! the computations and renders deterministic reports, as plain text or as a
//! JSON document tagged `"format": "evoaut/1"`.

pub mod parse;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use evoaut::algebra::{AlgebraError, Vector};
use evoaut::autgroup::{
    assemble_aut, bruteforce_aut, monomial_part, twisted_system, AutError, AutPresentation,
    Completeness, MonomialAutomorphism,
};
use evoaut::limits::{
    stationary_index, tate_module_2, truncated_chain, verify_stationary_collapse, ChainElements,
    ChainSpec, FieldTag, LimitError, TateModule,
};
use evoaut::linalg::Matrix;
use evoaut::solver::{enumerate_solutions_bruteforce, GroupDescription, SolverError};
use evoaut::wgraph::{algebra_to_wgraph, enumerate_graph_automorphisms, DEFAULT_AUT_CAP};
use evoaut::{EvolutionAlgebra, FieldSpec, Scalar};
use num_bigint::BigUint;
use serde_json::{json, Value};
use thiserror::Error;

pub use parse::{parse_input, Input, ParseError};

pub const FORMAT: &str = "evoaut/1";
/// Elements listed in text reports before eliding the rest.
const MAX_LISTED: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "evoaut",
    version,
    about = "Automorphism groups of evolution algebras"
)]
pub struct Cli {
    /// Field: F<p> or Q; for `tate` also acl-not2, Q-zeta2inf, Q-i.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub structured: bool,
    /// Vertex cap for graph automorphism enumeration.
    #[arg(long, global = true, env = "EVOAUT_CAP")]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group of diagonal automorphisms.
    Diag { file: PathBuf },
    /// Monomial automorphism group with its semidirect presentation.
    Aut { file: PathBuf },
    /// Structural predicates and naturality of vectors.
    Check {
        file: PathBuf,
        /// Comma-separated coordinates, repeatable.
        #[arg(long = "vector", value_name = "COORDS")]
        vectors: Vec<String>,
    },
    /// Compare structured results against exhaustive enumeration.
    Oracle { file: PathBuf },
    /// 2-adic Tate module of the multiplicative group.
    Tate,
    /// Compatible tuples of a truncated power-map chain.
    Chain {
        /// Comma-separated exponents n_1,...,n_N.
        #[arg(long, value_delimiter = ',')]
        exp: Vec<u64>,
        /// Chain depth; a single exponent is repeated to this depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Require x_1^{n_1} = a.
        #[arg(long)]
        anchor: Option<String>,
    },
    /// Convert between the algebra and graph file formats.
    Convert { file: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Invalid(String),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Invalid(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<AutError> for CliError {
    fn from(e: AutError) -> Self {
        match e {
            AutError::TooLarge(_) | AutError::Graph(evoaut::wgraph::GraphError::TooLarge(..)) => {
                CliError::Cap(e.to_string())
            }
            AutError::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::TooLarge(_) => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// Text and structured renderings of one command's result.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// Exit status when the command ran but found a failure.
    pub status: i32,
}

impl Report {
    fn new(command: &str, text: String, mut json: Value) -> Self {
        let obj = json.as_object_mut().expect("report body is an object");
        obj.insert("format".into(), FORMAT.into());
        obj.insert("command".into(), command.into());
        Report {
            text,
            json,
            status: 0,
        }
    }

    pub fn render(&self, structured: bool) -> String {
        if structured {
            let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

/// Process outcome: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments and runs; never panics.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    match catch_unwind(AssertUnwindSafe(|| execute(cli))) {
        Ok(Ok(report)) => Outcome {
            code: report.status,
            stdout: report.render(cli.structured),
            stderr: String::new(),
        },
        Ok(Err(e)) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Outcome {
                code: 4,
                stdout: String::new(),
                stderr: format!("error: internal invariant violated: {msg}\n"),
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let cap = cli.cap.unwrap_or(DEFAULT_AUT_CAP);
    match &cli.command {
        Command::Diag { file } => Ok(cmd_diag(&load(file, cli.field.as_deref())?.to_algebra())),
        Command::Aut { file } => cmd_aut(&load(file, cli.field.as_deref())?.to_algebra(), cap),
        Command::Check { file, vectors } => cmd_check(&load(file, cli.field.as_deref())?, vectors),
        Command::Oracle { file } => {
            cmd_oracle(&load(file, cli.field.as_deref())?.to_algebra(), cap)
        }
        Command::Tate => {
            let tag = cli
                .field
                .as_deref()
                .ok_or_else(|| CliError::Invalid("tate needs --field".into()))?;
            cmd_tate(&tag.parse::<FieldTag>()?)
        }
        Command::Chain { exp, depth, anchor } => {
            let field = parse_field(
                cli.field
                    .as_deref()
                    .ok_or_else(|| CliError::Invalid("chain needs --field".into()))?,
            )?;
            let exponents = match (exp.as_slice(), depth) {
                ([], Some(d)) => vec![2; *d],
                ([e], Some(d)) => vec![*e; *d],
                (es, None) if !es.is_empty() => es.to_vec(),
                (es, Some(d)) if es.len() == *d => es.to_vec(),
                _ => return Err(CliError::Invalid("--exp and --depth disagree".into())),
            };
            let anchor = anchor
                .as_deref()
                .map(|a| {
                    field
                        .parse_scalar(a)
                        .map_err(|e| CliError::Invalid(format!("anchor: {e}")))
                })
                .transpose()?;
            cmd_chain(&ChainSpec::new(field, exponents, anchor)?)
        }
        Command::Convert { file } => Ok(cmd_convert(&load(file, cli.field.as_deref())?)),
    }
}

fn parse_field(tag: &str) -> Result<FieldSpec, CliError> {
    tag.parse()
        .map_err(|e| CliError::Invalid(format!("field {tag:?}: {e}")))
}

pub fn load(path: &PathBuf, field: Option<&str>) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let field = field.map(parse_field).transpose()?;
    parse_input(&text, field.as_ref()).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn tuple(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn strings(v: &[Scalar]) -> Value {
    v.iter().map(|x| x.to_string()).collect()
}

fn matrix_json(m: &Matrix) -> Value {
    m.iter().map(|r| strings(r)).collect()
}

pub fn group_json(g: &GroupDescription) -> Value {
    json!({
        "text": g.to_string(),
        "free_rank": g.free_rank,
        "torsion": g.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    })
}

fn list_elements(out: &mut String, elements: &[Vec<Scalar>]) {
    out.push_str("elements:\n");
    for x in elements.iter().take(MAX_LISTED) {
        let _ = writeln!(out, "  {}", tuple(x));
    }
    if elements.len() > MAX_LISTED {
        let _ = writeln!(out, "  ... ({} more)", elements.len() - MAX_LISTED);
    }
}

/// `order = N` over `F_p`; over `Q` the order of the rational points.
fn write_order(out: &mut String, field: &FieldSpec, order: Option<&BigUint>) {
    let value = order.map_or("infinite".to_string(), ToString::to_string);
    if field.is_finite() {
        let _ = writeln!(out, "order = {value}");
    } else {
        let _ = writeln!(out, "order over Q = {value}");
    }
}

fn header(a: &EvolutionAlgebra) -> String {
    format!("field: {}\ndimension: {}\n", a.field(), a.dim())
}

pub fn cmd_diag(a: &EvolutionAlgebra) -> Report {
    let group = evoaut::autgroup::diag_solutions(a);
    let mut text = header(a);
    let _ = writeln!(text, "Diag(A;B) ≅ {}", group.shape);
    let order = group.order();
    write_order(&mut text, a.field(), order.as_ref());
    let elements = if a.field().is_finite() {
        group.elements()
    } else {
        None
    };
    if let Some(els) = &elements {
        list_elements(&mut text, els);
    }
    let json = json!({
        "field": a.field().to_string(),
        "dimension": a.dim(),
        "group": group_json(&group.shape),
        "order": order.map(|o| o.to_string()),
        "elements": elements.map(|els| els.iter().map(|x| strings(x)).collect::<Vec<_>>()),
    });
    Report::new("diag", text, json)
}

fn write_matrix(out: &mut String, m: &Matrix) {
    for row in m {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "    [{}]", cells.join(", "));
    }
}

fn completeness_reason(a: &EvolutionAlgebra) -> String {
    let mut reasons = Vec::new();
    if a.is_2li() {
        reasons.push("2LI");
    }
    if a.is_invertible() {
        reasons.push("invertible");
    }
    if reasons.is_empty() {
        "neither 2LI nor invertible".into()
    } else {
        reasons.join(", ")
    }
}

pub fn cmd_aut(a: &EvolutionAlgebra, cap: usize) -> Result<Report, CliError> {
    let aut = assemble_aut(a, cap)?;
    let field = a.field();
    let mut text = header(a);
    let _ = writeln!(text, "Diag(A;B) ≅ {}", aut.diag.shape);
    let _ = writeln!(
        text,
        "graph automorphisms: {}, lifting: {}",
        aut.lifts.len() + aut.rejected.len(),
        aut.lifts.len()
    );
    for (k, lift) in aut.lifts.iter().enumerate() {
        let _ = writeln!(text, "s{k} = {}", lift.sigma);
        let _ = writeln!(text, "  scales: {}", tuple(&lift.particular.scales));
        text.push_str("  matrix:\n");
        write_matrix(&mut text, &lift.particular.to_matrix(field));
    }
    for sigma in &aut.rejected {
        let _ = writeln!(text, "{sigma} does not lift: system infeasible");
    }
    if aut.lifts.len() > 1 {
        text.push_str("group law (row o column):\n");
        for (k, row) in aut.group_law_table.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| format!("s{c}")).collect();
            let _ = writeln!(text, "  s{k}: {}", cells.join(" "));
        }
    }
    let _ = writeln!(text, "quotient order = {}", aut.quotient_order());
    if aut.quotient_order() == 1 {
        text.push_str("Aut(A,B) = {1}\n");
    }
    let order = aut.order();
    write_order(&mut text, a.field(), order.as_ref());
    let relation = match aut.completeness {
        Completeness::FullAut => "U = Aut(A)",
        Completeness::SubgroupOnly => "U ⊆ Aut(A)",
    };
    let _ = writeln!(text, "{relation} ({})", completeness_reason(a));

    let lifts: Vec<Value> = aut
        .lifts
        .iter()
        .map(|l| {
            json!({
                "sigma": l.sigma.to_string(),
                "permutation": l.sigma.sigma.iter().map(|&s| s + 1).collect::<Vec<_>>(),
                "scales": strings(&l.particular.scales),
                "matrix": matrix_json(&l.particular.to_matrix(field)),
                "coset_size": l.coset.count().map(|c| c.to_string()),
            })
        })
        .collect();
    let json = json!({
        "field": field.to_string(),
        "dimension": a.dim(),
        "diag": group_json(&aut.diag.shape),
        "lifts": lifts,
        "rejected": aut.rejected.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "group_law_table": aut.group_law_table,
        "quotient_order": aut.quotient_order(),
        "order": order.map(|o| o.to_string()),
        "completeness": match aut.completeness {
            Completeness::FullAut => "FullAut",
            Completeness::SubgroupOnly => "SubgroupOnly",
        },
    });
    Ok(Report::new("aut", text, json))
}

fn parse_vector(field: &FieldSpec, n: usize, spec: &str) -> Result<Vector, CliError> {
    let coords = spec
        .split(',')
        .map(|c| field.parse_scalar(c.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Invalid(format!("--vector {spec}: {e}")))?;
    if coords.len() != n {
        return Err(CliError::Invalid(format!(
            "--vector {spec}: expected {n} coordinates"
        )));
    }
    Ok(Vector(coords))
}

pub fn cmd_check(input: &Input, vectors: &[String]) -> Result<Report, CliError> {
    let a = input.to_algebra();
    let labels = a.labels();
    let graph = match input {
        Input::Graph(g) => g.clone(),
        Input::Algebra(_) => algebra_to_wgraph(&a),
    };
    let mut text = header(&a);
    let sing = graph.satisfies_sing();
    let _ = writeln!(text, "Sing: {sing}");
    let two_li = a.two_li_witness();
    match two_li {
        None => text.push_str("2LI: true\n"),
        Some((i, j)) => {
            let _ = writeln!(
                text,
                "2LI: false (witness {}^2, {}^2)",
                labels[i], labels[j]
            );
        }
    }
    let perfect = a.is_perfect();
    let _ = writeln!(text, "perfect: {perfect}");
    let degenerate = a.degenerate_witness();
    match degenerate {
        None => text.push_str("nondegenerate: true\n"),
        Some(i) => {
            let _ = writeln!(text, "nondegenerate: false (witness {}^2 = 0)", labels[i]);
        }
    }
    let det = a.determinant();
    let _ = writeln!(text, "invertible: {} (det = {det})", !det.is_zero());
    let mut natural = Vec::new();
    for spec in vectors {
        let v = parse_vector(a.field(), a.dim(), spec)?;
        let verdict = a.is_natural_vector(&v).map_err(|e| match e {
            AlgebraError::TooLarge(_) => CliError::Cap(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        })?;
        let _ = writeln!(text, "natural {}: {verdict}", v);
        natural.push(json!({ "vector": strings(&v.0), "natural": verdict.to_string() }));
    }
    let json = json!({
        "field": a.field().to_string(),
        "dimension": a.dim(),
        "sing": sing,
        "two_li": two_li.is_none(),
        "two_li_witness": two_li.map(|(i, j)| vec![labels[i].clone(), labels[j].clone()]),
        "perfect": perfect,
        "nondegenerate": degenerate.is_none(),
        "degenerate_witness": degenerate.map(|i| labels[i].clone()),
        "invertible": !det.is_zero(),
        "determinant": det.to_string(),
        "natural": natural,
    });
    Ok(Report::new("check", text, json))
}

/// One comparison between a structured result and an oracle.
struct Check {
    name: String,
    /// `None` when the oracle was out of budget.
    outcome: Option<(bool, String)>,
    required: bool,
}

fn compare_sets<T: Ord + Clone>(
    mine: &[T],
    oracle: &[T],
    show: impl Fn(&T) -> String,
) -> (bool, String) {
    let a: BTreeSet<&T> = mine.iter().collect();
    let b: BTreeSet<&T> = oracle.iter().collect();
    if a == b {
        return (true, format!("{} = {}", mine.len(), oracle.len()));
    }
    let divergence = a
        .symmetric_difference(&b)
        .next()
        .map(|x| {
            format!(
                "{}, first divergence {}",
                if a.contains(x) {
                    "only structured"
                } else {
                    "only oracle"
                },
                show(x)
            )
        })
        .unwrap_or_default();
    (
        false,
        format!("{} ≠ {}; {divergence}", mine.len(), oracle.len()),
    )
}

fn monomial_label(m: &MonomialAutomorphism) -> String {
    format!("{} {}", m.graph_map(), tuple(&m.scales))
}

pub fn cmd_oracle(a: &EvolutionAlgebra, cap: usize) -> Result<Report, CliError> {
    if !a.field().is_finite() {
        return Err(CliError::Cap(format!(
            "oracles need a prime field, got {}",
            a.field()
        )));
    }
    let mut checks = Vec::new();
    let graph = algebra_to_wgraph(a);
    let diag = evoaut::autgroup::diag_solutions(a);
    let diag_system = {
        let mut s = evoaut::solver::MonomialSystem::new(a.field().clone(), a.dim());
        for (u, v, _) in graph.edges() {
            s.push_edge(u, v, a.field().one())
                .expect("edge within range");
        }
        s
    };
    checks.push(Check {
        name: "diag".into(),
        outcome: match enumerate_solutions_bruteforce(&diag_system) {
            Ok(brute) => Some(compare_sets(
                &diag.elements().unwrap_or_default(),
                &brute,
                |x| tuple(x),
            )),
            Err(SolverError::TooLarge(_)) => None,
            Err(e) => return Err(CliError::Internal(e.to_string())),
        },
        required: true,
    });
    for sigma in enumerate_graph_automorphisms(&graph, cap).map_err(AutError::from)? {
        let system = twisted_system(a, &sigma)?;
        let coset = evoaut::solver::solve_inhomogeneous(&system);
        checks.push(Check {
            name: format!("lift {sigma}"),
            outcome: match enumerate_solutions_bruteforce(&system) {
                Ok(brute) => Some(compare_sets(
                    &coset.elements().unwrap_or_default(),
                    &brute,
                    |x| tuple(x),
                )),
                Err(SolverError::TooLarge(_)) => None,
                Err(e) => return Err(CliError::Internal(e.to_string())),
            },
            required: true,
        });
    }

    let aut: AutPresentation = assemble_aut(a, cap)?;
    let mine = aut.elements().unwrap_or_default();
    let oracle_note: String;
    match bruteforce_aut(a) {
        Ok(all) => {
            let monomial: Vec<MonomialAutomorphism> = monomial_part(&all).into_iter().collect();
            oracle_note = format!(
                "Aut oracle: {} automorphisms, {} monomial\n",
                all.len(),
                monomial.len()
            );
            checks.push(Check {
                name: "monomial part".into(),
                outcome: Some(compare_sets(&mine, &monomial, monomial_label)),
                required: true,
            });
            let full = aut.completeness == Completeness::FullAut;
            let equal = all.len() == mine.len();
            checks.push(Check {
                name: "U = Aut(A)".into(),
                outcome: Some((
                    equal,
                    format!(
                        "{} {} {}",
                        mine.len(),
                        if equal { "=" } else { "≠" },
                        all.len()
                    ),
                )),
                required: full,
            });
        }
        Err(AutError::TooLarge(msg)) => oracle_note = format!("Aut oracle: skipped ({msg})\n"),
        Err(e) => return Err(e.into()),
    }
    if checks.iter().all(|c| c.outcome.is_none()) {
        return Err(CliError::Cap("every oracle exceeds its budget".into()));
    }

    let mut text = header(a);
    text.push_str(&oracle_note);
    let mut pass = true;
    let mut rows = Vec::new();
    for c in &checks {
        let status = match &c.outcome {
            None => "SKIPPED".to_string(),
            Some((true, detail)) => format!("PASS ({detail})"),
            Some((false, detail)) if !c.required => {
                format!("FAIL ({detail}), expected: U ⊆ Aut(A) only")
            }
            Some((false, detail)) => {
                pass = false;
                format!("FAIL ({detail})")
            }
        };
        let _ = writeln!(text, "{}: {status}", c.name);
        rows.push(json!({
            "name": c.name,
            "ran": c.outcome.is_some(),
            "pass": c.outcome.as_ref().map(|o| o.0),
            "required": c.required,
            "detail": c.outcome.as_ref().map(|o| o.1.clone()),
        }));
    }
    let _ = writeln!(text, "result: {}", if pass { "PASS" } else { "FAIL" });
    let json = json!({
        "field": a.field().to_string(),
        "dimension": a.dim(),
        "checks": rows,
        "pass": pass,
    });
    let mut report = Report::new("oracle", text, json);
    if !pass {
        report.status = 4;
    }
    Ok(report)
}

pub fn cmd_tate(tag: &FieldTag) -> Result<Report, CliError> {
    let t = tate_module_2(tag);
    let mut text = format!("field: {tag}\n{t}\n");
    let mut collapse = None;
    if let FieldTag::Concrete(k) = tag {
        if k.is_finite() && k.characteristic() != 2 {
            let depth = stationary_index(k) as usize + 3;
            match verify_stationary_collapse(k, depth) {
                Ok(ok) => {
                    let _ = writeln!(
                        text,
                        "stationary collapse at depth {depth}: {}",
                        if ok { "PASS" } else { "FAIL" }
                    );
                    collapse = Some(ok);
                }
                Err(LimitError::TooLarge(_)) => {
                    let _ = writeln!(text, "stationary collapse at depth {depth}: SKIPPED");
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let json = json!({
        "field": tag.to_string(),
        "tate": match t { TateModule::Trivial { .. } => "1", TateModule::TwoAdicIntegers => "Z_2" },
        "stationary_index": match t { TateModule::Trivial { stationary_index } => Some(stationary_index), _ => None },
        "collapse_verified": collapse,
    });
    let mut report = Report::new("tate", text, json);
    if collapse == Some(false) {
        report.status = 4;
    }
    Ok(report)
}

pub fn cmd_chain(spec: &ChainSpec) -> Result<Report, CliError> {
    let lim = truncated_chain(spec)?;
    let exps: Vec<String> = spec.exponents().iter().map(ToString::to_string).collect();
    let mut text = format!("field: {}\nexponents: {}\n", spec.field(), exps.join(", "));
    if let Some(a) = spec.anchor() {
        let _ = writeln!(text, "anchor: {a}");
    }
    let _ = writeln!(text, "depth: {}", lim.depth);
    let tuples_json = match &lim.elements {
        ChainElements::Tuples(ts) => {
            let _ = writeln!(text, "compatible tuples: {}", ts.len());
            for x in ts.iter().take(MAX_LISTED) {
                if !spec.is_compatible(x) {
                    return Err(CliError::Internal(format!(
                        "incompatible tuple {}",
                        tuple(x)
                    )));
                }
                let _ = writeln!(text, "  {}", tuple(x));
            }
            if ts.len() > MAX_LISTED {
                let _ = writeln!(text, "  ... ({} more)", ts.len() - MAX_LISTED);
            }
            Value::Array(ts.iter().map(|x| strings(x)).collect())
        }
        ChainElements::Symbolic(g) => {
            let _ = writeln!(text, "compatible tuples: infinite, ≅ {g}");
            Value::Null
        }
    };
    let _ = writeln!(
        text,
        "stabilization depth: {}",
        lim.stabilization_depth
            .map_or("not reached".to_string(), |s| s.to_string())
    );
    let json = json!({
        "field": spec.field().to_string(),
        "exponents": spec.exponents(),
        "anchor": spec.anchor().map(|a| a.to_string()),
        "depth": lim.depth,
        "count": lim.count(),
        "tuples": tuples_json,
        "symbolic": match &lim.elements { ChainElements::Symbolic(g) => group_json(g), _ => Value::Null },
        "stabilization_depth": lim.stabilization_depth,
    });
    Ok(Report::new("chain", text, json))
}

pub fn cmd_convert(input: &Input) -> Report {
    let (from, to, text) = match input {
        Input::Algebra(a) => (
            "algebra",
            "graph",
            parse::render_graph(&algebra_to_wgraph(a)),
        ),
        Input::Graph(_) => (
            "graph",
            "algebra",
            parse::render_algebra(&input.to_algebra()),
        ),
    };
    let json = json!({ "from": from, "to": to, "text": text });
    Report::new("convert", text, json)
}
