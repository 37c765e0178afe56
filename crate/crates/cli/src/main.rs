use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsbar_core::algebra::{Negation, TNorm};
use hsbar_core::bench::{count_flat, count_hier, scaling_sweep, OpCounter, SweepConfig};
use hsbar_core::equivalence::{validate_ref, RefSpec};
use hsbar_core::fuzzyset::{FuzzySet, Universe, DEFAULT_PRODUCT_CAP};
use hsbar_core::hier::{
    check_eq3, check_exchange, check_similarity_distributivity, hier_infer_alg1, hier_infer_alg2, EquationKind,
    EquationReport, HierPlan,
};
use hsbar_core::render::{parse_value, render};
use hsbar_core::reproduce::{reproduce, ReproductionReport};
use hsbar_core::sbar::{infer_flat, InferOptions, InferenceResult, SimilarityMode};
use hsbar_core::system::SystemFile;
use hsbar_core::{Error, ErrorClass};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hsbar", version, about = "Similarity-based approximate reasoning, flat and hierarchical")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    verbose: bool,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest product universe materialized, in cells.
    #[arg(long, global = true, default_value_t = DEFAULT_PRODUCT_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer the output of the rule in a system file.
    Infer(InferArgs),
    /// Check REF1 to REF5 on a grid.
    ValidateRef(ValidateRefArgs),
    /// Check a functional equation on a grid, or similarity distributivity on given sets.
    CheckEq(CheckEqArgs),
    /// Counted-operation scaling sweep, emitted as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Flat,
    Hier1,
    Hier2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    TCombined,
    ProductDirect,
}

#[derive(Args)]
struct InferArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "flat")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "t-combined")]
    similarity_mode: ModeArg,
    /// Itemized operation counts.
    #[arg(long)]
    count: bool,
    /// Print the system file with canonical connective names and exit.
    #[arg(long)]
    dump_normalized: bool,
}

#[derive(Args)]
struct ValidateRefArgs {
    #[arg(long = "ref")]
    ref_spec: String,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    #[arg(long)]
    negation: Option<String>,
}

#[derive(Args)]
struct CheckEqArgs {
    #[arg(long)]
    eq: String,
    #[arg(long)]
    tnorm: String,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    /// Distributivity only: the REF, defaults to T(I_T, I_T).
    #[arg(long = "ref")]
    ref_spec: Option<String>,
    /// Distributivity only: comma-separated memberships.
    #[arg(long)]
    a1: Option<String>,
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    a1_prime: Option<String>,
    #[arg(long)]
    a2_prime: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    /// `n=LO..HI u=U m=M`, as one or several words.
    #[arg(long, num_args = 1.., required = true)]
    sweep: Vec<String>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value = "product")]
    tnorm: String,
}

struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

type Run = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Infer(a) => infer(&cli, a),
        Command::ValidateRef(a) => validate(&cli, a),
        Command::CheckEq(a) => check_eq(&cli, a),
        Command::Bench(a) => bench(&cli, a),
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Input => 1,
                ErrorClass::Semantic => 2,
                ErrorClass::Explosion => 3,
            })
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn set_lines(out: &mut String, set: &FuzzySet) {
    for (label, v) in set.records() {
        writeln!(out, "  {label}: {}", render(v)).unwrap();
    }
}

fn set_json(set: &FuzzySet) -> Value {
    Value::Array(set.records().into_iter().map(|(l, v)| json!({"label": l, "value": render(v)})).collect())
}

fn counts_json(c: &OpCounter) -> Value {
    json!({
        "rows": c.rows.iter().map(|r| json!({"label": r.label, "count": r.count})).collect::<Vec<_>>(),
        "total": c.total(),
    })
}

fn infer(cli: &Cli, a: &InferArgs) -> Run {
    let text = std::fs::read_to_string(&a.file)
        .map_err(|e| Error::Parse(format!("{}: {e}", a.file.display())))?;
    let file = SystemFile::from_json(&text)?;
    if a.dump_normalized {
        let mut s = file.normalized()?.to_json();
        s.push('\n');
        return Ok(s);
    }
    let sys = file.validate()?;
    let opts = InferOptions {
        mode: match a.similarity_mode {
            ModeArg::TCombined => SimilarityMode::TCombined,
            ModeArg::ProductDirect => SimilarityMode::ProductDirect,
        },
        count: false,
        cap: cli.cap,
        sup_reduction: false,
    };
    let plan = HierPlan::innermost_first(sys.rule.arity());
    let res = match a.method {
        MethodArg::Flat => infer_flat(&sys.rule, &sys.inputs, &opts)?,
        MethodArg::Hier1 => hier_infer_alg1(&sys.rule, &sys.inputs, &plan, &opts)?,
        MethodArg::Hier2 => hier_infer_alg2(&sys.rule, &sys.inputs, &plan, &opts)?,
    };
    // Counts follow the itemized convention: inner inf/sup taken at sup A.
    let counts = if a.count {
        Some(match a.method {
            MethodArg::Flat => count_flat(&sys.rule, &sys.inputs)?,
            MethodArg::Hier1 => count_hier(&sys.rule, &sys.inputs)?,
            MethodArg::Hier2 => hier_infer_alg2(
                &sys.rule,
                &sys.inputs,
                &plan.clone().reduced(),
                &InferOptions { count: true, ..opts },
            )?
            .op_counts
            .expect("counting enabled"),
        })
    } else {
        None
    };
    let repro = match &sys.file.reference {
        Some(_) => Some(reproduce(&sys)?),
        None => None,
    };
    if cli.json {
        return Ok(pretty(&infer_json(cli, &res, counts.as_ref(), repro.as_ref())));
    }
    Ok(infer_text(cli, &res, counts.as_ref(), repro.as_ref()))
}

fn infer_json(cli: &Cli, res: &InferenceResult, counts: Option<&OpCounter>, repro: Option<&ReproductionReport>) -> Value {
    let mut v = json!({
        "method": res.method.to_string(),
        "antecedent_similarities": res.antecedent_similarities.iter().map(|s| render(s.get())).collect::<Vec<_>>(),
        "similarity": render(res.similarity_used.get()),
        "output": set_json(&res.output),
    });
    if cli.verbose {
        v["intermediates"] = res
            .intermediates
            .iter()
            .map(|i| json!({"label": i.label, "set": set_json(&i.set)}))
            .collect();
        v["diagnostics"] = json!(res.diagnostics);
        if let Some(h) = res.sup_antecedent {
            v["sup_antecedent"] = json!(render(h));
        }
    }
    if let Some(c) = counts {
        v["counts"] = counts_json(c);
    }
    if let Some(r) = repro {
        v["reproduction"] = serde_json::to_value(r).expect("report serializes");
    }
    v
}

fn infer_text(cli: &Cli, res: &InferenceResult, counts: Option<&OpCounter>, repro: Option<&ReproductionReport>) -> String {
    let mut out = String::new();
    writeln!(out, "method: {}", res.method).unwrap();
    for (i, s) in res.antecedent_similarities.iter().enumerate() {
        writeln!(out, "S_F(A'_{0},A_{0}) = {1}", i + 1, render(s.get())).unwrap();
    }
    writeln!(out, "s = {}", render(res.similarity_used.get())).unwrap();
    writeln!(out, "output:").unwrap();
    set_lines(&mut out, &res.output);
    if cli.verbose {
        if let Some(h) = res.sup_antecedent {
            writeln!(out, "sup A = {}", render(h)).unwrap();
        }
        for i in &res.intermediates {
            writeln!(out, "{}:", i.label).unwrap();
            set_lines(&mut out, &i.set);
        }
        for d in &res.diagnostics {
            writeln!(out, "note: {d}").unwrap();
        }
    }
    if let Some(c) = counts {
        writeln!(out, "operation counts:").unwrap();
        for r in &c.rows {
            writeln!(out, "  {}: {}", r.label, r.count).unwrap();
        }
        writeln!(out, "  total: {}", c.total()).unwrap();
    }
    if let Some(r) = repro {
        let n = r.discrepancies().count();
        writeln!(out, "reference check: {} of {} quantities agree", r.entries.len() - n, r.entries.len()).unwrap();
        for e in r.discrepancies() {
            writeln!(out, "  differs: {}: reference {}, recomputed {}", e.quantity, e.reference, e.recomputed).unwrap();
            if let Some(note) = &e.note {
                writeln!(out, "    {note}").unwrap();
            }
        }
    }
    out
}

fn validate(cli: &Cli, a: &ValidateRefArgs) -> Run {
    let mut f: RefSpec = a.ref_spec.parse()?;
    if let Some(n) = &a.negation {
        f.negation = n.parse::<Negation>()?;
    }
    let reports = validate_ref(&f, a.step)?;
    let is_ref = reports.iter().all(|r| r.holds);
    if cli.json {
        return Ok(pretty(&json!({"ref": f.to_string(), "grid_step": a.step, "is_ref": is_ref, "axioms": reports})));
    }
    let mut out = String::new();
    writeln!(out, "{f} at grid step {}", a.step).unwrap();
    for r in &reports {
        match &r.counterexample {
            None => writeln!(out, "  {}: holds ({} tuples)", r.property, r.tested).unwrap(),
            Some(c) => writeln!(
                out,
                "  {}: fails at ({}) by {}, {} of {} tuples",
                r.property,
                c.iter().map(|v| render(v.get())).collect::<Vec<_>>().join(", "),
                render(r.violation.unwrap_or(f64::NAN)),
                r.violations,
                r.tested
            )
            .unwrap(),
        }
    }
    writeln!(out, "verdict: {}", if is_ref { "pass" } else { "fail" }).unwrap();
    Ok(out)
}

fn memberships(name: &str, s: &Option<String>) -> Result<Vec<f64>, Error> {
    let s = s
        .as_deref()
        .ok_or_else(|| Error::Validation(format!("distributivity needs --{name}")))?;
    s.split(',')
        .map(|x| parse_value(x).ok_or_else(|| Error::Parse(format!("--{name}: '{}' is not a number", x.trim()))))
        .collect()
}

fn tuple(v: &[f64]) -> String {
    v.iter().map(|&x| render(x)).collect::<Vec<_>>().join(", ")
}

fn check_eq(cli: &Cli, a: &CheckEqArgs) -> Run {
    let kind: EquationKind = a.eq.parse()?;
    let t: TNorm = a.tnorm.parse()?;
    let rep: EquationReport = match kind {
        EquationKind::Eq3 => check_eq3(t, a.step)?,
        EquationKind::Exchange => check_exchange(t, a.step)?,
        EquationKind::Distributivity => {
            let f: RefSpec = match &a.ref_spec {
                Some(s) => s.parse()?,
                None => format!("composed:tnorm:{t}:residuum:{t}").parse()?,
            };
            let on = |id: &str, v: Vec<f64>| -> Result<FuzzySet, Error> {
                FuzzySet::new(Universe::indexed(id, &format!("{}_", id.to_lowercase()), v.len())?, v)
            };
            let a1 = on("U1", memberships("a1", &a.a1)?)?;
            let a2 = on("U2", memberships("a2", &a.a2)?)?;
            let a1p = FuzzySet::new(a1.universe().clone(), memberships("a1-prime", &a.a1_prime)?)?;
            let a2p = FuzzySet::new(a2.universe().clone(), memberships("a2-prime", &a.a2_prime)?)?;
            check_similarity_distributivity(t, &f, &a1, &a2, &a1p, &a2p)?
        }
    };
    if cli.json {
        return Ok(pretty(&serde_json::to_value(&rep).expect("report serializes")));
    }
    let mut out = String::new();
    writeln!(out, "{} for {}", a.eq, rep.subject).unwrap();
    if let Some(d) = &rep.restricted_domain {
        writeln!(out, "  domain restricted to {d}").unwrap();
    }
    match (&rep.counterexample, rep.lhs, rep.rhs) {
        (_, Some(l), Some(r)) => writeln!(
            out,
            "  lhs {} {} rhs {}",
            render(l),
            match rep.relation {
                Some(hsbar_core::hier::Relation::Greater) => ">",
                Some(hsbar_core::hier::Relation::Less) => "<",
                _ => "=",
            },
            render(r)
        )
        .unwrap(),
        (Some(c), _, _) => writeln!(out, "  counterexample ({}) with defect {}", tuple(c), render(rep.violation)).unwrap(),
        (None, _, _) => writeln!(out, "  holds on {} tuples", rep.tested).unwrap(),
    }
    if let Some(u) = rep.unrestricted_holds {
        match &rep.unrestricted_counterexample {
            Some(c) if !u => writeln!(out, "  without the restriction: counterexample ({})", tuple(c)).unwrap(),
            _ => writeln!(out, "  without the restriction: holds").unwrap(),
        }
    }
    if cli.verbose {
        if let Some(v) = rep.inputs_within_antecedents {
            writeln!(out, "  inputs within antecedents: {v}").unwrap();
        }
        if let Some(v) = rep.antecedents_within_inputs {
            writeln!(out, "  antecedents within inputs: {v}").unwrap();
        }
    }
    writeln!(out, "verdict: {}", if rep.holds { "holds" } else { "fails" }).unwrap();
    Ok(out)
}

fn sweep_config(words: &[String]) -> Result<SweepConfig, Error> {
    let (mut n, mut u, mut m) = (None, None, None);
    for w in words.iter().flat_map(|w| w.split_whitespace()) {
        let bad = || Error::Parse(format!("--sweep: cannot read '{w}'; expected n=LO..HI, u=U or m=M"));
        let (k, v) = w.split_once('=').ok_or_else(bad)?;
        let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        match k.trim() {
            "n" => {
                n = Some(match v.split_once("..") {
                    Some((lo, hi)) => (int(lo)?, int(hi.trim_start_matches('='))?),
                    None => (int(v)?, int(v)?),
                })
            }
            "u" => u = Some(int(v)?),
            "m" => m = Some(int(v)?),
            _ => return Err(bad()),
        }
    }
    let (lo, hi) = n.ok_or_else(|| Error::Parse("--sweep needs n=LO..HI".into()))?;
    Ok(SweepConfig::new(lo, hi, u.unwrap_or(3), m.unwrap_or(4)))
}

fn bench(cli: &Cli, a: &BenchArgs) -> Run {
    let mut cfg = sweep_config(&a.sweep)?;
    cfg.trials = a.trials;
    cfg.seed = cli.seed;
    cfg.cap = cli.cap;
    cfg.tnorm = a.tnorm.parse()?;
    let rep = scaling_sweep(&cfg)?;
    if cli.json {
        return Ok(pretty(&serde_json::to_value(&rep).expect("report serializes")));
    }
    if let Some(f) = &rep.flat_fit {
        eprintln!("# flat ~ {}*{}^n, max relative error {:.4}", render(f.c), f.base, f.max_rel_error);
    }
    if let Some(h) = &rep.hier_fit {
        eprintln!(
            "# hier ~ {} + {}n, max relative error {:.4}",
            render(h.intercept),
            render(h.slope),
            h.max_rel_error
        );
    }
    eprintln!("# hier <= flat at every point: {}", rep.hier_never_exceeds_flat);
    for n in &rep.notes {
        eprintln!("# {n}");
    }
    Ok(rep.csv())
}
