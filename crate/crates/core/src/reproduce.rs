//! Side-by-side comparison of a system's reference values with recomputed
//! ones.

use serde::Serialize;

use crate::bench::{count_flat, count_hier};
use crate::error::Result;
use crate::hier::{hier_infer_alg1, hier_infer_alg2, HierPlan};
use crate::render::render;
use crate::sbar::{infer_flat, InferOptions, InferenceResult, RuleForm};
use crate::system::{CountsDecl, Degree, System};

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub quantity: String,
    pub reference: String,
    pub recomputed: String,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub entries: Vec<Entry>,
}

impl ReproductionReport {
    pub fn discrepancies(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.agrees)
    }

    pub fn get(&self, quantity: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.quantity == quantity)
    }
}

fn values(ds: &[Degree]) -> Vec<f64> {
    ds.iter().map(|d| d.value().unwrap_or(f64::NAN)).collect()
}

fn list(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|&x| render(x)).collect::<Vec<_>>().join(", "))
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= TOL)
}

fn vector_entry(quantity: String, reference: &[f64], recomputed: &[f64]) -> Entry {
    Entry {
        quantity,
        reference: list(reference),
        recomputed: list(recomputed),
        agrees: close(reference, recomputed),
        note: None,
    }
}

fn counts_entries(out: &mut Vec<Entry>, name: &str, reference: &CountsDecl, rows: Vec<u64>, total: u64) {
    let fmt = |v: &[u64]| format!("{v:?}");
    out.push(Entry {
        quantity: format!("{name} rows"),
        reference: fmt(&reference.rows),
        recomputed: fmt(&rows),
        agrees: reference.rows == rows,
        note: None,
    });
    let row_sum: u64 = reference.rows.iter().sum();
    out.push(Entry {
        quantity: format!("{name} total"),
        reference: reference.total.to_string(),
        recomputed: total.to_string(),
        agrees: reference.total == total,
        note: (row_sum != reference.total)
            .then(|| format!("reference rows sum to {row_sum}, not the stated total {}", reference.total)),
    });
}

/// Runs the flat method and the hierarchical method matching the rule form,
/// then compares every reference value the system carries.
pub fn reproduce(sys: &System) -> Result<ReproductionReport> {
    let opts = InferOptions::default();
    let flat = infer_flat(&sys.rule, &sys.inputs, &opts)?;
    let plan = HierPlan::innermost_first(sys.rule.arity());
    let hier = match sys.rule.form() {
        RuleForm::Eq2Implication => hier_infer_alg1(&sys.rule, &sys.inputs, &plan, &opts)?,
        RuleForm::Eq1Conjunction => hier_infer_alg2(&sys.rule, &sys.inputs, &plan, &opts)?,
    };
    let reduced = infer_flat(
        &sys.rule,
        &sys.inputs,
        &InferOptions {
            sup_reduction: true,
            ..opts
        },
    )?;
    let mut entries = Vec::new();
    let Some(r) = &sys.file.reference else {
        return Ok(ReproductionReport { entries });
    };
    if let Some(s) = &r.antecedent_similarities {
        let got: Vec<f64> = flat.antecedent_similarities.iter().map(|v| v.get()).collect();
        entries.push(vector_entry("antecedent similarities".into(), &values(s), &got));
    }
    if let Some(s) = &r.similarity {
        entries.push(vector_entry("similarity".into(), &values(std::slice::from_ref(s)), &[flat.similarity_used.get()]));
    }
    if let Some(a) = &r.sup_antecedent {
        let got = flat.sup_antecedent.unwrap_or(f64::NAN);
        entries.push(vector_entry("sup A".into(), &values(std::slice::from_ref(a)), &[got]));
    }
    let by_method = |m: &str| -> Option<&InferenceResult> {
        match m {
            "flat" => Some(&flat),
            "hier1" | "hier2" if m == hier.method.to_string() => Some(&hier),
            _ => None,
        }
    };
    for (m, want) in &r.outputs {
        let got = by_method(m).map(|res| res.output.memberships().to_vec()).unwrap_or_default();
        entries.push(vector_entry(format!("{m} output"), &values(want), &got));
    }
    for (label, want) in &r.intermediates {
        let got = [&flat, &reduced, &hier]
            .iter()
            .flat_map(|res| res.intermediates.iter())
            .find(|i| &i.label == label)
            .map(|i| i.set.memberships().to_vec())
            .unwrap_or_default();
        entries.push(vector_entry(label.clone(), &values(want), &got));
    }
    if let Some(c) = &r.flat_counts {
        let got = count_flat(&sys.rule, &sys.inputs)?;
        counts_entries(&mut entries, "flat count", c, got.row_counts(), got.total());
    }
    if let Some(c) = &r.hier_counts {
        let got = count_hier(&sys.rule, &sys.inputs)?;
        counts_entries(&mut entries, "hierarchical count", c, got.row_counts(), got.total());
    }
    Ok(ReproductionReport { entries })
}
