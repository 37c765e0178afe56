//! Browser bindings. Each export takes and returns JSON text; errors come
//! back as a thrown string.

use hsbar_core::bench::{scaling_sweep, SweepConfig};
use hsbar_core::equivalence::{validate_ref, RefSpec};
use hsbar_core::hier::{hier_infer_alg1, hier_infer_alg2, HierPlan};
use hsbar_core::render::render;
use hsbar_core::reproduce::reproduce;
use hsbar_core::sbar::{infer_flat, InferOptions};
use hsbar_core::system::load_system;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest sweep accepted from the page, to keep the tab responsive.
const MAX_SWEEP_CELLS: u64 = 2_000_000;

fn text(v: Value) -> String {
    serde_json::to_string(&v).expect("json value serializes")
}

/// REF1 to REF5 verdicts plus a coarse surface of `F` for plotting.
pub fn ref_inner(spec: &str, step: f64, surface: usize) -> Result<String, String> {
    let f: RefSpec = spec.parse().map_err(|e| format!("{e}"))?;
    let reports = validate_ref(&f, step).map_err(|e| format!("{e}"))?;
    let k = surface.clamp(2, 101);
    let pts: Vec<f64> = (0..k).map(|i| i as f64 / (k - 1) as f64).collect();
    let grid: Vec<Vec<f64>> = pts.iter().map(|&x| pts.iter().map(|&y| f.eval(x, y)).collect()).collect();
    Ok(text(json!({
        "ref": f.to_string(),
        "is_ref": reports.iter().all(|r| r.holds),
        "axioms": reports,
        "surface": {"points": pts, "values": grid},
    })))
}

pub fn infer_inner(system: &str, method: &str) -> Result<String, String> {
    let sys = load_system(system).map_err(|e| format!("{e}"))?;
    let opts = InferOptions::default();
    let plan = HierPlan::innermost_first(sys.rule.arity());
    let res = match method {
        "flat" => infer_flat(&sys.rule, &sys.inputs, &opts),
        "hier1" => hier_infer_alg1(&sys.rule, &sys.inputs, &plan, &opts),
        "hier2" => hier_infer_alg2(&sys.rule, &sys.inputs, &plan, &opts),
        other => return Err(format!("unknown method '{other}'; expected flat, hier1 or hier2")),
    }
    .map_err(|e| format!("{e}"))?;
    let set = |s: &hsbar_core::fuzzyset::FuzzySet| -> Value {
        s.records().into_iter().map(|(l, v)| json!([l, render(v)])).collect()
    };
    let repro = match &sys.file.reference {
        Some(_) => Some(reproduce(&sys).map_err(|e| format!("{e}"))?),
        None => None,
    };
    Ok(text(json!({
        "method": res.method.to_string(),
        "antecedent_similarities": res.antecedent_similarities.iter().map(|s| render(s.get())).collect::<Vec<_>>(),
        "similarity": render(res.similarity_used.get()),
        "output": set(&res.output),
        "intermediates": res.intermediates.iter().map(|i| json!({"label": i.label, "set": set(&i.set)})).collect::<Vec<_>>(),
        "diagnostics": res.diagnostics,
        "reproduction": repro,
    })))
}

pub fn sweep_inner(n_min: usize, n_max: usize, u: usize, m: usize) -> Result<String, String> {
    let mut cfg = SweepConfig::new(n_min, n_max, u, m);
    cfg.trials = 1;
    cfg.timed = false;
    cfg.cap = MAX_SWEEP_CELLS;
    let rep = scaling_sweep(&cfg).map_err(|e| format!("{e}"))?;
    serde_json::to_string(&rep).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn ref_report(spec: &str, step: f64, surface: usize) -> Result<String, JsValue> {
    ref_inner(spec, step, surface).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn infer(system: &str, method: &str) -> Result<String, JsValue> {
    infer_inner(system, method).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sweep(n_min: usize, n_max: usize, u: usize, m: usize) -> Result<String, JsValue> {
    sweep_inner(n_min, n_max, u, m).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRODUCT: &str = include_str!("../../../fixtures/three_antecedent_product.json");

    #[test]
    fn infers_the_fixture() {
        let v: Value = serde_json::from_str(&infer_inner(PRODUCT, "hier1").unwrap()).unwrap();
        assert_eq!(v["similarity"], "10/63");
        assert_eq!(v["output"][3][1], "1");
        assert!(infer_inner(PRODUCT, "hier2").unwrap_err().contains("eq1-conjunction"));
        assert!(infer_inner("{", "flat").is_err());
    }

    #[test]
    fn reports_ref_and_surface() {
        let v: Value = serde_json::from_str(&ref_inner("catalog:F2", 0.1, 5).unwrap()).unwrap();
        assert_eq!(v["is_ref"], true);
        assert_eq!(v["surface"]["values"][0][4], 0.0);
        assert!(ref_inner("bogus", 0.1, 5).is_err());
    }

    #[test]
    fn sweeps_without_timing() {
        let v: Value = serde_json::from_str(&sweep_inner(1, 3, 3, 4).unwrap()).unwrap();
        assert!(v["points"].as_array().unwrap().iter().all(|p| p["wall_ns"].is_null()));
        assert_eq!(v["points"][0]["ops"], 43);
    }
}
