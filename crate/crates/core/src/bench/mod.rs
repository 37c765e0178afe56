//! Operation counting and flat-versus-hierarchical scaling sweeps.

pub mod counter;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use counter::{OpCounter, OpRow};

use crate::algebra::TNorm;
use crate::error::{Error, Result};
use crate::fuzzyset::{product_cells, FuzzySet, DEFAULT_PRODUCT_CAP};
use crate::hier::{hier_infer_alg1, HierPlan};
use crate::sample::random_rule;
use crate::sbar::{infer_flat, InferOptions, RuleBase, RuleForm};

fn counted(sup_reduction: bool) -> InferOptions {
    InferOptions {
        count: true,
        sup_reduction,
        ..InferOptions::default()
    }
}

/// Flat inference counted with the supremum of the product antecedent
/// computed once: similarities, `s`, the product, `a = sup A`, then two
/// evaluations per output element.
pub fn count_flat(rule: &RuleBase, inputs: &[FuzzySet]) -> Result<OpCounter> {
    Ok(infer_flat(rule, inputs, &counted(true))?.op_counts.expect("counting enabled"))
}

/// Inf-chain inference counted with each stage reduced to `I_T(sᵢ, I_T(sup Aᵢ, B(y)))`.
pub fn count_hier(rule: &RuleBase, inputs: &[FuzzySet]) -> Result<OpCounter> {
    let plan = HierPlan::innermost_first(rule.arity()).reduced();
    Ok(hier_infer_alg1(rule, inputs, &plan, &counted(false))?
        .op_counts
        .expect("counting enabled"))
}

/// Both counts for one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub config_digest: String,
    pub flat_rows: Vec<OpRow>,
    pub hier_rows: Vec<OpRow>,
    pub flat_total: u64,
    pub hier_total: u64,
    pub notes: Vec<String>,
}

pub fn count_report(rule: &RuleBase, inputs: &[FuzzySet]) -> Result<CountReport> {
    let flat = count_flat(rule, inputs)?;
    let hier = count_hier(rule, inputs)?;
    let sizes: Vec<usize> = rule.antecedents().iter().map(FuzzySet::len).collect();
    let digest = digest(&(sizes, rule.consequent().len(), rule.tnorm().to_string(), rule.form()));
    Ok(CountReport {
        config_digest: digest,
        flat_total: flat.total(),
        hier_total: hier.total(),
        flat_rows: flat.rows,
        hier_rows: hier.rows,
        notes: Vec::new(),
    })
}

fn digest<T: Serialize>(v: &T) -> String {
    let bytes = serde_json::to_vec(v).expect("plain data serializes");
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub u: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub tnorm: TNorm,
    pub cap: u64,
    /// Timed repetitions per point; the median is reported.
    pub repetitions: usize,
    /// Off where no monotonic clock exists, e.g. in a browser.
    pub timed: bool,
}

impl SweepConfig {
    pub fn new(n_min: usize, n_max: usize, u: usize, m: usize) -> Self {
        SweepConfig {
            n_min,
            n_max,
            u,
            m,
            trials: 3,
            seed: 0,
            tnorm: TNorm::Product,
            cap: DEFAULT_PRODUCT_CAP,
            repetitions: 5,
            timed: true,
        }
    }
}

/// Convention under which a sweep arm is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arm {
    /// Flat implication form evaluated over every product cell.
    Flat,
    /// Inf-chain with an inf over every `Uᵢ`.
    Hier,
    /// Flat with `sup A` computed once.
    FlatReduced,
    /// Inf-chain with each stage evaluated at `sup Aᵢ`.
    HierReduced,
}

impl Arm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Arm::Flat => "flat",
            Arm::Hier => "hier",
            Arm::FlatReduced => "flat-reduced",
            Arm::HierReduced => "hier-reduced",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub arm: Arm,
    pub n: usize,
    pub u: usize,
    pub m: usize,
    /// Cells of the product antecedent universe.
    pub cells: u128,
    pub ops: Option<u64>,
    pub wall_ns: Option<u64>,
    pub skipped: Option<String>,
}

/// `ops ≈ c · baseⁿ`, with `c` the geometric mean of `ops / baseⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpFit {
    pub base: f64,
    pub c: f64,
    /// Least-squares slope of `ln ops` against `n`.
    pub log_slope: f64,
    pub max_rel_error: f64,
}

/// `ops ≈ intercept + slope · n` by least squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinFit {
    pub intercept: f64,
    pub slope: f64,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub config_digest: String,
    pub config: SweepConfig,
    pub points: Vec<SweepPoint>,
    pub flat_fit: Option<ExpFit>,
    pub hier_fit: Option<LinFit>,
    /// `hier ≤ flat` at every measured `n`.
    pub hier_never_exceeds_flat: bool,
    pub notes: Vec<String>,
}

impl BenchReport {
    pub fn csv(&self) -> String {
        let mut s = String::from("arm,n,u,m,ops,wall_ns\n");
        for p in &self.points {
            let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
            s.push_str(&format!("{},{},{},{},{},{}\n", p.arm.as_str(), p.n, p.u, p.m, opt(p.ops), opt(p.wall_ns)));
        }
        s
    }

    pub fn ops(&self, arm: Arm, n: usize) -> Option<u64> {
        self.points.iter().find(|p| p.arm == arm && p.n == n).and_then(|p| p.ops)
    }
}

pub fn fit_exponential(points: &[(usize, u64)], base: f64) -> Option<ExpFit> {
    if points.is_empty() {
        return None;
    }
    let k = points.len() as f64;
    let lnc = points.iter().map(|&(n, ops)| (ops as f64).ln() - n as f64 * base.ln()).sum::<f64>() / k;
    let c = lnc.exp();
    let max_rel_error = points
        .iter()
        .map(|&(n, ops)| (c * base.powi(n as i32) - ops as f64).abs() / ops as f64)
        .fold(0.0, f64::max);
    let log_slope = least_squares(points.iter().map(|&(n, ops)| (n as f64, (ops as f64).ln()))).map_or(f64::NAN, |(_, b)| b);
    Some(ExpFit {
        base,
        c,
        log_slope,
        max_rel_error,
    })
}

pub fn fit_linear(points: &[(usize, u64)]) -> Option<LinFit> {
    let (intercept, slope) = least_squares(points.iter().map(|&(n, ops)| (n as f64, ops as f64)))?;
    let max_rel_error = points
        .iter()
        .map(|&(n, ops)| (intercept + slope * n as f64 - ops as f64).abs() / ops as f64)
        .fold(0.0, f64::max);
    Some(LinFit {
        intercept,
        slope,
        max_rel_error,
    })
}

fn least_squares(xy: impl Iterator<Item = (f64, f64)>) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = xy.collect();
    let k = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

fn median_ns(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<u64> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed().as_nanos() as u64);
    }
    times.sort_unstable();
    Ok(times[times.len() / 2])
}

/// Counts every arm for `n` antecedents of size `u` and an output of size
/// `m` on seeded random implication-form instances. The fits use the [`Arm::Flat`]
/// and [`Arm::Hier`] arms; flat points beyond the cell cap are skipped.
pub fn scaling_sweep(cfg: &SweepConfig) -> Result<BenchReport> {
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max || cfg.u < 1 || cfg.m < 1 || cfg.trials == 0 {
        return Err(Error::Validation(format!(
            "sweep needs 1 ≤ n_min ≤ n_max, u ≥ 1, m ≥ 1, trials ≥ 1; got n={}..{}, u={}, m={}, trials={}",
            cfg.n_min, cfg.n_max, cfg.u, cfg.m, cfg.trials
        )));
    }
    let reps = cfg.repetitions.max(5);
    let mut points = Vec::new();
    let mut notes = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let cells = product_cells(std::iter::repeat_n(cfg.u, n));
        let sizes = vec![cfg.u; n];
        let mut instances = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 32) ^ trial as u64);
            instances.push(random_rule(&mut rng, &sizes, cfg.m, cfg.tnorm, RuleForm::Eq2Implication, 0.0)?);
        }
        let flat_fits = cells <= cfg.cap as u128;
        for arm in [Arm::Flat, Arm::Hier, Arm::FlatReduced, Arm::HierReduced] {
            let is_flat = matches!(arm, Arm::Flat | Arm::FlatReduced);
            if is_flat && !flat_fits {
                points.push(SweepPoint {
                    arm,
                    n,
                    u: cfg.u,
                    m: cfg.m,
                    cells,
                    ops: None,
                    wall_ns: None,
                    skipped: Some(format!("{cells} cells exceed the cap of {}", cfg.cap)),
                });
                continue;
            }
            let run = |(rule, inputs): &(RuleBase, Vec<FuzzySet>), count: bool| -> Result<Option<OpCounter>> {
                let opts = InferOptions {
                    count,
                    cap: cfg.cap,
                    sup_reduction: arm == Arm::FlatReduced,
                    ..InferOptions::default()
                };
                let res = match arm {
                    Arm::Flat | Arm::FlatReduced => infer_flat(rule, inputs, &opts)?,
                    Arm::Hier => hier_infer_alg1(rule, inputs, &HierPlan::innermost_first(n), &opts)?,
                    Arm::HierReduced => hier_infer_alg1(rule, inputs, &HierPlan::innermost_first(n).reduced(), &opts)?,
                };
                Ok(res.op_counts)
            };
            let mut ops = None;
            for inst in &instances {
                let total = run(inst, true)?.expect("counting enabled").total();
                if *ops.get_or_insert(total) != total {
                    notes.push(format!("{} n={n}: op count varies across trials", arm.as_str()));
                }
            }
            let wall = if cfg.timed {
                Some(median_ns(reps, || run(&instances[0], false).map(|_| ()))?)
            } else {
                None
            };
            points.push(SweepPoint {
                arm,
                n,
                u: cfg.u,
                m: cfg.m,
                cells,
                ops,
                wall_ns: wall,
                skipped: None,
            });
        }
    }
    let series = |arm: Arm| -> Vec<(usize, u64)> {
        points.iter().filter(|p| p.arm == arm).filter_map(|p| p.ops.map(|o| (p.n, o))).collect()
    };
    let flat = series(Arm::Flat);
    let hier = series(Arm::Hier);
    let hier_never_exceeds_flat = flat
        .iter()
        .all(|&(n, f)| hier.iter().find(|&&(k, _)| k == n).is_some_and(|&(_, h)| h <= f));
    Ok(BenchReport {
        config_digest: digest(cfg),
        config: cfg.clone(),
        flat_fit: fit_exponential(&flat, cfg.u as f64),
        hier_fit: fit_linear(&hier),
        hier_never_exceeds_flat,
        points,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzyset::Universe;

    fn set(id: &str, v: &[f64]) -> FuzzySet {
        FuzzySet::new(Universe::indexed(id, id, v.len()).unwrap(), v.to_vec()).unwrap()
    }

    fn example() -> (RuleBase, Vec<FuzzySet>) {
        let a1 = set("u1", &[1.0, 0.9, 0.6, 0.7]);
        let a2 = set("u2", &[0.4, 0.4, 0.6, 0.5, 0.3]);
        let a3 = set("u3", &[0.6, 0.3, 0.5]);
        let b = set("v", &[0.3, 0.4, 0.2, 0.1]);
        let on = |a: &FuzzySet, v: &[f64]| FuzzySet::new(a.universe().clone(), v.to_vec()).unwrap();
        let inputs = vec![
            on(&a1, &[0.8, 0.5, 0.7, 0.9]),
            on(&a2, &[0.5, 0.6, 0.7, 0.4, 0.4]),
            on(&a3, &[0.8, 0.7, 0.9]),
        ];
        (RuleBase::new(vec![a1, a2, a3], b, TNorm::Product, RuleForm::Eq2Implication).unwrap(), inputs)
    }

    #[test]
    fn table_rows() {
        let (rule, inputs) = example();
        let flat = count_flat(&rule, &inputs).unwrap();
        assert_eq!(flat.row_counts(), vec![15, 19, 11, 2, 20, 60, 59, 4, 4]);
        assert_eq!(flat.total(), 194);
        let hier = count_hier(&rule, &inputs).unwrap();
        assert_eq!(hier.row_counts(), vec![15, 19, 11, 3, 4, 2, 8, 8, 8]);
        assert_eq!(hier.total(), 78);
        let labels: Vec<&str> = hier.rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels[3..], ["sup A_1", "sup A_2", "sup A_3", "B'_23", "B'_22", "B'_2"]);
    }

    #[test]
    fn symbolic_single_antecedent() {
        let a = set("u", &[0.2, 1.0, 0.5, 0.7, 0.1]);
        let b = set("v", &[0.3, 0.9, 0.4]);
        let rule = RuleBase::new(vec![a.clone()], b, TNorm::Product, RuleForm::Eq2Implication).unwrap();
        let (u, m) = (5u64, 3u64);
        let flat = count_flat(&rule, std::slice::from_ref(&a)).unwrap();
        assert_eq!(flat.get("S_F(A'_1,A_1)"), Some(3 * u + u - 1));
        assert_eq!(flat.total(), 3 * u + u - 1 + (u - 1) + 2 * m);
        let direct = infer_flat(&rule, std::slice::from_ref(&a), &counted(false)).unwrap().op_counts.unwrap();
        let hier = hier_infer_alg1(&rule, &[a], &HierPlan::innermost_first(1), &counted(false)).unwrap().op_counts.unwrap();
        assert_eq!(direct.total(), hier.total());
    }

    #[test]
    fn fits() {
        let pts: Vec<(usize, u64)> = (2..=8).map(|n| (n, 7 * 3u64.pow(n as u32))).collect();
        let f = fit_exponential(&pts, 3.0).unwrap();
        assert!((f.c - 7.0).abs() < 1e-9 && f.max_rel_error < 1e-12);
        assert!((f.log_slope - 3f64.ln()).abs() < 1e-12);
        let l = fit_linear(&[(1, 43), (2, 86), (3, 129)]).unwrap();
        assert!((l.slope - 43.0).abs() < 1e-9 && l.max_rel_error < 1e-12);
    }

    #[test]
    fn small_sweep() {
        let mut cfg = SweepConfig::new(1, 4, 3, 4);
        cfg.trials = 2;
        let rep = scaling_sweep(&cfg).unwrap();
        assert_eq!(rep.ops(Arm::Flat, 1), rep.ops(Arm::Hier, 1));
        assert_eq!(rep.ops(Arm::Hier, 3), Some(3 * 43));
        assert!(rep.hier_never_exceeds_flat);
        assert!(rep.csv().starts_with("arm,n,u,m,ops,wall_ns\nflat,1,3,4,43,"));
        cfg.cap = 20;
        let rep = scaling_sweep(&cfg).unwrap();
        assert!(rep.points.iter().any(|p| p.n == 3 && p.arm == Arm::Flat && p.skipped.is_some()));
    }
}
