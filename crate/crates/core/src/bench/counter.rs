use serde::Serialize;

/// One labeled line of an operation count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpRow {
    pub label: String,
    pub count: u64,
}

/// Counted operations of a single inference run.
///
/// A pointwise t-norm or implication costs 1, an inf or sup over `k` values
/// costs `k − 1` comparisons.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OpCounter {
    pub implication_evals: u64,
    pub tnorm_evals: u64,
    pub comparisons: u64,
    pub rows: Vec<OpRow>,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds to the row `label`, creating it at the end if absent.
    pub fn record(&mut self, label: &str, implications: u64, tnorms: u64, comparisons: u64) {
        self.implication_evals += implications;
        self.tnorm_evals += tnorms;
        self.comparisons += comparisons;
        let count = implications + tnorms + comparisons;
        match self.rows.iter_mut().find(|r| r.label == label) {
            Some(r) => r.count += count,
            None => self.rows.push(OpRow {
                label: label.to_string(),
                count,
            }),
        }
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn get(&self, label: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.label == label).map(|r| r.count)
    }

    pub fn row_counts(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.count).collect()
    }
}

/// Row label for the similarity of antecedent `i` (zero based).
pub(crate) fn similarity_label(i: usize) -> String {
    format!("S_F(A'_{0},A_{0})", i + 1)
}

/// Row label for the nested product of the first `k` antecedents, `k ≥ 2`.
pub(crate) fn product_label(k: usize) -> String {
    let mut s = "A_1".to_string();
    for i in 2..=k {
        s = format!("T({s},A_{i})");
    }
    s
}
