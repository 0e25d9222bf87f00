//! JSON report shapes. Counts are decimal strings because they routinely
//! exceed 64 bits.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub count: String,
    pub n: usize,
    pub m: usize,
    pub directed: bool,
    pub degeneracy: usize,
    pub engine: String,
    pub cycle: usize,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op_counter: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectReport {
    pub found: bool,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub directed: bool,
    pub method: String,
    pub reps: usize,
    pub seed: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegeneracyReport {
    pub n: usize,
    pub m: usize,
    pub degeneracy: usize,
    /// Vertex labels in removal order.
    pub order: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CostModelReport {
    pub k: usize,
    pub omega: f64,
    pub grid_step: f64,
    pub value: f64,
    pub argmax: Vec<f64>,
    pub points: u64,
    pub comb_exponent: f64,
    pub dk: f64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    /// Recovered homomorphism counts, one per pattern in input order.
    pub counts: Vec<String>,
    pub probe_sizes: Vec<Vec<usize>>,
    pub attempts: usize,
    pub seed: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub family: String,
    pub runs: Vec<RunReport>,
}
