use serde::{Deserialize, Serialize};

use super::precedence::{transitive_closure, PrecedenceRelation};
use super::SchedError;

/// On-disk instance layout. Job indices in `prec` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance {
    pub n: usize,
    pub p: Vec<i64>,
    pub w: Vec<i64>,
    #[serde(default)]
    pub prec: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl RawInstance {
    pub fn from_json(text: &str) -> Result<Self, SchedError> {
        serde_json::from_str(text).map_err(|e| SchedError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Checks every instance invariant and builds the closed precedence relation.
    pub fn validate(self) -> Result<Instance, SchedError> {
        let n = self.n;
        if self.p.len() != n || self.w.len() != n {
            return Err(SchedError::LengthMismatch {
                n_jobs: n,
                p_len: self.p.len(),
                w_len: self.w.len(),
            });
        }
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(SchedError::Format(format!(
                    "{} labels for {n} jobs",
                    labels.len()
                )));
            }
        }
        let mut proc_times = Vec::with_capacity(n);
        for (job, &p) in self.p.iter().enumerate() {
            if p <= 0 {
                return Err(SchedError::NonPositiveProcTime { job, value: p });
            }
            proc_times.push(p as u64);
        }
        let mut weights = Vec::with_capacity(n);
        for (job, &w) in self.w.iter().enumerate() {
            if w < 0 {
                return Err(SchedError::NegativeWeight { job, value: w });
            }
            weights.push(w as u64);
        }
        let mut edges = Vec::with_capacity(self.prec.len());
        for &[i, j] in &self.prec {
            if i == 0 || i > n || j == 0 || j > n {
                return Err(SchedError::BadJobIndex {
                    index: if i == 0 || i > n { i } else { j },
                    n_jobs: n,
                });
            }
            edges.push((i - 1, j - 1));
        }
        let precedence = transitive_closure(&edges, n)?;
        Ok(Instance {
            proc_times,
            weights,
            precedence,
            labels: self.labels,
        })
    }
}

/// A validated 1|prec|ΣwC instance. Job indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    proc_times: Vec<u64>,
    weights: Vec<u64>,
    precedence: PrecedenceRelation,
    labels: Option<Vec<String>>,
}

impl Instance {
    /// Builds an instance from 0-based precedence pairs.
    pub fn new(
        proc_times: Vec<u64>,
        weights: Vec<u64>,
        edges: &[(usize, usize)],
    ) -> Result<Self, SchedError> {
        let raw = RawInstance {
            n: proc_times.len(),
            p: proc_times.iter().map(|&p| p as i64).collect(),
            w: weights.iter().map(|&w| w as i64).collect(),
            prec: edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            labels: None,
        };
        raw.validate()
    }

    pub fn n_jobs(&self) -> usize {
        self.proc_times.len()
    }

    pub fn proc_times(&self) -> &[u64] {
        &self.proc_times
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn precedence(&self) -> &PrecedenceRelation {
        &self.precedence
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n_jobs());
        self.labels = Some(labels);
        self
    }

    /// Same jobs, different (already closed) precedence relation.
    pub fn with_precedence(&self, precedence: PrecedenceRelation) -> Self {
        assert_eq!(precedence.n(), self.n_jobs());
        Self {
            proc_times: self.proc_times.clone(),
            weights: self.weights.clone(),
            precedence,
            labels: self.labels.clone(),
        }
    }

    /// Σ p_n w_n, the constant term of the 0-1 objective.
    pub fn self_cost(&self) -> u64 {
        self.proc_times
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| p * w)
            .sum()
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            n: self.n_jobs(),
            p: self.proc_times.iter().map(|&p| p as i64).collect(),
            w: self.weights.iter().map(|&w| w as i64).collect(),
            prec: self
                .precedence
                .raw_edges()
                .iter()
                .map(|&(i, j)| [i + 1, j + 1])
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Frame length `t = Σ p_n` and the mean slot `t / N` as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameStats {
    pub frame_length: u64,
    pub slot_num: u64,
    pub slot_den: u64,
}

impl FrameStats {
    pub fn slot(&self) -> f64 {
        self.slot_num as f64 / self.slot_den as f64
    }
}

pub fn frame_stats(inst: &Instance) -> FrameStats {
    let t: u64 = inst.proc_times().iter().sum();
    let n = inst.n_jobs() as u64;
    let g = gcd(t, n).max(1);
    FrameStats {
        frame_length: t,
        slot_num: t / g,
        slot_den: n / g,
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
