use std::fmt;

use crate::sched::Instance;

/// Extended nonnegative integer. `Infinite` marks an order forbidden by precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(u64),
    Infinite,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self == Cost::ZERO
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self != Cost::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Infinite => None,
        }
    }

    /// Subtracts a finite amount; `None` if the result would be negative.
    #[inline]
    pub fn checked_sub(self, x: u64) -> Option<Cost> {
        match self {
            Cost::Finite(v) => v.checked_sub(x).map(Cost::Finite),
            Cost::Infinite => Some(Cost::Infinite),
        }
    }

    #[inline]
    pub fn add(self, x: u64) -> Cost {
        match self {
            Cost::Finite(v) => Cost::Finite(v + x),
            Cost::Infinite => Cost::Infinite,
        }
    }

    /// Clamp to `cap`, used for flow capacities.
    #[inline]
    pub fn min_finite(self, cap: u64) -> u64 {
        match self {
            Cost::Finite(v) => v.min(cap),
            Cost::Infinite => cap,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// Dense N×N matrix of [`Cost`] entries. The diagonal is held at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<Cost>,
}

impl CostMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Cost::ZERO; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cost {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, c: Cost) {
        self.entries[i * self.n + j] = c;
    }

    pub fn row(&self, i: usize) -> &[Cost] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn infinite_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|c| **c == Cost::Infinite)
            .count()
    }

    /// True when every off-diagonal entry is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|c| c.is_zero())
    }
}

/// c_nm = p_n w_m unless m must precede n, in which case the entry is infinite.
pub fn build_cost_matrix(inst: &Instance) -> CostMatrix {
    let n = inst.n_jobs();
    let p = inst.proc_times();
    let w = inst.weights();
    let prec = inst.precedence();
    let mut c = CostMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let entry = if prec.precedes(j, i) {
                Cost::Infinite
            } else {
                Cost::Finite(p[i] * w[j])
            };
            c.set(i, j, entry);
        }
    }
    c
}
