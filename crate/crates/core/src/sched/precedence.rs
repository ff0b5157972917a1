use super::SchedError;

/// Transitively closed precedence relation over `n` jobs.
///
/// `precedes(i, j)` is true iff job `i` must complete before job `j` starts,
/// either directly or through a chain of raw edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceRelation {
    n: usize,
    closure: Vec<bool>,
    raw_edges: Vec<(usize, usize)>,
}

impl PrecedenceRelation {
    /// The empty relation.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            closure: vec![false; n * n],
            raw_edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.closure[i * self.n + j]
    }

    /// True when the pair is ordered either way.
    #[inline]
    pub fn related(&self, i: usize, j: usize) -> bool {
        self.precedes(i, j) || self.precedes(j, i)
    }

    pub fn raw_edges(&self) -> &[(usize, usize)] {
        &self.raw_edges
    }

    /// Number of ordered pairs in the closure.
    pub fn closed_pair_count(&self) -> usize {
        self.closure.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.raw_edges.is_empty()
    }

    /// All closed pairs `(i, j)` in row-major order.
    pub fn closed_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.closure
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| (k / n, k % n))
    }

    /// Predecessors of `j` in the closure.
    pub fn predecessors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.precedes(i, j))
    }

    /// Adds the pair `i -> j` and closes the relation again.
    ///
    /// Fails with `CyclicPrecedence` when `j` already precedes `i`.
    pub fn with_pair(&self, i: usize, j: usize) -> Result<Self, SchedError> {
        let n = self.n;
        if i >= n || j >= n {
            return Err(SchedError::BadJobIndex {
                index: i.max(j),
                n_jobs: n,
            });
        }
        if i == j || self.precedes(j, i) {
            let mut cycle = vec![i];
            if i != j {
                cycle.push(j);
            }
            return Err(SchedError::CyclicPrecedence { cycle });
        }
        let mut out = self.clone();
        out.raw_edges.push((i, j));
        if self.precedes(i, j) {
            return Ok(out);
        }
        // Everything reaching i (plus i) now reaches everything reachable from j (plus j).
        let heads: Vec<usize> = (0..n).filter(|&a| a == i || self.precedes(a, i)).collect();
        let tails: Vec<usize> = (0..n).filter(|&b| b == j || self.precedes(j, b)).collect();
        for &a in &heads {
            for &b in &tails {
                out.closure[a * n + b] = true;
            }
        }
        Ok(out)
    }

    /// Closes the relation again from its current closure. Used to check idempotence.
    pub fn reclose(&self) -> Result<Self, SchedError> {
        let pairs: Vec<_> = self.closed_pairs().collect();
        transitive_closure(&pairs, self.n)
    }
}

/// Builds the transitive closure of `edges` over jobs `0..n`.
///
/// Rejects self-pairs and cycles with a witness cycle (job indices, 0-based).
pub fn transitive_closure(
    edges: &[(usize, usize)],
    n: usize,
) -> Result<PrecedenceRelation, SchedError> {
    let mut succ = vec![Vec::new(); n];
    for &(i, j) in edges {
        if i >= n || j >= n {
            return Err(SchedError::BadJobIndex {
                index: i.max(j),
                n_jobs: n,
            });
        }
        if i == j {
            return Err(SchedError::CyclicPrecedence { cycle: vec![i] });
        }
        succ[i].push(j);
    }
    if let Some(cycle) = find_cycle(&succ) {
        return Err(SchedError::CyclicPrecedence { cycle });
    }
    // Reverse topological order lets each row be the union of its successors' rows.
    let order = topological_order(&succ);
    let mut closure = vec![false; n * n];
    for &v in order.iter().rev() {
        for &s in &succ[v] {
            closure[v * n + s] = true;
            for t in 0..n {
                if closure[s * n + t] {
                    closure[v * n + t] = true;
                }
            }
        }
    }
    Ok(PrecedenceRelation {
        n,
        closure,
        raw_edges: edges.to_vec(),
    })
}

fn topological_order(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for s in succ.iter().flatten() {
        indeg[*s] += 1;
    }
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = stack.pop() {
        order.push(v);
        for &s in &succ[v] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                stack.push(s);
            }
        }
    }
    order
}

/// Iterative three-colour DFS; returns the vertices of one directed cycle if any.
fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let n = succ.len();
    let mut mark = vec![Mark::White; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if mark[root] != Mark::White {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Grey;
        while let Some((v, next)) = stack.last_mut() {
            let v = *v;
            if let Some(&s) = succ[v].get(*next) {
                *next += 1;
                match mark[s] {
                    Mark::White => {
                        mark[s] = Mark::Grey;
                        parent[s] = v;
                        stack.push((s, 0));
                    }
                    Mark::Grey => {
                        let mut cycle = vec![v];
                        let mut u = v;
                        while u != s {
                            u = parent[u];
                            cycle.push(u);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Mark::Black => {}
                }
            } else {
                mark[v] = Mark::Black;
                stack.pop();
            }
        }
    }
    None
}
