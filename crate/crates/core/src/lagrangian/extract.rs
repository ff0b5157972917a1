use super::state::LagrangianState;

/// Result of reading a schedule off the reduced cost matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// Jobs fixed at the front, in schedule order.
    pub front: Vec<usize>,
    /// Jobs fixed at the back, in schedule order.
    pub back: Vec<usize>,
    /// Jobs that could be placed at neither end, ascending.
    pub unscheduled: Vec<usize>,
}

impl Extraction {
    pub fn is_complete(&self) -> bool {
        self.unscheduled.is_empty()
    }

    /// The full order when extraction placed every job.
    pub fn order(&self) -> Option<Vec<usize>> {
        self.is_complete()
            .then(|| self.front.iter().chain(&self.back).copied().collect())
    }
}

/// Places jobs whose remaining row is all zero at the first open position and jobs
/// whose remaining column is all zero at the last open position, until neither end
/// accepts a job.
///
/// Among several candidates the job earliest in the reference schedule wins at the
/// front, the latest at the back. `ref_positions[j]` is job j's reference position.
pub fn extract_schedule(state: &LagrangianState, ref_positions: &[usize]) -> Extraction {
    let c = state.reduced();
    let n = c.n();
    let mut remaining = vec![true; n];
    // Positive entries in each row / column restricted to remaining jobs.
    let mut row_pos = vec![0usize; n];
    let mut col_pos = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && c.get(i, j).is_positive() {
                row_pos[i] += 1;
                col_pos[j] += 1;
            }
        }
    }
    let mut front = Vec::new();
    let mut back_rev = Vec::new();
    let mut left = n;

    let remove =
        |x: usize, remaining: &mut [bool], row_pos: &mut [usize], col_pos: &mut [usize]| {
            remaining[x] = false;
            for y in 0..n {
                if remaining[y] {
                    if c.get(y, x).is_positive() {
                        row_pos[y] -= 1;
                    }
                    if c.get(x, y).is_positive() {
                        col_pos[y] -= 1;
                    }
                }
            }
        };

    loop {
        let mut progressed = false;
        while left > 0 {
            let pick = (0..n)
                .filter(|&j| remaining[j] && row_pos[j] == 0)
                .min_by_key(|&j| ref_positions[j]);
            let Some(j) = pick else { break };
            remove(j, &mut remaining, &mut row_pos, &mut col_pos);
            front.push(j);
            left -= 1;
            progressed = true;
        }
        while left > 0 {
            let pick = (0..n)
                .filter(|&j| remaining[j] && col_pos[j] == 0)
                .max_by_key(|&j| ref_positions[j]);
            let Some(j) = pick else { break };
            remove(j, &mut remaining, &mut row_pos, &mut col_pos);
            back_rev.push(j);
            left -= 1;
            progressed = true;
        }
        if left == 0 || !progressed {
            break;
        }
    }
    back_rev.reverse();
    Extraction {
        front,
        back: back_rev,
        unscheduled: (0..n).filter(|&j| remaining[j]).collect(),
    }
}
