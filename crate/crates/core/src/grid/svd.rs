use num_complex::Complex64;

use super::{ComplexMatrix, GridError};

const MAX_SWEEPS: usize = 80;
/// Columns count as orthogonal once |aᵢᴴaⱼ| ≤ TOL·‖aᵢ‖‖aⱼ‖.
const TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Left vectors as columns.
    pub u: ComplexMatrix,
    /// Right vectors as columns.
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn left(&self, n: usize) -> Vec<Complex64> {
        self.u.column(n)
    }

    /// Σ σₙ uₙ vₙᴴ.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (rows, cols) = (self.u.rows(), self.v.rows());
        let mut m = ComplexMatrix::zeros(rows, cols);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..rows {
                let us = self.u[(i, k)] * s;
                for j in 0..cols {
                    m[(i, j)] += us * self.v[(j, k)].conj();
                }
            }
        }
        m
    }
}

/// One-sided Jacobi SVD of a square complex matrix.
///
/// Column pairs of `A·V` are rotated until mutually orthogonal; σ are the final column
/// norms. Each left vector is rephased so its largest-magnitude entry is real and
/// nonnegative, with the matching right vector rephased alike.
pub fn svd(m: &ComplexMatrix) -> Result<SvdResult, GridError> {
    let n = m.cols();
    assert_eq!(m.rows(), n, "square matrix expected");
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| ComplexMatrix::identity(n).column(j))
        .collect();

    let mut converged = n < 2;
    let mut residual = 0.0;
    for _ in 0..MAX_SWEEPS {
        residual = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = a[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = a[i].iter().zip(&a[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                let scale = (alpha * beta).sqrt();
                if scale == 0.0 || g <= TOL * scale {
                    continue;
                }
                residual = residual.max(g / scale);
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, i, j, c, s, phase);
                rotate(&mut v, i, j, c, s, phase);
            }
        }
        if residual == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(GridError::NoConvergence { residual });
    }

    let norms: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));
    let sigma_max = order.first().map_or(0.0, |&k| norms[k]);
    let negligible = sigma_max * n as f64 * f64::EPSILON;

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for &k in &order {
        let s = norms[k];
        if s > negligible {
            u_cols.push(a[k].iter().map(|z| z / s).collect());
            sigma.push(s);
        } else {
            deficient.push(u_cols.len());
            u_cols.push(Vec::new());
            sigma.push(0.0);
        }
        v_cols.push(v[k].clone());
    }
    // Null-space left vectors: orthonormal completion from the standard basis.
    for slot in deficient {
        let done: Vec<Vec<Complex64>> = u_cols.iter().filter(|c| !c.is_empty()).cloned().collect();
        let mut best: Option<Vec<Complex64>> = None;
        for e in 0..n {
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            x[e] = Complex64::new(1.0, 0.0);
            for q in &done {
                let proj: Complex64 = q.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= proj * qi;
                }
            }
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().map_or(true, |b| norm > norm_of(b)) {
                best = Some(x);
            }
        }
        let x = best.expect("n > 0");
        let norm = norm_of(&x);
        u_cols[slot] = x.into_iter().map(|z| z / norm).collect();
    }

    for (uc, vc) in u_cols.iter_mut().zip(v_cols.iter_mut()) {
        let peak = uc.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = uc
            .iter()
            .find(|z| z.norm() >= peak * (1.0 - 1e-12))
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        if pivot.norm() > 0.0 {
            let fix = pivot.conj() / pivot.norm();
            uc.iter_mut().for_each(|z| *z *= fix);
            vc.iter_mut().for_each(|z| *z *= fix);
        }
    }

    Ok(SvdResult {
        singular_values: sigma,
        u: from_columns(&u_cols, n),
        v: from_columns(&v_cols, n),
    })
}

fn norm_of(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn rotate(cols: &mut [Vec<Complex64>], i: usize, j: usize, c: f64, s: f64, phase: Complex64) {
    let (left, right) = cols.split_at_mut(j);
    let (ci, cj) = (&mut left[i], &mut right[0]);
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let xi = *x;
        let yj = *y;
        *x = xi * c - phase.conj() * yj * s;
        *y = phase * xi * s + yj * c;
    }
}

fn from_columns(cols: &[Vec<Complex64>], rows: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    m
}
