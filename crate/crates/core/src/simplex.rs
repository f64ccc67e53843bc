//! Dense primal simplex for small problems of the form
//! `max c·x` subject to `A x ≤ b`, `x ≥ 0`, with `b ≥ 0`.
//!
//! The origin is feasible, so no phase one is needed. Bland's rule keeps
//! degenerate problems from cycling.

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("constraint dimensions do not match".into()));
    }
    if b.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::InvalidArgument("right-hand sides must be nonnegative".into()));
    }
    let width = n + m + 1;
    // rows 0..m are constraints, row m is the objective (reduced costs)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    t[m][..n].copy_from_slice(c);
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_pivots = 50 * (n + m + 1).pow(2);
    for _ in 0..max_pivots {
        let Some(enter) = (0..n + m).find(|&j| t[m][j] > EPS) else {
            let mut x = vec![0.0; n];
            for (i, &v) in basis.iter().enumerate() {
                if v < n {
                    x[v] = t[i][width - 1];
                }
            }
            let value = c.iter().zip(&x).map(|(c, x)| c * x).sum();
            return Ok(LpSolution { value, x });
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter] > EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let best = t[l][width - 1] / t[l][enter];
                        if ratio < best - EPS || (ratio <= best + EPS && basis[i] < basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        let Some(r) = leave else {
            return Err(Error::InvalidArgument("linear program is unbounded".into()));
        };
        let pivot = t[r][enter];
        t[r].iter_mut().for_each(|v| *v /= pivot);
        let row = t[r].clone();
        for (i, line) in t.iter_mut().enumerate() {
            if i != r {
                let f = line[enter];
                if f != 0.0 {
                    line.iter_mut().zip(&row).for_each(|(v, p)| *v -= f * p);
                }
            }
        }
        basis[r] = enter;
    }
    Err(Error::NonConvergence("simplex"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36
        let s = maximize(
            &[3.0, 5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        )
        .unwrap();
        assert!((s.value - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_vertex() {
        // several constraints tight at the optimum
        let s = maximize(
            &[1.0, 1.0],
            &[vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 2.0]],
            &[1.0, 1.0, 1.0, 2.0],
        )
        .unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded() {
        assert!(maximize(&[1.0], &[vec![-1.0]], &[1.0]).is_err());
    }

    #[test]
    fn matches_vertex_enumeration() {
        // small random 2-variable problems against enumerating constraint intersections
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let c = [next() * 2.0 - 0.5, next() * 2.0 - 0.5];
            let mut rows: Vec<Vec<f64>> = (0..4).map(|_| vec![next() + 0.1, next() + 0.1]).collect();
            let mut b: Vec<f64> = (0..4).map(|_| next() + 0.1).collect();
            rows.push(vec![-1.0, 0.0]);
            b.push(0.0);
            rows.push(vec![0.0, -1.0]);
            b.push(0.0);
            let feasible = |x: f64, y: f64| rows.iter().zip(&b).all(|(r, &bb)| r[0] * x + r[1] * y <= bb + 1e-9);
            let mut best = f64::NEG_INFINITY;
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    let det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let x = (b[i] * rows[j][1] - rows[i][1] * b[j]) / det;
                    let y = (rows[i][0] * b[j] - b[i] * rows[j][0]) / det;
                    if feasible(x, y) {
                        best = best.max(c[0] * x + c[1] * y);
                    }
                }
            }
            let s = maximize(&c, &rows[..4], &b[..4]).unwrap();
            assert!((s.value - best).abs() < 1e-9, "{} vs {}", s.value, best);
        }
    }
}
