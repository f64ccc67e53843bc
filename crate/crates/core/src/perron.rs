//! Perron root and eigenvectors of irreducible nonnegative matrices given
//! as sparse edge lists.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest size for which the dense LU refinement is used.
const DENSE_LIMIT: usize = 1024;
const POWER_TOL: f64 = 1e-13;
const POWER_CAP: usize = 200_000;

#[derive(Clone, Debug)]
pub struct PerronPair {
    pub rho: f64,
    /// Positive right eigenvector, summing to 1.
    pub right: Vec<f64>,
    /// Positive left eigenvector, summing to 1.
    pub left: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Sparse<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    weights: &'a [f64],
    transposed: bool,
}

impl Sparse<'_> {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|y| *y = 0.0);
        for (&(u, v), &w) in self.edges.iter().zip(self.weights) {
            if self.transposed {
                out[v] += w * x[u];
            } else {
                out[u] += w * x[v];
            }
        }
    }

    fn dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (&(u, v), &w) in self.edges.iter().zip(self.weights) {
            if self.transposed {
                m[(v, u)] += w;
            } else {
                m[(u, v)] += w;
            }
        }
        m
    }

    fn rayleigh(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.n];
        self.apply(x, &mut y);
        y.iter().sum::<f64>() / x.iter().sum::<f64>()
    }
}

fn normalize(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
}

/// Power iteration on the lazy matrix `(M + I)/2`, which shares the
/// Perron vector and is aperiodic.
fn power(m: Sparse, tol: f64) -> (Vec<f64>, bool) {
    let n = m.n;
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    for _ in 0..POWER_CAP {
        m.apply(&x, &mut y);
        for i in 0..n {
            y[i] = 0.5 * (y[i] + x[i]);
        }
        normalize(&mut y);
        let change = x.iter().zip(&y).fold(0.0_f64, |d, (a, b)| d.max((a - b).abs()));
        std::mem::swap(&mut x, &mut y);
        if change <= tol * x.iter().copied().fold(0.0, f64::max) {
            return (x, true);
        }
    }
    (x, false)
}

/// A few steps of shifted inverse iteration to bring an approximate Perron
/// vector to working precision.
fn refine(m: Sparse, mut x: Vec<f64>) -> Vec<f64> {
    let dense = m.dense();
    for _ in 0..3 {
        let rho = m.rayleigh(&x);
        let shift = rho * (1.0 + 1e-10) + f64::MIN_POSITIVE;
        let lu = (dense.clone() - DMatrix::identity(m.n, m.n) * shift).lu();
        let Some(y) = lu.solve(&nalgebra::DVector::from_vec(x.clone())) else {
            break;
        };
        let mut y: Vec<f64> = y.iter().copied().collect();
        let s: f64 = y.iter().sum();
        if !s.is_finite() || s == 0.0 {
            break;
        }
        y.iter_mut().for_each(|v| *v /= s);
        // clear roundoff-level negatives on tiny components
        y.iter_mut().for_each(|v| *v = v.max(0.0));
        normalize(&mut y);
        x = y;
    }
    x
}

fn perron_vector(m: Sparse) -> Result<Vec<f64>> {
    let (x, converged) = power(m, POWER_TOL);
    if m.n <= DENSE_LIMIT {
        Ok(refine(m, x))
    } else if converged {
        Ok(x)
    } else {
        Err(Error::NonConvergence("power iteration"))
    }
}

fn two_by_two(a: f64, b: f64, c: f64, d: f64) -> (f64, Vec<f64>) {
    let half = 0.5 * (a - d);
    let root = (half * half + b * c).sqrt();
    let rho = 0.5 * (a + d) + root;
    // pick the cancellation-free form of the eigenvector
    let mut r = if a >= d { vec![half + root, c] } else { vec![b, root - half] };
    normalize(&mut r);
    (rho, r)
}

/// Perron root with right and left eigenvectors of an irreducible
/// nonnegative matrix `M[u][v] = Σ weights` over edges `(u, v)`.
pub fn perron(n: usize, edges: &[(usize, usize)], weights: &[f64]) -> Result<PerronPair> {
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if n == 1 {
        let rho: f64 = weights.iter().sum();
        return Ok(PerronPair {
            rho,
            right: vec![1.0],
            left: vec![1.0],
        });
    }
    if n == 2 {
        let mut m = [[0.0; 2]; 2];
        for (&(u, v), &w) in edges.iter().zip(weights) {
            m[u][v] += w;
        }
        let (rho, right) = two_by_two(m[0][0], m[0][1], m[1][0], m[1][1]);
        let (_, left) = two_by_two(m[0][0], m[1][0], m[0][1], m[1][1]);
        return Ok(PerronPair { rho, right, left });
    }
    let forward = Sparse {
        n,
        edges,
        weights,
        transposed: false,
    };
    let backward = Sparse {
        transposed: true,
        ..forward
    };
    let right = perron_vector(forward)?;
    let left = perron_vector(backward)?;
    let rho = forward.rayleigh(&right);
    Ok(PerronPair { rho, right, left })
}

/// `max_i |(x M)_i - rho x_i|` relative to `max x`.
pub fn left_residual(n: usize, edges: &[(usize, usize)], weights: &[f64], pair: &PerronPair) -> f64 {
    let mut y = vec![0.0; n];
    Sparse {
        n,
        edges,
        weights,
        transposed: true,
    }
    .apply(&pair.left, &mut y);
    let scale = pair.left.iter().copied().fold(0.0, f64::max);
    y.iter()
        .zip(&pair.left)
        .fold(0.0_f64, |m, (a, b)| m.max((a - pair.rho * b).abs()))
        / (scale * pair.rho.max(f64::MIN_POSITIVE))
}
