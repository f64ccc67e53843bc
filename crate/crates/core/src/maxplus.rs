//! Max-plus graph algorithms on edge lists: maximum cycle mean, longest
//! paths under nonpositive cycles, critical subgraphs and cycle listing.
//!
//! Graphs are given as a vertex count plus an edge list `(from, to)` with a
//! parallel weight slice.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Arithmetic needed by the cycle-mean recurrence.
pub trait CycleWeight: Clone + PartialOrd {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn div_len(&self, len: usize) -> Self;
}

impl CycleWeight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn div_len(&self, len: usize) -> Self {
        self / len as f64
    }
}

impl CycleWeight for BigRational {
    fn zero() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn div_len(&self, len: usize) -> Self {
        self / BigRational::from_integer(BigInt::from(len))
    }
}

fn relax_row<W: CycleWeight>(edges: &[(usize, usize)], weights: &[W], prev: &[Option<W>], next: &mut [Option<W>]) {
    next.iter_mut().for_each(|x| *x = None);
    for (&(u, v), w) in edges.iter().zip(weights) {
        if let Some(du) = &prev[u] {
            let cand = du.plus(w);
            match &next[v] {
                Some(cur) if *cur >= cand => {}
                _ => next[v] = Some(cand),
            }
        }
    }
}

/// Maximum mean weight over all cycles, by Karp's recurrence started from
/// every vertex at once. `None` when the graph is acyclic.
///
/// `D_j(v)` is the heaviest walk with exactly `j` edges ending at `v`; the
/// answer is `max_v min_{j<n} (D_n(v) - D_j(v)) / (n - j)`. Rows are
/// recomputed in a second sweep so memory stays linear in `n`.
pub fn max_cycle_mean<W: CycleWeight>(n: usize, edges: &[(usize, usize)], weights: &[W]) -> Option<W> {
    assert_eq!(edges.len(), weights.len());
    if n == 0 {
        return None;
    }
    let mut prev: Vec<Option<W>> = vec![Some(W::zero()); n];
    let mut next: Vec<Option<W>> = vec![None; n];
    for _ in 0..n {
        relax_row(edges, weights, &prev, &mut next);
        std::mem::swap(&mut prev, &mut next);
    }
    let last = prev;
    let mut best: Vec<Option<W>> = vec![None; n];
    let mut row: Vec<Option<W>> = vec![Some(W::zero()); n];
    let mut scratch: Vec<Option<W>> = vec![None; n];
    for j in 0..n {
        for v in 0..n {
            if let (Some(dn), Some(dj)) = (&last[v], &row[v]) {
                let ratio = dn.minus(dj).div_len(n - j);
                match &best[v] {
                    Some(b) if *b <= ratio => {}
                    _ => best[v] = Some(ratio),
                }
            }
        }
        relax_row(edges, weights, &row, &mut scratch);
        std::mem::swap(&mut row, &mut scratch);
    }
    best.into_iter()
        .flatten()
        .fold(None, |acc: Option<W>, x| match acc {
            Some(a) if a >= x => Some(a),
            _ => Some(x),
        })
}

/// Strongly connected component id per vertex (iterative Tarjan). Only
/// edges with `mask[e]` set are used.
pub fn scc(n: usize, edges: &[(usize, usize)], mask: &[bool]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if mask[e] {
            adj[u].push(v);
        }
    }
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, next child position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Edges of `mask` lying on some cycle made of `mask` edges.
pub fn recurrent_edges(n: usize, edges: &[(usize, usize)], mask: &[bool]) -> Vec<bool> {
    let comp = scc(n, edges, mask);
    edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| mask[e] && comp[u] == comp[v])
        .collect()
}

/// Improvement below which a relaxation step is ignored: relative to the
/// value and to the round-off a path of `n` edges of size `scale` can carry.
fn slack(x: f64, n: usize, scale: f64) -> f64 {
    1e-13 * (1.0 + x.abs() + scale) + 4.0 * f64::EPSILON * n as f64 * scale
}

/// Longest-path relaxation with the given initial values, valid when every
/// cycle of `weights` is nonpositive. Returns the number of passes used.
fn relax_longest(
    n: usize,
    edges: &[(usize, usize)],
    weights: &[f64],
    values: &mut [f64],
) -> Result<usize> {
    let cap = n + 1;
    let scale = weights.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    for pass in 0..=cap {
        let mut changed = false;
        for (&(u, v), &w) in edges.iter().zip(weights) {
            if values[u] == f64::NEG_INFINITY {
                continue;
            }
            let cand = values[u] + w;
            if values[v] == f64::NEG_INFINITY || cand > values[v] + slack(values[v], n, scale) {
                values[v] = cand;
                changed = true;
            }
        }
        if !changed {
            return Ok(pass);
        }
    }
    Err(Error::NonConvergence("longest-path relaxation"))
}

/// A calibrated potential for `weights - m0` and the critical structure
/// found on the way.
#[derive(Clone, Debug)]
pub struct Calibration {
    /// Normalized so that the maximum is 0.
    pub values: Vec<f64>,
    pub critical_vertices: Vec<bool>,
    pub critical_edges: Vec<bool>,
}

/// Compute `V` with `max_{u→v} [V(u) + w(u→v) - m0] = V(v)` for every `v`.
///
/// A first relaxation from all vertices gives a subsolution; edges tight
/// for it (within `tol`) that lie on tight cycles form the critical
/// subgraph. The calibrated `V` is the longest-path value from the
/// critical vertices.
pub fn calibrate(n: usize, edges: &[(usize, usize)], weights: &[f64], m0: f64, tol: f64) -> Result<Calibration> {
    let reduced: Vec<f64> = weights.iter().map(|w| w - m0).collect();
    let mut sub = vec![0.0; n];
    relax_longest(n, edges, &reduced, &mut sub)?;
    let tight: Vec<bool> = edges
        .iter()
        .zip(&reduced)
        .map(|(&(u, v), &w)| w + sub[u] - sub[v] >= -tol)
        .collect();
    let critical_edges = recurrent_edges(n, edges, &tight);
    let mut critical_vertices = vec![false; n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if critical_edges[e] {
            critical_vertices[u] = true;
            critical_vertices[v] = true;
        }
    }
    if !critical_vertices.iter().any(|&c| c) {
        return Err(Error::NoCycle);
    }
    let mut values: Vec<f64> = critical_vertices
        .iter()
        .map(|&c| if c { 0.0 } else { f64::NEG_INFINITY })
        .collect();
    relax_longest(n, edges, &reduced, &mut values)?;
    if let Some(v) = values.iter().position(|&x| x == f64::NEG_INFINITY) {
        return Err(Error::UnreachableVertex(v.to_string()));
    }
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter_mut().for_each(|x| *x -= top);
    Ok(Calibration {
        values,
        critical_vertices,
        critical_edges,
    })
}

/// Simple cycles of the subgraph `mask`, each listed once starting from its
/// smallest vertex, in DFS order from ascending start vertices. Stops after
/// `max_cycles` cycles or `max_steps` DFS steps; the flag reports
/// truncation.
pub fn simple_cycles(
    n: usize,
    edges: &[(usize, usize)],
    mask: &[bool],
    max_cycles: usize,
    max_steps: usize,
) -> (Vec<Vec<usize>>, bool) {
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if mask[e] {
            adj[u].push(v);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    let mut cycles = Vec::new();
    let mut steps = 0usize;
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = vec![start];
        let mut pos = vec![0usize];
        on_path[start] = true;
        while let Some(&v) = path.last() {
            steps += 1;
            if steps > max_steps || cycles.len() >= max_cycles {
                return (cycles, true);
            }
            let i = *pos.last().unwrap();
            if i < adj[v].len() {
                *pos.last_mut().unwrap() += 1;
                let w = adj[v][i];
                if w == start {
                    cycles.push(path.clone());
                } else if w > start && !on_path[w] {
                    on_path[w] = true;
                    path.push(w);
                    pos.push(0);
                }
            } else {
                on_path[v] = false;
                path.pop();
                pos.pop();
            }
        }
    }
    (cycles, false)
}

/// `S[u][v]` = heaviest nonempty walk from `u` to `v`, `None` when there is
/// none. Assumes every cycle is nonpositive (Floyd–Warshall).
pub fn path_closure(n: usize, edges: &[(usize, usize)], weights: &[f64]) -> Vec<Vec<Option<f64>>> {
    let mut s: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for (&(u, v), &w) in edges.iter().zip(weights) {
        if s[u][v].is_none_or(|cur| w > cur) {
            s[u][v] = Some(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(sik) = s[i][k] else { continue };
            for j in 0..n {
                if let Some(skj) = s[k][j] {
                    let cand = sik + skj;
                    if s[i][j].is_none_or(|cur| cand > cur) {
                        s[i][j] = Some(cand);
                    }
                }
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn karp_small_graphs() {
        // two self-loops and a 2-cycle
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)];
        assert_eq!(max_cycle_mean(2, &edges, &[0.0, 1.0, 1.0, 0.0]), Some(1.0));
        assert_eq!(max_cycle_mean(2, &edges, &[0.0, 0.0, -1.0, -1.0]), Some(0.0));
        assert_eq!(
            max_cycle_mean(2, &edges, &[r(1, 3), r(1, 2), r(1, 5), r(0, 1)]),
            Some(r(7, 20))
        );
        assert_eq!(max_cycle_mean::<f64>(2, &[(0, 1)], &[1.0]), None);
    }

    #[test]
    fn karp_cycle_behind_a_tail() {
        // 0 → 1 → 2 → 3 → 1 with a heavy tail edge
        let edges = [(0, 1), (1, 2), (2, 3), (3, 1)];
        let m = max_cycle_mean(4, &edges, &[100.0, 1.0, 2.0, 3.0]).unwrap();
        assert!((m - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scc_and_cycles() {
        let edges = [(0, 1), (1, 0), (1, 2), (2, 2), (2, 3)];
        let mask = [true; 5];
        let c = scc(4, &edges, &mask);
        assert_eq!(c[0], c[1]);
        assert_ne!(c[1], c[2]);
        assert_ne!(c[2], c[3]);
        assert_eq!(
            recurrent_edges(4, &edges, &mask),
            vec![true, true, false, true, false]
        );
        let (cycles, truncated) = simple_cycles(4, &edges, &mask, 100, 1000);
        assert!(!truncated);
        assert_eq!(cycles, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn calibrate_two_vertices() {
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)];
        // weight of u → v is A(u) with A = (0, -1)
        let cal = calibrate(2, &edges, &[0.0, 0.0, -1.0, -1.0], 0.0, 1e-9).unwrap();
        assert_eq!(cal.values, vec![0.0, 0.0]);
        assert_eq!(cal.critical_vertices, vec![true, false]);
        assert_eq!(cal.critical_edges, vec![true, false, false, false]);
    }

    #[test]
    fn calibrate_rejects_unreachable() {
        let edges = [(0, 0), (1, 1)];
        assert!(matches!(
            calibrate(2, &edges, &[0.0, -1.0], 0.0, 1e-9),
            Err(Error::UnreachableVertex(_))
        ));
    }

    #[test]
    fn closure_examples() {
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let s = path_closure(2, &edges, &[0.0, 0.0, -1.0, -1.0]);
        assert_eq!(s[0][0], Some(0.0));
        assert_eq!(s[0][1], Some(0.0));
        assert_eq!(s[1][0], Some(-1.0));
        assert_eq!(s[1][1], Some(-1.0));
        let s = path_closure(2, &[(0, 1)], &[2.0]);
        assert_eq!(s[1][0], None);
    }
}
