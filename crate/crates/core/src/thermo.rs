//! Transfer operators, pressure and equilibrium states of locally constant
//! potentials.
//!
//! For a depth-`k` potential the transfer matrix lives on `k`-words with
//! `L[u][v] = exp(t·A(u))` along graph edges. Before exponentiating, the
//! weights are shifted by their maximum cycle mean `m_t` and conjugated by a
//! calibrated sub-action, so every entry of the working matrix is `exp(B)`
//! with `B ≤ 0` and the critical entries are exactly 1. This keeps large
//! `t` free of overflow: `P(tA) = m_t + log ρ(L')`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maxplus;
use crate::measure::InvariantMeasure;
use crate::optimize;
use crate::perron::{self, PerronPair};
use crate::potential::{affine_combine, Potential};
use crate::shift::WordGraph;

pub use crate::measure::measure_distance;

/// Relative tolerance used to pick out critical edges; any choice gives an
/// exact similarity transform, it only decides where relaxation starts.
const STABILIZE_TOL: f64 = 1e-9;

/// `exp(t·A)`-weighted graph on the potential's words, stabilized.
struct Stabilized {
    graph: WordGraph,
    shift: f64,
    /// `exp(B)` per edge.
    entries: Vec<f64>,
}

fn stabilize_component(n: usize, edges: &[(usize, usize)], weights: &[f64]) -> Result<(f64, Vec<f64>)> {
    let m = maxplus::max_cycle_mean(n, edges, weights).ok_or(Error::NoCycle)?;
    let scale = weights.iter().fold(1.0_f64, |s, w| s.max(w.abs()));
    let cal = maxplus::calibrate(n, edges, weights, m, STABILIZE_TOL * scale)?;
    let entries = edges
        .iter()
        .zip(weights)
        .map(|(&(u, v), &w)| (w - m + cal.values[u] - cal.values[v]).min(0.0).exp())
        .collect();
    Ok((m, entries))
}

fn transfer_weights(a: &Potential, t: f64) -> Result<(WordGraph, Vec<f64>)> {
    let g = WordGraph::new(a.subshift(), a.depth())?;
    let w = g.edges().iter().map(|&(u, _)| t * a.values()[u]).collect();
    Ok((g, w))
}

/// Nontrivial strongly connected pieces as (vertex list, local edges, edge ids).
type Piece = (Vec<usize>, Vec<(usize, usize)>, Vec<usize>);

fn components(g: &WordGraph) -> Vec<Piece> {
    let all = vec![true; g.edge_count()];
    let comp = maxplus::scc(g.vertex_count(), g.edges(), &all);
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    let mut local = vec![0usize; g.vertex_count()];
    for (v, &c) in comp.iter().enumerate() {
        local[v] = members[c].len();
        members[c].push(v);
    }
    let mut pieces: Vec<Piece> = members.into_iter().map(|m| (m, Vec::new(), Vec::new())).collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if comp[u] == comp[v] {
            pieces[comp[u]].1.push((local[u], local[v]));
            pieces[comp[u]].2.push(e);
        }
    }
    pieces.into_iter().filter(|p| !p.1.is_empty()).collect()
}

fn stabilized(a: &Potential, t: f64) -> Result<Stabilized> {
    let (graph, weights) = transfer_weights(a, t)?;
    let (shift, entries) = stabilize_component(graph.vertex_count(), graph.edges(), &weights)?;
    Ok(Stabilized { graph, shift, entries })
}

/// `P(tA)`, the log of the spectral radius of the transfer matrix. For a
/// reducible graph this is the maximum over its irreducible pieces.
pub fn pressure(a: &Potential, t: f64) -> Result<f64> {
    let (graph, weights) = transfer_weights(a, t)?;
    let pieces = components(&graph);
    let mut best = f64::NEG_INFINITY;
    for (verts, edges, ids) in &pieces {
        let w: Vec<f64> = ids.iter().map(|&e| weights[e]).collect();
        let (shift, entries) = stabilize_component(verts.len(), edges, &w)?;
        let pair = perron::perron(verts.len(), edges, &entries)?;
        best = best.max(shift + pair.rho.ln());
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::NoCycle);
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct ThermoState {
    pub t: f64,
    pub pressure: f64,
    pub equilibrium: InvariantMeasure,
    pub entropy: f64,
    pub energy: f64,
    /// `|P - h - t·energy|`.
    pub variational_residual: f64,
    /// Relative residual of the left eigenvector equation.
    pub eigen_residual: f64,
}

/// Equilibrium state of `tA`: the Markov measure built from the Perron
/// vectors of the transfer matrix. Requires an irreducible word graph.
pub fn equilibrium(a: &Potential, t: f64) -> Result<ThermoState> {
    let s = stabilized(a, t).map_err(|e| match e {
        Error::UnreachableVertex(_) => Error::NotMixing,
        other => other,
    })?;
    let g = &s.graph;
    let n = g.vertex_count();
    let all = vec![true; g.edge_count()];
    let comp = maxplus::scc(n, g.edges(), &all);
    if comp.iter().any(|&c| c != comp[0]) {
        return Err(Error::NotMixing);
    }
    let PerronPair { rho, right, left } = perron::perron(n, g.edges(), &s.entries)?;
    let eigen_residual = perron::left_residual(n, g.edges(), &s.entries, &PerronPair {
        rho,
        right: right.clone(),
        left: left.clone(),
    });
    let mut probs = vec![0.0; g.edge_count()];
    for u in 0..n {
        let out = g.out_edges(u);
        let row: f64 = out.iter().map(|&e| s.entries[e] * right[g.edge(e).1]).sum();
        if right[u] > 0.0 && row > 0.0 && row.is_finite() {
            out.iter().for_each(|&e| probs[e] = s.entries[e] * right[g.edge(e).1] / row);
        } else {
            // underflowed state: carries no stationary mass
            out.iter().for_each(|&e| probs[e] = 1.0 / out.len() as f64);
        }
    }
    let mut stationary: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l * r).collect();
    let total: f64 = stationary.iter().sum();
    stationary.iter_mut().for_each(|x| *x /= total);
    let entropy: f64 = -g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, _))| {
            let p = probs[e];
            if p > 0.0 && stationary[u] > 0.0 {
                stationary[u] * p * p.ln()
            } else {
                0.0
            }
        })
        .sum::<f64>();
    let energy: f64 = stationary.iter().zip(a.values()).map(|(p, v)| p * v).sum();
    let pressure = s.shift + rho.ln();
    let equilibrium = InvariantMeasure::markov(a.subshift(), s.graph.clone(), probs, stationary)?;
    Ok(ThermoState {
        t,
        pressure,
        equilibrium,
        entropy,
        energy,
        variational_residual: (pressure - entropy - t * energy).abs(),
        eigen_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeReport {
    pub steps: Vec<f64>,
    /// `|(P(A+hB) - P(A-hB))/(2h) - ∫B dμ_A|` per step.
    pub errors: Vec<f64>,
    /// Ratios of consecutive errors; about 4 for a second-order error.
    pub ratios: Vec<f64>,
    pub integral: f64,
    /// True when every ratio lies in `[3.5, 4.5]` or all errors are at
    /// round-off level.
    pub passes: bool,
}

/// Central differences of `P` at `A` in direction `B` for `h`, `h/2`, `h/4`.
pub fn pressure_derivative_check(a: &Potential, b: &Potential, h: f64) -> Result<DerivativeReport> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let eq = equilibrium(a, 1.0)?;
    let integral = eq.equilibrium.integrate(b);
    let steps = vec![h, h / 2.0, h / 4.0];
    let mut errors = Vec::new();
    for &s in &steps {
        let plus = pressure(&affine_combine(b, s, 0.0, Some(a))?, 1.0)?;
        let minus = pressure(&affine_combine(b, -s, 0.0, Some(a))?, 1.0)?;
        errors.push(((plus - minus) / (2.0 * s) - integral).abs());
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let noise = 1e-10 * (1.0 + integral.abs());
    let passes = errors.iter().all(|&e| e <= noise) || ratios.iter().all(|r| (3.5..=4.5).contains(r));
    Ok(DerivativeReport {
        steps,
        errors,
        ratios,
        integral,
        passes,
    })
}

/// `A - P(A)`.
pub fn normalize_pressure(a: &Potential) -> Result<Potential> {
    let p = pressure(a, 1.0)?;
    affine_combine(a, 1.0, -p, None)
}

#[derive(Clone, Debug)]
pub struct ZeroTempScan {
    pub states: Vec<ThermoState>,
    pub m0: f64,
    /// Set when the maximizing cycle is unique.
    pub candidate: Option<InvariantMeasure>,
    /// Distance from each state to the candidate.
    pub distances: Vec<Option<f64>>,
    pub energy_nondecreasing: bool,
}

impl ZeroTempScan {
    /// CSV with columns `t,pressure,entropy,energy,distance_to_candidate`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,pressure,entropy,energy,distance_to_candidate\n");
        for (s, d) in self.states.iter().zip(&self.distances) {
            let dist = d.map_or_else(|| "nan".to_string(), |d| format!("{d:.16e}"));
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{dist}\n",
                s.t, s.pressure, s.entropy, s.energy
            ));
        }
        out
    }
}

/// Equilibrium states along an increasing grid of inverse temperatures.
/// Grid points are computed in parallel.
pub fn zero_temp_scan(a: &Potential, t_grid: &[f64], depth_cap: usize) -> Result<ZeroTempScan> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[0] >= w[1]) || t_grid[0] <= 0.0 {
        return Err(Error::InvalidArgument("t grid must be nonempty, positive and increasing".into()));
    }
    let states: Vec<ThermoState> = t_grid.par_iter().map(|&t| equilibrium(a, t)).collect::<Result<_>>()?;
    let r = optimize::max_mean(a)?;
    let candidate = if r.is_unique() {
        Some(InvariantMeasure::periodic(a.subshift(), r.winner())?)
    } else {
        None
    };
    let distances = states
        .iter()
        .map(|s| {
            candidate
                .as_ref()
                .map(|c| measure_distance(&s.equilibrium, c, depth_cap))
                .transpose()
        })
        .collect::<Result<_>>()?;
    let slack = 1e-12 * (1.0 + r.m0.abs());
    let energy_nondecreasing = states.windows(2).all(|w| w[1].energy >= w[0].energy - slack);
    Ok(ZeroTempScan {
        states,
        m0: r.m0,
        candidate,
        distances,
        energy_nondecreasing,
    })
}
