//! Degree-2 expanding circle maps and their symbolic codings.
//!
//! A map is handled through its lift `F` on `[0, 1]`, strictly increasing
//! with `F(0) = 0` and `F(1) = 2`, so `0` is a fixed point. The coding
//! `θ_f` sends the dyadic point `x` to the point of the circle with the same
//! position in the ordered preimage tree of `z = F⁻¹(1)`; it conjugates the
//! doubling map `T` to `f`. Dyadics are stored as a grid `θ(j / 2^L)`, built
//! one level at a time from `θ(x/2) = F⁻¹(θ(x))` and
//! `θ((x+1)/2) = F⁻¹(θ(x) + 1)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize;
use crate::potential::Potential;
use crate::shift::{MetricParams, Subshift, Symbol, Word};
use crate::thermo;

/// Largest grid level accepted by the coding and reconstruction routines.
pub const MAX_LEVEL: usize = 24;

const PRESSURE_TOL: f64 = 1e-9;

/// On-disk form of a map.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapFile {
    /// Knots `[x, F(x)]` of a piecewise linear lift, `x` from 0 to 1.
    Table { knots: Vec<[f64; 2]> },
    Builtin {
        name: String,
        #[serde(default)]
        epsilon: f64,
    },
}

#[derive(Clone, Debug)]
pub enum CircleMap {
    Doubling,
    /// Lift `2x + ε sin(2πx)/(2π)`, derivative `2 + ε cos(2πx)`.
    PerturbedDoubling { epsilon: f64 },
    /// Piecewise linear lift through the knots.
    Table { xs: Vec<f64>, ys: Vec<f64> },
    /// `x ↦ F(x + offset) - offset - turns`, moving a fixed point to 0.
    Rotated {
        inner: Box<CircleMap>,
        offset: f64,
        turns: f64,
    },
}

impl CircleMap {
    pub fn perturbed_doubling(epsilon: f64) -> Result<Self> {
        if !(epsilon.abs() < 1.0) {
            return Err(Error::InvalidMap(format!("|epsilon| = {} is not below 1", epsilon.abs())));
        }
        Ok(CircleMap::PerturbedDoubling { epsilon })
    }

    /// Piecewise linear map from lift knots. A map fixing some point other
    /// than 0 is rotated so that its fixed point sits at 0.
    pub fn table(knots: &[[f64; 2]]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidMap("a table needs at least two knots".into()));
        }
        let xs: Vec<f64> = knots.iter().map(|k| k[0]).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k[1]).collect();
        if xs[0] != 0.0 || *xs.last().unwrap() != 1.0 {
            return Err(Error::InvalidMap("knots must start at x = 0 and end at x = 1".into()));
        }
        if (ys.last().unwrap() - ys[0] - 2.0).abs() > 1e-12 {
            return Err(Error::InvalidMap("the lift must increase by exactly 2".into()));
        }
        for i in 1..xs.len() {
            let dx = xs[i] - xs[i - 1];
            if !(dx > 0.0) {
                return Err(Error::InvalidMap(format!("knot {i} does not increase x")));
            }
            if !((ys[i] - ys[i - 1]) / dx > 1.0) {
                return Err(Error::InvalidMap(format!("segment {i} is not expanding")));
            }
        }
        let shift = ys[0].floor();
        let ys: Vec<f64> = ys.iter().map(|y| y - shift).collect();
        let base = CircleMap::Table { xs, ys };
        if base.lift(0.0) == 0.0 {
            return Ok(base);
        }
        // F(x) - x increases from F(0) ∈ (0,1) to F(0) + 1 on [0, 1]
        let g = |x: f64| base.lift(x) - x - 1.0;
        let offset = bisect(g, 0.0, 1.0)?;
        Ok(CircleMap::Rotated {
            inner: Box::new(base),
            offset,
            turns: 1.0,
        })
    }

    pub fn from_file(file: &MapFile) -> Result<Self> {
        match file {
            MapFile::Table { knots } => Self::table(knots),
            MapFile::Builtin { name, epsilon } => match name.as_str() {
                "doubling" => Ok(CircleMap::Doubling),
                "perturbed_doubling" => Self::perturbed_doubling(*epsilon),
                other => Err(Error::InvalidMap(format!("unknown builtin map {other:?}"))),
            },
        }
    }

    /// The lift on `[0, 1]`.
    pub fn lift(&self, x: f64) -> f64 {
        match self {
            CircleMap::Doubling => 2.0 * x,
            CircleMap::PerturbedDoubling { epsilon } => {
                let tau = std::f64::consts::TAU;
                2.0 * x + epsilon * (tau * x).sin() / tau
            }
            CircleMap::Table { xs, ys } => {
                let i = segment(xs, x);
                ys[i] + (ys[i + 1] - ys[i]) * (x - xs[i]) / (xs[i + 1] - xs[i])
            }
            CircleMap::Rotated { inner, offset, turns } => inner.lift_extended(x + offset) - offset - turns,
        }
    }

    /// The lift on `[0, 2]`, using `F(x + 1) = F(x) + 2`.
    fn lift_extended(&self, x: f64) -> f64 {
        if x > 1.0 {
            self.lift(x - 1.0) + 2.0
        } else {
            self.lift(x)
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let x = x.rem_euclid(1.0);
        match self {
            CircleMap::Doubling => 2.0,
            CircleMap::PerturbedDoubling { epsilon } => 2.0 + epsilon * (std::f64::consts::TAU * x).cos(),
            CircleMap::Table { xs, ys } => {
                let i = segment(xs, x);
                (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
            }
            CircleMap::Rotated { inner, offset, .. } => inner.derivative(x + offset),
        }
    }

    /// `f(x)` on the circle `[0, 1)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.lift(x.rem_euclid(1.0)).rem_euclid(1.0)
    }

    /// Smallest derivative over a uniform grid of `samples` points.
    pub fn min_derivative(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| self.derivative(i as f64 / samples as f64))
            .fold(f64::INFINITY, f64::min)
    }

    /// `F⁻¹(target)` for `target ∈ [0, 2]`, searched in `[lo, hi]`.
    fn inverse_in(&self, target: f64, lo: f64, hi: f64) -> Result<f64> {
        if let CircleMap::Table { xs, ys } = self {
            let i = ys.partition_point(|&y| y <= target).clamp(1, ys.len() - 1) - 1;
            let x = xs[i] + (target - ys[i]) * (xs[i + 1] - xs[i]) / (ys[i + 1] - ys[i]);
            return Ok(x.clamp(lo, hi));
        }
        bisect(|x| self.lift(x) - target, lo, hi)
    }
}

fn segment(xs: &[f64], x: f64) -> usize {
    xs.partition_point(|&k| k <= x).clamp(1, xs.len() - 1) - 1
}

/// Root of an increasing function on `[lo, hi]`, to machine precision.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (glo, ghi) = (g(lo), g(hi));
    if glo > 0.0 || ghi < 0.0 {
        return Err(Error::RootFindingFailure(format!(
            "no sign change on [{lo}, {hi}] (values {glo}, {ghi}); the branch is not monotone"
        )));
    }
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `θ_f` on the dyadic grid of level `level`.
#[derive(Clone, Debug)]
pub struct CodingTable {
    level: usize,
    /// `theta[j] = θ_f(j / 2^level)`, `theta[0] = 0`, `theta[2^level] = 1`.
    theta: Vec<f64>,
}

impl CodingTable {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Code depth: preimages `z_α` with `|α| ≤ depth` are available.
    pub fn depth(&self) -> usize {
        self.level - 1
    }

    /// `θ_f(j / 2^level)` for a coarser or equal level.
    pub fn at(&self, j: usize, level: usize) -> f64 {
        self.theta[j << (self.level - level)]
    }

    /// The coded preimage `z_α(f)`; the root `z` has the empty code.
    pub fn code_point(&self, alpha: &[Symbol]) -> f64 {
        // z_{α₁…αₙ} sits at the dyadic 0.αₙ…α₁1
        let n = alpha.len();
        let j = alpha.iter().rev().fold(0usize, |acc, &a| 2 * acc + a as usize) * 2 + 1;
        self.at(j, n + 1)
    }

    /// `θ_f(0.w1)`, the coded midpoint of the cylinder `[w]`.
    pub fn cylinder_point(&self, w: &[Symbol]) -> f64 {
        let j = w.iter().fold(0usize, |acc, &a| 2 * acc + a as usize) * 2 + 1;
        self.at(j, w.len() + 1)
    }
}

/// Ordered preimage tree of `f` down to code depth `depth`.
pub fn coding_table(f: &CircleMap, depth: usize) -> Result<CodingTable> {
    let level = depth + 1;
    if level > MAX_LEVEL {
        return Err(Error::DepthBudget {
            depth,
            budget: MAX_LEVEL - 1,
        });
    }
    let mut theta = vec![0.0, 1.0];
    for l in 1..=level {
        let half = 1usize << (l - 1);
        let size = 1usize << l;
        let mut next = vec![0.0; size + 1];
        for j in 0..=half {
            next[2 * j] = theta[j];
        }
        let odd: Vec<f64> = (0..half)
            .into_par_iter()
            .map(|i| {
                let j = 2 * i + 1;
                // j / 2^l = x/2 with x = j / 2^(l-1) on the previous grid
                let target = if j < half {
                    theta[j]
                } else {
                    theta[j - half] + 1.0
                };
                let (lo, hi) = (theta[i], theta[i + 1]);
                f.inverse_in(target, lo, hi)
            })
            .collect::<Result<_>>()?;
        for (i, x) in odd.into_iter().enumerate() {
            next[2 * i + 1] = x;
        }
        if next.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::RootFindingFailure(format!("coding lost monotonicity at level {l}")));
        }
        theta = next;
    }
    Ok(CodingTable { level, theta })
}

/// `max |f(θ(x)) - θ(T x)|` over the grid, measured on the circle.
pub fn conjugacy_residual(f: &CircleMap, table: &CodingTable) -> f64 {
    let size = table.theta.len() - 1;
    (0..size)
        .map(|j| {
            let lhs = f.eval(table.theta[j]);
            let rhs = table.theta[(2 * j) % size];
            let d = (lhs - rhs).rem_euclid(1.0);
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

/// Empirical Hölder exponent of a grid function: least-squares slope of
/// `log max_j |θ(j+1) - θ(j)|` against `log 2^{-l}` over levels `1..=level`.
/// An estimate, not a certified bound.
pub fn holder_estimate(theta: &[f64], level: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (1..=level)
        .map(|l| {
            let step = 1usize << (level - l);
            let gap = (0..(1usize << l))
                .map(|j| theta[(j + 1) * step] - theta[j * step])
                .fold(0.0, f64::max);
            (-(l as f64) * 2f64.ln(), gap.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, Serialize)]
pub struct MapPotentialReport {
    pub depth: usize,
    /// Largest oscillation of `-log f'∘θ_f` across finer samples inside a
    /// cylinder.
    pub tail_bound: f64,
    /// Pressure of the discretized potential; zero up to `tail_bound`.
    pub pressure: f64,
    pub pressure_within_tail: bool,
    pub conjugacy_residual: f64,
    pub holder_estimate: f64,
}

/// `-log f'∘θ_f` as a depth-`depth` potential on the full 2-shift, valued at
/// the coded midpoint of each cylinder.
pub fn potential_from_map(f: &CircleMap, depth: usize) -> Result<(Potential, MapPotentialReport)> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let table = coding_table(f, depth + 1)?;
    let spec = Subshift::full(2);
    let g = |x: f64| -f.derivative(x).ln();
    let a = Potential::from_fn(&spec, MetricParams::default(), depth, |w| g(table.cylinder_point(w)))?;
    let fine = table.level();
    let per = 1usize << (fine - depth);
    let tail_bound = (0..(1usize << depth))
        .map(|c| {
            let vals: Vec<f64> = (0..=per).map(|i| g(table.theta[c * per + i])).collect();
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .fold(0.0, f64::max);
    let pressure = thermo::pressure(&a, 1.0)?;
    let report = MapPotentialReport {
        depth,
        tail_bound,
        pressure,
        pressure_within_tail: pressure.abs() <= tail_bound + PRESSURE_TOL,
        conjugacy_residual: conjugacy_residual(f, &table),
        holder_estimate: holder_estimate(&table.theta, fine),
    };
    Ok((a, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovResult {
    /// Itinerary of the maximizing orbit.
    #[serde(serialize_with = "ser_word")]
    pub cycle: Word,
    /// The orbit on the circle, starting at the point with itinerary `cycle^∞`.
    pub orbit: Vec<f64>,
    /// `(1/p) Σ log f'` along `orbit`.
    pub exponent: f64,
    /// Maximal average of the discretized `log f'∘θ_f`.
    pub shift_average: f64,
    pub tail_bound: f64,
    /// Maximizing cycles at this depth code more than one circle orbit.
    /// Itineraries such as `0^∞` and `1^∞` coding the same fixed point
    /// count once.
    pub ambiguous: bool,
    #[serde(serialize_with = "ser_word")]
    pub brute_force_cycle: Word,
    pub brute_force_average: f64,
}

fn ser_word<S: serde::Serializer>(w: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::shift::word_to_string(w))
}

/// Circle points of the periodic orbit with itinerary `cycle^∞`, as the
/// fixed point of the composed inverse branches.
pub fn periodic_orbit(f: &CircleMap, cycle: &[Symbol]) -> Result<Vec<f64>> {
    let p = cycle.len();
    let branch = |b: Symbol, y: f64| f.inverse_in(y + b as f64, 0.0, 1.0);
    let mut y = 0.5;
    for _ in 0..10_000 {
        let mut x = y;
        for &b in cycle.iter().rev() {
            x = branch(b, x)?;
        }
        let done = (x - y).abs() <= 1e-15;
        y = x;
        if done {
            break;
        }
    }
    let mut orbit = Vec::with_capacity(p);
    let mut x = y;
    for _ in 0..p {
        orbit.push(x);
        x = f.eval(x);
    }
    Ok(orbit)
}

/// Orbit points reduced mod 1 and sorted.
fn circle_orbit_key(orbit: &[f64]) -> Vec<f64> {
    let mut o: Vec<f64> = orbit
        .iter()
        .map(|x| {
            let y = x.rem_euclid(1.0);
            if 1.0 - y < 1e-12 { 0.0 } else { y }
        })
        .collect();
    o.sort_by(f64::total_cmp);
    o
}

fn same_orbit(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
}

/// Maximize the Lyapunov exponent over periodic orbits through the coding.
pub fn lyapunov_maximize(f: &CircleMap, depth: usize, max_period: usize) -> Result<LyapunovResult> {
    let (g, report) = potential_from_map(f, depth)?;
    let a = g.map_values(|v| -v);
    let r = optimize::max_mean(&a)?;
    let cycle = r.winner().to_vec();
    let orbit = periodic_orbit(f, &cycle)?;
    let exponent = orbit.iter().map(|&x| f.derivative(x).ln()).sum::<f64>() / orbit.len() as f64;
    let bf = optimize::brute_force(&a, max_period)?;
    let mut orbits: Vec<Vec<f64>> = Vec::new();
    for c in &r.cycles {
        let o = circle_orbit_key(&periodic_orbit(f, c)?);
        if !orbits.iter().any(|p| same_orbit(p, &o)) {
            orbits.push(o);
        }
    }
    Ok(LyapunovResult {
        cycle,
        orbit,
        exponent,
        shift_average: r.m0,
        tail_bound: report.tail_bound,
        ambiguous: orbits.len() > 1 || r.truncated,
        brute_force_cycle: bf.argmax[0].clone(),
        brute_force_average: bf.best,
    })
}

/// Eigenmeasure of the dual transfer operator on dyadic cylinders.
#[derive(Clone, Debug)]
pub struct EigenMeasureTable {
    pub resolution: usize,
    /// Masses of the words of length `resolution`, lexicographically.
    pub masses: Vec<f64>,
    /// `theta[j] = θ_A(j / 2^resolution)`, the cumulative mass.
    pub theta: Vec<f64>,
}

/// Cylinder masses of the conformal measure of a zero-pressure potential on
/// the full 2-shift, for words of length `resolution`.
fn eigenmeasure(a: &Potential, resolution: usize) -> Result<Vec<f64>> {
    let k = a.depth();
    let ea = |w: &[Symbol]| a.value_of(w).expect("binary word").exp();
    // masses of (k-1)-words: right eigenvector of M[u][v] = e^{A(u·v_last)}
    let mut level: Vec<f64> = if k == 1 {
        vec![1.0]
    } else {
        let n = 1usize << (k - 1);
        let mask = n - 1;
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for u in 0..n {
            for b in 0..2 {
                let v = ((u << 1) | b) & mask;
                edges.push((u, v));
                weights.push(ea(&bits((u << 1) | b, k)));
            }
        }
        crate::perron::perron(n, &edges, &weights)?.right
    };
    let start = k.max(2) - 1;
    let start = if k == 1 { 0 } else { start };
    for len in start + 1..=resolution.max(start) {
        // mass(a·w) = e^{A((a·w)[..k])}·mass(w)
        let half = 1usize << (len - 1);
        let mut next = vec![0.0; 2 * half];
        for (j, m) in next.iter_mut().enumerate() {
            let word = bits(j, len);
            *m = ea(&word[..k]) * level[j & (half - 1)];
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|m| *m /= total);
        level = next;
    }
    if resolution < start {
        // coarser than the eigenvector level: sum out trailing symbols
        let drop = start - resolution;
        level = level.chunks(1 << drop).map(|c| c.iter().sum()).collect();
    }
    Ok(level)
}

fn bits(j: usize, len: usize) -> Word {
    (0..len).rev().map(|i| ((j >> i) & 1) as Symbol).collect()
}

/// The piecewise linear map `θ_A ∘ T ∘ θ_A⁻¹` on the grid of level
/// `resolution`, for a zero-pressure potential `A` on the full 2-shift.
pub fn map_from_potential(a: &Potential, resolution: usize) -> Result<(CircleMap, EigenMeasureTable)> {
    if a.subshift() != &Subshift::full(2) {
        return Err(Error::SubshiftMismatch);
    }
    let p = thermo::pressure(a, 1.0)?;
    if p.abs() > PRESSURE_TOL {
        return Err(Error::PressureNotZero(p));
    }
    if resolution < a.depth() {
        return Err(Error::ResolutionTooCoarse(format!(
            "resolution {resolution} is below the potential depth {}",
            a.depth()
        )));
    }
    if resolution > MAX_LEVEL {
        return Err(Error::DepthBudget {
            depth: resolution,
            budget: MAX_LEVEL,
        });
    }
    let masses = eigenmeasure(a, resolution)?;
    let size = masses.len();
    let mut theta = Vec::with_capacity(size + 1);
    let mut acc = 0.0;
    theta.push(0.0);
    for m in &masses {
        acc += m;
        theta.push(acc);
    }
    let total = acc;
    theta.iter_mut().for_each(|t| *t /= total);
    theta[size] = 1.0;
    let knots: Vec<[f64; 2]> = (0..=size)
        .map(|j| {
            let y = if 2 * j <= size {
                theta[2 * j]
            } else {
                1.0 + theta[2 * j - size]
            };
            [theta[j], y]
        })
        .collect();
    let f = CircleMap::table(&knots)?;
    Ok((
        f,
        EigenMeasureTable {
            resolution,
            masses,
            theta,
        },
    ))
}
