//! Shift-invariant probability measures with finite descriptions: periodic
//! orbit measures and stationary Markov measures on word graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::shift::{orbit_word, word_to_string, Subshift, Symbol, Word, WordGraph};

const STOCHASTIC_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub enum MeasureKind {
    /// Equidistributed measure on the orbit of `cycle^∞`.
    Periodic { cycle: Word },
    /// Stationary Markov chain on the vertices of a word graph. `probs` is
    /// indexed by edge.
    Markov {
        graph: WordGraph,
        probs: Vec<f64>,
        stationary: Vec<f64>,
    },
}

#[derive(Clone, Debug)]
pub struct InvariantMeasure {
    alphabet_size: usize,
    kind: MeasureKind,
}

impl InvariantMeasure {
    /// Measure on a periodic orbit; `cycle` is stored as its orbit word.
    pub fn periodic(spec: &Subshift, cycle: &[Symbol]) -> Result<Self> {
        if cycle.is_empty() || !spec.closes(cycle) {
            return Err(Error::InadmissibleCycle(word_to_string(cycle)));
        }
        Ok(InvariantMeasure {
            alphabet_size: spec.alphabet_size(),
            kind: MeasureKind::Periodic {
                cycle: orbit_word(cycle),
            },
        })
    }

    /// Markov measure; rows must be stochastic and `stationary` a
    /// probability vector fixed by the chain.
    pub fn markov(spec: &Subshift, graph: WordGraph, probs: Vec<f64>, stationary: Vec<f64>) -> Result<Self> {
        if probs.len() != graph.edge_count() || stationary.len() != graph.vertex_count() {
            return Err(Error::InvalidArgument("Markov data does not match the graph".into()));
        }
        if probs.iter().chain(&stationary).any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidArgument("Markov data must be finite and nonnegative".into()));
        }
        for u in 0..graph.vertex_count() {
            let row: f64 = graph.out_edges(u).iter().map(|&e| probs[e]).sum();
            if (row - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidArgument(format!(
                    "row {} sums to {row}",
                    word_to_string(graph.vertices().word(u))
                )));
            }
        }
        let total: f64 = stationary.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidArgument(format!("stationary vector sums to {total}")));
        }
        let mut pushed = vec![0.0; stationary.len()];
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            pushed[v] += stationary[u] * probs[e];
        }
        let drift = pushed
            .iter()
            .zip(&stationary)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if drift > 1e-8 {
            return Err(Error::InvalidArgument(format!("stationary vector drifts by {drift}")));
        }
        Ok(InvariantMeasure {
            alphabet_size: spec.alphabet_size(),
            kind: MeasureKind::Markov {
                graph,
                probs,
                stationary,
            },
        })
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn cycle(&self) -> Option<&[Symbol]> {
        match &self.kind {
            MeasureKind::Periodic { cycle } => Some(cycle),
            MeasureKind::Markov { .. } => None,
        }
    }

    /// Mass of the cylinder `[word]`; the empty word has mass 1.
    pub fn cylinder_mass(&self, word: &[Symbol]) -> f64 {
        if word.is_empty() {
            return 1.0;
        }
        if word.iter().any(|&s| s as usize >= self.alphabet_size) {
            return 0.0;
        }
        match &self.kind {
            MeasureKind::Periodic { cycle } => {
                let p = cycle.len();
                let hits = (0..p)
                    .filter(|&i| word.iter().enumerate().all(|(j, &s)| cycle[(i + j) % p] == s))
                    .count();
                hits as f64 / p as f64
            }
            MeasureKind::Markov {
                graph,
                probs,
                stationary,
            } => {
                let k = graph.depth();
                let states = graph.vertices();
                if word.len() < k {
                    return states
                        .words()
                        .iter()
                        .zip(stationary)
                        .filter(|(w, _)| w.starts_with(word))
                        .map(|(_, &m)| m)
                        .sum();
                }
                let Some(mut u) = states.index_of(&word[..k]) else {
                    return 0.0;
                };
                let mut mass = stationary[u];
                for i in 1..=word.len() - k {
                    let Some(v) = states.index_of(&word[i..i + k]) else {
                        return 0.0;
                    };
                    let Some(e) = graph.find_edge(u, v) else {
                        return 0.0;
                    };
                    mass *= probs[e];
                    u = v;
                }
                mass
            }
        }
    }

    /// `∫A dμ`.
    pub fn integrate(&self, a: &Potential) -> f64 {
        match &self.kind {
            MeasureKind::Periodic { cycle } => a.cycle_average(cycle).unwrap_or(f64::NAN),
            MeasureKind::Markov { .. } => a
                .words()
                .words()
                .iter()
                .zip(a.values())
                .map(|(w, &v)| self.cylinder_mass(w) * v)
                .sum(),
        }
    }

    /// Words of length `depth` carrying positive mass, in lexicographic order.
    pub fn support_words(&self, depth: usize) -> Vec<Word> {
        all_words(self.alphabet_size, depth)
            .into_iter()
            .filter(|w| self.cylinder_mass(w) > 0.0)
            .collect()
    }

    pub fn summary(&self) -> MeasureSummary {
        match &self.kind {
            MeasureKind::Periodic { cycle } => MeasureSummary::Periodic {
                cycle: word_to_string(cycle),
            },
            MeasureKind::Markov {
                graph,
                probs,
                stationary,
            } => MeasureSummary::Markov {
                states: graph.vertices().words().iter().map(|w| word_to_string(w)).collect(),
                stationary: stationary.clone(),
                transitions: graph
                    .edges()
                    .iter()
                    .zip(probs)
                    .map(|(&(u, v), &p)| (u, v, p))
                    .collect(),
            },
        }
    }
}

/// Serializable description of a measure.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeasureSummary {
    Periodic {
        cycle: String,
    },
    Markov {
        states: Vec<String>,
        stationary: Vec<f64>,
        transitions: Vec<(usize, usize, f64)>,
    },
}

/// All words of length `n` over `0..alphabet_size`, lexicographically.
pub fn all_words(alphabet_size: usize, n: usize) -> Vec<Word> {
    let mut words: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..alphabet_size as Symbol).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    words
}

/// Weak* distance truncated at `depth_cap`:
/// `Σ_{1 ≤ |w| ≤ depth_cap} 2^{-(|w|·a + rank(w))} |μ[w] - ν[w]|`, where `a` is the
/// alphabet size and `rank(w)` the lexicographic index of `w` among all words
/// of its length.
pub fn measure_distance(mu: &InvariantMeasure, nu: &InvariantMeasure, depth_cap: usize) -> Result<f64> {
    if mu.alphabet_size != nu.alphabet_size {
        return Err(Error::SubshiftMismatch);
    }
    let a = mu.alphabet_size;
    let mut total = 0.0;
    for n in 1..=depth_cap {
        for (rank, w) in all_words(a, n).iter().enumerate() {
            let diff = (mu.cylinder_mass(w) - nu.cylinder_mass(w)).abs();
            if diff > 0.0 {
                total += diff * 2f64.powi(-((n * a + rank) as i32));
            }
        }
    }
    Ok(total)
}
