//! Locally constant potentials.
//!
//! A potential of depth `k` assigns one real value to each admissible
//! `k`-word; its value at a point is the value of the point's first `k`
//! symbols. For this class the Hölder seminorm is an exact finite maximum
//! over disagreement depths `0..k`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::{
    parse_word, word_to_string, MetricParams, Subshift, Symbol, SymbolicPoint, Word, WordSet,
    DEFAULT_VERTEX_BUDGET,
};

#[derive(Clone, Debug)]
pub struct Potential {
    subshift: Subshift,
    metric: MetricParams,
    words: WordSet,
    values: Vec<f64>,
}

/// On-disk form: `{"depth": k, "values": {"word": v, ...}, "lambda": .., "alpha": ..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotentialFile {
    pub depth: usize,
    pub values: BTreeMap<String, f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_lambda() -> f64 {
    MetricParams::default().lambda
}

fn default_alpha() -> f64 {
    MetricParams::default().alpha
}

impl Potential {
    pub fn from_fn(
        subshift: &Subshift,
        metric: MetricParams,
        depth: usize,
        mut value: impl FnMut(&[Symbol]) -> f64,
    ) -> Result<Self> {
        let words = WordSet::new(subshift, depth, DEFAULT_VERTEX_BUDGET)?;
        let values: Vec<f64> = words.words().iter().map(|w| value(w)).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "value on {} is not finite",
                word_to_string(words.word(i))
            )));
        }
        Ok(Potential {
            subshift: subshift.clone(),
            metric,
            words,
            values,
        })
    }

    pub fn constant(subshift: &Subshift, metric: MetricParams, depth: usize, c: f64) -> Result<Self> {
        Self::from_fn(subshift, metric, depth, |_| c)
    }

    /// Build from an explicit word → value table. Every admissible word must
    /// be present and every listed word must be admissible.
    pub fn from_words(
        subshift: &Subshift,
        metric: MetricParams,
        depth: usize,
        table: &BTreeMap<Word, f64>,
    ) -> Result<Self> {
        let words = WordSet::new(subshift, depth, DEFAULT_VERTEX_BUDGET)?;
        for w in table.keys() {
            if words.index_of(w).is_none() {
                return Err(Error::InadmissibleWord(word_to_string(w)));
            }
        }
        let mut missing = None;
        let p = Self::from_fn(subshift, metric, depth, |w| match table.get(w) {
            Some(&v) => v,
            None => {
                missing.get_or_insert_with(|| w.to_vec());
                0.0
            }
        })?;
        match missing {
            Some(w) => Err(Error::MissingValue(word_to_string(&w))),
            None => Ok(p),
        }
    }

    pub fn from_file(file: &PotentialFile, subshift: &Subshift) -> Result<Self> {
        let metric = MetricParams::new(file.lambda, file.alpha)?;
        let mut table = BTreeMap::new();
        for (w, &v) in &file.values {
            let word = parse_word(w)?;
            if word.len() != file.depth {
                return Err(Error::InvalidArgument(format!(
                    "word {w} has length {}, expected {}",
                    word.len(),
                    file.depth
                )));
            }
            table.insert(word, v);
        }
        Self::from_words(subshift, metric, file.depth, &table)
    }

    pub fn to_file(&self) -> PotentialFile {
        PotentialFile {
            depth: self.depth(),
            values: self
                .words
                .words()
                .iter()
                .zip(&self.values)
                .map(|(w, &v)| (word_to_string(w), v))
                .collect(),
            lambda: self.metric.lambda,
            alpha: self.metric.alpha,
        }
    }

    pub fn depth(&self) -> usize {
        self.words.depth()
    }

    pub fn subshift(&self) -> &Subshift {
        &self.subshift
    }

    pub fn metric(&self) -> MetricParams {
        self.metric
    }

    pub fn words(&self) -> &WordSet {
        &self.words
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_of(&self, word: &[Symbol]) -> Option<f64> {
        self.words.index_of(word).map(|i| self.values[i])
    }

    /// Value on the cylinder of the first `depth` symbols of `word`.
    pub fn value_on_prefix(&self, word: &[Symbol]) -> Option<f64> {
        word.get(..self.depth()).and_then(|w| self.value_of(w))
    }

    pub fn eval(&self, x: &SymbolicPoint) -> Result<f64> {
        self.subshift.check_point(x)?;
        self.value_of(&x.prefix(self.depth()))
            .ok_or_else(|| Error::InadmissiblePoint(x.to_string()))
    }

    /// Birkhoff sum over one period of the orbit of `cycle^∞`.
    pub fn cycle_sum(&self, cycle: &[Symbol]) -> Option<f64> {
        let p = cycle.len();
        let k = self.depth();
        let mut window = vec![0; k];
        let mut total = 0.0;
        for i in 0..p {
            for (j, s) in window.iter_mut().enumerate() {
                *s = cycle[(i + j) % p];
            }
            total += self.value_of(&window)?;
        }
        Some(total)
    }

    pub fn cycle_average(&self, cycle: &[Symbol]) -> Option<f64> {
        self.cycle_sum(cycle).map(|s| s / cycle.len() as f64)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Hold_α(A)` for the metric's own exponent.
    pub fn holder_constant(&self) -> f64 {
        self.holder_constant_with(self.metric.alpha)
    }

    /// Exact `sup |A(x) - A(y)| / d(x,y)^exponent` over `0 < d(x,y) ≤ 1`.
    ///
    /// Points disagreeing first at index `j ≥ k` share a cylinder, so only
    /// `j < k` contributes. Words sharing a prefix of length `j` are
    /// contiguous in the lexicographic order, and so are the sub-blocks that
    /// also share symbol `j`.
    pub fn holder_constant_with(&self, exponent: f64) -> f64 {
        let words = self.words.words();
        let k = self.depth();
        let mut best: f64 = 0.0;
        for j in 0..k {
            let scale = self.metric.lambda.powf(j as f64 * exponent);
            let mut start = 0;
            while start < words.len() {
                let mut end = start + 1;
                while end < words.len() && words[end][..j] == words[start][..j] {
                    end += 1;
                }
                // (min, max) per symbol at position j
                let mut blocks: Vec<(f64, f64)> = Vec::new();
                let mut b = start;
                while b < end {
                    let mut e = b;
                    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                    while e < end && words[e][j] == words[b][j] {
                        lo = lo.min(self.values[e]);
                        hi = hi.max(self.values[e]);
                        e += 1;
                    }
                    blocks.push((lo, hi));
                    b = e;
                }
                for (i, &(lo_i, hi_i)) in blocks.iter().enumerate() {
                    for &(lo_j, hi_j) in &blocks[i + 1..] {
                        let osc = (hi_i - lo_j).max(hi_j - lo_i);
                        best = best.max(osc / scale);
                    }
                }
                start = end;
            }
        }
        best
    }

    /// `‖A‖_α = Hold_α(A) + ‖A‖₀`.
    pub fn holder_norm(&self) -> f64 {
        self.holder_constant() + self.sup_norm()
    }

    /// Re-express at a larger depth without changing any value.
    pub fn lift(&self, depth: usize) -> Result<Potential> {
        if depth < self.depth() {
            return Err(Error::InvalidArgument(format!(
                "cannot lift depth {} potential to depth {depth}",
                self.depth()
            )));
        }
        if depth == self.depth() {
            return Ok(self.clone());
        }
        let k = self.depth();
        Potential::from_fn(&self.subshift, self.metric, depth, |w| {
            self.value_of(&w[..k]).expect("prefix of admissible word is admissible")
        })
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Potential {
        Potential {
            subshift: self.subshift.clone(),
            metric: self.metric,
            words: self.words.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn with_metric(&self, metric: MetricParams) -> Potential {
        Potential {
            metric,
            ..self.clone()
        }
    }
}

/// `scale·A + shift_const + addend`, at the larger of the two depths.
pub fn affine_combine(
    a: &Potential,
    scale: f64,
    shift_const: f64,
    addend: Option<&Potential>,
) -> Result<Potential> {
    match addend {
        None => Ok(a.map_values(|v| scale * v + shift_const)),
        Some(b) => {
            if a.subshift != b.subshift {
                return Err(Error::SubshiftMismatch);
            }
            let depth = a.depth().max(b.depth());
            Potential::from_fn(&a.subshift, a.metric, depth, |w| {
                let va = a.value_on_prefix(w).expect("admissible prefix");
                let vb = b.value_on_prefix(w).expect("admissible prefix");
                scale * va + shift_const + vb
            })
        }
    }
}

/// Quality of a cylinder discretization of a sampled function.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DiscretizationReport {
    pub depth: usize,
    /// Largest oscillation of the sampler across the probes of one cylinder.
    pub tail_bound: f64,
}

/// A random admissible point starting with `word`: a random walk followed by
/// a periodic tail closed at the first repeated symbol.
pub fn random_point_with_prefix(
    spec: &Subshift,
    word: &[Symbol],
    rng: &mut impl Rng,
    max_walk: usize,
) -> Result<SymbolicPoint> {
    if word.is_empty() || !spec.is_admissible(word) {
        return Err(Error::InadmissibleWord(word_to_string(word)));
    }
    let step = |cur: Symbol, rng: &mut dyn rand::RngCore| -> Symbol {
        let succ: Vec<Symbol> = spec.successors(cur).collect();
        succ[rng.gen_range(0..succ.len())]
    };
    let mut seq = word.to_vec();
    let walk = rng.gen_range(0..=max_walk);
    for _ in 0..walk {
        let next = step(*seq.last().unwrap(), rng);
        seq.push(next);
    }
    let tail_start = seq.len();
    let mut seen: Vec<Option<usize>> = vec![None; spec.alphabet_size()];
    loop {
        let next = step(*seq.last().unwrap(), rng);
        if let Some(pos) = seen[next as usize] {
            let cycle = seq[pos..].to_vec();
            seq.truncate(pos);
            return SymbolicPoint::new(seq, cycle);
        }
        seen[next as usize] = Some(seq.len());
        seq.push(next);
        debug_assert!(seq.len() <= tail_start + spec.alphabet_size() + 1);
    }
}

/// Approximate a function on the subshift by a depth-`depth` cylinder
/// function.
///
/// Each cylinder takes the sampler's value at its canonical periodic probe;
/// `probes_per_cylinder - 1` further probes with random tails (seeded per
/// cylinder from `seed`) measure the oscillation reported as `tail_bound`.
/// The sampler may be called from several threads.
pub fn discretize<F>(
    sampler: F,
    spec: &Subshift,
    metric: MetricParams,
    depth: usize,
    probes_per_cylinder: usize,
    seed: u64,
) -> Result<(Potential, DiscretizationReport)>
where
    F: Fn(&SymbolicPoint) -> std::result::Result<f64, String> + Sync,
{
    if probes_per_cylinder == 0 {
        return Err(Error::InvalidArgument("probes_per_cylinder must be at least 1".into()));
    }
    let words = WordSet::new(spec, depth, DEFAULT_VERTEX_BUDGET)?;
    let fail = |w: &[Symbol], message: String| Error::SamplerFailure {
        word: word_to_string(w),
        message,
    };
    let per_word: Vec<(f64, f64)> = words
        .words()
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let canonical = spec.canonical_probe(w)?;
            let value = sampler(&canonical).map_err(|m| fail(w, m))?;
            let (mut lo, mut hi) = (value, value);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            for _ in 1..probes_per_cylinder {
                let x = random_point_with_prefix(spec, w, &mut rng, 2 * depth + 4)?;
                let v = sampler(&x).map_err(|m| fail(w, m))?;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            Ok((value, hi - lo))
        })
        .collect::<Result<_>>()?;
    let tail_bound = per_word.iter().fold(0.0_f64, |m, &(_, osc)| m.max(osc));
    let mut values = per_word.iter().map(|&(v, _)| v);
    let potential = Potential::from_fn(spec, metric, depth, |_| values.next().unwrap())?;
    Ok((potential, DiscretizationReport { depth, tail_bound }))
}
