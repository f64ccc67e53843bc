//! Maximal ergodic averages of locally constant potentials.
//!
//! A depth-`k` potential `A` lives on the cost graph of `d`-words with
//! `d = max(k - 1, 1)`: for `k ≥ 2` the edge `u → v` spells the `k`-word
//! `u·v_last` and carries `A` of that word, for `k = 1` it carries `A(u)`.
//! Periodic orbits are closed walks, so `m(A)` is the maximum cycle mean,
//! and sub-actions are functions of `d`-words.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maxplus::{self, Calibration};
use crate::measure::InvariantMeasure;
use crate::potential::Potential;
use crate::shift::{orbit_word, word_to_string, Subshift, Symbol, SymbolicPoint, Word, WordGraph, WordSet};

/// Default tolerance for zero tests.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default cap on the number of orbits a brute-force search may visit.
pub const DEFAULT_ORBIT_BUDGET: usize = 1 << 24;

const MAX_LISTED_CYCLES: usize = 1024;
const MAX_CYCLE_STEPS: usize = 1_000_000;

/// The graph whose closed walks are the periodic orbits, weighted by `A`.
pub fn cost_graph(a: &Potential) -> Result<WordGraph> {
    let k = a.depth();
    let mut g = WordGraph::new(a.subshift(), (k.max(2)) - 1)?;
    let weights = (0..g.edge_count())
        .map(|e| {
            if k >= 2 {
                a.value_of(&g.edge_word(e)).expect("edge word is admissible")
            } else {
                a.values()[g.edge(e).0]
            }
        })
        .collect();
    g.set_edge_weights(weights);
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxResult {
    pub m0: f64,
    /// Orbit words of the simple critical cycles, sorted; the first one is
    /// the deterministic tie-break winner.
    #[serde(serialize_with = "ser_words")]
    pub cycles: Vec<Word>,
    pub tolerance: f64,
    /// True when cycle listing hit its cap and `cycles` is incomplete.
    pub truncated: bool,
}

impl MaxResult {
    pub fn winner(&self) -> &[Symbol] {
        &self.cycles[0]
    }

    pub fn is_unique(&self) -> bool {
        self.cycles.len() == 1 && !self.truncated
    }
}

fn ser_words<S: serde::Serializer>(words: &[Word], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(words.iter().map(|w| word_to_string(w)))
}

fn calibration(g: &WordGraph, m0: f64, tol: f64) -> Result<Calibration> {
    maxplus::calibrate(g.vertex_count(), g.edges(), g.edge_weights(), m0, tol)
}

pub fn max_mean(a: &Potential) -> Result<MaxResult> {
    max_mean_with(a, DEFAULT_TOL)
}

pub fn max_mean_with(a: &Potential, tol: f64) -> Result<MaxResult> {
    let g = cost_graph(a)?;
    let m0 = maxplus::max_cycle_mean(g.vertex_count(), g.edges(), g.edge_weights()).ok_or(Error::NoCycle)?;
    let cal = calibration(&g, m0, tol)?;
    let (vertex_cycles, truncated) = maxplus::simple_cycles(
        g.vertex_count(),
        g.edges(),
        &cal.critical_edges,
        MAX_LISTED_CYCLES,
        MAX_CYCLE_STEPS,
    );
    let mut cycles: Vec<Word> = vertex_cycles
        .iter()
        .map(|c| orbit_word(&c.iter().map(|&v| g.vertices().word(v)[0]).collect::<Word>()))
        .filter(|w| a.cycle_average(w).is_some_and(|avg| (avg - m0).abs() <= tol))
        .collect();
    cycles.sort();
    cycles.dedup();
    if cycles.is_empty() {
        return Err(Error::NoCycle);
    }
    Ok(MaxResult {
        m0,
        cycles,
        tolerance: tol,
        truncated,
    })
}

/// Lyndon words of length `1..=max_len` over `0..alphabet_size` in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(alphabet_size: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if alphabet_size == 0 || max_len == 0 {
        return out;
    }
    let top = alphabet_size as i32 - 1;
    let mut w: Vec<i32> = vec![-1];
    while !w.is_empty() {
        *w.last_mut().unwrap() += 1;
        out.push(w.iter().map(|&s| s as Symbol).collect());
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
    }
    out
}

/// Orbit words of all periodic orbits with period at most `max_period`.
pub fn periodic_orbits(spec: &Subshift, max_period: usize, budget: usize) -> Result<Vec<Word>> {
    let a = spec.alphabet_size() as f64;
    let needed: f64 = (1..=max_period).map(|n| a.powi(n as i32) / n as f64).sum();
    if needed > budget as f64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(lyndon_words(spec.alphabet_size(), max_period)
        .into_iter()
        .filter(|w| spec.closes(w))
        .collect())
}

/// Birkhoff average of every periodic orbit of period at most `max_period`.
pub fn orbit_averages(a: &Potential, max_period: usize) -> Result<Vec<(Word, f64)>> {
    Ok(periodic_orbits(a.subshift(), max_period, DEFAULT_ORBIT_BUDGET)?
        .into_iter()
        .map(|w| {
            let avg = a.cycle_average(&w).expect("closing cycle");
            (w, avg)
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForce {
    pub best: f64,
    #[serde(serialize_with = "ser_words")]
    pub argmax: Vec<Word>,
    /// Best average among orbits outside `argmax`; `None` if there is none.
    pub runner_up: Option<f64>,
}

impl BruteForce {
    pub fn gap(&self) -> Option<f64> {
        self.runner_up.map(|r| self.best - r)
    }
}

/// Exhaustive maximum over periodic orbits of period `≤ max_period`.
/// Averages within `1e-12·(1 + |best|)` of the best count as ties.
pub fn brute_force(a: &Potential, max_period: usize) -> Result<BruteForce> {
    let averages = orbit_averages(a, max_period)?;
    let best = averages.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-12 * (1.0 + best.abs());
    let mut argmax = Vec::new();
    let mut runner_up: Option<f64> = None;
    for (w, avg) in averages {
        if avg >= best - tie {
            argmax.push(w);
        } else {
            runner_up = Some(runner_up.map_or(avg, |r| r.max(avg)));
        }
    }
    Ok(BruteForce {
        best,
        argmax,
        runner_up,
    })
}

/// A calibrated sub-action on the vertices of the cost graph.
#[derive(Clone, Debug)]
pub struct SubAction {
    pub m0: f64,
    pub words: WordSet,
    pub values: Vec<f64>,
    critical_vertices: Vec<bool>,
}

impl SubAction {
    pub fn depth(&self) -> usize {
        self.words.depth()
    }

    pub fn value_of(&self, word: &[Symbol]) -> Option<f64> {
        word.get(..self.depth())
            .and_then(|w| self.words.index_of(w))
            .map(|i| self.values[i])
    }

    pub fn critical_vertices(&self) -> &[bool] {
        &self.critical_vertices
    }

    /// `max V - min V`.
    pub fn oscillation(&self) -> f64 {
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

pub fn subaction(a: &Potential, r: &MaxResult) -> Result<SubAction> {
    let g = cost_graph(a)?;
    let cal = calibration(&g, r.m0, r.tolerance)?;
    Ok(SubAction {
        m0: r.m0,
        words: g.vertices().clone(),
        values: cal.values,
        critical_vertices: cal.critical_vertices,
    })
}

/// `B = A - m0 + V - V∘σ` per edge of the cost graph.
#[derive(Clone, Debug)]
pub struct Deficiency {
    pub graph: WordGraph,
    pub values: Vec<f64>,
    /// Edges with `B ≥ -tolerance`.
    pub mather_edges: Vec<bool>,
    /// Mather edges lying on a cycle of Mather edges.
    pub recurrent: Vec<bool>,
    pub tolerance: f64,
}

impl Deficiency {
    /// `B` as a locally constant potential on the edge words.
    pub fn as_potential(&self, a: &Potential) -> Result<Potential> {
        let mut vals = self.values.iter();
        Potential::from_fn(a.subshift(), a.metric(), self.graph.depth() + 1, |_| *vals.next().unwrap())
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sum of `B` once around the periodic orbit of `cycle`.
    pub fn cycle_sum(&self, cycle: &[Symbol]) -> Option<f64> {
        let verts = self.graph.cycle_vertices(cycle)?;
        let p = verts.len();
        (0..p)
            .map(|i| self.graph.find_edge(verts[i], verts[(i + 1) % p]).map(|e| self.values[e]))
            .sum()
    }
}

pub fn deficiency(a: &Potential, v: &SubAction) -> Result<Deficiency> {
    deficiency_with(a, v, DEFAULT_TOL)
}

pub fn deficiency_with(a: &Potential, v: &SubAction, tol: f64) -> Result<Deficiency> {
    let graph = cost_graph(a)?;
    if graph.depth() != v.depth() {
        return Err(Error::InvalidArgument("sub-action depth does not match the potential".into()));
    }
    let values: Vec<f64> = graph
        .edges()
        .iter()
        .zip(graph.edge_weights())
        .map(|(&(p, q), &w)| w - v.m0 + v.values[p] - v.values[q])
        .collect();
    if let Some(e) = (0..values.len()).find(|&e| values[e] > tol) {
        return Err(Error::CalibrationViolation {
            edge: word_to_string(&graph.edge_word(e)),
            value: values[e],
            tolerance: tol,
        });
    }
    let mather_edges: Vec<bool> = values.iter().map(|&b| b >= -tol).collect();
    let recurrent = maxplus::recurrent_edges(graph.vertex_count(), graph.edges(), &mather_edges);
    Ok(Deficiency {
        graph,
        values,
        mather_edges,
        recurrent,
        tolerance: tol,
    })
}

/// Action potential at cylinder resolution on `k`-words.
#[derive(Clone, Debug)]
pub struct ManeTable {
    pub words: WordSet,
    /// `entries[u][v]`: heaviest sum of `A - m0` over nonempty paths
    /// `u → v`; `None` when `v` is unreachable from `u`.
    pub entries: Vec<Vec<Option<f64>>>,
    /// Upper bound for every entry: the oscillation of the calibrated
    /// sub-action, since each path sum is at most `V(v) - V(u)`.
    pub bound_q: f64,
    pub tolerance: f64,
}

impl ManeTable {
    pub fn get(&self, u: &[Symbol], v: &[Symbol]) -> Option<f64> {
        let i = self.words.index_of(u)?;
        let j = self.words.index_of(v)?;
        self.entries[i][j]
    }

    /// Dense CSV with a header row of vertex words; unreachable is `-inf`.
    pub fn to_csv(&self) -> String {
        let names: Vec<String> = self.words.words().iter().map(|w| word_to_string(w)).collect();
        let mut out = String::from("from");
        for n in &names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (i, row) in self.entries.iter().enumerate() {
            out.push_str(&names[i]);
            for x in row {
                out.push(',');
                match x {
                    Some(v) => out.push_str(&format!("{v:.16e}")),
                    None => out.push_str("-inf"),
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn mane_table(a: &Potential, r: &MaxResult) -> Result<ManeTable> {
    mane_table_at(a, r, a.depth())
}

/// Mañé table on `depth`-words (`depth ≥` the potential's depth).
pub fn mane_table_at(a: &Potential, r: &MaxResult, depth: usize) -> Result<ManeTable> {
    let v = subaction(a, r)?;
    let lifted = a.lift(depth)?;
    let g = WordGraph::new(a.subshift(), depth)?;
    let weights: Vec<f64> = g.edges().iter().map(|&(u, _)| lifted.values()[u] - r.m0).collect();
    let entries = maxplus::path_closure(g.vertex_count(), g.edges(), &weights);
    for (u, row) in entries.iter().enumerate() {
        if let Some(s) = row[u] {
            if s > r.tolerance * (1.0 + g.vertex_count() as f64) {
                return Err(Error::NonConvergence("Mañé table (positive cycle)"));
            }
        }
    }
    Ok(ManeTable {
        words: g.vertices().clone(),
        entries,
        bound_q: v.oscillation(),
        tolerance: r.tolerance,
    })
}

/// Vertices `u` with `|S(u,u)| ≤ tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct AubrySet {
    #[serde(serialize_with = "ser_words")]
    pub vertices: Vec<Word>,
}

impl AubrySet {
    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.vertices.iter().any(|w| w == word)
    }

    /// Whether every window of the periodic orbit of `cycle` is a member.
    pub fn contains_cycle(&self, cycle: &[Symbol]) -> bool {
        let Some(k) = self.vertices.first().map(|w| w.len()) else {
            return false;
        };
        let p = cycle.len();
        (0..p).all(|i| {
            let w: Word = (0..k).map(|j| cycle[(i + j) % p]).collect();
            self.contains(&w)
        })
    }
}

pub fn aubry_set(t: &ManeTable) -> AubrySet {
    AubrySet {
        vertices: (0..t.words.len())
            .filter(|&u| t.entries[u][u].is_some_and(|s| s.abs() <= t.tolerance))
            .map(|u| t.words.word(u).to_vec())
            .collect(),
    }
}

pub fn orbit_measure(spec: &Subshift, cycle: &[Symbol]) -> Result<InvariantMeasure> {
    InvariantMeasure::periodic(spec, cycle)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    pub table_depth: usize,
    /// `S(x, σᴺx)` from the table.
    pub action: f64,
    /// `Σ_{j<N} [A(σʲx) - m0]`.
    pub orbit_sum: f64,
    /// `S(x, x)`.
    pub self_action: f64,
    /// `S(x, σᴺx) + S(σᴺx, x)`.
    pub split_action: f64,
    /// `N·Hold_α(A)·λ^{(table_depth - k)α}`.
    pub bound: f64,
    pub action_matches: bool,
    pub additivity_holds: bool,
}

/// Compare the table action along the first `n` steps of the orbit of `x`
/// with the Birkhoff sum, and test `S(x,x) = S(x,σᴺx) + S(σᴺx,x)`.
pub fn orbit_additivity_check(
    a: &Potential,
    r: &MaxResult,
    x: &SymbolicPoint,
    n: usize,
    table_depth: Option<usize>,
) -> Result<AdditivityReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    a.subshift().check_point(x)?;
    let k = a.depth();
    let depth = table_depth.unwrap_or(k).max(k);
    let orbit: Vec<Word> = (0..n).map(|j| x.shift_by(j).prefix(depth)).collect();
    let mut sorted = orbit.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() < n {
        return Err(Error::ResolutionTooCoarse(format!(
            "the first {n} orbit points of {x} are not separated by {depth}-cylinders"
        )));
    }
    let table = mane_table_at(a, r, depth)?;
    let start = x.prefix(depth);
    let end = x.shift_by(n).prefix(depth);
    let lookup = |u: &[Symbol], v: &[Symbol]| table.get(u, v).unwrap_or(f64::NEG_INFINITY);
    let action = lookup(&start, &end);
    let orbit_sum: f64 = (0..n).map(|j| a.eval(&x.shift_by(j)).unwrap() - r.m0).sum();
    let self_action = lookup(&start, &start);
    let split_action = action + lookup(&end, &start);
    let m = a.metric();
    let bound = n as f64 * a.holder_constant() * m.lambda.powf((depth - k) as f64 * m.alpha);
    let slack = r.tolerance * (1.0 + n as f64);
    Ok(AdditivityReport {
        table_depth: depth,
        action,
        orbit_sum,
        self_action,
        split_action,
        bound,
        action_matches: (action - orbit_sum).abs() <= bound + slack,
        additivity_holds: (self_action - split_action).abs() <= bound + slack,
    })
}

/// Exact rational counterparts used as oracles.
pub mod exact {
    use num_rational::BigRational;
    use num_traits::Zero;

    use super::*;
    use crate::maxplus::CycleWeight;

    #[derive(Clone, Debug)]
    pub struct RationalPotential {
        pub subshift: Subshift,
        pub words: WordSet,
        pub values: Vec<BigRational>,
    }

    impl RationalPotential {
        pub fn from_fn(spec: &Subshift, depth: usize, mut f: impl FnMut(&[Symbol]) -> BigRational) -> Result<Self> {
            let words = WordSet::new(spec, depth, crate::shift::DEFAULT_VERTEX_BUDGET)?;
            let values = words.words().iter().map(|w| f(w)).collect();
            Ok(RationalPotential {
                subshift: spec.clone(),
                words,
                values,
            })
        }

        pub fn depth(&self) -> usize {
            self.words.depth()
        }

        pub fn to_f64(&self) -> Potential {
            use num_traits::ToPrimitive;
            let mut it = self.values.iter();
            Potential::from_fn(&self.subshift, Default::default(), self.depth(), |_| {
                it.next().unwrap().to_f64().unwrap()
            })
            .unwrap()
        }

        pub fn cycle_average(&self, cycle: &[Symbol]) -> Option<BigRational> {
            let p = cycle.len();
            let k = self.depth();
            let mut total = <BigRational as Zero>::zero();
            for i in 0..p {
                let w: Word = (0..k).map(|j| cycle[(i + j) % p]).collect();
                total += &self.values[self.words.index_of(&w)?];
            }
            Some(total.div_len(p))
        }
    }

    pub fn max_mean_exact(a: &RationalPotential) -> Result<BigRational> {
        let k = a.depth();
        let g = WordGraph::new(&a.subshift, k.max(2) - 1)?;
        let weights: Vec<BigRational> = (0..g.edge_count())
            .map(|e| {
                if k >= 2 {
                    a.values[a.words.index_of(&g.edge_word(e)).unwrap()].clone()
                } else {
                    a.values[g.edge(e).0].clone()
                }
            })
            .collect();
        maxplus::max_cycle_mean(g.vertex_count(), g.edges(), &weights).ok_or(Error::NoCycle)
    }

    pub fn brute_force_exact(a: &RationalPotential, max_period: usize) -> Result<(BigRational, Vec<Word>)> {
        let mut best: Option<BigRational> = None;
        let mut argmax = Vec::new();
        for w in periodic_orbits(&a.subshift, max_period, DEFAULT_ORBIT_BUDGET)? {
            let avg = a.cycle_average(&w).expect("closing cycle");
            match &best {
                Some(b) if avg < *b => {}
                Some(b) if avg == *b => argmax.push(w),
                _ => {
                    best = Some(avg);
                    argmax = vec![w];
                }
            }
        }
        best.map(|b| (b, argmax)).ok_or(Error::NoCycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{parse_word, MetricParams};

    fn depth1(a0: f64, a1: f64) -> Potential {
        Potential::from_fn(&Subshift::full(2), MetricParams::default(), 1, |w| if w[0] == 0 { a0 } else { a1 }).unwrap()
    }

    fn two_cycle() -> Potential {
        Potential::from_fn(&Subshift::full(2), MetricParams::default(), 2, |w| if w[0] != w[1] { 1.0 } else { 0.0 })
            .unwrap()
    }

    #[test]
    fn lyndon_counts() {
        // necklace counts for binary primitive words: 2, 1, 2, 3, 6, 9
        let counts: Vec<usize> = (1..=6)
            .map(|n| lyndon_words(2, 6).iter().filter(|w| w.len() == n).count())
            .collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
        assert_eq!(lyndon_words(3, 2).len(), 3 + 3);
    }

    #[test]
    fn max_mean_examples() {
        let r = max_mean(&depth1(0.0, 1.0)).unwrap();
        assert_eq!(r.m0, 1.0);
        assert_eq!(r.cycles, vec![vec![1]]);
        let r = max_mean(&two_cycle()).unwrap();
        assert_eq!(r.m0, 1.0);
        assert_eq!(r.cycles, vec![vec![0, 1]]);
    }

    #[test]
    fn brute_force_examples() {
        let c = Potential::constant(&Subshift::full(2), MetricParams::default(), 2, 0.7).unwrap();
        let b = brute_force(&c, 4).unwrap();
        assert!((b.best - 0.7).abs() < 1e-15);
        assert_eq!(b.argmax.len(), 2 + 1 + 2 + 3);
        let b = brute_force(&depth1(0.0, -1.0), 3).unwrap();
        assert_eq!((b.best, b.argmax), (0.0, vec![vec![0]]));
        let b = brute_force(&two_cycle(), 6).unwrap();
        assert_eq!((b.best, b.argmax), (1.0, vec![vec![0, 1]]));
        assert!(matches!(brute_force(&c, 40), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn subaction_and_deficiency_examples() {
        let a = depth1(0.0, -1.0);
        let r = max_mean(&a).unwrap();
        let v = subaction(&a, &r).unwrap();
        assert_eq!(v.values, vec![0.0, 0.0]);
        let b = deficiency(&a, &v).unwrap();
        // edges 0→0, 0→1, 1→0, 1→1
        assert_eq!(b.values, vec![0.0, 0.0, -1.0, -1.0]);
        assert_eq!(b.recurrent, vec![true, false, false, false]);

        let a = two_cycle();
        let r = max_mean(&a).unwrap();
        let v = subaction(&a, &r).unwrap();
        let b = deficiency(&a, &v).unwrap();
        for (e, &val) in b.values.iter().enumerate() {
            let w = b.graph.edge_word(e);
            if w[0] != w[1] {
                assert_eq!(val, 0.0);
            } else {
                assert!(val < 0.0);
            }
        }

        let c = Potential::constant(&Subshift::golden_mean(), MetricParams::default(), 3, 2.0).unwrap();
        let r = max_mean(&c).unwrap();
        let v = subaction(&c, &r).unwrap();
        assert!(v.values.iter().all(|&x| x == 0.0));
        assert!(deficiency(&c, &v).unwrap().values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn mane_and_aubry_examples() {
        let a = depth1(0.0, -1.0);
        let r = max_mean(&a).unwrap();
        let t = mane_table(&a, &r).unwrap();
        assert_eq!(t.get(&[0], &[0]), Some(0.0));
        assert_eq!(t.get(&[0], &[1]), Some(0.0));
        assert_eq!(t.get(&[1], &[0]), Some(-1.0));
        assert_eq!(t.get(&[1], &[1]), Some(-1.0));
        assert_eq!(aubry_set(&t).vertices, vec![vec![0]]);

        let c = Potential::constant(&Subshift::full(2), MetricParams::default(), 2, 0.0).unwrap();
        let t = mane_table(&c, &max_mean(&c).unwrap()).unwrap();
        assert!(t.entries.iter().flatten().all(|&s| s == Some(0.0)));
        assert_eq!(aubry_set(&t).vertices.len(), 4);

        let a = two_cycle();
        let t = mane_table(&a, &max_mean(&a).unwrap()).unwrap();
        assert_eq!(aubry_set(&t).vertices, vec![vec![0, 1], vec![1, 0]]);
        assert!(t.to_csv().starts_with("from,00,01,10,11\n"));
    }

    #[test]
    fn additivity_examples() {
        let a = two_cycle();
        let r = max_mean(&a).unwrap();
        let x = SymbolicPoint::periodic(&[0, 1]).unwrap();
        let rep = orbit_additivity_check(&a, &r, &x, 1, None).unwrap();
        assert_eq!(rep.action, 0.0);
        assert_eq!(rep.orbit_sum, 0.0);
        assert!(rep.action_matches && rep.additivity_holds);

        let a = depth1(0.0, -1.0);
        let r = max_mean(&a).unwrap();
        let x = SymbolicPoint::new(vec![1], vec![0]).unwrap();
        let rep = orbit_additivity_check(&a, &r, &x, 1, None).unwrap();
        assert_eq!(rep.action, -1.0);
        assert_eq!(rep.orbit_sum, -1.0);

        let fixed = SymbolicPoint::periodic(&[0]).unwrap();
        let rep = orbit_additivity_check(&a, &r, &fixed, 1, None).unwrap();
        assert_eq!(rep.self_action, 0.0);
        assert!(rep.additivity_holds);
        assert!(matches!(
            orbit_additivity_check(&a, &r, &fixed, 2, None),
            Err(Error::ResolutionTooCoarse(_))
        ));
    }

    #[test]
    fn orbit_measure_rejects_bad_cycle() {
        assert!(orbit_measure(&Subshift::golden_mean(), &parse_word("011").unwrap()).is_err());
    }
}
