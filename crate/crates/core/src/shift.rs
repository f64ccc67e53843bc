//! Subshifts of finite type, the symbolic metric, eventually periodic
//! points and word graphs.
//!
//! A one-sided subshift is given by a 0/1 transition matrix over the
//! alphabet `0..n`. Points are restricted to eventually periodic sequences
//! `preperiod · cycle^∞`, which are closed under the shift and under
//! inverse branches and are dense in the subshift. Each point is kept in a
//! normal form (primitive cycle, shortest preperiod) so that equality of
//! points is structural equality.
//!
//! The metric is `d(x, y) = λ^n` with `n` the first index where `x` and `y`
//! disagree, for a fixed contraction base `0 < λ < 1`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u8;
pub type Word = Vec<Symbol>;

/// Default cap on the number of vertices of a word graph.
pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 20;

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Render a word with one character per symbol (`0-9`, then `a-z`).
pub fn word_to_string(word: &[Symbol]) -> String {
    word.iter().map(|&s| DIGITS[s as usize] as char).collect()
}

/// Inverse of [`word_to_string`].
pub fn parse_word(text: &str) -> Result<Word> {
    text.chars()
        .map(|c| {
            c.to_digit(36)
                .map(|d| d as Symbol)
                .ok_or_else(|| Error::InvalidArgument(format!("bad symbol {c:?} in word {text:?}")))
        })
        .collect()
}

/// Base and Hölder exponent of the symbolic metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    pub lambda: f64,
    pub alpha: f64,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            lambda: 0.5,
            alpha: 1.0,
        }
    }
}

impl MetricParams {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0 && alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidMetric { lambda, alpha });
        }
        Ok(MetricParams { lambda, alpha })
    }

    /// Distance between two points that first disagree at index `n`.
    pub fn at_depth(&self, n: usize) -> f64 {
        self.lambda.powi(n as i32)
    }

    /// Largest radius on which every admissible inverse branch is defined.
    pub fn epsilon0(&self) -> f64 {
        1.0
    }

    /// Largest admissible jump for shadowing, `(1 - λ)·ε₀`.
    pub fn epsilon1(&self) -> f64 {
        (1.0 - self.lambda) * self.epsilon0()
    }

    /// Smallest depth `n` with `λ^n ≤ radius`.
    pub fn depth_for_radius(&self, radius: f64) -> usize {
        if radius >= 1.0 {
            return 0;
        }
        let n = (radius.ln() / self.lambda.ln()).ceil().max(0.0) as usize;
        // guard against rounding in the logarithms
        if self.at_depth(n) > radius * (1.0 + 1e-12) {
            n + 1
        } else {
            n
        }
    }
}

/// On-disk form of a subshift.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubshiftFile {
    pub alphabet: usize,
    pub transitions: Vec<Vec<i64>>,
}

/// A one-sided subshift of finite type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subshift {
    alphabet_size: usize,
    transitions: Vec<Vec<bool>>,
    mixing: bool,
}

impl Subshift {
    /// Validate a transition matrix and compute its mixing flag.
    ///
    /// A symbol without successor or predecessor is rejected; a reducible or
    /// periodic matrix is accepted with `mixing() == false`.
    pub fn new(alphabet_size: usize, transitions: &[Vec<i64>]) -> Result<Self> {
        if alphabet_size == 0 || alphabet_size > DIGITS.len() {
            return Err(Error::InvalidArgument(format!(
                "alphabet size {alphabet_size} outside 1..={}",
                DIGITS.len()
            )));
        }
        if transitions.len() != alphabet_size {
            return Err(Error::NonSquareMatrix {
                rows: transitions.len(),
                row: 0,
                len: alphabet_size,
            });
        }
        let mut matrix = vec![vec![false; alphabet_size]; alphabet_size];
        for (i, row) in transitions.iter().enumerate() {
            if row.len() != alphabet_size {
                return Err(Error::NonSquareMatrix {
                    rows: transitions.len(),
                    row: i,
                    len: row.len(),
                });
            }
            for (j, &value) in row.iter().enumerate() {
                matrix[i][j] = match value {
                    0 => false,
                    1 => true,
                    _ => return Err(Error::InvalidEntry { row: i, col: j, value }),
                };
            }
        }
        for s in 0..alphabet_size {
            if !matrix[s].iter().any(|&b| b) {
                return Err(Error::DeadSymbol {
                    symbol: s,
                    direction: "outgoing",
                });
            }
            if !(0..alphabet_size).any(|r| matrix[r][s]) {
                return Err(Error::DeadSymbol {
                    symbol: s,
                    direction: "incoming",
                });
            }
        }
        let mixing = is_primitive(&matrix);
        Ok(Subshift {
            alphabet_size,
            transitions: matrix,
            mixing,
        })
    }

    pub fn full(alphabet_size: usize) -> Self {
        let rows = vec![vec![1; alphabet_size]; alphabet_size];
        Subshift::new(alphabet_size, &rows).expect("full shift is valid")
    }

    /// The golden-mean shift: binary sequences without `11`.
    pub fn golden_mean() -> Self {
        Subshift::new(2, &[vec![1, 1], vec![1, 0]]).expect("golden mean shift is valid")
    }

    pub fn from_file(file: &SubshiftFile) -> Result<Self> {
        Subshift::new(file.alphabet, &file.transitions)
    }

    pub fn to_file(&self) -> SubshiftFile {
        SubshiftFile {
            alphabet: self.alphabet_size,
            transitions: self
                .transitions
                .iter()
                .map(|row| row.iter().map(|&b| b as i64).collect())
                .collect(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn mixing(&self) -> bool {
        self.mixing
    }

    pub fn allows(&self, from: Symbol, to: Symbol) -> bool {
        self.transitions[from as usize][to as usize]
    }

    pub fn successors(&self, from: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.alphabet_size as Symbol).filter(move |&b| self.allows(from, b))
    }

    pub fn predecessors(&self, to: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.alphabet_size as Symbol).filter(move |&a| self.allows(a, to))
    }

    pub fn is_admissible(&self, word: &[Symbol]) -> bool {
        word.iter().all(|&s| (s as usize) < self.alphabet_size)
            && word.windows(2).all(|w| self.allows(w[0], w[1]))
    }

    /// True when `cycle^∞` is admissible, i.e. the word is admissible and
    /// closes up.
    pub fn closes(&self, cycle: &[Symbol]) -> bool {
        !cycle.is_empty()
            && self.is_admissible(cycle)
            && self.allows(*cycle.last().unwrap(), cycle[0])
    }

    pub fn check_point(&self, x: &SymbolicPoint) -> Result<()> {
        let mut seq = x.preperiod.clone();
        seq.extend_from_slice(&x.cycle);
        seq.push(x.cycle[0]);
        if self.is_admissible(&seq) {
            Ok(())
        } else {
            Err(Error::InadmissiblePoint(x.to_string()))
        }
    }

    /// Shortest admissible path strictly after `from` that ends in `to`,
    /// excluding `from` itself. `None` when `to` is unreachable.
    pub fn shortest_path(&self, from: Symbol, to: Symbol) -> Option<Word> {
        let n = self.alphabet_size;
        let mut parent: Vec<Option<Symbol>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for b in self.successors(from) {
            if !seen[b as usize] {
                seen[b as usize] = true;
                queue.push_back(b);
            }
        }
        while let Some(s) = queue.pop_front() {
            if s == to {
                let mut path = vec![s];
                let mut cur = s;
                while let Some(p) = parent[cur as usize] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for b in self.successors(s) {
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    parent[b as usize] = Some(s);
                    queue.push_back(b);
                }
            }
        }
        None
    }

    /// The periodic point used to represent the cylinder `[word]`: `word^∞`
    /// when the word closes up, otherwise the word followed by the shortest
    /// return path to its first symbol. Falls back to following least
    /// successors until a symbol repeats when no return path exists.
    pub fn canonical_probe(&self, word: &[Symbol]) -> Result<SymbolicPoint> {
        if !self.is_admissible(word) || word.is_empty() {
            return Err(Error::InadmissibleWord(word_to_string(word)));
        }
        if self.closes(word) {
            return SymbolicPoint::new(Vec::new(), word.to_vec());
        }
        let last = *word.last().unwrap();
        if let Some(path) = self.shortest_path(last, word[0]) {
            let mut cycle = word.to_vec();
            cycle.extend_from_slice(&path[..path.len() - 1]);
            return SymbolicPoint::new(Vec::new(), cycle);
        }
        let mut seq = word.to_vec();
        let mut seen: HashMap<Symbol, usize> = HashMap::new();
        let mut cur = last;
        loop {
            let next = self.successors(cur).next().expect("no dead symbols");
            if let Some(&pos) = seen.get(&next) {
                let cycle = seq[pos..].to_vec();
                seq.truncate(pos);
                return SymbolicPoint::new(seq, cycle);
            }
            seen.insert(next, seq.len());
            seq.push(next);
            cur = next;
        }
    }
}

/// Primitivity test by boolean matrix powers up to Wielandt's bound
/// `(n-1)^2 + 1`.
fn is_primitive(matrix: &[Vec<bool>]) -> bool {
    let n = matrix.len();
    let bound = (n - 1) * (n - 1) + 1;
    let mut power = matrix.to_vec();
    for _ in 0..bound {
        if power.iter().all(|row| row.iter().all(|&b| b)) {
            return true;
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k] {
                    for j in 0..n {
                        if matrix[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        power = next;
    }
    power.iter().all(|row| row.iter().all(|&b| b))
}

/// Smallest `d` such that `word` is a power of its length-`d` prefix.
pub fn primitive_root(word: &[Symbol]) -> &[Symbol] {
    let n = word.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|i| word[i] == word[i - d]) {
            return &word[..d];
        }
    }
    word
}

/// Canonical word of a periodic orbit: primitive root rotated to its
/// lexicographically least rotation.
pub fn orbit_word(cycle: &[Symbol]) -> Word {
    let root = primitive_root(cycle);
    let n = root.len();
    (0..n)
        .map(|r| {
            let mut w = root[r..].to_vec();
            w.extend_from_slice(&root[..r]);
            w
        })
        .min()
        .unwrap_or_default()
}

/// An eventually periodic one-sided sequence `preperiod · cycle^∞` in
/// normal form: the cycle is primitive and the preperiod is as short as
/// possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct SymbolicPoint {
    preperiod: Word,
    cycle: Word,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    preperiod: String,
    cycle: String,
}

impl TryFrom<PointRepr> for SymbolicPoint {
    type Error = Error;
    fn try_from(r: PointRepr) -> Result<Self> {
        SymbolicPoint::new(parse_word(&r.preperiod)?, parse_word(&r.cycle)?)
    }
}

impl From<SymbolicPoint> for PointRepr {
    fn from(p: SymbolicPoint) -> Self {
        PointRepr {
            preperiod: word_to_string(&p.preperiod),
            cycle: word_to_string(&p.cycle),
        }
    }
}

impl SymbolicPoint {
    pub fn new(mut preperiod: Word, cycle: Word) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        let mut cycle = primitive_root(&cycle).to_vec();
        while let Some(&last) = preperiod.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            preperiod.pop();
            cycle.rotate_right(1);
        }
        Ok(SymbolicPoint { preperiod, cycle })
    }

    /// The periodic point `cycle^∞`.
    pub fn periodic(cycle: &[Symbol]) -> Result<Self> {
        SymbolicPoint::new(Vec::new(), cycle.to_vec())
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[Symbol] {
        &self.cycle
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// Minimal period when periodic.
    pub fn period(&self) -> Option<usize> {
        self.is_periodic().then_some(self.cycle.len())
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        let p = self.preperiod.len();
        if i < p {
            self.preperiod[i]
        } else {
            self.cycle[(i - p) % self.cycle.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.symbol(i)).collect()
    }

    pub fn shift(&self) -> SymbolicPoint {
        if self.preperiod.is_empty() {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            SymbolicPoint {
                preperiod: Vec::new(),
                cycle,
            }
        } else {
            SymbolicPoint {
                preperiod: self.preperiod[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }

    pub fn shift_by(&self, n: usize) -> SymbolicPoint {
        let p = self.preperiod.len();
        if n <= p {
            return SymbolicPoint {
                preperiod: self.preperiod[n..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let mut cycle = self.cycle.clone();
        let r = (n - p) % cycle.len();
        cycle.rotate_left(r);
        SymbolicPoint {
            preperiod: Vec::new(),
            cycle,
        }
    }

    /// Prepend one symbol (an inverse branch of the shift).
    pub fn prepend(&self, symbol: Symbol) -> SymbolicPoint {
        let mut pre = Vec::with_capacity(self.preperiod.len() + 1);
        pre.push(symbol);
        pre.extend_from_slice(&self.preperiod);
        SymbolicPoint::new(pre, self.cycle.clone()).expect("cycle is nonempty")
    }

    /// First index at which the two sequences differ, `None` when equal.
    pub fn first_disagreement(&self, other: &SymbolicPoint) -> Option<usize> {
        if self == other {
            return None;
        }
        // Distinct normal forms differ somewhere before this bound.
        let bound = self.preperiod.len().max(other.preperiod.len())
            + self.cycle.len() * other.cycle.len();
        (0..=bound).find(|&i| self.symbol(i) != other.symbol(i))
    }

    /// Number of leading symbols shared with `other` (`usize::MAX` if equal).
    pub fn agreement(&self, other: &SymbolicPoint) -> usize {
        self.first_disagreement(other).unwrap_or(usize::MAX)
    }
}

impl fmt::Display for SymbolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.preperiod.is_empty() {
            write!(f, "{}·", word_to_string(&self.preperiod))?;
        }
        write!(f, "({})^∞", word_to_string(&self.cycle))
    }
}

/// `λ^n` with `n` the first disagreement index; zero for equal points.
pub fn distance(x: &SymbolicPoint, y: &SymbolicPoint, metric: &MetricParams) -> f64 {
    match x.first_disagreement(y) {
        None => 0.0,
        Some(n) => metric.at_depth(n),
    }
}

/// All points `x` with `σx = y`.
pub fn inverse_branches(spec: &Subshift, y: &SymbolicPoint) -> Vec<SymbolicPoint> {
    spec.predecessors(y.symbol(0)).map(|a| y.prepend(a)).collect()
}

fn encode(word: &[Symbol], base: usize) -> usize {
    word.iter().fold(0, |acc, &s| acc * base + s as usize)
}

/// The admissible words of one length, in lexicographic order.
#[derive(Clone, Debug)]
pub struct WordSet {
    depth: usize,
    alphabet_size: usize,
    words: Vec<Word>,
    // dense table indexed by the base-`alphabet_size` code of a word
    codes: Vec<u32>,
}

impl WordSet {
    pub fn new(spec: &Subshift, depth: usize, budget: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        let needed = (spec.alphabet_size() as f64).powi(depth as i32);
        if needed > budget as f64 {
            return Err(Error::DepthOverflow {
                depth,
                needed,
                budget,
            });
        }
        let mut words: Vec<Word> = (0..spec.alphabet_size() as Symbol).map(|s| vec![s]).collect();
        for _ in 1..depth {
            let mut next = Vec::with_capacity(words.len() * 2);
            for w in &words {
                for b in spec.successors(*w.last().unwrap()) {
                    let mut v = w.clone();
                    v.push(b);
                    next.push(v);
                }
            }
            words = next;
        }
        let alphabet_size = spec.alphabet_size();
        let mut codes = vec![u32::MAX; alphabet_size.pow(depth as u32)];
        for (i, w) in words.iter().enumerate() {
            codes[encode(w, alphabet_size)] = i as u32;
        }
        Ok(WordSet {
            depth,
            alphabet_size,
            words,
            codes,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &[Symbol] {
        &self.words[i]
    }

    pub fn index_of(&self, word: &[Symbol]) -> Option<usize> {
        if word.len() != self.depth || word.iter().any(|&s| s as usize >= self.alphabet_size) {
            return None;
        }
        match self.codes[encode(word, self.alphabet_size)] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }

    /// Index of the cylinder containing `x`.
    pub fn index_of_point(&self, x: &SymbolicPoint) -> Option<usize> {
        self.index_of(&x.prefix(self.depth))
    }
}

/// De Bruijn-style graph of admissible `depth`-words: `u → v` when `u` and
/// `v` overlap in `depth - 1` symbols and `u·v_last` is admissible.
#[derive(Clone, Debug)]
pub struct WordGraph {
    vertices: WordSet,
    edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    edge_weight: Vec<f64>,
}

impl WordGraph {
    pub fn new(spec: &Subshift, depth: usize) -> Result<Self> {
        Self::with_budget(spec, depth, DEFAULT_VERTEX_BUDGET)
    }

    pub fn with_budget(spec: &Subshift, depth: usize, budget: usize) -> Result<Self> {
        let vertices = WordSet::new(spec, depth, budget)?;
        let n = vertices.len();
        let mut edges = Vec::new();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (u, word) in vertices.words().iter().enumerate() {
            for b in spec.successors(*word.last().unwrap()) {
                let mut next = word[1..].to_vec();
                next.push(b);
                let v = vertices.index_of(&next).expect("successor word is admissible");
                out_edges[u].push(edges.len());
                in_edges[v].push(edges.len());
                edges.push((u, v));
            }
        }
        let edge_weight = vec![0.0; edges.len()];
        Ok(WordGraph {
            vertices,
            edges,
            out_edges,
            in_edges,
            edge_weight,
        })
    }

    pub fn depth(&self) -> usize {
        self.vertices.depth()
    }

    pub fn vertices(&self) -> &WordSet {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn out_edges(&self, u: usize) -> &[usize] {
        &self.out_edges[u]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// The `(depth + 1)`-word spelled by edge `e`.
    pub fn edge_word(&self, e: usize) -> Word {
        let (u, v) = self.edges[e];
        let mut w = self.vertices.word(u).to_vec();
        w.push(*self.vertices.word(v).last().unwrap());
        w
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.out_edges[u].iter().copied().find(|&e| self.edges[e].1 == v)
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weight
    }

    pub fn set_edge_weights(&mut self, weights: Vec<f64>) {
        assert_eq!(weights.len(), self.edges.len());
        self.edge_weight = weights;
    }

    /// Vertex sequence of the cycle traced by the periodic orbit of `cycle`.
    pub fn cycle_vertices(&self, cycle: &[Symbol]) -> Option<Vec<usize>> {
        let p = cycle.len();
        let k = self.depth();
        (0..p)
            .map(|i| {
                let w: Word = (0..k).map(|j| cycle[(i + j) % p]).collect();
                self.vertices.index_of(&w)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(pre: &str, cyc: &str) -> SymbolicPoint {
        SymbolicPoint::new(parse_word(pre).unwrap(), parse_word(cyc).unwrap()).unwrap()
    }

    #[test]
    fn build_examples() {
        let full = Subshift::new(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(full.mixing());
        let golden = Subshift::new(2, &[vec![1, 1], vec![1, 0]]).unwrap();
        assert!(golden.mixing());
        let identity = Subshift::new(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!identity.mixing());
        // periodic but irreducible
        let swap = Subshift::new(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!swap.mixing());
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            Subshift::new(2, &[vec![1, 1], vec![1]]),
            Err(Error::NonSquareMatrix { .. })
        ));
        assert!(matches!(
            Subshift::new(2, &[vec![1, 1], vec![0, 0]]),
            Err(Error::DeadSymbol { symbol: 1, .. })
        ));
        assert!(matches!(
            Subshift::new(2, &[vec![1, 0], vec![1, 0]]),
            Err(Error::DeadSymbol { symbol: 1, direction: "incoming" })
        ));
        assert!(matches!(
            Subshift::new(2, &[vec![1, 2], vec![1, 0]]),
            Err(Error::InvalidEntry { .. })
        ));
    }

    #[test]
    fn normal_form() {
        assert_eq!(pt("1", "01"), pt("", "10"));
        assert_eq!(pt("", "0101"), pt("", "01"));
        assert_eq!(pt("000", "0"), pt("", "0"));
        assert_eq!(pt("0010", "00").preperiod(), &[0, 0, 1]);
        assert_eq!(pt("", "01").shift(), pt("", "10"));
        assert_eq!(pt("1", "0").shift(), pt("", "0"));
        assert_eq!(pt("01", "1").shift_by(5), pt("", "1"));
    }

    #[test]
    fn distance_examples() {
        let m = MetricParams::default();
        assert_eq!(distance(&pt("", "0"), &pt("", "0"), &m), 0.0);
        assert_eq!(distance(&pt("", "0"), &pt("1", "0"), &m), 1.0);
        assert_eq!(distance(&pt("001", "0"), &pt("", "0"), &m), 0.25);
    }

    #[test]
    fn inverse_branch_examples() {
        let full = Subshift::full(2);
        let golden = Subshift::golden_mean();
        let pre = inverse_branches(&full, &pt("", "0"));
        assert_eq!(pre, vec![pt("", "0"), pt("1", "0")]);
        let pre = inverse_branches(&golden, &pt("1", "0"));
        assert_eq!(pre, vec![pt("01", "0")]);
        let pre = inverse_branches(&full, &pt("", "01"));
        assert_eq!(pre, vec![pt("0", "01"), pt("", "10")]);
    }

    #[test]
    fn word_graph_examples() {
        let g = WordGraph::new(&Subshift::full(2), 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 4));
        let g = WordGraph::new(&Subshift::golden_mean(), 2).unwrap();
        let words: Vec<String> = g.vertices().words().iter().map(|w| word_to_string(w)).collect();
        assert_eq!(words, ["00", "01", "10"]);
        let edges: Vec<String> = (0..g.edge_count()).map(|e| word_to_string(&g.edge_word(e))).collect();
        assert_eq!(edges, ["000", "001", "010", "100", "101"]);
        let g = WordGraph::new(&Subshift::full(2), 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 16));
    }

    #[test]
    fn word_graph_budget() {
        let err = WordGraph::with_budget(&Subshift::full(2), 11, 1024).unwrap_err();
        assert!(matches!(err, Error::DepthOverflow { depth: 11, .. }));
    }

    #[test]
    fn canonical_probe_closes_with_return_path() {
        let golden = Subshift::golden_mean();
        // "1" cannot follow itself, so the probe returns through 0.
        assert_eq!(golden.canonical_probe(&[1]).unwrap(), pt("", "10"));
        assert_eq!(golden.canonical_probe(&[0, 1]).unwrap(), pt("", "01"));
        let identity = Subshift::new(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(identity.canonical_probe(&[1]).unwrap(), pt("", "1"));
    }

    #[test]
    fn orbit_word_is_least_primitive_rotation() {
        assert_eq!(orbit_word(&[1, 0, 1, 0]), vec![0, 1]);
        assert_eq!(orbit_word(&[1, 0, 0]), vec![0, 0, 1]);
    }
}
