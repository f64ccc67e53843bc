//! Constructive perturbations: a bump that locks a periodic orbit as the
//! unique maximizer, penalties vanishing exactly on a measure's support,
//! separating functionals on finite measure families, and randomized
//! genericity experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::InvariantMeasure;
use crate::optimize;
use crate::potential::{affine_combine, Potential};
use crate::shift::{orbit_word, primitive_root, word_to_string, Subshift, Symbol, SymbolicPoint, Word};
use crate::simplex;
use crate::thermo;

/// Largest working depth a bump may need.
pub const MAX_WORKING_DEPTH: usize = 20;

/// Sizes of the locking bump and the constants it depends on.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbationParams {
    pub delta: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `(1 - λ)/2`.
    pub eta: f64,
    /// `K₁·(4/η)^γ`.
    pub q: f64,
    pub k1: f64,
    /// Smallest `K` with `1/(1 - λ^K) < 3/2` and `1 - (λ + λ^K)/(1 - λ^K) > η`.
    pub k_sep: usize,
    /// A third of the smallest distance between distinct orbit points.
    pub d_sep: f64,
}

/// Deficiency of `a` as a potential, with the maximal mean.
fn deficiency_potential(a: &Potential) -> Result<(Potential, f64)> {
    let r = optimize::max_mean(a)?;
    let v = optimize::subaction(a, &r)?;
    let b = optimize::deficiency(a, &v)?;
    Ok((b.as_potential(a)?, r.m0))
}

fn orbit_points(cycle: &[Symbol]) -> Result<Vec<SymbolicPoint>> {
    let root = primitive_root(cycle);
    let p = SymbolicPoint::periodic(root)?;
    Ok((0..root.len()).map(|i| p.shift_by(i)).collect())
}

/// Smallest distance between distinct points of the orbit; `ε₀` for a
/// fixed point.
fn orbit_separation(points: &[SymbolicPoint], a: &Potential) -> f64 {
    let m = a.metric();
    let mut sep = m.epsilon0();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            sep = sep.min(crate::shift::distance(&points[i], &points[j], &m));
        }
    }
    sep
}

impl PerturbationParams {
    pub fn new(a: &Potential, cycle: &[Symbol], delta: f64, beta: f64, gamma: f64) -> Result<Self> {
        let m = a.metric();
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!("delta = {delta} must lie in (0, 1)")));
        }
        if !(m.alpha <= beta && beta < gamma && gamma <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "exponents must satisfy alpha = {} <= beta = {beta} < gamma = {gamma} <= 1",
                m.alpha
            )));
        }
        if !a.subshift().closes(cycle) || cycle.is_empty() {
            return Err(Error::InadmissibleCycle(word_to_string(cycle)));
        }
        let lambda = m.lambda;
        let eta = 0.5 * (1.0 - lambda);
        let k_sep = (1..)
            .find(|&k| {
                let lk = lambda.powi(k as i32);
                1.0 / (1.0 - lk) < 1.5 && 1.0 - (lambda + lk) / (1.0 - lk) > eta
            })
            .expect("the conditions hold for large K");
        let (b, _) = deficiency_potential(a)?;
        let shadow_k1 = a.holder_constant_with(m.alpha) / (1.0 - lambda.powf(m.alpha)) / (1.0 - lambda).powf(m.alpha);
        let k1 = b.holder_constant_with(gamma).max(shadow_k1);
        let k1 = if k1 > 0.0 { k1 } else { 1.0 };
        let q = k1 * (4.0 / eta).powf(gamma);
        let d_sep = orbit_separation(&orbit_points(cycle)?, a) / 3.0;
        Ok(PerturbationParams {
            delta,
            beta,
            gamma,
            eta,
            q,
            k1,
            k_sep,
            d_sep,
        })
    }

    /// `4Q·δ^γ`.
    pub fn sup_bound(&self) -> f64 {
        4.0 * self.q * self.delta.powf(self.gamma)
    }

    /// `4Q·δ^{γ-β}`.
    pub fn holder_bound(&self) -> f64 {
        4.0 * self.q * self.delta.powf(self.gamma - self.beta)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LockCertificate {
    pub params: PerturbationParams,
    #[serde(serialize_with = "ser_word")]
    pub cycle: Word,
    pub working_depth: usize,
    pub orbit_separation: f64,
    /// Additive pressure correction `t`.
    pub t: f64,
    pub phi_sup: f64,
    pub phi_holder: f64,
    pub psi_sup: f64,
    pub psi_holder: f64,
    pub sup_bound: f64,
    pub holder_bound: f64,
    /// `2‖Φ‖₀`, the cruder bound for `‖Ψ‖₀`.
    pub psi_sup_chain: f64,
    /// `max (B + Φ)` over cylinders of the working depth, and `3Q·δ^γ`.
    pub bump_peak: f64,
    pub bump_target: f64,
    /// The peak is reached on the orbit cylinders and nowhere else.
    pub peak_on_orbit_only: bool,
    pub max_period: usize,
    pub brute_force_best: f64,
    pub brute_force_gap: Option<f64>,
}

fn ser_word<S: serde::Serializer>(w: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&word_to_string(w))
}

/// Build `Ψ = Φ + t` so that the orbit of `cycle^∞` is the unique maximizer
/// of `A + Ψ`, and confirm by brute force over periods `≤ max_period`.
/// Returns `Ψ` at the working depth.
pub fn lock_orbit(
    a: &Potential,
    cycle: &[Symbol],
    params: &PerturbationParams,
    max_period: usize,
) -> Result<(Potential, LockCertificate)> {
    let spec = a.subshift();
    if cycle.is_empty() || !spec.closes(cycle) {
        return Err(Error::InadmissibleCycle(word_to_string(cycle)));
    }
    let m = a.metric();
    let points = orbit_points(cycle)?;
    let separation = orbit_separation(&points, a);
    let delta = params.delta;
    if separation <= 2.0 * delta {
        return Err(Error::SeparationTooSmall {
            separation,
            needed: 2.0 * delta,
        });
    }
    let (b, _) = deficiency_potential(a)?;
    let radius_depth = (delta.ln() / m.lambda.ln()).ceil().max(0.0) as usize;
    let depth = (radius_depth + b.depth()).max(a.depth());
    if depth > MAX_WORKING_DEPTH {
        return Err(Error::DepthBudget {
            depth,
            budget: MAX_WORKING_DEPTH,
        });
    }
    let prefixes: Vec<Word> = points.iter().map(|p| p.prefix(depth)).collect();
    let (beta, gamma, q) = (params.beta, params.gamma, params.q);
    let slope = 3.0 * q * delta.powf(gamma - beta);
    let phi = Potential::from_fn(spec, m, depth, |w| {
        // nearest orbit point by longest common prefix
        let (j, i) = prefixes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(w).take_while(|(x, y)| x == y).count(), i))
            .max_by_key(|&(j, i)| (j, std::cmp::Reverse(i)))
            .unwrap();
        let dist_beta = if j >= depth { 0.0 } else { m.at_depth(j).powf(beta) };
        let bp = b.value_on_prefix(&prefixes[i]).expect("orbit prefix is admissible");
        ((slope - bp / delta.powf(beta)) * (delta.powf(beta) - dist_beta)).max(0.0)
    })?;

    let base = a.lift(depth)?;
    let bumped = affine_combine(&base, 1.0, 0.0, Some(&phi))?;
    let t = thermo::pressure(&base, 1.0)? - thermo::pressure(&bumped, 1.0)?;
    let psi = phi.map_values(|v| v + t);

    let target = 3.0 * q * delta.powf(gamma);
    let b_phi = affine_combine(&b.lift(depth)?, 1.0, 0.0, Some(&phi))?;
    let peak = b_phi.max_value();
    let tie = 1e-12 * (1.0 + peak.abs());
    let peak_on_orbit_only = b_phi
        .words()
        .words()
        .iter()
        .zip(b_phi.values())
        .all(|(w, &v)| (v >= peak - tie) == prefixes.contains(w));

    let locked = affine_combine(&base, 1.0, t, Some(&phi))?;
    let bf = optimize::brute_force(&locked, max_period)?;
    let want = orbit_word(cycle);
    let gap = bf.gap();
    if bf.argmax != [want.clone()] || !gap.is_some_and(|g| g > 0.0) {
        return Err(Error::LockFailed(format!(
            "brute force to period {max_period} found maximizers {:?} with gap {:?}",
            bf.argmax.iter().map(|w| word_to_string(w)).collect::<Vec<_>>(),
            gap
        )));
    }

    let phi_sup = phi.sup_norm();
    let cert = LockCertificate {
        params: params.clone(),
        cycle: want,
        working_depth: depth,
        orbit_separation: separation,
        t,
        phi_sup,
        phi_holder: phi.holder_constant_with(beta),
        psi_sup: psi.sup_norm(),
        psi_holder: psi.holder_constant_with(beta),
        sup_bound: params.sup_bound(),
        holder_bound: params.holder_bound(),
        psi_sup_chain: 2.0 * phi_sup,
        bump_peak: peak,
        bump_target: target,
        peak_on_orbit_only,
        max_period,
        brute_force_best: bf.best,
        brute_force_gap: gap,
    };
    Ok((psi, cert))
}

/// `A + Ψ` with `Ψ = -strength·dist(·, supp μ)^β` at depth `depth`, where the
/// distance from `[w]` is `λ^j` for the longest prefix `j` that `w` shares
/// with a support word. `Ψ` vanishes on support cylinders.
pub fn support_penalty(
    a: &Potential,
    mu: &InvariantMeasure,
    strength: f64,
    beta: f64,
    depth: usize,
) -> Result<Potential> {
    let depth = depth.max(a.depth());
    let m = a.metric();
    let support = mu.support_words(depth);
    let penalty = Potential::from_fn(a.subshift(), m, depth, |w| {
        let j = support
            .iter()
            .map(|s| s.iter().zip(w).take_while(|(x, y)| x == y).count())
            .max()
            .unwrap_or(0);
        if j >= depth {
            0.0
        } else {
            -strength * m.at_depth(j).powf(beta)
        }
    })?;
    affine_combine(a, 1.0, 0.0, Some(&penalty))
}

/// Coefficients of a test-function combination whose integral is uniquely
/// maximized at the target among a finite family of measures. Separation is
/// only over the supplied finite test family.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatingFunctional {
    pub coefficients: Vec<f64>,
    pub target: usize,
    /// `Σ λ_i ∫w_i dμ_j` for every measure.
    pub values: Vec<f64>,
    /// Target value minus the best other value.
    pub margin: f64,
    pub test_family_size: usize,
}

/// Solve `max s` over `λ ∈ [-1, 1]^n`, `s ≤ 1` subject to
/// `s ≤ λ·(P(μ_target) - P(μ_j))` for every `j ≠ target`.
pub fn separating_functional(
    measures: &[InvariantMeasure],
    tests: &[Potential],
    target: usize,
) -> Result<SeparatingFunctional> {
    if target >= measures.len() {
        return Err(Error::InvalidArgument(format!("target {target} is out of range")));
    }
    if tests.is_empty() {
        return Err(Error::InvalidArgument("no test functions".into()));
    }
    let n = tests.len();
    let moments: Vec<Vec<f64>> = measures
        .iter()
        .map(|mu| tests.iter().map(|w| mu.integrate(w)).collect())
        .collect();
    // variables: λ⁺ (n), λ⁻ (n), s
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (j, mj) in moments.iter().enumerate() {
        if j == target {
            continue;
        }
        let diff: Vec<f64> = (0..n).map(|i| moments[target][i] - mj[i]).collect();
        let mut row: Vec<f64> = diff.iter().map(|d| -d).collect();
        row.extend(diff.iter().copied());
        row.push(1.0);
        rows.push(row);
        rhs.push(0.0);
    }
    for i in 0..2 * n + 1 {
        let mut row = vec![0.0; 2 * n + 1];
        row[i] = 1.0;
        rows.push(row);
        rhs.push(1.0);
    }
    let mut c = vec![0.0; 2 * n + 1];
    c[2 * n] = 1.0;
    let sol = simplex::maximize(&c, &rows, &rhs)?;
    let coefficients: Vec<f64> = (0..n).map(|i| sol.x[i] - sol.x[n + i]).collect();
    let values: Vec<f64> = moments
        .iter()
        .map(|mj| mj.iter().zip(&coefficients).map(|(x, l)| x * l).sum())
        .collect();
    let others = values
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != target)
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = values[target] - others;
    let scale = moments.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
    if !(sol.value > 1e-9 * scale && margin > 0.0) {
        return Err(Error::NotExtreme(target));
    }
    Ok(SeparatingFunctional {
        coefficients,
        target,
        values,
        margin,
        test_family_size: n,
    })
}

/// One random potential of a genericity experiment.
#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub sample_id: usize,
    pub m0: f64,
    /// The maximizer is a single periodic orbit with gap above `1e-6`.
    pub unique: bool,
    pub period: usize,
    /// Brute-force gap to the best other orbit; NaN when there is none.
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericityStats {
    pub samples: Vec<SampleRecord>,
    pub unique_count: usize,
    /// Fraction of samples with a unique periodic maximizer; NaN for no samples.
    pub frequency: f64,
    pub min_gap: f64,
    pub median_gap: f64,
    pub max_gap: f64,
}

impl GenericityStats {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample_id,m0,unique_flag,period,gap\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{:.16e},{},{},{:.16e}\n",
                s.sample_id, s.m0, s.unique as u8, s.period, s.gap
            ));
        }
        out
    }
}

/// The generator for sample `index`: one ChaCha stream per sample, so the
/// draws do not depend on scheduling.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Potential with independent uniform `[0, 1)` values per word.
pub fn random_potential(spec: &Subshift, depth: usize, rng: &mut impl Rng) -> Result<Potential> {
    Potential::from_fn(spec, Default::default(), depth, |_| rng.gen::<f64>())
}

const GAP_THRESHOLD: f64 = 1e-6;

pub fn genericity_experiment(
    spec: &Subshift,
    depth: usize,
    samples: usize,
    max_period: usize,
    seed: u64,
) -> Result<GenericityStats> {
    let records: Vec<SampleRecord> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let a = random_potential(spec, depth, &mut sample_rng(seed, i))?;
            let r = optimize::max_mean(&a)?;
            let bf = optimize::brute_force(&a, max_period)?;
            let gap = bf.gap().unwrap_or(f64::NAN);
            let winner = orbit_word(r.winner());
            let unique = r.is_unique()
                && bf.argmax.len() == 1
                && bf.argmax[0] == winner
                && winner.len() <= max_period
                && gap > GAP_THRESHOLD;
            Ok(SampleRecord {
                sample_id: i,
                m0: r.m0,
                unique,
                period: winner.len(),
                gap,
            })
        })
        .collect::<Result<_>>()?;
    let unique_count = records.iter().filter(|r| r.unique).count();
    let mut gaps: Vec<f64> = records.iter().map(|r| r.gap).filter(|g| g.is_finite()).collect();
    gaps.sort_by(f64::total_cmp);
    let pick = |q: f64| {
        if gaps.is_empty() {
            f64::NAN
        } else {
            gaps[((gaps.len() - 1) as f64 * q).round() as usize]
        }
    };
    Ok(GenericityStats {
        frequency: unique_count as f64 / samples as f64,
        unique_count,
        min_gap: pick(0.0),
        median_gap: pick(0.5),
        max_gap: pick(1.0),
        samples: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{parse_word, MetricParams};

    fn metric() -> MetricParams {
        MetricParams::new(0.5, 0.5).unwrap()
    }

    fn flat() -> Potential {
        Potential::constant(&Subshift::full(2), metric(), 1, -(2f64.ln())).unwrap()
    }

    #[test]
    fn constants_for_half() {
        let a = flat();
        let p = PerturbationParams::new(&a, &[0, 1], 0.01, 0.6, 0.8).unwrap();
        assert_eq!(p.k_sep, 3);
        assert_eq!(p.eta, 0.25);
        assert_eq!(p.k1, 1.0);
        assert!((p.q - 16f64.powf(0.8)).abs() < 1e-12);
        assert!((p.d_sep - 1.0 / 3.0).abs() < 1e-15);
        assert!(PerturbationParams::new(&a, &[0], 0.01, 0.4, 0.8).is_err());
        assert!(PerturbationParams::new(&a, &[0], 0.01, 0.8, 0.8).is_err());
    }

    #[test]
    fn locks_flat_potential() {
        let a = flat();
        for cycle in ["0", "01", "001"] {
            let c = parse_word(cycle).unwrap();
            let params = PerturbationParams::new(&a, &c, 0.01, 0.6, 0.8).unwrap();
            let (psi, cert) = lock_orbit(&a, &c, &params, 12).unwrap();
            assert!(cert.psi_sup <= cert.sup_bound);
            assert!(cert.psi_holder <= cert.holder_bound);
            assert!(cert.peak_on_orbit_only);
            assert!((cert.bump_peak - cert.bump_target).abs() < 1e-12);
            assert!(cert.t <= 0.0 && cert.t.abs() <= cert.phi_sup);
            let locked = affine_combine(&a.lift(psi.depth()).unwrap(), 1.0, 0.0, Some(&psi)).unwrap();
            assert!(thermo::pressure(&locked, 1.0).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_close_orbit_points() {
        let a = flat();
        let c = parse_word("0001").unwrap();
        let params = PerturbationParams::new(&a, &c, 0.2, 0.6, 0.8).unwrap();
        assert!(matches!(lock_orbit(&a, &c, &params, 8), Err(Error::SeparationTooSmall { .. })));
    }

    #[test]
    fn keeps_an_existing_unique_maximizer() {
        let a = Potential::from_fn(&Subshift::full(2), metric(), 1, |w| -(w[0] as f64)).unwrap();
        let before = optimize::brute_force(&a, 12).unwrap().gap().unwrap();
        let params = PerturbationParams::new(&a, &[0], 0.05, 0.6, 0.8).unwrap();
        let (_, cert) = lock_orbit(&a, &[0], &params, 12).unwrap();
        assert!(cert.brute_force_gap.unwrap() >= before - 1e-12);
    }

    #[test]
    fn penalty_vanishes_on_support() {
        let spec = Subshift::full(2);
        let a = Potential::constant(&spec, metric(), 1, 0.0).unwrap();
        let mu = InvariantMeasure::periodic(&spec, &[0]).unwrap();
        let pen = support_penalty(&a, &mu, 1.0, 0.5, 4).unwrap();
        assert_eq!(pen.value_of(&[0, 0, 0, 0]), Some(0.0));
        assert!(pen.values().iter().filter(|&&v| v < 0.0).count() == 15);
        assert_eq!(pen.cycle_average(&[0]), Some(0.0));
        assert!(pen.cycle_average(&[0, 1]).unwrap() < 0.0);
    }

    #[test]
    fn separation_examples() {
        let spec = Subshift::full(2);
        let dirac = |c: &[Symbol]| InvariantMeasure::periodic(&spec, c).unwrap();
        let ind = |s: Symbol| Potential::from_fn(&spec, metric(), 1, |w| (w[0] == s) as u8 as f64).unwrap();
        let tests = vec![ind(0), ind(1)];
        let f = separating_functional(&[dirac(&[0]), dirac(&[1])], &tests, 0).unwrap();
        assert!(f.margin > 0.0);
        // ν_{01} is the midpoint of the two Diracs in these moments
        let r = separating_functional(&[dirac(&[0]), dirac(&[1]), dirac(&[0, 1])], &tests, 2);
        assert!(matches!(r, Err(Error::NotExtreme(2))));
    }

    #[test]
    fn genericity_basics() {
        let spec = Subshift::full(2);
        let empty = genericity_experiment(&spec, 2, 0, 8, 0).unwrap();
        assert!(empty.samples.is_empty());
        let s = genericity_experiment(&spec, 1, 20, 8, 3).unwrap();
        assert_eq!(s.frequency, 1.0);
        let again = genericity_experiment(&spec, 1, 20, 8, 3).unwrap();
        assert_eq!(s.to_csv(), again.to_csv());
    }
}
