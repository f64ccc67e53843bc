//! Shadowing of pseudo-orbits with finitely many jumps.
//!
//! When every jump `d(σx_i, x_{i+1})` is below `1 - λ`, consecutive points
//! agree in their first symbol, so the word `x₀[0] x₁[0] … x_{N-1}[0]` is
//! admissible and the composed inverse branches have an explicit symbolic
//! fixed point. No numerical iteration is involved.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::shift::{distance, word_to_string, MetricParams, Subshift, SymbolicPoint};

#[derive(Clone, Debug)]
pub struct PseudoOrbit {
    points: Vec<SymbolicPoint>,
    delta: f64,
    jumps: Vec<usize>,
    closed: bool,
    metric: MetricParams,
}

impl PseudoOrbit {
    /// `points` is `x₀ … x_N`. With `delta = None` the largest jump is used.
    pub fn new(points: Vec<SymbolicPoint>, delta: Option<f64>, metric: MetricParams) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("a pseudo-orbit needs at least two points".into()));
        }
        let sizes: Vec<f64> = points
            .windows(2)
            .map(|w| distance(&w[0].shift(), &w[1], &metric))
            .collect();
        let largest = sizes.iter().copied().fold(0.0, f64::max);
        let delta = delta.unwrap_or(largest);
        if let Some(index) = sizes.iter().position(|&s| s > delta) {
            return Err(Error::JumpTooLarge {
                index,
                jump: sizes[index],
                delta,
            });
        }
        let jumps = (0..sizes.len()).filter(|&i| sizes[i] > 0.0).collect();
        let closed = points.first() == points.last();
        Ok(PseudoOrbit {
            points,
            delta,
            jumps,
            closed,
            metric,
        })
    }

    pub fn points(&self) -> &[SymbolicPoint] {
        &self.points
    }

    /// Number of steps `N`.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn jumps(&self) -> &[usize] {
        &self.jumps
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn metric(&self) -> MetricParams {
        self.metric
    }
}

/// The true orbit tracking `po`: `N`-periodic when `po` is closed, and with
/// `σᴺp = x_N` otherwise.
pub fn shadow(po: &PseudoOrbit, spec: &Subshift) -> Result<SymbolicPoint> {
    let limit = po.metric.epsilon1();
    if po.delta >= limit {
        return Err(Error::DeltaTooLarge {
            delta: po.delta,
            limit,
        });
    }
    for x in &po.points {
        spec.check_point(x)?;
    }
    let n = po.len();
    let word: Vec<_> = po.points[..n].iter().map(|x| x.symbol(0)).collect();
    for i in 0..n {
        let next = po.points[i + 1].symbol(0);
        if !spec.allows(word[i], next) {
            return Err(Error::BranchMissing(i));
        }
    }
    if po.closed {
        SymbolicPoint::new(Vec::new(), word)
    } else {
        let tail = &po.points[n];
        let mut pre = word;
        pre.extend_from_slice(tail.preperiod());
        SymbolicPoint::new(pre, tail.cycle().to_vec())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowingCertificate {
    pub p: SymbolicPoint,
    pub jumps: usize,
    pub delta: f64,
    /// `λδ/(1 - λ)`.
    pub shadow_radius: f64,
    /// `M·K₁·δ^α`.
    pub birkhoff_bound: f64,
    /// `(M+1)·Hold_α(A)/(1 - λ^α)/(1 - λ)^α`.
    pub k1: f64,
    pub measured_max_distance: f64,
    pub measured_sum_deviation: f64,
    /// Contraction base of the metric.
    pub lambda: f64,
    /// The same metric written with an expansion rate `1/λ > 1`.
    pub expanding_rate: f64,
    /// Jump threshold `(1 - λ)·ε₀`, equal to `(1 - 1/rate)·ε₀` in the
    /// expanding form.
    pub epsilon1: f64,
}

/// Measure how closely `p` tracks `po` and check both shadowing bounds.
pub fn certify(po: &PseudoOrbit, p: &SymbolicPoint, a: &Potential) -> Result<ShadowingCertificate> {
    let m = po.metric;
    let jumps = po.jumps.len();
    let hold = a.holder_constant_with(m.alpha);
    let k1 = (jumps as f64 + 1.0) * hold / (1.0 - m.lambda.powf(m.alpha)) / (1.0 - m.lambda).powf(m.alpha);
    let shadow_radius = m.lambda * po.delta / (1.0 - m.lambda);
    let birkhoff_bound = jumps as f64 * k1 * po.delta.powf(m.alpha);

    let mut measured_max_distance: f64 = 0.0;
    let mut prefix = vec![0.0];
    let mut orbit = p.clone();
    for x in &po.points {
        measured_max_distance = measured_max_distance.max(distance(&orbit, x, &m));
        let diff = a.eval(&orbit)? - a.eval(x)?;
        prefix.push(prefix.last().unwrap() + diff);
        orbit = orbit.shift();
    }
    let hi = prefix.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = prefix.iter().copied().fold(f64::INFINITY, f64::min);
    let measured_sum_deviation = hi - lo;

    if measured_max_distance > shadow_radius + 1e-12 {
        return Err(Error::BoundViolated(format!(
            "distance {measured_max_distance} above radius {shadow_radius} for p = {p}"
        )));
    }
    if measured_sum_deviation > birkhoff_bound * (1.0 + 1e-12) + 1e-15 {
        return Err(Error::BoundViolated(format!(
            "sum deviation {measured_sum_deviation} above {birkhoff_bound} for p = {p}"
        )));
    }
    Ok(ShadowingCertificate {
        p: p.clone(),
        jumps,
        delta: po.delta,
        shadow_radius,
        birkhoff_bound,
        k1,
        measured_max_distance,
        measured_sum_deviation,
        lambda: m.lambda,
        expanding_rate: 1.0 / m.lambda,
        epsilon1: m.epsilon1(),
    })
}

/// Short description used in error messages and logs.
pub fn describe(po: &PseudoOrbit) -> String {
    let first: Vec<_> = po.points.iter().map(|x| x.symbol(0)).collect();
    format!(
        "{} steps, {} jumps, delta {}, itinerary {}",
        po.len(),
        po.jumps.len(),
        po.delta,
        word_to_string(&first)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::parse_word;

    fn pt(pre: &str, cyc: &str) -> SymbolicPoint {
        SymbolicPoint::new(parse_word(pre).unwrap(), parse_word(cyc).unwrap()).unwrap()
    }

    fn orbit_segment(x: &SymbolicPoint, n: usize) -> Vec<SymbolicPoint> {
        (0..n).map(|k| x.shift_by(k)).collect()
    }

    fn depth1() -> Potential {
        Potential::from_fn(&Subshift::full(2), MetricParams::default(), 1, |w| -(w[0] as f64)).unwrap()
    }

    #[test]
    fn true_orbit_is_its_own_shadow() {
        let x = pt("0110", "01");
        let po = PseudoOrbit::new(orbit_segment(&x, 7), None, MetricParams::default()).unwrap();
        assert!(po.jumps().is_empty());
        let p = shadow(&po, &Subshift::full(2)).unwrap();
        assert_eq!(p, x);
        let c = certify(&po, &p, &depth1()).unwrap();
        assert_eq!(c.measured_sum_deviation, 0.0);
        assert_eq!(c.birkhoff_bound, 0.0);
    }

    #[test]
    fn fixed_point_loop() {
        // a closed loop at 0^∞ with a nominal jump allowance
        let zero = pt("", "0");
        let points = vec![zero.clone(); 6];
        let po = PseudoOrbit::new(points, Some(1.0 / 32.0), MetricParams::default()).unwrap();
        assert!(po.is_closed());
        assert_eq!(shadow(&po, &Subshift::full(2)).unwrap(), zero);
    }

    #[test]
    fn two_run_concatenation() {
        // a run through u = 0000 (tails 0101·0^∞), then a run through
        // v = 0101 (tails 0000·1^∞), closing back to the start
        let mut points: Vec<SymbolicPoint> = (0..4)
            .map(|i| pt(&format!("{}0101", &"0000"[i..]), "0"))
            .collect();
        points.extend((0..4).map(|j| pt(&format!("{}0000", &"0101"[j..]), "1")));
        points.push(points[0].clone());
        let po = PseudoOrbit::new(points, None, MetricParams::default()).unwrap();
        assert_eq!(po.jumps(), &[3, 7]);
        assert_eq!(po.delta(), 1.0 / 16.0);
        let p = shadow(&po, &Subshift::full(2)).unwrap();
        assert_eq!(p, SymbolicPoint::periodic(&parse_word("00000101").unwrap()).unwrap());
        let c = certify(&po, &p, &depth1()).unwrap();
        assert!(c.measured_max_distance <= c.shadow_radius);
        assert!(c.measured_sum_deviation <= c.birkhoff_bound);
    }

    #[test]
    fn rejects_large_jumps() {
        let po = PseudoOrbit::new(vec![pt("", "0"), pt("", "1")], None, MetricParams::default()).unwrap();
        assert!(matches!(shadow(&po, &Subshift::full(2)), Err(Error::DeltaTooLarge { .. })));
        assert!(matches!(
            PseudoOrbit::new(vec![pt("", "0"), pt("01", "0")], Some(0.01), MetricParams::default()),
            Err(Error::JumpTooLarge { index: 0, .. })
        ));
    }
}
