//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ergopt::circle::{self, CircleMap};
use ergopt::measure::{measure_distance, InvariantMeasure};
use ergopt::optimize;
use ergopt::perturb::{self, random_potential, sample_rng, PerturbationParams};
use ergopt::potential::{affine_combine, random_point_with_prefix, Potential};
use ergopt::shadow::{self, PseudoOrbit};
use ergopt::shift::{orbit_word, MetricParams, Subshift, SymbolicPoint, Word};
use ergopt::thermo;
use rand::Rng;

fn report(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn subshift(i: usize) -> Subshift {
    match i % 3 {
        0 => Subshift::full(2),
        1 => Subshift::golden_mean(),
        _ => Subshift::full(3),
    }
}

/// Sixty seeded potentials: alphabets 2 and 3, depths 1 to 3.
fn oracle_potentials() -> Vec<Potential> {
    (0..60)
        .map(|i| {
            let depth = 1 + (i / 3) % 3;
            random_potential(&subshift(i), depth, &mut sample_rng(0, i)).unwrap()
        })
        .collect()
}

fn orbit_set(cycles: &[Word]) -> BTreeSet<Word> {
    cycles.iter().map(|c| orbit_word(c)).collect()
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let pots = oracle_potentials();
    for (i, a) in pots.iter().enumerate() {
        let r = optimize::max_mean(a).unwrap();
        let bf = optimize::brute_force(a, 12).unwrap();
        if (r.m0 - bf.best).abs() > 1e-10 || orbit_set(&r.cycles) != orbit_set(&bf.argmax) {
            failures.push(i);
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        failures.is_empty() && elapsed < Duration::from_secs(30),
        &format!("{} potentials, mismatches {failures:?}, {elapsed:.2?}", pots.len()),
    );
}

#[test]
fn criterion_2_coboundary() {
    let mut failures = Vec::new();
    for (i, a) in oracle_potentials().iter().enumerate() {
        let r = optimize::max_mean(a).unwrap();
        let v = optimize::subaction(a, &r).unwrap();
        let b = optimize::deficiency(a, &v).unwrap();
        let all_below = b.values.iter().all(|&x| x <= 1e-9);
        let recurrent_max = b
            .values
            .iter()
            .zip(&b.recurrent)
            .filter(|(_, &rec)| rec)
            .map(|(&x, _)| x)
            .fold(f64::NEG_INFINITY, f64::max);
        let cycles_zero = r
            .cycles
            .iter()
            .all(|c| b.cycle_sum(c).is_some_and(|s| (-1e-9..=1e-9).contains(&s)));
        if !(all_below && recurrent_max >= -1e-9 && cycles_zero) {
            failures.push(i);
        }
    }
    report(2, failures.is_empty(), &format!("failures {failures:?}"));
}

#[test]
fn criterion_3_mane_table() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (i, a) in oracle_potentials().iter().enumerate() {
        let r = optimize::max_mean(a).unwrap();
        let t = optimize::mane_table_at(a, &r, 3).unwrap();
        let e = &t.entries;
        let n = e.len();
        let mut ok = (0..n).all(|u| e[u][u].is_none_or(|s| s <= 1e-9));
        for u in 0..n {
            for v in 0..n {
                let Some(x) = e[u][v] else { continue };
                for w in 0..n {
                    if let Some(y) = e[v][w] {
                        ok &= e[u][w].is_some_and(|z| x + y <= z + 1e-9);
                    }
                }
            }
        }
        let aubry = optimize::aubry_set(&t);
        ok &= r.cycles.iter().all(|c| aubry.contains_cycle(c));
        if !ok {
            failures.push(i);
        }
    }
    let elapsed = start.elapsed();
    report(
        3,
        failures.is_empty() && elapsed < Duration::from_secs(10),
        &format!("failures {failures:?}, {elapsed:.2?}"),
    );
}

/// Runs of true orbits joined by up to three jumps of size at most `2^-5`.
fn random_pseudo_orbit(spec: &Subshift, rng: &mut impl Rng) -> Vec<SymbolicPoint> {
    let jumps = rng.gen_range(0..=3);
    let mut points = Vec::new();
    let mut base = random_point_with_prefix(spec, &[rng.gen_range(0..2)], rng, 32).unwrap();
    for seg in 0..=jumps {
        let len = rng.gen_range(2..8);
        for i in 0..len {
            points.push(base.shift_by(i));
        }
        if seg < jumps {
            // agree with the image of the last point on at least 5 symbols
            let keep = rng.gen_range(5..9);
            let word = points.last().unwrap().shift().prefix(keep);
            base = random_point_with_prefix(spec, &word, rng, 32).unwrap();
        } else {
            points.push(points.last().unwrap().shift());
        }
    }
    points
}

#[test]
fn criterion_4_shadowing() {
    let mut violations = 0;
    let mut count = 0;
    let mut max_delta: f64 = 0.0;
    for i in 0..120 {
        let spec = if i % 2 == 0 { Subshift::full(2) } else { Subshift::golden_mean() };
        let mut rng = sample_rng(4, i);
        let points = random_pseudo_orbit(&spec, &mut rng);
        let metric = MetricParams::default();
        let a = random_potential(&spec, 1 + i % 3, &mut rng).unwrap().with_metric(metric);
        let po = PseudoOrbit::new(points, None, metric).unwrap();
        assert!(po.jumps().len() <= 3 && po.delta() <= 0.05);
        max_delta = max_delta.max(po.delta());
        let p = shadow::shadow(&po, &spec).unwrap();
        count += 1;
        match shadow::certify(&po, &p, &a) {
            Ok(c) => {
                let radius = metric.lambda * po.delta() / (1.0 - metric.lambda);
                let k1 = (c.jumps as f64 + 1.0) * a.holder_constant_with(metric.alpha)
                    / (1.0 - metric.lambda.powf(metric.alpha))
                    / (1.0 - metric.lambda).powf(metric.alpha);
                if c.measured_max_distance > radius + 1e-12
                    || c.measured_sum_deviation > c.jumps as f64 * k1 * po.delta().powf(metric.alpha) + 1e-12
                {
                    violations += 1;
                }
            }
            Err(_) => violations += 1,
        }
    }
    report(
        4,
        violations == 0 && count >= 100,
        &format!("{count} pseudo-orbits, max delta {max_delta}, violations {violations}"),
    );
}

fn two_level(spec: &Subshift) -> Potential {
    Potential::from_fn(spec, MetricParams::default(), 1, |w| -(w[0] as f64)).unwrap()
}

#[test]
fn criterion_5_thermodynamics() {
    let golden = Subshift::golden_mean();
    let zero = Potential::constant(&golden, MetricParams::default(), 1, 0.0).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut ok = (thermo::pressure(&zero, 1.0).unwrap() - phi.ln()).abs() <= 1e-10;
    let mut residual: f64 = thermo::equilibrium(&zero, 1.0).unwrap().variational_residual;

    let a = two_level(&Subshift::full(2));
    for t in [0.0, 1.0, 5.0, 20.0] {
        let p = thermo::pressure(&a, t).unwrap();
        ok &= (p - (1.0 + (-t).exp()).ln()).abs() <= 1e-10;
        residual = residual.max(thermo::equilibrium(&a, t).unwrap().variational_residual);
    }
    for (i, b) in oracle_potentials().iter().enumerate().take(12) {
        if b.subshift().mixing() {
            residual = residual.max(thermo::equilibrium(b, 1.0 + i as f64).unwrap().variational_residual);
        }
    }
    ok &= residual <= 1e-8;

    let spec = Subshift::full(2);
    let base = random_potential(&spec, 2, &mut sample_rng(5, 0)).unwrap();
    let dir = random_potential(&spec, 2, &mut sample_rng(5, 1)).unwrap();
    let d = thermo::pressure_derivative_check(&base, &dir, 0.05).unwrap();
    ok &= d.passes;
    report(
        5,
        ok,
        &format!("max variational residual {residual:.3e}, derivative ratios {:?}", d.ratios),
    );
}

#[test]
fn criterion_6_zero_temperature() {
    let spec = Subshift::full(2);
    let a = two_level(&spec);
    let grid = [1.0, 2.0, 4.0, 8.0, 16.0];
    let scan = thermo::zero_temp_scan(&a, &grid, 3).unwrap();
    let dirac = InvariantMeasure::periodic(&spec, &[0]).unwrap();
    let mut ok = true;
    for (s, &t) in scan.states.iter().zip(&grid) {
        let want = -(-t).exp() / (1.0 + (-t).exp());
        ok &= (s.energy - want).abs() <= 1e-8;
    }
    ok &= scan.states.windows(2).all(|w| w[1].energy > w[0].energy);
    let dists: Vec<f64> = scan
        .states
        .iter()
        .map(|s| measure_distance(&s.equilibrium, &dirac, 3).unwrap())
        .collect();
    ok &= dists.windows(2).all(|w| w[1] < w[0]) && dists[4] <= 1e-3;

    let long_grid: Vec<f64> = (0..=16).map(|i| 2f64.powi(i)).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, b) in oracle_potentials().iter().enumerate() {
        let r = optimize::max_mean(b).unwrap();
        if !r.is_unique() || !b.subshift().mixing() {
            continue;
        }
        checked += 1;
        let scan = thermo::zero_temp_scan(b, &long_grid, 3).unwrap();
        let last = scan.states.last().unwrap().energy;
        if !scan.energy_nondecreasing || (last - r.m0).abs() > 1e-3 {
            failures.push(i);
        }
    }
    ok &= failures.is_empty();
    report(
        6,
        ok,
        &format!("distances {dists:?}, {checked} unique-maximizer potentials, failures {failures:?}"),
    );
}

#[test]
fn criterion_7_circle_round_trips() {
    let start = Instant::now();
    let table = circle::coding_table(&CircleMap::Doubling, 10).unwrap();
    let size = table.theta().len() - 1;
    let identity = table
        .theta()
        .iter()
        .enumerate()
        .all(|(j, &x)| (x - j as f64 / size as f64).abs() <= 1e-9);
    let (g, _) = circle::potential_from_map(&CircleMap::Doubling, 8).unwrap();
    let flat_g = g.values().iter().all(|&v| (v + 2f64.ln()).abs() <= 1e-6);

    let spec = Subshift::full(2);
    let minus_log2 = Potential::constant(&spec, MetricParams::default(), 1, -(2f64.ln())).unwrap();
    let (d, _) = circle::map_from_potential(&minus_log2, 12).unwrap();
    let doubling_back = (0..=1000).all(|i| {
        let x = i as f64 / 1000.0;
        (d.lift(x) - 2.0 * x).abs() <= 1e-9
    });

    let p: f64 = sample_rng(7, 0).gen_range(0.1..0.9);
    let a = Potential::from_fn(&spec, MetricParams::default(), 1, |w| {
        if w[0] == 0 {
            p.ln()
        } else {
            (1.0 - p).ln()
        }
    })
    .unwrap();
    let round_trip = |res: usize| {
        let (f, _) = circle::map_from_potential(&a, res).unwrap();
        let (back, _) = circle::potential_from_map(&f, 1).unwrap();
        back.values()
            .iter()
            .zip(a.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let (err14, err16) = (round_trip(14), round_trip(16));
    let round_trip_ok = err14 <= 1e-4 && err16 <= err14 / 4.0;

    let f = CircleMap::perturbed_doubling(0.2).unwrap();
    let lyap = circle::lyapunov_maximize(&f, 8, 10).unwrap();
    let at_zero = |orbit: &[f64]| orbit.len() == 1 && (orbit[0].rem_euclid(1.0).min(1.0 - orbit[0].rem_euclid(1.0))) < 1e-9;
    let bf_orbit = circle::periodic_orbit(&f, &lyap.brute_force_cycle).unwrap();
    let lyap_ok = at_zero(&lyap.orbit)
        && (lyap.exponent - 2.2f64.ln()).abs() <= 1e-4
        && at_zero(&bf_orbit)
        && (lyap.brute_force_average - lyap.shift_average).abs() <= 1e-10;

    let elapsed = start.elapsed();
    let ok = identity && flat_g && doubling_back && round_trip_ok && lyap_ok && elapsed < Duration::from_secs(60);
    report(
        7,
        ok,
        &format!(
            "identity {identity}, G flat {flat_g}, doubling rebuilt {doubling_back}, \
             round trip {err14:.3e} at 2^14 and {err16:.3e} at 2^16 (shrink ok {round_trip_ok}), \
             lyapunov {} with exponent {:.6} ({lyap_ok}), {elapsed:.2?}",
            ergopt::shift::word_to_string(&lyap.cycle),
            lyap.exponent
        ),
    );
}

#[test]
fn criterion_8_orbit_locking() {
    let spec = Subshift::full(2);
    let metric = MetricParams::new(0.5, 0.5).unwrap();
    let a = Potential::constant(&spec, metric, 1, -(2f64.ln())).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for cycle in [vec![0u8], vec![0, 1], vec![0, 0, 1]] {
        let params = PerturbationParams::new(&a, &cycle, 0.01, 0.6, 0.8).unwrap();
        match perturb::lock_orbit(&a, &cycle, &params, 12) {
            Ok((psi, cert)) => {
                let locked = affine_combine(&a.lift(psi.depth()).unwrap(), 1.0, 0.0, Some(&psi)).unwrap();
                let bf = optimize::brute_force(&locked, 12).unwrap();
                let unique = bf.argmax == [orbit_word(&cycle)] && bf.gap().is_some_and(|g| g > 0.0);
                let bounds = psi.sup_norm() <= params.sup_bound() && psi.holder_constant_with(0.6) <= params.holder_bound();
                ok &= unique && bounds;
                notes.push(format!(
                    "{:?}: sup {:.3e}/{:.3e}, holder {:.3e}/{:.3e}, gap {:.3e}",
                    cycle,
                    cert.psi_sup,
                    cert.sup_bound,
                    cert.psi_holder,
                    cert.holder_bound,
                    bf.gap().unwrap_or(f64::NAN)
                ));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{cycle:?}: {e}"));
            }
        }
    }
    report(8, ok, &notes.join("; "));
}

#[test]
fn criterion_9_genericity() {
    let spec = Subshift::full(2);
    let first = perturb::genericity_experiment(&spec, 2, 100, 12, 0).unwrap();
    let second = perturb::genericity_experiment(&spec, 2, 100, 12, 0).unwrap();
    let reproducible = first.to_csv() == second.to_csv();
    report(
        9,
        first.unique_count >= 90 && reproducible,
        &format!("{} of 100 unique, reproducible {reproducible}", first.unique_count),
    );
}
