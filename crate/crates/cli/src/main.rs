use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use ergopt::circle::{self, CircleMap, MapFile};
use ergopt::measure::{all_words, InvariantMeasure};
use ergopt::optimize::{self, DEFAULT_TOL};
use ergopt::perturb::{self, PerturbationParams};
use ergopt::potential::{Potential, PotentialFile};
use ergopt::shadow::{self, PseudoOrbit};
use ergopt::shift::{parse_word, word_to_string, Subshift, SubshiftFile, SymbolicPoint};
use ergopt::{thermo, Error};

#[derive(Parser)]
#[command(name = "ergopt", version, about = "Ergodic optimization on subshifts of finite type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PotentialArgs {
    /// Potential JSON: {"depth": k, "values": {"word": value, ...}}
    #[arg(long)]
    potential: PathBuf,
    /// Subshift JSON: {"alphabet": n, "transitions": [[0|1, ...], ...]}.
    /// Defaults to the full shift on the symbols used by the potential.
    #[arg(long)]
    subshift: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory; without it results go to stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal ergodic average and maximizing cycles
    Maximize {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also confirm by brute force over periods up to this bound
        #[arg(long)]
        max_period: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Calibrated sub-action and deficiency
    Subaction {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Action potential table
    Mane {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Table depth; defaults to the potential depth
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Aubry set at cylinder resolution
    Aubry {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Shadow a pseudo-orbit and certify the bounds
    Shadow {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Pseudo-orbit JSON: {"points": [{"preperiod": "..", "cycle": ".."}, ...], "delta": optional}
        #[arg(long)]
        points: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Pressure of tA over a list of t
    Pressure {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        t: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Equilibrium state of tA
    Equilibrium {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Equilibrium states along an increasing grid of t
    Zerotemp {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Word length cap for the distance to the maximizing orbit measure
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Circle map to a locally constant potential -log f'
    CircleEncode {
        /// Map JSON: {"kind": "table", "knots": [[x, F(x)], ...]} or
        /// {"kind": "builtin", "name": "doubling" | "perturbed_doubling", "epsilon": e}
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Zero-pressure potential on the full 2-shift to a circle map
    CircleDecode {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Grid resolution: 2^depth cylinders
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Periodic orbit maximizing the Lyapunov exponent of a circle map
    Lyapmax {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        max_period: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Perturb a potential so a chosen periodic orbit is the unique maximizer
    LockOrbit {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Cycle word of the orbit to lock
        #[arg(long)]
        cycle: String,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0.6)]
        beta: f64,
        #[arg(long, default_value_t = 0.8)]
        gamma: f64,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Linear functional separating one periodic measure from the others
    Separate {
        /// Measures JSON: {"cycles": ["0", "01", ...], "target": index}
        #[arg(long)]
        measures: PathBuf,
        #[arg(long)]
        subshift: Option<PathBuf>,
        /// Length of the cylinder indicators used as test functions
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Frequency of unique periodic maximizers among random potentials
    Genericity {
        #[arg(long)]
        subshift: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

enum Failure {
    Validation(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_subshift(path: Option<&Path>, default_alphabet: usize) -> CliResult<Subshift> {
    match path {
        Some(p) => Ok(Subshift::from_file(&read_json::<SubshiftFile>(p)?)?),
        None => Ok(Subshift::full(default_alphabet.max(2))),
    }
}

fn load_potential(args: &PotentialArgs) -> CliResult<Potential> {
    let file: PotentialFile = read_json(&args.potential)?;
    let mut alphabet = 2;
    for w in file.values.keys() {
        let word = parse_word(w)?;
        alphabet = alphabet.max(word.iter().map(|&s| s as usize + 1).max().unwrap_or(0));
    }
    let spec = load_subshift(args.subshift.as_deref(), alphabet)?;
    Ok(Potential::from_file(&file, &spec)?)
}

fn load_map(path: &Path) -> CliResult<CircleMap> {
    Ok(CircleMap::from_file(&read_json::<MapFile>(path)?)?)
}

fn parse_cycle(s: &str) -> CliResult<Vec<u8>> {
    Ok(parse_word(s)?)
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn words(ws: &[Vec<u8>]) -> Vec<String> {
    ws.iter().map(|w| word_to_string(w)).collect()
}

/// Files produced by a command, written only after the whole command
/// succeeded.
struct Outputs(Vec<(&'static str, String)>);

impl Outputs {
    fn flush(self, out: &OutArgs) -> CliResult<()> {
        match &out.out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|e| invalid(format!("{}: {e}", dir.display())))?;
                for (name, body) in self.0 {
                    let path = dir.join(name);
                    fs::write(&path, body).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
                }
            }
            None => {
                for (_, body) in self.0 {
                    print!("{body}");
                }
            }
        }
        Ok(())
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Maximize {
            pot,
            tol,
            max_period,
            out,
        } => {
            let a = load_potential(&pot)?;
            let r = optimize::max_mean_with(&a, tol)?;
            let mut doc = json!({
                "m0": r.m0,
                "cycles": words(&r.cycles),
                "tolerance": r.tolerance,
                "truncated": r.truncated,
                "unique": r.is_unique(),
            });
            if let Some(n) = max_period {
                let bf = optimize::brute_force(&a, n)?;
                doc["brute_force"] = json!({
                    "max_period": n,
                    "best": bf.best,
                    "argmax": words(&bf.argmax),
                    "gap": bf.gap(),
                });
            }
            Outputs(vec![("maximize.json", pretty(&doc))]).flush(&out)
        }
        Command::Subaction { pot, tol, out } => {
            let a = load_potential(&pot)?;
            let r = optimize::max_mean_with(&a, tol)?;
            let v = optimize::subaction(&a, &r)?;
            let b = optimize::deficiency_with(&a, &v, tol)?;
            let values: BTreeMap<String, f64> = v
                .words
                .words()
                .iter()
                .zip(&v.values)
                .map(|(w, &x)| (word_to_string(w), x))
                .collect();
            let critical: Vec<String> = v
                .words
                .words()
                .iter()
                .zip(v.critical_vertices())
                .filter(|(_, &c)| c)
                .map(|(w, _)| word_to_string(w))
                .collect();
            let deficiency: BTreeMap<String, f64> = (0..b.graph.edge_count())
                .map(|e| (word_to_string(&b.graph.edge_word(e)), b.values[e]))
                .collect();
            let doc = json!({
                "m0": r.m0,
                "depth": v.depth(),
                "subaction": values,
                "critical_vertices": critical,
                "oscillation": v.oscillation(),
                "deficiency": deficiency,
                "deficiency_max": b.max_value(),
            });
            Outputs(vec![("subaction.json", pretty(&doc))]).flush(&out)
        }
        Command::Mane { pot, depth, tol, out } => {
            let a = load_potential(&pot)?;
            let r = optimize::max_mean_with(&a, tol)?;
            let t = optimize::mane_table_at(&a, &r, depth.unwrap_or(a.depth()))?;
            let doc = json!({
                "m0": r.m0,
                "depth": t.words.depth(),
                "bound_q": t.bound_q,
                "tolerance": t.tolerance,
            });
            Outputs(vec![("mane.csv", t.to_csv()), ("mane.json", pretty(&doc))]).flush(&out)
        }
        Command::Aubry { pot, depth, tol, out } => {
            let a = load_potential(&pot)?;
            let r = optimize::max_mean_with(&a, tol)?;
            let t = optimize::mane_table_at(&a, &r, depth.unwrap_or(a.depth()))?;
            let set = optimize::aubry_set(&t);
            let doc = json!({
                "m0": r.m0,
                "depth": t.words.depth(),
                "vertices": words(&set.vertices),
                "critical_cycles": words(&r.cycles),
                "contains_critical_cycles": r.cycles.iter().all(|c| set.contains_cycle(c)),
            });
            Outputs(vec![("aubry.json", pretty(&doc))]).flush(&out)
        }
        Command::Shadow { pot, points, out } => {
            #[derive(Deserialize)]
            struct PointsFile {
                points: Vec<SymbolicPoint>,
                #[serde(default)]
                delta: Option<f64>,
            }
            let a = load_potential(&pot)?;
            let file: PointsFile = read_json(&points)?;
            let po = PseudoOrbit::new(file.points, file.delta, a.metric())?;
            let p = shadow::shadow(&po, a.subshift())?;
            let cert = shadow::certify(&po, &p, &a)?;
            Outputs(vec![("shadow.json", pretty(&cert))]).flush(&out)
        }
        Command::Pressure { pot, t, out } => {
            let a = load_potential(&pot)?;
            let mut csv = String::from("t,pressure\n");
            for &ti in &t {
                csv.push_str(&format!("{},{}\n", num(ti), num(thermo::pressure(&a, ti)?)));
            }
            Outputs(vec![("pressure.csv", csv)]).flush(&out)
        }
        Command::Equilibrium { pot, t, out } => {
            let a = load_potential(&pot)?;
            let s = thermo::equilibrium(&a, t)?;
            let doc = json!({
                "t": s.t,
                "pressure": s.pressure,
                "entropy": s.entropy,
                "energy": s.energy,
                "variational_residual": s.variational_residual,
                "eigen_residual": s.eigen_residual,
                "measure": s.equilibrium.summary(),
            });
            Outputs(vec![("equilibrium.json", pretty(&doc))]).flush(&out)
        }
        Command::Zerotemp { pot, t, depth, out } => {
            let a = load_potential(&pot)?;
            let scan = thermo::zero_temp_scan(&a, &t, depth)?;
            Outputs(vec![("zerotemp.csv", scan.to_csv())]).flush(&out)
        }
        Command::CircleEncode { map, depth, out } => {
            let f = load_map(&map)?;
            let (a, report) = circle::potential_from_map(&f, depth)?;
            Outputs(vec![
                ("potential.json", pretty(&a.to_file())),
                ("circle_encode.json", pretty(&report)),
            ])
            .flush(&out)
        }
        Command::CircleDecode { pot, depth, out } => {
            let a = load_potential(&pot)?;
            let (f, table) = circle::map_from_potential(&a, depth)?;
            let CircleMap::Table { xs, ys } = &f else {
                unreachable!("reconstruction yields a table map");
            };
            let file = MapFile::Table {
                knots: xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect(),
            };
            let mut csv = String::from("index,theta,mass\n");
            for (j, th) in table.theta.iter().enumerate() {
                let mass = table.masses.get(j).copied().unwrap_or(0.0);
                csv.push_str(&format!("{j},{},{}\n", num(*th), num(mass)));
            }
            Outputs(vec![("map.json", pretty(&file)), ("eigenmeasure.csv", csv)]).flush(&out)
        }
        Command::Lyapmax {
            map,
            depth,
            max_period,
            out,
        } => {
            let f = load_map(&map)?;
            let r = circle::lyapunov_maximize(&f, depth, max_period)?;
            let mut csv = String::from("index,point,log_derivative\n");
            for (i, &x) in r.orbit.iter().enumerate() {
                csv.push_str(&format!("{i},{},{}\n", num(x), num(f.derivative(x).ln())));
            }
            csv.push_str(&format!("exponent,{},\n", num(r.exponent)));
            Outputs(vec![("lyapmax.csv", csv), ("lyapmax.json", pretty(&r))]).flush(&out)
        }
        Command::LockOrbit {
            pot,
            cycle,
            delta,
            beta,
            gamma,
            max_period,
            out,
        } => {
            let a = load_potential(&pot)?;
            let c = parse_cycle(&cycle)?;
            let params = PerturbationParams::new(&a, &c, delta, beta, gamma)?;
            let (psi, cert) = perturb::lock_orbit(&a, &c, &params, max_period)?;
            Outputs(vec![
                ("psi.json", pretty(&psi.to_file())),
                ("lock_orbit.json", pretty(&cert)),
            ])
            .flush(&out)
        }
        Command::Separate {
            measures,
            subshift,
            depth,
            out,
        } => {
            #[derive(Deserialize)]
            struct MeasuresFile {
                cycles: Vec<String>,
                target: usize,
            }
            let file: MeasuresFile = read_json(&measures)?;
            let cycles: Vec<Vec<u8>> = file.cycles.iter().map(|c| parse_cycle(c)).collect::<CliResult<_>>()?;
            let alphabet = cycles.iter().flatten().map(|&s| s as usize + 1).max().unwrap_or(2);
            let spec = load_subshift(subshift.as_deref(), alphabet)?;
            let mus: Vec<InvariantMeasure> = cycles
                .iter()
                .map(|c| InvariantMeasure::periodic(&spec, c))
                .collect::<Result<_, _>>()?;
            let test_words: Vec<Vec<u8>> = all_words(spec.alphabet_size(), depth)
                .into_iter()
                .filter(|w| spec.is_admissible(w))
                .collect();
            let tests: Vec<Potential> = test_words
                .iter()
                .map(|t| Potential::from_fn(&spec, Default::default(), depth, |w| (w == t.as_slice()) as u8 as f64))
                .collect::<Result<_, _>>()?;
            let sep = perturb::separating_functional(&mus, &tests, file.target)?;
            let coefficients: BTreeMap<String, f64> = test_words
                .iter()
                .zip(&sep.coefficients)
                .map(|(w, &c)| (word_to_string(w), c))
                .collect();
            let doc = json!({
                "target": sep.target,
                "test_functions": "indicators of admissible words of the given length (finite family)",
                "depth": depth,
                "coefficients": coefficients,
                "values": sep.values,
                "margin": sep.margin,
            });
            Outputs(vec![("separate.json", pretty(&doc))]).flush(&out)
        }
        Command::Genericity {
            subshift,
            depth,
            samples,
            max_period,
            seed,
            out,
        } => {
            let spec = load_subshift(subshift.as_deref(), 2)?;
            let stats = perturb::genericity_experiment(&spec, depth, samples, max_period, seed)?;
            let doc = json!({
                "seed": seed,
                "depth": depth,
                "samples": samples,
                "max_period": max_period,
                "unique_count": stats.unique_count,
                "frequency": stats.frequency,
                "min_gap": stats.min_gap,
                "median_gap": stats.median_gap,
                "max_gap": stats.max_gap,
            });
            Outputs(vec![("genericity.csv", stats.to_csv()), ("genericity.json", pretty(&doc))]).flush(&out)
        }
    }
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("ERGOPT_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| invalid(format!("ERGOPT_THREADS = {v:?} is not a positive integer")))?;
        if n == 0 {
            return Err(invalid("ERGOPT_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Compute(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match configure_threads().and_then(|_| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
