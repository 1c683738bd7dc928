use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hermite_hardy::atoms::{make_plm_atom, validate_plm_atom, AtomDoc, PlmAtom, PlmAtomParams};
use hermite_hardy::hermite::phi;
use hermite_hardy::multiindex::MultiIndex;
use hermite_hardy::spectral::{coefficients, converged_coefficients, initial_level, Exponent, TruncationPolicy};
use hermite_hardy::verifier::config::{Experiment, ExperimentConfig};
use hermite_hardy::verifier::{self, report::Report};
use hermite_hardy::Error;

/// Spectral Hardy-space experiments for the Hermite operator.
#[derive(Parser)]
#[command(name = "hermite-hardy", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON config (experiment config, or atom parameters for make-atom).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; results go to stdout when absent (experiments default to ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the validators' random sample points.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Φ_μ at points; `--mu 2,1 --points 0.5,1 -1,0`.
    Basis {
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u32>,
        #[arg(long, num_args = 1.., required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Hermite coefficients of an atom (`a`, or `b` with `--of-b`) up to a level.
    Coeffs {
        #[arg(long)]
        atom: PathBuf,
        #[arg(long)]
        max_level: u64,
        #[arg(long)]
        of_b: bool,
    },
    /// Converged Hardy sum and block profile of an atom.
    HardySum {
        #[arg(long)]
        atom: PathBuf,
    },
    /// Build an extremal (p, L, M)-atom; parameters from flags or `--config`.
    MakeAtom {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "M")]
        m: Option<u32>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        center: Option<Vec<f64>>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        q: Option<u32>,
    },
    /// Check the atom conditions; exit code 2 when one fails.
    ValidateAtom {
        #[arg(long)]
        atom: PathBuf,
    },
    /// Atom sweep over centers × radii.
    Sweep,
    /// Classical H¹ atoms in one dimension.
    Kanjin,
    /// Growth of the two maximal functions of a mean-one bump.
    Inclusion,
    /// Atom sweep at a lowered exponent; exploratory.
    Probe,
}

enum Failure {
    Config(String),
    Validation(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn config_err(msg: impl std::fmt::Display) -> Failure {
    Failure::Config(msg.to_string())
}

fn emit(out: Option<&Path>, name: &str, text: &str) -> CliResult<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(Error::from)?;
            std::fs::write(dir.join(name), text).map_err(Error::from)?;
        }
        None => {
            // a closed pipe is not an error here
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn load_atom(path: &Path) -> CliResult<PlmAtom> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let doc: AtomDoc = serde_json::from_str(&text).map_err(|e| config_err(format!("bad atom document: {e}")))?;
    Ok(PlmAtom::from_doc(&doc)?)
}

fn parse_point(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| config_err(format!("bad point {s:?}: {e}"))))
        .collect()
}

fn experiment(global: &Global, kind: Experiment) -> CliResult<Report> {
    let mut cfg = match &global.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(kind),
    };
    if cfg.experiment != kind {
        return Err(config_err(format!("config is for {}, not {}", cfg.experiment.name(), kind.name())));
    }
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    let report = verifier::run(&cfg)?;
    let dir = global.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    report.write_outputs(&dir)?;
    let s = &report.summary;
    eprintln!("{}: {} rows, fingerprint {}, written to {}", report.experiment, s.rows, report.fingerprint.hash, dir.display());
    if s.exploratory {
        return Ok(report);
    }
    if !s.pass {
        return Err(Failure::Validation(s.failures.join("; ")));
    }
    Ok(report)
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    let out = g.out.as_deref();
    match cli.command {
        Command::Basis { mu, points } => {
            let mu = MultiIndex::new(&mu);
            let mut rows = Vec::new();
            for s in &points {
                let x = parse_point(s)?;
                rows.push(serde_json::json!({ "x": x, "value": phi(&mu, &x)? }));
            }
            emit(out, "basis.json", &json(&serde_json::json!({ "mu": mu.entries(), "values": rows })))
        }
        Command::Coeffs { atom, max_level, of_b } => {
            let atom = load_atom(&atom)?;
            let f = if of_b { atom.b_function() } else { atom.atom_function() };
            let c = coefficients(&f, max_level)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["mu", "level", "value"]).map_err(|e| Failure::Other(e.to_string()))?;
            for (mu, v) in c.iter() {
                w.write_record([mu.to_string(), mu.level().to_string(), format!("{v}")])
                    .map_err(|e| Failure::Other(e.to_string()))?;
            }
            let text = String::from_utf8(w.into_inner().map_err(|e| Failure::Other(e.to_string()))?).expect("utf-8");
            emit(out, "coeffs.csv", text.trim_end())
        }
        Command::HardySum { atom } => {
            let atom = load_atom(&atom)?;
            let f = atom.atom_function();
            let ball = &atom.ball;
            let conv = converged_coefficients(
                &f,
                atom.p,
                ball.radius,
                Some(atom.m),
                initial_level(&ball.center, ball.radius),
                &TruncationPolicy::for_dimension(atom.dim()),
                Exponent::Critical,
            )?;
            if let Some(dir) = out {
                emit(Some(dir), "blocks_atom.csv", &conv.profile.to_csv())?;
            }
            emit(out, "hardy_sum.json", &json(&serde_json::json!({ "hardy": conv.hardy, "level": conv.coeffs.max_level() })))
        }
        Command::MakeAtom { p, m, center, radius, q } => {
            let mut params = match &g.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                    serde_json::from_str::<PlmAtomParams>(&text).map_err(|e| config_err(format!("bad atom parameters: {e}")))?
                }
                None => PlmAtomParams::new(
                    p.ok_or_else(|| config_err("--p is required without --config"))?,
                    m.ok_or_else(|| config_err("--M is required without --config"))?,
                    center.clone().ok_or_else(|| config_err("--center is required without --config"))?,
                    radius.ok_or_else(|| config_err("--radius is required without --config"))?,
                ),
            };
            // flags override the file
            if let Some(v) = p {
                params.p = v;
            }
            if let Some(v) = m {
                params.m = v;
            }
            if let Some(v) = center {
                params.center = v;
            }
            if let Some(v) = radius {
                params.radius = v;
            }
            if q.is_some() {
                params.q = q;
            }
            let atom = make_plm_atom(&params)?;
            emit(out, "atom.json", &json(&atom.to_doc()))
        }
        Command::ValidateAtom { atom } => {
            let atom = load_atom(&atom)?;
            let v = validate_plm_atom(&atom, g.seed.unwrap_or(0))?;
            emit(out, "validation.json", &json(&v))?;
            if v.pass {
                Ok(())
            } else {
                Err(Failure::Validation("atom conditions violated".into()))
            }
        }
        Command::Sweep => experiment(g, Experiment::AtomSweep).map(drop),
        Command::Kanjin => experiment(g, Experiment::Kanjin1d).map(drop),
        Command::Inclusion => experiment(g, Experiment::InclusionDemo).map(drop),
        Command::Probe => experiment(g, Experiment::ExponentProbe).map(drop),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
