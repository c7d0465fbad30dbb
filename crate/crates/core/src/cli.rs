//! Command-line front end. Exit status: 0 on success, 1 on usage or domain
//! errors, 2 when an enumeration budget is exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::avoid::{choose_params, solve_avoid, AvoidParams, ParamMode};
use crate::circuit::{self, BitString, Circuit, TruthTable};
use crate::error::Error;
use crate::inverters::{invert, InverterSpec};
use crate::lab::{all_hold, generate_corpus, run_experiment, write_csv, Experiment, LabConfig};
use crate::oracles::{parse_oracle_file, Basis, McspQuery, McspSolver, OracleFun};

#[derive(Debug, Parser)]
#[command(name = "avoid-lab", version, about = "Range Avoidance through circuit inversion, with exact oracles and a verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random circuit.
    Gen {
        #[arg(long, short = 'n')]
        inputs: usize,
        #[arg(long, short = 'm')]
        outputs: usize,
        #[arg(long, short = 'g')]
        gates: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Evaluate a circuit on one input string.
    Eval {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Print truth tables of a circuit's outputs (LSB = x1).
    Tt {
        #[arg(long)]
        circuit: PathBuf,
        /// 1-based output index; all outputs when omitted.
        #[arg(long)]
        output: Option<usize>,
    },
    /// Decide whether a truth table has a circuit of at most SIZE gates.
    Mcsp {
        #[arg(long)]
        tt: String,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        model: McspArgs,
    },
    /// Minimum circuit size of a truth table.
    McspMin {
        #[arg(long)]
        tt: String,
        #[command(flatten)]
        model: McspArgs,
    },
    /// Run an inverter against a target string.
    Invert {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        y: String,
        #[arg(long)]
        inverter: String,
        #[arg(long)]
        seed: u64,
        /// Error target, as a decimal or 1/K.
        #[arg(long, default_value = "0.1")]
        epsilon: String,
    },
    /// Find a string outside the image of a stretching circuit.
    Avoid {
        #[arg(long)]
        circuit: PathBuf,
        /// Overall failure target, as a decimal or 1/K.
        #[arg(long)]
        epsilon_prime: String,
        #[arg(long)]
        inverter: String,
        #[arg(long)]
        seed: u64,
        /// Number of draws; defaults to n.
        #[arg(long)]
        t: Option<usize>,
        /// `theorem` or `corollary:P`.
        #[arg(long, default_value = "theorem")]
        mode: String,
    },
    /// Run a verification experiment and write its CSV.
    Verify {
        /// One of lemma-ratio, lemma-conditional, soundness, theorem-error,
        /// trivial-sampler, amplifier, all.
        experiment: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        csv: PathBuf,
        /// Overrides `master_seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write the experiment corpus as `.circ` files.
    Corpus {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for `<id>.circ` files; the circuits go to stdout when omitted.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct McspArgs {
    /// `aon` (AND/OR/NOT) or `aonx` (adds XOR).
    #[arg(long, default_value = "aon")]
    basis: String,
    /// File of `oraclefun <k> <bits>` lines.
    #[arg(long)]
    oracles: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    max_vars: usize,
    #[arg(long, default_value_t = 6)]
    max_size: usize,
}

enum Failure {
    Domain(String),
    Capacity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_capacity() {
            Failure::Capacity(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> std::result::Result<Circuit, Failure> {
    circuit::parse(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> std::result::Result<LabConfig, Failure> {
    match path {
        Some(p) => LabConfig::parse(&read(p)?).map_err(|e| Failure::Domain(format!("{}: {e}", p.display()))),
        None => Ok(LabConfig::default()),
    }
}

fn bits(s: &str) -> std::result::Result<BitString, Failure> {
    s.parse().map_err(|e: Error| Failure::Domain(e.to_string()))
}

/// A probability written as a decimal (`0.1`) or a unit fraction (`1/10`).
pub fn parse_probability(s: &str) -> crate::Result<f64> {
    let bad = || Error::InvalidParameter(format!("expected a probability in (0, 1), got `{s}`"));
    let v = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            num / den
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn mcsp_setup(tt: &str, model: &McspArgs) -> std::result::Result<(TruthTable, Basis, Vec<OracleFun>, McspSolver), Failure> {
    let table = TruthTable::parse(tt)?;
    let basis: Basis = model.basis.parse()?;
    let oracles = match &model.oracles {
        Some(p) => parse_oracle_file(&read(p)?)?,
        None => Vec::new(),
    };
    let solver = McspSolver::new(crate::oracles::McspLimits {
        max_vars: model.max_vars,
        max_size: model.max_size,
        ..Default::default()
    });
    Ok((table, basis, oracles, solver))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    let io = |e: io::Error| Failure::Domain(format!("cannot write output: {e}"));
    match cmd {
        Command::Gen {
            inputs,
            outputs,
            gates,
            seed,
        } => {
            let c = circuit::random_circuit(inputs, outputs, gates, seed)?;
            write!(out, "{}", circuit::serialize(&c)).map_err(io)?;
        }
        Command::Eval { circuit, input } => {
            let c = load_circuit(&circuit)?;
            writeln!(out, "{}", c.eval(&bits(&input)?)?).map_err(io)?;
        }
        Command::Tt { circuit, output } => {
            let c = load_circuit(&circuit)?;
            match output {
                Some(j) => writeln!(out, "{}", c.truth_table(j)?).map_err(io)?,
                None => {
                    for j in 1..=c.m() {
                        writeln!(out, "{j} {}", c.truth_table(j)?).map_err(io)?;
                    }
                }
            }
        }
        Command::Mcsp { tt, size, model } => {
            let (table, basis, oracles, solver) = mcsp_setup(&tt, &model)?;
            let answer = solver.decide(&McspQuery::new(table, size, basis, oracles))?;
            writeln!(out, "{}", if answer { "YES" } else { "NO" }).map_err(io)?;
        }
        Command::McspMin { tt, model } => {
            let (table, basis, oracles, solver) = mcsp_setup(&tt, &model)?;
            writeln!(out, "{}", solver.min_circuit_size(&table, basis, &oracles)?).map_err(io)?;
        }
        Command::Invert {
            circuit,
            y,
            inverter,
            seed,
            epsilon,
        } => {
            let c = load_circuit(&circuit)?;
            let spec: InverterSpec = inverter.parse()?;
            let outcome = invert(&spec, &c, &bits(&y)?, parse_probability(&epsilon)?, seed)?;
            match outcome.candidate {
                Some(x) => writeln!(out, "INVERTED {x}").map_err(io)?,
                None => writeln!(out, "FAILED").map_err(io)?,
            }
            writeln!(out, "PROBES {}", outcome.probes_used).map_err(io)?;
        }
        Command::Avoid {
            circuit,
            epsilon_prime,
            inverter,
            seed,
            t,
            mode,
        } => {
            let c = load_circuit(&circuit)?;
            let spec: InverterSpec = inverter.parse()?;
            let mode: ParamMode = mode.parse()?;
            let mut params = choose_params(parse_probability(&epsilon_prime)?, c.n(), mode, seed)?;
            if let Some(t) = t {
                params = AvoidParams::new(params.epsilon, t, seed)?;
            }
            let result = solve_avoid(&c, &params, &spec)?;
            writeln!(out, "{}", result.outcome).map_err(io)?;
            for line in result.transcript_lines() {
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        Command::Verify {
            experiment,
            config,
            csv,
            seed,
        } => {
            let experiment: Experiment = experiment.parse()?;
            let mut cfg = load_config(config.as_deref())?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let rows = run_experiment(experiment, &cfg)?;
            let file = fs::File::create(&csv)
                .map_err(|e| Failure::Domain(format!("cannot create {}: {e}", csv.display())))?;
            write_csv(&rows, io::BufWriter::new(file))?;
            let held = rows.iter().filter(|r| r.holds == "true").count();
            writeln!(out, "{experiment} rows={} holds={held} all_hold={}", rows.len(), all_hold(&rows)).map_err(io)?;
        }
        Command::Corpus { config, out_dir } => {
            let cfg = load_config(config.as_deref())?;
            let corpus = generate_corpus(&cfg)?;
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .map_err(|e| Failure::Domain(format!("cannot create {}: {e}", dir.display())))?;
                    for e in &corpus {
                        let path = dir.join(format!("{}.circ", e.id));
                        fs::write(&path, circuit::serialize(&e.circuit))
                            .map_err(|err| Failure::Domain(format!("cannot write {}: {err}", path.display())))?;
                        writeln!(out, "{}", path.display()).map_err(io)?;
                    }
                }
                None => {
                    for e in &corpus {
                        write!(out, "{}", circuit::serialize(&e.circuit)).map_err(io)?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Runs one command line, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Capacity(msg)) => {
            let _ = writeln!(err, "capacity exceeded: {msg}");
            2
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(args, &mut out, &mut err);
    let _ = out.flush();
    code
}
