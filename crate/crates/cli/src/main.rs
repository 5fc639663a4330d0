use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use reductlab::orbits::{self, Budget, DEFAULT_MAX_CELLS};
use reductlab::random::{self, DEFAULT_THETA_BUDGET};
use reductlab::switch::{self, SwitchWord};
use reductlab::{verify, Color, ColoredBipartiteGraph, LabError, S3Perm};

#[derive(Parser)]
#[command(name = "reductlab", version, about = "Switch groups on 3-colored complete bipartite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Graph arguments take a file path, `-` for standard input, or inline JSON.
#[derive(Args)]
struct GraphArg {
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded random coloring of K_{m,n}.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// First `len` members of the side-balanced chain for `seed`.
    Chain {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        len: usize,
    },
    /// Checks the extension property Θ_k on a given or generated graph.
    CheckTheta {
        #[arg(long, conflicts_with_all = ["m", "n"], required_unless_present = "m")]
        graph: Option<String>,
        #[arg(long, requires_all = ["n", "seed"])]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "sampled")]
        exact: bool,
        #[arg(long, requires = "seed")]
        sampled: bool,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Cap on configuration visits for the exact check.
        #[arg(long, default_value_t = DEFAULT_THETA_BUDGET)]
        theta_budget: u128,
    },
    /// Applies a switch word (JSON array) to a graph.
    ApplyWord {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        word: String,
    },
    /// The four-switch word recoloring edge (x, y) alone.
    EdgeKill {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        f: S3Perm,
        #[arg(long)]
        g: S3Perm,
        /// Also apply the word to this graph.
        #[arg(long)]
        graph: Option<String>,
    },
    /// A switch word making every edge the target color.
    Monochromatize {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        target: u8,
    },
    /// Orbit count of a named candidate group on the colorings of K_{m,n}.
    Orbits {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        group: String,
        /// Adjoin the side swap (requires m = n).
        #[arg(long)]
        swap: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        budget: usize,
    },
    /// Orbit counts of every candidate and the pairs with equal partitions.
    Distinguish {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        swap: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        budget: usize,
        /// Re-test collisions at a larger size, given as M,N.
        #[arg(long, value_parser = parse_dims)]
        escalate: Option<(usize, usize)>,
    },
    /// Runs the verification suite; exits 1 if any check fails.
    VerifyLemmas {
        /// Run only these check ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
    /// Closed-form failure bound for Θ_k at n vertices.
    SfspBound {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo failure probability of Θ_k at n vertices.
    SfspEstimate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s.split_once(',').ok_or("expected M,N")?;
    Ok((m.trim().parse().map_err(|e| format!("{e}"))?, n.trim().parse().map_err(|e| format!("{e}"))?))
}

enum Failure {
    Domain(String),
    /// The command ran but reported a negative result.
    Report(Value),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn read_source(src: &str) -> Result<String, Failure> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Domain(format!("reading stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(src).map_err(|e| Failure::Domain(format!("reading {src}: {e}")))
}

fn load_graph(src: &str) -> Result<ColoredBipartiteGraph, Failure> {
    serde_json::from_str(&read_source(src)?).map_err(|e| Failure::Domain(format!("malformed graph JSON: {e}")))
}

fn load_word(src: &str) -> Result<SwitchWord, Failure> {
    serde_json::from_str(&read_source(src)?).map_err(|e| Failure::Domain(format!("malformed word JSON: {e}")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Generate { m, n, seed } => Ok(to_value(&random::random_graph(m, n, seed))),
        Command::Chain { seed, len } => Ok(to_value(&random::chain(seed, len))),
        Command::CheckTheta { graph, m, n, k, exact: _, sampled, trials, seed, theta_budget } => {
            // clap guarantees a graph source, and a seed wherever one is used.
            let g = match (graph, m, n, seed) {
                (Some(src), ..) => load_graph(&src)?,
                (None, Some(m), Some(n), Some(seed)) => random::random_graph(m, n, seed),
                _ => unreachable!("argument rules"),
            };
            if sampled {
                Ok(to_value(&random::check_theta_sampled(&g, k, trials, seed.expect("required"))?))
            } else {
                Ok(to_value(&random::check_theta_with_budget(&g, k, theta_budget)?))
            }
        }
        Command::ApplyWord { graph, word } => {
            let g = load_graph(&graph.graph)?;
            let w = load_word(&word)?;
            Ok(to_value(&switch::apply_word(&g, &w)?))
        }
        Command::EdgeKill { x, y, f, g, graph } => {
            let word = switch::edge_kill_word(x, y, f, g)?;
            let mut out = json!({ "word": to_value(&word), "gamma": to_value(&reductlab::s3::commutator(&f, &g)) });
            if let Some(src) = graph {
                out["result"] = to_value(&switch::apply_word(&load_graph(&src)?, &word)?);
            }
            Ok(out)
        }
        Command::Monochromatize { graph, target } => {
            let g = load_graph(&graph.graph)?;
            let target = Color::from_index(target as usize)?;
            let word = switch::monochromatize(&g, target)?;
            let result = switch::apply_word(&g, &word)?;
            Ok(json!({ "length": word.len(), "word": to_value(&word), "result": to_value(&result) }))
        }
        Command::Orbits { m, n, group, swap, budget } => {
            let mut spec = orbits::candidate_by_name(&group)?.spec;
            if swap {
                spec = spec.with_swap();
            }
            let p = orbits::orbit_partition(&spec, m, n, Budget { max_cells: budget })?;
            Ok(json!({ "m": m, "n": n, "group": spec.name(), "orbit_count": p.orbit_count() }))
        }
        Command::Distinguish { m, n, swap, budget, escalate } => {
            let budget = Budget { max_cells: budget };
            let report = orbits::distinguish_candidates(m, n, swap, budget)?;
            let mut out = to_value(&report);
            if let Some((em, en)) = escalate {
                out["escalated"] = to_value(&orbits::escalate_collisions(&report, em, en, budget)?);
            }
            Ok(out)
        }
        Command::VerifyLemmas { only } => {
            let ids: Vec<u8> = only.unwrap_or_else(|| verify::CHECKS.iter().map(|(id, _)| *id).collect());
            let results = ids.into_iter().map(verify::run_check).collect::<Result<Vec<_>, _>>()?;
            let all = results.iter().all(|r| r.passed);
            let out = json!({ "passed": all, "checks": to_value(&results) });
            if all {
                Ok(out)
            } else {
                Err(Failure::Report(out))
            }
        }
        Command::SfspBound { k, n } => Ok(to_value(&random::sfsp_bound(k, n))),
        Command::SfspEstimate { n, k, trials, seed } => {
            Ok(to_value(&random::estimate_failure_prob(n, k, trials, seed)?))
        }
    }
}

/// A closed stdout (for example a pipe into `head`) is not an error worth a panic.
fn emit(v: &Value) {
    let _ = writeln!(io::stdout().lock(), "{v}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Report(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            emit(&json!({ "error": msg }));
            ExitCode::from(1)
        }
    }
}
