//! `nkstar` — build, orient, route and verify (n,k)-star graphs.
//!
//! Exit status: 0 on success, 1 on usage errors (bad flags, labels or
//! parameters, oversized instances), 2 on verification failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nkstar_core::orientation;
use nkstar_core::star_graph;
use nkstar_core::*;

#[derive(Parser)]
#[command(name = "nkstar", version, about = "(n,k)-star graph orientation and routing toolkit")]
struct Cli {
    /// Worker threads for the parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Memory budget in MiB for materialized graphs.
    #[arg(long, global = true, default_value_t = 4096)]
    memory_budget_mb: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamArgs {
    /// Symbol count n.
    #[arg(long)]
    n: usize,
    /// Label length k.
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Export the undirected edge list: `<label> <label> <type>` per edge.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the directed arc list: `<from> <to> <type>` per arc.
    Orient {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Route one pair and print the path; optionally dump the trace as JSON.
    Route {
        #[command(flatten)]
        params: ParamArgs,
        /// Source label, dash-separated (e.g. 7-2-3-4-5).
        #[arg(long)]
        src: String,
        /// Destination label, dash-separated.
        #[arg(long)]
        dst: String,
        /// Write the full trace as JSON to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Override the move budget (defaults to the diameter bound).
        #[arg(long)]
        max_moves: Option<usize>,
    },
    /// Verify routed lengths against BFS distances and the diameter bound.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Check every ordered pair.
        #[arg(long, conflicts_with_all = ["samples", "seed"])]
        all_pairs: bool,
        /// Check this many seeded random pairs instead.
        #[arg(long)]
        samples: Option<u64>,
        /// Seed for the pair sampler (SplitMix64 stream).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the summary CSV to this file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the exact diameter by BFS (undirected by default).
    Diameter {
        #[command(flatten)]
        params: ParamArgs,
        /// Use the oriented graph instead of the undirected one.
        #[arg(long)]
        directed: bool,
    },
    /// Emit the bound-comparison table as CSV.
    Bounds {
        /// Largest n to include.
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Outcome {
    Success,
    VerificationFailure(String),
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn is_usage_error(err: &Error) -> bool {
    matches!(
        err,
        Error::InvalidParams(_)
            | Error::InvalidLabel(_)
            | Error::LabelParse(_)
            | Error::InvalidPermutation(_)
            | Error::PositionOutOfRange { .. }
            | Error::RankOutOfRange { .. }
            | Error::TooLarge(_)
    )
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(workers) = cli.workers {
        // ignore failures from re-initialization in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    let budget = cli.memory_budget_mb.saturating_mul(1 << 20);

    match cli.command {
        Command::Build { params, out } => {
            let p = GraphParams::new(params.n, params.k)?;
            let mut w = out_writer(&out)?;
            star_graph::write_edge_list(&p, &mut w)?;
            w.flush()?;
            eprintln!(
                "wrote edge list of S({},{}) ({} nodes)",
                params.n,
                params.k,
                p.node_count()?
            );
            Ok(Outcome::Success)
        }
        Command::Orient { params, out } => {
            let p = GraphParams::new(params.n, params.k)?;
            p.check_routable()?;
            let mut w = out_writer(&out)?;
            orientation::write_arc_list(&p, &mut w)?;
            w.flush()?;
            eprintln!(
                "wrote arc list of oriented S({},{}) ({} nodes)",
                params.n,
                params.k,
                p.node_count()?
            );
            Ok(Outcome::Success)
        }
        Command::Route {
            params,
            src,
            dst,
            trace,
            max_moves,
        } => {
            let p = GraphParams::new(params.n, params.k)?;
            p.check_routable()?;
            let s = NodeLabel::parse(&src, &p)?;
            let t = NodeLabel::parse(&dst, &p)?;
            match route(&s, &t, &p, max_moves) {
                Ok(result) => {
                    let mut w = out_writer(&None)?;
                    writeln!(w, "0 {s} -")?;
                    for (m, step) in result.steps.iter().enumerate() {
                        writeln!(
                            w,
                            "{} {} {}/{}",
                            m + 1,
                            step.node,
                            step.kind.label(),
                            step.kind.case_label()
                        )?;
                    }
                    writeln!(w, "length {}", result.moves())?;
                    w.flush()?;
                    if let Some(path) = trace {
                        let json = result.to_json();
                        std::fs::write(&path, format!("{:#}\n", json))?;
                        eprintln!("trace written to {}", path.display());
                    }
                    eprintln!(
                        "routed {s} -> {t} in {} moves (bound {})",
                        result.moves(),
                        oriented_diameter_bound(params.n, params.k)?
                    );
                    Ok(Outcome::Success)
                }
                Err(e @ Error::MoveBudgetExceeded { .. }) => {
                    Ok(Outcome::VerificationFailure(e.to_string()))
                }
                Err(e) => Err(e),
            }
        }
        Command::Verify {
            params,
            all_pairs,
            samples,
            seed,
            out,
        } => {
            let p = GraphParams::new(params.n, params.k)?;
            p.check_routable()?;
            let summary = match (all_pairs, samples) {
                (true, None) => verify_all_pairs(&p, budget)?,
                (false, Some(m)) => verify_sampled(&p, m, seed, budget)?,
                _ => {
                    return Err(Error::InvalidParams(
                        "pass exactly one of --all-pairs or --samples M".into(),
                    ))
                }
            };
            let mut w = out_writer(&out)?;
            oracle::write_verify_csv(&summary, &mut w)?;
            w.flush()?;
            eprintln!(
                "verified {} pairs of S({},{}): max_routed={} max_bfs={} bound={}",
                summary.pairs_checked,
                summary.n,
                summary.k,
                summary.max_routed,
                summary.max_bfs,
                summary.bound
            );
            if summary.ok {
                Ok(Outcome::Success)
            } else {
                Ok(Outcome::VerificationFailure(
                    summary
                        .first_failure
                        .unwrap_or_else(|| "verification failed".into()),
                ))
            }
        }
        Command::Diameter { params, directed } => {
            let p = GraphParams::new(params.n, params.k)?;
            if directed {
                p.check_routable()?;
                let g = OrientedGraph::build(&p, budget)?;
                match g.directed_diameter() {
                    Ok((d, (a, b))) => {
                        let bound = oriented_diameter_bound(params.n, params.k)?;
                        println!(
                            "directed_diameter {d} from {} to {} bound {bound}",
                            p.unrank(a)?,
                            p.unrank(b)?
                        );
                        if d <= bound {
                            Ok(Outcome::Success)
                        } else {
                            Ok(Outcome::VerificationFailure(format!(
                                "directed diameter {d} exceeds bound {bound}"
                            )))
                        }
                    }
                    Err(Error::Disconnected { from, to }) => Ok(Outcome::VerificationFailure(
                        format!("not strongly connected: no path {from} -> {to}"),
                    )),
                    Err(e) => Err(e),
                }
            } else {
                let g = UndirectedGraph::build(&p, budget)?;
                let (d, (a, b)) = g.diameter()?;
                let formula = undirected_diameter_formula(&p);
                println!(
                    "undirected_diameter {d} from {} to {} formula {formula}",
                    p.unrank(a)?,
                    p.unrank(b)?
                );
                if d == formula {
                    Ok(Outcome::Success)
                } else {
                    Ok(Outcome::VerificationFailure(format!(
                        "BFS diameter {d} disagrees with formula {formula}"
                    )))
                }
            }
        }
        Command::Bounds { n_max, out } => {
            if n_max < 5 {
                return Err(Error::InvalidParams("need --n-max >= 5".into()));
            }
            let rows = bounds_table(n_max);
            let mut w = out_writer(&out)?;
            oracle::write_bounds_csv(&rows, &mut w)?;
            w.flush()?;
            eprintln!("wrote {} bound rows", rows.len());
            Ok(Outcome::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailure(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(e) if is_usage_error(&e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
