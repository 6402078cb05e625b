use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdc_route::dist::{run_distributed, DeliveryPolicy, SchedulerConfig};
use cdc_route::experiment::{run_and_write, ExperimentConfig};
use cdc_route::format::{parse_network, serialize_network};
use cdc_route::network::{random_topology, RangeMode, TopologyConfig};
use cdc_route::oracle::cross_check;
use cdc_route::spanner::{build_spanner, verify_spanner, SpannerConfig, SpannerVariant};
use cdc_route::{shortest_cdc, Network, NodeId, SearchOptions, WeightMode};

const NO_PATH: u8 = 1;
const USAGE: u8 = 2;
const INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "cdcroute", version, about = "Channel-discontinuity-constrained routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-weight CDC path between two nodes.
    Route {
        net: PathBuf,
        s: NodeId,
        d: NodeId,
        /// Run the message-passing protocol instead of the centralized search.
        #[arg(long)]
        distributed: bool,
        /// Write the decision trace to this file.
        #[arg(long, value_name = "OUT")]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DeliveryPolicy::Fifo)]
        policy: DeliveryPolicy,
    },
    /// Build a sector spanner and print it.
    Spanner {
        net: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = SpannerVariant::PerType)]
        variant: SpannerVariant,
        /// Check the stretch bound on this many random pairs.
        #[arg(long, value_name = "PAIRS")]
        verify: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the spanner here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random topology in the network text format.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::ConstantDensity)]
        mode: Mode,
        /// Transmission range for `fixed-range`.
        #[arg(long, default_value_t = 5.0)]
        range: f64,
        #[arg(long)]
        channels: u8,
        #[arg(long)]
        per_node: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50.0)]
        side: f64,
        #[arg(long, value_enum, default_value_t = Weights::Unit)]
        weightmode: Weights,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a message-count sweep described by a config file.
    Experiment { config: PathBuf },
    /// Cross-check every solver on every node pair of a network.
    Verify { net: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    ConstantDensity,
    FixedRange,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Unit,
    Euclid,
}

/// Error carrying its exit code.
struct Fail(u8, String);

impl Fail {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Fail(USAGE, msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Fail(code, msg))) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
        // the default hook has already printed the message
        Err(_) => ExitCode::from(INVARIANT),
    }
}

fn load(path: &Path) -> Result<Network, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    parse_network(&text).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Route { net, s, d, distributed, trace, seed, policy } => {
            let network = load(&net)?;
            let (path, trace_text) = if distributed {
                let run = run_distributed(&network, s, d, false, SchedulerConfig::new(seed, policy))
                    .map_err(Fail::usage)?;
                println!("messages {}", run.log.total);
                println!("rounds {}", run.log.rounds());
                println!("blossoms {}", run.blossom_count());
                (run.path, run.trace.to_text())
            } else {
                let out = shortest_cdc(&network, s, d, SearchOptions::default()).map_err(Fail::usage)?;
                println!("blossoms {}", out.blossoms);
                (out.path, out.trace.to_text())
            };
            if let Some(p) = trace {
                write_out(Some(&p), &trace_text)?;
            }
            let Some(path) = path else {
                return Err(Fail(NO_PATH, format!("no CDC path from {s} to {d}")));
            };
            path.validate(&network)
                .map_err(|e| Fail(INVARIANT, format!("returned path is invalid: {e}")))?;
            println!("path {path}");
            let channels: Vec<String> = path.channels().iter().map(|c| c.to_string()).collect();
            println!("channels {}", channels.join(" "));
            println!("weight {}", path.total_weight);
            Ok(())
        }
        Command::Spanner { net, k, variant, verify, seed, out } => {
            let network = load(&net)?;
            let config = SpannerConfig::new(k, variant).map_err(Fail::usage)?;
            let spanner = build_spanner(&network, config).map_err(Fail::usage)?;
            write_out(out.as_deref(), &spanner.to_text())?;
            if let Some(count) = verify {
                if network.len() < 2 {
                    return Err(Fail::usage("need at least two nodes to verify"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pairs: Vec<(NodeId, NodeId)> = (0..count)
                    .map(|_| {
                        let s = rng.gen_range(0..network.len());
                        let d = (s + rng.gen_range(1..network.len())) % network.len();
                        (s, d)
                    })
                    .collect();
                let report = verify_spanner(&network, &spanner, &pairs);
                eprintln!("{report}");
                if let Some(v) = report.violations.first() {
                    return Err(Fail(INVARIANT, format!("stretch bound violated: {v:?}")));
                }
            }
            Ok(())
        }
        Command::Gen { n, mode, range, channels, per_node, seed, side, weightmode, out } => {
            let mode = match mode {
                Mode::ConstantDensity => RangeMode::ConstantDensity,
                Mode::FixedRange => RangeMode::FixedRange(range),
            };
            let weights = match weightmode {
                Weights::Unit => WeightMode::Unit,
                Weights::Euclid => WeightMode::Euclidean,
            };
            let cfg = TopologyConfig::new(n, mode, channels, per_node, seed)
                .weight_mode(weights)
                .region_side(side);
            let network = random_topology(&cfg).map_err(Fail::usage)?;
            write_out(out.as_deref(), &serialize_network(&network))
        }
        Command::Experiment { config } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Fail::usage(format!("{}: {e}", config.display())))?;
            let cfg = ExperimentConfig::parse(&text)
                .map_err(|e| Fail::usage(format!("{}: {e}", config.display())))?;
            let result = run_and_write(&cfg).map_err(Fail::usage)?;
            if cfg.output.is_none() {
                print!("{}", result.to_csv());
            }
            eprintln!("{} trials, {} points", result.rows.len(), result.means.len());
            if let Some(d) = result.discrepancies.first() {
                return Err(Fail(INVARIANT, format!("{} discrepancies, first: {d:?}", result.discrepancies.len())));
            }
            Ok(())
        }
        Command::Verify { net } => {
            let network = load(&net)?;
            let check = cross_check(&network);
            let with_matching = check.verdicts.iter().filter(|v| v.matching.is_some()).count();
            let with_path = check.verdicts.iter().filter(|v| v.path.is_some()).count();
            println!(
                "pairs {} matching-oracle {} path-oracle {}",
                check.verdicts.len(),
                with_matching,
                with_path
            );
            let bad: Vec<_> = check.disagreements().collect();
            for v in &bad {
                println!("disagreement {v:?}");
            }
            if bad.is_empty() {
                println!("all solvers agree");
                Ok(())
            } else {
                Err(Fail(INVARIANT, format!("{} disagreeing pairs", bad.len())))
            }
        }
    }
}
