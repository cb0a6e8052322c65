use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use edge_alloc::harness::{self, Algo, RunMatrixSpec, EXIT_USAGE};
use edge_alloc::policy::{PolicyConfig, PolicyKind};
use edge_alloc::solver::OptProtocol;
use edge_alloc::workload::{parse_instance, DemandOrder, GenSpec, IntRange};

#[derive(Parser)]
#[command(name = "edge-alloc", version, about = "Online weight assignment with edge failures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 4)]
        consumers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on an instance file and print per-step CSV
    Run {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoName::Greedy)]
        algo: AlgoName,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the offline LP model to this path
        #[arg(long)]
        emit_lp: Option<PathBuf>,
        /// Failure handling of the offline optimum (algo opt only)
        #[arg(long, value_enum, default_value_t = ProtocolName::Hindsight)]
        opt_protocol: ProtocolName,
    },
    /// Sweep consumer counts, algorithms and seeds; print aggregate CSV
    Bench {
        #[command(flatten)]
        gen: GenArgs,
        /// Consumer counts, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8, 16])]
        consumers: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgoName::Greedy, AlgoName::Opt])]
        policies: Vec<AlgoName>,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Seeds as `a..b` (half open) or a comma separated list
        #[arg(long, default_value = "0..20", value_parser = parse_seeds)]
        seeds: SeedList,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 4)]
    producers: usize,
    #[arg(long, default_value_t = 0)]
    failures: usize,
    /// Inclusive distance range `lo,hi`
    #[arg(long, default_value = "1,50", value_parser = parse_range)]
    distance_range: IntRange,
    #[arg(long, default_value = "10,1000", value_parser = parse_range)]
    capacity_range: IntRange,
    #[arg(long, default_value = "1,100", value_parser = parse_range)]
    demand_range: IntRange,
    #[arg(long, value_enum, default_value_t = OrderName::Uniform)]
    order: OrderName,
}

impl GenArgs {
    fn spec(&self, consumers: usize, seed: u64) -> GenSpec {
        GenSpec {
            num_consumers: consumers,
            num_producers: self.producers,
            distance_range: self.distance_range,
            capacity_range: self.capacity_range,
            demand_range: self.demand_range,
            demand_order: match self.order {
                OrderName::Uniform => DemandOrder::Uniform,
                OrderName::Ascending => DemandOrder::Ascending,
                OrderName::Hash => DemandOrder::HashStream,
            },
            failure_count: self.failures,
            seed,
        }
    }
}

#[derive(Args)]
struct PolicyArgs {
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Candidate-set size (default min(4, producers))
    #[arg(long)]
    k: Option<usize>,
    /// Random draws before falling back to greedy (default k)
    #[arg(long)]
    iters: Option<usize>,
    /// Randomized runs for derandomized
    #[arg(long, default_value_t = 8)]
    runs: usize,
}

impl PolicyArgs {
    fn algo(&self, name: AlgoName, seed: u64, protocol: OptProtocol) -> Algo {
        let kind = match name {
            AlgoName::Opt => return Algo::Opt(protocol),
            AlgoName::Greedy => PolicyKind::Greedy,
            AlgoName::Randomized => PolicyKind::Randomized,
            AlgoName::Derandomized => PolicyKind::Derandomized,
            AlgoName::Proportional => PolicyKind::Proportional,
        };
        Algo::Policy(PolicyConfig {
            kind,
            beta: self.beta,
            k: self.k,
            max_iterations: self.iters,
            seed,
            runs: self.runs,
        })
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum AlgoName {
    Greedy,
    Randomized,
    Derandomized,
    Proportional,
    Opt,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolName {
    Hindsight,
    Staged,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderName {
    Uniform,
    Ascending,
    Hash,
}

#[derive(Clone)]
struct SeedList(Vec<u64>);

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
        return Ok(SeedList((a..b).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|e| format!("{x}: {e}")))
        .collect::<Result<_, _>>()
        .map(SeedList)
}

fn parse_range(s: &str) -> Result<IntRange, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("edge-alloc: {msg}");
    ExitCode::from(EXIT_USAGE as u8)
}

fn emit(text: &str) -> io::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };

    match cli.command {
        Command::Gen {
            gen,
            consumers,
            seed,
            out,
        } => {
            let text = match harness::cmd_gen(&gen.spec(consumers, seed)) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let written = match out {
                Some(path) => fs::write(&path, text),
                None => emit(&text),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Run {
            instance,
            algo,
            policy,
            seed,
            emit_lp,
            opt_protocol,
        } => {
            let protocol = match opt_protocol {
                ProtocolName::Hindsight => OptProtocol::Hindsight,
                ProtocolName::Staged if algo == AlgoName::Opt => OptProtocol::Staged,
                ProtocolName::Staged => return fail("--opt-protocol staged applies to --algo opt only"),
            };
            let text = match fs::read_to_string(&instance) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", instance.display())),
            };
            let (inst, trace) = match parse_instance(&text) {
                Ok(p) => p,
                Err(e) => return fail(format!("{}: {e}", instance.display())),
            };
            if let Some(path) = emit_lp {
                if let Err(e) = fs::write(&path, harness::lp_text(&inst, &trace)) {
                    return fail(format!("{}: {e}", path.display()));
                }
            }
            let report = match harness::cmd_run(&inst, &trace, &policy.algo(algo, seed, protocol)) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            if let Err(e) = emit(&report.csv) {
                return fail(e);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Bench {
            gen,
            consumers,
            policies,
            policy,
            seeds,
        } => {
            let spec = RunMatrixSpec {
                consumers,
                algos: policies
                    .into_iter()
                    .map(|p| policy.algo(p, 0, OptProtocol::Hindsight))
                    .collect(),
                seeds: seeds.0,
                template: gen.spec(1, 0),
            };
            match harness::cmd_bench(&spec) {
                Ok(csv) => match emit(&csv) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(e),
                },
                Err(e) => fail(e),
            }
        }
    }
}
