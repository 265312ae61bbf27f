use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kolmo::montecarlo::{self, MonteCarloConfig, Prob};
use kolmo::runner::{run_script, RunOptions};
use kolmo::script::parse_script;
use kolmo::suites::{self, SuiteConfig, SUITES};
use kolmo::{Case, Report};
use kolmo_core::setmulti::nonextension_witness;
use kolmo_core::vietoris::{causality_search, SearchConfig};

/// Exact checks of Markov-category axioms, zero--one laws and their
/// counterexamples.
#[derive(Parser)]
#[command(name = "kolmo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the JSON report instead of one line per case.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check script, or a built-in suite with --suite.
    Check {
        /// Script file (`.kms`).
        script: Option<PathBuf>,
        /// Built-in suite name, or `all`.
        #[arg(long, conflicts_with = "script")]
        suite: Option<String>,
        /// Instance count for randomized suites (default: each suite's own).
        #[arg(long)]
        count: Option<usize>,
        /// Window depth for family suites.
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Run independent directives and instances concurrently.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical P(mean ≥ θ) for i.i.d. Bernoulli(q) windows.
    DemoKolmogorov {
        #[arg(long, default_value = "1/2")]
        q: Prob,
        #[arg(long, default_value = "3/5")]
        theta: Prob,
        /// Flips per window.
        #[arg(long, default_value_t = 10_000)]
        window: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 8)]
        shards: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The same statistic for an exchangeable mixture of two coins.
    DemoHewittSavage {
        #[arg(long, num_args = 2, default_values = ["3/10", "7/10"])]
        biases: Vec<Prob>,
        #[arg(long, num_args = 2, default_values = ["1/2", "1/2"])]
        weights: Vec<Prob>,
        #[arg(long, default_value = "1/2")]
        theta: Prob,
        #[arg(long, default_value_t = 10_000)]
        window: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 8)]
        shards: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Search random finite spaces for a counterexample to causality of the
    /// Vietoris monad's Kleisli category; reports what it finds.
    SearchCausality {
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long, default_value_t = 2_000)]
        budget: usize,
        #[arg(long)]
        discrete_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Distinct SetMulti states with identical proper marginal images.
    WitnessSetmulti {
        /// Largest N; every 1 ≤ n ≤ N is checked.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            script,
            suite,
            count,
            depth,
            parallel,
            common,
        } => {
            if let Some(name) = suite {
                let cfg = SuiteConfig {
                    seed: common.seed,
                    count,
                    depth,
                    parallel,
                };
                let selected: Vec<_> = if name == "all" {
                    SUITES.to_vec()
                } else {
                    match suites::suite(&name) {
                        Some(f) => vec![(name.as_str(), f)],
                        None => {
                            let names: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
                            return usage_error(format!("unknown suite `{name}`; available: {}", names.join(", ")));
                        }
                    }
                };
                let mut report = Report::new(name.clone(), Some(common.seed));
                for (_, f) in selected {
                    report.extend(f(&cfg));
                }
                return emit(&report, common.json);
            }
            let Some(path) = script else {
                return usage_error("give a script path or --suite");
            };
            let text = match std::fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("cannot read {}: {e}", path.display())),
            };
            let parsed = match parse_script(&text) {
                Ok(s) => s,
                Err(e) => return usage_error(format!("{}:{e}", path.display())),
            };
            let opts = RunOptions {
                base_dir: path.parent().map(PathBuf::from),
                parallel,
                suite: Some(path.display().to_string()),
            };
            let mut report = run_script(&parsed, &opts);
            report.seed = Some(common.seed);
            emit(&report, common.json)
        }
        Command::DemoKolmogorov {
            q,
            theta,
            window,
            samples,
            shards,
            common,
        } => {
            let cfg = MonteCarloConfig::kolmogorov(q, theta, window, samples, common.seed).with_shards(shards);
            match montecarlo::simulate_kolmogorov_demo(&cfg) {
                Ok(res) => emit(&montecarlo::report("demo-kolmogorov", &cfg, &res), common.json),
                Err(e) => usage_error(e),
            }
        }
        Command::DemoHewittSavage {
            biases,
            weights,
            theta,
            window,
            samples,
            shards,
            common,
        } => {
            let cfg = MonteCarloConfig::mixture(biases, weights, theta, window, samples, common.seed).with_shards(shards);
            match montecarlo::simulate_hs_negative_control(&cfg) {
                Ok(res) => emit(&montecarlo::report("demo-hewitt-savage", &cfg, &res), common.json),
                Err(e) => usage_error(e),
            }
        }
        Command::SearchCausality {
            max_points,
            budget,
            discrete_only,
            common,
        } => {
            if max_points == 0 {
                return usage_error("--max-points must be ≥ 1");
            }
            let cfg = SearchConfig {
                max_points,
                seed: common.seed,
                budget,
                discrete_only,
            };
            let mut report = Report::new("search-causality", Some(common.seed));
            report.push(Case::from(causality_search(&cfg).report()));
            emit(&report, common.json)
        }
        Command::WitnessSetmulti { depth, common } => {
            if !(1..=20).contains(&depth) {
                return usage_error("--depth must be between 1 and 20");
            }
            let mut report = Report::new("witness-setmulti", None);
            for n in 1..=depth {
                match nonextension_witness(n) {
                    Ok((_, _, c)) => report.push(c),
                    Err(e) => return usage_error(e),
                }
            }
            emit(&report, common.json)
        }
    }
}
