use std::fs;
use std::io::{self, BufReader, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use meshsim_core::commander::{
    check_reachability, Session, DEFAULT_PROBE_DEADLINE_MS, DEFAULT_SETTLE_MS,
};
use meshsim_core::config::{Algorithm, ScenarioConfig};
use meshsim_core::experiments::{
    builtin_plan_text, builtin_scenario_text, run_plan, ExperimentPlan, BUILTIN_PLANS,
    BUILTIN_SCENARIOS,
};
use meshsim_core::simnet::{self, World};
use meshsim_core::types::NodeId;

#[derive(Parser)]
#[command(
    name = "meshsim",
    version,
    about = "Mesh relay simulator: BTM-R flooding vs. MAM hub routing"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one scenario and print its JSON report.
    Run {
        /// Scenario TOML file, or the name of a built-in scenario.
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        algo: Option<Algorithm>,
        /// Override the scenario duration, in milliseconds.
        #[arg(long)]
        duration_ms: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment plan and write tables, series and per-run reports.
    Plan {
        /// Plan TOML file, or the name of a built-in plan.
        plan: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Serve the commander session protocol on stdin/stdout or a TCP port.
    Serve {
        scenario: String,
        #[arg(long)]
        port: Option<u16>,
        /// Append a transcript of every command and reply to this file.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Simulated milliseconds each command is given to propagate.
        #[arg(long, default_value_t = DEFAULT_SETTLE_MS)]
        settle_ms: u64,
    },
    /// Probe which nodes can be reached from the commander.
    Reach {
        scenario: String,
        #[arg(long, default_value_t = DEFAULT_PROBE_DEADLINE_MS)]
        deadline_ms: u64,
        /// Nodes to power off before probing.
        #[arg(long, num_args = 1..)]
        remove: Vec<u16>,
        /// Simulated milliseconds to run before probing.
        #[arg(long, default_value_t = 0)]
        warmup_ms: u64,
    },
    /// List built-in scenarios and plans, or print one of them.
    Builtins {
        name: Option<String>,
        /// Look `name` up among plans instead of scenarios.
        #[arg(long)]
        plan: bool,
    },
}

fn load_scenario(arg: &str) -> Result<ScenarioConfig> {
    let path = Path::new(arg);
    if path.exists() {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return ScenarioConfig::from_toml(&text)
            .with_context(|| format!("loading {}", path.display()));
    }
    match builtin_scenario_text(arg) {
        Some(text) => Ok(ScenarioConfig::from_toml(text)?),
        None => bail!("no scenario file or built-in named `{arg}`"),
    }
}

fn load_plan(arg: &str) -> Result<ExperimentPlan> {
    let path = Path::new(arg);
    if path.exists() {
        return ExperimentPlan::load(path).with_context(|| format!("loading {}", path.display()));
    }
    if builtin_plan_text(arg).is_some() {
        return Ok(ExperimentPlan::builtin(arg)?);
    }
    bail!("no plan file or built-in named `{arg}`")
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main(cli: Cli) -> Result<()> {
    match cli.command {
        Cmd::Run {
            scenario,
            seed,
            algo,
            duration_ms,
            out,
        } => {
            let mut cfg = load_scenario(&scenario)?;
            if let Some(seed) = seed {
                cfg.rng_seed = seed;
            }
            if let Some(algo) = algo {
                cfg.algorithm = algo;
            }
            if let Some(d) = duration_ms {
                cfg.duration_ms = d;
            }
            let report = simnet::run(&cfg)?;
            let json = report.to_json();
            match out {
                Some(path) => fs::write(&path, json + "\n")
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{json}"),
            }
        }
        Cmd::Plan { plan, out_dir } => {
            let plan = load_plan(&plan)?;
            let outcome = run_plan(&plan)?;
            let written = outcome.write_to(&out_dir)?;
            print!("{}", outcome.table.to_text());
            eprintln!("wrote {} files to {}", written.len(), out_dir.display());
        }
        Cmd::Serve {
            scenario,
            port,
            log,
            settle_ms,
        } => {
            let cfg = load_scenario(&scenario)?;
            let mut session = Session::new(World::new(cfg)?).with_settle_ms(settle_ms);
            let mut log_file = match &log {
                Some(path) => Some(
                    fs::OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(path)
                        .with_context(|| format!("opening {}", path.display()))?,
                ),
                None => None,
            };
            match port {
                None => {
                    let stdin = io::stdin();
                    session.serve(
                        stdin.lock(),
                        io::stdout().lock(),
                        log_file.as_mut().map(|f| f as &mut dyn Write),
                    )?;
                }
                Some(port) => {
                    let listener = TcpListener::bind(("127.0.0.1", port))?;
                    eprintln!("listening on {}", listener.local_addr()?);
                    // One client at a time; the simulated world persists across connections.
                    for stream in listener.incoming() {
                        let stream = stream?;
                        let reader = BufReader::new(stream.try_clone()?);
                        if let Err(e) = session.serve(
                            reader,
                            stream,
                            log_file.as_mut().map(|f| f as &mut dyn Write),
                        ) {
                            eprintln!("client error: {e}");
                        }
                    }
                }
            }
        }
        Cmd::Reach {
            scenario,
            deadline_ms,
            remove,
            warmup_ms,
        } => {
            let cfg = load_scenario(&scenario)?;
            let mut world = World::new(cfg)?;
            world.run_for(warmup_ms)?;
            for id in remove {
                world.remove_node(NodeId(id))?;
            }
            let r = check_reachability(&mut world, deadline_ms)?;
            let ids =
                |s: &std::collections::BTreeSet<NodeId>| s.iter().map(|n| n.0).collect::<Vec<_>>();
            let value = serde_json::json!({
                "prober": r.prober.0,
                "probed_at_ms": r.probed_at.ms(),
                "deadline_ms": r.deadline_ms,
                "acked": ids(&r.acked),
                "missing": ids(&r.missing),
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Cmd::Builtins { name, plan } => match name {
            None => {
                println!("scenarios: {}", BUILTIN_SCENARIOS.join(" "));
                println!("plans: {}", BUILTIN_PLANS.join(" "));
            }
            Some(name) => {
                let text = if plan {
                    builtin_plan_text(&name)
                } else {
                    builtin_scenario_text(&name)
                };
                let text = text.with_context(|| format!("no built-in named `{name}`"))?;
                print!("{text}");
            }
        },
    }
    Ok(())
}
