//! Command-and-control plane: operator verbs, the line-oriented session
//! protocol spoken by the commander node, stats collection at the hub and the
//! reachability probe.
//!
//! Protocol, one command per line (CR/LF tolerated, telnet-compatible):
//!
//! ```text
//! > sim-reset
//! OK
//! > sim-stats
//! OK 3 nodes
//! node  role       algorithm  generated  relayed  received  tx_dropped  restarts
//! ...
//! > bogus
//! ERR unknown command
//! ```
//!
//! `sim-stats` answers `OK <n> nodes` followed by a header line and exactly
//! `n` rows. Every other successful command answers a bare `OK`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use crate::config::{Algorithm, Role};
use crate::metrics::NodeStats;
use crate::simnet::{SimError, World};
use crate::types::{NodeId, SimTime};

/// Default simulated time a session lets a command propagate before replying.
pub const DEFAULT_SETTLE_MS: u64 = 3_000;
/// Default simulated time a reachability probe waits for acknowledgments.
pub const DEFAULT_PROBE_DEADLINE_MS: u64 = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verb {
    SimReset,
    SetMam,
    SetBtmr,
    SimStats,
    /// Restarts the commander node only.
    Reboot,
    /// Restarts every node. Extension; not part of the original command set.
    RebootAll,
}

impl Verb {
    pub const ALL: [Verb; 6] = [
        Verb::SimReset,
        Verb::SetMam,
        Verb::SetBtmr,
        Verb::SimStats,
        Verb::Reboot,
        Verb::RebootAll,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Verb::SimReset => "sim-reset",
            Verb::SetMam => "set-mam",
            Verb::SetBtmr => "set-btmr",
            Verb::SimStats => "sim-stats",
            Verb::Reboot => "reboot",
            Verb::RebootAll => "reboot-all",
        }
    }

    pub fn parse(s: &str) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.as_str() == s)
    }

    pub fn code(self) -> u8 {
        match self {
            Verb::SimReset => 1,
            Verb::SetMam => 2,
            Verb::SetBtmr => 3,
            Verb::SimStats => 4,
            Verb::Reboot => 5,
            Verb::RebootAll => 6,
        }
    }

    pub fn from_code(code: u8) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.code() == code)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub issued_at: SimTime,
}

/// One row of the hub's statistics printout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StatsRow {
    pub node: NodeId,
    pub role: Role,
    pub algorithm: Algorithm,
    pub stats: NodeStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachabilityReport {
    pub probed_at: SimTime,
    pub prober: NodeId,
    pub acked: BTreeSet<NodeId>,
    pub missing: BTreeSet<NodeId>,
    pub deadline_ms: u64,
}

/// Issues `verb` from the commander and lets the mesh run for `settle_ms`.
pub fn execute_command(world: &mut World, verb: Verb, settle_ms: u64) -> Result<Command, SimError> {
    let cmd = world.submit(verb)?;
    world.run_for(settle_ms)?;
    Ok(cmd)
}

/// Floods a probe and partitions the other provisioned nodes by whether they
/// acknowledged within `deadline_ms`.
pub fn check_reachability(
    world: &mut World,
    deadline_ms: u64,
) -> Result<ReachabilityReport, SimError> {
    let probed_at = world.now();
    world.start_probe();
    world.run_for(deadline_ms)?;
    let (prober, acked) = world.finish_probe().expect("probe started above");
    let missing = world
        .node_ids()
        .into_iter()
        .filter(|id| *id != prober && !acked.contains(id))
        .collect();
    let acked = acked.into_iter().filter(|id| *id != prober).collect();
    Ok(ReachabilityReport {
        probed_at,
        prober,
        acked,
        missing,
        deadline_ms,
    })
}

/// What the hub prints for `sim-stats`: every report it holds plus its own.
pub fn hub_stats_table(world: &World) -> Vec<StatsRow> {
    let hub = world.hub_id();
    let mut rows: Vec<StatsRow> = world
        .stats_inbox()
        .iter()
        .filter_map(|(&node, entry)| {
            Some(StatsRow {
                node,
                role: world.role_of(node).ok()?,
                algorithm: entry.algorithm,
                stats: entry.stats,
            })
        })
        .collect();
    rows.push(StatsRow {
        node: hub,
        role: Role::Hub,
        algorithm: world.algorithm_of(hub).expect("hub exists"),
        stats: world.node_stats(hub).expect("hub exists"),
    });
    rows.sort_by_key(|r| r.node);
    rows
}

pub fn format_stats_table(rows: &[StatsRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<5} {:<10} {:<9} {:>9} {:>8} {:>8} {:>10} {:>8}",
        "node", "role", "algorithm", "generated", "relayed", "received", "tx_dropped", "restarts"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<5} {:<10} {:<9} {:>9} {:>8} {:>8} {:>10} {:>8}",
            r.node.0,
            r.role.as_str(),
            r.algorithm.to_string(),
            r.stats.generated,
            r.stats.relayed,
            r.stats.received,
            r.stats.tx_dropped,
            r.stats.restarts
        );
    }
    out
}

/// `ERR` reply carrying the whole error chain on one line.
fn err_line(e: &dyn std::error::Error) -> String {
    let mut line = format!("ERR {e}");
    let mut cause = e.source();
    while let Some(c) = cause {
        line.push_str(": ");
        line.push_str(&c.to_string());
        cause = c.source();
    }
    line.push('\n');
    line
}

/// Outcome of one session line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reply {
    /// Response text, newline-terminated.
    Text(String),
    /// The client asked to close the session.
    Quit,
}

/// Interactive commander session bound to one simulated world.
pub struct Session {
    world: World,
    settle_ms: u64,
}

impl Session {
    pub fn new(world: World) -> Self {
        Session {
            world,
            settle_ms: DEFAULT_SETTLE_MS,
        }
    }

    pub fn with_settle_ms(mut self, settle_ms: u64) -> Self {
        self.settle_ms = settle_ms;
        self
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn world_mut(&mut self) -> &mut World {
        &mut self.world
    }

    pub fn handle_line(&mut self, line: &str) -> Reply {
        let line = line.trim();
        let mut words = line.split_whitespace();
        let Some(word) = words.next() else {
            return Reply::Text("ERR empty command\n".into());
        };
        let rest: Vec<&str> = words.collect();
        match word {
            "quit" | "exit" => return Reply::Quit,
            "help" => {
                let verbs: Vec<&str> = Verb::ALL.iter().map(|v| v.as_str()).collect();
                return Reply::Text(format!("OK {} reach help quit\n", verbs.join(" ")));
            }
            "reach" => return Reply::Text(self.reach(&rest)),
            _ => {}
        }
        let Some(verb) = Verb::parse(word) else {
            return Reply::Text("ERR unknown command\n".into());
        };
        if !rest.is_empty() {
            return Reply::Text(format!("ERR {} takes no arguments\n", verb.as_str()));
        }
        if let Err(e) = execute_command(&mut self.world, verb, self.settle_ms) {
            return Reply::Text(err_line(&e));
        }
        if verb == Verb::SimStats {
            let rows = hub_stats_table(&self.world);
            Reply::Text(format!(
                "OK {} nodes\n{}",
                rows.len(),
                format_stats_table(&rows)
            ))
        } else {
            Reply::Text("OK\n".into())
        }
    }

    fn reach(&mut self, args: &[&str]) -> String {
        let deadline = match args {
            [] => DEFAULT_PROBE_DEADLINE_MS,
            [ms] => match ms.parse::<u64>() {
                Ok(v) if v > 0 => v,
                _ => return "ERR deadline must be a positive integer\n".into(),
            },
            _ => return "ERR usage: reach [deadline_ms]\n".into(),
        };
        match check_reachability(&mut self.world, deadline) {
            Ok(r) => {
                let ids = |s: &BTreeSet<NodeId>| {
                    s.iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                format!("OK acked={} missing={}\n", ids(&r.acked), ids(&r.missing))
            }
            Err(e) => err_line(&e),
        }
    }

    /// Runs the session over a line stream until EOF or `quit`. When `log` is
    /// given, every input line (prefixed `> `) and reply is copied to it.
    pub fn serve<R: BufRead, W: Write>(
        &mut self,
        input: R,
        mut output: W,
        mut log: Option<&mut dyn Write>,
    ) -> io::Result<()> {
        for line in input.lines() {
            let line = line?;
            if let Some(log) = log.as_mut() {
                writeln!(log, "> {}", line.trim_end())?;
            }
            match self.handle_line(&line) {
                Reply::Quit => break,
                Reply::Text(text) => {
                    output.write_all(text.as_bytes())?;
                    output.flush()?;
                    if let Some(log) = log.as_mut() {
                        log.write_all(text.as_bytes())?;
                    }
                }
            }
        }
        Ok(())
    }
}
