//! Deterministic simulator for sensor-data collection over a
//! Bluetooth-Mesh-style flooding network.
//!
//! Two relay strategies are compared: BTM-R, the stock controlled-flooding
//! relay with an LRU message cache and a 127-hop cap, and MAM, which floods
//! periodic heartbeats from a Mobile-Hub so that every node learns a
//! least-hop neighbor toward it and then unicasts data along that route.
//!
//! * [`types`] and [`config`]: message format, identifiers, scenario files.
//! * [`routing`]: both relay decisions as pure functions.
//! * [`simnet`]: the discrete-event engine.
//! * [`metrics`]: unique/duplicate trackers, run reports, aggregation.
//! * [`commander`]: operator commands, session protocol, reachability probe.
//! * [`experiments`]: shipped scenarios, plan runner, comparison tables.

pub mod commander;
pub mod config;
pub mod experiments;
pub mod metrics;
pub mod routing;
pub mod simnet;
pub mod types;

pub use commander::{
    check_reachability, execute_command, Command, ReachabilityReport, Session, Verb,
};
pub use config::{Algorithm, NodeSpec, RadioPreset, Role, ScenarioConfig, TrackerKind, Waypoint};
pub use experiments::{run_plan, ComparisonTable, ExperimentPlan, PlanOutcome};
pub use metrics::{
    aggregate, scale_rule_of_three, DedupTracker, HashMapTracker, IntervalTracker, NodeStats,
    Recorded, RunReport,
};
pub use routing::{btmr_relay, mam_handle, MamState, RelayAction, RelayCache};
pub use simnet::{run, SimError, World};
pub use types::{message_hash, Message, MessageKey, MessageKind, NodeId, SimTime};
