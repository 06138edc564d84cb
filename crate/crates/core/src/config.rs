//! Scenario configuration and its TOML representation.
//!
//! A scenario file is a flat set of keys followed by a `[[node]]` table per
//! node and an optional `[[mobility]]` table per Mobile-Hub waypoint:
//!
//! ```toml
//! algorithm = "mam"
//! heartbeat_period_ms = 1000
//! data_period_ms = 5000
//! duration_ms = 300000
//! radio = "ground-level"
//!
//! [[node]]
//! id = 0
//! x = 0.0
//! y = 0.0
//! role = "hub"
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::NodeId;

pub const DEFAULT_DELTA_MS: u64 = 100_000;
pub const DEFAULT_RELAY_CACHE_SIZE: usize = 20;
pub const DEFAULT_TX_QUEUE_CAPACITY: usize = 200;
pub const DEFAULT_LATENCY_MS: u64 = 10;
pub const DEFAULT_AIRTIME_MS: u64 = 5;
pub const DEFAULT_DATA_START_MS: u64 = 1_000;

/// Nodes on the ground stop hearing each other beyond 6 m.
pub const GROUND_LEVEL_RANGE_M: f64 = 6.0;
/// Raised nodes with antennas facing each other reach 40 m.
pub const ELEVATED_RANGE_M: f64 = 40.0;
/// Raised nodes with antennas facing away from each other reach 32 m.
pub const ELEVATED_OPPOSED_RANGE_M: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "btmr")]
    Btmr,
    #[serde(rename = "mam")]
    Mam,
}

impl Algorithm {
    pub fn slug(self) -> &'static str {
        match self {
            Algorithm::Btmr => "btmr",
            Algorithm::Mam => "mam",
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Algorithm::Btmr => 0,
            Algorithm::Mam => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Algorithm::Btmr),
            1 => Some(Algorithm::Mam),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Btmr => "BTM-R",
            Algorithm::Mam => "MAM",
        })
    }
}

impl FromStr for Algorithm {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "btmr" | "btm-r" => Ok(Algorithm::Btmr),
            "mam" => Ok(Algorithm::Mam),
            _ => Err(ConfigError::invalid(
                "algorithm",
                format!("unknown algorithm `{s}`"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Sensor,
    Hub,
    Commander,
    /// Relays traffic but originates no data.
    Relay,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Sensor => "sensor",
            Role::Hub => "hub",
            Role::Commander => "commander",
            Role::Relay => "relay",
        }
    }
}

/// Disc radio range, either one of the measured presets or explicit meters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadioPreset {
    #[default]
    GroundLevel,
    Elevated,
    ElevatedOpposed,
    Range(f64),
}

impl RadioPreset {
    pub fn range_m(self) -> f64 {
        match self {
            RadioPreset::GroundLevel => GROUND_LEVEL_RANGE_M,
            RadioPreset::Elevated => ELEVATED_RANGE_M,
            RadioPreset::ElevatedOpposed => ELEVATED_OPPOSED_RANGE_M,
            RadioPreset::Range(m) => m,
        }
    }
}

/// Which dedup structure the hub uses to tell unique from duplicate data.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrackerKind {
    #[default]
    HashMap,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    pub t_ms: u64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub algorithm: Algorithm,
    #[serde(default = "default_delta")]
    pub delta_ms: u64,
    pub heartbeat_period_ms: u64,
    pub data_period_ms: u64,
    /// Time of the first data message of the first sensor.
    #[serde(default = "default_data_start")]
    pub data_start_ms: u64,
    /// Offset added per sensor (in node-table order) to its first data message.
    #[serde(default)]
    pub data_stagger_ms: u64,
    #[serde(default = "default_relay_cache")]
    pub relay_cache_size: usize,
    #[serde(default = "default_tx_queue")]
    pub tx_queue_capacity: usize,
    pub duration_ms: u64,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default)]
    pub radio: RadioPreset,
    #[serde(default = "default_latency")]
    pub latency_ms: u64,
    /// Time a node's radio is busy per transmitted frame.
    #[serde(default = "default_airtime")]
    pub airtime_ms: u64,
    #[serde(default)]
    pub loss_prob: f64,
    /// Send every unicast twice. Reproduces the duplicate data seen on hardware.
    #[serde(default)]
    pub fault_duplicate_unicast: bool,
    #[serde(default)]
    pub hub_tracker: TrackerKind,
    #[serde(default)]
    pub tracker_entry_limit: Option<usize>,
    #[serde(rename = "node")]
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub mobility: Vec<Waypoint>,
}

fn default_delta() -> u64 {
    DEFAULT_DELTA_MS
}
fn default_data_start() -> u64 {
    DEFAULT_DATA_START_MS
}
fn default_relay_cache() -> usize {
    DEFAULT_RELAY_CACHE_SIZE
}
fn default_tx_queue() -> usize {
    DEFAULT_TX_QUEUE_CAPACITY
}
fn default_latency() -> u64 {
    DEFAULT_LATENCY_MS
}
fn default_airtime() -> u64 {
    DEFAULT_AIRTIME_MS
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("cannot parse scenario")]
    Parse(#[from] toml::de::Error),
    #[error("cannot write scenario")]
    Serialize(#[from] toml::ser::Error),
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
}

impl ConfigError {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field,
            reason: reason.into(),
        }
    }

    /// Name of the offending field, when the error is a validation failure.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            ConfigError::Invalid { field, .. } => Some(field),
            _ => None,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        Ok(toml::to_string(self)?)
    }

    pub fn hub(&self) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.role == Role::Hub)
    }

    pub fn commander(&self) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.role == Role::Commander)
    }

    /// Checks every structural invariant. A zero `duration_ms` is accepted and
    /// yields an empty run.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &'static str, v: u64| {
            if v == 0 {
                Err(ConfigError::invalid(field, "must be positive"))
            } else {
                Ok(())
            }
        };
        positive("delta_ms", self.delta_ms)?;
        positive("heartbeat_period_ms", self.heartbeat_period_ms)?;
        positive("data_period_ms", self.data_period_ms)?;
        positive("latency_ms", self.latency_ms)?;
        positive("airtime_ms", self.airtime_ms)?;
        if self.relay_cache_size == 0 {
            return Err(ConfigError::invalid("relay_cache_size", "must be positive"));
        }
        if self.tx_queue_capacity == 0 {
            return Err(ConfigError::invalid(
                "tx_queue_capacity",
                "must be positive",
            ));
        }
        if !(0.0..1.0).contains(&self.loss_prob) {
            return Err(ConfigError::invalid("loss_prob", "must lie in [0, 1)"));
        }
        let range = self.radio.range_m();
        if !range.is_finite() || range <= 0.0 {
            return Err(ConfigError::invalid(
                "radio",
                "range must be positive and finite",
            ));
        }
        if self.tracker_entry_limit == Some(0) {
            return Err(ConfigError::invalid(
                "tracker_entry_limit",
                "must be positive",
            ));
        }

        let mut ids: Vec<NodeId> = self.nodes.iter().map(|n| n.id).collect();
        ids.sort();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConfigError::invalid("node", "duplicate node id"));
        }
        if self
            .nodes
            .iter()
            .any(|n| !n.x.is_finite() || !n.y.is_finite())
        {
            return Err(ConfigError::invalid("node", "positions must be finite"));
        }
        match self.nodes.iter().filter(|n| n.role == Role::Hub).count() {
            1 => {}
            n => {
                return Err(ConfigError::invalid(
                    "node",
                    format!("exactly one hub required, found {n}"),
                ))
            }
        }
        if self
            .nodes
            .iter()
            .filter(|n| n.role == Role::Commander)
            .count()
            > 1
        {
            return Err(ConfigError::invalid(
                "node",
                "at most one commander allowed",
            ));
        }

        if self.mobility.windows(2).any(|w| w[0].t_ms >= w[1].t_ms) {
            return Err(ConfigError::invalid(
                "mobility",
                "waypoint times must be strictly increasing",
            ));
        }
        if self
            .mobility
            .iter()
            .any(|w| !w.x.is_finite() || !w.y.is_finite())
        {
            return Err(ConfigError::invalid("mobility", "positions must be finite"));
        }
        Ok(())
    }
}
