//! Workload builders shared by the benchmarks.

use meshsim_core::config::{NodeSpec, RadioPreset, Role, ScenarioConfig};
use meshsim_core::experiments::builtin_scenario;
use meshsim_core::types::{Message, MessageKind, NodeId};

/// A `side x side` grid of sensors spaced `spacing_m` apart with the hub in
/// the corner. Every grid neighbor is in range at the ground-level preset
/// when `spacing_m` is at most 6.
pub fn grid_scenario(side: u16, spacing_m: f64, duration_ms: u64) -> ScenarioConfig {
    let mut cfg = builtin_scenario("line3").expect("builtin parses");
    cfg.name = format!("grid{side}");
    cfg.radio = RadioPreset::GroundLevel;
    cfg.duration_ms = duration_ms;
    cfg.nodes = (0..side * side)
        .map(|i| NodeSpec {
            id: NodeId(i),
            x: f64::from(i % side) * spacing_m,
            y: f64::from(i / side) * spacing_m,
            role: if i == 0 { Role::Hub } else { Role::Sensor },
        })
        .collect();
    cfg
}

/// `n` distinct data messages from one origin.
pub fn data_stream(n: u32) -> Vec<Message> {
    (0..n)
        .map(|seq| {
            Message::originate(
                MessageKind::Data,
                NodeId(1),
                seq,
                seq.to_be_bytes().to_vec(),
            )
        })
        .collect()
}
