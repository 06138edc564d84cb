//! Scenarios and plans shipped with the crate.

use crate::config::{ConfigError, ScenarioConfig};

const LINE3: &str = include_str!("../../scenarios/line3.toml");
const DESK4: &str = include_str!("../../scenarios/desk4.toml");
const INDOOR10: &str = include_str!("../../scenarios/indoor10.toml");
const OUTDOOR10: &str = include_str!("../../scenarios/outdoor10.toml");

const PLAN_LINE3: &str = include_str!("../../plans/line3.toml");
const PLAN_OUTDOOR: &str = include_str!("../../plans/outdoor.toml");
const PLAN_INDOOR: &str = include_str!("../../plans/indoor.toml");

pub const BUILTIN_SCENARIOS: [&str; 4] = ["line3", "desk4", "indoor10", "outdoor10"];
pub const BUILTIN_PLANS: [&str; 3] = ["line3", "outdoor", "indoor"];

pub fn builtin_scenario_text(name: &str) -> Option<&'static str> {
    match name {
        "line3" => Some(LINE3),
        "desk4" => Some(DESK4),
        "indoor10" => Some(INDOOR10),
        "outdoor10" => Some(OUTDOOR10),
        _ => None,
    }
}

pub fn builtin_scenario(name: &str) -> Result<ScenarioConfig, ConfigError> {
    let text =
        builtin_scenario_text(name).ok_or_else(|| ConfigError::UnknownBuiltin(name.to_string()))?;
    ScenarioConfig::from_toml(text)
}

pub fn builtin_plan_text(name: &str) -> Option<&'static str> {
    match name {
        "line3" => Some(PLAN_LINE3),
        "outdoor" => Some(PLAN_OUTDOOR),
        "indoor" => Some(PLAN_INDOOR),
        _ => None,
    }
}
