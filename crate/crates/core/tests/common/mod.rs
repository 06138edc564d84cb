#![allow(dead_code)]

use meshsim_core::config::{NodeSpec, RadioPreset, Role, ScenarioConfig};
use meshsim_core::experiments::builtin_scenario;
use meshsim_core::types::NodeId;

/// `line3` timing and defaults with the given node layout.
pub fn layout(
    nodes: &[(u16, f64, f64, Role)],
    radio: RadioPreset,
    duration_ms: u64,
) -> ScenarioConfig {
    ScenarioConfig {
        name: "custom".into(),
        radio,
        duration_ms,
        nodes: nodes
            .iter()
            .map(|&(id, x, y, role)| NodeSpec {
                id: NodeId(id),
                x,
                y,
                role,
            })
            .collect(),
        mobility: Vec::new(),
        ..builtin_scenario("line3").unwrap()
    }
}

/// Every shipped scenario with the given tweak applied.
pub fn shipped(tweak: impl Fn(&mut ScenarioConfig)) -> Vec<ScenarioConfig> {
    meshsim_core::experiments::BUILTIN_SCENARIOS
        .iter()
        .map(|name| {
            let mut cfg = builtin_scenario(name).unwrap();
            tweak(&mut cfg);
            cfg
        })
        .collect()
}

/// Compares `actual` with `tests/golden/<name>`. Set `UPDATE_GOLDEN=1` to
/// rewrite the file instead.
pub fn assert_golden(name: &str, actual: &str) {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!(
            "{}: {e} (run with UPDATE_GOLDEN=1 to create)",
            path.display()
        )
    });
    assert!(
        expected == actual,
        "{name} differs from golden\n--- expected\n{expected}\n--- actual\n{actual}"
    );
}
