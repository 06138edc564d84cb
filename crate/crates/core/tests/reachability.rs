mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use meshsim_core::commander::check_reachability;
use meshsim_core::config::{RadioPreset, Role};
use meshsim_core::simnet::{SimError, World};
use meshsim_core::types::{NodeId, SimTime};

use common::layout;

/// Commander 1 reaches sensors 4 and 5 only through node 3:
///
/// ```text
/// 0 -- 1 -- 2 -- 3 -- 4
///                     |
///                     5
/// ```
fn chain() -> World {
    let nodes = [
        (0, 0.0, 0.0, Role::Hub),
        (1, 5.0, 0.0, Role::Commander),
        (2, 10.0, 0.0, Role::Sensor),
        (3, 15.0, 0.0, Role::Relay),
        (4, 20.0, 0.0, Role::Sensor),
        (5, 20.0, 5.0, Role::Sensor),
    ];
    World::new(layout(&nodes, RadioPreset::GroundLevel, 60_000)).unwrap()
}

fn ids(v: &[u16]) -> BTreeSet<NodeId> {
    v.iter().map(|&i| NodeId(i)).collect()
}

#[test]
fn connected_chain_everyone_answers() {
    let mut w = chain();
    let r = check_reachability(&mut w, 2_000).unwrap();
    assert_eq!(r.prober, NodeId(1));
    assert_eq!(r.acked, ids(&[0, 2, 3, 4, 5]));
    assert!(r.missing.is_empty());
}

#[test]
fn removing_articulation_node_cuts_off_its_far_side() {
    let mut w = chain();
    w.run_for(3_000).unwrap();
    w.remove_node(NodeId(3)).unwrap();
    let r = check_reachability(&mut w, 2_000).unwrap();
    assert_eq!(r.acked, ids(&[0, 2]));
    // the removed node is no longer provisioned, so only its far side is missing
    assert_eq!(r.missing, ids(&[4, 5]));
    assert_eq!(r.probed_at, SimTime(3_000));
}

#[test]
fn removing_a_leaf_disconnects_nobody() {
    let mut w = chain();
    w.remove_node(NodeId(5)).unwrap();
    let r = check_reachability(&mut w, 2_000).unwrap();
    assert_eq!(r.acked, ids(&[0, 2, 3, 4]));
    assert!(r.missing.is_empty());
}

#[test]
fn out_of_range_node_is_missing() {
    let nodes = [
        (0, 0.0, 0.0, Role::Hub),
        (1, 3.0, 0.0, Role::Commander),
        (2, 50.0, 0.0, Role::Sensor),
    ];
    let mut w = World::new(layout(&nodes, RadioPreset::GroundLevel, 10_000)).unwrap();
    let r = check_reachability(&mut w, 2_000).unwrap();
    assert_eq!(r.acked, ids(&[0]));
    assert_eq!(r.missing, ids(&[2]));
}

#[test]
fn hub_cannot_be_removed() {
    let mut w = chain();
    assert!(matches!(
        w.remove_node(NodeId(0)),
        Err(SimError::HubRemoval)
    ));
    assert!(matches!(
        w.remove_node(NodeId(77)),
        Err(SimError::UnknownNode(_))
    ));
}

#[test]
fn probe_without_commander_starts_at_the_hub() {
    let nodes = [(0, 0.0, 0.0, Role::Hub), (1, 3.0, 0.0, Role::Sensor)];
    let mut w = World::new(layout(&nodes, RadioPreset::GroundLevel, 10_000)).unwrap();
    let r = check_reachability(&mut w, 1_000).unwrap();
    assert_eq!(r.prober, NodeId(0));
    assert_eq!(r.acked, ids(&[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// With an ideal channel the acknowledgers are exactly the prober's
    /// connected component among the nodes still present.
    #[test]
    fn probe_finds_exactly_the_component(
        points in prop::collection::vec((0.0f64..30.0, 0.0f64..30.0), 3..14),
        removed in prop::collection::vec(any::<bool>(), 14),
    ) {
        let nodes: Vec<(u16, f64, f64, Role)> = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                let role = match i {
                    0 => Role::Hub,
                    1 => Role::Commander,
                    _ => Role::Sensor,
                };
                (i as u16, x, y, role)
            })
            .collect();
        let mut w = World::new(layout(&nodes, RadioPreset::GroundLevel, 5_000)).unwrap();
        for (i, gone) in removed.iter().enumerate().take(nodes.len()).skip(2) {
            if *gone {
                w.remove_node(NodeId(i as u16)).unwrap();
            }
        }
        let topo = w.topology_at(w.now());
        let expected: BTreeSet<NodeId> = topo.component_of(NodeId(1)).into_iter().filter(|&n| n != NodeId(1)).collect();
        let r = check_reachability(&mut w, 3_000).unwrap();
        prop_assert_eq!(&r.acked, &expected);
        let all: BTreeSet<NodeId> = w.node_ids().into_iter().filter(|&n| n != NodeId(1)).collect();
        let missing: BTreeSet<NodeId> = all.difference(&expected).copied().collect();
        prop_assert_eq!(r.missing, missing);
    }
}
