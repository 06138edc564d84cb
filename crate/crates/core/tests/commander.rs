mod common;

use meshsim_core::commander::{execute_command, hub_stats_table, Reply, Session, Verb};
use meshsim_core::config::{Algorithm, RadioPreset, Role};
use meshsim_core::experiments::builtin_scenario;
use meshsim_core::simnet::World;
use meshsim_core::types::NodeId;
use meshsim_core::ScenarioConfig;

use common::{assert_golden, layout};

fn desk4() -> World {
    World::new(builtin_scenario("desk4").unwrap()).unwrap()
}

fn transcript(script: &[&str]) -> String {
    let mut session = Session::new(desk4());
    let input = script.join("\n") + "\n";
    let mut out = Vec::new();
    let mut log = Vec::new();
    session
        .serve(input.as_bytes(), &mut out, Some(&mut log))
        .unwrap();
    String::from_utf8(log).unwrap()
}

#[test]
fn scripted_session_matches_golden() {
    let log = transcript(&[
        "sim-reset",
        "set-mam",
        "sim-stats",
        "set-btmr",
        "sim-stats",
        "bogus",
    ]);
    assert_golden("session_desk4.txt", &log);
}

#[test]
fn replies_are_well_formed() {
    let mut s = Session::new(desk4());
    assert_eq!(s.handle_line("sim-reset\r\n"), Reply::Text("OK\n".into()));
    assert_eq!(
        s.handle_line("bogus"),
        Reply::Text("ERR unknown command\n".into())
    );
    assert_eq!(
        s.handle_line("   "),
        Reply::Text("ERR empty command\n".into())
    );
    assert!(matches!(s.handle_line("set-mam now"), Reply::Text(t) if t.starts_with("ERR")));
    assert_eq!(s.handle_line("quit"), Reply::Quit);

    let Reply::Text(stats) = s.handle_line("sim-stats") else {
        panic!()
    };
    let lines: Vec<&str> = stats.lines().collect();
    let n: usize = lines[0]
        .strip_prefix("OK ")
        .unwrap()
        .strip_suffix(" nodes")
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(lines.len(), n + 2);
    assert!(lines[1].starts_with("node"));
    assert_eq!(n, 4);
}

#[test]
fn serve_stops_at_quit() {
    let mut s = Session::new(desk4());
    let mut out = Vec::new();
    s.serve("set-mam\nquit\nset-btmr\n".as_bytes(), &mut out, None)
        .unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "OK\n");
    assert_eq!(s.world().algorithm_of(NodeId(2)).unwrap(), Algorithm::Mam);
}

#[test]
fn reach_in_session() {
    let mut s = Session::new(desk4());
    assert_eq!(
        s.handle_line("reach"),
        Reply::Text("OK acked=0,2,3 missing=\n".into())
    );
    assert!(matches!(s.handle_line("reach 0"), Reply::Text(t) if t.starts_with("ERR")));
}

#[test]
fn sim_reset_zeroes_stats_and_routes_everywhere() {
    let mut w = desk4();
    execute_command(&mut w, Verb::SetMam, 3_000).unwrap();
    w.run_for(20_000).unwrap();
    assert!(w.mam_state(NodeId(2)).unwrap().best_node.is_some());
    assert!(w.report().unique_received > 0);

    // stop the clock right after the reset floods
    w.submit(Verb::SimReset).unwrap();
    w.run_for(200).unwrap();
    let now = w.now();
    for id in w.node_ids() {
        let st = w.mam_state(id).unwrap();
        let stats = w.node_stats(id).unwrap();
        // anything observed after the reset must be later traffic
        assert!(stats.generated <= 1, "{id}: {stats:?}");
        assert!(
            st.best_node.is_none() || st.expiry.ms() > now.ms() - 200 + 100_000 - 1,
            "{id}: {st:?}"
        );
    }
    assert!(w.stats_inbox().is_empty());
}

#[test]
fn set_mam_is_idempotent() {
    let mut once = desk4();
    execute_command(&mut once, Verb::SetMam, 3_000).unwrap();
    once.run_for(30_000).unwrap();

    let mut twice = desk4();
    execute_command(&mut twice, Verb::SetMam, 3_000).unwrap();
    execute_command(&mut twice, Verb::SetMam, 0).unwrap();
    twice.run_for(30_000).unwrap();

    for id in once.node_ids() {
        assert_eq!(once.algorithm_of(id).unwrap(), Algorithm::Mam);
        assert_eq!(twice.algorithm_of(id).unwrap(), Algorithm::Mam);
        assert_eq!(once.mam_state(id).unwrap(), twice.mam_state(id).unwrap());
    }
    assert_eq!(
        once.report().unique_received,
        twice.report().unique_received
    );
    assert_eq!(once.report().data_tx, twice.report().data_tx);
}

#[test]
fn set_mam_switches_data_to_unicast() {
    let mut w = desk4();
    w.run_for(60_000).unwrap();
    let flood = w.report();
    assert!(flood.duplicate_received > 0);

    execute_command(&mut w, Verb::SetMam, 3_000).unwrap();
    execute_command(&mut w, Verb::SimReset, 3_000).unwrap();
    let before = w.report();
    w.run_for(60_000).unwrap();
    let after = w.report();
    assert_eq!(after.duplicate_received, 0);
    assert!(after.unique_received > 0);
    // one hop to the hub: one transmission per reading, give or take the
    // readings already in the air when the tracker was cleared
    let sent = after.data_tx - before.data_tx;
    assert!(
        sent <= after.unique_received && after.unique_received <= sent + 2,
        "{sent} {after:?}"
    );
}

#[test]
fn sim_stats_collects_one_row_per_node() {
    let mut w = desk4();
    w.run_for(10_000).unwrap();
    execute_command(&mut w, Verb::SimStats, 3_000).unwrap();
    let rows = hub_stats_table(&w);
    let nodes: Vec<u16> = rows.iter().map(|r| r.node.0).collect();
    assert_eq!(nodes, vec![0, 1, 2, 3]);
    let sensor = rows.iter().find(|r| r.node == NodeId(2)).unwrap();
    assert_eq!(sensor.role, Role::Sensor);
    assert!(sensor.stats.generated >= 5);
}

#[test]
fn reboot_restarts_only_the_commander() {
    let mut w = desk4();
    w.run_for(5_000).unwrap();
    execute_command(&mut w, Verb::Reboot, 1_000).unwrap();
    assert_eq!(w.node_stats(NodeId(1)).unwrap().restarts, 1);
    for id in [0, 2, 3] {
        assert_eq!(w.node_stats(NodeId(id)).unwrap().restarts, 0);
    }
    execute_command(&mut w, Verb::RebootAll, 1_000).unwrap();
    for id in [0, 2, 3] {
        assert_eq!(w.node_stats(NodeId(id)).unwrap().restarts, 1);
    }
    assert_eq!(w.node_stats(NodeId(1)).unwrap().restarts, 2);
}

#[test]
fn commands_reach_nodes_several_hops_away() {
    let nodes = [
        (0, 0.0, 0.0, Role::Hub),
        (1, 5.0, 0.0, Role::Commander),
        (2, 10.0, 0.0, Role::Relay),
        (3, 15.0, 0.0, Role::Relay),
        (4, 20.0, 0.0, Role::Sensor),
    ];
    let cfg: ScenarioConfig = layout(&nodes, RadioPreset::GroundLevel, 600_000);
    let mut w = World::new(cfg).unwrap();
    execute_command(&mut w, Verb::SetMam, 3_000).unwrap();
    for id in w.node_ids() {
        assert_eq!(w.algorithm_of(id).unwrap(), Algorithm::Mam, "{id}");
    }
    w.run_for(5_000).unwrap();
    assert_eq!(w.mam_state(NodeId(4)).unwrap().best_node, Some(NodeId(3)));
    assert_eq!(w.mam_state(NodeId(4)).unwrap().best_hops, 3);
}
