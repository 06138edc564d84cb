mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use meshsim_core::config::Algorithm;
use meshsim_core::experiments::{builtin_scenario, run_plan, ExperimentPlan, BUILTIN_PLANS};
use meshsim_core::metrics::RunReport;
use meshsim_core::simnet::run;
use meshsim_core::types::{message_hash, Message, MessageKind, NodeId};

use common::assert_golden;

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

#[test]
fn every_shipped_plan_is_byte_reproducible() {
    for name in BUILTIN_PLANS {
        let plan = ExperimentPlan::builtin(name).unwrap();
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        run_plan(&plan).unwrap().write_to(a.path()).unwrap();
        run_plan(&plan).unwrap().write_to(b.path()).unwrap();
        let (fa, fb) = (read_dir(a.path()), read_dir(b.path()));
        assert!(
            fa.contains_key("table.csv") && fa.contains_key("table.txt"),
            "{name}"
        );
        assert_eq!(
            fa.len(),
            2 + plan.algorithms.len() + plan.runs().len(),
            "{name}"
        );
        assert_eq!(fa, fb, "{name}");
    }
}

#[test]
fn line3_plan_outputs_match_golden() {
    let plan = ExperimentPlan::builtin("line3").unwrap();
    let out = run_plan(&plan).unwrap();
    assert_golden("plan_line3_table.txt", &out.table.to_text());
    let mut csv = Vec::new();
    out.table.write_csv(&mut csv).unwrap();
    assert_golden("plan_line3_table.csv", &String::from_utf8(csv).unwrap());
    out.table.verify_scaling(1e-9).unwrap();
}

#[test]
fn report_json_matches_golden_and_round_trips() {
    let mut cfg = builtin_scenario("desk4").unwrap();
    cfg.duration_ms = 120_000;
    cfg.algorithm = Algorithm::Mam;
    let report = run(&cfg).unwrap();
    let json = report.to_json();
    assert_golden("report_desk4_mam_2min.json", &(json.clone() + "\n"));
    assert_eq!(RunReport::from_json(&json).unwrap(), report);

    let mut csv = Vec::new();
    RunReport::write_csv(&mut csv, [&report]).unwrap();
    assert_golden(
        "report_desk4_mam_2min.csv",
        &String::from_utf8(csv).unwrap(),
    );
}

#[test]
fn message_hash_is_frozen() {
    // FNV-1a 64 over origin (BE), seq (BE), payload
    assert_eq!(message_hash(&[], NodeId(0), 0), 0xd7e4_fcfa_299d_713d);
    let m = Message::originate(
        MessageKind::Data,
        NodeId(0x0102),
        0x0304_0506,
        vec![0xAA, 0xBB],
    );
    assert_eq!(
        m.relay_hash(),
        message_hash(&[0xAA, 0xBB], NodeId(0x0102), 0x0304_0506)
    );
    assert_eq!(m.relay_hash(), 0x80a8_158b_3831_f9e1);
}
