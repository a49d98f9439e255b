mod support;

use floorplan_core::checks::{check_connectivity, CheckConfig};
use support::{checker_verdict, expectations, fixture_set, flood_fill_verdict, load_plan, Flow};

#[test]
fn checker_and_flood_fill_agree_on_the_corpus() {
    let expected: std::collections::BTreeMap<String, Flow> =
        expectations("connectivity_expected.json");
    let fixtures = fixture_set("connectivity");
    assert_eq!(fixtures.len(), 10);
    for (name, text) in fixtures {
        let plan = load_plan(&text);
        for grid in [0.5, 0.25] {
            let cfg = CheckConfig {
                grid_cell: grid,
                ..CheckConfig::default()
            };
            let findings = check_connectivity(&plan, &cfg);
            let codes: Vec<&str> = findings.iter().map(|f| f.code.as_str()).collect();
            let ours = checker_verdict(&codes);
            let oracle = flood_fill_verdict(&plan, grid, cfg.clearance_delta);
            assert_eq!(ours, oracle, "{name} at {grid}");
            assert_eq!(ours, expected[&name], "{name} at {grid}");
        }
    }
}

#[test]
fn wider_clearance_turns_a_one_foot_gap_narrow() {
    let plan = load_plan(&support::read_fixture("connectivity/c06_one_foot_gap.json"));
    let cfg = CheckConfig {
        clearance_delta: 1.5,
        ..CheckConfig::default()
    };
    let codes: Vec<&str> = check_connectivity(&plan, &cfg)
        .iter()
        .map(|f| f.code.as_str())
        .collect();
    assert_eq!(checker_verdict(&codes), Flow::Narrow);
    assert_eq!(flood_fill_verdict(&plan, 0.5, 1.5), Flow::Narrow);
}
