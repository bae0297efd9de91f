use monadcert::pipeline::{run_scenario, ScenarioConfig};

fn run(genus: u32) {
    let cfg = ScenarioConfig { samples: 300, ..ScenarioConfig::for_genus(genus) };
    let report = run_scenario(&cfg).unwrap();
    print!("{}", report.summary());
    assert!(report.all_passed(), "genus {genus} failed");
}

#[test]
fn genus_5() {
    run(5);
}

#[test]
fn genus_6() {
    run(6);
}

#[test]
fn genus_7() {
    run(7);
}

#[test]
fn genus_8() {
    run(8);
}

#[test]
fn genus_9() {
    run(9);
}

#[test]
fn genus_10() {
    run(10);
}

#[test]
fn genus_11() {
    run(11);
}

#[test]
fn genus_12() {
    run(12);
}

#[test]
fn genus_13() {
    run(13);
}
