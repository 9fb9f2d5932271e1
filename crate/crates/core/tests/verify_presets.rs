use debranges::presets;
use debranges::verify::run_checks;

#[test]
fn every_check_passes_on_both_presets() {
    for preset in presets::all() {
        let checks = run_checks(&preset, 7).unwrap();
        for c in &checks {
            println!("{:6} {:28} {} {}", preset.name, c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail);
        }
        assert!(checks.iter().all(|c| c.passed), "preset {}", preset.name);
    }
}
