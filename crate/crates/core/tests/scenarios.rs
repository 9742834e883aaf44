use std::path::PathBuf;

use mlsw_core::presets;
use mlsw_core::scenario::load_scenario;

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn shipped_files_match_presets() {
    for name in presets::NAMES {
        let path = scenario_dir().join(format!("{name}.toml"));
        let loaded = load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(loaded, presets::by_name(name).unwrap(), "{name}");
    }
}

#[test]
fn shipped_files_build_problems() {
    for name in presets::NAMES {
        let sc = load_scenario(&scenario_dir().join(format!("{name}.toml"))).unwrap();
        let p = sc.problem().unwrap();
        let s = sc.initial_state(&p).unwrap();
        assert_eq!(s.cells(), sc.grid.cells);
    }
}
