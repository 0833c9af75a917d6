//! The JSON files under fixtures/ must parse to the in-code fixtures.
//! Set QUASILR_WRITE_FIXTURES=1 to regenerate them.

use std::path::PathBuf;

use quasilr::fixtures;
use quasilr::io::{parse_scheme, scheme_to_json};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn fixture_files_agree_with_builders() {
    let write = std::env::var_os("QUASILR_WRITE_FIXTURES").is_some();
    for (name, s) in fixtures::all() {
        let path = dir().join(format!("{name}.json"));
        let json = scheme_to_json(&s);
        if write {
            std::fs::create_dir_all(dir()).unwrap();
            std::fs::write(&path, &json).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let parsed = parse_scheme(&text).unwrap();
        assert_eq!(scheme_to_json(&parsed), json, "{name}");
        assert_eq!(parsed.validate(), s.validate(), "{name}");
    }
}
