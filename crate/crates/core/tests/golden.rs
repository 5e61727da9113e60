use std::path::Path;

use ars_core::locus::genericity_codims;

const GOLDEN: &str = "tests/golden/codims.json";

fn table_text() -> String {
    let tables: Vec<_> = (2..=12).map(|n| genericity_codims(n).unwrap()).collect();
    serde_json::to_string_pretty(&tables).unwrap() + "\n"
}

/// Set `ARS_BLESS=1` to rewrite the golden file after an intended change.
#[test]
fn codim_table_matches_golden() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN);
    let text = table_text();
    if std::env::var_os("ARS_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let golden = std::fs::read_to_string(&path).unwrap();
    assert!(golden == text, "codim table drifted from {GOLDEN}");
}

#[test]
fn low_dimensions_have_hypersurface_locus() {
    for n in [2, 3] {
        let t = genericity_codims(n).unwrap();
        assert_eq!(t.max_corank, 1);
        assert_eq!(t.rows[0].codim, 1);
    }
}
