//! Replays the fuzz seed corpora through the same round trips the fuzz
//! targets assert, so they run on a stable toolchain too.

use std::fs;
use std::path::PathBuf;

use dualgraph::enumerate::checkpoint::parse_checkpoint;
use dualgraph::multigraph::{parse_mel, parse_mel_stream, ParseMode};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let bytes = fs::read(&path).unwrap();
            (path.file_name().unwrap().to_string_lossy().into_owned(), String::from_utf8_lossy(&bytes).into_owned())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn mel_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("parse_mel") {
        for mode in [ParseMode::Lenient, ParseMode::MaxDegreeThree, ParseMode::Trivalent] {
            let Ok(g) = parse_mel(&text, mode) else { continue };
            parsed += 1;
            let again = parse_mel(&g.to_mel(), mode).unwrap();
            assert_eq!(again.sorted_edges(), g.sorted_edges(), "{name}");
            if g.vertex_count() > 0 && g.is_connected() {
                let canon = parse_mel(&g.to_canonical_mel(), mode).unwrap();
                assert_eq!(canon.to_canonical_mel(), g.to_canonical_mel(), "{name}");
            }
        }
    }
    assert!(parsed > 0);
}

#[test]
fn mel_stream_seeds() {
    for (name, text) in seeds("parse_mel_stream") {
        let records = parse_mel_stream(&text, ParseMode::Lenient).unwrap();
        let written: String = records.iter().map(|(_, g)| g.to_mel()).collect();
        let again = parse_mel_stream(&written, ParseMode::Lenient).unwrap();
        assert_eq!(again.len(), records.len(), "{name}");
    }
}

#[test]
fn checkpoint_seeds() {
    for (name, text) in seeds("parse_checkpoint") {
        let state = parse_checkpoint(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_checkpoint(&state.to_text()).unwrap(), state, "{name}");
    }
}
