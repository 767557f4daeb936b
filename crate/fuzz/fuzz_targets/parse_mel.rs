#![no_main]

use dualgraph::multigraph::{parse_mel, ParseMode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for mode in [ParseMode::Lenient, ParseMode::MaxDegreeThree, ParseMode::Trivalent] {
        let Ok(g) = parse_mel(text, mode) else { continue };
        let again = parse_mel(&g.to_mel(), mode).expect("written MEL parses");
        assert_eq!(again.sorted_edges(), g.sorted_edges());
        if g.vertex_count() > 0 && g.vertex_count() <= 64 && g.is_connected() {
            let canon = parse_mel(&g.to_canonical_mel(), mode).expect("canonical MEL parses");
            assert_eq!(canon.to_canonical_mel(), g.to_canonical_mel());
        }
    }
});
