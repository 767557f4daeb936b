#![no_main]

use dualgraph::multigraph::{parse_mel_stream, ParseMode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(records) = parse_mel_stream(text, ParseMode::Lenient) else { return };
    let written: String = records.iter().map(|(_, g)| g.to_mel()).collect();
    let again = parse_mel_stream(&written, ParseMode::Lenient).expect("written stream parses");
    assert_eq!(again.len(), records.len());
    for ((_, a), (_, b)) in again.iter().zip(&records) {
        assert_eq!(a.sorted_edges(), b.sorted_edges());
    }
});
