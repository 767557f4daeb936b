#![no_main]

use dualgraph::enumerate::checkpoint::parse_checkpoint;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(state) = parse_checkpoint(text) else { return };
    let again = parse_checkpoint(&state.to_text()).expect("written checkpoint parses");
    assert_eq!(again, state);
});
