#![no_main]

use dmct_core::level::Level;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 512 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(level) = Level::parse(text) {
        let printed = level.to_level_string();
        let again = Level::parse(&printed).expect("canonical form reparses");
        assert_eq!(again, level, "level string roundtrip");
    }
});
