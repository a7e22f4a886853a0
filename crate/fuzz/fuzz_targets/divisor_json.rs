#![no_main]

use std::sync::OnceLock;

use dmct_core::divisors::HeightDivisor;
use dmct_core::level::Level;
use libfuzzer_sys::fuzz_target;

fn levels() -> &'static [Level; 4] {
    static LEVELS: OnceLock<[Level; 4]> = OnceLock::new();
    LEVELS.get_or_init(|| {
        [
            Level::parse("q=2;p=T;r=3").unwrap(),
            Level::parse("q=2;p=T^2+T+1;r=2").unwrap(),
            Level::parse("q=3;p=T;r=5").unwrap(),
            Level::parse("q=4;modulus=x^2+x+1;p=T;r=2").unwrap(),
        ]
    })
}

fuzz_target!(|data: &[u8]| {
    if data.len() < 2 || data.len() > 4096 {
        return;
    }
    let (tag, rest) = data.split_first().unwrap();
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let level = &levels()[(*tag % 4) as usize];
    if let Ok(d) = HeightDivisor::from_json_str(level, text) {
        let printed = d.to_json_string();
        let again =
            HeightDivisor::from_json_str(level, &printed).expect("canonical form reparses");
        assert_eq!(again, d, "divisor JSON roundtrip");
    }
});
