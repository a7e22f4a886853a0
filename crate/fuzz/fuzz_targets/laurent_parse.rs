#![no_main]

use std::sync::OnceLock;

use dmct_core::fq::FqConfig;
use dmct_core::laurent::Laurent;
use libfuzzer_sys::fuzz_target;

fn fields() -> &'static [FqConfig; 4] {
    static FIELDS: OnceLock<[FqConfig; 4]> = OnceLock::new();
    FIELDS.get_or_init(|| {
        [
            FqConfig::prime_field(2).unwrap(),
            FqConfig::prime_field(3).unwrap(),
            FqConfig::prime_field(5).unwrap(),
            FqConfig::parse("q=4;modulus=x^2+x+1").unwrap(),
        ]
    })
}

fuzz_target!(|data: &[u8]| {
    if data.len() < 2 || data.len() > 512 {
        return;
    }
    let (tag, rest) = data.split_first().unwrap();
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let fq = &fields()[(*tag % 4) as usize];
    if let Ok(y) = Laurent::parse(fq, text) {
        let printed = y.to_string();
        let again = Laurent::parse(fq, &printed).expect("canonical form reparses");
        assert_eq!(again, y, "display/parse roundtrip");
    }
});
