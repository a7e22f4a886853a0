#![no_main]

use dmct_core::fq::FqConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 512 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(fq) = FqConfig::parse(text) {
        let printed = fq.to_config_string();
        let again = FqConfig::parse(&printed).expect("canonical form reparses");
        assert_eq!(again.to_config_string(), printed, "canonical form is stable");
        assert_eq!(again.q(), fq.q());
    }
});
