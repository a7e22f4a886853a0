#![no_main]

use std::sync::OnceLock;

use dmct_cli::commands::{parse_cochain, parse_hecke_op};
use dmct_cli::report::Report;
use dmct_core::level::Level;
use libfuzzer_sys::fuzz_target;

fn level() -> &'static Level {
    static LEVEL: OnceLock<Level> = OnceLock::new();
    LEVEL.get_or_init(|| Level::parse("q=2;p=T;r=2").unwrap())
}

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // The two selector grammars must reject garbage without panicking.
    let _ = parse_cochain(text, level());
    let _ = parse_hecke_op(text, level());
    // The cache loader decodes reports from disk; arbitrary JSON must
    // come back as a clean error, never a panic.
    let _ = serde_json::from_str::<Report>(text);
});
