//! Fuzzes the CLI run-config decoder: arbitrary bytes must parse or
//! fail cleanly, never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

use bellwave_cli::config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = config::parse(text);
});
