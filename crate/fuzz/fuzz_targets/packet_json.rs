//! Fuzzes the wave-packet JSON decoder: parsing arbitrary bytes must
//! never panic, and anything that parses must survive a
//! serialize/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

use bellwave::wavepacket::{packet_from_json, packet_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(packet) = packet_from_json(text) else {
        return;
    };
    let reencoded = packet_to_json(&packet).expect("accepted packets re-serialize");
    let reloaded = packet_from_json(&reencoded).expect("round trip parses");
    assert_eq!(packet.samples.len(), reloaded.samples.len());
    assert_eq!(packet.alpha, reloaded.alpha);
    assert_eq!(packet.beta, reloaded.beta);
});
