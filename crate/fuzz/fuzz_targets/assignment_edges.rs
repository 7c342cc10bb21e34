#![no_main]

use chanalloc::assign::{parse_edges, render_edges};
use libfuzzer_sys::fuzz_target;

// First two bytes pick the network size, the rest is the CSV body.
fuzz_target!(|data: &[u8]| {
    let [u, c, rest @ ..] = data else { return };
    let users = 1 + (*u as usize % 8);
    let channels = 1 + (*c as usize % 8);
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(a) = parse_edges(text, users, channels) {
        assert!(a.validate().is_ok());
        assert_eq!(parse_edges(&render_edges(&a), users, channels).unwrap(), a);
    }
});
