#![no_main]

use chanalloc::{parse_scenario, render_scenario};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(scenario) = parse_scenario(text) {
        let rendered = render_scenario(&scenario).expect("valid scenarios render");
        let again = parse_scenario(&rendered).expect("rendered scenarios parse");
        assert_eq!(again.model, scenario.model);
        assert_eq!(again.assignment, scenario.assignment);
    }
});
