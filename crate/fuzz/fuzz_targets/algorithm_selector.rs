#![no_main]

use chanalloc::assign::Objective;
use chanalloc::experiment::{parse_algorithms, AlgorithmSelector, Evaluation, Sweep};
use chanalloc::sim::OverheadMode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(alg) = text.parse::<AlgorithmSelector>() {
        assert_eq!(alg.to_string().parse::<AlgorithmSelector>().unwrap(), alg);
    }
    let _ = parse_algorithms(text);
    let _ = text.parse::<Evaluation>();
    let _ = text.parse::<Objective>();
    let _ = text.parse::<OverheadMode>();
    if let Ok(sweep) = text.parse::<Sweep>() {
        assert!(!sweep.values().is_empty());
    }
});
