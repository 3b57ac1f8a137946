#![no_main]

use libfuzzer_sys::fuzz_target;
use nahm_rat::json;
use nahm_rat::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tol = Tolerances::default();
    if let Ok(spec) = json::parse_loop(text, &tol) {
        if let Some(value) = json::loop_to_json(&spec) {
            let back = json::parse_loop(&json::to_string(&value), &tol).expect("written loops parse");
            assert_eq!(back.k(), spec.k());
        }
    }
});
