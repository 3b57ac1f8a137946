#![no_main]

use libfuzzer_sys::fuzz_target;
use nahm_rat::json::{self, NahmSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = json::parse_nahm_spec(text) {
        if !matches!(spec, NahmSpec::File(_)) {
            let _ = spec.load(|_| unreachable!());
        }
    }
});
