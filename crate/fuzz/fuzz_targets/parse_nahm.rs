#![no_main]

use libfuzzer_sys::fuzz_target;
use nahm_rat::json;
use nahm_rat::nahm::nahm_residual;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(nahm) = json::parse_nahm(text) {
        let _ = nahm_residual(&nahm, &[-0.5, 0.0, 0.5]);
    }
});
