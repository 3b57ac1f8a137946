#![no_main]

use libfuzzer_sys::fuzz_target;
use nahm_rat::json;
use nahm_rat::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tol = Tolerances::default();
    if let Ok(pair) = json::parse_pair(text, &tol) {
        let back = json::parse_pair(&json::to_string(&json::pair_to_json(&pair)), &tol).expect("written pairs parse");
        assert_eq!(back, pair);
        let _ = pair.is_cyclic(&tol);
        let _ = pair.project_with(&tol);
    }
});
