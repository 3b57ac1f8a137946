#![no_main]

use libfuzzer_sys::fuzz_target;
use nahm_rat::bwpairs::BWPair;
use nahm_rat::json::{self, MapFile};
use nahm_rat::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tol = Tolerances::default();
    if let Ok(file) = json::parse_map(text, &tol) {
        let map = file.to_map();
        let again = json::parse_map(&json::to_string(&json::map_to_json(&map)), &tol);
        if let Ok(again) = again {
            assert_eq!(again.to_map().k(), map.k());
        }
        if let MapFile::PartialFractions(pf) = file {
            let _ = BWPair::lift_partial_fractions(&pf).project();
        }
    }
});
