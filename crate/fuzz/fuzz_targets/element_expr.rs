#![no_main]

use libfuzzer_sys::fuzz_target;
use nichols::braiding::BraidingMatrix;
use nichols::freealg::parse_element;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let m = BraidingMatrix::from_json_str(r#"{"cyclotomic_order": 3, "theta": 2, "entries": [["z", "z^2"], [1, "z"]]}"#)
        .unwrap();
    let _ = parse_element(text, &m, 3);
});
