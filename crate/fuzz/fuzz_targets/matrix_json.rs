#![no_main]

use libfuzzer_sys::fuzz_target;
use nichols::braiding::BraidingMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = BraidingMatrix::from_json_str(text) {
        let again = BraidingMatrix::from_json_str(&m.to_json().to_string()).expect("output reparses");
        assert_eq!(again, m);
    }
});
