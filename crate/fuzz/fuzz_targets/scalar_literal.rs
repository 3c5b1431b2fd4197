#![no_main]

use libfuzzer_sys::fuzz_target;
use nichols::expr::parse_scalar;
use nichols::scalars::parse_literal;

// First byte picks the cyclotomic order, the rest is the literal.
fuzz_target!(|data: &[u8]| {
    let Some((&m, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let m = u32::from(m % 48) + 1;
    if let Ok(s) = parse_literal(text, m) {
        // Display must parse back to the same value.
        let back = parse_scalar(&s.to_string(), s.cyclotomic_order(), 'z').expect("display reparses");
        assert_eq!(back, s);
    }
    let _ = parse_scalar(text, m, 'z');
});
