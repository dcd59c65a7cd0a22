#![no_main]

use acx::problem::{parse_problem, render_problem};
use libfuzzer_sys::fuzz_target;

// Whatever parses must render to text that parses back to the same problem.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = parse_problem(text) else { return };
    let rendered = render_problem(&p);
    let q = parse_problem(&rendered).expect("rendered problem parses");
    assert_eq!(p, q, "{rendered}");
});
