#![no_main]

use acx::problem::parse_problem;
use acx::prover::{prove, ProveOptions};
use libfuzzer_sys::fuzz_target;

// Small budgets keep each run short; budget errors are expected, panics are not.
fuzz_target!(|data: &[u8]| {
    if data.len() > 512 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = parse_problem(text) else { return };
    let opts = ProveOptions {
        budget: 2000,
        ..Default::default()
    };
    let _ = prove(&p, &opts);
});
