#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(rows) = qcnoise::output::read_series_csv(data) {
        for r in rows {
            assert!(r.t.is_finite() && r.triple.purity.is_finite());
        }
    }
});
