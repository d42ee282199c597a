#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(events) = qcnoise::output::read_events_csv(data) {
        let text = qcnoise::output::events_csv(&events);
        assert_eq!(qcnoise::output::read_events_csv(&text).unwrap(), events);
    }
});
