#![no_main]

use libfuzzer_sys::fuzz_target;

// Any accepted config must survive dump -> parse unchanged.
fuzz_target!(|data: &str| {
    if let Ok(cfg) = qcnoise::parse_config(data) {
        let dumped = cfg.dump();
        let again = qcnoise::parse_config(&dumped).expect("dump of a valid config parses");
        assert_eq!(again, cfg);
    }
});
