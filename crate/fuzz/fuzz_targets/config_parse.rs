#![no_main]

use libfuzzer_sys::fuzz_target;
use spincal::parse_configs;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Errors are fine, panics are not. prepare builds the space and the
    // initial point but never integrates.
    if let Ok(configs) = parse_configs(text) {
        for (i, cfg) in configs.iter().take(4).enumerate() {
            let _ = cfg.prepare(i, 0, None);
        }
    }
});
