#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    nonsep::fuzz_harness::fuzz_config_json(data);
});
