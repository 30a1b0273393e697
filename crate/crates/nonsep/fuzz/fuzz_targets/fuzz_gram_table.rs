#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    nonsep::fuzz_harness::fuzz_gram_table(data);
});
