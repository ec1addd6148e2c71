#![no_main]

use landcover_svm::raster_io::{format_positions, parse_positions};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(positions) = parse_positions(text) {
            assert_eq!(parse_positions(&format_positions(&positions)).unwrap(), positions);
        }
    }
});
