#![no_main]

use landcover_svm::raster_io::decode_ppm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((w, h, pixels)) = decode_ppm(data) {
        assert_eq!(pixels.len(), w * h);
    }
});
