#![no_main]

use landcover_svm::raster_io::{RasterImage, ValueType};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(raster) = RasterImage::from_bytes(data) {
        // anything that decodes must re-encode losslessly as f64
        let bytes = raster.to_bytes(ValueType::F64).unwrap();
        assert_eq!(RasterImage::from_bytes(&bytes).unwrap(), raster);
    }
});
