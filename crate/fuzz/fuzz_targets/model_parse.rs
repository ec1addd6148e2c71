#![no_main]

use landcover_svm::persist::{model_to_string, parse_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(model) = parse_model(text) {
            let again = parse_model(&model_to_string(&model)).unwrap();
            assert_eq!(model_to_string(&again), model_to_string(&model));
        }
    }
});
