#![no_main]

use landcover_svm::assessment::kappa;
use landcover_svm::persist::AssessmentRecord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(record) = AssessmentRecord::parse(text) {
            let _ = kappa(&record.confusion);
            assert_eq!(AssessmentRecord::parse(&record.to_text()).unwrap(), record);
        }
    }
});
