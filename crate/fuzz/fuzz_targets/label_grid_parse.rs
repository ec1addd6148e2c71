#![no_main]

use landcover_svm::persist::LabelFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(file) = LabelFile::parse(text) {
            assert_eq!(LabelFile::parse(&file.to_text()).unwrap(), file);
        }
    }
});
