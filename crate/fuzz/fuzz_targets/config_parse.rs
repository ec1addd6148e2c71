#![no_main]

use std::path::Path;

use lcsvm::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = RunConfig::parse(text, Path::new("")) {
            let _ = cfg.validate();
        }
    }
});
