use std::fs;
use std::path::{Path, PathBuf};

use lcsvm::config::RunConfig;

#[test]
fn config_seeds_parse_and_mutations_do_not_panic() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/config_parse");
    let mut count = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let cfg = RunConfig::parse(&text, Path::new("/base")).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.validate().unwrap();
        for n in 0..text.len() {
            if text.is_char_boundary(n) {
                let _ = RunConfig::parse(&text[..n], Path::new(""));
            }
        }
        count += 1;
    }
    assert!(count >= 2);
}
