//! Replays the fuzz corpora through the properties the fuzz targets assert.

use std::fs;
use std::path::PathBuf;

use hoalg::format;
use hoalg::models::{example, Example};
use hoalg::scalar::{format_q, parse_q};

fn corpus(name: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(name);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus {}", dir.display());
    out
}

#[test]
fn algebra_file_corpus() {
    let mut accepted = 0;
    for (path, text) in corpus("algebra_file") {
        if let Ok(file) = format::parse(&text) {
            accepted += 1;
            assert_eq!(format::parse(&file.dump()).unwrap(), file, "{}", path.display());
        }
    }
    assert!(accepted >= 5);
}

#[test]
fn scalar_corpus() {
    for (path, text) in corpus("scalar") {
        if let Ok(v) = parse_q(&text) {
            assert_eq!(parse_q(&format_q(&v)).unwrap(), v, "{}", path.display());
        }
    }
}

#[test]
fn example_corpus() {
    let mut built = 0;
    for (_, text) in corpus("example") {
        let words: Vec<&str> = text.split_whitespace().collect();
        let (name, params) = words.split_first().unwrap();
        if let Ok(ex) = Example::parse(name, params) {
            example(&ex).unwrap();
            built += 1;
        }
    }
    assert_eq!(built, 4);
}
