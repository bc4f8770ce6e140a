#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;

use reccost_cli::{run_with, RunReport};

pub fn run(argv: &[&str]) -> (i32, RunReport) {
    run_with(argv.iter().copied(), &mut std::io::sink(), &mut std::io::sink())
}

pub fn run_text(argv: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let (code, _) = run_with(argv.iter().copied(), &mut out, &mut std::io::sink());
    (code, String::from_utf8(out).unwrap())
}

pub fn write_file(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path
}

/// Samples of `1 + t^2 / 2` on `[-3, 3]`.
pub fn quadratic_samples() -> String {
    let mut s = String::from("t,H\n");
    for i in -60..=60 {
        let t = i as f64 * 0.05;
        s.push_str(&format!("{t},{}\n", 1.0 + t * t / 2.0));
    }
    s
}

/// Samples of `cosh t` on `[-5, 5]`.
pub fn cosh_samples() -> String {
    let mut s = String::from("t,H\n");
    for i in -500..=500 {
        let t = i as f64 * 0.01;
        s.push_str(&format!("{t},{}\n", t.cosh()));
    }
    s
}
