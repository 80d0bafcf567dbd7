#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn quadsemi(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_quadsemi"))
        .args(args)
        .env_remove("QUADSEMI_JOBS")
        .output()
        .expect("spawn quadsemi");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().expect("exit code"),
    }
}

pub const GOLDEN_FIELDS: [i64; 4] = [2, 3, 5, 13];

/// A totally positive element `a + b omega` that is not a multiple of `1`.
fn sample_element(d: i64) -> (&'static str, &'static str) {
    match d {
        2 | 3 => ("3", "1"),
        5 => ("2", "1"),
        13 => ("3", "1"),
        _ => unreachable!(),
    }
}

/// `(file stem, arguments)` for every golden output.
pub fn golden_cases() -> Vec<(String, Vec<String>)> {
    let mut out = Vec::new();
    for d in GOLDEN_FIELDS {
        let ds = d.to_string();
        let (a, b) = sample_element(d);
        out.push((format!("cf_{d}"), vec!["cf".into(), ds.clone()]));
        out.push((
            format!("classify_{d}"),
            vec!["classify".into(), ds.clone(), a.into(), b.into()],
        ));
        out.push((
            format!("count_ud_{d}"),
            vec!["count-ud".into(), ds.clone(), "--verify-brute".into()],
        ));
        out.push((
            format!("reconstruct_{d}"),
            vec!["reconstruct".into(), ds, "--seed".into(), "1".into()],
        ));
    }
    out
}

pub fn golden_path(stem: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{stem}.json"))
}
