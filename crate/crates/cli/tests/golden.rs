//! Byte-for-byte regression of the JSON reports. `UPDATE_GOLDEN=1` rewrites
//! the files.

mod common;

use common::{golden_cases, golden_path, quadsemi};
use quadsemi_cli::render::{from_text, to_text};

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (stem, args) in golden_cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let run = quadsemi(&args);
        assert_eq!(run.code, 0, "{stem}: {}", run.stderr);
        let path = golden_path(&stem);
        if update {
            std::fs::write(&path, &run.stdout).unwrap();
            continue;
        }
        let want =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(run.stdout, want, "{stem} drifted from its golden file");
    }
}

#[test]
fn reruns_are_byte_identical() {
    for (stem, args) in golden_cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(quadsemi(&args).stdout, quadsemi(&args).stdout, "{stem}");
    }
    let sweep = ["sweep", "--from", "2", "--to", "30", "--no-timings"];
    let one = quadsemi(&[&sweep[..], &["--jobs", "1"]].concat());
    let two = quadsemi(&[&sweep[..], &["--jobs", "2"]].concat());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn text_format_is_lossless() {
    for (stem, args) in golden_cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let json: serde_json::Value = serde_json::from_str(&quadsemi(&args).stdout).unwrap();
        let text = quadsemi(&[&args[..], &["--format", "text"]].concat()).stdout;
        assert_eq!(text, to_text(&json), "{stem}");
        assert_eq!(from_text(&text).unwrap(), json, "{stem}");
    }
}

#[test]
fn sweep_lines_all_parse() {
    let run = quadsemi(&["sweep", "--from", "40", "--to", "60"]);
    assert_eq!(run.code, 0);
    let lines: Vec<serde_json::Value> = run
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let (records, summary) = lines.split_at(lines.len() - 1);
    assert!(records.iter().all(|r| r["timings_ms"].is_object()));
    assert_eq!(summary[0]["summary"]["records"], records.len());
    for r in records {
        assert_eq!(from_text(&to_text(r)).unwrap(), *r);
    }
}
