//! Golden-file cases and oracles shared by the integration and acceptance
//! suites.
#![allow(dead_code)]

pub mod instances;
pub mod oracles;

use std::path::{Path, PathBuf};

use serde::Deserialize;
use stocon::cli;

#[derive(Deserialize)]
pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    pub code: i32,
    #[serde(default)]
    pub env: Option<String>,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.json")).expect("cases.json");
    serde_json::from_str(&text).expect("cases.json parses")
}

/// Runs a case with fixture names resolved to absolute paths; the fixture
/// directory is masked in the report so goldens are location independent.
pub fn run_case(case: &Case) -> (String, i32) {
    let fixtures = golden_dir().join("fixtures");
    let mut args = vec!["stocon".to_string()];
    for a in &case.args {
        let p = fixtures.join(a);
        args.push(if a.ends_with(".json") && p.exists() { p.display().to_string() } else { a.clone() });
    }
    let out = cli::run(args, case.env.as_deref());
    let masked = out.text.replace(&format!("{}/", fixtures.display()), "");
    (masked, out.code)
}

pub fn expected_path(case: &Case) -> PathBuf {
    golden_dir().join("expected").join(format!("{}.out", case.name))
}

/// `Err` describes the first mismatch.
pub fn check_case(case: &Case) -> Result<(), String> {
    let (text, code) = run_case(case);
    if code != case.code {
        return Err(format!("{}: exit code {code}, expected {}\n{text}", case.name, case.code));
    }
    let expected =
        std::fs::read_to_string(expected_path(case)).map_err(|e| format!("{}: no golden file ({e})", case.name))?;
    if text != expected {
        return Err(format!("{}: report differs from golden file\n--- got\n{text}--- expected\n{expected}", case.name));
    }
    Ok(())
}
