//! Parse a TOML experiment, run it into a temporary directory and list the
//! checks and artifacts. Pass a config path to use your own.

use std::env;
use std::fs;

use tempered::experiment::{demo_config, parse_config, run_experiment, RunOptions};

fn main() -> tempered::Result<()> {
    let cfg = match env::args().nth(1) {
        Some(path) => parse_config(path.as_ref())?,
        None => demo_config("subsolution_1d").expect("packaged")?,
    };
    let out = env::temp_dir().join(format!("tempered-example-{}", cfg.name));
    let summary = run_experiment(&cfg, &RunOptions { out_dir: Some(out.clone()), threads: 1 })?;
    for c in &summary.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let mut files: Vec<_> = fs::read_dir(&out)?.filter_map(|e| e.ok()).map(|e| e.file_name().to_string_lossy().into_owned()).collect();
    files.sort();
    println!("{}: {}", out.display(), files.join(" "));
    Ok(())
}
