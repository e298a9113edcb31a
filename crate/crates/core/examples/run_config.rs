//! Runs an experiment config through the library driver and prints the
//! manifest. Usage: `cargo run --example run_config -- configs/scaling.toml`.

use std::path::PathBuf;

use strip_cgm::experiments::{run, ExperimentConfig, Overrides};

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/mixing-exact.toml")
    });
    let over = Overrides { out: Some(std::env::temp_dir().join("strip-cgm-run")), ..Default::default() };
    let cfg = ExperimentConfig::from_file(&path, &over).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    });
    let manifest = run(&cfg).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    });
    println!("{}", serde_json::to_string_pretty(&manifest).expect("json"));
}
