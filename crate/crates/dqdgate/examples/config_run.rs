//! Drives the experiment harness from a JSON config, writing CSVs and a manifest to a temp dir.

use dqdgate::harness::{cmd_simulate, ExperimentConfig};

fn main() -> dqdgate::Result<()> {
    let out = std::env::temp_dir().join("dqdgate-config-run");
    let mut cfg = ExperimentConfig::from_json(
        r#"{ "scheme": "fsim_poly", "repetitions": [1, 2, 3], "rabi_deltas": [-0.05, 0.0, 0.05], "grid_n": 10 }"#,
    )?;
    cfg.set("output_dir", out.to_str().expect("utf-8 temp path"))?;
    let outcome = cmd_simulate(&cfg)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    for f in &outcome.manifest.files {
        println!("{}  {} bytes  sha256 {}", f.path, f.bytes, &f.sha256[..16]);
    }
    println!("checks passed: {}", outcome.passed());
    Ok(())
}
