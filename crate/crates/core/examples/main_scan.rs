//! Runs the toy-scale main scan and a seeded experiment through the
//! library, then writes the JSON and CSV outputs to a temporary directory.
use halab::lab::{run_experiment, write_outputs, ExperimentConfig};
use serde_json::json;

fn main() -> halab::Result<()> {
    let cfg = ExperimentConfig::named("main-scan", 42)
        .with_param("N", json!(31))
        .with_param("phi", json!("tent"));
    let report = run_experiment(&cfg)?;
    for s in report.data["stages"].as_array().into_iter().flatten() {
        let text = s["result"].to_string();
        println!(
            "{:<14} {}",
            s["stage"].as_str().unwrap_or(""),
            &text[..text.len().min(110)]
        );
    }
    println!("passed {}, hash {}", report.passed(), report.hash());

    let cfg = ExperimentConfig::named("complement-identity", 7).with_param("trials", json!(10));
    let report = run_experiment(&cfg)?;
    let dir = std::env::temp_dir().join("halab-example");
    let (j, c) = write_outputs(&report, &dir)?;
    println!("wrote {} and {}", j.display(), c.display());
    Ok(())
}
