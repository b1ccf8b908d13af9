//! Running an experiment from a JSON config, as the CLI does.

use herglotz::harness::{run, ExperimentConfig};

fn main() -> herglotz::Result<()> {
    let out = std::env::temp_dir().join("herglotz_run_config");
    let json = serde_json::json!({
        "kind": "lambda",
        "seed": 1,
        "points": 65536,
        "source": {"dim": 2, "terms": [[[1, 0], 1.0], [[0, 2], -0.5]]},
        "out": out,
    });
    let cfg = ExperimentConfig::from_value(json, None)?;
    let manifest = run(&cfg)?;
    println!("config hash {}", manifest.config_hash);
    for a in &manifest.artifacts {
        println!("wrote {}", out.join(a).display());
    }
    print!("{}", std::fs::read_to_string(out.join("lambda.csv"))?);
    Ok(())
}
