//! Runs one experiment document, written inline here, into a temporary
//! directory and prints the files it produced.

use heat_similarity::experiments::{run, ExperimentConfig};

const DOC: &str = "
# exact profile of the unit step
kind = exact-step
datum = step:0,1
t_ladder = 0.1, 1, 10, 1e6
n = 81
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let mut cfg = ExperimentConfig::parse(DOC)?;
    cfg.out_dir = dir.path().to_path_buf();
    let out = run(&cfg)?;
    for a in &out.manifest.assertions {
        println!(
            "{}: {} ({})",
            a.name,
            if a.passed { "pass" } else { "fail" },
            a.detail
        );
    }
    for p in &out.files {
        println!("{} ({} bytes)", p.display(), std::fs::metadata(p)?.len());
    }
    Ok(())
}
