//! Runs named invariant suites in parallel; `HIMCF_THREADS` caps the
//! thread count.
//!
//! ```text
//! cargo run --example verify_suites -- lemma4 ktt
//! ```

use himcf::scenario::{cmd_verify, SUITES};

fn main() -> himcf::Result<()> {
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names.push("all".into());
    }
    let report = cmd_verify(&names)?;
    for (suite, rep) in &report.suites {
        println!("{suite}");
        for r in &rep.records {
            println!("  {:<42} {:>11.3e}  tol {:>9.1e}  {:?}", r.name, r.value, r.tolerance, r.status);
        }
    }
    println!("available: {}", SUITES.join(", "));
    println!("all passed: {}", report.passed);
    Ok(())
}
