//! Seeded audit of the masking pipeline.
//!
//! ```bash
//! cargo run --release -p lpmask --example audit -- 2 4 200 1 identity
//! ```
//!
//! Arguments: `m n trials seed (identity|random)`.

use std::time::Instant;

use lpmask::audit::{run_audit, BMode, TrialTag};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let m: usize = arg(0, "2").parse().expect("m");
    let n: usize = arg(1, "4").parse().expect("n");
    let trials: u64 = arg(2, "200").parse().expect("trials");
    let seed: u64 = arg(3, "1").parse().expect("seed");
    let b_mode = match arg(4, "identity").as_str() {
        "random" => BMode::RandomB,
        _ => BMode::IdentityB,
    };

    let start = Instant::now();
    let report = run_audit(m, n, trials, seed, b_mode).expect("audit runs");
    print!("{}", report.summary());
    println!("elapsed {:?}", start.elapsed());

    for (tag, ex) in &report.first_counterexamples {
        let t = &ex.trial;
        println!("\nfirst {tag} at trial {}", ex.trial_index);
        if let (Some(x), Some(v)) = (&t.recovered_x, t.recovered_value()) {
            println!("  recovered x = {x}, value {v}");
        }
        if let Some(v) = t.true_outcome.value() {
            println!("  true optimum {v} at {}", t.true_outcome.x_opt().unwrap());
        }
        if *tag == TrialTag::InfeasibleRecovery {
            println!("  (A x = b and B x >= 0 hold, but x has a negative entry)");
        }
    }
}
