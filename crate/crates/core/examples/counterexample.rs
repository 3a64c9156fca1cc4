//! The built-in two-variable counterexample: the server's honest answer on
//! the masked problem decrypts to a suboptimal point.
//!
//! ```bash
//! cargo run -p lpmask --example counterexample
//! ```

use lpmask::audit::{builtin_counterexample, explain_trial};

fn main() {
    let trial = builtin_counterexample();
    for line in explain_trial(&trial) {
        println!("{line}");
    }
    trial.revalidate().expect("builtin trial replays");
}
