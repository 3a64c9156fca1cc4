#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use lpmask::model::{GeneralLP, Sign};
use lpmask::random::{int_matrix, int_vector, rng_from_seed};
use lpmask::simplex::binomial;
use rand::Rng;

/// Small random LP: `n ≤ 4`, at most 3 equality rows, at most 3 inequality
/// rows, entries in `[-3, 3]`, mixed sign restrictions.
pub fn random_general_lp(seed: u64) -> GeneralLP {
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(0..=3);
    let g = rng.gen_range(0..=3);
    let c = int_vector(&mut rng, n, -3, 3);
    let a_eq = int_matrix(&mut rng, k, n, -3, 3);
    let b_eq = int_vector(&mut rng, k, -3, 3);
    let g_ineq = int_matrix(&mut rng, g, n, -3, 3);
    let sign = (0..n)
        .map(|_| {
            if rng.gen_bool(0.7) {
                Sign::Nonnegative
            } else {
                Sign::Free
            }
        })
        .collect();
    GeneralLP::new(c, a_eq, b_eq, g_ineq, sign).expect("consistent shapes")
}

/// Candidate-basis bound for `solve_general`, which runs on the split problem.
pub fn split_pivot_bound(lp: &GeneralLP) -> u128 {
    let free = lp.sign.iter().filter(|s| **s == Sign::Free).count();
    let rows = lp.a_eq.rows() + lp.g_ineq.rows();
    binomial(lp.n() + free + rows, rows)
}

pub fn lpmask(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpmask"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}
