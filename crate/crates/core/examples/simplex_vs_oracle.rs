//! Solves a textbook product-mix LP three ways: the two-phase simplex on
//! the slack-augmented form, the simplex on a slack-free homogenized form,
//! and brute-force vertex enumeration. All three must agree exactly.
//!
//! ```bash
//! cargo run -p lpmask --example simplex_vs_oracle
//! ```

use lpmask::model::{to_augmented, StandardMaxProblem};
use lpmask::numerics::{RatMatrix, RatVector};
use lpmask::simplex::{check_certificate, enumerate_optimum, pivot_bound, solve_nonneg};

fn main() {
    // max 3x1 + 5x2  s.t.  x1 <= 4, 2x2 <= 12, 3x1 + 2x2 <= 18, x >= 0
    let p = StandardMaxProblem::new(
        RatMatrix::from_int_rows(&[&[1, 0], &[0, 2], &[3, 2]]),
        RatVector::from_ints(&[4, 12, 18]),
        RatVector::from_ints(&[3, 5]),
    )
    .unwrap();

    let aug = to_augmented(&p);
    println!("augmented [A, I] = {}", aug.a_aug);
    let aug_lp = aug.as_general();
    let simplex = solve_nonneg(&aug_lp).unwrap();
    println!(
        "simplex (slack form):  {} in {} pivots (bound {})",
        lpmask::io::describe_outcome(&simplex),
        simplex.pivots_used,
        pivot_bound(&aug_lp)
    );
    println!(
        "certificate ok: {}",
        check_certificate(&aug_lp, &simplex).unwrap()
    );

    let homog = p.as_general();
    let via_homog = solve_nonneg(&homog).unwrap();
    println!(
        "simplex (homogenized): {}",
        lpmask::io::describe_outcome(&via_homog)
    );

    let oracle = enumerate_optimum(&aug_lp).unwrap();
    println!(
        "vertex enumeration:    {}",
        lpmask::io::describe_outcome(&oracle)
    );

    assert_eq!(simplex.value(), oracle.value());
    assert_eq!(simplex.value(), via_homog.value());
    println!("max value = {}", -simplex.value().unwrap().clone());
}
