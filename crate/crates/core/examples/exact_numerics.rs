//! Exact rational linear algebra: products, determinants, inverses, solves.
//!
//! ```bash
//! cargo run -p lpmask --example exact_numerics
//! ```

use lpmask::numerics::{determinant, inverse, mat_mul, rat, solve_linear, RatMatrix, RatVector};

fn main() {
    let m = RatMatrix::from_int_rows(&[&[2, 1], &[0, 1]]);
    let inv = inverse(&m).expect("nonsingular");
    println!("M        = {m}");
    println!("det M    = {}", determinant(&m).unwrap());
    println!("M^-1     = {inv}");
    println!("M M^-1   = {}", mat_mul(&m, &inv).unwrap());

    let x = solve_linear(&m, &RatVector::from_ints(&[1, 1])).unwrap();
    println!("M x = (1, 1)  =>  x = {x}");

    let singular = RatMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
    println!(
        "inverse of {singular}: {:?}",
        inverse(&singular).unwrap_err()
    );

    // No rounding: (1/3) * 3 is exactly 1.
    let third = RatMatrix::diagonal(&[rat(1, 3), rat(1, 7)]);
    let back = RatMatrix::diagonal(&[rat(3, 1), rat(7, 1)]);
    println!("{third} * {back} = {}", mat_mul(&third, &back).unwrap());
}
