//! Where the masking does and does not preserve signs.
//!
//! `y = M⁻¹(x + r)` maps nonnegative `x` to vectors with negative entries as
//! soon as `r` has a negative entry. The one case where `B'y ≥ 0` already
//! means `y ≥ 0` is a positive diagonal `B'`.
//!
//! ```bash
//! cargo run -p lpmask --example positive_diagonal
//! ```

use lpmask::audit::{
    builtin_key, builtin_problem, check_nonneg_preservation, positive_diagonal_probe,
};
use lpmask::masking::MaskingKey;
use lpmask::model::PeculiarProblem;
use lpmask::numerics::{int, RatMatrix, RatVector};

fn main() {
    match check_nonneg_preservation(&builtin_key(), 100, 1) {
        Some(cx) => println!(
            "builtin key: x = {} >= 0 maps to y = {} (entry {} negative)",
            cx.x, cx.y, cx.bad_index
        ),
        None => println!("builtin key: no sign violation found"),
    }
    println!(
        "trivial key: {:?}",
        check_nonneg_preservation(&MaskingKey::trivial(1, 2), 100, 1)
    );

    let p = PeculiarProblem::new(
        RatMatrix::from_int_rows(&[&[1, 1]]),
        RatVector::from_ints(&[2]),
        RatMatrix::diagonal(&[int(1), int(2)]),
        RatVector::from_ints(&[1, 0]),
    )
    .unwrap();
    println!(
        "B = diag(1, 2), trivial key -> positive diagonal B', equivalence holds: {}",
        positive_diagonal_probe(&p, &MaskingKey::trivial(1, 2), 100, 7)
    );
    println!(
        "builtin key -> B' = [[2, 1], [0, 1]], probe applies: {}",
        positive_diagonal_probe(&builtin_problem(), &builtin_key(), 100, 7)
    );
}
