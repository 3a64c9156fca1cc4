//! Problem forms and the exact conversions between them.
//!
//! The masked-outsourcing setting works with two forms that have no sign
//! restriction on the variables:
//!
//! * [`PeculiarProblem`]: `min cᵀx  s.t.  A x = b,  B x ≥ 0` with `B` nonsingular.
//! * [`MaskedProblem`]: the same shape after the client's transformation.
//!
//! Everything is funnelled into [`GeneralLP`] for solving. Textbook
//! standard form (`max cᵀx  s.t.  A x ≤ b, x ≥ 0`) and its slack-augmented
//! equality form are here as well.

use num::{Signed, Zero};
use thiserror::Error;

use crate::numerics::{NumericsError, RatMatrix, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("inconsistent dimensions: {0}")]
    Dimensions(String),
    #[error("inequality matrix is singular")]
    SingularInequality,
    #[error("masked right-hand side is the zero vector")]
    ZeroRhs,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn dims(msg: impl Into<String>) -> ModelError {
    ModelError::Dimensions(msg.into())
}

/// Checks the shared `(A, b, B, c)` shape: `A` is m×n, `B` is n×n.
fn check_shape(
    a: &RatMatrix,
    b: &RatVector,
    ineq: &RatMatrix,
    c: &RatVector,
) -> Result<(), ModelError> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(dims(format!(
            "constraint matrix must be nonempty, got {m}x{n}"
        )));
    }
    if b.len() != m {
        return Err(dims(format!("b has length {}, expected {m}", b.len())));
    }
    if ineq.shape() != (n, n) {
        let (r, k) = ineq.shape();
        return Err(dims(format!("B is {r}x{k}, expected {n}x{n}")));
    }
    if c.len() != n {
        return Err(dims(format!("c has length {}, expected {n}", c.len())));
    }
    Ok(())
}

/// The client's problem: `min cᵀx  s.t.  A x = b,  B x ≥ 0`, `x` free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeculiarProblem {
    a: RatMatrix,
    b: RatVector,
    ineq: RatMatrix,
    c: RatVector,
}

impl PeculiarProblem {
    pub fn new(
        a: RatMatrix,
        b: RatVector,
        ineq: RatMatrix,
        c: RatVector,
    ) -> Result<Self, ModelError> {
        check_shape(&a, &b, &ineq, &c)?;
        if ineq.determinant()?.is_zero() {
            return Err(ModelError::SingularInequality);
        }
        Ok(PeculiarProblem { a, b, ineq, c })
    }

    /// Equality matrix `A` (m×n).
    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatVector {
        &self.b
    }

    /// The nonsingular inequality matrix `B` (n×n).
    pub fn ineq(&self) -> &RatMatrix {
        &self.ineq
    }

    pub fn c(&self) -> &RatVector {
        &self.c
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `A x = b` and `B x ≥ 0`, sign of `x` not considered.
    pub fn is_feasible(&self, x: &RatVector) -> Result<bool, NumericsError> {
        Ok(self.a.mul_vec(x)? == self.b && self.ineq.mul_vec(x)?.is_nonneg())
    }

    pub fn objective(&self, x: &RatVector) -> Result<Rational, NumericsError> {
        self.c.dot(x)
    }

    /// Recovers the problem from a [`GeneralLP`] produced by
    /// [`peculiar_as_general`]. Sign flags are ignored.
    pub fn from_general(lp: &GeneralLP) -> Result<Self, ModelError> {
        Self::new(
            lp.a_eq.clone(),
            lp.b_eq.clone(),
            lp.g_ineq.clone(),
            lp.c.clone(),
        )
    }
}

/// The problem the server receives: `min c'ᵀy  s.t.  A' y = b',  B' y ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaskedProblem {
    a: RatMatrix,
    b: RatVector,
    ineq: RatMatrix,
    c: RatVector,
}

impl MaskedProblem {
    pub fn new(
        a: RatMatrix,
        b: RatVector,
        ineq: RatMatrix,
        c: RatVector,
    ) -> Result<Self, ModelError> {
        check_shape(&a, &b, &ineq, &c)?;
        if ineq.determinant()?.is_zero() {
            return Err(ModelError::SingularInequality);
        }
        if b.is_zero() {
            return Err(ModelError::ZeroRhs);
        }
        Ok(MaskedProblem { a, b, ineq, c })
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatVector {
        &self.b
    }

    pub fn ineq(&self) -> &RatMatrix {
        &self.ineq
    }

    pub fn c(&self) -> &RatVector {
        &self.c
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn is_feasible(&self, y: &RatVector) -> Result<bool, NumericsError> {
        Ok(self.a.mul_vec(y)? == self.b && self.ineq.mul_vec(y)?.is_nonneg())
    }

    pub fn from_general(lp: &GeneralLP) -> Result<Self, ModelError> {
        Self::new(
            lp.a_eq.clone(),
            lp.b_eq.clone(),
            lp.g_ineq.clone(),
            lp.c.clone(),
        )
    }
}

/// `max cᵀx  s.t.  A x ≤ b,  x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardMaxProblem {
    a: RatMatrix,
    b: RatVector,
    c: RatVector,
}

impl StandardMaxProblem {
    pub fn new(a: RatMatrix, b: RatVector, c: RatVector) -> Result<Self, ModelError> {
        let (m, n) = a.shape();
        if m == 0 || n == 0 || b.len() != m || c.len() != n {
            return Err(dims(format!(
                "A is {m}x{n}, b has {}, c has {}",
                b.len(),
                c.len()
            )));
        }
        Ok(StandardMaxProblem { a, b, c })
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatVector {
        &self.b
    }

    pub fn c(&self) -> &RatVector {
        &self.c
    }

    /// Homogenized minimization form that does not use slack columns.
    ///
    /// Adds a variable `t` pinned to 1 and writes each row as
    /// `b_i t − a_iᵀx ≥ 0`. The objective is `−cᵀx`, so the optimal value
    /// is the negated maximum.
    pub fn as_general(&self) -> GeneralLP {
        let (m, n) = self.a.shape();
        let mut g = RatMatrix::zeros(m, n + 1);
        for i in 0..m {
            for j in 0..n {
                g[(i, j)] = -self.a[(i, j)].clone();
            }
            g[(i, n)] = self.b[i].clone();
        }
        let mut pin = RatMatrix::zeros(1, n + 1);
        pin[(0, n)] = Rational::from_integer(1.into());
        let mut c: Vec<Rational> = self.c.iter().map(|v| -v).collect();
        c.push(Rational::zero());
        GeneralLP::new(
            RatVector::new(c),
            pin,
            RatVector::from_ints(&[1]),
            g,
            vec![Sign::Nonnegative; n + 1],
        )
        .expect("homogenized shape is consistent")
    }
}

/// `[A, I] (x; x_s) = b` with zero-cost slacks, maximize `c_extᵀ (x; x_s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedProblem {
    pub a_aug: RatMatrix,
    pub b: RatVector,
    pub c_ext: RatVector,
    /// Index of the first slack column (the original variable count).
    pub slack_offset: usize,
}

impl AugmentedProblem {
    /// Equality form as a minimization over nonnegative variables.
    pub fn as_general(&self) -> GeneralLP {
        GeneralLP::new(
            self.c_ext.neg(),
            self.a_aug.clone(),
            self.b.clone(),
            RatMatrix::zeros(0, self.a_aug.cols()),
            vec![Sign::Nonnegative; self.a_aug.cols()],
        )
        .expect("augmented shape is consistent")
    }
}

/// Adds one slack per row: `A x ≤ b` becomes `[A, I] (x; x_s) = b`.
pub fn to_augmented(p: &StandardMaxProblem) -> AugmentedProblem {
    let (m, n) = p.a.shape();
    let a_aug =
        p.a.hstack(&RatMatrix::identity(m))
            .expect("identity has m rows");
    let mut c_ext = p.c.clone().into_inner();
    c_ext.extend(std::iter::repeat_n(Rational::zero(), m));
    AugmentedProblem {
        a_aug,
        b: p.b.clone(),
        c_ext: RatVector::new(c_ext),
        slack_offset: n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Nonnegative,
    Free,
}

/// `min cᵀx  s.t.  A_eq x = b_eq,  G x ≥ 0`, with a sign flag per variable.
///
/// Either constraint block may have zero rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralLP {
    pub c: RatVector,
    pub a_eq: RatMatrix,
    pub b_eq: RatVector,
    pub g_ineq: RatMatrix,
    pub sign: Vec<Sign>,
}

impl GeneralLP {
    pub fn new(
        c: RatVector,
        a_eq: RatMatrix,
        b_eq: RatVector,
        g_ineq: RatMatrix,
        sign: Vec<Sign>,
    ) -> Result<Self, ModelError> {
        let n = c.len();
        if n == 0 {
            return Err(dims("at least one variable is required"));
        }
        if a_eq.cols() != n || g_ineq.cols() != n || sign.len() != n {
            return Err(dims(format!(
                "n={n} but A_eq has {} columns, G has {}, sign has {}",
                a_eq.cols(),
                g_ineq.cols(),
                sign.len()
            )));
        }
        if b_eq.len() != a_eq.rows() {
            return Err(dims(format!(
                "A_eq has {} rows but b_eq has {}",
                a_eq.rows(),
                b_eq.len()
            )));
        }
        Ok(GeneralLP {
            c,
            a_eq,
            b_eq,
            g_ineq,
            sign,
        })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn all_nonneg(&self) -> bool {
        self.sign.iter().all(|s| *s == Sign::Nonnegative)
    }

    /// Exact feasibility of `x` against every constraint including signs.
    pub fn is_feasible(&self, x: &RatVector) -> bool {
        if x.len() != self.n() {
            return false;
        }
        let eq_ok = self
            .a_eq
            .mul_vec(x)
            .map(|v| v == self.b_eq)
            .unwrap_or(false);
        let ineq_ok = self
            .g_ineq
            .mul_vec(x)
            .map(|v| v.is_nonneg())
            .unwrap_or(false);
        let sign_ok = self
            .sign
            .iter()
            .zip(x.iter())
            .all(|(s, v)| *s == Sign::Free || !v.is_negative());
        eq_ok && ineq_ok && sign_ok
    }

    pub fn objective(&self, x: &RatVector) -> Rational {
        self.c.dot(x).expect("length checked by caller")
    }
}

fn as_general(
    a: &RatMatrix,
    b: &RatVector,
    ineq: &RatMatrix,
    c: &RatVector,
    add_nonneg: bool,
) -> GeneralLP {
    let sign = if add_nonneg {
        Sign::Nonnegative
    } else {
        Sign::Free
    };
    GeneralLP {
        c: c.clone(),
        a_eq: a.clone(),
        b_eq: b.clone(),
        g_ineq: ineq.clone(),
        sign: vec![sign; c.len()],
    }
}

/// `add_nonneg = false` gives the free-variable problem; `true` appends
/// `x ≥ 0` (the problem the client actually wants solved).
pub fn peculiar_as_general(p: &PeculiarProblem, add_nonneg: bool) -> GeneralLP {
    as_general(&p.a, &p.b, &p.ineq, &p.c, add_nonneg)
}

/// `add_nonneg = true` is what a simplex server has to solve.
pub fn masked_as_general(p: &MaskedProblem, add_nonneg: bool) -> GeneralLP {
    as_general(&p.a, &p.b, &p.ineq, &p.c, add_nonneg)
}

/// True iff `m` is diagonal with every diagonal entry strictly positive.
pub fn is_positive_diagonal(m: &RatMatrix) -> Result<bool, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            op: "is_positive_diagonal",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            let v = &m[(i, j)];
            let ok = if i == j { v.is_positive() } else { v.is_zero() };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::int;

    fn sample() -> PeculiarProblem {
        PeculiarProblem::new(
            RatMatrix::from_int_rows(&[&[1, 1]]),
            RatVector::from_ints(&[2]),
            RatMatrix::identity(2),
            RatVector::from_ints(&[1, 0]),
        )
        .unwrap()
    }

    #[test]
    fn augmented_single_slack() {
        let p = StandardMaxProblem::new(
            RatMatrix::from_int_rows(&[&[1]]),
            RatVector::from_ints(&[5]),
            RatVector::from_ints(&[1]),
        )
        .unwrap();
        let aug = to_augmented(&p);
        assert_eq!(aug.a_aug, RatMatrix::from_int_rows(&[&[1, 1]]));
        assert_eq!(aug.b, RatVector::from_ints(&[5]));
        assert_eq!(aug.c_ext, RatVector::from_ints(&[1, 0]));
        assert_eq!(aug.slack_offset, 1);
    }

    #[test]
    fn augmented_block_structure() {
        let p = StandardMaxProblem::new(
            RatMatrix::from_int_rows(&[&[1, 0], &[0, 2], &[3, 2]]),
            RatVector::from_ints(&[4, 12, 18]),
            RatVector::from_ints(&[3, 5]),
        )
        .unwrap();
        let aug = to_augmented(&p);
        assert_eq!(aug.a_aug.shape(), (3, 5));
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { int(1) } else { int(0) };
                assert_eq!(aug.a_aug[(i, 2 + j)], expected);
            }
        }
        assert!(aug.c_ext.iter().skip(2).all(Zero::is_zero));
    }

    #[test]
    fn augmented_zero_row() {
        let p = StandardMaxProblem::new(
            RatMatrix::from_int_rows(&[&[0, 0, 0]]),
            RatVector::from_ints(&[0]),
            RatVector::from_ints(&[1, 2, 3]),
        )
        .unwrap();
        assert_eq!(
            to_augmented(&p).a_aug,
            RatMatrix::from_int_rows(&[&[0, 0, 0, 1]])
        );
    }

    #[test]
    fn peculiar_mapping() {
        let p = sample();
        let free = peculiar_as_general(&p, false);
        assert_eq!(free.sign, vec![Sign::Free; 2]);
        assert_eq!(free.g_ineq, RatMatrix::identity(2));
        assert_eq!(free.a_eq, *p.a());
        let nonneg = peculiar_as_general(&p, true);
        assert_eq!(nonneg.sign, vec![Sign::Nonnegative; 2]);

        let q = PeculiarProblem::new(
            p.a().clone(),
            p.b().clone(),
            RatMatrix::from_int_rows(&[&[2, 1], &[0, 1]]),
            p.c().clone(),
        )
        .unwrap();
        assert_eq!(peculiar_as_general(&q, true).g_ineq, *q.ineq());
        assert_eq!(PeculiarProblem::from_general(&free).unwrap(), p);
    }

    #[test]
    fn masked_mapping_matches_peculiar_for_identity() {
        let p = sample();
        let masked = MaskedProblem::new(
            p.a().clone(),
            p.b().clone(),
            p.ineq().clone(),
            p.c().clone(),
        )
        .unwrap();
        assert_eq!(
            masked_as_general(&masked, true),
            peculiar_as_general(&p, true)
        );
        assert!(masked_as_general(&masked, false)
            .sign
            .iter()
            .all(|s| *s == Sign::Free));
    }

    #[test]
    fn rejects_bad_problems() {
        let singular = PeculiarProblem::new(
            RatMatrix::from_int_rows(&[&[1, 1]]),
            RatVector::from_ints(&[2]),
            RatMatrix::from_int_rows(&[&[1, 2], &[2, 4]]),
            RatVector::from_ints(&[1, 0]),
        );
        assert_eq!(singular, Err(ModelError::SingularInequality));
        let short_c = PeculiarProblem::new(
            RatMatrix::from_int_rows(&[&[1, 1]]),
            RatVector::from_ints(&[2]),
            RatMatrix::identity(2),
            RatVector::from_ints(&[1]),
        );
        assert!(matches!(short_c, Err(ModelError::Dimensions(_))));
        let zero_rhs = MaskedProblem::new(
            RatMatrix::from_int_rows(&[&[1, 1]]),
            RatVector::from_ints(&[0]),
            RatMatrix::identity(2),
            RatVector::from_ints(&[1, 0]),
        );
        assert_eq!(zero_rhs, Err(ModelError::ZeroRhs));
    }

    #[test]
    fn positive_diagonal_examples() {
        let d = RatMatrix::diagonal(&[int(2), int(1)]);
        assert!(is_positive_diagonal(&d).unwrap());
        let upper = RatMatrix::from_int_rows(&[&[2, 1], &[0, 1]]);
        assert!(!is_positive_diagonal(&upper).unwrap());
        let neg = RatMatrix::diagonal(&[int(2), int(-1)]);
        assert!(!is_positive_diagonal(&neg).unwrap());
        let rect = RatMatrix::from_int_rows(&[&[1, 0, 0]]);
        assert!(is_positive_diagonal(&rect).is_err());
    }

    #[test]
    fn general_feasibility() {
        let lp = peculiar_as_general(&sample(), true);
        assert!(lp.is_feasible(&RatVector::from_ints(&[0, 2])));
        assert!(!lp.is_feasible(&RatVector::from_ints(&[-1, 3])));
        assert!(!lp.is_feasible(&RatVector::from_ints(&[1, 0])));
        let free = peculiar_as_general(&sample(), false);
        assert!(!free.is_feasible(&RatVector::from_ints(&[-1, 3])));
    }
}
