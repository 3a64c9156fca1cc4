//! Client-side masking: key generation, problem encryption and solution
//! decryption.
//!
//! With key `(Q, M, P, r, γ)` the client sends
//!
//! ```text
//! A' = Q A M
//! B' = (B − P Q A) M
//! b' = Q (b + A r)
//! c' = γ Mᵀ c
//! ```
//!
//! and maps a server answer back with `x = M y − r`. The key must satisfy
//! `det Q ≠ 0`, `det M ≠ 0`, `γ > 0`, `b + A r ≠ 0`, `P b' = B r` and
//! `det B' ≠ 0`.

use num::{Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::model::{MaskedProblem, ModelError, PeculiarProblem};
use crate::numerics::{rat, NumericsError, RatMatrix, RatVector, Rational};
use crate::random::{int_matrix, int_vector, rng_from_seed};

/// Total key draws before [`keygen`] gives up.
pub const KEYGEN_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyViolation {
    #[error("key shape does not fit the problem: {0}")]
    Dimensions(String),
    #[error("row mixing matrix Q is singular")]
    SingularRowMix,
    #[error("column mixing matrix M is singular")]
    SingularColMix,
    #[error("scale gamma must be positive, got {0}")]
    NonPositiveScale(Rational),
    #[error("shifted right-hand side b + A r is zero")]
    ZeroShiftedRhs,
    #[error("correction does not satisfy P b' = B r")]
    CorrectionMismatch,
    #[error("masked inequality matrix B' is singular")]
    SingularMaskedInequality,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaskingError {
    #[error("no valid key found after {attempts} attempts")]
    ResamplingExhausted { attempts: usize },
    #[error("invalid key: {0}")]
    InvalidKey(#[from] KeyViolation),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("masked problem is malformed: {0}")]
    Model(#[from] ModelError),
}

/// Secret key `(Q, M, P, r, γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaskingKey {
    row_mix: RatMatrix,
    col_mix: RatMatrix,
    correction: RatMatrix,
    shift: RatVector,
    scale: Rational,
}

impl MaskingKey {
    /// Checks the problem-independent invariants: `Q` and `M` square and
    /// nonsingular, `P` is n×m, `r` has length n, `γ > 0`.
    pub fn new(
        row_mix: RatMatrix,
        col_mix: RatMatrix,
        correction: RatMatrix,
        shift: RatVector,
        scale: Rational,
    ) -> Result<Self, KeyViolation> {
        let m = row_mix.rows();
        let n = col_mix.rows();
        if !row_mix.is_square() || !col_mix.is_square() {
            return Err(KeyViolation::Dimensions("Q and M must be square".into()));
        }
        if correction.shape() != (n, m) || shift.len() != n {
            return Err(KeyViolation::Dimensions(format!(
                "P is {}x{} and r has {}, expected {n}x{m} and {n}",
                correction.rows(),
                correction.cols(),
                shift.len()
            )));
        }
        if row_mix.determinant().map_or(true, |d| d.is_zero()) {
            return Err(KeyViolation::SingularRowMix);
        }
        if col_mix.determinant().map_or(true, |d| d.is_zero()) {
            return Err(KeyViolation::SingularColMix);
        }
        if !scale.is_positive() {
            return Err(KeyViolation::NonPositiveScale(scale));
        }
        Ok(MaskingKey {
            row_mix,
            col_mix,
            correction,
            shift,
            scale,
        })
    }

    /// `Q = I`, `M = I`, `P = 0`, `r = 0`, `γ = 1`. Valid whenever `b ≠ 0`.
    pub fn trivial(m: usize, n: usize) -> Self {
        MaskingKey {
            row_mix: RatMatrix::identity(m),
            col_mix: RatMatrix::identity(n),
            correction: RatMatrix::zeros(n, m),
            shift: RatVector::zeros(n),
            scale: rat(1, 1),
        }
    }

    /// Row mixing matrix `Q` (m×m).
    pub fn row_mix(&self) -> &RatMatrix {
        &self.row_mix
    }

    /// Column mixing matrix `M` (n×n).
    pub fn col_mix(&self) -> &RatMatrix {
        &self.col_mix
    }

    /// Correction matrix `P` (n×m).
    pub fn correction(&self) -> &RatMatrix {
        &self.correction
    }

    /// Shift vector `r`.
    pub fn shift(&self) -> &RatVector {
        &self.shift
    }

    /// Objective scale `γ`.
    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn m(&self) -> usize {
        self.row_mix.rows()
    }

    pub fn n(&self) -> usize {
        self.col_mix.rows()
    }

    /// Checks the invariants that tie the key to a particular problem.
    pub fn validate_for(&self, p: &PeculiarProblem) -> Result<(), KeyViolation> {
        if self.m() != p.m() || self.n() != p.n() {
            return Err(KeyViolation::Dimensions(format!(
                "key is for m={}, n={}, problem has m={}, n={}",
                self.m(),
                self.n(),
                p.m(),
                p.n()
            )));
        }
        let shifted = shifted_rhs(p, &self.shift);
        if shifted.is_zero() {
            return Err(KeyViolation::ZeroShiftedRhs);
        }
        let masked_rhs = self.row_mix.mul_vec(&shifted).expect("m x m times m");
        let lhs = self.correction.mul_vec(&masked_rhs).expect("n x m times m");
        let rhs = p.ineq().mul_vec(&self.shift).expect("n x n times n");
        if lhs != rhs {
            return Err(KeyViolation::CorrectionMismatch);
        }
        if masked_inequality(p, self)
            .determinant()
            .expect("square")
            .is_zero()
        {
            return Err(KeyViolation::SingularMaskedInequality);
        }
        Ok(())
    }

    /// `y = M⁻¹ (x + r)`.
    pub fn mask_point(&self, x: &RatVector) -> Result<RatVector, NumericsError> {
        self.col_mix.solve(&x.add(&self.shift)?)
    }

    /// `x = M y − r`.
    pub fn unmask_point(&self, y: &RatVector) -> Result<RatVector, NumericsError> {
        self.col_mix.mul_vec(y)?.sub(&self.shift)
    }
}

/// `b + A r`.
fn shifted_rhs(p: &PeculiarProblem, r: &RatVector) -> RatVector {
    p.a()
        .mul_vec(r)
        .and_then(|ar| p.b().add(&ar))
        .expect("shapes checked by caller")
}

/// `B' = (B − P Q A) M`.
pub fn masked_inequality(p: &PeculiarProblem, k: &MaskingKey) -> RatMatrix {
    let pqa = k
        .correction
        .mul(&k.row_mix)
        .and_then(|pq| pq.mul(p.a()))
        .expect("shapes checked by caller");
    p.ineq()
        .sub(&pqa)
        .and_then(|d| d.mul(&k.col_mix))
        .expect("shapes checked by caller")
}

/// `u vᵀ`.
fn outer(u: &RatVector, v: &RatVector) -> RatMatrix {
    let mut out = RatMatrix::zeros(u.len(), v.len());
    for i in 0..u.len() {
        for j in 0..v.len() {
            out[(i, j)] = &u[i] * &v[j];
        }
    }
    out
}

fn nonsingular_draw(rng: &mut crate::random::DetRng, n: usize) -> Option<RatMatrix> {
    let m = int_matrix(rng, n, n, -10, 10);
    (!m.determinant().expect("square").is_zero()).then_some(m)
}

/// Draws a key valid for `p`, deterministically from `seed`.
///
/// `Q`, `M` and `r` have integer entries in `[-10, 10]`; `γ = a/b` with
/// `a, b` in `[1, 8]`. `P` is the rank-one solution `(B r) b'ᵀ / (b'ᵀ b')`
/// plus `Σ u_j w_jᵀ`, where the `w_j` span the orthogonal complement of `b'`
/// and the `u_j` have integer entries in `[-3, 3]`. Any draw that breaks an
/// invariant is discarded; after [`KEYGEN_ATTEMPTS`] draws the call fails.
pub fn keygen(p: &PeculiarProblem, seed: u64) -> Result<MaskingKey, MaskingError> {
    let (m, n) = (p.m(), p.n());
    let mut rng = rng_from_seed(seed);
    for _ in 0..KEYGEN_ATTEMPTS {
        let Some(row_mix) = nonsingular_draw(&mut rng, m) else {
            continue;
        };
        let Some(col_mix) = nonsingular_draw(&mut rng, n) else {
            continue;
        };
        let shift = int_vector(&mut rng, n, -10, 10);
        let shifted = shifted_rhs(p, &shift);
        if shifted.is_zero() {
            continue;
        }
        let scale = rat(rng.gen_range(1..=8), rng.gen_range(1..=8));

        let masked_rhs = row_mix.mul_vec(&shifted)?;
        let norm = masked_rhs.dot(&masked_rhs)?;
        let target = p.ineq().mul_vec(&shift)?;
        let mut correction = outer(&target, &masked_rhs).scale(&norm.recip());
        let complement = RatMatrix::new(1, m, masked_rhs.as_slice().to_vec())?.null_space();
        for w in &complement {
            let u = int_vector(&mut rng, n, -3, 3);
            correction = correction.add(&outer(&u, w))?;
        }

        let key = MaskingKey {
            row_mix,
            col_mix,
            correction,
            shift,
            scale,
        };
        if masked_inequality(p, &key).determinant()?.is_zero() {
            continue;
        }
        debug_assert_eq!(key.validate_for(p), Ok(()));
        return Ok(key);
    }
    Err(MaskingError::ResamplingExhausted {
        attempts: KEYGEN_ATTEMPTS,
    })
}

/// Applies the key to the problem. Fails if the shapes disagree or the
/// result is not a well-formed masked problem.
pub fn encrypt(p: &PeculiarProblem, k: &MaskingKey) -> Result<MaskedProblem, MaskingError> {
    if k.m() != p.m() || k.n() != p.n() {
        return Err(KeyViolation::Dimensions(format!(
            "key is for m={}, n={}, problem has m={}, n={}",
            k.m(),
            k.n(),
            p.m(),
            p.n()
        ))
        .into());
    }
    let a = k.row_mix.mul(p.a())?.mul(&k.col_mix)?;
    let ineq = masked_inequality(p, k);
    let b = k.row_mix.mul_vec(&shifted_rhs(p, &k.shift))?;
    let c = k.col_mix.transpose().mul_vec(p.c())?.scale(&k.scale);
    Ok(MaskedProblem::new(a, b, ineq, c)?)
}

/// Maps a server answer `y` back: `x = M y − r`, valued with the client's
/// own objective `c`.
pub fn decrypt_solution(
    y: &RatVector,
    p: &PeculiarProblem,
    k: &MaskingKey,
) -> Result<(RatVector, Rational), MaskingError> {
    let x = k.unmask_point(y)?;
    let value = p.c().dot(&x)?;
    Ok((x, value))
}

/// Feasibility of `x` for the client problem and of `y = M⁻¹(x + r)` for the
/// masked problem, both without sign restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityPair {
    pub original: bool,
    pub masked: bool,
    pub y: RatVector,
}

pub fn verify_feasibility_map(
    p: &PeculiarProblem,
    k: &MaskingKey,
    x: &RatVector,
) -> Result<FeasibilityPair, MaskingError> {
    let masked = encrypt(p, k)?;
    let y = k.mask_point(x)?;
    Ok(FeasibilityPair {
        original: p.is_feasible(x)?,
        masked: masked.is_feasible(&y)?,
        y,
    })
}
