//! Audit harness for the masked-outsourcing pipeline.
//!
//! A simplex server that receives `min c'ᵀy s.t. A'y = b', B'y ≥ 0` has to
//! add `y ≥ 0` before it can pivot. The client, who needs `x ≥ 0`, then
//! decrypts with `x = M y − r`. Nothing in the key makes `y ≥ 0` line up with
//! `x ≥ 0`, so the recovered point can be suboptimal or even negative. This
//! module runs that pipeline on generated instances and classifies what the
//! client gets back.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::masking::{
    decrypt_solution, encrypt, keygen, masked_inequality, KeyViolation, MaskingError, MaskingKey,
};
use crate::model::{
    is_positive_diagonal, masked_as_general, peculiar_as_general, MaskedProblem, PeculiarProblem,
};
use crate::numerics::{int, RatMatrix, RatVector, Rational};
use crate::random::{int_matrix, int_vector, rng_from_seed, split_seed};
use crate::simplex::{solve_general, solve_nonneg, SolveOutcome, Verdict};

/// Largest variable count [`generate_instance`] accepts.
pub const MAX_GENERATED_VARS: usize = 12;
/// Draws of a random `B` before [`generate_instance`] gives up.
pub const INSTANCE_ATTEMPTS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error(
        "instance dimensions must satisfy 1 <= m < n <= {MAX_GENERATED_VARS}, got m={m}, n={n}"
    )]
    BadDimensions { m: usize, n: usize },
    #[error("no admissible inequality matrix after {attempts} attempts")]
    ResamplingExhausted { attempts: usize },
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Masking(#[from] MaskingError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn invariant(msg: impl Into<String>) -> AuditError {
    AuditError::Invariant(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BMode {
    /// `B = I`.
    #[serde(rename = "identity")]
    IdentityB,
    /// Random nonsingular integer `B` with `B x₀ ≥ 0`.
    #[serde(rename = "random")]
    RandomB,
}

/// What the client ends up with after one round trip through the server.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TrialTag {
    /// Recovered point is optimal for the client's nonnegative problem.
    Faithful,
    /// Recovered point is feasible but strictly worse than the true optimum.
    Suboptimal,
    /// Recovered point satisfies `A x = b`, `B x ≥ 0` but has a negative entry.
    InfeasibleRecovery,
    MaskedInfeasible,
    MaskedUnbounded,
    TrueInfeasible,
    TrueUnbounded,
}

impl TrialTag {
    pub const ALL: [TrialTag; 7] = [
        TrialTag::Faithful,
        TrialTag::Suboptimal,
        TrialTag::InfeasibleRecovery,
        TrialTag::MaskedInfeasible,
        TrialTag::MaskedUnbounded,
        TrialTag::TrueInfeasible,
        TrialTag::TrueUnbounded,
    ];

    /// Tags where the server's answer does not hand the client its true
    /// optimum even though one exists.
    pub fn is_failure(self) -> bool {
        matches!(
            self,
            TrialTag::Suboptimal
                | TrialTag::InfeasibleRecovery
                | TrialTag::MaskedInfeasible
                | TrialTag::MaskedUnbounded
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            TrialTag::Faithful => "FAITHFUL",
            TrialTag::Suboptimal => "SUBOPTIMAL",
            TrialTag::InfeasibleRecovery => "INFEASIBLE_RECOVERY",
            TrialTag::MaskedInfeasible => "MASKED_INFEASIBLE",
            TrialTag::MaskedUnbounded => "MASKED_UNBOUNDED",
            TrialTag::TrueInfeasible => "TRUE_INFEASIBLE",
            TrialTag::TrueUnbounded => "TRUE_UNBOUNDED",
        }
    }
}

impl fmt::Display for TrialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A generated problem together with the nonnegative point `b` was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub problem: PeculiarProblem,
    pub witness: RatVector,
}

/// Random instance whose nonnegative problem is feasible by construction.
///
/// Draw order from the seeded stream: `A` (entries in `[-5, 5]`), the
/// witness `x₀` (entries in `[0, 5]`), `c` (entries in `[-5, 5]`), then for
/// [`BMode::RandomB`] up to [`INSTANCE_ATTEMPTS`] candidate `B` matrices
/// (entries in `[-5, 5]`) until one is nonsingular with `B x₀ ≥ 0`.
/// Finally `b = A x₀`.
pub fn generate_instance_with_witness(
    m: usize,
    n: usize,
    seed: u64,
    b_mode: BMode,
) -> Result<GeneratedInstance, AuditError> {
    if m < 1 || m >= n || n > MAX_GENERATED_VARS {
        return Err(AuditError::BadDimensions { m, n });
    }
    let mut rng = rng_from_seed(seed);
    let a = int_matrix(&mut rng, m, n, -5, 5);
    let witness = int_vector(&mut rng, n, 0, 5);
    let c = int_vector(&mut rng, n, -5, 5);
    let ineq = match b_mode {
        BMode::IdentityB => RatMatrix::identity(n),
        BMode::RandomB => (0..INSTANCE_ATTEMPTS)
            .map(|_| int_matrix(&mut rng, n, n, -5, 5))
            .find(|cand| {
                !cand.determinant().expect("square").is_zero()
                    && cand.mul_vec(&witness).expect("n x n").is_nonneg()
            })
            .ok_or(AuditError::ResamplingExhausted {
                attempts: INSTANCE_ATTEMPTS,
            })?,
    };
    let b = a.mul_vec(&witness).expect("m x n times n");
    let problem = PeculiarProblem::new(a, b, ineq, c)
        .map_err(|e| invariant(format!("generated instance rejected: {e}")))?;
    Ok(GeneratedInstance { problem, witness })
}

pub fn generate_instance(
    m: usize,
    n: usize,
    seed: u64,
    b_mode: BMode,
) -> Result<PeculiarProblem, AuditError> {
    generate_instance_with_witness(m, n, seed, b_mode).map(|g| g.problem)
}

/// One pass of the pipeline: mask, let the server solve with `y ≥ 0`,
/// decrypt, and compare with the client's own nonnegative problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditTrial {
    /// Seed the instance was generated from, if any.
    pub seed: Option<u64>,
    /// Seed the key was generated from, if any.
    pub key_seed: Option<u64>,
    pub problem: PeculiarProblem,
    pub key: MaskingKey,
    pub masked: MaskedProblem,
    /// Server outcome on the masked problem with `y ≥ 0` appended.
    pub server_outcome: SolveOutcome,
    pub recovered_x: Option<RatVector>,
    /// Outcome on the client's problem with `x ≥ 0` appended.
    pub true_outcome: SolveOutcome,
    pub classification: TrialTag,
}

impl AuditTrial {
    pub fn recovered_value(&self) -> Option<Rational> {
        self.recovered_x
            .as_ref()
            .map(|x| self.problem.c().dot(x).expect("length n"))
    }

    /// Re-derives every stored field from `problem` and `key` and checks it
    /// matches.
    pub fn revalidate(&self) -> Result<(), AuditError> {
        self.key
            .validate_for(&self.problem)
            .map_err(|e| invariant(format!("embedded key: {e}")))?;
        let fresh = run_trial_with_key(&self.problem, self.key.clone(), self.seed, self.key_seed)?;
        if fresh != *self {
            return Err(invariant("embedded trial does not match a fresh replay"));
        }
        Ok(())
    }

    /// Classification recomputed from the stored data alone.
    pub fn recompute_classification(&self) -> Result<TrialTag, AuditError> {
        classify(
            &self.problem,
            &self.server_outcome,
            self.recovered_x.as_ref(),
            &self.true_outcome,
        )
    }
}

/// Classification order: the client's own problem first, then the server's
/// problem, then the recovered point.
pub fn classify(
    problem: &PeculiarProblem,
    server: &SolveOutcome,
    recovered: Option<&RatVector>,
    truth: &SolveOutcome,
) -> Result<TrialTag, AuditError> {
    let true_value = match &truth.verdict {
        Verdict::Infeasible => return Ok(TrialTag::TrueInfeasible),
        Verdict::Unbounded { .. } => return Ok(TrialTag::TrueUnbounded),
        Verdict::Optimal { value, .. } => value,
    };
    match server.verdict {
        Verdict::Infeasible => return Ok(TrialTag::MaskedInfeasible),
        Verdict::Unbounded { .. } => return Ok(TrialTag::MaskedUnbounded),
        Verdict::Optimal { .. } => {}
    }
    let x = recovered.ok_or_else(|| invariant("optimal server answer without recovered point"))?;
    // A x̂ = b and B x̂ ≥ 0 always survive the round trip; only the sign can break.
    if !problem.is_feasible(x).expect("length n") {
        return Err(invariant(format!(
            "recovered point {x} violates A x = b or B x >= 0"
        )));
    }
    if !x.is_nonneg() {
        return Ok(TrialTag::InfeasibleRecovery);
    }
    let value = problem.c().dot(x).expect("length n");
    if value > *true_value {
        Ok(TrialTag::Suboptimal)
    } else if value == *true_value {
        Ok(TrialTag::Faithful)
    } else {
        Err(invariant(format!(
            "recovered value {value} beats the true optimum {true_value}"
        )))
    }
}

pub fn run_trial_with_key(
    p: &PeculiarProblem,
    key: MaskingKey,
    seed: Option<u64>,
    key_seed: Option<u64>,
) -> Result<AuditTrial, AuditError> {
    let masked = encrypt(p, &key)?;
    let server_outcome =
        solve_nonneg(&masked_as_general(&masked, true)).expect("all variables nonnegative");
    let recovered_x = match server_outcome.x_opt() {
        Some(y) => Some(decrypt_solution(y, p, &key)?.0),
        None => None,
    };
    let true_outcome =
        solve_nonneg(&peculiar_as_general(p, true)).expect("all variables nonnegative");
    let classification = classify(p, &server_outcome, recovered_x.as_ref(), &true_outcome)?;
    Ok(AuditTrial {
        seed,
        key_seed,
        problem: p.clone(),
        key,
        masked,
        server_outcome,
        recovered_x,
        true_outcome,
        classification,
    })
}

/// Generates a key from `key_seed` and runs the pipeline once.
pub fn run_trial(p: &PeculiarProblem, key_seed: u64) -> Result<AuditTrial, AuditError> {
    let key = keygen(p, key_seed)?;
    run_trial_with_key(p, key, None, Some(key_seed))
}

/// First trial observed for a failure tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureExample {
    pub trial_index: u64,
    pub trial: AuditTrial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub master_seed: u64,
    pub m: usize,
    pub n: usize,
    pub trials_requested: u64,
    pub b_mode: BMode,
    /// One entry per [`TrialTag`], zero counts included.
    pub counts: BTreeMap<TrialTag, u64>,
    /// Trials that could not be run (generator or key resampling ran out).
    pub trial_errors: u64,
    pub first_counterexamples: BTreeMap<TrialTag, FailureExample>,
    pub fingerprint: String,
}

impl AuditReport {
    pub fn count(&self, tag: TrialTag) -> u64 {
        self.counts.get(&tag).copied().unwrap_or(0)
    }

    /// Counts (errors included) add up to the number of trials requested.
    pub fn is_balanced(&self) -> bool {
        self.counts.values().sum::<u64>() + self.trial_errors == self.trials_requested
    }

    /// Checks the accounting and replays every embedded counterexample.
    pub fn revalidate(&self) -> Result<(), AuditError> {
        if !self.is_balanced() {
            return Err(invariant("report counts do not sum to trials requested"));
        }
        for (tag, ex) in &self.first_counterexamples {
            if ex.trial.classification != *tag {
                return Err(invariant(format!(
                    "counterexample filed under {tag} is tagged {}",
                    ex.trial.classification
                )));
            }
            ex.trial.revalidate()?;
        }
        Ok(())
    }

    /// Summary table, one row per tag.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "audit m={} n={} trials={} seed={} b-mode={:?}\n",
            self.m, self.n, self.trials_requested, self.master_seed, self.b_mode
        );
        for (tag, count) in &self.counts {
            out.push_str(&format!("  {:<20} {count:>6}\n", tag.name()));
        }
        out.push_str(&format!("  {:<20} {:>6}\n", "ERRORS", self.trial_errors));
        out
    }
}

/// Identifies the generator and key-sampling configuration a report was
/// produced under.
pub fn config_fingerprint() -> String {
    const CONFIG: &str = "lpmask-audit/1;rng=chacha8(seed_from_u64);split=splitmix64;\
        instance:A[-5,5],x0[0,5],c[-5,5],B[-5,5]x256;\
        key:Q,M,r[-10,10],gamma[1,8]/[1,8],N[-3,3]x64;\
        server=two-phase-bland(y>=0)";
    let digest = Sha256::digest(CONFIG.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs trial `index` of an audit: instance seed `split(master, index, 0)`,
/// key seed `split(master, index, 1)`.
pub fn audit_trial(
    m: usize,
    n: usize,
    master_seed: u64,
    index: u64,
    b_mode: BMode,
) -> Result<AuditTrial, AuditError> {
    let seed = split_seed(master_seed, index, 0);
    let key_seed = split_seed(master_seed, index, 1);
    let problem = generate_instance(m, n, seed, b_mode)?;
    let key = keygen(&problem, key_seed)?;
    run_trial_with_key(&problem, key, Some(seed), Some(key_seed))
}

/// Every trial of an audit, in index order. Trials run in parallel.
pub fn audit_trials(
    m: usize,
    n: usize,
    trials: u64,
    master_seed: u64,
    b_mode: BMode,
) -> Vec<Result<AuditTrial, AuditError>> {
    (0..trials)
        .into_par_iter()
        .map(|i| audit_trial(m, n, master_seed, i, b_mode))
        .collect()
}

/// Aggregates trial results. Invariant violations abort; resampling
/// failures are counted as trial errors.
pub fn aggregate(
    m: usize,
    n: usize,
    master_seed: u64,
    b_mode: BMode,
    results: Vec<Result<AuditTrial, AuditError>>,
) -> Result<AuditReport, AuditError> {
    let mut counts: BTreeMap<TrialTag, u64> = TrialTag::ALL.iter().map(|t| (*t, 0)).collect();
    let mut first_counterexamples = BTreeMap::new();
    let mut trial_errors = 0;
    let trials_requested = results.len() as u64;
    for (index, result) in results.into_iter().enumerate() {
        match result {
            Ok(trial) => {
                let tag = trial.classification;
                *counts.entry(tag).or_default() += 1;
                if tag.is_failure() {
                    first_counterexamples.entry(tag).or_insert(FailureExample {
                        trial_index: index as u64,
                        trial,
                    });
                }
            }
            Err(e @ AuditError::Invariant(_)) => return Err(e),
            Err(_) => trial_errors += 1,
        }
    }
    Ok(AuditReport {
        master_seed,
        m,
        n,
        trials_requested,
        b_mode,
        counts,
        trial_errors,
        first_counterexamples,
        fingerprint: config_fingerprint(),
    })
}

pub fn run_audit(
    m: usize,
    n: usize,
    trials: u64,
    master_seed: u64,
    b_mode: BMode,
) -> Result<AuditReport, AuditError> {
    if trials == 0 {
        return Err(AuditError::NoTrials);
    }
    if m < 1 || m >= n || n > MAX_GENERATED_VARS {
        return Err(AuditError::BadDimensions { m, n });
    }
    aggregate(
        m,
        n,
        master_seed,
        b_mode,
        audit_trials(m, n, trials, master_seed, b_mode),
    )
}

/// A nonnegative `x` whose masked image `y = M⁻¹(x + r)` has a negative entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegCounterexample {
    pub x: RatVector,
    pub y: RatVector,
    pub bad_index: usize,
}

/// Searches for `x ≥ 0` with `M⁻¹(x + r) ≱ 0`.
///
/// Tries `x = 0`, then each unit vector, then `n_samples` random points with
/// integer entries in `[0, 10]`.
pub fn check_nonneg_preservation(
    k: &MaskingKey,
    n_samples: usize,
    seed: u64,
) -> Option<NonnegCounterexample> {
    let n = k.n();
    let mut rng = rng_from_seed(seed);
    let probes = std::iter::once(RatVector::zeros(n))
        .chain((0..n).map(|i| RatVector::unit(n, i)))
        .chain((0..n_samples).map(|_| int_vector(&mut rng, n, 0, 10)));
    for x in probes {
        let y = k.mask_point(&x).expect("M is nonsingular");
        if let Some(bad_index) = y.first_negative() {
            return Some(NonnegCounterexample { x, y, bad_index });
        }
    }
    None
}

/// If `B'` is diagonal with positive entries, confirms `B'y ≥ 0 ⟺ y ≥ 0`
/// on probe vectors (zero, ±unit vectors, and `n_samples` random vectors
/// with entries in `[-10, 10]`) and returns true. Otherwise returns false.
///
/// Panics if the equivalence fails on a probe.
pub fn positive_diagonal_probe(
    p: &PeculiarProblem,
    k: &MaskingKey,
    n_samples: usize,
    seed: u64,
) -> bool {
    if k.m() != p.m() || k.n() != p.n() {
        return false;
    }
    let masked_ineq = masked_inequality(p, k);
    if !is_positive_diagonal(&masked_ineq).expect("square") {
        return false;
    }
    let n = p.n();
    let mut rng = rng_from_seed(seed);
    let mut probes = vec![RatVector::zeros(n)];
    for i in 0..n {
        probes.push(RatVector::unit(n, i));
        probes.push(RatVector::unit(n, i).neg());
    }
    probes.extend((0..n_samples).map(|_| int_vector(&mut rng, n, -10, 10)));
    for y in &probes {
        let image_nonneg = masked_ineq.mul_vec(y).expect("n x n").is_nonneg();
        assert_eq!(
            image_nonneg,
            y.is_nonneg(),
            "positive diagonal B' broke B'y >= 0 <=> y >= 0 at y = {y}"
        );
    }
    true
}

/// The fixed problem `min x₁ s.t. x₁ + x₂ = 2, x ≥ 0` (with `B = I`).
pub fn builtin_problem() -> PeculiarProblem {
    PeculiarProblem::new(
        RatMatrix::from_int_rows(&[&[1, 1]]),
        RatVector::from_ints(&[2]),
        RatMatrix::identity(2),
        RatVector::from_ints(&[1, 0]),
    )
    .expect("builtin problem is well formed")
}

/// `Q = [1]`, `M = I`, `P = (−1, 0)ᵀ`, `r = (−1, 0)`, `γ = 1`.
pub fn builtin_key() -> MaskingKey {
    MaskingKey::new(
        RatMatrix::identity(1),
        RatMatrix::identity(2),
        RatMatrix::from_int_rows(&[&[-1], &[0]]),
        RatVector::from_ints(&[-1, 0]),
        int(1),
    )
    .expect("builtin key is well formed")
}

/// A fixed trial in which the server's honest answer decrypts to a feasible
/// but suboptimal point.
///
/// The masked problem is `min y₁ s.t. y₁ + y₂ = 1, 2y₁ + y₂ ≥ 0, y₂ ≥ 0`.
/// With `y ≥ 0` added the server returns `y = (0, 1)`, which decrypts to
/// `x̂ = (1, 1)` with value 1, while the client's optimum is 0 at `(0, 2)`.
/// Every number is checked on construction.
pub fn builtin_counterexample() -> AuditTrial {
    let p = builtin_problem();
    let key = builtin_key();
    assert_eq!(key.validate_for(&p), Ok::<(), KeyViolation>(()));
    let trial = run_trial_with_key(&p, key, None, None).expect("builtin trial runs");

    let masked = &trial.masked;
    assert_eq!(masked.a(), &RatMatrix::from_int_rows(&[&[1, 1]]));
    assert_eq!(masked.b(), &RatVector::from_ints(&[1]));
    assert_eq!(
        masked.ineq(),
        &RatMatrix::from_int_rows(&[&[2, 1], &[0, 1]])
    );
    assert_eq!(masked.c(), &RatVector::from_ints(&[1, 0]));
    assert_eq!(
        trial.server_outcome.x_opt(),
        Some(&RatVector::from_ints(&[0, 1]))
    );
    assert_eq!(trial.server_outcome.value(), Some(&int(0)));
    assert_eq!(trial.recovered_x, Some(RatVector::from_ints(&[1, 1])));
    assert_eq!(trial.recovered_value(), Some(int(1)));
    assert_eq!(
        trial.true_outcome.x_opt(),
        Some(&RatVector::from_ints(&[0, 2]))
    );
    assert_eq!(trial.true_outcome.value(), Some(&int(0)));
    assert_eq!(trial.classification, TrialTag::Suboptimal);
    trial
}

/// Human-readable walk through a trial, including the unrestricted-sign
/// optimum of the masked problem the server never looked for.
pub fn explain_trial(trial: &AuditTrial) -> Vec<String> {
    let p = &trial.problem;
    let k = &trial.key;
    let m = &trial.masked;
    let mut lines = vec![
        format!("client problem: min c^T x  s.t.  A x = b, B x >= 0, x >= 0"),
        format!(
            "  A = {}, b = {}, B = {}, c = {}",
            p.a(),
            p.b(),
            p.ineq(),
            p.c()
        ),
        format!(
            "key: Q = {}, M = {}, P = {}, r = {}, gamma = {}",
            k.row_mix(),
            k.col_mix(),
            k.correction(),
            k.shift(),
            k.scale()
        ),
        format!(
            "masked problem: A' = {}, b' = {}, B' = {}, c' = {}",
            m.a(),
            m.b(),
            m.ineq(),
            m.c()
        ),
    ];
    match &trial.server_outcome.verdict {
        Verdict::Optimal { x, value } => lines.push(format!(
            "server adds y >= 0 and solves: optimal value {value} at y = {x}"
        )),
        Verdict::Infeasible => lines.push("server adds y >= 0 and solves: infeasible".into()),
        Verdict::Unbounded { ray } => lines.push(format!(
            "server adds y >= 0 and solves: unbounded along {ray}"
        )),
    }
    if let (Some(x), Some(v)) = (&trial.recovered_x, trial.recovered_value()) {
        lines.push(format!(
            "client decrypts x = M y - r = {x}, value c^T x = {v}"
        ));
    }
    match &trial.true_outcome.verdict {
        Verdict::Optimal { x, value } => lines.push(format!(
            "true optimum with x >= 0: value {value} at x = {x}"
        )),
        Verdict::Infeasible => lines.push("true problem with x >= 0: infeasible".into()),
        Verdict::Unbounded { ray } => {
            lines.push(format!("true problem with x >= 0: unbounded along {ray}"))
        }
    }
    if let Some(x_star) = trial.true_outcome.x_opt() {
        let y_star = k.mask_point(x_star).expect("M is nonsingular");
        let masked_value = m.c().dot(&y_star).expect("length n");
        lines.push(format!(
            "true optimum maps to y* = M^-1 (x* + r) = {y_star}, masked value {masked_value}{}",
            if y_star.is_nonneg() {
                String::new()
            } else {
                ", cut off by y >= 0".to_string()
            }
        ));
    }
    let free = solve_general(&masked_as_general(m, false));
    match &free.verdict {
        Verdict::Optimal { x, value } => lines.push(format!(
            "masked problem without y >= 0: optimal value {value} at y = {x}"
        )),
        Verdict::Infeasible => lines.push("masked problem without y >= 0: infeasible".into()),
        Verdict::Unbounded { .. } => lines.push("masked problem without y >= 0: unbounded".into()),
    }
    lines.push(format!("classification: {}", trial.classification));
    lines
}

/// Counts a single replay of [`builtin_counterexample`] as a one-trial audit.
pub fn builtin_report() -> AuditReport {
    let trial = builtin_counterexample();
    aggregate(1, 2, 0, BMode::IdentityB, vec![Ok(trial)]).expect("builtin trial classifies")
}
