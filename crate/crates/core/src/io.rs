//! Canonical JSON documents for problems, keys, solutions and reports.
//!
//! Every scalar is a string: a decimal integer (`"-3"`) or a fraction
//! `"p/q"` with `q > 0` and `gcd(|p|, q) = 1`. Documents are printed with
//! a fixed field order and fixed indentation, so equal values always give
//! byte-equal files.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{Integer, One};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::audit::{AuditReport, AuditTrial, BMode, FailureExample, TrialTag};
use crate::masking::MaskingKey;
use crate::model::{GeneralLP, MaskedProblem, PeculiarProblem, Sign};
use crate::numerics::{RatMatrix, RatVector, Rational};
use crate::simplex::{SolveOutcome, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("non-canonical scalar {0:?}: {1}")]
    Scalar(String, &'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("validation failed: {0}")]
    Invalid(String),
}

impl FormatError {
    /// 1 for anything that fails to parse, 2 for well-formed documents that
    /// break a model or key invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            FormatError::Invalid(_) => 2,
            _ => 1,
        }
    }
}

fn shape(msg: impl Into<String>) -> FormatError {
    FormatError::Shape(msg.into())
}

fn invalid(e: impl std::fmt::Display) -> FormatError {
    FormatError::Invalid(e.to_string())
}

pub fn format_scalar(r: &Rational) -> String {
    r.to_string()
}

fn is_decimal(s: &str, allow_zero: bool) -> bool {
    match s.as_bytes() {
        [] => false,
        [b'0'] => allow_zero,
        [first, rest @ ..] => (b'1'..=b'9').contains(first) && rest.iter().all(u8::is_ascii_digit),
    }
}

/// Parses `-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?` and rejects fractions that are
/// not in lowest terms.
pub fn parse_scalar(s: &str) -> Result<Rational, FormatError> {
    let err = |why| FormatError::Scalar(s.to_string(), why);
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if !is_decimal(digits, true) {
        return Err(err("numerator is not a canonical decimal integer"));
    }
    if num.starts_with('-') && digits == "0" {
        return Err(err("negative zero"));
    }
    let numer: BigInt = num.parse().map_err(|_| err("numerator"))?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if !is_decimal(d, false) {
                return Err(err("denominator must be a positive decimal integer"));
            }
            let d: BigInt = d.parse().map_err(|_| err("denominator"))?;
            if !numer.gcd(&d).is_one() {
                return Err(err("fraction is not in lowest terms"));
            }
            d
        }
    };
    Ok(Rational::new_raw(numer, denom))
}

fn vec_out(v: &RatVector) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

fn vec_in(v: &[String], len: usize, name: &str) -> Result<RatVector, FormatError> {
    if v.len() != len {
        return Err(shape(format!(
            "{name} has {} entries, expected {len}",
            v.len()
        )));
    }
    v.iter().map(|s| parse_scalar(s)).collect()
}

fn mat_out(m: &RatMatrix) -> Vec<Vec<String>> {
    m.row_iter()
        .map(|row| row.iter().map(format_scalar).collect())
        .collect()
}

fn mat_in(
    rows: &[Vec<String>],
    n_rows: usize,
    n_cols: usize,
    name: &str,
) -> Result<RatMatrix, FormatError> {
    if rows.len() != n_rows {
        return Err(shape(format!(
            "{name} has {} rows, expected {n_rows}",
            rows.len()
        )));
    }
    let mut parsed = Vec::with_capacity(n_rows);
    for (i, row) in rows.iter().enumerate() {
        parsed.push(vec_in(row, n_cols, &format!("{name} row {i}"))?.into_inner());
    }
    RatMatrix::from_rows(n_cols, parsed).map_err(|e| shape(e.to_string()))
}

/// Body shared by the client and masked problem kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemBody {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
    #[serde(rename = "B")]
    pub ineq: Vec<Vec<String>>,
    pub c: Vec<String>,
}

type Parts = (RatMatrix, RatVector, RatMatrix, RatVector);

impl ProblemBody {
    fn from_parts(a: &RatMatrix, b: &RatVector, ineq: &RatMatrix, c: &RatVector) -> Self {
        ProblemBody {
            m: a.rows(),
            n: a.cols(),
            a: mat_out(a),
            b: vec_out(b),
            ineq: mat_out(ineq),
            c: vec_out(c),
        }
    }

    fn parts(&self) -> Result<Parts, FormatError> {
        Ok((
            mat_in(&self.a, self.m, self.n, "A")?,
            vec_in(&self.b, self.m, "b")?,
            mat_in(&self.ineq, self.n, self.n, "B")?,
            vec_in(&self.c, self.n, "c")?,
        ))
    }

    pub fn from_peculiar(p: &PeculiarProblem) -> Self {
        Self::from_parts(p.a(), p.b(), p.ineq(), p.c())
    }

    pub fn from_masked(p: &MaskedProblem) -> Self {
        Self::from_parts(p.a(), p.b(), p.ineq(), p.c())
    }

    pub fn to_peculiar(&self) -> Result<PeculiarProblem, FormatError> {
        let (a, b, ineq, c) = self.parts()?;
        PeculiarProblem::new(a, b, ineq, c).map_err(invalid)
    }

    pub fn to_masked(&self) -> Result<MaskedProblem, FormatError> {
        let (a, b, ineq, c) = self.parts()?;
        MaskedProblem::new(a, b, ineq, c).map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralBody {
    pub n: usize,
    /// Equality row count.
    pub k: usize,
    /// Inequality row count.
    pub p: usize,
    pub c: Vec<String>,
    #[serde(rename = "A_eq")]
    pub a_eq: Vec<Vec<String>>,
    pub b_eq: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<String>>,
    /// `"nonneg"` or `"free"` per variable.
    pub sign: Vec<String>,
}

impl GeneralBody {
    pub fn from_lp(lp: &GeneralLP) -> Self {
        GeneralBody {
            n: lp.n(),
            k: lp.a_eq.rows(),
            p: lp.g_ineq.rows(),
            c: vec_out(&lp.c),
            a_eq: mat_out(&lp.a_eq),
            b_eq: vec_out(&lp.b_eq),
            g: mat_out(&lp.g_ineq),
            sign: lp
                .sign
                .iter()
                .map(|s| match s {
                    Sign::Nonnegative => "nonneg".to_string(),
                    Sign::Free => "free".to_string(),
                })
                .collect(),
        }
    }

    pub fn to_lp(&self) -> Result<GeneralLP, FormatError> {
        if self.sign.len() != self.n {
            return Err(shape(format!(
                "sign has {} entries, expected {}",
                self.sign.len(),
                self.n
            )));
        }
        let sign = self
            .sign
            .iter()
            .map(|s| match s.as_str() {
                "nonneg" => Ok(Sign::Nonnegative),
                "free" => Ok(Sign::Free),
                other => Err(FormatError::Syntax(format!(
                    "sign must be \"nonneg\" or \"free\", got {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        GeneralLP::new(
            vec_in(&self.c, self.n, "c")?,
            mat_in(&self.a_eq, self.k, self.n, "A_eq")?,
            vec_in(&self.b_eq, self.k, "b_eq")?,
            mat_in(&self.g, self.p, self.n, "G")?,
            sign,
        )
        .map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemFile {
    Peculiar(ProblemBody),
    Masked(ProblemBody),
    General(GeneralBody),
}

/// A problem file after validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemDoc {
    Peculiar(PeculiarProblem),
    Masked(MaskedProblem),
    General(GeneralLP),
}

impl ProblemDoc {
    pub fn to_file(&self) -> ProblemFile {
        match self {
            ProblemDoc::Peculiar(p) => ProblemFile::Peculiar(ProblemBody::from_peculiar(p)),
            ProblemDoc::Masked(p) => ProblemFile::Masked(ProblemBody::from_masked(p)),
            ProblemDoc::General(lp) => ProblemFile::General(GeneralBody::from_lp(lp)),
        }
    }

    pub fn to_text(&self) -> String {
        to_canonical(&self.to_file())
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        match from_json::<ProblemFile>(text)? {
            ProblemFile::Peculiar(b) => Ok(ProblemDoc::Peculiar(b.to_peculiar()?)),
            ProblemFile::Masked(b) => Ok(ProblemDoc::Masked(b.to_masked()?)),
            ProblemFile::General(b) => Ok(ProblemDoc::General(b.to_lp()?)),
        }
    }

    /// `add_nonneg` appends `x ≥ 0` to the two masking forms; general
    /// problems carry their own sign flags and ignore it.
    pub fn as_general(&self, add_nonneg: bool) -> GeneralLP {
        match self {
            ProblemDoc::Peculiar(p) => crate::model::peculiar_as_general(p, add_nonneg),
            ProblemDoc::Masked(p) => crate::model::masked_as_general(p, add_nonneg),
            ProblemDoc::General(lp) => lp.clone(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax(e.to_string()))
}

/// SHA-256 (hex) of the canonical client-problem file.
pub fn problem_fingerprint(p: &PeculiarProblem) -> String {
    let text = ProblemDoc::Peculiar(p.clone()).to_text();
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyBody {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "Q")]
    pub row_mix: Vec<Vec<String>>,
    #[serde(rename = "M")]
    pub col_mix: Vec<Vec<String>>,
    #[serde(rename = "P")]
    pub correction: Vec<Vec<String>>,
    pub r: Vec<String>,
    pub gamma: String,
}

impl KeyBody {
    pub fn from_key(k: &MaskingKey) -> Self {
        KeyBody {
            m: k.m(),
            n: k.n(),
            row_mix: mat_out(k.row_mix()),
            col_mix: mat_out(k.col_mix()),
            correction: mat_out(k.correction()),
            r: vec_out(k.shift()),
            gamma: format_scalar(k.scale()),
        }
    }

    pub fn to_key(&self) -> Result<MaskingKey, FormatError> {
        MaskingKey::new(
            mat_in(&self.row_mix, self.m, self.m, "Q")?,
            mat_in(&self.col_mix, self.n, self.n, "M")?,
            mat_in(&self.correction, self.n, self.m, "P")?,
            vec_in(&self.r, self.n, "r")?,
            parse_scalar(&self.gamma)?,
        )
        .map_err(invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "key")]
pub struct KeyFile {
    pub seed: Option<u64>,
    pub problem_fingerprint: String,
    #[serde(flatten)]
    pub key: KeyBody,
}

impl KeyFile {
    pub fn new(key: &MaskingKey, problem: &PeculiarProblem, seed: Option<u64>) -> Self {
        KeyFile {
            seed,
            problem_fingerprint: problem_fingerprint(problem),
            key: KeyBody::from_key(key),
        }
    }

    /// Parses the key and re-checks it against `problem`: the fingerprint
    /// must match and every key invariant must hold.
    pub fn load_for(&self, problem: &PeculiarProblem) -> Result<MaskingKey, FormatError> {
        let key = self.key.to_key()?;
        if self.problem_fingerprint != problem_fingerprint(problem) {
            return Err(FormatError::Invalid(
                "key fingerprint does not match the problem".into(),
            ));
        }
        key.validate_for(problem).map_err(invalid)?;
        Ok(key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeBody {
    pub verdict: String,
    pub x: Option<Vec<String>>,
    pub value: Option<String>,
    pub ray: Option<Vec<String>>,
    pub pivots_used: usize,
}

impl OutcomeBody {
    pub fn from_outcome(o: &SolveOutcome) -> Self {
        OutcomeBody {
            verdict: o.verdict_name().to_string(),
            x: o.x_opt().map(vec_out),
            value: o.value().map(format_scalar),
            ray: o.ray().map(vec_out),
            pivots_used: o.pivots_used,
        }
    }

    pub fn to_outcome(&self, n: usize) -> Result<SolveOutcome, FormatError> {
        let verdict = match (self.verdict.as_str(), &self.x, &self.value, &self.ray) {
            ("Optimal", Some(x), Some(v), None) => Verdict::Optimal {
                x: vec_in(x, n, "x")?,
                value: parse_scalar(v)?,
            },
            ("Infeasible", None, None, None) => Verdict::Infeasible,
            ("Unbounded", None, None, Some(ray)) => Verdict::Unbounded {
                ray: vec_in(ray, n, "ray")?,
            },
            (v, ..) => {
                return Err(FormatError::Syntax(format!(
                    "verdict {v:?} does not match the fields present"
                )))
            }
        };
        Ok(SolveOutcome {
            verdict,
            pivots_used: self.pivots_used,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "solution")]
pub struct SolutionFile {
    pub n: usize,
    #[serde(flatten)]
    pub outcome: OutcomeBody,
}

impl SolutionFile {
    pub fn new(o: &SolveOutcome, n: usize) -> Self {
        SolutionFile {
            n,
            outcome: OutcomeBody::from_outcome(o),
        }
    }

    pub fn to_outcome(&self) -> Result<SolveOutcome, FormatError> {
        self.outcome.to_outcome(self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "recovered")]
pub struct RecoveredFile {
    pub x: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialBody {
    pub seed: Option<u64>,
    pub key_seed: Option<u64>,
    pub problem: ProblemBody,
    pub key: KeyBody,
    pub masked: ProblemBody,
    pub server_outcome: OutcomeBody,
    pub recovered_x: Option<Vec<String>>,
    pub recovered_value: Option<String>,
    pub true_outcome: OutcomeBody,
    pub classification: TrialTag,
}

impl TrialBody {
    pub fn from_trial(t: &AuditTrial) -> Self {
        TrialBody {
            seed: t.seed,
            key_seed: t.key_seed,
            problem: ProblemBody::from_peculiar(&t.problem),
            key: KeyBody::from_key(&t.key),
            masked: ProblemBody::from_masked(&t.masked),
            server_outcome: OutcomeBody::from_outcome(&t.server_outcome),
            recovered_x: t.recovered_x.as_ref().map(vec_out),
            recovered_value: t.recovered_value().as_ref().map(format_scalar),
            true_outcome: OutcomeBody::from_outcome(&t.true_outcome),
            classification: t.classification,
        }
    }

    /// Rebuilds the trial from its stored fields without re-solving.
    pub fn to_trial(&self) -> Result<AuditTrial, FormatError> {
        let problem = self.problem.to_peculiar()?;
        let n = problem.n();
        let key = self.key.to_key()?;
        let masked = self.masked.to_masked()?;
        let recovered_x = self
            .recovered_x
            .as_ref()
            .map(|x| vec_in(x, n, "recovered_x"))
            .transpose()?;
        let trial = AuditTrial {
            seed: self.seed,
            key_seed: self.key_seed,
            problem,
            key,
            masked,
            server_outcome: self.server_outcome.to_outcome(n)?,
            recovered_x,
            true_outcome: self.true_outcome.to_outcome(n)?,
            classification: self.classification,
        };
        let stored_value = self
            .recovered_value
            .as_deref()
            .map(parse_scalar)
            .transpose()?;
        if stored_value != trial.recovered_value() {
            return Err(FormatError::Invalid(
                "recovered_value does not match c^T recovered_x".into(),
            ));
        }
        Ok(trial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleBody {
    pub trial_index: u64,
    pub trial: TrialBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "report")]
pub struct ReportFile {
    pub master_seed: u64,
    pub m: usize,
    pub n: usize,
    pub trials_requested: u64,
    pub b_mode: BMode,
    pub fingerprint: String,
    pub counts: BTreeMap<TrialTag, u64>,
    pub trial_errors: u64,
    pub first_counterexamples: BTreeMap<TrialTag, ExampleBody>,
}

impl ReportFile {
    pub fn from_report(r: &AuditReport) -> Self {
        ReportFile {
            master_seed: r.master_seed,
            m: r.m,
            n: r.n,
            trials_requested: r.trials_requested,
            b_mode: r.b_mode,
            fingerprint: r.fingerprint.clone(),
            counts: r.counts.clone(),
            trial_errors: r.trial_errors,
            first_counterexamples: r
                .first_counterexamples
                .iter()
                .map(|(tag, ex)| {
                    (
                        *tag,
                        ExampleBody {
                            trial_index: ex.trial_index,
                            trial: TrialBody::from_trial(&ex.trial),
                        },
                    )
                })
                .collect(),
        }
    }

    /// Parses the report without replaying anything; see
    /// [`AuditReport::revalidate`].
    pub fn to_report(&self) -> Result<AuditReport, FormatError> {
        let mut first_counterexamples = BTreeMap::new();
        for (tag, ex) in &self.first_counterexamples {
            first_counterexamples.insert(
                *tag,
                FailureExample {
                    trial_index: ex.trial_index,
                    trial: ex.trial.to_trial()?,
                },
            );
        }
        Ok(AuditReport {
            master_seed: self.master_seed,
            m: self.m,
            n: self.n,
            trials_requested: self.trials_requested,
            b_mode: self.b_mode,
            counts: self.counts.clone(),
            trial_errors: self.trial_errors,
            first_counterexamples,
            fingerprint: self.fingerprint.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "counterexample")]
pub struct CounterexampleFile {
    pub trial: TrialBody,
    pub explanation: Vec<String>,
}

/// Solutions and recovered points print as `(a, b)`.
pub fn describe_outcome(o: &SolveOutcome) -> String {
    match &o.verdict {
        Verdict::Optimal { x, value } => format!("Optimal value {value} at {x}"),
        Verdict::Infeasible => "Infeasible".to_string(),
        Verdict::Unbounded { ray } => format!("Unbounded along {ray}"),
    }
}
