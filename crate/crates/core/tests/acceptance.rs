//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! ```bash
//! cargo test -p lpmask --test acceptance
//! ```

mod common;

use std::time::{Duration, Instant};

use lpmask::audit::{
    aggregate, audit_trials, builtin_counterexample, builtin_key, builtin_problem,
    check_nonneg_preservation, generate_instance_with_witness, positive_diagonal_probe, AuditError,
    BMode, TrialTag,
};
use lpmask::io::{from_json, CounterexampleFile, TrialBody};
use lpmask::masking::{keygen, verify_feasibility_map, MaskingKey};
use lpmask::model::{masked_as_general, peculiar_as_general, PeculiarProblem};
use lpmask::numerics::{int, rat, RatMatrix, RatVector};
use lpmask::random::{int_vector, rng_from_seed, split_seed};
use lpmask::simplex::{check_certificate, enumerate_optimum, pivot_bound, solve_general, Verdict};
use rand::Rng;

use common::{lpmask, random_general_lp, split_pivot_bound};

const AUDIT_SEED: u64 = 1;
const TRIPLE_SEED: u64 = 2024;
const LP_SEED: u64 = 77;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn v(xs: &[i64]) -> RatVector {
    RatVector::from_ints(xs)
}

fn builtin_counterexample_reproduces() -> Check {
    let start = Instant::now();
    let t = builtin_counterexample();
    ensure(
        *t.masked.a() == RatMatrix::from_int_rows(&[&[1, 1]]),
        || format!("A' = {}", t.masked.a()),
    )?;
    ensure(*t.masked.b() == v(&[1]), || {
        format!("b' = {}", t.masked.b())
    })?;
    ensure(
        *t.masked.ineq() == RatMatrix::from_int_rows(&[&[2, 1], &[0, 1]]),
        || format!("B' = {}", t.masked.ineq()),
    )?;
    ensure(*t.masked.c() == v(&[1, 0]), || {
        format!("c' = {}", t.masked.c())
    })?;
    ensure(
        t.server_outcome.verdict
            == Verdict::Optimal {
                x: v(&[0, 1]),
                value: int(0),
            },
        || format!("server {:?}", t.server_outcome.verdict),
    )?;
    ensure(t.recovered_x == Some(v(&[1, 1])), || {
        format!("x = {:?}", t.recovered_x)
    })?;
    ensure(t.recovered_value() == Some(int(1)), || {
        "recovered value".into()
    })?;
    ensure(
        t.true_outcome.verdict
            == Verdict::Optimal {
                x: v(&[0, 2]),
                value: int(0),
            },
        || format!("truth {:?}", t.true_outcome.verdict),
    )?;
    ensure(t.classification == TrialTag::Suboptimal, || {
        format!("tag {}", t.classification)
    })?;

    // Same trial through the command-line tool.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = lpmask(dir.path(), &["counterexample", "-o", "cx.json"]);
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}", out.status.code())
    })?;
    let text = std::fs::read_to_string(dir.path().join("cx.json")).map_err(|e| e.to_string())?;
    let file: CounterexampleFile = from_json(&text).map_err(|e| e.to_string())?;
    ensure(file.trial == TrialBody::from_trial(&t), || {
        "file trial differs".into()
    })?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "value 0 at (0, 2) vs recovered 1 at (1, 1), {:?}",
        start.elapsed()
    ))
}

struct Triple {
    problem: PeculiarProblem,
    key: MaskingKey,
    x: RatVector,
    on_affine_set: bool,
}

/// Triples over m ∈ {1, 2}, n ≤ 4, both B modes. `x` rotates between the
/// generating witness, the witness moved along the null space of `A`
/// (may leave `x ≥ 0` or `B x ≥ 0`), and an unconstrained random point.
fn triples(count: u64) -> Vec<Triple> {
    (0..count)
        .map(|i| {
            let mut rng = rng_from_seed(split_seed(TRIPLE_SEED, i, 2));
            let m = rng.gen_range(1..=2);
            let n = rng.gen_range(m + 1..=4);
            let mode = if i % 2 == 0 {
                BMode::IdentityB
            } else {
                BMode::RandomB
            };
            // b = 0 admits no key (B' r = 0 for every draw); redraw those.
            let (g, key) = (0..)
                .find_map(|attempt| {
                    let g = generate_instance_with_witness(
                        m,
                        n,
                        split_seed(TRIPLE_SEED, i, 3 + attempt),
                        mode,
                    )
                    .expect("instance");
                    let key = keygen(&g.problem, split_seed(TRIPLE_SEED, i, 1)).ok()?;
                    Some((g, key))
                })
                .unwrap();
            let (x, on_affine_set) = match i % 3 {
                0 => (g.witness.clone(), true),
                1 => {
                    let null = g.problem.a().null_space();
                    let d = &null[rng.gen_range(0..null.len())];
                    let t = int(rng.gen_range(-3..=3));
                    (g.witness.add(&d.scale(&t)).unwrap(), true)
                }
                _ => (int_vector(&mut rng, n, -5, 5), false),
            };
            Triple {
                problem: g.problem,
                key,
                x,
                on_affine_set,
            }
        })
        .collect()
}

fn feasibility_bijection(ts: &[Triple]) -> Check {
    let start = Instant::now();
    let mut feasible = 0;
    for (i, t) in ts.iter().enumerate() {
        let pair = verify_feasibility_map(&t.problem, &t.key, &t.x).map_err(|e| e.to_string())?;
        ensure(pair.original == pair.masked, || {
            format!(
                "triple {i}: feasible {} vs {} at x = {}",
                pair.original, pair.masked, t.x
            )
        })?;
        feasible += pair.original as usize;
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{} triples, {feasible} feasible, {:?}",
        ts.len(),
        start.elapsed()
    ))
}

fn objective_relation(ts: &[Triple]) -> Check {
    let mut checked = 0;
    for (i, t) in ts.iter().enumerate().filter(|(_, t)| t.on_affine_set) {
        ensure(
            t.problem.a().mul_vec(&t.x).unwrap() == *t.problem.b(),
            || format!("triple {i}: A x != b"),
        )?;
        let masked = lpmask::masking::encrypt(&t.problem, &t.key).map_err(|e| e.to_string())?;
        let y = t.key.mask_point(&t.x).unwrap();
        let lhs = masked.c().dot(&y).unwrap();
        let c = t.problem.c();
        let rhs = t.key.scale() * (c.dot(&t.x).unwrap() + c.dot(t.key.shift()).unwrap());
        ensure(lhs == rhs, || format!("triple {i}: {lhs} != {rhs}"))?;
        checked += 1;
    }
    ensure(checked > 0, || "no triple with A x = b".into())?;
    Ok(format!("{checked} triples with A x = b"))
}

fn oracle_equivalence() -> Check {
    let (mut optimal, mut seed) = (0, 0);
    while optimal < 200 {
        ensure(seed < 5000, || {
            format!("only {optimal} optimal instances in 5000 seeds")
        })?;
        let lp = random_general_lp(split_seed(LP_SEED, seed, 0));
        let ours = solve_general(&lp);
        let oracle = enumerate_optimum(&lp).map_err(|e| e.to_string())?;
        match (&ours.verdict, &oracle.verdict) {
            (Verdict::Optimal { value: a, .. }, Verdict::Optimal { value: b, .. }) => {
                ensure(a == b, || format!("seed {seed}: simplex {a} vs oracle {b}"))?;
                optimal += 1;
            }
            (Verdict::Infeasible, Verdict::Infeasible)
            | (Verdict::Unbounded { .. }, Verdict::Unbounded { .. }) => {}
            (a, b) => return Err(format!("seed {seed}: simplex {a:?} vs oracle {b:?}")),
        }
        ensure(check_certificate(&lp, &ours) == Ok(true), || {
            format!("seed {seed}: certificate rejected {:?}", ours.verdict)
        })?;
        seed += 1;
    }
    Ok(format!(
        "{optimal} optimal of {seed} instances, all certificates valid"
    ))
}

fn flaw_prevalence() -> Check {
    let start = Instant::now();
    let identity = aggregate(
        2,
        4,
        AUDIT_SEED,
        BMode::IdentityB,
        audit_trials(2, 4, 200, AUDIT_SEED, BMode::IdentityB),
    )
    .map_err(|e| e.to_string())?;
    let random = aggregate(
        2,
        4,
        AUDIT_SEED,
        BMode::RandomB,
        audit_trials(2, 4, 200, AUDIT_SEED, BMode::RandomB),
    )
    .map_err(|e| e.to_string())?;
    use TrialTag::*;
    let frozen = |r: &lpmask::AuditReport, want: [u64; 7]| -> Result<(), String> {
        let got = [
            Faithful,
            Suboptimal,
            InfeasibleRecovery,
            MaskedInfeasible,
            MaskedUnbounded,
            TrueInfeasible,
            TrueUnbounded,
        ]
        .map(|t| r.count(t));
        ensure(got == want && r.trial_errors == 0, || {
            format!(
                "{:?} counts {got:?} (errors {}) differ from frozen {want:?}",
                r.b_mode, r.trial_errors
            )
        })
    };
    frozen(&identity, [9, 27, 0, 101, 0, 0, 63])?;
    frozen(&random, [4, 10, 36, 108, 4, 0, 38])?;
    ensure(identity.count(Suboptimal) >= 1, || {
        "no SUBOPTIMAL with identity B".into()
    })?;
    ensure(
        random.count(Suboptimal) + random.count(InfeasibleRecovery) >= 1,
        || "no failing trial with random B".into(),
    )?;
    identity.revalidate().map_err(|e| e.to_string())?;
    random.revalidate().map_err(|e| e.to_string())?;

    // The documented command line, timed end to end.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let seed = AUDIT_SEED.to_string();
    let out = lpmask(
        dir.path(),
        &[
            "audit", "--m", "2", "--n", "4", "--trials", "200", "--seed", &seed, "-o", "r.json",
        ],
    );
    ensure(out.status.code() == Some(0), || {
        format!("audit exit {:?}", out.status.code())
    })?;
    ensure(
        common::stdout(&out).contains(&format!("{:<20} {:>6}", "SUBOPTIMAL", 27)),
        || "command output disagrees with library".into(),
    )?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "identity: {} SUBOPTIMAL; random: {} SUBOPTIMAL + {} INFEASIBLE_RECOVERY; {:?}",
        identity.count(Suboptimal),
        random.count(Suboptimal),
        random.count(InfeasibleRecovery),
        start.elapsed()
    ))
}

fn partial_feasibility() -> Check {
    let (mut optimal, mut skipped) = (0, 0);
    for mode in [BMode::IdentityB, BMode::RandomB] {
        for (m, n) in [(1, 3), (2, 4), (3, 5)] {
            let results = audit_trials(m, n, 200, AUDIT_SEED, mode);
            for (i, r) in results.iter().enumerate() {
                let t = match r {
                    Ok(t) => t,
                    Err(e @ AuditError::Invariant(_)) => {
                        return Err(format!("{mode:?} {m}x{n} trial {i}: {e}"))
                    }
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                };
                if let Some(x) = &t.recovered_x {
                    let p = &t.problem;
                    ensure(
                        p.a().mul_vec(x).unwrap() == *p.b()
                            && p.ineq().mul_vec(x).unwrap().is_nonneg(),
                        || format!("{mode:?} {m}x{n} trial {i}: x = {x}"),
                    )?;
                    optimal += 1;
                }
            }
            let report = aggregate(m, n, AUDIT_SEED, mode, results).map_err(|e| e.to_string())?;
            if mode == BMode::IdentityB {
                let bad = report.count(TrialTag::InfeasibleRecovery);
                ensure(bad == 0, || {
                    format!("identity {m}x{n}: {bad} INFEASIBLE_RECOVERY")
                })?;
            }
        }
    }
    Ok(format!(
        "{optimal} recovered points satisfy A x = b, B x >= 0 ({skipped} trials had no key)"
    ))
}

fn nonneg_non_preservation() -> Check {
    let cx = check_nonneg_preservation(&builtin_key(), 100, 1).ok_or("no violation found")?;
    ensure(cx.x == v(&[0, 0]) && cx.y == v(&[-1, 0]), || {
        format!("found x = {} -> y = {}", cx.x, cx.y)
    })?;
    ensure(cx.y[cx.bad_index] < int(0), || {
        "reported index not negative".into()
    })?;
    Ok(format!("x = {} -> y = {}", cx.x, cx.y))
}

fn positive_diagonal_exception() -> Check {
    // Positive diagonal B with the trivial key gives B' = B.
    let mut rng = rng_from_seed(9);
    let mut probed = 0;
    for n in 2..=4 {
        for trial in 0..10 {
            let diag: Vec<_> = (0..n)
                .map(|_| rat(rng.gen_range(1..=9), rng.gen_range(1..=4)))
                .collect();
            let p = PeculiarProblem::new(
                RatMatrix::from_rows(n, vec![int_vector(&mut rng, n, -5, 5).into_inner()]).unwrap(),
                v(&[1]),
                RatMatrix::diagonal(&diag),
                int_vector(&mut rng, n, -5, 5),
            )
            .map_err(|e| e.to_string())?;
            ensure(
                positive_diagonal_probe(&p, &MaskingKey::trivial(1, n), 100, trial),
                || format!("probe refused B = diag{diag:?}"),
            )?;
            probed += 1;
        }
    }
    ensure(
        !positive_diagonal_probe(&builtin_problem(), &builtin_key(), 100, 0),
        || "probe accepted the builtin B'".into(),
    )?;
    Ok(format!(
        "{probed} positive-diagonal B' x 100+ probes exact; builtin B' rejected"
    ))
}

fn determinism() -> Check {
    let runs: Vec<&[&str]> = vec![
        &["gen", "--m", "2", "--n", "4", "--seed", "5", "-o", "p.json"],
        &[
            "gen", "--m", "2", "--n", "4", "--seed", "5", "--b-mode", "random", "-o", "pr.json",
        ],
        &[
            "keygen",
            "--problem",
            "pr.json",
            "--seed",
            "6",
            "-o",
            "k.json",
        ],
        &[
            "encrypt",
            "--problem",
            "pr.json",
            "--key",
            "k.json",
            "-o",
            "mp.json",
        ],
        &["solve", "mp.json", "-o", "s.json"],
        &["solve", "pr.json", "--form", "general", "-o", "sg.json"],
        &[
            "audit", "--m", "2", "--n", "4", "--trials", "50", "--seed", "3", "--b-mode", "random",
            "-o", "r.json",
        ],
        &[
            "counterexample",
            "-o",
            "cx.json",
            "--problem-out",
            "cp.json",
            "--key-out",
            "ck.json",
            "--masked-out",
            "cm.json",
        ],
        &["solve", "cm.json", "-o", "cs.json"],
        &[
            "decrypt",
            "--problem",
            "cp.json",
            "--key",
            "ck.json",
            "--solution",
            "cs.json",
            "-o",
            "cr.json",
        ],
    ];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut stdouts = [Vec::new(), Vec::new()];
    for (d, dir) in dirs.iter().enumerate() {
        for args in &runs {
            let out = lpmask(dir.path(), args);
            ensure(out.status.code() == Some(0), || {
                format!(
                    "{args:?}: exit {:?}: {}",
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                )
            })?;
            stdouts[d].push(out.stdout);
        }
    }
    ensure(stdouts[0] == stdouts[1], || {
        "stdout differs between runs".into()
    })?;
    let mut files = 0;
    for entry in std::fs::read_dir(dirs[0].path()).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(dirs[0].path().join(&name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(&name)).map_err(|e| format!("{name:?}: {e}"))?;
        ensure(a == b, || format!("{name:?} differs"))?;
        files += 1;
    }
    ensure(files == 13, || {
        format!("expected 13 output files, saw {files}")
    })?;
    Ok(format!(
        "{} commands, {files} files byte-identical",
        runs.len()
    ))
}

fn termination() -> Check {
    let mut solves = 0;
    let mut worst = 0.0f64;
    let mut note = |pivots: usize, bound: u128, what: &dyn Fn() -> String| -> Result<(), String> {
        ensure((pivots as u128) < bound, || {
            format!("{}: {pivots} pivots, bound {bound}", what())
        })?;
        worst = worst.max(pivots as f64 / bound as f64);
        solves += 1;
        Ok(())
    };
    for seed in 0..1000 {
        let lp = random_general_lp(split_seed(LP_SEED, seed, 0));
        let out = solve_general(&lp);
        note(out.pivots_used, split_pivot_bound(&lp), &|| {
            format!("general lp {seed}")
        })?;
    }
    for mode in [BMode::IdentityB, BMode::RandomB] {
        for (m, n) in [(1, 3), (2, 4), (3, 5), (2, 6)] {
            for r in audit_trials(m, n, 100, AUDIT_SEED, mode) {
                let t = match r {
                    Ok(t) => t,
                    Err(e @ AuditError::Invariant(_)) => return Err(e.to_string()),
                    Err(_) => continue,
                };
                let label = || format!("{mode:?} {m}x{n} seed {:?}", t.seed);
                note(
                    t.server_outcome.pivots_used,
                    pivot_bound(&masked_as_general(&t.masked, true)),
                    &label,
                )?;
                note(
                    t.true_outcome.pivots_used,
                    pivot_bound(&peculiar_as_general(&t.problem, true)),
                    &label,
                )?;
            }
        }
    }
    let t = builtin_counterexample();
    note(
        t.server_outcome.pivots_used,
        pivot_bound(&masked_as_general(&t.masked, true)),
        &|| "builtin".into(),
    )?;
    Ok(format!(
        "{solves} solves under the bound, worst pivots/bound {worst:.4}"
    ))
}

fn main() {
    let triples = triples(500);
    let criteria: Vec<Criterion> = vec![
        (
            "builtin counterexample",
            Box::new(builtin_counterexample_reproduces),
        ),
        (
            "feasibility bijection",
            Box::new(|| feasibility_bijection(&triples)),
        ),
        (
            "objective relation",
            Box::new(|| objective_relation(&triples)),
        ),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("flaw prevalence", Box::new(flaw_prevalence)),
        ("partial feasibility", Box::new(partial_feasibility)),
        (
            "nonnegativity not preserved",
            Box::new(nonneg_non_preservation),
        ),
        (
            "positive-diagonal exception",
            Box::new(positive_diagonal_exception),
        ),
        ("determinism", Box::new(determinism)),
        ("termination", Box::new(termination)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
