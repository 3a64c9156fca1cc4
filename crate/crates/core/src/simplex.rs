//! Exact two-phase tableau simplex with Bland's rule, plus a brute-force
//! vertex-enumeration oracle used to cross-check it.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::model::{GeneralLP, Sign};
use crate::numerics::{solve_unique, RatMatrix, RatVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Optimal {
        x: RatVector,
        value: Rational,
    },
    Infeasible,
    /// `ray` is a feasible direction along which the objective strictly decreases.
    Unbounded {
        ray: RatVector,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub pivots_used: usize,
}

impl SolveOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self.verdict, Verdict::Optimal { .. })
    }

    pub fn x_opt(&self) -> Option<&RatVector> {
        match &self.verdict {
            Verdict::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match &self.verdict {
            Verdict::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn ray(&self) -> Option<&RatVector> {
        match &self.verdict {
            Verdict::Unbounded { ray } => Some(ray),
            _ => None,
        }
    }

    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::Optimal { .. } => "Optimal",
            Verdict::Infeasible => "Infeasible",
            Verdict::Unbounded { .. } => "Unbounded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("variable {index} is free; solve_nonneg requires every variable to be nonnegative (use solve_general)")]
    FreeVariable { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    One,
    Two,
}

/// Dense simplex tableau in canonical form with respect to `basis`.
#[derive(Debug, Clone)]
pub struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs, one per column.
    cost: Vec<Rational>,
    /// Negated objective value of the current basic solution.
    cost_rhs: Rational,
    basis: Vec<usize>,
    phase: Phase,
    pivots: usize,
}

enum StepResult {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.cost_rhs -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
        self.pivots += 1;
        debug_assert!(self.rhs.iter().all(|v| !v.is_negative()));
    }

    /// Bland's rule: lowest-index improving column enters; among minimum
    /// ratio ties the row whose basic variable has the lowest index leaves.
    fn step(&mut self, allowed_cols: usize) -> Option<StepResult> {
        let Some(enter) = (0..allowed_cols).find(|&j| self.cost[j].is_negative()) else {
            return Some(StepResult::Optimal);
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / a;
            let better = match &leave {
                None => true,
                Some((li, best)) => {
                    ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        match leave {
            None => Some(StepResult::Unbounded(enter)),
            Some((r, _)) => {
                self.pivot(r, enter);
                None
            }
        }
    }

    fn run(&mut self, allowed_cols: usize) -> StepResult {
        loop {
            if let Some(result) = self.step(allowed_cols) {
                return result;
            }
        }
    }

    fn primal(&self, n: usize) -> RatVector {
        let mut x = RatVector::zeros(n);
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    fn ray(&self, enter: usize, n: usize) -> RatVector {
        let mut d = RatVector::zeros(n);
        if enter < n {
            d[enter] = Rational::one();
        }
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                d[b] = -self.rows[i][enter].clone();
            }
        }
        d
    }
}

/// Two-phase simplex for a problem whose variables are all nonnegative.
///
/// Inequality rows `G x ≥ 0` get a surplus column each (written as
/// `−G x + s = 0` so the surplus starts basic); equality rows get an
/// artificial column for phase one.
pub fn solve_nonneg(p: &GeneralLP) -> Result<SolveOutcome, SolveError> {
    if let Some(index) = p.sign.iter().position(|s| *s == Sign::Free) {
        return Err(SolveError::FreeVariable { index });
    }
    let n = p.n();
    let k = p.a_eq.rows();
    let g = p.g_ineq.rows();
    let structural = n + g;
    let width = structural + k;

    let mut rows = Vec::with_capacity(k + g);
    let mut rhs = Vec::with_capacity(k + g);
    let mut basis = Vec::with_capacity(k + g);
    for i in 0..k {
        let flip = p.b_eq[i].is_negative();
        let mut row = vec![Rational::zero(); width];
        for (cell, a) in row.iter_mut().zip(p.a_eq.row(i)) {
            *cell = if flip { -a.clone() } else { a.clone() };
        }
        row[structural + i] = Rational::one();
        rows.push(row);
        rhs.push(p.b_eq[i].abs());
        basis.push(structural + i);
    }
    for i in 0..g {
        let mut row = vec![Rational::zero(); width];
        for (cell, a) in row.iter_mut().zip(p.g_ineq.row(i)) {
            *cell = -a.clone();
        }
        row[n + i] = Rational::one();
        rows.push(row);
        rhs.push(Rational::zero());
        basis.push(n + i);
    }

    // Phase one minimizes the sum of artificials.
    let mut cost = vec![Rational::zero(); width];
    let mut cost_rhs = Rational::zero();
    for i in 0..k {
        for j in 0..structural {
            cost[j] -= &rows[i][j];
        }
        cost_rhs -= &rhs[i];
    }
    let mut t = Tableau {
        rows,
        rhs,
        cost,
        cost_rhs,
        basis,
        phase: Phase::One,
        pivots: 0,
    };

    if k > 0 {
        // Bounded below by zero, so phase one always ends at an optimum.
        let _ = t.run(structural);
        if !t.cost_rhs.is_zero() {
            return Ok(SolveOutcome {
                verdict: Verdict::Infeasible,
                pivots_used: t.pivots,
            });
        }
        drive_out_artificials(&mut t, structural);
    }

    // Phase two on the structural columns only.
    for row in t.rows.iter_mut() {
        row.truncate(structural);
    }
    t.phase = Phase::Two;
    t.cost = vec![Rational::zero(); structural];
    for j in 0..n {
        t.cost[j] = p.c[j].clone();
    }
    t.cost_rhs = Rational::zero();
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        if t.cost[b].is_zero() {
            continue;
        }
        let f = t.cost[b].clone();
        for j in 0..structural {
            if !t.rows[i][j].is_zero() {
                let delta = &f * &t.rows[i][j];
                t.cost[j] -= delta;
            }
        }
        t.cost_rhs -= &f * &t.rhs[i];
    }

    let verdict = match t.run(structural) {
        StepResult::Optimal => {
            let x = t.primal(n);
            let value = p.objective(&x);
            Verdict::Optimal { x, value }
        }
        StepResult::Unbounded(enter) => Verdict::Unbounded {
            ray: t.ray(enter, n),
        },
    };
    Ok(SolveOutcome {
        verdict,
        pivots_used: t.pivots,
    })
}

/// After a zero-valued phase one, pivots every artificial still in the
/// basis onto a structural column, or drops its row when the row is
/// redundant.
fn drive_out_artificials(t: &mut Tableau, structural: usize) {
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] < structural {
            i += 1;
            continue;
        }
        match (0..structural).find(|&j| !t.rows[i][j].is_zero()) {
            Some(j) => {
                t.pivot(i, j);
                i += 1;
            }
            None => {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
            }
        }
    }
}

/// Solves any [`GeneralLP`] by splitting each free variable into the
/// difference of two nonnegative ones.
pub fn solve_general(p: &GeneralLP) -> SolveOutcome {
    let n = p.n();
    // Column of x⁺ for each variable, and of x⁻ for free ones.
    let mut pos = Vec::with_capacity(n);
    let mut neg = vec![None; n];
    let mut cols = 0;
    for (i, s) in p.sign.iter().enumerate() {
        pos.push(cols);
        cols += 1;
        if *s == Sign::Free {
            neg[i] = Some(cols);
            cols += 1;
        }
    }
    let split = |m: &RatMatrix| -> RatMatrix {
        let mut out = RatMatrix::zeros(m.rows(), cols);
        for r in 0..m.rows() {
            for i in 0..n {
                out[(r, pos[i])] = m[(r, i)].clone();
                if let Some(j) = neg[i] {
                    out[(r, j)] = -m[(r, i)].clone();
                }
            }
        }
        out
    };
    let c_split = split(&RatMatrix::new(1, n, p.c.as_slice().to_vec()).expect("1 x n"));
    let lp = GeneralLP::new(
        c_split.row_vector(0),
        split(&p.a_eq),
        p.b_eq.clone(),
        split(&p.g_ineq),
        vec![Sign::Nonnegative; cols],
    )
    .expect("split shape is consistent");
    let out = solve_nonneg(&lp).expect("split problem has no free variables");
    let merge = |v: &RatVector| -> RatVector {
        (0..n)
            .map(|i| match neg[i] {
                Some(j) => &v[pos[i]] - &v[j],
                None => v[pos[i]].clone(),
            })
            .collect()
    };
    let verdict = match out.verdict {
        Verdict::Optimal { x, .. } => {
            let x = merge(&x);
            let value = p.objective(&x);
            Verdict::Optimal { x, value }
        }
        Verdict::Infeasible => Verdict::Infeasible,
        Verdict::Unbounded { ray } => Verdict::Unbounded { ray: merge(&ray) },
    };
    SolveOutcome {
        verdict,
        pivots_used: out.pivots_used,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("vertex enumeration refused: {n} variables exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },
}

/// Brute-force LP oracle: enumerates every basic solution and every basic
/// direction. Exponential, so it refuses problems above `max_vars`.
#[derive(Debug, Clone, Copy)]
pub struct VertexOracle {
    pub max_vars: usize,
}

impl Default for VertexOracle {
    fn default() -> Self {
        VertexOracle { max_vars: 6 }
    }
}

impl VertexOracle {
    pub fn solve(&self, p: &GeneralLP) -> Result<SolveOutcome, OracleError> {
        let n = p.n();
        if n > self.max_vars {
            return Err(OracleError::TooLarge {
                n,
                max: self.max_vars,
            });
        }
        // All `≥ 0` rows: G, then a unit row per sign-restricted variable.
        let mut h_rows = p.g_ineq.to_rows();
        for (i, s) in p.sign.iter().enumerate() {
            if *s == Sign::Nonnegative {
                h_rows.push(RatVector::unit(n, i).into_inner());
            }
        }
        let h = RatMatrix::from_rows(n, h_rows).expect("rows have width n");

        // Quotient out the lineality space so the polyhedron is pointed.
        let lineality = p.a_eq.vstack(&h).expect("width n").null_space();
        let mut eq = p.a_eq.clone();
        let mut eq_rhs = p.b_eq.clone().into_inner();
        for l in &lineality {
            eq = eq
                .vstack(&RatMatrix::new(1, n, l.as_slice().to_vec()).expect("1 x n"))
                .expect("width n");
            eq_rhs.push(Rational::zero());
        }
        let eq_rhs = RatVector::new(eq_rhs);
        let rank = eq.rank();

        let mut best: Option<(RatVector, Rational)> = None;
        for subset in combinations(h.rows(), n - rank) {
            let system = eq.vstack(&h.select_rows(&subset)).expect("width n");
            let mut rhs = eq_rhs.clone().into_inner();
            rhs.extend(std::iter::repeat_n(Rational::zero(), subset.len()));
            let Some(x) = solve_unique(&system, &RatVector::new(rhs)) else {
                continue;
            };
            if !h.mul_vec(&x).expect("width n").is_nonneg() {
                continue;
            }
            let value = p.objective(&x);
            if best.as_ref().is_none_or(|(_, v)| value < *v) {
                best = Some((x, value));
            }
        }
        let Some((x, value)) = best else {
            return Ok(SolveOutcome {
                verdict: Verdict::Infeasible,
                pivots_used: 0,
            });
        };

        for l in &lineality {
            let slope = p.objective(l);
            if !slope.is_zero() {
                let ray = if slope.is_negative() {
                    l.clone()
                } else {
                    l.neg()
                };
                return Ok(SolveOutcome {
                    verdict: Verdict::Unbounded { ray },
                    pivots_used: 0,
                });
            }
        }

        // Extreme rays of the recession cone have n − 1 independent active rows.
        if rank < n {
            for subset in combinations(h.rows(), n - rank - 1) {
                let system = eq.vstack(&h.select_rows(&subset)).expect("width n");
                let dirs = system.null_space();
                if dirs.len() != 1 {
                    continue;
                }
                for d in [dirs[0].clone(), dirs[0].neg()] {
                    if h.mul_vec(&d).expect("width n").is_nonneg() && p.objective(&d).is_negative()
                    {
                        return Ok(SolveOutcome {
                            verdict: Verdict::Unbounded { ray: d },
                            pivots_used: 0,
                        });
                    }
                }
            }
        }

        Ok(SolveOutcome {
            verdict: Verdict::Optimal { x, value },
            pivots_used: 0,
        })
    }
}

/// [`VertexOracle`] with the default limit of six variables.
pub fn enumerate_optimum(p: &GeneralLP) -> Result<SolveOutcome, OracleError> {
    VertexOracle::default().solve(p)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `C(total_columns, rows)` of the phase-one tableau [`solve_nonneg`]
/// builds for `p`: the number of candidate bases.
pub fn pivot_bound(p: &GeneralLP) -> u128 {
    let rows = p.a_eq.rows() + p.g_ineq.rows();
    let cols = p.n() + p.g_ineq.rows() + p.a_eq.rows();
    binomial(cols, rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("infeasibility could not be verified: {0}")]
    Unverified(OracleError),
}

/// Checks an outcome against the problem it claims to solve.
///
/// Optimal points and unbounded rays are verified directly. Infeasibility
/// is confirmed with [`enumerate_optimum`]; when the instance is too large
/// for it the result is [`CertificateError::Unverified`].
pub fn check_certificate(p: &GeneralLP, out: &SolveOutcome) -> Result<bool, CertificateError> {
    match &out.verdict {
        Verdict::Optimal { x, value } => Ok(p.is_feasible(x) && p.objective(x) == *value),
        Verdict::Unbounded { ray } => {
            if ray.len() != p.n() {
                return Ok(false);
            }
            let eq_ok = p.a_eq.mul_vec(ray).expect("width n").is_zero();
            let ineq_ok = p.g_ineq.mul_vec(ray).expect("width n").is_nonneg();
            let sign_ok = p
                .sign
                .iter()
                .zip(ray.iter())
                .all(|(s, v)| *s == Sign::Free || !v.is_negative());
            Ok(eq_ok && ineq_ok && sign_ok && p.objective(ray).is_negative())
        }
        Verdict::Infeasible => match enumerate_optimum(p) {
            Ok(o) => Ok(o.verdict == Verdict::Infeasible),
            Err(e) => Err(CertificateError::Unverified(e)),
        },
    }
}
