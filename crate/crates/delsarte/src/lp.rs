//! Delsarte primal/dual linear programs and an exact rational simplex.
//!
//! The solver is a dense two-phase tableau simplex over [`Rat`] with Bland's
//! anti-cycling rule (entering: lowest eligible index; leaving: lowest basis
//! variable among minimum-ratio ties), so every solve terminates and repeated
//! runs return identical solutions. The dual program is built independently
//! from its own definition rather than by mechanically transposing the primal
//! tableau, which makes primal/dual agreement a genuine cross-check of the
//! Q-number tables.

use crate::exactq::Rat;
use crate::schemes::SchemeSpec;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpRow {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

/// An LP in the Delsarte shape. Variables fixed by the scheme context
/// (`x_0 = 1`, `x_i = 0` off the distance set) are substituted out before
/// this structure is built; `objective_offset` carries their contribution.
#[derive(Debug, Clone, Serialize)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub sense: Sense,
    pub objective: Vec<Rat>,
    pub objective_offset: Rat,
    pub rows: Vec<LpRow>,
    pub nonneg_vars: BTreeSet<usize>,
    /// Class/eigenspace index each variable stands for, where applicable.
    pub var_labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Includes the objective offset; meaningful only when `Optimal`.
    pub objective_value: Rat,
    pub variable_values: Vec<Rat>,
    /// Indices of rows satisfied with equality at the optimum.
    pub active_constraints: BTreeSet<usize>,
}

impl LinearProgram {
    fn infeasible(&self) -> LpSolution {
        LpSolution {
            status: LpStatus::Infeasible,
            objective_value: Rat::zero(),
            variable_values: vec![Rat::zero(); self.num_vars],
            active_constraints: BTreeSet::new(),
        }
    }

    fn unbounded(&self) -> LpSolution {
        LpSolution {
            status: LpStatus::Unbounded,
            objective_value: Rat::zero(),
            variable_values: vec![Rat::zero(); self.num_vars],
            active_constraints: BTreeSet::new(),
        }
    }
}

/// Solve exactly. Deterministic: identical inputs give bitwise-identical
/// solutions.
pub fn solve_exact(lp: &LinearProgram) -> LpSolution {
    // Free variables are split as x = x+ - x-; column j of the working
    // problem maps to (original var, sign).
    let mut col_map: Vec<(usize, i64)> = Vec::new();
    for v in 0..lp.num_vars {
        col_map.push((v, 1));
        if !lp.nonneg_vars.contains(&v) {
            col_map.push((v, -1));
        }
    }
    let structural = col_map.len();

    // Normalize rows to nonnegative rhs.
    let mut rows: Vec<(Vec<Rat>, Relation, Rat)> = Vec::with_capacity(lp.rows.len());
    for row in &lp.rows {
        let mut coeffs: Vec<Rat> = col_map
            .iter()
            .map(|&(v, s)| {
                if s > 0 {
                    row.coeffs[v].clone()
                } else {
                    -&row.coeffs[v]
                }
            })
            .collect();
        let mut rel = row.relation;
        let mut rhs = row.rhs.clone();
        if rhs.is_negative() {
            for c in &mut coeffs {
                *c = -&*c;
            }
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push((coeffs, rel, rhs));
    }

    let m = rows.len();
    // Column layout: structural | slacks/surplus | artificials.
    let mut num_slack = 0usize;
    for (_, rel, _) in &rows {
        if !matches!(rel, Relation::Eq) {
            num_slack += 1;
        }
    }
    let mut num_art = 0usize;
    for (_, rel, _) in &rows {
        if !matches!(rel, Relation::Le) {
            num_art += 1;
        }
    }
    let total = structural + num_slack + num_art;
    let art_start = structural + num_slack;

    let mut tableau: Vec<Vec<Rat>> = vec![vec![Rat::zero(); total + 1]; m];
    let mut basis: Vec<usize> = vec![0; m];
    let mut slack_of_row: Vec<Option<usize>> = vec![None; m];
    {
        let mut s = structural;
        let mut a = art_start;
        for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            for (j, c) in coeffs.iter().enumerate() {
                tableau[r][j] = c.clone();
            }
            tableau[r][total] = rhs.clone();
            match rel {
                Relation::Le => {
                    tableau[r][s] = Rat::one();
                    basis[r] = s;
                    slack_of_row[r] = Some(s);
                    s += 1;
                }
                Relation::Ge => {
                    tableau[r][s] = -Rat::one();
                    slack_of_row[r] = Some(s);
                    s += 1;
                    tableau[r][a] = Rat::one();
                    basis[r] = a;
                    a += 1;
                }
                Relation::Eq => {
                    tableau[r][a] = Rat::one();
                    basis[r] = a;
                    a += 1;
                }
            }
        }
    }

    // Phase 1: maximize -(sum of artificials).
    if num_art > 0 {
        let mut cost = vec![Rat::zero(); total];
        for j in art_start..total {
            cost[j] = -Rat::one();
        }
        let opt = run_simplex(&mut tableau, &mut basis, &cost, Some(art_start));
        debug_assert!(opt.is_some(), "phase 1 is bounded by construction");
        let phase1: Rat = basis
            .iter()
            .zip(tableau.iter())
            .map(|(&b, row)| {
                if b >= art_start {
                    row[total].clone()
                } else {
                    Rat::zero()
                }
            })
            .sum();
        if !phase1.is_zero() {
            return lp.infeasible();
        }
        // Drive remaining artificials out of the basis; a row with no
        // eligible pivot is redundant and dropped.
        let mut r = 0;
        while r < tableau.len() {
            if basis[r] >= art_start {
                let pivot_col = (0..art_start).find(|&j| !tableau[r][j].is_zero());
                match pivot_col {
                    Some(j) => pivot(&mut tableau, &mut basis, r, j),
                    None => {
                        tableau.remove(r);
                        basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in tableau.iter_mut() {
            row.drain(art_start..total);
        }
    }

    // Phase 2.
    let mut cost = vec![Rat::zero(); art_start];
    for (j, &(v, s)) in col_map.iter().enumerate() {
        let c = if s > 0 {
            lp.objective[v].clone()
        } else {
            -&lp.objective[v]
        };
        cost[j] = match lp.sense {
            Sense::Maximize => c,
            Sense::Minimize => -c,
        };
    }
    if run_simplex(&mut tableau, &mut basis, &cost, None).is_none() {
        return lp.unbounded();
    }

    let width = tableau.first().map_or(art_start + 1, |r| r.len());
    let mut values = vec![Rat::zero(); lp.num_vars];
    for (r, &b) in basis.iter().enumerate() {
        if b < structural {
            let (v, s) = col_map[b];
            let x = tableau[r][width - 1].clone();
            if s > 0 {
                values[v] += x;
            } else {
                values[v] -= &x;
            }
        }
    }

    let mut objective_value = lp.objective_offset.clone();
    for (v, x) in values.iter().enumerate() {
        objective_value += &(&lp.objective[v] * x);
    }

    let mut active = BTreeSet::new();
    for (idx, row) in lp.rows.iter().enumerate() {
        let lhs: Rat = row
            .coeffs
            .iter()
            .zip(values.iter())
            .map(|(c, x)| c * x)
            .sum();
        if lhs == row.rhs {
            active.insert(idx);
        }
    }

    LpSolution {
        status: LpStatus::Optimal,
        objective_value,
        variable_values: values,
        active_constraints: active,
    }
}

/// Bland-rule simplex on a canonical tableau. Returns `None` on
/// unboundedness. `forbidden_from`: columns at or past this index never enter
/// (used to lock out artificials while driving phase 1).
fn run_simplex(
    tableau: &mut [Vec<Rat>],
    basis: &mut [usize],
    cost: &[Rat],
    forbidden_from: Option<usize>,
) -> Option<()> {
    let m = tableau.len();
    if m == 0 {
        return Some(());
    }
    let width = tableau[0].len();
    let ncols = width - 1;
    loop {
        // Reduced costs r_j = c_j - c_B . column_j.
        let mut entering = None;
        for j in 0..ncols.min(cost.len()) {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if b < cost.len() && !cost[b].is_zero() {
                    r -= &(&cost[b] * &tableau[i][j]);
                }
            }
            if r.is_nonnegative() && !r.is_zero() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            return Some(());
        };
        if let Some(lim) = forbidden_from {
            debug_assert!(j < lim);
        }

        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            let a = &tableau[i][j];
            if a.is_nonnegative() && !a.is_zero() {
                let ratio = &tableau[i][width - 1] / a;
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (r, _) = leave?;
        pivot(tableau, basis, r, j);
    }
}

fn pivot(tableau: &mut [Vec<Rat>], basis: &mut [usize], r: usize, j: usize) {
    let width = tableau[r].len();
    let p = tableau[r][j].clone();
    for c in tableau[r].iter_mut() {
        *c /= &p;
    }
    for i in 0..tableau.len() {
        if i == r {
            continue;
        }
        let f = tableau[i][j].clone();
        if f.is_zero() {
            continue;
        }
        for c in 0..width {
            let delta = &f * &tableau[r][c];
            tableau[i][c] -= &delta;
        }
    }
    basis[r] = j;
}

/// The Delsarte primal for a `D`-code: maximize `sum x_i` subject to
/// `x_0 = 1`, `x_i = 0` off `D`, `x_i >= 0`, and `sum_i Q_k(i) x_i >= 0` for
/// `k = 1..n`. Fixed variables are substituted out.
pub fn build_primal(spec: &SchemeSpec, dist: &BTreeSet<usize>) -> LinearProgram {
    debug_assert!(dist.iter().all(|&i| 1 <= i && i <= spec.n));
    let vars: Vec<usize> = dist.iter().copied().collect();
    let rows = (1..=spec.n)
        .map(|k| LpRow {
            coeffs: vars.iter().map(|&i| spec.q_number(k, i)).collect(),
            relation: Relation::Ge,
            rhs: -spec.multiplicity(k),
        })
        .collect();
    LinearProgram {
        num_vars: vars.len(),
        sense: Sense::Maximize,
        objective: vec![Rat::one(); vars.len()],
        objective_offset: Rat::one(),
        rows,
        nonneg_vars: (0..vars.len()).collect(),
        var_labels: vars.iter().map(|i| format!("x{i}")).collect(),
    }
}

/// The Delsarte dual: minimize `sum mu_k y_k` subject to `y_0 = 1`,
/// `y_k >= 0`, and `sum_k Q_k(i) y_k <= 0` for `i` in `D`.
pub fn build_dual(spec: &SchemeSpec, dist: &BTreeSet<usize>) -> LinearProgram {
    debug_assert!(dist.iter().all(|&i| 1 <= i && i <= spec.n));
    let rows = dist
        .iter()
        .map(|&i| LpRow {
            coeffs: (1..=spec.n).map(|k| spec.q_number(k, i)).collect(),
            relation: Relation::Le,
            rhs: -Rat::one(), // Q_0(i) = 1 moved to the right-hand side
        })
        .collect();
    LinearProgram {
        num_vars: spec.n,
        sense: Sense::Minimize,
        objective: (1..=spec.n).map(|k| spec.multiplicity(k)).collect(),
        objective_offset: Rat::one(), // mu_0 y_0
        rows,
        nonneg_vars: (0..spec.n).collect(),
        var_labels: (1..=spec.n).map(|k| format!("y{k}")).collect(),
    }
}

/// LP optimum for d-codes, `D = {d, ..., n}`.
pub fn lp_opt(spec: &SchemeSpec, d: usize) -> Rat {
    assert!(1 <= d && d <= spec.n, "d = {d} out of range 1..={}", spec.n);
    lp_opt_set(spec, &(d..=spec.n).collect())
}

/// LP optimum for an arbitrary distance set.
pub fn lp_opt_set(spec: &SchemeSpec, dist: &BTreeSet<usize>) -> Rat {
    let sol = solve_exact(&build_primal(spec, dist));
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "Delsarte primal is always feasible and bounded"
    );
    sol.objective_value
}

/// Expand the solved primal variables into a full length-(n+1) class vector
/// (`x_0 = 1`, zeros off the distance set).
pub fn primal_solution_vector(
    spec: &SchemeSpec,
    dist: &BTreeSet<usize>,
    sol: &LpSolution,
) -> Vec<Rat> {
    let mut full = vec![Rat::zero(); spec.n + 1];
    full[0] = Rat::one();
    for (slot, &i) in dist.iter().enumerate() {
        full[i] = sol.variable_values[slot].clone();
    }
    full
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("degenerate certificate: F_0 = 0")]
    DegenerateCertificate,
}

/// Outcome of pushing a polynomial through the dual-feasibility machinery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolynomialBound {
    pub feasible: bool,
    /// Normalized expansion coefficients `F_k / F_0`.
    pub coefficients: Vec<Rat>,
    /// `F(z_0) / F_0`, an upper bound on `LP(D)` when feasible.
    pub objective: Rat,
}

/// Evaluate a polynomial (coefficients in ascending degree) at `z`.
pub fn eval_poly(coeffs: &[Rat], z: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Coefficients of `prod_{i=d}^{n} (z - z_i)` over the scheme's Q-polynomial
/// points, ascending degree.
pub fn singleton_polynomial(points: &[Rat], d: usize) -> Vec<Rat> {
    let mut coeffs = vec![Rat::one()];
    for z in &points[d..] {
        let mut next = vec![Rat::zero(); coeffs.len() + 1];
        for (deg, c) in coeffs.iter().enumerate() {
            next[deg + 1] += c;
            next[deg] -= &(c * z);
        }
        coeffs = next;
    }
    coeffs
}

/// Expand `F` in the dual eigenbasis via `F_k = (1/|X|) sum_i F(z_i) P_i(k)`,
/// normalize by `F_0`, and check dual feasibility (`F_k/F_0 >= 0` for
/// `k >= 1`, `F(z_i)/F_0 <= 0` on `D`). Returns the verdict, the normalized
/// coefficient vector, and the objective `F(z_0)/F_0`.
pub fn dual_bound_from_polynomial(
    spec: &SchemeSpec,
    poly: &[Rat],
    dist: &BTreeSet<usize>,
) -> Result<PolynomialBound, CertificateError> {
    let z = spec.z_points();
    let values: Vec<Rat> = z.iter().map(|zi| eval_poly(poly, zi)).collect();
    let x = spec.x_size();
    let coeffs: Vec<Rat> = (0..=spec.n)
        .map(|k| {
            let s: Rat = (0..=spec.n)
                .map(|i| &values[i] * &spec.p_number(i, k))
                .sum();
            s / &x
        })
        .collect();
    if coeffs[0].is_zero() {
        return Err(CertificateError::DegenerateCertificate);
    }
    let f0 = coeffs[0].clone();
    let normalized: Vec<Rat> = coeffs.iter().map(|c| c / &f0).collect();
    let feasible = normalized[1..].iter().all(|c| c.is_nonnegative())
        && dist.iter().all(|&i| (&values[i] / &f0) <= Rat::zero());
    let objective = &values[0] / &f0;
    Ok(PolynomialBound {
        feasible,
        coefficients: normalized,
        objective,
    })
}
