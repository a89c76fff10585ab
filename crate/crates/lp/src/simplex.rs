//! Two-phase primal simplex over exact rationals with Bland's rule.
//!
//! The solver works on a shifted standard form: every bounded variable
//! `x ∈ [lo, hi]` becomes a nonnegative column `x̂ = x - lo` with an explicit
//! upper-bound row, free variables split into a difference of two
//! nonnegative columns, and fixed variables (`lo = hi`) are substituted away
//! before the tableau is built. Every row receives an artificial variable;
//! phase one minimizes their sum. A positive phase-one optimum certifies
//! infeasibility and the phase-one duals are translated into Farkas
//! multipliers over the system's normalized rows.

use relucert_numerics::Rational;

use crate::system::{LinearSystem, Rel, RowOrigin};
use crate::{FarkasCertificate, LpError};

/// Outcome of a feasibility solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

/// Outcome of an optimization solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Optimum {
    Optimal { value: Rational, point: Vec<Rational> },
    Unbounded,
    Infeasible(FarkasCertificate),
}

/// Objective sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Decides feasibility. Feasible systems yield a point satisfying every
/// constraint and bound exactly; infeasible systems yield a verifying
/// Farkas certificate. Deterministic.
pub fn solve_feasibility(sys: &LinearSystem) -> Result<Feasibility, LpError> {
    let mut solver = Solver::prepare(sys)?;
    match solver.run_phase_one() {
        PhaseOne::Infeasible(cert) => Ok(Feasibility::Infeasible(cert)),
        PhaseOne::Feasible => Ok(Feasibility::Feasible(solver.extract_point())),
    }
}

/// Minimizes or maximizes `objective · x` over the system. Exact optimum
/// with an attaining point, or `Unbounded`, or an infeasibility certificate.
pub fn optimize(
    sys: &LinearSystem,
    objective: &[Rational],
    sense: Sense,
) -> Result<Optimum, LpError> {
    if objective.len() != sys.num_vars() {
        return Err(LpError::DimensionMismatch {
            expected: sys.num_vars(),
            got: objective.len(),
        });
    }
    let mut solver = Solver::prepare(sys)?;
    if let PhaseOne::Infeasible(cert) = solver.run_phase_one() {
        return Ok(Optimum::Infeasible(cert));
    }
    let internal_obj: Vec<Rational> = match sense {
        Sense::Min => objective.to_vec(),
        Sense::Max => objective.iter().map(|c| -c).collect(),
    };
    if !solver.run_phase_two(&internal_obj) {
        return Ok(Optimum::Unbounded);
    }
    let point = solver.extract_point();
    let value: Rational = objective
        .iter()
        .zip(point.iter())
        .map(|(c, v)| c * v)
        .sum();
    Ok(Optimum::Optimal { value, point })
}

/// How an original variable maps onto tableau columns.
#[derive(Debug, Clone)]
enum VarCols {
    /// lo == hi; substituted away before the tableau is built.
    Fixed(Rational),
    /// Bounded below: column holds `x - lo`.
    Shifted { col: usize, lo: Rational },
    /// Free: `x = pos - neg`.
    Free { pos: usize, neg: usize },
}

/// Where an internal row's multiplier lands in the normalized frame.
#[derive(Debug, Clone, Copy)]
enum RowTarget {
    /// A `≤`-form row; multiplier must come out nonnegative.
    Le(usize),
    /// An equality row; a signed multiplier splits over the LE/GE pair.
    EqPair { le: usize, ge: usize },
}

struct InternalRow {
    /// Sparse coefficients over tableau variable columns.
    coeffs: Vec<(usize, Rational)>,
    rhs: Rational,
    needs_slack: bool,
    target: RowTarget,
}

enum PhaseOne {
    Feasible,
    Infeasible(FarkasCertificate),
}

struct Solver<'a> {
    sys: &'a LinearSystem,
    vars: Vec<VarCols>,
    num_var_cols: usize,
    /// Normalized index of each bounded variable's (upper, lower) rows.
    bound_rows: Vec<Option<(usize, usize)>>,
    norm_len: usize,
    rows: Vec<InternalRow>,
    /// Trivially violated row discovered during presolve, if any.
    trivial_conflict: Option<(RowTarget, Rational)>,

    // Tableau state (built in run_phase_one).
    tableau: Vec<Vec<Rational>>,
    zrow: Vec<Rational>,
    basis: Vec<usize>,
    sigma: Vec<bool>, // per surviving row: was it negated to make rhs >= 0
    row_targets: Vec<RowTarget>,
    slack_start: usize,
    art_start: usize,
    num_cols: usize,
}

impl<'a> Solver<'a> {
    fn prepare(sys: &'a LinearSystem) -> Result<Self, LpError> {
        for c in sys.constraints() {
            if c.coeffs.len() != sys.num_vars() {
                return Err(LpError::DimensionMismatch {
                    expected: sys.num_vars(),
                    got: c.coeffs.len(),
                });
            }
        }

        // Replicate the normalized-row numbering so internal rows can point
        // at their certificate slots without materializing the rows.
        let mut norm_len = 0usize;
        let mut constraint_slots = Vec::with_capacity(sys.constraints().len());
        for c in sys.constraints() {
            match c.rel {
                Rel::Le | Rel::Ge => {
                    constraint_slots.push((norm_len, norm_len));
                    norm_len += 1;
                }
                Rel::Eq => {
                    constraint_slots.push((norm_len, norm_len + 1));
                    norm_len += 2;
                }
            }
        }
        let mut bound_rows = vec![None; sys.num_vars()];
        for (j, b) in sys.var_bounds().iter().enumerate() {
            if b.is_some() {
                bound_rows[j] = Some((norm_len, norm_len + 1));
                norm_len += 2;
            }
        }

        // Variable columns; fixed variables are substituted away.
        let mut vars = Vec::with_capacity(sys.num_vars());
        let mut num_var_cols = 0usize;
        for bound in sys.var_bounds() {
            match bound {
                Some(iv) if iv.is_singleton() => vars.push(VarCols::Fixed(iv.lo().clone())),
                Some(iv) => {
                    vars.push(VarCols::Shifted {
                        col: num_var_cols,
                        lo: iv.lo().clone(),
                    });
                    num_var_cols += 1;
                }
                None => {
                    vars.push(VarCols::Free {
                        pos: num_var_cols,
                        neg: num_var_cols + 1,
                    });
                    num_var_cols += 2;
                }
            }
        }

        let mut solver = Solver {
            sys,
            vars,
            num_var_cols,
            bound_rows,
            norm_len,
            rows: Vec::new(),
            trivial_conflict: None,
            tableau: Vec::new(),
            zrow: Vec::new(),
            basis: Vec::new(),
            sigma: Vec::new(),
            row_targets: Vec::new(),
            slack_start: 0,
            art_start: 0,
            num_cols: 0,
        };

        // Constraint rows, with fixed variables folded into the rhs and
        // bounded variables shifted to their lower bounds.
        for (i, c) in sys.constraints().iter().enumerate() {
            let (negate, target) = match c.rel {
                Rel::Le => (false, RowTarget::Le(constraint_slots[i].0)),
                Rel::Ge => (true, RowTarget::Le(constraint_slots[i].0)),
                Rel::Eq => (
                    false,
                    RowTarget::EqPair {
                        le: constraint_slots[i].0,
                        ge: constraint_slots[i].1,
                    },
                ),
            };
            let sign = if negate { -Rational::one() } else { Rational::one() };
            let mut coeffs = Vec::new();
            let mut rhs = &sign * &c.rhs;
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = &sign * a;
                match &solver.vars[j] {
                    VarCols::Fixed(v) => rhs -= &(&a * v),
                    VarCols::Shifted { col, lo } => {
                        rhs -= &(&a * lo);
                        coeffs.push((*col, a));
                    }
                    VarCols::Free { pos, neg } => {
                        coeffs.push((*pos, a.clone()));
                        coeffs.push((*neg, -a));
                    }
                }
            }
            let is_eq = matches!(c.rel, Rel::Eq);
            let needs_slack = !is_eq;
            if coeffs.is_empty() {
                // Presolve verdict: `0 REL rhs`.
                let violated = if is_eq { !rhs.is_zero() } else { rhs.is_negative() };
                if violated && solver.trivial_conflict.is_none() {
                    let nu = if is_eq && rhs.is_positive() {
                        // Equality 0 = rhs > 0: the GE half reads 0 <= -rhs.
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    solver.trivial_conflict = Some((target, nu));
                }
                continue;
            }
            solver.rows.push(InternalRow {
                coeffs,
                rhs,
                needs_slack,
                target,
            });
        }

        // Upper-bound rows for shifted variables: x̂ <= hi - lo.
        for (j, bound) in sys.var_bounds().iter().enumerate() {
            if let (Some(iv), VarCols::Shifted { col, lo }) = (bound, &solver.vars[j]) {
                solver.rows.push(InternalRow {
                    coeffs: vec![(*col, Rational::one())],
                    rhs: iv.hi() - lo,
                    needs_slack: true,
                    target: RowTarget::Le(solver.bound_rows[j].unwrap().0),
                });
            }
        }

        Ok(solver)
    }

    fn run_phase_one(&mut self) -> PhaseOne {
        if let Some((target, nu)) = self.trivial_conflict.take() {
            return PhaseOne::Infeasible(self.assemble_certificate(vec![(target, nu)]));
        }

        let m = self.rows.len();
        let num_slacks = self.rows.iter().filter(|r| r.needs_slack).count();
        self.slack_start = self.num_var_cols;
        self.art_start = self.slack_start + num_slacks;
        self.num_cols = self.art_start + m;
        let rhs_col = self.num_cols;

        self.tableau = Vec::with_capacity(m);
        self.sigma = Vec::with_capacity(m);
        self.row_targets = self.rows.iter().map(|r| r.target).collect();
        let mut slack_idx = self.slack_start;
        for (i, row) in self.rows.iter().enumerate() {
            let negate = row.rhs.is_negative();
            let sign = if negate { -Rational::one() } else { Rational::one() };
            let mut t = vec![Rational::zero(); self.num_cols + 1];
            for (col, a) in &row.coeffs {
                t[*col] = &sign * a;
            }
            if row.needs_slack {
                t[slack_idx] = sign.clone();
                slack_idx += 1;
            }
            t[self.art_start + i] = Rational::one();
            t[rhs_col] = &sign * &row.rhs;
            self.tableau.push(t);
            self.sigma.push(negate);
        }
        self.basis = (0..m).map(|i| self.art_start + i).collect();

        // Phase-one reduced costs: c = 1 on artificials, 0 elsewhere, with
        // the all-artificial basis priced out.
        self.zrow = vec![Rational::zero(); self.num_cols + 1];
        for j in 0..=self.num_cols {
            let mut d = if (self.art_start..self.num_cols).contains(&j) {
                Rational::one()
            } else {
                Rational::zero()
            };
            for row in &self.tableau {
                d -= &row[j];
            }
            self.zrow[j] = d;
        }
        // zrow[rhs] now holds -(sum of artificial values) = -objective.

        let unbounded = self.bland_loop();
        debug_assert!(!unbounded, "phase one is bounded below by zero");

        let objective = -self.zrow[rhs_col].clone();
        if objective.is_positive() {
            // Duals: pi_i = 1 - d(artificial_i); row multiplier w = -sigma*pi.
            let mut row_mults = Vec::with_capacity(m);
            for i in 0..m {
                let pi = Rational::one() - &self.zrow[self.art_start + i];
                let w = if self.sigma[i] { pi } else { -pi };
                row_mults.push((self.row_targets[i], w));
            }
            return PhaseOne::Infeasible(self.assemble_certificate(row_mults));
        }
        debug_assert!(objective.is_zero());
        PhaseOne::Feasible
    }

    /// Restores a real objective after a successful phase one and optimizes.
    /// Returns false when the objective is unbounded.
    fn run_phase_two(&mut self, objective: &[Rational]) -> bool {
        let rhs_col = self.num_cols;

        // Drive basic artificials out of the basis; rows where that is
        // impossible are redundant and removed.
        let mut i = 0;
        while i < self.tableau.len() {
            if self.basis[i] >= self.art_start {
                debug_assert!(self.tableau[i][rhs_col].is_zero());
                let entering = (0..self.art_start).find(|&j| !self.tableau[i][j].is_zero());
                match entering {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.tableau.swap_remove(i);
                        self.basis.swap_remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }

        // Objective per tableau column.
        let mut col_cost = vec![Rational::zero(); self.num_cols + 1];
        for (j, var) in self.vars.iter().enumerate() {
            match var {
                VarCols::Fixed(_) => {}
                VarCols::Shifted { col, .. } => col_cost[*col] = objective[j].clone(),
                VarCols::Free { pos, neg } => {
                    col_cost[*pos] = objective[j].clone();
                    col_cost[*neg] = -&objective[j];
                }
            }
        }
        for j in 0..=self.num_cols {
            let mut d = col_cost[j].clone();
            for (row, &b) in self.tableau.iter().zip(self.basis.iter()) {
                if !col_cost[b].is_zero() && !row[j].is_zero() {
                    d -= &(&col_cost[b] * &row[j]);
                }
            }
            self.zrow[j] = d;
        }

        !self.bland_loop()
    }

    /// Pivots until optimality (returns false) or an unbounded entering
    /// column is found (returns true). Bland's rule: the entering column is
    /// the lowest-index one with a negative reduced cost, the leaving row
    /// breaks ratio ties by lowest basic column index. Artificial columns
    /// never re-enter.
    fn bland_loop(&mut self) -> bool {
        let rhs_col = self.num_cols;
        loop {
            let entering = (0..self.art_start).find(|&j| self.zrow[j].is_negative());
            let Some(e) = entering else {
                return false;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.tableau.iter().enumerate() {
                if row[e].is_positive() {
                    let ratio = &row[rhs_col] / &row[e];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, e),
                None => return true,
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.tableau[row][col].clone();
        debug_assert!(!pivot.is_zero());
        let inv = pivot.recip();
        for entry in &mut self.tableau[row] {
            if !entry.is_zero() {
                *entry *= &inv;
            }
        }
        let pivot_row = self.tableau[row].clone();
        for (i, r) in self.tableau.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (entry, p) in r.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *entry -= &(&factor * p);
                }
            }
        }
        if !self.zrow[col].is_zero() {
            let factor = self.zrow[col].clone();
            for (entry, p) in self.zrow.iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *entry -= &(&factor * p);
                }
            }
        }
        self.basis[row] = col;
    }

    fn extract_point(&self) -> Vec<Rational> {
        let rhs_col = self.num_cols;
        let mut col_val = vec![Rational::zero(); self.num_cols];
        for (row, &b) in self.tableau.iter().zip(self.basis.iter()) {
            col_val[b] = row[rhs_col].clone();
        }
        self.vars
            .iter()
            .map(|v| match v {
                VarCols::Fixed(c) => c.clone(),
                VarCols::Shifted { col, lo } => lo + &col_val[*col],
                VarCols::Free { pos, neg } => &col_val[*pos] - &col_val[*neg],
            })
            .collect()
    }

    /// Turns signed internal-row multipliers into a normalized-frame
    /// certificate, then balances each bounded variable's column with its
    /// lower/upper bound rows and checks free variables cancel on their own.
    fn assemble_certificate(&self, row_mults: Vec<(RowTarget, Rational)>) -> FarkasCertificate {
        let mut multipliers = vec![Rational::zero(); self.norm_len];
        for (target, w) in row_mults {
            match target {
                RowTarget::Le(idx) => {
                    debug_assert!(!w.is_negative(), "inequality multiplier must be nonnegative");
                    multipliers[idx] += &w;
                }
                RowTarget::EqPair { le, ge } => {
                    if w.is_positive() {
                        multipliers[le] += &w;
                    } else if w.is_negative() {
                        multipliers[ge] += &-w;
                    }
                }
            }
        }

        // Column sums over everything assigned so far (constraint rows and
        // upper-bound rows reached through internal rows).
        let norm = self.sys.normalized();
        let mut col_sum = vec![Rational::zero(); self.sys.num_vars()];
        for (row, lambda) in norm.iter().zip(multipliers.iter()) {
            if matches!(row.origin, RowOrigin::LowerBound(_)) || lambda.is_zero() {
                continue;
            }
            for (j, c) in row.coeffs_iter() {
                col_sum[j] += &(lambda * c);
            }
        }
        for (j, sum) in col_sum.into_iter().enumerate() {
            match self.bound_rows[j] {
                Some((upper, lower)) => {
                    if sum.is_positive() {
                        multipliers[lower] += &sum;
                    } else if sum.is_negative() {
                        multipliers[upper] += &-sum;
                    }
                }
                None => debug_assert!(
                    sum.is_zero(),
                    "free variable column must cancel in the certificate"
                ),
            }
        }
        FarkasCertificate { multipliers }
    }
}
