use relucert_numerics::{Interval, Rational};
use serde::{Deserialize, Serialize};

use crate::LpError;

/// Relation of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// One linear constraint `coeffs · x REL rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

/// A system of linear constraints over `num_vars` variables, plus optional
/// two-sided bounds per variable. Variables without bounds are free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    num_vars: usize,
    constraints: Vec<Constraint>,
    var_bounds: Vec<Option<Interval>>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            constraints: Vec::new(),
            var_bounds: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn var_bounds(&self) -> &[Option<Interval>] {
        &self.var_bounds
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rel: Rel, rhs: Rational) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                expected: self.num_vars,
                got: coeffs.len(),
            });
        }
        self.constraints.push(Constraint { coeffs, rel, rhs });
        Ok(())
    }

    pub fn set_bound(&mut self, var: usize, interval: Interval) {
        self.var_bounds[var] = Some(interval);
    }

    /// Exact satisfaction check of every constraint and bound.
    pub fn satisfied_by(&self, point: &[Rational]) -> Result<bool, LpError> {
        if point.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        for c in &self.constraints {
            let lhs: Rational = c.coeffs.iter().zip(point.iter()).map(|(a, v)| a * v).sum();
            let ok = match c.rel {
                Rel::Le => lhs <= c.rhs,
                Rel::Ge => lhs >= c.rhs,
                Rel::Eq => lhs == c.rhs,
            };
            if !ok {
                return Ok(false);
            }
        }
        for (bound, v) in self.var_bounds.iter().zip(point.iter()) {
            if let Some(iv) = bound {
                if !iv.contains(v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The certificate frame: every constraint expanded to `≤`-form rows in
    /// declaration order, followed by upper/lower bound rows per bounded
    /// variable. Farkas multipliers index into this list positionally.
    pub fn normalized(&self) -> Vec<NormalRow> {
        let mut rows = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            match c.rel {
                Rel::Le => rows.push(NormalRow::dense(
                    c.coeffs.clone(),
                    c.rhs.clone(),
                    RowOrigin::ConstraintLe(i),
                )),
                Rel::Ge => rows.push(NormalRow::dense(
                    c.coeffs.iter().map(|a| -a).collect(),
                    -&c.rhs,
                    RowOrigin::ConstraintGe(i),
                )),
                Rel::Eq => {
                    rows.push(NormalRow::dense(
                        c.coeffs.clone(),
                        c.rhs.clone(),
                        RowOrigin::ConstraintLe(i),
                    ));
                    rows.push(NormalRow::dense(
                        c.coeffs.iter().map(|a| -a).collect(),
                        -&c.rhs,
                        RowOrigin::ConstraintGe(i),
                    ));
                }
            }
        }
        for (j, bound) in self.var_bounds.iter().enumerate() {
            if let Some(iv) = bound {
                rows.push(NormalRow::unit(
                    self.num_vars,
                    j,
                    Rational::one(),
                    iv.hi().clone(),
                    RowOrigin::UpperBound(j),
                ));
                rows.push(NormalRow::unit(
                    self.num_vars,
                    j,
                    -Rational::one(),
                    -iv.lo(),
                    RowOrigin::LowerBound(j),
                ));
            }
        }
        rows
    }
}

/// Where a normalized row came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOrigin {
    ConstraintLe(usize),
    ConstraintGe(usize),
    UpperBound(usize),
    LowerBound(usize),
}

/// One `coeffs · x ≤ rhs` row of the normalized system. Bound rows are kept
/// sparse (a single unit coefficient) to keep certificate checking cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalRow {
    coeffs: RowCoeffs,
    pub rhs: Rational,
    pub origin: RowOrigin,
    num_vars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum RowCoeffs {
    Dense(Vec<Rational>),
    Unit { var: usize, coeff: Rational },
}

impl NormalRow {
    fn dense(coeffs: Vec<Rational>, rhs: Rational, origin: RowOrigin) -> Self {
        let num_vars = coeffs.len();
        NormalRow {
            coeffs: RowCoeffs::Dense(coeffs),
            rhs,
            origin,
            num_vars,
        }
    }

    fn unit(num_vars: usize, var: usize, coeff: Rational, rhs: Rational, origin: RowOrigin) -> Self {
        NormalRow {
            coeffs: RowCoeffs::Unit { var, coeff },
            rhs,
            origin,
            num_vars,
        }
    }

    pub fn coeff(&self, j: usize) -> Rational {
        match &self.coeffs {
            RowCoeffs::Dense(v) => v[j].clone(),
            RowCoeffs::Unit { var, coeff } => {
                if *var == j {
                    coeff.clone()
                } else {
                    Rational::zero()
                }
            }
        }
    }

    /// Iterates the (index, coefficient) pairs with nonzero coefficients.
    pub fn coeffs_iter(&self) -> Box<dyn Iterator<Item = (usize, &Rational)> + '_> {
        match &self.coeffs {
            RowCoeffs::Dense(v) => {
                Box::new(v.iter().enumerate().filter(|(_, c)| !c.is_zero()))
            }
            RowCoeffs::Unit { var, coeff } => Box::new(std::iter::once((*var, coeff))),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
}
