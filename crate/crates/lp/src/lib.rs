//! Exact rational LP feasibility and optimization with Farkas certificates.
//!
//! The solver is a textbook two-phase primal simplex over exact rationals
//! with Bland's pivoting rule, so every run terminates and is bit-for-bit
//! reproducible. Infeasible systems come back with a [`FarkasCertificate`]:
//! nonnegative multipliers over the system's normalized `≤`-form rows whose
//! combination cancels every variable and leaves a negative right-hand side,
//! an explicit derivation of `0 ≤ negative`. Certificates are validated by
//! [`check_certificate`] in exact arithmetic, independently of how the
//! solver found them.
//!
//! The normalized row frame is part of the wire contract (proof files store
//! multipliers positionally): first every constraint in declaration order
//! (`≤` rows as-is, `≥` rows negated, `=` rows split into a `≤`/`≥` pair),
//! then for each variable with declared bounds an upper row `x ≤ hi`
//! followed by a lower row `-x ≤ -lo`.
//!
//! Each solve owns its tableau; concurrent solves on different systems are
//! safe.

mod simplex;
mod system;

pub use simplex::{optimize, solve_feasibility, Feasibility, Optimum, Sense};
pub use system::{Constraint, LinearSystem, NormalRow, Rel, RowOrigin};

use relucert_numerics::Rational;
use serde::{Deserialize, Serialize};

/// Errors for malformed solver inputs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Nonnegative multipliers over the normalized rows of a [`LinearSystem`],
/// witnessing infeasibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

/// Validates a certificate against a system in exact arithmetic.
///
/// Returns `Ok(true)` iff the multipliers are nonnegative, the weighted
/// coefficient sum is the zero vector, and the weighted right-hand-side sum
/// is strictly negative. The multiplier count must match the system's
/// normalized row count.
pub fn check_certificate(
    sys: &LinearSystem,
    cert: &FarkasCertificate,
) -> Result<bool, LpError> {
    let rows = sys.normalized();
    if cert.multipliers.len() != rows.len() {
        return Err(LpError::DimensionMismatch {
            expected: rows.len(),
            got: cert.multipliers.len(),
        });
    }
    if cert.multipliers.iter().any(Rational::is_negative) {
        return Ok(false);
    }
    let mut coeff_sum = vec![Rational::zero(); sys.num_vars()];
    let mut rhs_sum = Rational::zero();
    for (row, lambda) in rows.iter().zip(cert.multipliers.iter()) {
        if lambda.is_zero() {
            continue;
        }
        for (j, c) in row.coeffs_iter() {
            coeff_sum[j] += &(lambda * c);
        }
        rhs_sum += &(lambda * &row.rhs);
    }
    Ok(coeff_sum.iter().all(Rational::is_zero) && rhs_sum.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use relucert_numerics::Interval;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn one_variable_contradiction_yields_unit_multipliers() {
        // x >= 1 and x <= 0
        let mut sys = LinearSystem::new(1);
        sys.push(vec![r("1")], Rel::Ge, r("1")).unwrap();
        sys.push(vec![r("1")], Rel::Le, r("0")).unwrap();

        match solve_feasibility(&sys).unwrap() {
            Feasibility::Infeasible(cert) => {
                assert!(check_certificate(&sys, &cert).unwrap());
                // The combination derives -1 >= 0 with both rows active.
                assert!(cert.multipliers.iter().all(|m| !m.is_negative()));
                assert!(cert.multipliers.iter().any(|m| m.is_positive()));

                let mut broken = cert.clone();
                broken.multipliers[0] = -broken.multipliers[0].clone();
                assert!(!check_certificate(&sys, &broken).unwrap());
            }
            Feasibility::Feasible(p) => panic!("expected infeasible, got {p:?}"),
        }
    }

    #[test]
    fn narrow_band_is_feasible() {
        let mut sys = LinearSystem::new(1);
        sys.push(vec![r("1")], Rel::Ge, r("0.9")).unwrap();
        sys.push(vec![r("1")], Rel::Le, r("1.1")).unwrap();
        match solve_feasibility(&sys).unwrap() {
            Feasibility::Feasible(p) => {
                assert!(r("0.9") <= p[0] && p[0] <= r("1.1"));
                assert!(sys.satisfied_by(&p).unwrap());
            }
            Feasibility::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn certificate_with_wrong_length_is_a_dimension_error() {
        let mut sys = LinearSystem::new(1);
        sys.push(vec![r("1")], Rel::Le, r("0")).unwrap();
        let cert = FarkasCertificate {
            multipliers: vec![r("1"), r("1")],
        };
        assert!(check_certificate(&sys, &cert).is_err());
    }

    #[test]
    fn bound_rows_participate_in_certificates() {
        // x1 + x2 <= -10 with x1, x2 in [0, 1]: infeasible only together
        // with the lower-bound rows.
        let mut sys = LinearSystem::new(2);
        sys.set_bound(0, Interval::new(r("0"), r("1")).unwrap());
        sys.set_bound(1, Interval::new(r("0"), r("1")).unwrap());
        sys.push(vec![r("1"), r("1")], Rel::Le, r("-10")).unwrap();
        match solve_feasibility(&sys).unwrap() {
            Feasibility::Infeasible(cert) => {
                assert!(check_certificate(&sys, &cert).unwrap());
            }
            Feasibility::Feasible(_) => panic!("expected infeasible"),
        }
    }
}
