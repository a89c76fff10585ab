//! Simplex vs. brute force on small boxed systems.
//!
//! The oracle enumerates candidate vertices: every choice of `d` normalized
//! rows is turned into an equality system and solved exactly by Gaussian
//! elimination; a candidate counts when it satisfies the full system. All
//! generated systems carry full box bounds, so the feasible set is a compact
//! polytope and is nonempty iff it has a vertex. The oracle therefore
//! decides feasibility independently of any pivoting logic.

use proptest::prelude::*;
use relucert_lp::{
    check_certificate, optimize, solve_feasibility, Feasibility, LinearSystem, Optimum, Rel,
    Sense,
};
use relucert_numerics::{Interval, Rational};

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Solves `rows · x = rhs` for a square exact system; `None` if singular.
fn gaussian_solve(rows: &[(Vec<Rational>, Rational)]) -> Option<Vec<Rational>> {
    let d = rows.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(coeffs, rhs)| {
            let mut row = coeffs.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    for col in 0..d {
        let pivot_row = (col..d).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot_row);
        let inv = m[col][col].recip();
        for entry in &mut m[col] {
            *entry *= &inv;
        }
        for i in 0..d {
            if i != col && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in 0..=d {
                    let delta = &factor * &m[col][j];
                    m[i][j] -= &delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d].clone()).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Feasibility by candidate-vertex enumeration.
fn oracle_feasible(sys: &LinearSystem) -> bool {
    let d = sys.num_vars();
    let rows: Vec<(Vec<Rational>, Rational)> = sys
        .normalized()
        .iter()
        .map(|row| {
            let coeffs = (0..d).map(|j| row.coeff(j)).collect();
            (coeffs, row.rhs.clone())
        })
        .collect();
    for combo in combinations(rows.len(), d) {
        let subset: Vec<_> = combo.iter().map(|&i| rows[i].clone()).collect();
        if let Some(point) = gaussian_solve(&subset) {
            if sys.satisfied_by(&point).unwrap() {
                return true;
            }
        }
    }
    false
}

/// All candidate vertices that satisfy the system; used to sample feasible
/// points for the optimality bound check.
fn oracle_feasible_points(sys: &LinearSystem) -> Vec<Vec<Rational>> {
    let d = sys.num_vars();
    let rows: Vec<(Vec<Rational>, Rational)> = sys
        .normalized()
        .iter()
        .map(|row| {
            let coeffs = (0..d).map(|j| row.coeff(j)).collect();
            (coeffs, row.rhs.clone())
        })
        .collect();
    let mut points = Vec::new();
    for combo in combinations(rows.len(), d) {
        let subset: Vec<_> = combo.iter().map(|&i| rows[i].clone()).collect();
        if let Some(point) = gaussian_solve(&subset) {
            if sys.satisfied_by(&point).unwrap() {
                points.push(point);
            }
        }
    }
    points
}

#[derive(Debug, Clone)]
struct BoxedSystem {
    bounds: Vec<(i64, i64)>,
    rows: Vec<(Vec<i64>, i64)>,
    objective: Vec<i64>,
}

fn boxed_system(num_vars: usize) -> impl Strategy<Value = BoxedSystem> {
    let bound = (-4i64..=4, 0i64..=5).prop_map(|(lo, w)| (lo, lo + w));
    let row = (
        prop::collection::vec(-3i64..=3, num_vars),
        -6i64..=6,
    );
    (
        prop::collection::vec(bound, num_vars),
        prop::collection::vec(row, 0..=4),
        prop::collection::vec(-3i64..=3, num_vars),
    )
        .prop_map(|(bounds, rows, objective)| BoxedSystem {
            bounds,
            rows,
            objective,
        })
}

fn build(spec: &BoxedSystem) -> LinearSystem {
    let n = spec.bounds.len();
    let mut sys = LinearSystem::new(n);
    for (j, (lo, hi)) in spec.bounds.iter().enumerate() {
        sys.set_bound(j, Interval::new(r(*lo), r(*hi)).unwrap());
    }
    for (coeffs, rhs) in &spec.rows {
        sys.push(coeffs.iter().map(|&c| r(c)).collect(), Rel::Le, r(*rhs))
            .unwrap();
    }
    sys
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn feasibility_matches_vertex_oracle(spec in (1usize..=3).prop_flat_map(boxed_system)) {
        let sys = build(&spec);
        let oracle = oracle_feasible(&sys);
        match solve_feasibility(&sys).unwrap() {
            Feasibility::Feasible(point) => {
                prop_assert!(oracle, "solver feasible but oracle found no vertex");
                prop_assert!(sys.satisfied_by(&point).unwrap(), "feasible point violates system");
            }
            Feasibility::Infeasible(cert) => {
                prop_assert!(!oracle, "solver infeasible but oracle found a vertex");
                prop_assert!(check_certificate(&sys, &cert).unwrap(), "certificate rejected");
            }
        }
    }

    #[test]
    fn optimum_bounds_every_feasible_vertex(spec in (1usize..=3).prop_flat_map(boxed_system)) {
        let sys = build(&spec);
        let objective: Vec<Rational> = spec.objective.iter().map(|&c| r(c)).collect();
        match optimize(&sys, &objective, Sense::Min).unwrap() {
            Optimum::Optimal { value, point } => {
                prop_assert!(sys.satisfied_by(&point).unwrap());
                let at_point: Rational = objective.iter().zip(point.iter()).map(|(c, v)| c * v).sum();
                prop_assert_eq!(&value, &at_point);
                for feasible in oracle_feasible_points(&sys) {
                    let obj: Rational = objective.iter().zip(feasible.iter()).map(|(c, v)| c * v).sum();
                    prop_assert!(value <= obj, "optimum {} exceeds feasible value {}", value, obj);
                }
            }
            Optimum::Unbounded => prop_assert!(false, "boxed system cannot be unbounded"),
            Optimum::Infeasible(cert) => {
                prop_assert!(!oracle_feasible(&sys));
                prop_assert!(check_certificate(&sys, &cert).unwrap());
            }
        }
    }

    /// Shifted-box generator: two unit boxes at offset delta are jointly
    /// feasible iff the offset is at most the box width in every coordinate.
    #[test]
    fn shifted_box_certificates_verify(
        delta in prop::collection::vec(2i64..=5, 1..=3),
    ) {
        let n = delta.len();
        let mut sys = LinearSystem::new(n);
        for j in 0..n {
            sys.set_bound(j, Interval::new(r(0), r(1)).unwrap());
            // x_j >= delta_j with delta_j >= 2 contradicts x_j <= 1.
            let mut coeffs = vec![r(0); n];
            coeffs[j] = r(1);
            sys.push(coeffs, Rel::Ge, r(delta[j])).unwrap();
        }
        match solve_feasibility(&sys).unwrap() {
            Feasibility::Infeasible(cert) => {
                prop_assert!(check_certificate(&sys, &cert).unwrap())
            }
            Feasibility::Feasible(p) => prop_assert!(false, "expected infeasible, got {:?}", p),
        }
    }
}

#[test]
fn equality_rows_solve_exactly() {
    let mut sys = LinearSystem::new(2);
    sys.push(vec![r(1), r(1)], Rel::Eq, r(1)).unwrap();
    sys.push(vec![r(1), r(-1)], Rel::Eq, r(1)).unwrap();
    match solve_feasibility(&sys).unwrap() {
        Feasibility::Feasible(p) => assert_eq!(p, vec![r(1), r(0)]),
        Feasibility::Infeasible(_) => panic!("expected feasible"),
    }
}

#[test]
fn contradictory_equalities_certify() {
    let mut sys = LinearSystem::new(2);
    sys.push(vec![r(1), r(1)], Rel::Eq, r(1)).unwrap();
    sys.push(vec![r(1), r(1)], Rel::Eq, r(2)).unwrap();
    match solve_feasibility(&sys).unwrap() {
        Feasibility::Infeasible(cert) => {
            assert_eq!(cert.multipliers.len(), 4);
            assert!(check_certificate(&sys, &cert).unwrap());
        }
        Feasibility::Feasible(_) => panic!("expected infeasible"),
    }
}

#[test]
fn fixed_variable_conflicts_are_caught_in_presolve() {
    let mut sys = LinearSystem::new(1);
    sys.set_bound(0, Interval::new(r(2), r(2)).unwrap());
    sys.push(vec![r(1)], Rel::Le, r(1)).unwrap();
    match solve_feasibility(&sys).unwrap() {
        Feasibility::Infeasible(cert) => assert!(check_certificate(&sys, &cert).unwrap()),
        Feasibility::Feasible(_) => panic!("expected infeasible"),
    }

    let mut ok = LinearSystem::new(1);
    ok.set_bound(0, Interval::new(r(2), r(2)).unwrap());
    ok.push(vec![r(1)], Rel::Le, r(3)).unwrap();
    match solve_feasibility(&ok).unwrap() {
        Feasibility::Feasible(p) => assert_eq!(p, vec![r(2)]),
        Feasibility::Infeasible(_) => panic!("expected feasible"),
    }
}

#[test]
fn unbounded_objective_is_reported() {
    let mut sys = LinearSystem::new(1);
    sys.push(vec![r(1)], Rel::Ge, r(0)).unwrap();
    match optimize(&sys, &[r(1)], Sense::Max).unwrap() {
        Optimum::Unbounded => {}
        other => panic!("expected unbounded, got {other:?}"),
    }
    match optimize(&sys, &[r(1)], Sense::Min).unwrap() {
        Optimum::Optimal { value, .. } => assert_eq!(value, r(0)),
        other => panic!("expected optimum 0, got {other:?}"),
    }
}

#[test]
fn maximization_negates_cleanly() {
    // max x + y over the triangle x,y >= 0, x + 2y <= 4, 3x + y <= 6.
    let mut sys = LinearSystem::new(2);
    sys.set_bound(0, Interval::new(r(0), r(10)).unwrap());
    sys.set_bound(1, Interval::new(r(0), r(10)).unwrap());
    sys.push(vec![r(1), r(2)], Rel::Le, r(4)).unwrap();
    sys.push(vec![r(3), r(1)], Rel::Le, r(6)).unwrap();
    match optimize(&sys, &[r(1), r(1)], Sense::Max).unwrap() {
        Optimum::Optimal { value, point } => {
            assert_eq!(value, Rational::from_frac(14, 5));
            assert_eq!(point, vec![Rational::from_frac(8, 5), Rational::from_frac(6, 5)]);
        }
        other => panic!("expected optimum, got {other:?}"),
    }
}
