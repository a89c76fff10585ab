//! Property tests: interval arithmetic is a sound and monotone enclosure of
//! the pointwise operations, and the dot product agrees with brute-force
//! endpoint enumeration in low dimension.

use proptest::prelude::*;
use relucert_numerics::{interval_dot, Interval, IntervalVector, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=20).prop_map(|(n, d)| Rational::from_frac(n, d))
}

fn interval() -> impl Strategy<Value = Interval> {
    (rational(), rational()).prop_map(|(a, b)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(lo, hi).unwrap()
    })
}

/// A point inside `iv`, parameterized by t ∈ [0,1].
fn point_in(iv: &Interval, num: i64, den: i64) -> Rational {
    let t = Rational::from_frac(num.rem_euclid(den), den);
    iv.lo() + &(t * iv.width())
}

/// An interval contained in `iv`, shrunk from both ends.
fn shrink(iv: &Interval, num: i64, den: i64) -> Interval {
    let t = Rational::from_frac(num.rem_euclid(den), 2 * den);
    let delta = t * iv.width();
    Interval::new(iv.lo() + &delta, iv.hi() - &delta).unwrap()
}

proptest! {
    #[test]
    fn add_is_sound(a in interval(), b in interval(), ta in 0i64..=7, tb in 0i64..=7) {
        let x = point_in(&a, ta, 7);
        let y = point_in(&b, tb, 7);
        prop_assert!(a.add(&b).contains(&(x + y)));
    }

    #[test]
    fn scale_is_sound(a in interval(), c in rational(), t in 0i64..=7) {
        let x = point_in(&a, t, 7);
        prop_assert!(a.scale(&c).contains(&(&c * &x)));
    }

    #[test]
    fn relu_is_sound(a in interval(), t in 0i64..=7) {
        let x = point_in(&a, t, 7);
        let relu_x = x.max(Rational::zero());
        prop_assert!(a.relu().contains(&relu_x));
    }

    #[test]
    fn operations_are_monotone(
        a in interval(), b in interval(), c in rational(),
        sa in 0i64..=3, sb in 0i64..=3,
    ) {
        let a_small = shrink(&a, sa, 4);
        let b_small = shrink(&b, sb, 4);
        prop_assert!(a_small.add(&b_small).contained_in(&a.add(&b)));
        prop_assert!(a_small.scale(&c).contained_in(&a.scale(&c)));
        prop_assert!(a_small.relu().contained_in(&a.relu()));

        let v_small = IntervalVector::new(vec![a_small, b_small]);
        let v_big = IntervalVector::new(vec![a, b]);
        let row = [c, Rational::from_int(2)];
        prop_assert!(interval_dot(&row, &v_small)
            .unwrap()
            .contained_in(&interval_dot(&row, &v_big).unwrap()));
    }

    /// Oracle: evaluate the dot product at all 2^d endpoint combinations and
    /// take the min/max. For linear forms the extremes are attained at
    /// endpoints, so this reconstructs the exact range.
    #[test]
    fn dot_matches_vertex_enumeration(
        ivs in prop::collection::vec(interval(), 1..=3),
        coeffs in prop::collection::vec(-5i64..=5, 1..=3),
    ) {
        let d = ivs.len().min(coeffs.len());
        let ivs = &ivs[..d];
        let row: Vec<Rational> = coeffs[..d].iter().map(|&c| Rational::from_int(c)).collect();

        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for mask in 0..(1usize << d) {
            let value: Rational = (0..d)
                .map(|i| {
                    let endpoint = if mask & (1 << i) == 0 { ivs[i].lo() } else { ivs[i].hi() };
                    &row[i] * endpoint
                })
                .sum();
            lo = Some(match lo { Some(l) => l.min(value.clone()), None => value.clone() });
            hi = Some(match hi { Some(h) => h.max(value), None => value });
        }

        let got = interval_dot(&row, &IntervalVector::new(ivs.to_vec())).unwrap();
        prop_assert_eq!(got.lo(), &lo.unwrap());
        prop_assert_eq!(got.hi(), &hi.unwrap());
    }

    #[test]
    fn display_parse_round_trip(x in rational()) {
        let back: Rational = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}
