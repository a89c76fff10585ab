use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{NumericsError, Rational};

/// A nonempty closed interval `[lo, hi]` with exact rational endpoints.
///
/// Empty intervals are unrepresentable: the constructor rejects `lo > hi`.
/// The zero singleton `[0,0]` is the additive identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, NumericsError> {
        if lo > hi {
            return Err(NumericsError::EmptyInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// The degenerate interval `[v, v]`.
    pub fn singleton(v: Rational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Interval::singleton(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * Rational::from_frac(1, 2)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Componentwise inclusion `self ⊆ other`.
    pub fn contained_in(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Exact interval sum `[a.lo + b.lo, a.hi + b.hi]`.
    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Exact scaling; a negative factor swaps the endpoints.
    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval {
                lo: c * &self.hi,
                hi: c * &self.lo,
            }
        } else {
            Interval {
                lo: c * &self.lo,
                hi: c * &self.hi,
            }
        }
    }

    /// ReLU applied endpointwise: `[max(0, lo), max(0, hi)]`.
    pub fn relu(&self) -> Interval {
        Interval {
            lo: self.lo.clone().max(Rational::zero()),
            hi: self.hi.clone().max(Rational::zero()),
        }
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [&self.lo, &self.hi].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[Rational; 2]>::deserialize(deserializer)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// A fixed-dimension vector of intervals (an axis-aligned box).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        IntervalVector(entries)
    }

    /// The all-`[0,0]` vector of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        IntervalVector(vec![Interval::zero(); dim])
    }

    /// Lifts a point to a vector of singletons.
    pub fn from_point(point: &[Rational]) -> Self {
        IntervalVector(point.iter().cloned().map(Interval::singleton).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn get(&self, i: usize) -> &Interval {
        &self.0[i]
    }

    /// Componentwise partial order: `self ⊆ other`.
    pub fn contained_in(&self, other: &IntervalVector) -> bool {
        self.dim() == other.dim()
            && self
                .0
                .iter()
                .zip(other.0.iter())
                .all(|(a, b)| a.contained_in(b))
    }

    pub fn contains_point(&self, point: &[Rational]) -> bool {
        self.dim() == point.len()
            && self.0.iter().zip(point.iter()).all(|(iv, v)| iv.contains(v))
    }

    /// Componentwise interval sum.
    pub fn add(&self, other: &IntervalVector) -> Result<IntervalVector, NumericsError> {
        if self.dim() != other.dim() {
            return Err(NumericsError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(IntervalVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        ))
    }

    /// Sum of the entry widths; the refinement heuristic's coarseness measure.
    pub fn total_width(&self) -> Rational {
        self.0.iter().map(Interval::width).sum()
    }
}

impl fmt::Debug for IntervalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalVector(iter.into_iter().collect())
    }
}

/// Row-vector / interval-vector product: `Σᵢ rowᵢ · vᵢ` folded with interval
/// addition. One row of the interval matrix product used for bias-interval
/// construction and bound propagation.
pub fn interval_dot(row: &[Rational], v: &IntervalVector) -> Result<Interval, NumericsError> {
    if row.len() != v.dim() {
        return Err(NumericsError::DimensionMismatch {
            expected: row.len(),
            got: v.dim(),
        });
    }
    let mut acc = Interval::zero();
    for (c, iv) in row.iter().zip(v.iter()) {
        acc = acc.add(&iv.scale(c));
    }
    Ok(acc)
}
