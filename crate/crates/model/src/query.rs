use relucert_numerics::{IntervalVector, Rational};
use serde::{Deserialize, Serialize};

use crate::{AbstractNetwork, ModelError, Network};

/// The input property: an axis-aligned box over the network inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputBox {
    bounds: IntervalVector,
}

impl InputBox {
    pub fn new(bounds: IntervalVector) -> Self {
        InputBox { bounds }
    }

    pub fn bounds(&self) -> &IntervalVector {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// Componentwise membership test.
    pub fn contains(&self, x: &[Rational]) -> Result<bool, ModelError> {
        if x.len() != self.dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.bounds.contains_point(x))
    }
}

/// One halfspace `coeffs · y ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfspace {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Halfspace {
    pub fn holds_at(&self, y: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(y.iter()).map(|(c, v)| c * v).sum();
        lhs <= self.rhs
    }
}

/// The output property: a conjunction of halfspaces describing the
/// *undesired* output set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPolytope {
    halfspaces: Vec<Halfspace>,
}

impl OutputPolytope {
    pub fn new(halfspaces: Vec<Halfspace>) -> Result<Self, ModelError> {
        if halfspaces.is_empty() {
            return Err(ModelError::BadLayer {
                layer: 0,
                reason: "output polytope needs at least one halfspace".into(),
            });
        }
        let dim = halfspaces[0].coeffs.len();
        if halfspaces.iter().any(|h| h.coeffs.len() != dim) {
            return Err(ModelError::DimensionMismatch {
                expected: dim,
                got: halfspaces.iter().map(|h| h.coeffs.len()).max().unwrap(),
            });
        }
        Ok(OutputPolytope { halfspaces })
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn dim(&self) -> usize {
        self.halfspaces[0].coeffs.len()
    }

    /// True iff every halfspace holds (boundaries included).
    pub fn contains(&self, y: &[Rational]) -> Result<bool, ModelError> {
        if y.len() != self.dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.dim(),
                got: y.len(),
            });
        }
        Ok(self.halfspaces.iter().all(|h| h.holds_at(y)))
    }
}

/// Either a concrete or an abstract network, as queries range over both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkRef {
    Concrete(Network),
    Abstract(AbstractNetwork),
}

impl NetworkRef {
    pub fn input_dim(&self) -> usize {
        match self {
            NetworkRef::Concrete(n) => n.input_dim(),
            NetworkRef::Abstract(n) => n.input_dim(),
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            NetworkRef::Concrete(n) => n.output_dim(),
            NetworkRef::Abstract(n) => n.output_dim(),
        }
    }

    /// The abstract view: concrete networks are lifted trivially.
    pub fn to_abstract(&self) -> AbstractNetwork {
        match self {
            NetworkRef::Concrete(n) => n.lift_trivial(),
            NetworkRef::Abstract(n) => n.clone(),
        }
    }
}

impl From<Network> for NetworkRef {
    fn from(n: Network) -> Self {
        NetworkRef::Concrete(n)
    }
}

impl From<AbstractNetwork> for NetworkRef {
    fn from(n: AbstractNetwork) -> Self {
        NetworkRef::Abstract(n)
    }
}

/// A verification query `⟨network, input box, output polytope⟩`: does some
/// input in the box map into the output polytope?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub network: NetworkRef,
    pub input: InputBox,
    pub output: OutputPolytope,
}

impl Query {
    pub fn new(
        network: NetworkRef,
        input: InputBox,
        output: OutputPolytope,
    ) -> Result<Self, ModelError> {
        if input.dim() != network.input_dim() {
            return Err(ModelError::DimensionMismatch {
                expected: network.input_dim(),
                got: input.dim(),
            });
        }
        if output.dim() != network.output_dim() {
            return Err(ModelError::DimensionMismatch {
                expected: network.output_dim(),
                got: output.dim(),
            });
        }
        Ok(Query {
            network,
            input,
            output,
        })
    }
}
