//! Wire formats for networks and properties.
//!
//! A network file is `{ "layers": [ { "weights", "bias", "bias_interval"?,
//! "activation" } ] }`; `bias_interval` absent on every layer means the file
//! describes a concrete network. A property file is `{ "input_box",
//! "output_halfspaces" }`. All numbers are decimal strings.

use relucert_numerics::{Interval, IntervalVector, Rational};
use serde::{Deserialize, Serialize};

use crate::{
    AbstractLayer, AbstractNetwork, Activation, Halfspace, InputBox, Layer, ModelError, Network,
    NetworkRef, OutputPolytope,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerJson {
    pub weights: Vec<Vec<Rational>>,
    pub bias: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias_interval: Option<Vec<Interval>>,
    pub activation: Activation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkJson {
    pub layers: Vec<LayerJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyJson {
    pub input_box: Vec<Interval>,
    pub output_halfspaces: Vec<Halfspace>,
}

pub fn network_to_json(net: &Network) -> NetworkJson {
    NetworkJson {
        layers: net
            .layers()
            .iter()
            .map(|l| LayerJson {
                weights: l.weights().to_vec(),
                bias: l.bias().to_vec(),
                bias_interval: None,
                activation: l.activation(),
            })
            .collect(),
    }
}

pub fn abstract_network_to_json(net: &AbstractNetwork) -> NetworkJson {
    NetworkJson {
        layers: net
            .layers()
            .iter()
            .map(|l| LayerJson {
                weights: l.weights().to_vec(),
                bias: l.bias().to_vec(),
                bias_interval: Some(l.bias_interval().entries().to_vec()),
                activation: l.activation(),
            })
            .collect(),
    }
}

/// Rebuilds a network from its JSON form. A file with a `bias_interval` on
/// any layer parses as abstract (layers without one default to singleton
/// zeros); otherwise it parses as concrete.
pub fn network_from_json(json: &NetworkJson) -> Result<NetworkRef, ModelError> {
    let is_abstract = json.layers.iter().any(|l| l.bias_interval.is_some());
    if is_abstract {
        let layers = json
            .layers
            .iter()
            .map(|l| {
                let width = l.weights.len();
                let bias_interval = match &l.bias_interval {
                    Some(entries) => IntervalVector::new(entries.clone()),
                    None => IntervalVector::zeros(width),
                };
                AbstractLayer::new(l.weights.clone(), l.bias.clone(), bias_interval, l.activation)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NetworkRef::Abstract(AbstractNetwork::new(layers, None)?))
    } else {
        let layers = json
            .layers
            .iter()
            .map(|l| Layer::new(l.weights.clone(), l.bias.clone(), l.activation))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NetworkRef::Concrete(Network::new(layers)?))
    }
}

pub fn property_to_json(input: &InputBox, output: &OutputPolytope) -> PropertyJson {
    PropertyJson {
        input_box: input.bounds().entries().to_vec(),
        output_halfspaces: output.halfspaces().to_vec(),
    }
}

pub fn property_from_json(json: &PropertyJson) -> Result<(InputBox, OutputPolytope), ModelError> {
    let input = InputBox::new(IntervalVector::new(json.input_box.clone()));
    let output = OutputPolytope::new(json.output_halfspaces.clone())?;
    Ok((input, output))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{digest_abstract_network, digest_network, samples};

    #[test]
    fn concrete_network_round_trips() {
        let net = samples::demo_network();
        let text = serde_json::to_string(&network_to_json(&net)).unwrap();
        let parsed: NetworkJson = serde_json::from_str(&text).unwrap();
        match network_from_json(&parsed).unwrap() {
            NetworkRef::Concrete(back) => assert_eq!(back, net),
            NetworkRef::Abstract(_) => panic!("expected concrete"),
        }
    }

    #[test]
    fn abstract_network_round_trips_without_provenance() {
        let lifted = samples::demo_network().lift_trivial();
        let text = serde_json::to_string(&abstract_network_to_json(&lifted)).unwrap();
        let parsed: NetworkJson = serde_json::from_str(&text).unwrap();
        match network_from_json(&parsed).unwrap() {
            NetworkRef::Abstract(back) => {
                assert_eq!(back.layers(), lifted.layers());
                assert_eq!(back.provenance(), None);
            }
            NetworkRef::Concrete(_) => panic!("expected abstract"),
        }
    }

    #[test]
    fn digests_ignore_field_reordering_but_see_value_changes() {
        let net = samples::demo_network();
        let d1 = digest_network(&net);

        // Hand-reordered JSON parses to the same structural value, hence the
        // same canonical digest.
        let reordered = r#"{"layers":[
            {"activation":"relu",
             "bias":["0","0","0","0","0"],
             "weights":[["-1","-1","-2","0"],["-1","-2","-1","-3"],
                        ["0.1","0","0","0"],["0","0.2","0","0"],
                        ["1","1","1","-1.3"]]},
            {"bias":["0"],"weights":[["1","1","-5","-5","1"]],"activation":"identity"}
        ]}"#;
        let parsed: NetworkJson = serde_json::from_str(reordered).unwrap();
        match network_from_json(&parsed).unwrap() {
            NetworkRef::Concrete(back) => assert_eq!(digest_network(&back), d1),
            NetworkRef::Abstract(_) => panic!("expected concrete"),
        }

        let lifted = samples::demo_network().lift_trivial();
        assert_ne!(digest_abstract_network(&lifted), d1);
    }

    #[test]
    fn property_round_trips() {
        let (p, q) = (samples::demo_input_box(), samples::demo_unsafe_output());
        let text = serde_json::to_string(&property_to_json(&p, &q)).unwrap();
        let parsed: PropertyJson = serde_json::from_str(&text).unwrap();
        let (p2, q2) = property_from_json(&parsed).unwrap();
        assert_eq!(p2, p);
        assert_eq!(q2, q);
    }
}
