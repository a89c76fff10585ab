use relucert_abstraction::{abstract_network, refine, AbstractionConfig};
use relucert_model::{InputBox, Network, NetworkRef, OutputPolytope, Query};
use relucert_numerics::Rational;
use relucert_proof::{compose, prove_over_approximation, AbstractProof, EncodingMode};

use crate::search::{decide, spurious_check, verify_with_proofs, SpuriousCheck, Verdict};
use crate::VerifierError;

/// Pipeline parameters.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub abstraction: AbstractionConfig,
    pub mode: EncodingMode,
    /// Refinement budget; `None` never gives up (the loop still terminates
    /// because refinement strictly shrinks the provenance).
    pub max_refinements: Option<usize>,
    /// When false, the loop starts from the trivial lift and the query is
    /// decided exactly in the first iteration.
    pub use_abstraction: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            abstraction: AbstractionConfig::default(),
            mode: EncodingMode::SkipConnection,
            max_refinements: None,
            use_abstraction: true,
        }
    }
}

/// Final result of the abstraction-refinement loop.
#[derive(Debug, Clone)]
pub enum PipelineOutcome {
    /// A real counterexample on the original network.
    Counterexample {
        input: Vec<Rational>,
        output: Vec<Rational>,
        iterations: usize,
        refinements: usize,
    },
    /// UNSAT with the composed two-part proof bundle.
    ProvedUnsat {
        proof: Box<AbstractProof>,
        iterations: usize,
        refinements: usize,
    },
    /// The refinement budget ran out before the query was resolved.
    RefinementLimit { refinements: usize },
}

/// Abstract, decide, and either return a real counterexample, refine away a
/// spurious one, or emit the proof bundle on UNSAT.
///
/// Termination: each refinement removes one recorded merge; with empty
/// provenance the abstract network is the trivial lift, whose decisions are
/// exact for the original network, so a SAT there is never spurious.
pub fn run_pipeline(
    net: &Network,
    input: &InputBox,
    output: &OutputPolytope,
    cfg: &PipelineConfig,
) -> Result<PipelineOutcome, VerifierError> {
    let query = Query::new(
        NetworkRef::Concrete(net.clone()),
        input.clone(),
        output.clone(),
    )?;
    let mut abstracted = if cfg.use_abstraction {
        abstract_network(net, input, &cfg.abstraction)?
    } else {
        net.lift_trivial()
    };
    let mut refinements = 0usize;
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        let abstract_query = Query::new(
            NetworkRef::Abstract(abstracted.clone()),
            input.clone(),
            output.clone(),
        )?;
        match decide(&abstract_query, cfg.mode)? {
            Verdict::Sat(witness) => {
                match spurious_check(net, &query, &witness.input)? {
                    SpuriousCheck::RealCounterexample { output } => {
                        return Ok(PipelineOutcome::Counterexample {
                            input: witness.input,
                            output,
                            iterations,
                            refinements,
                        });
                    }
                    SpuriousCheck::Spurious => {
                        if abstracted.provenance().is_none_or(|p| p.is_empty()) {
                            return Err(VerifierError::Internal(
                                "spurious witness on the trivial lift".into(),
                            ));
                        }
                        if let Some(limit) = cfg.max_refinements {
                            if refinements >= limit {
                                return Ok(PipelineOutcome::RefinementLimit { refinements });
                            }
                        }
                        abstracted = refine(&abstracted, net, input)?;
                        refinements += 1;
                    }
                }
            }
            Verdict::Unsat(_) => {
                let abstraction_proof = prove_over_approximation(&abstracted, net, input)?;
                let tree = verify_with_proofs(&abstracted, input, output, cfg.mode)?;
                let bundle = compose(abstraction_proof, tree, &query)?;
                return Ok(PipelineOutcome::ProvedUnsat {
                    proof: Box::new(bundle),
                    iterations,
                    refinements,
                });
            }
        }
    }
}
