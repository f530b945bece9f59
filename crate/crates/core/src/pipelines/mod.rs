//! Certified reductions: each pipeline emits a replayable certificate whose leaves are
//! explicit expressions or cited class bounds.

mod basic;
mod certificate;
mod colouring;
mod diamond;
mod odd_cycle;
mod reassemble;
mod steps;
mod ten_set;
mod triangle_free;

use thiserror::Error;

use crate::decomp::DecompError;
use crate::graph::GraphError;
use crate::kexpr::ExprError;
use crate::patterns::Violation;

pub use basic::{basic_expression, check_basic_properties, recognize_basic, BasicProperty, BasicRejection, BasicStructure};
pub use certificate::{
    verify_certificate, verify_certificate_detailed, BoundSource, Budget, CertParseError, Certificate, Step, StepError,
    TriangleFreeCase, VerifyFailure,
};
pub use colouring::{chromatic_via_certificate, CertificateColouring};
pub use diamond::diamond_reduce;
pub use odd_cycle::{minimum_odd_induced_cycle, reduce_k3_c5_s123};
pub use reassemble::reassemble_expression;
pub use ten_set::{check_ten_set_conditions, ten_set_reduce, TenSetCondition, TenSetPartition, TenSetViolation};
pub use triangle_free::{partition_around_c5, triangle_free_reduce, C5Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("input contains an induced {} at {:?}", .0.pattern, .0.embedding)]
    NotFree(Violation),
    /// A step of a constructive proof failed on this input; ids are local to the failing subgraph.
    #[error("claim `{claim}` fails at {witness:?}: {detail}")]
    Claim { claim: &'static str, witness: Vec<usize>, detail: String },
    #[error("input does not meet the reduction's hypotheses: {0}")]
    Precondition(String),
    #[error("the empty graph has no certificate")]
    EmptyGraph,
    #[error("step rejected: {0}")]
    Step(#[from] StepError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl PipelineError {
    pub fn is_claim_violation(&self) -> bool {
        matches!(self, PipelineError::Claim { .. })
    }
}

pub(crate) fn claim(claim: &'static str, witness: impl IntoIterator<Item = usize>, detail: impl Into<String>) -> PipelineError {
    PipelineError::Claim { claim, witness: witness.into_iter().collect(), detail: detail.into() }
}
