use super::certificate::{Certificate, Step};
use super::reassemble::rebuild;
use super::PipelineError;
use crate::graph::Graph;
use crate::kexpr::{chromatic_oracle, chromatic_via_expression};

/// Chromatic number read off a certificate, with how much of it came from expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateColouring {
    pub chromatic: usize,
    /// The whole graph was coloured through one reassembled expression.
    pub root_expression: bool,
    /// Nodes that fell back to the exact oracle.
    pub oracle_nodes: usize,
}

/// Colours through reassembled expressions where possible. Components combine by
/// maximum and false twins share a colour; other nodes use the oracle on their graph.
pub fn chromatic_via_certificate(g: &Graph, c: &Certificate) -> Result<CertificateColouring, PipelineError> {
    let kids = c.step.apply(g)?;
    if let Some(e) = rebuild(g, c) {
        if let Ok(k) = chromatic_via_expression(&e) {
            return Ok(CertificateColouring { chromatic: k, root_expression: true, oracle_nodes: 0 });
        }
    }
    let mut out = CertificateColouring { chromatic: 0, root_expression: false, oracle_nodes: 0 };
    match &c.step {
        Step::SplitComponents { .. } | Step::RemoveFalseTwins { .. } => {
            for (h, child) in kids.iter().zip(&c.children) {
                let sub = chromatic_via_certificate(h, child)?;
                out.chromatic = out.chromatic.max(sub.chromatic);
                out.oracle_nodes += sub.oracle_nodes;
            }
        }
        _ => {
            out.chromatic = chromatic_oracle(g)?;
            out.oracle_nodes = 1;
        }
    }
    Ok(out)
}
