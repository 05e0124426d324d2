//! Flux, normal traces, and the convergence/divergence structure of cap
//! sequences.

mod divergence;
mod flux;

pub use divergence::{
    classify_convergence, verify_divergence_structure, verify_divergence_structure_with, CheckStatus, Component,
    DivergenceReport, Finding, Interface, InterfaceEnd, StructureOptions, StructureVerdict, VertexClass,
    DEFAULT_GROWTH_THRESHOLD,
};
pub use flux::{boundary_normal_trace, flux, flux_report, normal_trace, EdgeFlux, FluxReport, Side, TraceSample};
