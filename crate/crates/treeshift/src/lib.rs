//! Decision procedures for CPC-irreducibility of tree shifts of finite type
//! (TSFTs) over the infinite dyadic tree.
//!
//! A 1-step TSFT is given by a finite alphabet and a set of allowable
//! one-blocks `(parent; left, right)`. The library builds the extended
//! directed graph of the shift (convergent edges for blocks with equal
//! children, divergent edges otherwise), closes it under (d,c)-reduction
//! either directly or through strongly-connected-component grouping, and
//! reads the verdict off strong connectivity of the reduced intrinsic graph.
//! An independent least-fixed-point decision for CPC-connectedness
//! cross-validates the graph route, and every verdict ships with a checkable
//! certificate.

pub mod batch;
pub mod cli;
pub mod decide;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod reduction;
pub mod tsft;
pub mod words;

pub use decide::{check_certificate, decide_direct, decide_grouped, Certificate, Evidence, Route};
pub use graph::{graph_of, shift_of, to_dot, ExtGraph, IntrinsicGraph};
pub use oracle::{brute_connected, cpc_connected, cpc_witness, decide_oracle, BruteResult};
pub use reduction::{
    dc_fixpoint, dc_reduce_step, enhanced_fixpoint, enhanced_reduce_step, find_dc_reduction,
    grouped_fixpoint, grouping, GroupedGraph, Orientation, ReductionStep,
};
pub use tsft::{Alphabet, AllowableSet, OneBlock, Pattern, SymbolId, Verdict};
pub use words::{Branch, Cpc, PrefixCode, TreeRegion, Word};
