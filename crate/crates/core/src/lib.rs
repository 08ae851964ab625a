//! Word-problem toolkit for finitely presented monoids with homogeneous
//! relations and for the groups they embed in.
//!
//! The core objects are gcd-monoids given by length-preserving relations.
//! Group elements are represented as multifractions — alternating sequences
//! of monoid elements standing for `a₁·a₂⁻¹·a₃·a₄⁻¹·…` — and the group's
//! word problem is attacked by rewriting multifractions with lcm-based
//! reduction moves. When every triple of atoms that pairwise admits common
//! multiples also admits one jointly (the 3-Ore condition), a fixed
//! universal schedule of maximal moves decides the word problem; outside
//! that regime the toolkit falls back to exhaustive reduction and reports
//! what it finds.

pub mod diagram;
pub mod divisibility;
pub mod engine;
pub mod error;
pub mod monoid;
pub mod multifraction;
pub mod ore;
pub mod presentation;
pub mod word;

pub use diagram::{gamma_shape, render_dot, DiagramEdge, DiagramGraph, DiagramNode, NodeRole};
pub use divisibility::{BasicCaps, BasicTable, LcmResult};
pub use engine::{
    sigma_sequence, universal_sequence, NormalForm, ReductionTrace, SolveBasis, Verdict,
};
pub use error::{Error, Result};
pub use monoid::{validate_presentation, Class, Element, Monoid, DEFAULT_CLASS_CAP};
pub use multifraction::{Multifraction, RuleId};
pub use ore::{FcStatus, OreReport, SubsetReport};
pub use presentation::{Presentation, Relation};
pub use word::{AtomId, SignedLetter, SignedWord, Word};
