//! Linear network coding over finite fields on directed acyclic networks.
//!
//! The crate covers the pipeline from an arbitrary acyclic network to its
//! layered Variant-I representation, the factorization of channel matrices
//! into interlayer matrices, rank-based mincut bounds, and the
//! forward-backward transpose duality.

pub mod analysis;
pub mod dot;
pub mod duality;
pub mod error;
pub mod gen;
pub mod gf;
pub mod lnc;
pub mod netgraph;
pub mod rng;
pub mod transform;

pub use error::{Error, Result};
pub use gf::{FieldElement, FieldMatrix, FieldSpec, GfError};
pub use netgraph::{Network, NetworkBuilder, NodeKind, Variant};
pub use lnc::{assign_random, CodingAssignment};
pub use transform::{layer, layered_variant1, to_variant1, LayeredNetwork};
