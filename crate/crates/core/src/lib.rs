//! Average-distance energy with an elastica penalty on convex planar domains.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod competitor;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod io;
pub mod optimizer;

pub use error::{ElasticaError, Result};
