//! A finite-model laboratory for switch groups on 3-colored complete
//! bipartite graphs.
//!
//! - [`graph`]: colored `K_{m,n}`, isomorphism, and coloring predicates
//! - [`s3`]: the symmetric group on the three cross-types
//! - [`switch`]: switches as recoloring operators
//! - [`orbits`]: candidate groups as permutation groups on coloring space
//! - [`random`]: seeded graphs, extension properties, probability bounds
//! - [`verify`]: the lemma verification suite

pub mod error;
pub mod graph;
pub mod orbits;
pub mod random;
pub mod s3;
pub mod switch;
pub mod verify;

pub use error::{LabError, Result};
pub use graph::{Color, ColoredBipartiteGraph, Side, VertexRef};
pub use s3::{S3Perm, Subgroup};
pub use switch::{SwitchOp, SwitchWord};
