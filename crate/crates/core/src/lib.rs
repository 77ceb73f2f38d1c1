//! Additive-error orthogonal range counting on the `n x n` grid, together
//! with the binary-net and discrepancy machinery that shows how far the
//! space of such summaries can be pushed down.

pub mod bench;
pub mod binary_net;
pub mod discrepancy;
pub mod epsnet;
pub mod error;
mod fenwick;
pub mod grid;
pub mod hard_family;
pub mod onedim;
pub mod pointsets;
pub mod ratio;
pub mod sketch;

pub use binary_net::{BinaryNet, PartitionVector};
pub use epsnet::{build_net, verify_net, EpsNet};
pub use error::{Error, Result};
pub use grid::{cell_rect, count_in_rect, CellId, GridPoint, GridPointSet, Rect};
pub use ratio::Eps;
pub use sketch::{build_sketch, Sketch};
