//! The guide's chapters, compiled as doc-tests so their examples keep working.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/grid.md")]
pub mod grid {}

#[doc = include_str!("../../../book/src/epsnet.md")]
pub mod epsnet {}

#[doc = include_str!("../../../book/src/sketch.md")]
pub mod sketch {}

#[doc = include_str!("../../../book/src/binary_nets.md")]
pub mod binary_nets {}

#[doc = include_str!("../../../book/src/discrepancy.md")]
pub mod discrepancy {}

#[doc = include_str!("../../../book/src/hard_family.md")]
pub mod hard_family {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
