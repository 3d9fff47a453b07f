//! Exact computations with mixed Hodge structures over ℚ and ℚ(i).
//!
//! The library validates MHS data, builds Deligne splittings and the δ operator,
//! turns them into G_m²-equivariant flat connections on the plane, integrates
//! those connections along paths, and patches the resulting Rees bundles on P¹.
//! Free Lie algebra tables and absolute Hodge cohomology round it out. The
//! `hodge-gauge` binary wraps everything in a JSON document interface.

pub mod algebra;
pub mod check;
pub mod cli;
pub mod connection;
pub mod doc;
pub mod error;
pub mod fixtures;
pub mod freelie;
pub mod hodgecoh;
pub mod holonomy;
pub mod mhs;
pub mod rees;
pub mod splitting;

pub use error::{Error, Result};
