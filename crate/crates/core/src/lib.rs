//! Planning core for an aerial active-RIS backhaul feeding UAV base stations.
//!
//! The pipeline is one pass: place the RIS, partition and phase-align the
//! array, pick the amplification gain, then allocate per-UAV transmit powers
//! that meet each fronthaul rate. Everything here is `no_std` with `alloc`;
//! IO lives in the companion simulator crate.
//!
//! All quantities are linear SI units (W, m, Hz). Use [`units`] at the edges.

#![no_std]
// Float math comes from `num_traits::Float` without std. When another crate in
// the build links std, the inherent methods win and those imports look unused.
#![allow(unused_imports)]
// `!(x > 0.0)` is deliberate: it rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod antenna;
pub mod baseline;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod partition;
pub mod pipeline;
pub mod placement;
pub mod power;
pub mod ris;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{Vec2, Vec3};
