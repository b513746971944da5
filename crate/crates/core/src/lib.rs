//! Algorithmic core of the cloned-account detector.
//!
//! Everything here is pure computation over in-memory data and builds
//! without `std` (only `alloc` is required). File formats, the synthetic
//! dataset generator, end-to-end orchestration and the command-line tool
//! live in the companion `clonescope` crate.
//!
//! The modules follow the detection pipeline:
//!
//! * [`text`] string and text similarity primitives,
//! * [`graph`] candidate-pair proposal by name similarity,
//! * [`features`] the 10-dimensional account-pair representation,
//! * [`views`] per-account views (posts, interaction networks, profile),
//! * [`wgcca`] weighted generalized CCA fusing the views,
//! * [`learners`] and [`cascade`] the deep-forest classifier,
//! * [`metrics`] precision, recall and F1.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cascade;
pub mod date;
pub mod error;
pub mod features;
pub mod graph;
pub mod learners;
pub mod linalg;
pub mod metrics;
pub mod profile;
pub mod scaling;
pub mod seed;
pub mod text;
pub mod views;
pub mod wgcca;

pub use date::Date;
pub use error::{Error, Result};
pub use profile::AccountProfile;
