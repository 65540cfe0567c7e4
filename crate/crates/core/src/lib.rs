//! Sound output-range analysis and property verification for ReLU
//! feed-forward networks.
//!
//! Forward analyses ([`propagation`]) bound the outputs of a network over an
//! input box with outward-rounded interval arithmetic. The [`engine`] refines
//! boxes by bisection until a [`property::Property`] is proven, refuted by a
//! concrete counterexample, or a resource limit is hit.

pub mod cli;
pub mod engine;
pub mod error;
pub mod gradient;
pub mod interval;
pub mod network;
pub mod propagation;
pub mod property;
pub mod rounding;
pub mod symbolic;

pub use engine::{enumerate, verify, Config, PartitionReport, SampleStrategy, Status, SubStatus, Verdict};
pub use error::{Error, Result};
pub use interval::{Interval, IntervalBox};
pub use network::{Activation, Layer, Network, Normalization};
pub use propagation::{forward, naive_forward, symbolic_forward, ForwardResult, Mode, ReluMaskMatrix};
pub use property::{parse_property, Constraint, Property};
pub use rounding::{Precision, RoundingMode, RoundingPolicy};
