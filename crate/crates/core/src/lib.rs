//! Noisy simulation and entropy-based scoring of superdense coding and BB84
//! on modeled device topologies.
//!
//! Circuits are built by [`protocols`] on a [`topology::DeviceGraph`], run by
//! [`simcore`] under a [`noise::NoiseModel`], scored by [`metrics`] and
//! written out by [`report`].

pub mod circuits;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod noise;
pub mod protocols;
pub mod report;
pub mod simcore;
pub mod topology;

pub use error::{Error, Result};
