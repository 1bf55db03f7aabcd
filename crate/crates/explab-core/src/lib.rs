//! Core library for error-probability bounds on the AWGN channel.
//!
//! The crate computes the random-coding and expurgated upper bounds on block
//! error probability for discrete constellations and for Gaussian input,
//! locates the three rate regions of the bound, evaluates the per-region
//! closed forms, optimizes discrete input distributions under power
//! constraints, estimates diversity order from bound or simulation curves and
//! provides a small random-coding Monte Carlo oracle for validation.
//!
//! Everything here is `no_std` (with `alloc`); IO, file formats and the CLI
//! live in the companion `explab` crate.
//!
//! Rates are natural-log units (nats/symbol) throughout. SNR is
//! `eta = (mean symbol energy) / sigma2` with `sigma2` the per-dimension noise
//! variance, so `eta = 1/sigma2` for unit-energy constellations.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod channel;
pub mod distopt;
pub mod diversity;
pub mod ensemble;
pub mod error;
pub mod exponents;
pub mod numerics;

pub use channel::{ChannelPoint, Constellation, PowerConstraint};
pub use error::{Error, Result};
pub use exponents::{Region, RegionReport};
