//! Population metaheuristics and surrogate models for formulation design.
//!
//! The crate has four layers:
//!
//! * [`space`] / [`objective`] / [`rng`]: search spaces, candidates,
//!   optimization directions, and seeded random streams.
//! * [`benchmarks`]: the six reference test functions with their known
//!   minima and a name registry.
//! * [`metaheuristics`]: genetic algorithm, cuckoo search, symbiotic
//!   organism search, and firefly algorithm, all budgeted in objective
//!   evaluations and fully reproducible from a seed.
//! * [`surrogate`] / [`samplesize`]: MLP and ANFIS regression models with
//!   a chi-squared comparison metric, plus protocols that decide whether a
//!   dataset of a given size is adequate to train them.
//!
//! `no_std` builds (with `alloc`) are supported by disabling the default
//! `std` feature; all math routes through `libm` in that configuration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod benchmarks;
pub mod error;
pub mod metaheuristics;
pub mod objective;
pub mod rng;
pub mod samplesize;
pub mod space;
pub mod stats;
pub mod surrogate;

pub use error::Error;
pub use objective::{better, Direction, ObjectiveKind, ObjectiveSpec};
pub use rng::{derive_seed, RngStream};
pub use space::{Candidate, SearchSpace};
