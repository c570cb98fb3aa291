//! Functional limit theorems for heavy-tailed linear processes: innovation
//! models, normalizing sequences, linear-process paths, Skorohod J1/M1
//! machinery on step paths, stable reference laws, and an experiment
//! harness that checks the limit behaviour numerically.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cadlag;
pub mod error;
pub mod harness;
pub mod innovations;
pub mod linproc;
pub mod normalize;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stable;

pub use error::{Error, Result};
