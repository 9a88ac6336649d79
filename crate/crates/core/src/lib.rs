// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adaptor;
pub mod dbmd;
pub mod error;
pub mod identify;
pub mod integrator;
pub mod models;
pub mod port;
pub mod scenario;
pub mod wave;

pub use error::{EmulationError, Result};
