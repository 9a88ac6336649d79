//! Double-barrier memristive device: Schottky contact, electrolyte and
//! tunnel barrier in series, coupled through one shared internal state.

mod network;
mod params;
mod physics;

pub use network::{DbmdNetwork, DbmdSample};
pub use params::DbmdParameters;
pub use physics::{SCHOTTKY_ZERO_THRESHOLD, SINH_ARGUMENT_LIMIT, TUNNEL_ZERO_THRESHOLD};
