//! Memristor model catalog.
//!
//! Every model is a voltage-controlled memristive system
//! `i = G(z, u) u`, `dz/dt = f(z, u)`. Current-controlled devices (the HP
//! ion-drift model) are expressed in this form through `i = u / R(z)`.

mod curve;
mod hp;
mod multilevel;

pub use curve::{
    binary_switch_curve, continuous_curve, CharacteristicCurve, CurveModel, BINARY_THRESHOLD_FRACTION,
    BINARY_TRANSITION_FRACTION,
};
pub use hp::{HpModel, HpParameters};
pub use multilevel::{MultilevelModel, MultilevelParameters};

/// Boundary margin used by window-restricted models.
pub const STATE_EPSILON: f64 = 1e-12;

/// Pluggable device description used by the memristive port.
///
/// Implementations are parameter holders; the mutable state lives in the
/// port's integrator.
pub trait MemristiveModel {
    fn initial_state(&self) -> Vec<f64>;

    /// Memductance `G(z, u)` in siemens.
    fn memductance(&self, z: &[f64], u: f64) -> f64;

    /// Writes `f(z, u)` into `out`.
    fn state_derivative(&self, z: &[f64], u: f64, out: &mut [f64]);

    /// Projects a state onto the admissible set (no-op by default).
    fn project(&self, _z: &mut [f64]) {}

    /// True when the memductance depends on the terminal voltage explicitly.
    fn voltage_dependent(&self) -> bool {
        false
    }
}

impl<M: MemristiveModel + ?Sized> MemristiveModel for Box<M> {
    fn initial_state(&self) -> Vec<f64> {
        (**self).initial_state()
    }
    fn memductance(&self, z: &[f64], u: f64) -> f64 {
        (**self).memductance(z, u)
    }
    fn state_derivative(&self, z: &[f64], u: f64, out: &mut [f64]) {
        (**self).state_derivative(z, u, out)
    }
    fn project(&self, z: &mut [f64]) {
        (**self).project(z)
    }
    fn voltage_dependent(&self) -> bool {
        (**self).voltage_dependent()
    }
}

/// Memoryless linear resistor, handy as a reference load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearResistor {
    pub conductance: f64,
}

impl MemristiveModel for LinearResistor {
    fn initial_state(&self) -> Vec<f64> {
        vec![0.0]
    }
    fn memductance(&self, _z: &[f64], _u: f64) -> f64 {
        self.conductance
    }
    fn state_derivative(&self, _z: &[f64], _u: f64, out: &mut [f64]) {
        out[0] = 0.0;
    }
}
