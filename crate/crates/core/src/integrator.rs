//! Wave digital trapezoidal integrator for the internal state vector.
//!
//! The state is interpreted as the voltage across a unit capacitor fed by the
//! current `f(z, u)`. With port resistance `T/2` the capacitor is a plain delay:
//! the stored wave `b_z(t_k)` equals the incident wave `a_z(t_{k-1})` and
//! `a_z(t_k) = f(t_k) T + b_z(t_k)`.

use crate::error::{EmulationError, Result};

/// How the state sample is read back from the integrator port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StateReadout {
    /// Capacitor voltage `(a_z + b_z) / 2 = b_z + (T/2) f`, i.e. the trapezoidal rule.
    #[default]
    PortVoltage,
    /// Small-step approximation `z(t_k) ~ b_z(t_k)`.
    StoredWave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorState {
    stored: Vec<f64>,
    period: f64,
    readout: StateReadout,
    primed: bool,
}

impl IntegratorState {
    /// The stored wave starts at `z0`.
    pub fn new(z0: &[f64], period: f64) -> Result<Self> {
        Self::with_readout(z0, period, StateReadout::default())
    }

    pub fn with_readout(z0: &[f64], period: f64, readout: StateReadout) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(EmulationError::Domain(format!(
                "sampling period must be positive, got {period}"
            )));
        }
        Ok(Self {
            stored: z0.to_vec(),
            period,
            readout,
            primed: false,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn port_resistance(&self) -> f64 {
        0.5 * self.period
    }

    pub fn readout(&self) -> StateReadout {
        self.readout
    }

    pub fn dim(&self) -> usize {
        self.stored.len()
    }

    /// Stored wave `b_z` of the current instance.
    pub fn stored(&self) -> &[f64] {
        &self.stored
    }

    /// False until the first instance has been committed.
    pub fn is_primed(&self) -> bool {
        self.primed
    }

    /// State estimate for the current instance given the previous instance's
    /// state derivative (warm start for the implicit loop).
    pub fn predict(&self, f_prev: &[f64], out: &mut [f64]) {
        self.state_for(f_prev, out);
    }

    /// State sample implied by the derivative `f` at the current instance.
    ///
    /// On the very first instance the initial condition is returned unchanged.
    pub fn state_for(&self, f: &[f64], out: &mut [f64]) {
        let half = 0.5 * self.period;
        for (k, z) in out.iter_mut().enumerate() {
            *z = match (self.primed, self.readout) {
                (false, _) | (true, StateReadout::StoredWave) => self.stored[k],
                (true, StateReadout::PortVoltage) => self.stored[k] + half * f[k],
            };
        }
    }

    /// Commits the instance: the incident wave becomes next instance's stored wave.
    pub fn commit(&mut self, z: &[f64], f: &[f64]) {
        let half = 0.5 * self.period;
        for k in 0..self.stored.len() {
            self.stored[k] = match self.readout {
                StateReadout::PortVoltage => z[k] + half * f[k],
                StateReadout::StoredWave => self.stored[k] + self.period * f[k],
            };
        }
        self.primed = true;
    }

    /// Single-shot step for derivatives that do not depend on the state:
    /// returns `z(t_k)` and advances the store.
    pub fn step(&mut self, f: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.dim()];
        self.state_for(f, &mut z);
        self.commit(&z, f);
        z
    }

    /// Overwrites the stored wave, e.g. after projecting the state onto its
    /// admissible range.
    pub fn set_stored(&mut self, stored: &[f64]) {
        self.stored.copy_from_slice(stored);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_wave_starts_at_z0() {
        let integ = IntegratorState::new(&[0.25, 0.75], 1e-3).unwrap();
        assert_eq!(integ.stored(), &[0.25, 0.75]);
        assert_eq!(integ.port_resistance(), 0.5e-3);
    }

    #[test]
    fn zero_drift() {
        let mut integ = IntegratorState::new(&[0.5], 1e-3).unwrap();
        for _ in 0..1000 {
            assert_eq!(integ.step(&[0.0]), vec![0.5]);
        }
    }

    #[test]
    fn constant_rate_is_exact() {
        for readout in [StateReadout::PortVoltage, StateReadout::StoredWave] {
            let t = 1e-3;
            let c = 3.7;
            let mut integ = IntegratorState::with_readout(&[0.1], t, readout).unwrap();
            for k in 0..5000 {
                let z = integ.step(&[c])[0];
                let exact = 0.1 + c * k as f64 * t;
                assert!((z - exact).abs() < 1e-13 * (1.0 + k as f64), "k={k}");
            }
        }
    }

    #[test]
    fn rejects_bad_period() {
        assert!(IntegratorState::new(&[0.0], 0.0).is_err());
        assert!(IntegratorState::new(&[0.0], f64::INFINITY).is_err());
    }
}
