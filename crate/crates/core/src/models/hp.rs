use super::{MemristiveModel, STATE_EPSILON};
use crate::error::{EmulationError, Result};

/// HP ion-drift memristor with nonlinear dopant drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpParameters {
    /// Low resistance state (ohm).
    pub r_low: f64,
    /// High resistance state (ohm).
    pub r_high: f64,
    /// Material constant (1/C).
    pub kappa: f64,
    /// Window exponent.
    pub p: u32,
    /// Initial state in (0, 1).
    pub z0: f64,
}

impl HpParameters {
    pub fn new(r_low: f64, r_high: f64, kappa: f64, p: u32, z0: f64) -> Result<Self> {
        let params = Self {
            r_low,
            r_high,
            kappa,
            p,
            z0,
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds the parameter set from the initial resistance instead of `z0`.
    pub fn with_initial_resistance(r_low: f64, r_high: f64, kappa: f64, p: u32, r_init: f64) -> Result<Self> {
        if !(r_init > r_low && r_init < r_high) {
            return Err(EmulationError::Config(format!(
                "initial resistance {r_init} must lie in ({r_low}, {r_high})"
            )));
        }
        Self::new(r_low, r_high, kappa, p, (r_high - r_init) / (r_high - r_low))
    }

    /// R1 = 10 kOhm, R0 = 100 uOhm, R(z0) = 9 kOhm, kappa = 18.5 / mC, p = 1.
    pub fn table_iii() -> Self {
        Self::with_initial_resistance(100e-6, 10e3, 18.5e3, 1, 9e3).expect("bundled parameters are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_low > 0.0 && self.r_low < self.r_high && self.r_high.is_finite()) {
            return Err(EmulationError::Config(format!(
                "need 0 < R0 < R1, got R0={}, R1={}",
                self.r_low, self.r_high
            )));
        }
        if self.kappa == 0.0 || !self.kappa.is_finite() {
            return Err(EmulationError::Config("kappa must be finite and non-zero".into()));
        }
        if self.p < 1 {
            return Err(EmulationError::Config("window exponent p must be >= 1".into()));
        }
        if !(self.z0 > 0.0 && self.z0 < 1.0) {
            return Err(EmulationError::Config(format!("z0 = {} outside (0, 1)", self.z0)));
        }
        Ok(())
    }

    /// `w(z) = 1 - (2z - 1)^(2p)`
    pub fn window(&self, z: f64) -> f64 {
        1.0 - (2.0 * z - 1.0).powi(2 * self.p as i32)
    }

    /// `dz/dt = kappa w(z) i`
    pub fn state_derivative(&self, z: f64, current: f64) -> f64 {
        self.kappa * self.window(z) * current
    }

    pub fn resistance(&self, z: f64) -> f64 {
        self.r_low * z + self.r_high * (1.0 - z)
    }

    pub fn initial_resistance(&self) -> f64 {
        self.resistance(self.z0)
    }

    fn require_p1(&self) -> Result<()> {
        if self.p != 1 {
            return Err(EmulationError::Config(format!(
                "closed-form charge relation needs p = 1, got p = {}",
                self.p
            )));
        }
        Ok(())
    }

    /// `lambda_1(z) = ln(z / (1 - z)) / (4 kappa)` for `p = 1`.
    pub fn lambda(&self, z: f64) -> Result<f64> {
        self.require_p1()?;
        if !(z > 0.0 && z < 1.0) {
            return Err(EmulationError::Domain(format!("lambda needs z in (0, 1), got {z}")));
        }
        Ok((z / (1.0 - z)).ln() / (4.0 * self.kappa))
    }

    /// Logistic inverse of [`lambda`](Self::lambda).
    pub fn lambda_inverse(&self, x: f64) -> Result<f64> {
        self.require_p1()?;
        Ok(1.0 / (1.0 + (-4.0 * self.kappa * x).exp()))
    }

    /// Memristance as a function of the charge passed since `t0` (`q0 = 0`):
    /// `R1 + (R0 - R1) / (1 + gamma exp(-4 kappa q))`.
    pub fn resistance_of_charge(&self, q: f64) -> Result<f64> {
        self.require_p1()?;
        let r_init = self.initial_resistance();
        if !(r_init > self.r_low && r_init < self.r_high) {
            return Err(EmulationError::Config(format!(
                "initial resistance {r_init} outside ({}, {})",
                self.r_low, self.r_high
            )));
        }
        let gamma = (r_init - self.r_low) / (self.r_high - r_init);
        Ok(self.r_high + (self.r_low - self.r_high) / (1.0 + gamma * (-4.0 * self.kappa * q).exp()))
    }
}

/// HP model wrapped as a voltage-controlled memristive system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpModel {
    pub params: HpParameters,
}

impl HpModel {
    pub fn new(params: HpParameters) -> Self {
        Self { params }
    }
}

impl MemristiveModel for HpModel {
    fn initial_state(&self) -> Vec<f64> {
        vec![self.params.z0]
    }

    fn memductance(&self, z: &[f64], _u: f64) -> f64 {
        1.0 / self.params.resistance(z[0])
    }

    fn state_derivative(&self, z: &[f64], u: f64, out: &mut [f64]) {
        let current = u / self.params.resistance(z[0]);
        out[0] = self.params.state_derivative(z[0], current);
    }

    fn project(&self, z: &mut [f64]) {
        z[0] = z[0].clamp(STATE_EPSILON, 1.0 - STATE_EPSILON);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let p = HpParameters::table_iii();
        assert_eq!(p.r_high, 10e3);
        assert_eq!(p.r_low, 100e-6);
        assert!((p.initial_resistance() - 9e3).abs() < 1e-9);
    }

    #[test]
    fn derivative_examples() {
        let p = HpParameters::table_iii();
        assert!((p.state_derivative(0.5, 2e-3) - p.kappa * 2e-3).abs() < 1e-12);
        assert_eq!(p.state_derivative(0.0, 1.0), 0.0);
        assert_eq!(p.state_derivative(1.0, 1.0), 0.0);
        // 18.5 per mC, w(0.25) = 0.75, 1 mA
        assert!((p.state_derivative(0.25, 1e-3) - 13.875).abs() < 1e-12);
    }

    #[test]
    fn charge_relation_limits() {
        let p = HpParameters::table_iii();
        assert!((p.resistance_of_charge(0.0).unwrap() - 9e3).abs() < 1e-9);
        assert!((p.resistance_of_charge(1.0).unwrap() - p.r_low).abs() < 1e-9);
        assert!((p.resistance_of_charge(-1.0).unwrap() - p.r_high).abs() < 1e-9);
    }

    #[test]
    fn lambda_properties() {
        let p = HpParameters::table_iii();
        assert_eq!(p.lambda(0.5).unwrap(), 0.0);
        for z in [0.01, 0.2, 0.37, 0.9] {
            assert!((p.lambda(z).unwrap() + p.lambda(1.0 - z).unwrap()).abs() < 1e-15);
        }
        assert!(p.lambda(0.0).is_err());
        assert!(p.lambda(1.0).is_err());
    }

    #[test]
    fn closed_form_needs_p1() {
        let p = HpParameters::new(1.0, 10.0, 1.0, 2, 0.5).unwrap();
        assert!(p.resistance_of_charge(0.0).is_err());
        assert!(p.lambda(0.5).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(HpParameters::new(10.0, 1.0, 1.0, 1, 0.5).is_err());
        assert!(HpParameters::new(1.0, 10.0, 0.0, 1, 0.5).is_err());
        assert!(HpParameters::new(1.0, 10.0, 1.0, 0, 0.5).is_err());
        assert!(HpParameters::new(1.0, 10.0, 1.0, 1, 1.0).is_err());
        assert!(HpParameters::with_initial_resistance(1.0, 10.0, 1.0, 1, 10.0).is_err());
    }
}
