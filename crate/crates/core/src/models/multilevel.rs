use super::MemristiveModel;
use crate::error::{EmulationError, Result};

/// Generic multilevel resistance device with `n + 1` memductance levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultilevelParameters {
    /// High memductance (S).
    pub g_high: f64,
    /// Low memductance (S).
    pub g_low: f64,
    /// Reset/retention voltage (V).
    pub u_reset: f64,
    /// Refinement level.
    pub n: u32,
    pub z0: f64,
}

impl MultilevelParameters {
    pub fn new(g_high: f64, g_low: f64, u_reset: f64, n: u32) -> Result<Self> {
        let p = Self {
            g_high,
            g_low,
            u_reset,
            n,
            z0: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// G1 = 3 S, G0 = 100 uS, U0 = 0.1 V.
    pub fn table_iv(n: u32) -> Self {
        Self::new(3.0, 100e-6, 0.1, n).expect("bundled parameters are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_high > self.g_low && self.g_low > 0.0 && self.g_high.is_finite()) {
            return Err(EmulationError::Config(format!(
                "need G1 > G0 > 0, got G1={}, G0={}",
                self.g_high, self.g_low
            )));
        }
        if self.n < 1 {
            return Err(EmulationError::Config("refinement level n must be >= 1".into()));
        }
        if !self.u_reset.is_finite() || !self.z0.is_finite() {
            return Err(EmulationError::Config("U0 and z0 must be finite".into()));
        }
        Ok(())
    }

    pub fn state_step(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    pub fn delta_g(&self) -> f64 {
        self.g_high - self.g_low
    }

    /// Number of thresholds `nu * dz` exceeded by `z` or by `-z`.
    pub fn level_count(&self, z: f64) -> u32 {
        let dz = self.state_step();
        let mut h = 0;
        for nu in 1..=self.n {
            let th = nu as f64 * dz;
            // unit step is zero at the origin
            if z - th > 0.0 {
                h += 1;
            }
            if -z - th > 0.0 {
                h += 1;
            }
        }
        h
    }

    pub fn memductance(&self, z: f64) -> f64 {
        self.g_high - self.delta_g() / self.n as f64 * self.level_count(z) as f64
    }

    /// `dz/dt = u + U0`
    pub fn state_derivative(&self, u: f64) -> f64 {
        u + self.u_reset
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultilevelModel {
    pub params: MultilevelParameters,
}

impl MultilevelModel {
    pub fn new(params: MultilevelParameters) -> Self {
        Self { params }
    }
}

impl MemristiveModel for MultilevelModel {
    fn initial_state(&self) -> Vec<f64> {
        vec![self.params.z0]
    }

    fn memductance(&self, z: &[f64], _u: f64) -> f64 {
        self.params.memductance(z[0])
    }

    fn state_derivative(&self, _z: &[f64], u: f64, out: &mut [f64]) {
        out[0] = self.params.state_derivative(u);
    }
}
