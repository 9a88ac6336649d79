//! Constitutive relations of the three device regions and the shared state
//! equation.

use super::DbmdParameters;
use crate::error::{EmulationError, Result};

/// Largest accepted `sinh` argument of the state equation.
pub const SINH_ARGUMENT_LIMIT: f64 = 700.0;
/// Below this Schottky voltage the zero-bias limit is used.
pub const SCHOTTKY_ZERO_THRESHOLD: f64 = 1e-15;
/// Below this tunnel voltage the zero-bias limit is used.
pub const TUNNEL_ZERO_THRESHOLD: f64 = 1e-9;

fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn check_state(z: f64) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(EmulationError::Domain(format!("state z = {z} outside [0, 1]")))
    }
}

impl DbmdParameters {
    /// `w(z) = (1 - 2 w0)(1 - (2z - 1)^(2p)) + w0`
    pub fn window(&self, z: f64) -> f64 {
        (1.0 - 2.0 * self.w0) * (1.0 - (2.0 * z - 1.0).powi(2 * self.p as i32)) + self.w0
    }

    /// Activation energy, switched by the polarity of the terminal voltage.
    pub fn activation_energy(&self, u: f64, z: f64) -> f64 {
        step(u) * (self.phi_a1 + z * (self.phi_a0 - self.phi_a1) - self.phi_ar) + self.phi_ar
    }

    /// Share of the Schottky voltage acting on the ions under negative bias.
    pub fn schottky_feedback_voltage(&self, u: f64, u_s: f64, z: f64) -> f64 {
        step(-u) * (1.0 - z) * u_s
    }

    /// Ion-hopping state equation `dz/dt`.
    pub fn state_derivative(&self, z: f64, u: f64, u_s: f64, u_e: f64) -> Result<f64> {
        let x = (self.schottky_feedback_voltage(u, u_s, z) + u_e - self.u_c) / self.u_e_ref;
        if !(x.abs() <= SINH_ARGUMENT_LIMIT) {
            return Err(EmulationError::numeric(format!(
                "state equation sinh argument {x} out of range"
            )));
        }
        Ok(-self.z_dot * self.window(z) / self.activation_energy(u, z).exp() * x.sinh())
    }

    pub fn barrier_height(&self, z: f64) -> f64 {
        self.phi_s0 + z * (self.phi_s1 - self.phi_s0)
    }

    pub fn ideality(&self, z: f64) -> f64 {
        self.n0 + z * (self.n1 - self.n0)
    }

    /// Schottky current and its derivative with respect to `u_s`.
    pub fn schottky_current(&self, u_s: f64, z: f64) -> (f64, f64) {
        let nut = self.ideality(z) * self.u_theta;
        let x = u_s / nut;
        let phi = self.barrier_height(z);
        if u_s >= 0.0 {
            let e = (-phi).exp();
            return (self.i_s * x.exp_m1() * e, self.i_s * x.exp() / nut * e);
        }
        let scale = self.alpha_s * self.u_theta;
        let s = (-2.0 * u_s / scale).sqrt();
        let e = (-phi - self.alpha_f * s).exp();
        let current = self.i_s * x.exp_m1() * e;
        let slope = self.i_s * e * (x.exp() / nut + x.exp_m1() * self.alpha_f / (s * scale));
        (current, slope)
    }

    /// Zero-bias Schottky resistance `n(z) U_theta exp(phi_s(z)) / I_s`.
    pub fn schottky_zero_bias_resistance(&self, z: f64) -> f64 {
        self.ideality(z) * self.u_theta * self.barrier_height(z).exp() / self.i_s
    }

    pub fn schottky_resistance(&self, u_s: f64, z: f64) -> Result<f64> {
        check_state(z)?;
        if u_s.abs() < SCHOTTKY_ZERO_THRESHOLD {
            return Ok(self.schottky_zero_bias_resistance(z));
        }
        Ok(u_s / self.schottky_current(u_s, z).0)
    }

    pub fn electrolyte_resistance(&self, z: f64) -> f64 {
        self.r_e0 + z * (self.r_e1 - self.r_e0)
    }

    pub fn tunnel_thickness(&self, z: f64) -> f64 {
        self.alpha_t0 + z * (self.alpha_t1 - self.alpha_t0)
    }

    fn tunnel_barrier(&self, u_t: f64) -> Result<f64> {
        let phi = self.phi_t0 + u_t / (2.0 * self.u_theta);
        if phi > 0.0 {
            Ok(phi)
        } else {
            Err(EmulationError::Domain(format!(
                "tunnel voltage {u_t} V collapses the barrier"
            )))
        }
    }

    /// `g = phi exp(-alpha sqrt(phi))` and `dg/dphi`.
    fn tunnel_g(phi: f64, alpha: f64) -> (f64, f64) {
        let r = phi.sqrt();
        let e = (-alpha * r).exp();
        (phi * e, e * (1.0 - 0.5 * alpha * r))
    }

    /// Tunnel current and its derivative with respect to `u_t`.
    pub fn tunnel_current(&self, u_t: f64, z: f64) -> Result<(f64, f64)> {
        let alpha = self.tunnel_thickness(z);
        let (g_minus, dg_minus) = Self::tunnel_g(self.tunnel_barrier(-u_t)?, alpha);
        let (g_plus, dg_plus) = Self::tunnel_g(self.tunnel_barrier(u_t)?, alpha);
        let k = self.i_t / (alpha * alpha);
        let current = k * (g_minus - g_plus);
        let slope = -k / (2.0 * self.u_theta) * (dg_minus + dg_plus);
        Ok((current, slope))
    }

    pub fn tunnel_zero_bias_resistance(&self, z: f64) -> f64 {
        let alpha = self.tunnel_thickness(z);
        let (_, dg) = Self::tunnel_g(self.phi_t0, alpha);
        alpha * alpha * self.u_theta / (self.i_t * -dg)
    }

    pub fn tunnel_resistance(&self, u_t: f64, z: f64) -> Result<f64> {
        check_state(z)?;
        if u_t.abs() < TUNNEL_ZERO_THRESHOLD {
            self.tunnel_barrier(0.0)?;
            return Ok(self.tunnel_zero_bias_resistance(z));
        }
        Ok(u_t / self.tunnel_current(u_t, z)?.0)
    }
}
