use crate::error::{EmulationError, Result};

/// Physical parameters of the double-barrier device plus the free port
/// resistances of its wave digital realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbmdParameters {
    // state equation
    /// Normalized average ion velocity (Hz).
    pub z_dot: f64,
    /// Reference electrolyte voltage (V).
    pub u_e_ref: f64,
    pub phi_a0: f64,
    pub phi_a1: f64,
    pub phi_ar: f64,
    pub w0: f64,
    pub p: u32,
    /// Coulomb voltage (V).
    pub u_c: f64,
    // electrolyte
    pub r_e0: f64,
    pub r_e1: f64,
    pub c_e: f64,
    // Schottky contact
    pub phi_s0: f64,
    pub phi_s1: f64,
    /// Normalization thickness (m); not used by any equation.
    pub d_s: f64,
    pub alpha_s: f64,
    pub i_s: f64,
    pub n0: f64,
    pub n1: f64,
    pub alpha_f: f64,
    pub u_theta: f64,
    // tunnel barrier
    pub phi_t0: f64,
    pub alpha_t0: f64,
    pub alpha_t1: f64,
    pub i_t: f64,
    pub c_t: f64,
    // network
    pub r1: f64,
    pub r3: f64,
    pub r7: f64,
    pub r_source: f64,
    pub z0: f64,
}

impl DbmdParameters {
    pub fn table_v() -> Self {
        Self {
            z_dot: 0.32e12,
            u_e_ref: 0.3232,
            phi_a0: 26.3,
            phi_a1: 36.75,
            phi_ar: 30.17,
            w0: 100e-6,
            p: 6,
            u_c: 0.1e-3,
            r_e0: 2e6,
            r_e1: 5.1e6,
            c_e: 17.4e-15,
            phi_s0: 27.08,
            phi_s1: 34.81,
            d_s: 1.326e-9,
            alpha_s: 3.77,
            i_s: 0.108,
            n0: 2.9,
            n1: 4.1,
            alpha_f: -1.25,
            u_theta: 0.026,
            phi_t0: 108.32,
            alpha_t0: 1.81,
            alpha_t1: 2.03,
            i_t: 0.4326,
            c_t: 20.7e-15,
            r1: 1.0,
            r3: 10e6,
            r7: 1e9,
            r_source: 0.1,
            z0: 0.5,
        }
    }

    /// Same device with both parasitic capacitors removed.
    pub fn resistive_only(mut self) -> Self {
        self.c_e = 0.0;
        self.c_t = 0.0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("z_dot", self.z_dot),
            ("u_e", self.u_e_ref),
            ("w0", self.w0),
            ("u_c", self.u_c),
            ("r_e0", self.r_e0),
            ("r_e1", self.r_e1),
            ("alpha_s", self.alpha_s),
            ("i_s", self.i_s),
            ("n0", self.n0),
            ("u_theta", self.u_theta),
            ("phi_t0", self.phi_t0),
            ("alpha_t0", self.alpha_t0),
            ("i_t", self.i_t),
            ("r1", self.r1),
            ("r3", self.r3),
            ("r7", self.r7),
            ("r_source", self.r_source),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EmulationError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("c_e", self.c_e), ("c_t", self.c_t)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(EmulationError::Config(format!("{name} must be >= 0, got {v}")));
            }
        }
        let finite = [
            self.phi_a0,
            self.phi_a1,
            self.phi_ar,
            self.phi_s0,
            self.phi_s1,
            self.alpha_f,
            self.n1,
            self.alpha_t1,
            self.d_s,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(EmulationError::Config("non-finite parameter".into()));
        }
        if self.w0 >= 0.5 {
            return Err(EmulationError::Config(format!("w0 must be below 0.5, got {}", self.w0)));
        }
        if self.p < 1 {
            return Err(EmulationError::Config("window exponent p must be >= 1".into()));
        }
        if !(self.alpha_t0 < self.alpha_t1) {
            return Err(EmulationError::Config("need 0 < alpha_t0 < alpha_t1".into()));
        }
        if !(self.n0 < self.n1) {
            return Err(EmulationError::Config("need n0 < n1".into()));
        }
        if !(0.0..=1.0).contains(&self.z0) {
            return Err(EmulationError::Config(format!("z0 = {} outside [0, 1]", self.z0)));
        }
        Ok(())
    }

    /// Sets a parameter by its config key. Returns false for unknown keys.
    pub fn set(&mut self, key: &str, value: f64) -> Result<bool> {
        let slot = match key {
            "z_dot" | "zdot" => &mut self.z_dot,
            "u_e" => &mut self.u_e_ref,
            "phi_a0" => &mut self.phi_a0,
            "phi_a1" => &mut self.phi_a1,
            "phi_ar" => &mut self.phi_ar,
            "w0" => &mut self.w0,
            "p" => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(EmulationError::Config(format!(
                        "p must be a positive integer, got {value}"
                    )));
                }
                self.p = value as u32;
                return Ok(true);
            }
            "u_c" => &mut self.u_c,
            "r_e0" => &mut self.r_e0,
            "r_e1" => &mut self.r_e1,
            "c_e" => &mut self.c_e,
            "phi_s0" => &mut self.phi_s0,
            "phi_s1" => &mut self.phi_s1,
            "d_s" => &mut self.d_s,
            "alpha_s" => &mut self.alpha_s,
            "i_s" => &mut self.i_s,
            "n0" => &mut self.n0,
            "n1" => &mut self.n1,
            "alpha_f" => &mut self.alpha_f,
            "u_theta" => &mut self.u_theta,
            "phi_t0" => &mut self.phi_t0,
            "alpha_t0" => &mut self.alpha_t0,
            "alpha_t1" => &mut self.alpha_t1,
            "i_t" => &mut self.i_t,
            "c_t" => &mut self.c_t,
            "r1" => &mut self.r1,
            "r3" => &mut self.r3,
            "r7" => &mut self.r7,
            "r0" | "r_source" => &mut self.r_source,
            "z0" => &mut self.z0,
            _ => return Ok(false),
        };
        *slot = value;
        Ok(true)
    }
}

impl Default for DbmdParameters {
    fn default() -> Self {
        Self::table_v()
    }
}
