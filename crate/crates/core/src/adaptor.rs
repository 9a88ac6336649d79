//! Three-port series and parallel adaptors with a reflection-free port 3.

use crate::error::{EmulationError, Result};

const CONSTRAINT_TOLERANCE: f64 = 1e-12;

fn check_positive(rs: &[f64]) -> Result<()> {
    if rs.iter().all(|r| *r > 0.0 && r.is_finite()) {
        Ok(())
    } else {
        Err(EmulationError::Config(format!(
            "adaptor port resistances must be positive and finite, got {rs:?}"
        )))
    }
}

/// Series interconnection. Port 3 is reflection-free with `R3 = R1 + R2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAdaptor3 {
    r: [f64; 3],
    gamma: [f64; 3],
}

impl SeriesAdaptor3 {
    /// Builds the adaptor and derives the port-3 resistance.
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        check_positive(&[r1, r2])?;
        let r3 = r1 + r2;
        let gamma1 = r1 / r3;
        Ok(Self {
            r: [r1, r2, r3],
            // gamma2 taken as the complement so that gamma1 + gamma2 = 1 holds exactly
            gamma: [gamma1, 1.0 - gamma1, 1.0],
        })
    }

    /// Builds the adaptor from all three resistances, validating the
    /// reflection-free constraint.
    pub fn with_ports(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        check_positive(&[r1, r2, r3])?;
        if ((r1 + r2) - r3).abs() > CONSTRAINT_TOLERANCE * r3 {
            return Err(EmulationError::Config(format!(
                "series adaptor needs R3 = R1 + R2, got R1={r1}, R2={r2}, R3={r3}"
            )));
        }
        Self::new(r1, r2)
    }

    pub fn port_resistances(&self) -> [f64; 3] {
        self.r
    }

    /// Adaptor coefficient `R1 / R3`.
    pub fn gamma(&self) -> f64 {
        self.gamma[0]
    }

    pub fn scatter(&self, a: [f64; 3]) -> [f64; 3] {
        let a0 = a[0] + a[1] + a[2];
        // gamma3 = 1: b3 carries no a3 term at all, not even through rounding
        [a[0] - self.gamma[0] * a0, a[1] - self.gamma[1] * a0, -(a[0] + a[1])]
    }

    /// Scattering matrix `b = S a`.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let mut s = [[0.0; 3]; 3];
        for (k, row) in s.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = if k == j { 1.0 } else { 0.0 } - self.gamma[k];
            }
        }
        s
    }
}

/// Parallel interconnection. Port 3 is reflection-free with `G3 = G1 + G2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelAdaptor3 {
    r: [f64; 3],
    weight: [f64; 3],
}

impl ParallelAdaptor3 {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        check_positive(&[r1, r2])?;
        let (g1, g2) = (1.0 / r1, 1.0 / r2);
        let g3 = g1 + g2;
        let d1 = g1 / g3;
        Ok(Self {
            r: [r1, r2, 1.0 / g3],
            weight: [d1, 1.0 - d1, 1.0],
        })
    }

    pub fn with_ports(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        check_positive(&[r1, r2, r3])?;
        let (g1, g2, g3) = (1.0 / r1, 1.0 / r2, 1.0 / r3);
        if ((g1 + g2) - g3).abs() > CONSTRAINT_TOLERANCE * g3 {
            return Err(EmulationError::Config(format!(
                "parallel adaptor needs 1/R3 = 1/R1 + 1/R2, got R1={r1}, R2={r2}, R3={r3}"
            )));
        }
        Self::new(r1, r2)
    }

    pub fn port_resistances(&self) -> [f64; 3] {
        self.r
    }

    /// Adaptor coefficient `G1 / G3 = R3 / R1`.
    pub fn gamma(&self) -> f64 {
        self.weight[0]
    }

    pub fn scatter(&self, a: [f64; 3]) -> [f64; 3] {
        let b3 = self.weight[0] * a[0] + self.weight[1] * a[1];
        let common = b3 + a[2];
        [common - a[0], common - a[1], b3]
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let mut s = [[0.0; 3]; 3];
        for (k, row) in s.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.weight[j] - if k == j { 1.0 } else { 0.0 };
            }
        }
        s
    }
}

/// Pseudo-power balance `sum_k (a_k^2 - b_k^2) / R_k`; zero for lossless scattering.
pub fn pseudo_power(a: [f64; 3], b: [f64; 3], r: [f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] * a[k] - b[k] * b[k]) / r[k]).sum()
}
