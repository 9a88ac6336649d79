//! Memristive one-port terminated in the wave domain.
//!
//! The port equation `b = rho(G(z, (a + b) / 2)) a` is implicit in `b` and,
//! through the state, in the integrator output. It is resolved by a fixed
//! number of sweeps around the loop
//! `G(z, u) -> b -> u -> f(z, u) -> z`, after which the integrator is
//! committed exactly once.

use crate::error::{EmulationError, Result};
use crate::integrator::{IntegratorState, StateReadout};
use crate::models::MemristiveModel;
use crate::wave::{clamp_memductance, rho_unchecked};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig {
    /// Number of loop evaluations per instance (`n_i`).
    pub iterations: usize,
    /// Early exit once the port residual drops below this (V).
    pub tolerance: Option<f64>,
}

impl FixedPointConfig {
    pub fn new(iterations: usize) -> Result<Self> {
        let cfg = Self {
            iterations,
            tolerance: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(EmulationError::Config("iteration count n_i must be >= 1".into()));
        }
        if let Some(tol) = self.tolerance {
            if !(tol >= 0.0) {
                return Err(EmulationError::Config(format!("invalid residual tolerance {tol}")));
            }
        }
        Ok(())
    }
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            iterations: 1,
            tolerance: None,
        }
    }
}

/// Outcome of one sampling instance at a memristive port.
#[derive(Debug, Clone, PartialEq)]
pub struct PortSolution {
    pub b: f64,
    pub voltage: f64,
    pub current: f64,
    /// Memductance that produced `b`.
    pub memductance: f64,
    /// State sample `z(t_k)`.
    pub state: Vec<f64>,
    /// `|b - rho(G(z, u)) a|` with the final state.
    pub residual: f64,
    pub sweeps: usize,
}

/// Final residual above which a run of growing sweep deltas counts as divergence.
pub(crate) fn divergence_threshold(scale: f64) -> f64 {
    1e-6 * scale.abs().max(1.0)
}

/// Rejects sweep sequences whose update keeps growing and ends far from a
/// solution.
pub(crate) fn check_divergence(deltas: &[f64], residual: f64, scale: f64) -> Result<()> {
    if !residual.is_finite() {
        return Err(EmulationError::numeric("non-finite fixed-point residual"));
    }
    let growing = deltas.len() >= 3 && deltas.windows(2).all(|w| w[1] > w[0]);
    if growing && residual > divergence_threshold(scale) {
        return Err(EmulationError::Divergence {
            t: f64::NAN,
            deltas: deltas.to_vec(),
        });
    }
    Ok(())
}

/// A memristive model bound to a port of fixed resistance together with its
/// state integrator.
#[derive(Debug, Clone)]
pub struct MemristivePort<M> {
    model: M,
    resistance: f64,
    integrator: IntegratorState,
    f_prev: Vec<f64>,
    b_prev: f64,
}

impl<M: MemristiveModel> MemristivePort<M> {
    pub fn new(model: M, resistance: f64, period: f64) -> Result<Self> {
        Self::with_readout(model, resistance, period, StateReadout::default())
    }

    pub fn with_readout(model: M, resistance: f64, period: f64, readout: StateReadout) -> Result<Self> {
        if !(resistance > 0.0 && resistance.is_finite()) {
            return Err(EmulationError::Domain(format!(
                "port resistance must be positive and finite, got {resistance}"
            )));
        }
        let mut z0 = model.initial_state();
        model.project(&mut z0);
        let integrator = IntegratorState::with_readout(&z0, period, readout)?;
        let f_prev = vec![0.0; z0.len()];
        Ok(Self {
            model,
            resistance,
            integrator,
            f_prev,
            b_prev: 0.0,
        })
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn resistance(&self) -> f64 {
        self.resistance
    }

    pub fn integrator(&self) -> &IntegratorState {
        &self.integrator
    }

    /// Resolves the port equation for the incident wave `a` and advances the
    /// state by one instance.
    pub fn step(&mut self, a: f64, cfg: &FixedPointConfig) -> Result<PortSolution> {
        cfg.validate()?;
        if !a.is_finite() {
            return Err(EmulationError::numeric(format!("incident wave is {a}")));
        }
        let r = self.resistance;
        let dim = self.integrator.dim();

        let mut z = vec![0.0; dim];
        self.integrator.predict(&self.f_prev, &mut z);
        self.model.project(&mut z);
        let mut f = self.f_prev.clone();

        let mut b = self.b_prev;
        let mut u = 0.5 * (a + b);
        let mut g = 0.0;
        let mut deltas = Vec::with_capacity(cfg.iterations);
        let mut sweeps = 0;

        for _ in 0..cfg.iterations {
            sweeps += 1;
            g = clamp_memductance(self.model.memductance(&z, u))?;
            let b_new = rho_unchecked(g, r) * a;
            deltas.push((b_new - b).abs());
            b = b_new;
            u = 0.5 * (a + b);
            self.model.state_derivative(&z, u, &mut f);
            if f.iter().any(|v| !v.is_finite()) {
                return Err(EmulationError::numeric("state derivative is not finite"));
            }
            self.integrator.state_for(&f, &mut z);
            self.model.project(&mut z);

            if let Some(tol) = cfg.tolerance {
                if self.residual(a, b, &z)? <= tol {
                    break;
                }
            }
        }

        let residual = self.residual(a, b, &z)?;
        check_divergence(&deltas, residual, a)?;

        self.integrator.commit(&z, &f);
        // keep the stored wave inside the admissible set as well
        let mut stored = self.integrator.stored().to_vec();
        self.model.project(&mut stored);
        self.integrator.set_stored(&stored);

        self.f_prev.copy_from_slice(&f);
        self.b_prev = b;

        Ok(PortSolution {
            b,
            voltage: u,
            current: (a - b) / (2.0 * r),
            memductance: g,
            state: z,
            residual,
            sweeps,
        })
    }

    fn residual(&self, a: f64, b: f64, z: &[f64]) -> Result<f64> {
        let u = 0.5 * (a + b);
        let g = clamp_memductance(self.model.memductance(z, u))?;
        Ok((b - rho_unchecked(g, self.resistance) * a).abs())
    }
}

/// Free-function form of [`MemristivePort::step`] returning only the reflected wave.
pub fn memristive_port_step<M: MemristiveModel>(
    port: &mut MemristivePort<M>,
    a: f64,
    cfg: &FixedPointConfig,
) -> Result<f64> {
    port.step(a, cfg).map(|s| s.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::LinearResistor;

    #[test]
    fn matched_load_absorbs() {
        let mut p = MemristivePort::new(LinearResistor { conductance: 1.0 / 0.1 }, 0.1, 1e-3).unwrap();
        let cfg = FixedPointConfig::new(3).unwrap();
        for a in [1.0, -2.5, 1e3] {
            assert_eq!(memristive_port_step(&mut p, a, &cfg).unwrap(), 0.0);
        }
    }

    #[test]
    fn open_circuit_reflects() {
        let mut p = MemristivePort::new(LinearResistor { conductance: 0.0 }, 1.0, 1e-3).unwrap();
        assert_eq!(
            memristive_port_step(&mut p, 1.0, &FixedPointConfig::default()).unwrap(),
            1.0
        );
    }

    #[test]
    fn resistive_loop_current() {
        // source e with R0 = port resistance: incident wave is e
        let mut p = MemristivePort::new(LinearResistor { conductance: 3.0 }, 0.1, 1e-3).unwrap();
        let s = p.step(5.0, &FixedPointConfig::default()).unwrap();
        let oracle = 5.0 / (0.1 + 1.0 / 3.0);
        assert!((s.current - oracle).abs() < 1e-12);
        assert!((s.current - 11.538).abs() < 1e-3);
    }

    #[test]
    fn negative_memductance_is_rejected() {
        let mut p = MemristivePort::new(LinearResistor { conductance: -1.0 }, 1.0, 1e-3).unwrap();
        assert!(matches!(
            p.step(1.0, &FixedPointConfig::default()),
            Err(EmulationError::Passivity { .. })
        ));
        let mut p = MemristivePort::new(LinearResistor { conductance: -1e-16 }, 1.0, 1e-3).unwrap();
        assert_eq!(p.step(1.0, &FixedPointConfig::default()).unwrap().b, 1.0);
    }

    #[test]
    fn nan_memductance_is_numeric() {
        let mut p = MemristivePort::new(LinearResistor { conductance: f64::NAN }, 1.0, 1e-3).unwrap();
        assert!(p.step(1.0, &FixedPointConfig::default()).unwrap_err().is_numeric());
    }

    #[test]
    fn zero_iterations_rejected() {
        assert!(FixedPointConfig::new(0).is_err());
    }

    #[test]
    fn divergence_detection() {
        assert!(check_divergence(&[1.0, 2.0, 4.0], 3.0, 1.0).is_err());
        assert!(check_divergence(&[1.0, 2.0], 3.0, 1.0).is_ok());
        assert!(check_divergence(&[4.0, 2.0, 1.0], 3.0, 1.0).is_ok());
        assert!(check_divergence(&[1.0, 2.0, 4.0], 1e-12, 1.0).is_ok());
    }
}
