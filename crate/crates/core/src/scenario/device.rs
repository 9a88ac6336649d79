use crate::dbmd::DbmdNetwork;
use crate::error::Result;
use crate::models::MemristiveModel;
use crate::port::{FixedPointConfig, MemristivePort};
use crate::wave::resistive_source_wave;

/// Internal resistance of the validation source (ohm).
pub const SOURCE_RESISTANCE: f64 = 0.1;

/// Terminal quantities of a device for one sampling instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceSample {
    pub u: f64,
    pub i: f64,
    pub z: Vec<f64>,
    pub g: f64,
    pub regions: Option<[f64; 3]>,
    pub residual: f64,
}

/// Anything that can be driven by the resistive validation source.
pub trait Device {
    /// Advances one instance for the source voltage `e`.
    fn step(&mut self, e: f64, cfg: &FixedPointConfig) -> Result<DeviceSample>;
}

impl<D: Device + ?Sized> Device for Box<D> {
    fn step(&mut self, e: f64, cfg: &FixedPointConfig) -> Result<DeviceSample> {
        (**self).step(e, cfg)
    }
}

/// Resistive voltage source directly coupled to a memristive port. The port
/// resistance equals the source resistance, so the source is reflection-free
/// and simply emits `e`.
#[derive(Debug, Clone)]
pub struct ValidationCircuit<M> {
    port: MemristivePort<M>,
}

impl<M: MemristiveModel> ValidationCircuit<M> {
    pub fn new(model: M, period: f64) -> Result<Self> {
        Self::with_source_resistance(model, SOURCE_RESISTANCE, period)
    }

    pub fn with_source_resistance(model: M, r0: f64, period: f64) -> Result<Self> {
        Ok(Self {
            port: MemristivePort::new(model, r0, period)?,
        })
    }

    pub fn port(&self) -> &MemristivePort<M> {
        &self.port
    }
}

impl<M: MemristiveModel> Device for ValidationCircuit<M> {
    fn step(&mut self, e: f64, cfg: &FixedPointConfig) -> Result<DeviceSample> {
        let a = resistive_source_wave(e, self.port.resistance());
        let s = self.port.step(a, cfg)?;
        Ok(DeviceSample {
            u: s.voltage,
            i: s.current,
            z: s.state,
            g: s.memductance,
            regions: None,
            residual: s.residual,
        })
    }
}

impl Device for DbmdNetwork {
    fn step(&mut self, e: f64, cfg: &FixedPointConfig) -> Result<DeviceSample> {
        let s = DbmdNetwork::step(self, e, cfg)?;
        Ok(DeviceSample {
            u: s.voltage,
            i: s.current,
            z: vec![s.state],
            g: s.conductance,
            regions: Some([s.u_schottky, s.u_electrolyte, s.u_tunnel]),
            residual: s.residual,
        })
    }
}
