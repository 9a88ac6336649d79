//! Bundled models with their emulation and excitation defaults.

use std::f64::consts::PI;

use super::device::{Device, ValidationCircuit};
use super::excitation::{Excitation, Waveform};
use crate::dbmd::{DbmdNetwork, DbmdParameters};
use crate::error::{EmulationError, Result};
use crate::models::{
    binary_switch_curve, continuous_curve, CharacteristicCurve, CurveModel, HpModel, HpParameters, MultilevelModel,
    MultilevelParameters, BINARY_THRESHOLD_FRACTION, BINARY_TRANSITION_FRACTION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Binary,
    Continuous,
    Hp,
    Multilevel,
    Dbmd,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Binary,
        ModelKind::Continuous,
        ModelKind::Hp,
        ModelKind::Multilevel,
        ModelKind::Dbmd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Binary => "binary",
            ModelKind::Continuous => "continuous",
            ModelKind::Hp => "hp",
            ModelKind::Multilevel => "multilevel",
            ModelKind::Dbmd => "dbmd",
        }
    }

    pub fn defaults(&self) -> TableDefaults {
        let base = TableDefaults {
            t0: 0.0,
            period: 1e-3,
            iterations: 1,
            waveform: Waveform::Triangular,
            amplitude: 5.0,
            negative_amplitude: None,
            frequencies: vec![1.0, 2.0],
            periods: 2.0,
        };
        match self {
            ModelKind::Binary | ModelKind::Continuous | ModelKind::Multilevel => base,
            ModelKind::Hp => TableDefaults {
                amplitude: 1.0,
                frequencies: vec![1.0, 1.5],
                ..base
            },
            ModelKind::Dbmd => TableDefaults {
                period: 10e-3,
                iterations: 6,
                amplitude: 3.0,
                negative_amplitude: Some(-2.0),
                frequencies: vec![0.01, 0.1, 1.0],
                periods: 3.0,
                ..base
            },
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = EmulationError;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EmulationError::Config(format!("unknown model `{s}`")))
    }
}

/// Emulation and drive settings listed with each parameter table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableDefaults {
    pub t0: f64,
    pub period: f64,
    pub iterations: usize,
    pub waveform: Waveform,
    pub amplitude: f64,
    pub negative_amplitude: Option<f64>,
    pub frequencies: Vec<f64>,
    /// Run length in periods of the lowest frequency.
    pub periods: f64,
}

impl TableDefaults {
    pub fn excitation(&self, frequency: f64) -> Result<Excitation> {
        let exc = Excitation::new(self.waveform, self.amplitude, frequency)?;
        match self.negative_amplitude {
            Some(e) => exc.with_negative_amplitude(e),
            None => Ok(exc),
        }
    }

    /// Sine flux amplitude `E / (pi F1)` at the first listed frequency.
    pub fn sine_flux_amplitude(&self) -> f64 {
        self.amplitude / (PI * self.frequencies[0])
    }

    pub fn t_stop(&self, frequency: f64) -> f64 {
        self.t0 + self.periods / frequency
    }
}

/// Fully parameterized device description.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Binary {
        g_off: f64,
        g_on: f64,
        phi_max: f64,
        threshold: f64,
        width: f64,
    },
    Continuous {
        g_low: f64,
        g_high: f64,
        phi_max: f64,
    },
    Hp(HpParameters),
    Multilevel(MultilevelParameters),
    Dbmd(DbmdParameters),
    Curve {
        curve: CharacteristicCurve,
        initial_flux: f64,
    },
}

impl ModelSpec {
    /// Table values. The synthetic binary and continuous curves span the
    /// sine flux amplitude of their identification drive.
    pub fn bundled(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Binary => {
                let phi_s = kind.defaults().sine_flux_amplitude();
                ModelSpec::Binary {
                    g_off: 100e-6,
                    g_on: 3.0,
                    phi_max: phi_s,
                    threshold: BINARY_THRESHOLD_FRACTION * phi_s,
                    width: BINARY_TRANSITION_FRACTION * phi_s,
                }
            }
            ModelKind::Continuous => ModelSpec::Continuous {
                g_low: 100e-6,
                g_high: 3.0,
                phi_max: kind.defaults().sine_flux_amplitude(),
            },
            ModelKind::Hp => ModelSpec::Hp(HpParameters::table_iii()),
            ModelKind::Multilevel => ModelSpec::Multilevel(MultilevelParameters::table_iv(10)),
            ModelKind::Dbmd => ModelSpec::Dbmd(DbmdParameters::table_v()),
        }
    }

    pub fn kind(&self) -> Option<ModelKind> {
        match self {
            ModelSpec::Binary { .. } => Some(ModelKind::Binary),
            ModelSpec::Continuous { .. } => Some(ModelKind::Continuous),
            ModelSpec::Hp(_) => Some(ModelKind::Hp),
            ModelSpec::Multilevel(_) => Some(ModelKind::Multilevel),
            ModelSpec::Dbmd(_) => Some(ModelKind::Dbmd),
            ModelSpec::Curve { .. } => None,
        }
    }

    /// Characteristic curve of curve-based models.
    pub fn characteristic(&self) -> Result<Option<CharacteristicCurve>> {
        Ok(match self {
            ModelSpec::Binary {
                g_off,
                g_on,
                phi_max,
                threshold,
                width,
            } => Some(binary_switch_curve(*g_off, *g_on, *phi_max, *threshold, *width)?),
            ModelSpec::Continuous { g_low, g_high, phi_max } => Some(continuous_curve(*g_low, *g_high, *phi_max)?),
            ModelSpec::Curve { curve, .. } => Some(curve.clone()),
            _ => None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Hp(p) => p.validate(),
            ModelSpec::Multilevel(p) => p.validate(),
            ModelSpec::Dbmd(p) => p.validate(),
            _ => self.characteristic().map(|_| ()),
        }
    }

    /// Builds a fresh device instance for sampling period `period`.
    pub fn build(&self, period: f64) -> Result<Box<dyn Device>> {
        self.validate()?;
        Ok(match self {
            ModelSpec::Hp(p) => Box::new(ValidationCircuit::new(HpModel::new(*p), period)?),
            ModelSpec::Multilevel(p) => Box::new(ValidationCircuit::new(MultilevelModel::new(*p), period)?),
            ModelSpec::Dbmd(p) => Box::new(DbmdNetwork::new(*p, period)?),
            ModelSpec::Curve { curve, initial_flux } => Box::new(ValidationCircuit::new(
                CurveModel::new(curve.clone(), *initial_flux)?,
                period,
            )?),
            _ => {
                let curve = self.characteristic()?.expect("curve-based model");
                Box::new(ValidationCircuit::new(CurveModel::new(curve, 0.0)?, period)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kinds() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
        assert!("memristor".parse::<ModelKind>().is_err());
    }

    #[test]
    fn bundled_models_build() {
        for k in ModelKind::ALL {
            let d = k.defaults();
            ModelSpec::bundled(k).build(d.period).unwrap();
        }
    }

    #[test]
    fn dbmd_defaults() {
        let d = ModelKind::Dbmd.defaults();
        assert_eq!(d.period, 10e-3);
        assert_eq!(d.iterations, 6);
        assert_eq!(d.frequencies, vec![0.01, 0.1, 1.0]);
        let exc = d.excitation(0.01).unwrap();
        assert_eq!(exc.negative_amplitude, Some(-2.0));
    }
}
