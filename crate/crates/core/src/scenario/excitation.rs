use std::f64::consts::PI;

use crate::error::{EmulationError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveform {
    Sine,
    Triangular,
}

impl std::str::FromStr for Waveform {
    type Err = EmulationError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sine" | "sin" => Ok(Waveform::Sine),
            "triangular" | "triangle" | "tri" => Ok(Waveform::Triangular),
            other => Err(EmulationError::Config(format!("unknown waveform `{other}`"))),
        }
    }
}

/// Periodic source voltage. With `negative_amplitude` set, negative
/// half-cycles are rescaled by `|E-| / E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excitation {
    pub waveform: Waveform,
    pub amplitude: f64,
    pub negative_amplitude: Option<f64>,
    pub frequency: f64,
}

impl Excitation {
    pub fn new(waveform: Waveform, amplitude: f64, frequency: f64) -> Result<Self> {
        let exc = Self {
            waveform,
            amplitude,
            negative_amplitude: None,
            frequency,
        };
        exc.validate()?;
        Ok(exc)
    }

    pub fn sine(amplitude: f64, frequency: f64) -> Result<Self> {
        Self::new(Waveform::Sine, amplitude, frequency)
    }

    pub fn triangular(amplitude: f64, frequency: f64) -> Result<Self> {
        Self::new(Waveform::Triangular, amplitude, frequency)
    }

    pub fn with_negative_amplitude(mut self, e_minus: f64) -> Result<Self> {
        self.negative_amplitude = Some(e_minus);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(EmulationError::Config(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(EmulationError::Config(format!(
                "frequency must be positive, got {}",
                self.frequency
            )));
        }
        if let Some(e) = self.negative_amplitude {
            if !(e < 0.0 && e.is_finite()) {
                return Err(EmulationError::Config(format!(
                    "negative amplitude must be < 0, got {e}"
                )));
            }
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        1.0 / self.frequency
    }

    pub fn sample(&self, t: f64) -> f64 {
        let phase = 2.0 * PI * self.frequency * t;
        let v = match self.waveform {
            Waveform::Sine => self.amplitude * phase.sin(),
            Waveform::Triangular => 2.0 * self.amplitude / PI * phase.sin().asin(),
        };
        match self.negative_amplitude {
            Some(e_minus) if v < 0.0 => v * e_minus.abs() / self.amplitude,
            _ => v,
        }
    }

    /// Peak flux `E / (pi F)` reached by the sine drive after half a period.
    pub fn sine_flux_amplitude(&self) -> f64 {
        self.amplitude / (PI * self.frequency)
    }

    /// Peak flux `E / (4F)` of the triangular drive, `pi/4` of the sine value.
    pub fn triangular_flux_amplitude(&self) -> f64 {
        self.amplitude / (4.0 * self.frequency)
    }
}

pub fn sine_sample(exc: &Excitation, t: f64) -> f64 {
    Excitation {
        waveform: Waveform::Sine,
        ..*exc
    }
    .sample(t)
}

pub fn triangular_sample(exc: &Excitation, t: f64) -> f64 {
    Excitation {
        waveform: Waveform::Triangular,
        ..*exc
    }
    .sample(t)
}
