//! Kirchhoff/wave mapping and reflection coefficients.
//!
//! Voltage waves are used throughout: `a = u + R i`, `b = u - R i` with a
//! strictly positive port resistance `R`.

use crate::error::{EmulationError, Result};

/// Memductances below this are treated as rounding noise and clamped to zero.
pub const NEGATIVE_MEMDUCTANCE_TOLERANCE: f64 = 1e-15;

/// Incident/reflected wave pair at a port of fixed resistance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Port {
    resistance: f64,
    /// Incident wave (V).
    pub a: f64,
    /// Reflected wave (V).
    pub b: f64,
}

impl Port {
    pub fn new(resistance: f64) -> Result<Self> {
        check_resistance(resistance)?;
        Ok(Self {
            resistance,
            a: 0.0,
            b: 0.0,
        })
    }

    pub fn resistance(&self) -> f64 {
        self.resistance
    }

    pub fn voltage(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn current(&self) -> f64 {
        (self.a - self.b) / (2.0 * self.resistance)
    }

    /// Sets both waves from a Kirchhoff pair.
    pub fn set_kirchhoff(&mut self, u: f64, i: f64) {
        self.a = u + self.resistance * i;
        self.b = u - self.resistance * i;
    }
}

fn check_resistance(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(EmulationError::Domain(format!(
            "port resistance must be positive and finite, got {r}"
        )))
    }
}

pub fn kirchhoff_to_wave(u: f64, i: f64, r: f64) -> Result<(f64, f64)> {
    check_resistance(r)?;
    Ok((u + r * i, u - r * i))
}

pub fn wave_to_kirchhoff(a: f64, b: f64, r: f64) -> Result<(f64, f64)> {
    check_resistance(r)?;
    Ok((0.5 * (a + b), (a - b) / (2.0 * r)))
}

/// `rho = (1 - R G) / (1 + R G)` for a memductance `G >= 0`.
///
/// `G = +inf` is accepted and yields the short-circuit value `-1`.
pub fn reflection_coefficient(memductance: f64, r: f64) -> Result<f64> {
    check_resistance(r)?;
    let g = clamp_memductance(memductance)?;
    Ok(rho_unchecked(g, r))
}

/// Rejects NaN and clearly negative memductances, clamps rounding noise to zero.
pub fn clamp_memductance(g: f64) -> Result<f64> {
    if g.is_nan() {
        return Err(EmulationError::numeric("memductance evaluated to NaN"));
    }
    if g < -NEGATIVE_MEMDUCTANCE_TOLERANCE {
        return Err(EmulationError::Passivity { memductance: g });
    }
    Ok(g.max(0.0))
}

#[inline]
pub(crate) fn rho_unchecked(g: f64, r: f64) -> f64 {
    if g.is_infinite() {
        return -1.0;
    }
    let rg = r * g;
    (1.0 - rg) / (1.0 + rg)
}

/// Wave emitted by a resistive voltage source whose port resistance equals
/// its internal resistance. The returning wave is absorbed.
pub fn resistive_source_wave(e: f64, _internal_resistance: f64) -> f64 {
    e
}

/// Wave emitted by a resistive voltage source `(e, R0)` attached to a port of
/// resistance `R` that is not necessarily matched.
pub fn unmatched_source_wave(e: f64, internal_resistance: f64, port_resistance: f64, a: f64) -> f64 {
    let rho = (internal_resistance - port_resistance) / (internal_resistance + port_resistance);
    rho * a + (1.0 - rho) * e
}
