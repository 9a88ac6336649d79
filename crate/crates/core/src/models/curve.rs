use std::io::{BufRead, Write};

use super::MemristiveModel;
use crate::error::{EmulationError, Result};

/// Default switching flux of the bundled binary curve, as a fraction of `Phi_s`.
pub const BINARY_THRESHOLD_FRACTION: f64 = 1.0 / 3.0;
/// Default width of the binary curve's linear transition, as a fraction of `Phi_s`.
pub const BINARY_TRANSITION_FRACTION: f64 = 0.1;

pub const CURVE_CSV_HEADER: &str = "flux_wb,memductance_s";

/// Piecewise-linear memductance over flux map with clamped extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicCurve {
    flux: Vec<f64>,
    memductance: Vec<f64>,
}

impl CharacteristicCurve {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(EmulationError::Config("characteristic curve has no knots".into()));
        }
        let (flux, memductance): (Vec<f64>, Vec<f64>) = knots.into_iter().unzip();
        if flux.iter().chain(&memductance).any(|v| !v.is_finite()) {
            return Err(EmulationError::Config(
                "characteristic curve has non-finite knots".into(),
            ));
        }
        if let Some(w) = flux.windows(2).find(|w| w[1] <= w[0]) {
            return Err(EmulationError::Config(format!(
                "knot fluxes must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(g) = memductance.iter().find(|g| **g < 0.0) {
            return Err(EmulationError::Config(format!("negative memductance knot {g}")));
        }
        Ok(Self { flux, memductance })
    }

    pub fn len(&self) -> usize {
        self.flux.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flux.is_empty()
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.flux.iter().copied().zip(self.memductance.iter().copied())
    }

    /// Flux interval `[phi_min, phi_max]` covered by the knots.
    pub fn validity_range(&self) -> (f64, f64) {
        (self.flux[0], self.flux[self.flux.len() - 1])
    }

    pub fn evaluate(&self, phi: f64) -> f64 {
        let n = self.flux.len();
        if phi <= self.flux[0] {
            return self.memductance[0];
        }
        if phi >= self.flux[n - 1] {
            return self.memductance[n - 1];
        }
        // first knot strictly above phi; 1 <= hi <= n-1 here
        let hi = self.flux.partition_point(|x| *x <= phi);
        let (x0, x1) = (self.flux[hi - 1], self.flux[hi]);
        let (g0, g1) = (self.memductance[hi - 1], self.memductance[hi]);
        g0 + (g1 - g0) * (phi - x0) / (x1 - x0)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let (lo, hi) = self.validity_range();
        writeln!(w, "# validity_range_wb: {lo},{hi}")?;
        writeln!(w, "{CURVE_CSV_HEADER}")?;
        for (phi, g) in self.knots() {
            writeln!(w, "{phi},{g}")?;
        }
        Ok(())
    }

    /// Reads `flux_wb,memductance_s` rows; `#` lines are comments.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(r);
        let headers = reader
            .headers()
            .map_err(|e| EmulationError::Format(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["flux_wb", "memductance_s"] {
            return Err(EmulationError::Format(format!(
                "expected header `{CURVE_CSV_HEADER}`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut knots = Vec::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| EmulationError::Format(e.to_string()))?;
            let parse = |idx: usize| -> Result<f64> {
                rec.get(idx)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| EmulationError::Format(format!("bad number in data row {}", line + 1)))
            };
            knots.push((parse(0)?, parse(1)?));
        }
        Self::new(knots).map_err(|e| match e {
            EmulationError::Config(msg) => EmulationError::Format(msg),
            other => other,
        })
    }
}

/// Binary switch: `g_off` below the threshold flux, `g_on` above, joined by a
/// linear transition of the given width. Knots span `[0, phi_max]`.
pub fn binary_switch_curve(
    g_off: f64,
    g_on: f64,
    phi_max: f64,
    threshold: f64,
    width: f64,
) -> Result<CharacteristicCurve> {
    let lo = threshold - 0.5 * width;
    let hi = threshold + 0.5 * width;
    if !(width > 0.0 && lo > 0.0 && hi < phi_max) {
        return Err(EmulationError::Config(format!(
            "binary transition [{lo}, {hi}] must lie inside (0, {phi_max})"
        )));
    }
    CharacteristicCurve::new(vec![(0.0, g_off), (lo, g_off), (hi, g_on), (phi_max, g_on)])
}

/// Synthetic continuous-range curve: a smoothstep from `g_low` at zero flux
/// to `g_high` at `phi_max`, sampled on 33 knots.
pub fn continuous_curve(g_low: f64, g_high: f64, phi_max: f64) -> Result<CharacteristicCurve> {
    const KNOTS: usize = 33;
    let knots = (0..KNOTS)
        .map(|k| {
            let s = k as f64 / (KNOTS - 1) as f64;
            let shape = s * s * (3.0 - 2.0 * s);
            (s * phi_max, g_low + (g_high - g_low) * shape)
        })
        .collect();
    CharacteristicCurve::new(knots)
}

/// Memristor defined by a characteristic curve; the state is the flux.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveModel {
    curve: CharacteristicCurve,
    initial_flux: f64,
}

impl CurveModel {
    pub fn new(curve: CharacteristicCurve, initial_flux: f64) -> Result<Self> {
        if curve.is_empty() {
            return Err(EmulationError::Config("empty characteristic curve".into()));
        }
        Ok(Self { curve, initial_flux })
    }

    pub fn curve(&self) -> &CharacteristicCurve {
        &self.curve
    }
}

impl MemristiveModel for CurveModel {
    fn initial_state(&self) -> Vec<f64> {
        vec![self.initial_flux]
    }

    fn memductance(&self, z: &[f64], _u: f64) -> f64 {
        self.curve.evaluate(z[0])
    }

    fn state_derivative(&self, _z: &[f64], u: f64, out: &mut [f64]) {
        out[0] = u;
    }
}
