//! Excitations, the resistive-source validation circuit, trace capture and
//! hysteresis analysis.

mod device;
mod excitation;
mod presets;
mod trace;

pub use device::{Device, DeviceSample, ValidationCircuit, SOURCE_RESISTANCE};
pub use excitation::{sine_sample, triangular_sample, Excitation, Waveform};
pub use presets::{ModelKind, ModelSpec, TableDefaults};
pub use trace::{Trace, TraceRecord};

use crate::error::{EmulationError, Result};
use crate::port::FixedPointConfig;

/// Time grid `t_k = t0 + k T` for `k = 0..=N`, `N = round((t_stop - t0) / T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub period: f64,
    pub t_stop: f64,
}

impl TimeGrid {
    pub fn new(t0: f64, period: f64, t_stop: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(EmulationError::Config(format!(
                "sampling period must be positive, got {period}"
            )));
        }
        if !(t_stop > t0) || !t0.is_finite() || !t_stop.is_finite() {
            return Err(EmulationError::Config(format!(
                "need t_stop > t0, got t0={t0}, t_stop={t_stop}"
            )));
        }
        Ok(Self { t0, period, t_stop })
    }

    pub fn steps(&self) -> usize {
        ((self.t_stop - self.t0) / self.period).round() as usize
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.period
    }
}

/// Drives `device` with an arbitrary source function.
pub fn run_with_source<D, S>(device: &mut D, source: S, grid: &TimeGrid, cfg: &FixedPointConfig) -> Result<Trace>
where
    D: Device + ?Sized,
    S: Fn(f64) -> f64,
{
    cfg.validate()?;
    let n = grid.steps();
    let mut records = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = grid.time(k);
        let e = source(t);
        let s = device.step(e, cfg).map_err(|err| err.at(t))?;
        if !(s.u.is_finite() && s.i.is_finite() && s.g.is_finite()) || s.z.iter().any(|z| !z.is_finite()) {
            return Err(EmulationError::Numeric {
                t,
                reason: "non-finite trace sample".into(),
            });
        }
        records.push(TraceRecord {
            t,
            e,
            u: s.u,
            i: s.i,
            z: s.z,
            g: s.g,
            regions: s.regions,
        });
    }
    Ok(Trace {
        t0: grid.t0,
        period: grid.period,
        records,
    })
}

/// Runs the source-device loop on the grid `t0 + kT` up to `t_stop`.
pub fn run_scenario<D: Device + ?Sized>(
    device: &mut D,
    exc: &Excitation,
    grid: &TimeGrid,
    cfg: &FixedPointConfig,
) -> Result<Trace> {
    exc.validate()?;
    run_with_source(device, |t| exc.sample(t), grid, cfg)
}

/// Absolute enclosed area of the `i`-`u` curve. The curve is cut at sign
/// changes of `u` (the pinch points); each piece is closed and measured with
/// the shoelace formula.
pub fn loop_area(u: &[f64], i: &[f64]) -> f64 {
    fn shoelace(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len();
        let mut s = 0.0;
        for k in 0..n {
            let (x0, y0) = pts[k];
            let (x1, y1) = pts[(k + 1) % n];
            s += x0 * y1 - x1 * y0;
        }
        0.5 * s.abs()
    }
    let mut total = 0.0;
    let mut piece = Vec::new();
    for k in 0..u.len().min(i.len()) {
        piece.push((u[k], i[k]));
        if k > 0 && (u[k - 1] > 0.0) != (u[k] > 0.0) {
            total += shoelace(&piece);
            piece.clear();
            piece.push((u[k], i[k]));
        }
    }
    total + shoelace(&piece)
}

/// Lobe area over the last complete excitation period of a trace.
pub fn hysteresis_area(trace: &Trace, excitation_period: f64) -> Result<f64> {
    if !(excitation_period > 0.0) {
        return Err(EmulationError::Analysis(format!("invalid period {excitation_period}")));
    }
    let n = (excitation_period / trace.period).round() as usize;
    if n < 3 || trace.len() < n + 1 {
        return Err(EmulationError::Analysis(format!(
            "need one full period ({} samples), trace has {}",
            n + 1,
            trace.len()
        )));
    }
    let tail = &trace.records[trace.len() - n - 1..];
    let u: Vec<f64> = tail.iter().map(|r| r.u).collect();
    let i: Vec<f64> = tail.iter().map(|r| r.i).collect();
    Ok(loop_area(&u, &i))
}

/// Runs `job` once per frequency on its own thread; results keep input order.
pub fn sweep<F, R>(frequencies: &[f64], job: F) -> Vec<R>
where
    F: Fn(f64) -> R + Sync,
    R: Send,
{
    let job = &job;
    std::thread::scope(|s| {
        let handles: Vec<_> = frequencies.iter().map(|&f| s.spawn(move || job(f))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}
