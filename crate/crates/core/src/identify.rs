//! Identification of a flux-controlled characteristic from sampled terminal
//! voltage and current: integrate to charge and flux, differentiate `q(phi)`,
//! interpolate.

use std::io::BufRead;

use crate::error::{EmulationError, Result};
use crate::models::CharacteristicCurve;

/// Flux steps smaller than this are treated as duplicates.
pub const DUPLICATE_FLUX_TOLERANCE: f64 = 1e-15;

pub const SAMPLE_CSV_HEADER: &str = "t_s,u_v,i_a";

#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrace {
    t: Vec<f64>,
    u: Vec<f64>,
    i: Vec<f64>,
}

impl SampleTrace {
    pub fn new(t: Vec<f64>, u: Vec<f64>, i: Vec<f64>) -> Result<Self> {
        if t.len() != u.len() || t.len() != i.len() {
            return Err(EmulationError::Format("column lengths differ".into()));
        }
        if t.len() < 3 {
            // parseable but too short to identify anything from
            return Err(EmulationError::Identification(format!(
                "need at least 3 samples, got {}",
                t.len()
            )));
        }
        if t.iter().chain(&u).chain(&i).any(|v| !v.is_finite()) {
            return Err(EmulationError::Format("non-finite sample".into()));
        }
        if let Some(k) = t.windows(2).position(|w| w[1] <= w[0]) {
            return Err(EmulationError::Format(format!(
                "time column not strictly increasing at row {}",
                k + 2
            )));
        }
        Ok(Self { t, u, i })
    }

    pub fn from_rows(rows: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            rows.iter().map(|r| r.0).collect(),
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.2).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn time(&self) -> &[f64] {
        &self.t
    }

    pub fn voltage(&self) -> &[f64] {
        &self.u
    }

    pub fn current(&self) -> &[f64] {
        &self.i
    }

    /// Sampling period if the grid is uniform to `rel_tol`, otherwise `None`.
    pub fn uniform_period(&self, rel_tol: f64) -> Option<f64> {
        let n = self.t.len() - 1;
        let period = (self.t[n] - self.t[0]) / n as f64;
        self.t
            .windows(2)
            .all(|w| ((w[1] - w[0]) - period).abs() <= rel_tol * period)
            .then_some(period)
    }

    /// Reads the `t_s`, `u_v` and `i_a` columns (in any position; other
    /// columns such as those of an emulation trace are ignored). `#` lines are
    /// comments.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(r);
        let headers = reader
            .headers()
            .map_err(|e| EmulationError::Format(e.to_string()))?
            .clone();
        let column = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| {
                EmulationError::Format(format!(
                    "expected columns `{SAMPLE_CSV_HEADER}`, got `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                ))
            })
        };
        let cols = [column("t_s")?, column("u_v")?, column("i_a")?];
        let mut rows = Vec::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| EmulationError::Format(e.to_string()))?;
            let mut vals = [0.0; 3];
            for (v, &k) in vals.iter_mut().zip(&cols) {
                *v = rec
                    .get(k)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| EmulationError::Format(format!("bad number in data row {}", line + 1)))?;
            }
            rows.push((vals[0], vals[1], vals[2]));
        }
        Self::from_rows(&rows)
    }
}

/// Linear interpolation onto `t0, t0 + T, ...` up to the last sample.
/// Grid points that coincide with a sample (within `1e-12 T`) copy it exactly.
pub fn resample_uniform(trace: &SampleTrace, period: f64) -> Result<SampleTrace> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(EmulationError::Config(format!(
            "resampling period must be positive, got {period}"
        )));
    }
    let t0 = trace.t[0];
    let t_end = trace.t[trace.len() - 1];
    let snap = 1e-12 * period;
    if t_end - t0 < 2.0 * period - snap {
        return Err(EmulationError::Format(format!(
            "trace spans {} s, need at least 2T = {} s",
            t_end - t0,
            2.0 * period
        )));
    }
    let count = ((t_end - t0) / period + 1e-9).floor() as usize + 1;
    let (mut t, mut u, mut i) = (
        Vec::with_capacity(count),
        Vec::with_capacity(count),
        Vec::with_capacity(count),
    );
    let mut hi = 0;
    for k in 0..count {
        let tk = t0 + k as f64 * period;
        while hi < trace.len() - 1 && trace.t[hi] < tk - snap {
            hi += 1;
        }
        // hi is the first sample at or after tk (up to snapping)
        let (uk, ik) = if (trace.t[hi] - tk).abs() <= snap || hi == 0 {
            (trace.u[hi], trace.i[hi])
        } else {
            let lo = hi - 1;
            let s = ((tk - trace.t[lo]) / (trace.t[hi] - trace.t[lo])).clamp(0.0, 1.0);
            (
                trace.u[lo] + s * (trace.u[hi] - trace.u[lo]),
                trace.i[lo] + s * (trace.i[hi] - trace.i[lo]),
            )
        };
        t.push(tk);
        u.push(uk);
        i.push(ik);
    }
    SampleTrace::new(t, u, i)
}

/// Cumulative trapezoidal integral with `X(t0) = 0`.
pub fn cumulative_integral(t: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    if !x.is_empty() {
        out.push(0.0);
    }
    for k in 1..x.len().min(t.len()) {
        acc += 0.5 * (x[k] + x[k - 1]) * (t[k] - t[k - 1]);
        out.push(acc);
    }
    out
}

/// How `dq/dphi` is estimated from neighbouring samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DifferenceScheme {
    /// `(q_{k+1} - q_k) / (phi_{k+1} - phi_k)` paired with `phi_k`.
    #[default]
    Forward,
    /// Three-point quotient centred on `phi_k`, one-sided at the ends.
    Central,
}

/// Indices of the longest strictly monotone prefix of `phi`, skipping
/// duplicate samples.
fn monotone_prefix(phi: &[f64]) -> Vec<usize> {
    let mut idx = vec![0];
    let mut direction = 0.0;
    for k in 1..phi.len() {
        let d = phi[k] - phi[*idx.last().unwrap()];
        if d.abs() < DUPLICATE_FLUX_TOLERANCE {
            continue;
        }
        if direction == 0.0 {
            direction = d.signum();
        } else if d.signum() != direction {
            break;
        }
        idx.push(k);
    }
    idx
}

/// Memductance samples `dq/dphi` over the first monotone flux segment.
pub fn memductance_from_qphi(q: &[f64], phi: &[f64], scheme: DifferenceScheme) -> Result<Vec<(f64, f64)>> {
    if q.len() != phi.len() {
        return Err(EmulationError::Identification(format!(
            "charge and flux lengths differ ({} vs {})",
            q.len(),
            phi.len()
        )));
    }
    if phi.is_empty() {
        return Err(EmulationError::Identification("empty flux samples".into()));
    }
    let idx = monotone_prefix(phi);
    if idx.len() < 2 {
        return Err(EmulationError::Identification(
            "flux has no monotone segment of length >= 2".into(),
        ));
    }
    let slope = |a: usize, b: usize| (q[idx[b]] - q[idx[a]]) / (phi[idx[b]] - phi[idx[a]]);
    let m = idx.len();
    let points = match scheme {
        DifferenceScheme::Forward => (0..m - 1).map(|j| (phi[idx[j]], slope(j, j + 1))).collect(),
        DifferenceScheme::Central => (0..m)
            .map(|j| {
                let g = if j == 0 {
                    slope(0, 1)
                } else if j == m - 1 {
                    slope(m - 2, m - 1)
                } else {
                    slope(j - 1, j + 1)
                };
                (phi[idx[j]], g)
            })
            .collect(),
    };
    Ok(points)
}

/// Sorts and deduplicates `(phi, G)` points into a characteristic curve.
pub fn build_characteristic(points: &[(f64, f64)]) -> Result<CharacteristicCurve> {
    if let Some(p) = points.iter().find(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(EmulationError::Identification(format!("non-finite point {p:?}")));
    }
    if let Some(p) = points.iter().find(|p| p.1 < 0.0) {
        return Err(EmulationError::Identification(format!(
            "negative memductance {} S at flux {} Wb",
            p.1, p.0
        )));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    for p in sorted {
        match knots.last() {
            Some(last) if p.0 - last.0 < DUPLICATE_FLUX_TOLERANCE => {}
            _ => knots.push(p),
        }
    }
    if knots.len() < 2 {
        return Err(EmulationError::Identification(format!(
            "need at least 2 distinct flux points, got {}",
            knots.len()
        )));
    }
    CharacteristicCurve::new(knots).map_err(|e| EmulationError::Identification(e.to_string()))
}

/// Full pipeline. A non-uniform trace is resampled to `period` (or to its
/// mean step when `period` is `None`) first.
pub fn identify(trace: &SampleTrace, period: Option<f64>, scheme: DifferenceScheme) -> Result<CharacteristicCurve> {
    let resampled;
    let uniform = match (period, trace.uniform_period(1e-9)) {
        (None, Some(_)) => trace,
        (Some(p), Some(native)) if (p - native).abs() <= 1e-9 * native => trace,
        (p, _) => {
            let n = trace.len() - 1;
            let p = p.unwrap_or((trace.t[n] - trace.t[0]) / n as f64);
            resampled = resample_uniform(trace, p)?;
            &resampled
        }
    };
    let q = cumulative_integral(&uniform.t, &uniform.i);
    let phi = cumulative_integral(&uniform.t, &uniform.u);
    let points = memductance_from_qphi(&q, &phi, scheme)?;
    build_characteristic(&points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_traces() {
        assert!(SampleTrace::new(vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2]).is_err());
        assert!(matches!(
            SampleTrace::new(vec![0.0, 2.0, 1.0], vec![0.0; 3], vec![0.0; 3]),
            Err(EmulationError::Format(_))
        ));
    }

    #[test]
    fn resample_is_idempotent_on_uniform() {
        let t: Vec<f64> = (0..50).map(|k| k as f64 * 1e-3).collect();
        let u: Vec<f64> = t.iter().map(|t| (7.0 * t).sin()).collect();
        let i: Vec<f64> = t.iter().map(|t| (3.0 * t).cos()).collect();
        let tr = SampleTrace::new(t, u, i).unwrap();
        assert_eq!(resample_uniform(&tr, 1e-3).unwrap(), tr);
    }

    #[test]
    fn resample_midpoint() {
        let tr = SampleTrace::from_rows(&[(0.0, 0.0, 1.0), (1.0, 2.0, 3.0), (2.0, 4.0, 5.0)]).unwrap();
        let r = resample_uniform(&tr, 0.5).unwrap();
        assert_eq!(r.time(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(r.voltage()[1], 1.0);
        assert_eq!(r.current()[3], 4.0);
    }

    #[test]
    fn integral_of_constant() {
        let t: Vec<f64> = (0..100).map(|k| k as f64 * 0.25).collect();
        let x = vec![2.0; 100];
        let big = cumulative_integral(&t, &x);
        for (k, v) in big.iter().enumerate() {
            assert_eq!(*v, 2.0 * k as f64 * 0.25);
        }
        assert!(cumulative_integral(&t, &[0.0; 100]).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn linear_resistor_identifies_constant() {
        let phi: Vec<f64> = (0..20).map(|k| 0.1 * k as f64).collect();
        let q: Vec<f64> = phi.iter().map(|p| 0.5 * p).collect();
        for scheme in [DifferenceScheme::Forward, DifferenceScheme::Central] {
            let pts = memductance_from_qphi(&q, &phi, scheme).unwrap();
            assert!(pts.iter().all(|p| (p.1 - 0.5).abs() < 1e-12));
        }
    }

    #[test]
    fn monotone_prefix_stops_at_reversal_and_skips_duplicates() {
        let phi = [0.0, 1.0, 1.0, 2.0, 1.5, 3.0];
        assert_eq!(monotone_prefix(&phi), vec![0, 1, 3]);
        assert!(memductance_from_qphi(&[0.0; 3], &[1.0; 3], DifferenceScheme::Forward).is_err());
    }

    #[test]
    fn characteristic_building() {
        let c = build_characteristic(&[(1.0, 2.0), (0.0, 1.0), (1.0, 5.0)]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.evaluate(0.5), 1.5);
        assert_eq!(c.evaluate(-1.0), 1.0);
        assert!(build_characteristic(&[(1.0, 2.0)]).is_err());
        assert!(matches!(
            build_characteristic(&[(0.0, 1.0), (1.0, -1.0)]),
            Err(EmulationError::Identification(_))
        ));
    }

    #[test]
    fn csv_input() {
        let text = "t_s,u_v,i_a\n0,0,0\n0.001,1,2\n0.002,2,4\n";
        let tr = SampleTrace::read_csv(text.as_bytes()).unwrap();
        assert_eq!(tr.len(), 3);
        assert!(SampleTrace::read_csv("t,u,i\n0,0,0\n".as_bytes()).is_err());
    }
}
