//! Wave digital realization of the double-barrier device.
//!
//! Port layout (free resistances R1, R3, R7; the rest follow):
//!
//! ```text
//! source (R0) ── [S_top: R2 = R1 + R6]
//!                  ├─ port 1: Schottky contact (R1)
//!                  └─ port 2: [S_low: R6 = R5 + R9]
//!                               ├─ port 1: [P_e: R5 = R3 || R4]  electrolyte (R3) || C_e delay (R4 = T / 2C_e)
//!                               └─ port 2: [P_t: R9 = R7 || R8]  tunnel (R7)      || C_t delay (R8 = T / 2C_t)
//! ```
//!
//! A capacitance of zero removes its parallel adaptor. The source is the
//! unadapted root. Each sweep linearizes the Schottky and tunnel ports at
//! their present voltage, which turns every leaf into an affine reflector
//! `b = rho a + beta`; the tree is then solved exactly by reducing the
//! adaptors bottom-up and expanding top-down.

use super::DbmdParameters;
use crate::adaptor::{ParallelAdaptor3, SeriesAdaptor3};
use crate::error::{EmulationError, Result};
use crate::integrator::IntegratorState;
use crate::port::{check_divergence, FixedPointConfig};
use crate::wave::rho_unchecked;

/// Leaf or subtree seen from its parent: `reflected = rho * incident + beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Affine {
    rho: f64,
    beta: f64,
}

/// Reduced adaptor: incident waves from the children as affine functions
/// of the wave arriving at port 3.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    s: [[f64; 3]; 3],
    p: [f64; 2],
    q: [f64; 2],
}

impl Reduced {
    fn new(s: [[f64; 3]; 3], c1: Affine, c2: Affine) -> Result<(Self, Affine)> {
        let m11 = 1.0 - c1.rho * s[0][0];
        let m12 = -c1.rho * s[0][1];
        let m21 = -c2.rho * s[1][0];
        let m22 = 1.0 - c2.rho * s[1][1];
        let det = m11 * m22 - m12 * m21;
        if !(det.abs() > 1e-300) || !det.is_finite() {
            return Err(EmulationError::numeric("singular adaptor junction"));
        }
        let (r1, r2) = (c1.rho * s[0][2], c2.rho * s[1][2]);
        let p = [(r1 * m22 - m12 * r2) / det, (m11 * r2 - m21 * r1) / det];
        let q = [
            (c1.beta * m22 - m12 * c2.beta) / det,
            (m11 * c2.beta - m21 * c1.beta) / det,
        ];
        let up = Affine {
            rho: s[2][0] * p[0] + s[2][1] * p[1] + s[2][2],
            beta: s[2][0] * q[0] + s[2][1] * q[1],
        };
        Ok((Self { s, p, q }, up))
    }

    /// Waves at ports 1 and 2 as `(from child, to child)` pairs.
    fn expand(&self, a3: f64) -> [(f64, f64); 2] {
        let a1 = self.p[0] * a3 + self.q[0];
        let a2 = self.p[1] * a3 + self.q[1];
        let b1 = self.s[0][0] * a1 + self.s[0][1] * a2 + self.s[0][2] * a3;
        let b2 = self.s[1][0] * a1 + self.s[1][1] * a2 + self.s[1][2] * a3;
        [(a1, b1), (a2, b2)]
    }
}

/// Series adaptors invert the port orientation of their children relative
/// to port 3, so the Schottky port sees the terminal polarity reversed.
const SCHOTTKY_ORIENTATION: f64 = -1.0;
const LOWER_ORIENTATION: f64 = 1.0;

/// Resistive region with an optional parasitic capacitance in parallel.
#[derive(Debug, Clone)]
struct RcBranch {
    leaf_resistance: f64,
    cap: Option<(ParallelAdaptor3, f64)>, // adaptor, stored wave
}

impl RcBranch {
    fn new(leaf_resistance: f64, capacitance: f64, period: f64) -> Result<Self> {
        let cap = if capacitance > 0.0 {
            let r_cap = period / (2.0 * capacitance);
            Some((ParallelAdaptor3::new(leaf_resistance, r_cap)?, 0.0))
        } else {
            None
        };
        Ok(Self { leaf_resistance, cap })
    }

    fn port_resistance(&self) -> f64 {
        match &self.cap {
            Some((adaptor, _)) => adaptor.port_resistances()[2],
            None => self.leaf_resistance,
        }
    }

    fn capacitor_resistance(&self) -> Option<f64> {
        self.cap.as_ref().map(|(a, _)| a.port_resistances()[1])
    }

    fn reduce(&self, leaf: Affine) -> Result<(Option<Reduced>, Affine)> {
        match &self.cap {
            Some((adaptor, stored)) => {
                let delay = Affine {
                    rho: 0.0,
                    beta: *stored,
                };
                let (red, up) = Reduced::new(adaptor.matrix(), leaf, delay)?;
                Ok((Some(red), up))
            }
            None => Ok((None, leaf)),
        }
    }

    /// Leaf waves `(reflected, incident)` and the wave entering the delay.
    fn expand(red: &Option<Reduced>, leaf: Affine, a3: f64) -> ((f64, f64), Option<f64>) {
        match red {
            Some(red) => {
                let [leaf_waves, (_, to_cap)] = red.expand(a3);
                (leaf_waves, Some(to_cap))
            }
            None => ((leaf.rho * a3 + leaf.beta, a3), None),
        }
    }
}

/// Linearization of `i = I(u)` at `u_n`, mapped to an affine reflection.
fn linearized_leaf(resistance: f64, orientation: f64, u_n: f64, current: f64, slope: f64) -> Result<Affine> {
    if !(slope >= 0.0) || !slope.is_finite() || !current.is_finite() {
        return Err(EmulationError::numeric(format!(
            "non-physical incremental conductance {slope} S at {u_n} V"
        )));
    }
    let j0 = current - slope * u_n;
    let denom = 1.0 + resistance * slope;
    Ok(Affine {
        rho: rho_unchecked(slope, resistance),
        beta: -2.0 * resistance * orientation * j0 / denom,
    })
}

/// One sampling instance of the device.
#[derive(Debug, Clone, PartialEq)]
pub struct DbmdSample {
    pub voltage: f64,
    pub current: f64,
    pub state: f64,
    pub u_schottky: f64,
    pub u_electrolyte: f64,
    pub u_tunnel: f64,
    pub r_schottky: f64,
    pub r_electrolyte: f64,
    pub r_tunnel: f64,
    /// `i / u`, or the small-signal value at `u = 0`.
    pub conductance: f64,
    /// Largest port residual `|b - rho(G) a|` with the chord memductance.
    pub residual: f64,
    /// `|u - (u_S + u_e + u_t)|`.
    pub decomposition_error: f64,
    pub sweeps: usize,
}

#[derive(Debug, Clone)]
pub struct DbmdNetwork {
    params: DbmdParameters,
    period: f64,
    top: SeriesAdaptor3,
    lower: SeriesAdaptor3,
    electrolyte: RcBranch,
    tunnel: RcBranch,
    integrator: IntegratorState,
    f_prev: f64,
    u_s_prev: f64,
    u_t_prev: f64,
}

impl DbmdNetwork {
    pub fn new(params: DbmdParameters, period: f64) -> Result<Self> {
        params.validate()?;
        if !(period > 0.0 && period.is_finite()) {
            return Err(EmulationError::Config(format!(
                "sampling period must be positive, got {period}"
            )));
        }
        let electrolyte = RcBranch::new(params.r3, params.c_e, period)?;
        let tunnel = RcBranch::new(params.r7, params.c_t, period)?;
        let lower = SeriesAdaptor3::new(electrolyte.port_resistance(), tunnel.port_resistance())?;
        let top = SeriesAdaptor3::new(params.r1, lower.port_resistances()[2])?;
        let integrator = IntegratorState::new(&[params.z0], period)?;
        Ok(Self {
            params,
            period,
            top,
            lower,
            electrolyte,
            tunnel,
            integrator,
            f_prev: 0.0,
            u_s_prev: 0.0,
            u_t_prev: 0.0,
        })
    }

    pub fn params(&self) -> &DbmdParameters {
        &self.params
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Port resistances `R1..R9`; `None` for ports removed with a zero capacitance.
    pub fn port_resistances(&self) -> [Option<f64>; 9] {
        let e_cap = self.electrolyte.capacitor_resistance();
        let t_cap = self.tunnel.capacitor_resistance();
        [
            Some(self.params.r1),
            Some(self.top.port_resistances()[2]),
            Some(self.params.r3),
            e_cap,
            e_cap.map(|_| self.electrolyte.port_resistance()),
            Some(self.lower.port_resistances()[2]),
            Some(self.params.r7),
            t_cap,
            t_cap.map(|_| self.tunnel.port_resistance()),
        ]
    }

    /// Current state `z` as seen by the next instance (the stored wave).
    pub fn stored_state(&self) -> f64 {
        self.integrator.stored()[0]
    }

    pub fn step(&mut self, e: f64, cfg: &FixedPointConfig) -> Result<DbmdSample> {
        cfg.validate()?;
        if !e.is_finite() {
            return Err(EmulationError::numeric(format!("source voltage is {e}")));
        }
        let p = self.params;
        let r_root = self.top.port_resistances()[2];
        let rho_source = (p.r_source - r_root) / (p.r_source + r_root);

        let mut z = [0.0];
        self.integrator.predict(&[self.f_prev], &mut z);
        let mut z = z[0].clamp(0.0, 1.0);
        let mut f = self.f_prev;

        let (mut u_s, mut u_t) = (self.u_s_prev, self.u_t_prev);
        let mut u_e = 0.0;
        let mut deltas = Vec::with_capacity(cfg.iterations);
        let mut sweeps = 0;
        let mut last = None;

        for _ in 0..cfg.iterations {
            sweeps += 1;
            let (i_s, g_s) = p.schottky_current(u_s, z);
            let schottky = linearized_leaf(p.r1, SCHOTTKY_ORIENTATION, u_s, i_s, g_s)?;
            let electrolyte = Affine {
                rho: rho_unchecked(1.0 / p.electrolyte_resistance(z), p.r3),
                beta: 0.0,
            };
            let (i_t, g_t) = p.tunnel_current(u_t, z).map_err(domain_to_numeric)?;
            let tunnel = linearized_leaf(p.r7, LOWER_ORIENTATION, u_t, i_t, g_t)?;

            let (red_e, up_e) = self.electrolyte.reduce(electrolyte)?;
            let (red_t, up_t) = self.tunnel.reduce(tunnel)?;
            let (red_low, up_low) = Reduced::new(self.lower.matrix(), up_e, up_t)?;
            let (red_top, up_top) = Reduced::new(self.top.matrix(), schottky, up_low)?;

            let a_root = (rho_source * up_top.beta + (1.0 - rho_source) * e) / (1.0 - rho_source * up_top.rho);
            let b_root = up_top.rho * a_root + up_top.beta;
            let u = 0.5 * (a_root + b_root);
            let i = (a_root - b_root) / (2.0 * r_root);

            let [s_waves, (_, to_low)] = red_top.expand(a_root);
            let [(from_e, to_e), (from_t, to_t)] = red_low.expand(to_low);
            let (e_leaf, to_ce) = RcBranch::expand(&red_e, electrolyte, to_e);
            let (t_leaf, to_ct) = RcBranch::expand(&red_t, tunnel, to_t);
            // with a delay present its adaptor port 3 carries the branch voltage too
            let _ = (from_e, from_t);

            let new_u_s = SCHOTTKY_ORIENTATION * 0.5 * (s_waves.0 + s_waves.1);
            let new_u_e = LOWER_ORIENTATION * 0.5 * (e_leaf.0 + e_leaf.1);
            let new_u_t = LOWER_ORIENTATION * 0.5 * (t_leaf.0 + t_leaf.1);
            if ![u, i, new_u_s, new_u_e, new_u_t].iter().all(|v| v.is_finite()) {
                return Err(EmulationError::numeric("non-finite wave in device network"));
            }
            deltas.push(
                (new_u_s - u_s)
                    .abs()
                    .max((new_u_t - u_t).abs())
                    .max((new_u_e - u_e).abs()),
            );
            u_s = new_u_s;
            u_e = new_u_e;
            u_t = new_u_t;

            f = p.state_derivative(z, u, u_s, u_e)?;
            let mut zn = [0.0];
            self.integrator.state_for(&[f], &mut zn);
            z = zn[0].clamp(0.0, 1.0);

            last = Some(Solved {
                u,
                i,
                s_waves,
                e_leaf,
                t_leaf,
                to_ce,
                to_ct,
            });
            if let Some(tol) = cfg.tolerance {
                if self.residual(last.as_ref().unwrap(), z)? <= tol {
                    break;
                }
            }
        }

        let sol = last.expect("at least one sweep");
        let residual = self.residual(&sol, z)?;
        check_divergence(&deltas, residual, e)?;

        let r_schottky = p.schottky_resistance(u_s, z)?;
        let r_electrolyte = p.electrolyte_resistance(z);
        let r_tunnel = p.tunnel_resistance(u_t, z).map_err(domain_to_numeric)?;

        // commit delays and the state store once
        if let (Some((_, stored)), Some(w)) = (self.electrolyte.cap.as_mut(), sol.to_ce) {
            *stored = w;
        }
        if let (Some((_, stored)), Some(w)) = (self.tunnel.cap.as_mut(), sol.to_ct) {
            *stored = w;
        }
        self.integrator.commit(&[z], &[f]);
        let stored = self.integrator.stored()[0].clamp(0.0, 1.0);
        self.integrator.set_stored(&[stored]);
        self.f_prev = f;
        self.u_s_prev = u_s;
        self.u_t_prev = u_t;

        let conductance = if sol.u.abs() > 1e-12 {
            sol.i / sol.u
        } else {
            1.0 / (p.schottky_zero_bias_resistance(z) + r_electrolyte + p.tunnel_zero_bias_resistance(z))
        };

        Ok(DbmdSample {
            voltage: sol.u,
            current: sol.i,
            state: z,
            u_schottky: u_s,
            u_electrolyte: u_e,
            u_tunnel: u_t,
            r_schottky,
            r_electrolyte,
            r_tunnel,
            conductance,
            residual,
            decomposition_error: (sol.u - (u_s + u_e + u_t)).abs(),
            sweeps,
        })
    }

    /// Largest chord residual over the three device ports at state `z`.
    fn residual(&self, sol: &Solved, z: f64) -> Result<f64> {
        let p = &self.params;
        let port = |r: f64, g: f64, (from, to): (f64, f64)| (from - rho_unchecked(g, r) * to).abs();
        let u_s = SCHOTTKY_ORIENTATION * 0.5 * (sol.s_waves.0 + sol.s_waves.1);
        let u_t = LOWER_ORIENTATION * 0.5 * (sol.t_leaf.0 + sol.t_leaf.1);
        let g_s = 1.0 / p.schottky_resistance(u_s, z)?;
        let g_e = 1.0 / p.electrolyte_resistance(z);
        let g_t = 1.0 / p.tunnel_resistance(u_t, z).map_err(domain_to_numeric)?;
        Ok(port(p.r1, g_s, sol.s_waves)
            .max(port(p.r3, g_e, sol.e_leaf))
            .max(port(p.r7, g_t, sol.t_leaf)))
    }
}

#[derive(Debug, Clone, Copy)]
struct Solved {
    u: f64,
    i: f64,
    /// `(reflected by leaf, incident on leaf)` per device port.
    s_waves: (f64, f64),
    e_leaf: (f64, f64),
    t_leaf: (f64, f64),
    to_ce: Option<f64>,
    to_ct: Option<f64>,
}

fn domain_to_numeric(e: EmulationError) -> EmulationError {
    match e {
        EmulationError::Domain(msg) => EmulationError::numeric(msg),
        other => other,
    }
}
