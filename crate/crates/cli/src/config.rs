//! Run configuration: flat `key = value` text, overridable from the command
//! line. Keys follow the parameter tables with ASCII names and a unit suffix
//! (`G1_s`, `kappa_per_C`, `T_s`); numbers may use a decimal comma.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use memwave::dbmd::DbmdParameters;
use memwave::models::{CharacteristicCurve, HpParameters};
use memwave::scenario::{Excitation, ModelKind, ModelSpec, TableDefaults, Waveform};
use memwave::{EmulationError, Result};

/// Which device a run emulates.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSelector {
    Bundled(ModelKind),
    CurveFile(PathBuf),
}

impl std::str::FromStr for ModelSelector {
    type Err = EmulationError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "curve-file" | "curve" => Ok(ModelSelector::CurveFile(PathBuf::new())),
            other => other.parse().map(ModelSelector::Bundled),
        }
    }
}

/// Parses a number, accepting a decimal comma (`0,1`).
pub fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim();
    let normalized = if t.contains(',') && !t.contains('.') {
        t.replacen(',', ".", 1)
    } else {
        t.to_string()
    };
    normalized
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| EmulationError::Config(format!("`{text}` is not a number")))
}

/// Space- or `;`-separated list of numbers.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    let items: Vec<&str> = text
        .split(|c: char| c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(EmulationError::Config("empty list".into()));
    }
    items.into_iter().map(parse_number).collect()
}

fn parse_count(key: &str, text: &str) -> Result<u32> {
    let v = parse_number(text)?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(EmulationError::Config(format!(
            "{key} must be a non-negative integer, got {text}"
        )));
    }
    Ok(v as u32)
}

/// Flat key-value pairs in file order; later entries win.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| EmulationError::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(EmulationError::Config(format!("line {}: missing key", n + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub model: Option<ModelSelector>,
    /// Model parameters by table key.
    pub params: BTreeMap<String, String>,
    pub waveform: Option<Waveform>,
    pub amplitude: Option<f64>,
    pub negative_amplitude: Option<f64>,
    pub frequencies: Option<Vec<f64>>,
    pub period: Option<f64>,
    pub t0: Option<f64>,
    pub t_stop: Option<f64>,
    pub iterations: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EmulationError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        for (k, v) in parse_pairs(&text)? {
            cfg.set(&k, &v)?;
        }
        // curve paths are relative to the config file
        if let Some(ModelSelector::CurveFile(p)) = &mut cfg.model {
            if p.is_relative() && !p.as_os_str().is_empty() {
                *p = path.parent().unwrap_or(Path::new(".")).join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Applies one setting. Unknown keys are kept as model parameters and
    /// checked once the model is known.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => {
                let sel: ModelSelector = value.parse()?;
                // keep a curve path given earlier
                if !(matches!(sel, ModelSelector::CurveFile(_))
                    && matches!(self.model, Some(ModelSelector::CurveFile(_))))
                {
                    self.model = Some(sel);
                }
            }
            "curve_file" => self.model = Some(ModelSelector::CurveFile(PathBuf::from(value))),
            "waveform" => {
                self.waveform = Some(match value.to_ascii_lowercase().as_str() {
                    "sine" | "sin" => Waveform::Sine,
                    "triangular" | "triangle" | "tri" => Waveform::Triangular,
                    _ => return Err(EmulationError::Config(format!("unknown waveform `{value}`"))),
                })
            }
            "E_v" => self.amplitude = Some(parse_number(value)?),
            "Eneg_v" => self.negative_amplitude = Some(parse_number(value)?),
            "F_hz" => self.frequencies = Some(parse_list(value)?),
            "T_s" => self.period = Some(parse_number(value)?),
            "t0_s" => self.t0 = Some(parse_number(value)?),
            "t_stop_s" => self.t_stop = Some(parse_number(value)?),
            "n_i" => self.iterations = Some(parse_count(key, value)? as usize),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            _ => {
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    /// `key=value` override from the command line.
    pub fn set_assignment(&mut self, text: &str) -> Result<()> {
        let (k, v) = text
            .split_once('=')
            .ok_or_else(|| EmulationError::Config(format!("expected key=value, got `{text}`")))?;
        self.set(k.trim(), v.trim())
    }

    /// Fills in table defaults and checks every parameter.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let selector = self
            .model
            .clone()
            .ok_or_else(|| EmulationError::Config("no model selected".into()))?;
        let (spec, base) = match &selector {
            ModelSelector::Bundled(kind) => (model_spec(*kind, &self.params)?, kind.defaults()),
            ModelSelector::CurveFile(path) => {
                if path.as_os_str().is_empty() {
                    return Err(EmulationError::Config("curve-file model needs curve_file".into()));
                }
                (curve_spec(path, &self.params)?, ModelKind::Continuous.defaults())
            }
        };
        spec.validate()?;
        let defaults = TableDefaults {
            t0: self.t0.unwrap_or(base.t0),
            period: self.period.unwrap_or(base.period),
            iterations: self.iterations.unwrap_or(base.iterations),
            waveform: self.waveform.unwrap_or(base.waveform),
            amplitude: self.amplitude.unwrap_or(base.amplitude),
            negative_amplitude: self.negative_amplitude.or(base.negative_amplitude),
            frequencies: self.frequencies.clone().unwrap_or(base.frequencies),
            periods: base.periods,
        };
        for &f in &defaults.frequencies {
            defaults.excitation(f)?;
        }
        let name = match &selector {
            ModelSelector::Bundled(k) => k.name().to_string(),
            ModelSelector::CurveFile(p) => p
                .file_stem()
                .map_or("curve".into(), |s| s.to_string_lossy().into_owned()),
        };
        Ok(ResolvedRun {
            name,
            spec,
            defaults,
            t_stop: self.t_stop,
        })
    }
}

/// A fully parameterized run.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub name: String,
    pub spec: ModelSpec,
    pub defaults: TableDefaults,
    t_stop: Option<f64>,
}

impl ResolvedRun {
    pub fn excitation(&self, frequency: f64) -> Result<Excitation> {
        self.defaults.excitation(frequency)
    }

    /// Explicit stop time, or the table run length at this frequency.
    pub fn t_stop(&self, frequency: f64) -> f64 {
        self.t_stop.unwrap_or_else(|| self.defaults.t_stop(frequency))
    }
}

fn reject_unknown(kind: &str, params: &BTreeMap<String, String>, known: &[&str]) -> Result<()> {
    match params.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(EmulationError::Config(format!("unknown key `{k}` for model {kind}"))),
        None => Ok(()),
    }
}

fn model_spec(kind: ModelKind, params: &BTreeMap<String, String>) -> Result<ModelSpec> {
    let num = |k: &str| params.get(k).map(|v| parse_number(v)).transpose();
    let mut spec = ModelSpec::bundled(kind);
    match &mut spec {
        ModelSpec::Binary {
            g_off,
            g_on,
            phi_max,
            threshold,
            width,
        } => {
            reject_unknown(
                kind.name(),
                params,
                &["G0_s", "G1_s", "phi_max_wb", "phi_th_wb", "phi_w_wb"],
            )?;
            *g_off = num("G0_s")?.unwrap_or(*g_off);
            *g_on = num("G1_s")?.unwrap_or(*g_on);
            *phi_max = num("phi_max_wb")?.unwrap_or(*phi_max);
            *threshold = num("phi_th_wb")?.unwrap_or(*threshold);
            *width = num("phi_w_wb")?.unwrap_or(*width);
        }
        ModelSpec::Continuous { g_low, g_high, phi_max } => {
            reject_unknown(kind.name(), params, &["G0_s", "G1_s", "phi_max_wb"])?;
            *g_low = num("G0_s")?.unwrap_or(*g_low);
            *g_high = num("G1_s")?.unwrap_or(*g_high);
            *phi_max = num("phi_max_wb")?.unwrap_or(*phi_max);
        }
        ModelSpec::Hp(p) => {
            reject_unknown(
                kind.name(),
                params,
                &["R0_ohm", "R1_ohm", "Rinit_ohm", "kappa_per_C", "p", "z0"],
            )?;
            let r_init = num("Rinit_ohm")?;
            let z0 = num("z0")?;
            if r_init.is_some() && z0.is_some() {
                return Err(EmulationError::Config("give either Rinit_ohm or z0, not both".into()));
            }
            let r_low = num("R0_ohm")?.unwrap_or(p.r_low);
            let r_high = num("R1_ohm")?.unwrap_or(p.r_high);
            let kappa = num("kappa_per_C")?.unwrap_or(p.kappa);
            let exp = params.get("p").map(|v| parse_count("p", v)).transpose()?.unwrap_or(p.p);
            *p = match (z0, r_init) {
                (Some(z0), _) => HpParameters::new(r_low, r_high, kappa, exp, z0)?,
                (None, r) => HpParameters::with_initial_resistance(
                    r_low,
                    r_high,
                    kappa,
                    exp,
                    r.unwrap_or(p.initial_resistance()),
                )?,
            };
        }
        ModelSpec::Multilevel(p) => {
            reject_unknown(kind.name(), params, &["G0_s", "G1_s", "U0_v", "n", "z0"])?;
            p.g_low = num("G0_s")?.unwrap_or(p.g_low);
            p.g_high = num("G1_s")?.unwrap_or(p.g_high);
            p.u_reset = num("U0_v")?.unwrap_or(p.u_reset);
            p.z0 = num("z0")?.unwrap_or(p.z0);
            if let Some(v) = params.get("n") {
                p.n = parse_count("n", v)?;
            }
        }
        ModelSpec::Dbmd(p) => {
            for (k, v) in params {
                if !p.set(k, parse_number(v)?)? {
                    return Err(EmulationError::Config(format!("unknown key `{k}` for model dbmd")));
                }
            }
        }
        ModelSpec::Curve { .. } => unreachable!("bundled specs are never curve files"),
    }
    Ok(spec)
}

fn curve_spec(path: &Path, params: &BTreeMap<String, String>) -> Result<ModelSpec> {
    reject_unknown("curve-file", params, &["phi0_wb"])?;
    let curve = read_curve(path)?;
    let initial_flux = params
        .get("phi0_wb")
        .map(|v| parse_number(v))
        .transpose()?
        .unwrap_or(0.0);
    Ok(ModelSpec::Curve { curve, initial_flux })
}

pub fn read_curve(path: &Path) -> Result<CharacteristicCurve> {
    let file = std::fs::File::open(path)
        .map_err(|e| EmulationError::Config(format!("cannot read {}: {e}", path.display())))?;
    CharacteristicCurve::read_csv(std::io::BufReader::new(file))
}

/// Compiled-in table values, one row per parameter: (table, key, value).
pub fn table_constants() -> Vec<(&'static str, &'static str, f64)> {
    vec![
        ("I", "t0_s", 0.0),
        ("I", "T_s", 1e-3),
        ("I", "n_i", 1.0),
        ("I", "E_v", 5.0),
        ("I", "F1_hz", 1.0),
        ("I", "F2_hz", 2.0),
        ("I", "G1_s", 3.0),
        ("I", "G0_s", 100e-6),
        ("I", "I_a", 10.0),
        ("II", "t0_s", 0.0),
        ("II", "T_s", 1e-3),
        ("II", "n_i", 1.0),
        ("II", "E_v", 5.0),
        ("II", "F1_hz", 1.0),
        ("II", "F2_hz", 2.0),
        ("II", "G_s", 3.0),
        ("II", "I_a", 2.0),
        ("III", "t0_s", 0.0),
        ("III", "T_s", 1e-3),
        ("III", "n_i", 1.0),
        ("III", "E_v", 1.0),
        ("III", "F1_hz", 1.0),
        ("III", "F2_hz", 1.5),
        ("III", "R1_ohm", 10e3),
        ("III", "R0_ohm", 100e-6),
        ("III", "Rinit_ohm", 9e3),
        ("III", "kappa_per_C", 18.5e3),
        ("III", "p", 1.0),
        ("III", "I_a", 1e-3),
        ("IV", "t0_s", 0.0),
        ("IV", "T_s", 1e-3),
        ("IV", "n_i", 1.0),
        ("IV", "E_v", 5.0),
        ("IV", "F1_hz", 1.0),
        ("IV", "F2_hz", 2.0),
        ("IV", "G1_s", 3.0),
        ("IV", "G0_s", 100e-6),
        ("IV", "U0_v", 0.1),
        ("IV", "I_a", 10.0),
        ("V", "t0_s", 0.0),
        ("V", "T_s", 10e-3),
        ("V", "n_i", 6.0),
        ("V", "E_v", 3.0),
        ("V", "Eneg_v", -2.0),
        ("V", "F1_hz", 10e-3),
        ("V", "F2_hz", 100e-3),
        ("V", "F3_hz", 1.0),
        ("V", "z_dot", 0.32e12),
        ("V", "u_e", 323.2e-3),
        ("V", "phi_a0", 26.3),
        ("V", "phi_a1", 36.75),
        ("V", "phi_ar", 30.17),
        ("V", "w0", 100e-6),
        ("V", "p", 6.0),
        ("V", "u_c", 0.1e-3),
        ("V", "r_e0", 2e6),
        ("V", "r_e1", 5.1e6),
        ("V", "c_e", 17.4e-15),
        ("V", "phi_s0", 27.08),
        ("V", "phi_s1", 34.81),
        ("V", "d_s", 1.326e-9),
        ("V", "alpha_s", 3.77),
        ("V", "i_s", 108e-3),
        ("V", "n0", 2.9),
        ("V", "n1", 4.1),
        ("V", "alpha_f", -1.25),
        ("V", "u_theta", 26e-3),
        ("V", "phi_t0", 108.32),
        ("V", "alpha_t0", 1.81),
        ("V", "alpha_t1", 2.03),
        ("V", "i_t", 432.6e-3),
        ("V", "c_t", 20.7e-15),
        ("V", "r1", 1.0),
        ("V", "r3", 10e6),
        ("V", "r7", 1e9),
    ]
}

/// Normalization constants; bookkeeping only, they enter no equation.
pub const NORMALIZATION_CURRENT: [(ModelKind, f64); 4] = [
    (ModelKind::Binary, 10.0),
    (ModelKind::Continuous, 2.0),
    (ModelKind::Hp, 1e-3),
    (ModelKind::Multilevel, 10.0),
];
pub const NORMALIZATION_CONDUCTANCE_CONTINUOUS: f64 = 3.0;

/// The value the engine actually uses for a table row, if it has one.
pub fn bundled_value(table: &str, key: &str) -> Option<f64> {
    let kind = match table {
        "I" => ModelKind::Binary,
        "II" => ModelKind::Continuous,
        "III" => ModelKind::Hp,
        "IV" => ModelKind::Multilevel,
        "V" => ModelKind::Dbmd,
        _ => return None,
    };
    let d = kind.defaults();
    let freq = |k: usize| d.frequencies.get(k).copied();
    match key {
        "t0_s" => return Some(d.t0),
        "T_s" => return Some(d.period),
        "n_i" => return Some(d.iterations as f64),
        "E_v" => return Some(d.amplitude),
        "Eneg_v" => return d.negative_amplitude,
        "F1_hz" => return freq(0),
        "F2_hz" => return freq(1),
        "F3_hz" => return freq(2),
        "I_a" => return NORMALIZATION_CURRENT.iter().find(|(k, _)| *k == kind).map(|(_, v)| *v),
        _ => {}
    }
    match ModelSpec::bundled(kind) {
        ModelSpec::Binary { g_off, g_on, .. } => match key {
            "G1_s" => Some(g_on),
            "G0_s" => Some(g_off),
            _ => None,
        },
        ModelSpec::Continuous { g_high, .. } => match key {
            "G_s" => (g_high == NORMALIZATION_CONDUCTANCE_CONTINUOUS).then_some(g_high),
            _ => None,
        },
        ModelSpec::Hp(p) => match key {
            "R1_ohm" => Some(p.r_high),
            "R0_ohm" => Some(p.r_low),
            "Rinit_ohm" => Some(p.initial_resistance()),
            "kappa_per_C" => Some(p.kappa),
            "p" => Some(p.p as f64),
            _ => None,
        },
        ModelSpec::Multilevel(p) => match key {
            "G1_s" => Some(p.g_high),
            "G0_s" => Some(p.g_low),
            "U0_v" => Some(p.u_reset),
            _ => None,
        },
        ModelSpec::Dbmd(p) => dbmd_value(&p, key),
        ModelSpec::Curve { .. } => None,
    }
}

fn dbmd_value(p: &DbmdParameters, key: &str) -> Option<f64> {
    Some(match key {
        "z_dot" => p.z_dot,
        "u_e" => p.u_e_ref,
        "phi_a0" => p.phi_a0,
        "phi_a1" => p.phi_a1,
        "phi_ar" => p.phi_ar,
        "w0" => p.w0,
        "p" => p.p as f64,
        "u_c" => p.u_c,
        "r_e0" => p.r_e0,
        "r_e1" => p.r_e1,
        "c_e" => p.c_e,
        "phi_s0" => p.phi_s0,
        "phi_s1" => p.phi_s1,
        "d_s" => p.d_s,
        "alpha_s" => p.alpha_s,
        "i_s" => p.i_s,
        "n0" => p.n0,
        "n1" => p.n1,
        "alpha_f" => p.alpha_f,
        "u_theta" => p.u_theta,
        "phi_t0" => p.phi_t0,
        "alpha_t0" => p.alpha_t0,
        "alpha_t1" => p.alpha_t1,
        "i_t" => p.i_t,
        "c_t" => p.c_t,
        "r1" => p.r1,
        "r3" => p.r3,
        "r7" => p.r7,
        _ => return None,
    })
}
