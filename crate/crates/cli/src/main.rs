mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use memwave::identify::{identify, DifferenceScheme, SampleTrace};
use memwave::port::FixedPointConfig;
use memwave::scenario::{hysteresis_area, loop_area, run_scenario, sweep, TimeGrid, Trace};
use memwave::EmulationError;

use config::{bundled_value, table_constants, ModelSelector, ResolvedRun, RunConfig};

#[derive(Parser)]
#[command(name = "memwave", version, about = "Wave digital memristor emulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emulate a device under its table drive, one trace per frequency.
    Emulate(RunArgs),
    /// Identify a characteristic curve from a `t_s,u_v,i_a` trace.
    Identify(IdentifyArgs),
    /// Emulate an identified characteristic curve.
    Validate {
        /// Characteristic curve CSV.
        #[arg(long)]
        curve: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Emulate once per value of one parameter.
    Sweep {
        /// Parameter key, e.g. `n` or `kappa_per_C`.
        #[arg(long)]
        param: String,
        /// Values, separated by spaces or `;`.
        #[arg(long)]
        values: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare bundled defaults with the parameter tables.
    Selfcheck,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Key-value configuration file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// binary | continuous | hp | multilevel | dbmd | curve-file
    #[arg(long)]
    model: Option<String>,
    /// Excitation frequency in Hz (repeatable).
    #[arg(long = "freq")]
    frequencies: Vec<String>,
    /// Parameter override `key=value` (repeatable).
    #[arg(long = "set")]
    overrides: Vec<String>,
    /// sine | triangular
    #[arg(long)]
    waveform: Option<String>,
    /// Source amplitude E in V.
    #[arg(long)]
    amplitude: Option<String>,
    /// Sampling period T in s.
    #[arg(long)]
    period: Option<String>,
    /// Fixed-point sweeps per instance.
    #[arg(long)]
    iterations: Option<String>,
    /// Stop time in s (default: the table's run length).
    #[arg(long)]
    t_stop: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct IdentifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Resampling period in s for non-uniform traces.
    #[arg(long)]
    period: Option<String>,
    /// Three-point central difference instead of the forward difference.
    #[arg(long)]
    central: bool,
}

impl RunArgs {
    fn config(&self) -> memwave::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(m) = &self.model {
            cfg.set("model", m)?;
        }
        if !self.frequencies.is_empty() {
            cfg.set("F_hz", &self.frequencies.join(";"))?;
        }
        let flags = [
            ("waveform", &self.waveform),
            ("E_v", &self.amplitude),
            ("T_s", &self.period),
            ("n_i", &self.iterations),
            ("t_stop_s", &self.t_stop),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if let Some(dir) = &self.out_dir {
            cfg.out_dir = Some(dir.clone());
        }
        for o in &self.overrides {
            cfg.set_assignment(o)?;
        }
        Ok(cfg)
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
fn write_atomic(path: &Path, write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("writing in {}", dir.display()))?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        write(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn simulate(run: &ResolvedRun, frequency: f64) -> memwave::Result<Trace> {
    let d = &run.defaults;
    let grid = TimeGrid::new(d.t0, d.period, run.t_stop(frequency))?;
    let cfg = FixedPointConfig::new(d.iterations)?;
    let mut device = run.spec.build(d.period)?;
    run_scenario(&mut device, &run.excitation(frequency)?, &grid, &cfg)
}

/// Lobe area of every complete excitation period.
fn period_areas(trace: &Trace, frequency: f64) -> Vec<f64> {
    let n = (1.0 / (frequency * trace.period)).round() as usize;
    if n < 3 {
        return Vec::new();
    }
    let u = trace.voltage();
    let i = trace.current();
    (0..)
        .map(|p| p * n)
        .take_while(|start| start + n < u.len())
        .map(|s| loop_area(&u[s..=s + n], &i[s..=s + n]))
        .collect()
}

struct RunOutput {
    frequency: f64,
    path: PathBuf,
    trace: Trace,
    area: Option<f64>,
}

/// Runs every frequency (in parallel), then writes all traces. Nothing is
/// written unless every run succeeds.
fn emulate_all(run: &ResolvedRun, out_dir: &Path, tag: &str) -> Result<Vec<RunOutput>> {
    let results = sweep(&run.defaults.frequencies, |f| simulate(run, f));
    let mut outputs = Vec::new();
    for (&frequency, result) in run.defaults.frequencies.iter().zip(results) {
        let trace = result?;
        let area = hysteresis_area(&trace, 1.0 / frequency).ok();
        let path = out_dir.join(format!("{}{tag}_{frequency}hz.csv", run.name));
        outputs.push(RunOutput {
            frequency,
            path,
            trace,
            area,
        });
    }
    for o in &outputs {
        write_atomic(&o.path, |w| o.trace.write_csv(w))?;
    }
    Ok(outputs)
}

fn format_area(area: Option<f64>) -> String {
    area.map_or("n/a".into(), |a| format!("{a:e}"))
}

fn report(outputs: &[RunOutput]) {
    for o in outputs {
        let last = o.trace.records.last().expect("non-empty trace");
        let z: Vec<String> = last.z.iter().map(|z| format!("{z}")).collect();
        let areas: Vec<String> = period_areas(&o.trace, o.frequency)
            .iter()
            .map(|a| format!("{a:e}"))
            .collect();
        println!(
            "{}: F = {} Hz, {} steps, final z = [{}], lobe area per period = [{}]",
            o.path.display(),
            o.frequency,
            o.trace.len() - 1,
            z.join(", "),
            areas.join(", ")
        );
    }
}

fn write_area_summary(path: &Path, outputs: &[RunOutput]) -> Result<()> {
    println!("area summary (last complete period, V*A):");
    for o in outputs {
        println!("  {} Hz -> {}", o.frequency, format_area(o.area));
    }
    write_atomic(path, |w| {
        writeln!(w, "# frequency_hz = hysteresis area (V*A), last complete period")?;
        for o in outputs {
            writeln!(w, "{} = {}", o.frequency, format_area(o.area))?;
        }
        Ok(())
    })
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_emulate(args: &RunArgs) -> Result<()> {
    let cfg = args.config()?;
    let run = cfg.resolve()?;
    let dir = out_dir(&cfg);
    let outputs = emulate_all(&run, &dir, "")?;
    report(&outputs);
    write_area_summary(&dir.join(format!("{}_areas.txt", run.name)), &outputs)
}

fn cmd_identify(args: &IdentifyArgs) -> Result<()> {
    let file = std::fs::File::open(&args.input)
        .map_err(|e| EmulationError::Config(format!("cannot read {}: {e}", args.input.display())))?;
    let trace = SampleTrace::read_csv(std::io::BufReader::new(file))?;
    let period = args.period.as_deref().map(config::parse_number).transpose()?;
    let scheme = if args.central {
        DifferenceScheme::Central
    } else {
        DifferenceScheme::Forward
    };
    let curve = identify(&trace, period, scheme)?;
    write_atomic(&args.out, |w| curve.write_csv(w))?;
    let (lo, hi) = curve.validity_range();
    println!(
        "{}: {} knots, validity range [{lo}, {hi}] Wb",
        args.out.display(),
        curve.len()
    );
    Ok(())
}

/// Range of `phi0 + integral of x` over the trace samples.
fn flux_excursion(t: &[f64], x: &[f64], phi0: f64) -> (f64, f64) {
    let phi = memwave::identify::cumulative_integral(t, x);
    phi.iter()
        .fold((phi0, phi0), |(lo, hi), p| (lo.min(phi0 + p), hi.max(phi0 + p)))
}

fn cmd_validate(curve: &Path, args: &RunArgs) -> Result<()> {
    let mut cfg = args.config()?;
    if matches!(cfg.model, Some(ModelSelector::Bundled(_))) {
        return Err(EmulationError::Config("validate runs a curve file; drop --model".into()).into());
    }
    cfg.model = Some(ModelSelector::CurveFile(curve.to_path_buf()));
    let run = cfg.resolve()?;
    let memwave::scenario::ModelSpec::Curve { curve, initial_flux } = &run.spec else {
        unreachable!("curve-file selector resolves to a curve spec")
    };
    let (lo, hi) = curve.validity_range();
    let outputs = emulate_all(&run, &out_dir(&cfg), "")?;
    for o in &outputs {
        let t: Vec<f64> = o.trace.records.iter().map(|r| r.t).collect();
        let e: Vec<f64> = o.trace.records.iter().map(|r| r.e).collect();
        // the source flux bounds the drive; the device flux is what the curve saw
        let (src_lo, src_hi) = flux_excursion(&t, &e, *initial_flux);
        let (dev_lo, dev_hi) = flux_excursion(&t, &o.trace.voltage(), *initial_flux);
        // rounding in the flux sums must not trip the warning
        let slack = 1e-9 * (hi - lo).max(f64::MIN_POSITIVE);
        if src_lo.min(dev_lo) < lo - slack || src_hi.max(dev_hi) > hi + slack {
            eprintln!(
                "warning: F = {} Hz drives the flux over [{}, {}] Wb, outside the validity range [{lo}, {hi}] Wb; \
                 the curve is clamped there",
                o.frequency,
                src_lo.min(dev_lo),
                src_hi.max(dev_hi)
            );
        }
    }
    report(&outputs);
    write_area_summary(&out_dir(&cfg).join(format!("{}_areas.txt", run.name)), &outputs)
}

fn cmd_sweep(param: &str, values: &str, args: &RunArgs) -> Result<()> {
    let base = args.config()?;
    let values = config::parse_list(values)?;
    let dir = out_dir(&base);
    // resolve every member before running any, so a bad value writes nothing
    let runs = values
        .iter()
        .map(|v| {
            let mut cfg = base.clone();
            cfg.set(param, &format!("{v}"))?;
            cfg.resolve()
        })
        .collect::<memwave::Result<Vec<_>>>()?;
    let mut table = Vec::new();
    for (v, run) in values.iter().zip(&runs) {
        let outputs = emulate_all(run, &dir, &format!("_{param}{v}"))?;
        report(&outputs);
        table.extend(outputs.into_iter().map(|o| (*v, o.frequency, o.area)));
    }
    println!("{param} | frequency_hz | area");
    for (v, f, a) in &table {
        println!("{v} | {f} | {}", format_area(*a));
    }
    let name = runs.first().map_or("sweep".into(), |r| r.name.clone());
    write_atomic(&dir.join(format!("{name}_sweep_{param}.txt")), |w| {
        writeln!(w, "# {param}, frequency_hz, hysteresis area (V*A)")?;
        for (v, f, a) in &table {
            writeln!(w, "{v}, {f}, {}", format_area(*a))?;
        }
        Ok(())
    })
}

/// Prints every table row next to the bundled value; false on any mismatch.
fn cmd_selfcheck() -> bool {
    let mut ok = true;
    for (table, key, expected) in table_constants() {
        let actual = bundled_value(table, key);
        let matches = actual.is_some_and(|a| (a - expected).abs() <= 1e-12 * expected.abs());
        ok &= matches;
        println!(
            "{} table {table:<3} {key:<12} table {expected:<12e} bundled {}",
            if matches { "ok  " } else { "DIFF" },
            actual.map_or("missing".into(), |a| format!("{a:e}"))
        );
    }
    println!(
        "{}",
        if ok {
            "all bundled defaults match"
        } else {
            "bundled defaults differ"
        }
    );
    ok
}

/// 2: configuration or file format, 3: numeric failure during a run,
/// 4: identification.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<EmulationError>() {
        Some(e) if e.is_numeric() => 3,
        Some(EmulationError::Identification(_)) => 4,
        Some(EmulationError::Analysis(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Emulate(args) => cmd_emulate(args),
        Command::Identify(args) => cmd_identify(args),
        Command::Validate { curve, run } => cmd_validate(curve, run),
        Command::Sweep { param, values, run } => cmd_sweep(param, values, run),
        Command::Selfcheck => {
            return if cmd_selfcheck() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
