//! Command implementations behind the `chiralsim` binary.
//!
//! Exit-code contract: 0 success, 2 configuration/flag errors, 3
//! numerical-invariant violations (norm or trace drift beyond
//! [`tolerances::DRIFT_LIMIT`]), 4 output I/O failures.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{parse_complex, ConfigError, EngineKindSection, RunConfig};
use crate::error::Error;
use crate::evolution::{evolve_lindblad, evolve_piecewise, evolve_rk4, CollapseChannel};
use crate::hamiltonian::{dressed_eigensystem, Chirality, RabiSet};
use crate::protocol::{run_discrimination, Discrimination, EngineKind};
use crate::quantum::DensityMatrix3;
use crate::robustness::{run_sweep, SweepRecord};
use crate::tolerances;

/// Environment variable overriding the default output directory.
pub const OUTPUT_DIR_ENV: &str = "CHIRALSIM_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::Config(err.0)
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            // integrator output failing its invariants
            Error::InvalidDensity(_) | Error::NotUnitary(_) | Error::NotHermitian(_) => {
                CliError::Numerical(err.to_string())
            }
            // everything else traces back to how the run was set up
            _ => CliError::Config(err.to_string()),
        }
    }
}

/// C-style `%.12e` formatting: 12 fractional digits, two-digit signed
/// exponent. Keeps CSV output byte-stable.
pub fn fmt_e(value: f64) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let value = if value == 0.0 { 0.0 } else { value }; // normalize -0.0
    let s = format!("{value:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("{:e} always has an exponent");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

fn fmt_complex(z: Complex64) -> String {
    let im = fmt_e(z.im);
    let sep = if im.starts_with('-') { "" } else { "+" };
    format!("{}{}{}i", fmt_e(z.re), sep, im)
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
            Ok(RunConfig::from_toml_str(&text)?)
        }
    }
}

fn check_drift(drift: f64, what: &str) -> Result<(), CliError> {
    if !drift.is_finite() || drift > tolerances::DRIFT_LIMIT {
        return Err(CliError::Numerical(format!(
            "{what} drift {drift:.3e} exceeds tolerance {:.1e}",
            tolerances::DRIFT_LIMIT
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ChiralityReport {
    chirality: &'static str,
    populations: [f64; 3],
    engine: &'static str,
    drift: f64,
}

#[derive(Serialize)]
struct ProtocolReport {
    left: ChiralityReport,
    right: ChiralityReport,
    contrast: f64,
}

fn protocol_report(d: &Discrimination) -> ProtocolReport {
    let side = |r: &crate::protocol::ProtocolResult, name: &'static str| ChiralityReport {
        chirality: name,
        populations: r.populations,
        engine: r.engine.name(),
        drift: r.drift,
    };
    ProtocolReport {
        left: side(&d.left, "left"),
        right: side(&d.right, "right"),
        contrast: d.contrast,
    }
}

/// `chiralsim protocol`: run both chiralities and report populations
/// and contrast.
pub fn cmd_protocol(config: Option<&Path>, json: bool) -> Result<(), CliError> {
    let cfg = load_config(config)?;
    let model = cfg.error_params()?.to_model()?;
    let spec = crate::robustness::apply_error(&cfg.protocol_spec()?, &model);
    let engine = cfg.engine_choice()?;
    let d = run_discrimination(&spec, &engine)?;
    check_drift(d.left.drift.max(d.right.drift), "norm/trace")?;

    if json {
        let report = protocol_report(&d);
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        return Ok(());
    }
    for r in [&d.left, &d.right] {
        let name = match r.chirality {
            Chirality::Left => "left ",
            Chirality::Right => "right",
        };
        println!("{name}  engine={} drift={}", r.engine.name(), fmt_e(r.drift));
        for (k, p) in r.populations.iter().enumerate() {
            println!("  p{} = {}", k + 1, fmt_e(*p));
        }
    }
    println!("contrast = {}", fmt_e(d.contrast));
    Ok(())
}

const CSV_HEADER: &str = "epsilon,scale1,scale2,scale3,dphi12,delta12,delta23,delta13,gamma,\
p_l1,p_l2,p_l3,p_r1,p_r2,p_r3,contrast,engine,drift";

fn csv_row(rec: &SweepRecord) -> String {
    let p = &rec.params;
    let mut fields: Vec<String> = [
        p.epsilon, p.scale1, p.scale2, p.scale3, p.dphi12, p.delta12, p.delta23, p.delta13,
        p.gamma,
    ]
    .iter()
    .map(|v| fmt_e(*v))
    .collect();
    for v in rec.p_left.iter().chain(rec.p_right.iter()) {
        fields.push(fmt_e(*v));
    }
    fields.push(fmt_e(rec.contrast));
    fields.push(rec.engine.name().to_string());
    fields.push(fmt_e(rec.drift));
    fields.join(",")
}

/// Render sweep records as an RFC-4180-style CSV document ("\n" line
/// endings, header mandatory). Byte-identical for identical inputs.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for rec in records {
        out.push_str(&csv_row(rec));
        out.push('\n');
    }
    out
}

fn output_dir(cfg: &RunConfig) -> PathBuf {
    if let Some(dir) = &cfg.output.dir {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from(".")
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// `chiralsim sweep`: run the configured grid and write CSV (plus an
/// optional JSON mirror of the same records).
pub fn cmd_sweep(config: &Path, output_override: Option<&Path>) -> Result<PathBuf, CliError> {
    let cfg = load_config(Some(config))?;
    let spec = cfg.protocol_spec()?;
    let points = cfg.sweep_points()?;
    let records = run_sweep(&spec, &points);

    let csv_path = match output_override {
        Some(path) => path.to_path_buf(),
        None => output_dir(&cfg).join(cfg.output.csv.as_deref().unwrap_or("sweep.csv")),
    };
    write_output(&csv_path, sweep_csv(&records).as_bytes())?;

    if let Some(json_name) = &cfg.output.json {
        let json_path = output_dir(&cfg).join(json_name);
        let doc = serde_json::to_string_pretty(&records).expect("records serialize");
        write_output(&json_path, doc.as_bytes())?;
    }
    println!("wrote {} ({} rows)", csv_path.display(), records.len());
    Ok(csv_path)
}

/// `chiralsim eigen`: print the dressed eigensystem for a drive pair.
///
/// Either `--omega0 X` (the protocol's step-II pair, Omega12 = iX,
/// Omega23 = X) or explicit `--omega12`/`--omega23` complex values.
/// A negative omega0 is an amplitude with carrier phase pi; the
/// spectrum is unchanged.
pub fn cmd_eigen(
    omega0: Option<f64>,
    omega12: Option<&str>,
    omega23: Option<&str>,
) -> Result<(), CliError> {
    let rabi = match (omega0, omega12, omega23) {
        (Some(o0), None, None) => {
            if !o0.is_finite() {
                return Err(CliError::Config("omega0 must be finite".into()));
            }
            RabiSet::step_two_pair(o0)
        }
        (None, Some(o12), Some(o23)) => RabiSet::new(
            parse_complex(o12).map_err(|e| CliError::Config(format!("omega12: {e}")))?,
            parse_complex(o23).map_err(|e| CliError::Config(format!("omega23: {e}")))?,
            Complex64::ZERO,
        )
        .map_err(|e| CliError::Config(e.to_string()))?,
        _ => {
            return Err(CliError::Config(
                "pass either --omega0, or both --omega12 and --omega23".into(),
            ))
        }
    };
    let eigen = dressed_eigensystem(&rabi).map_err(|e| CliError::Config(e.to_string()))?;
    for (value, state) in eigen {
        let a = state.amplitudes();
        println!(
            "lambda = {}  state = ({}, {}, {})",
            fmt_e(value),
            fmt_complex(a[0]),
            fmt_complex(a[1]),
            fmt_complex(a[2])
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct EvolveReport {
    engine: &'static str,
    amplitudes: [String; 3],
    populations: [f64; 3],
    drift: f64,
}

/// `chiralsim evolve`: propagate an explicit schedule from the config's
/// `[evolve]` section.
pub fn cmd_evolve(config: &Path, json: bool) -> Result<(), CliError> {
    let cfg = load_config(Some(config))?;
    let (gen, psi0) = cfg.evolve_inputs()?;
    let divisor = cfg.engine.step_divisor.max(10);
    let step = gen.span() / divisor as f64;

    let (engine, amplitudes, populations, drift) = match cfg.engine.kind {
        EngineKindSection::Piecewise => {
            let psi = evolve_piecewise(&gen, &psi0)?;
            (EngineKind::Piecewise, Some(psi.amplitudes()), psi.populations(), 0.0)
        }
        EngineKindSection::Auto => match evolve_piecewise(&gen, &psi0) {
            Ok(psi) => (EngineKind::Piecewise, Some(psi.amplitudes()), psi.populations(), 0.0),
            Err(Error::NonCommutingSegment) => {
                let (psi, report) = evolve_rk4(&gen, &psi0, step)?;
                (EngineKind::Rk4, Some(psi.amplitudes()), psi.populations(), report.norm_drift)
            }
            Err(other) => return Err(other.into()),
        },
        EngineKindSection::Rk4 => {
            let (psi, report) = evolve_rk4(&gen, &psi0, step)?;
            (EngineKind::Rk4, Some(psi.amplitudes()), psi.populations(), report.norm_drift)
        }
        EngineKindSection::Lindblad => {
            let channels: Vec<CollapseChannel> = if cfg.error.gamma > 0.0 {
                CollapseChannel::downhill_set(cfg.error.gamma)?
            } else {
                Vec::new()
            };
            let rho0 = DensityMatrix3::pure(&psi0);
            let (rho, report) = evolve_lindblad(&gen, &channels, &rho0, step)?;
            (EngineKind::Lindblad, None, rho.populations(), report.trace_drift)
        }
    };
    check_drift(drift, "norm/trace")?;

    let amp_strings = amplitudes
        .map(|a| [fmt_complex(a[0]), fmt_complex(a[1]), fmt_complex(a[2])])
        .unwrap_or_else(|| ["-".into(), "-".into(), "-".into()]);
    if json {
        let report = EvolveReport {
            engine: engine.name(),
            amplitudes: amp_strings,
            populations,
            drift,
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        return Ok(());
    }
    println!("engine={} drift={}", engine.name(), fmt_e(drift));
    if let Some(a) = amplitudes {
        println!("state = ({}, {}, {})", fmt_complex(a[0]), fmt_complex(a[1]), fmt_complex(a[2]));
    }
    for (k, p) in populations.iter().enumerate() {
        println!("p{} = {}", k + 1, fmt_e(*p));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_e_is_c_style() {
        assert_eq!(fmt_e(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e(-0.0), "0.000000000000e+00");
        assert_eq!(fmt_e(0.9999999999999998), "1.000000000000e+00");
        assert_eq!(fmt_e(-2.5e-3), "-2.500000000000e-03");
        assert_eq!(fmt_e(6.02214076e23), "6.022140760000e+23");
        assert_eq!(fmt_e(f64::NAN), "nan");
    }

    #[test]
    fn fmt_complex_signs() {
        assert_eq!(
            fmt_complex(Complex64::new(1.0, -0.5)),
            "1.000000000000e+00-5.000000000000e-01i"
        );
        assert_eq!(
            fmt_complex(Complex64::new(-1.0, 0.5)),
            "-1.000000000000e+00+5.000000000000e-01i"
        );
    }

    #[test]
    fn csv_layout_is_stable() {
        let spec = crate::protocol::ProtocolSpec::default();
        let records = run_sweep(&spec, &[crate::robustness::SweepParams::default()]);
        let doc = sweep_csv(&records);
        let mut lines = doc.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 18);
        assert_eq!(fields[0], "0.000000000000e+00"); // epsilon
        assert_eq!(fields[15], "1.000000000000e+00"); // contrast
        assert_eq!(fields[16], "piecewise");
        assert!(doc.ends_with('\n'));
        assert!(!doc.contains('\r'));
    }
}
