//! Run configuration: a single TOML document covering protocol runs,
//! sweeps, and raw schedule evolutions.
//!
//! Unknown keys are rejected. Every section has defaults, so the empty
//! document is the ideal protocol. See the repository README for a
//! commented example.

use serde::Deserialize;

use num_complex::Complex64;

use crate::error::Error;
use crate::evolution::{CollapseChannel, TimeDependentGenerator};
use crate::hamiltonian::{Chirality, DetuningSet};
use crate::protocol::{EngineChoice, ProtocolSpec, DEFAULT_STEP_DIVISOR};
use crate::pulses::{Envelope, PulseSegment, Schedule, Shape};
use crate::quantum::StateVec3;
use crate::robustness::{SweepGrid, SweepParams};

/// Hard cap on the number of sweep grid points a config may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Configuration errors carry a message naming the offending key or
/// value; the CLI maps them to exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl From<Error> for ConfigError {
    fn from(err: Error) -> Self {
        ConfigError(err.to_string())
    }
}

fn bad(key: &str, why: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("{key}: {why}"))
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub protocol: ProtocolSection,
    pub engine: EngineSection,
    pub error: ErrorSection,
    pub sweep: SweepGrid,
    pub evolve: Option<EvolveSection>,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolSection {
    pub shape: Shape,
    pub durations: [f64; 3],
    pub step1_area: f64,
    pub step2_area: f64,
    pub step3_area: f64,
    pub phase12: f64,
    pub phase23: f64,
    pub phase13: f64,
    pub detuning: DetuningSet,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        let spec = ProtocolSpec::default();
        Self {
            shape: spec.shape,
            durations: spec.durations,
            step1_area: spec.step1_area,
            step2_area: spec.step2_area,
            step3_area: spec.step3_area,
            phase12: spec.phase12,
            phase23: spec.phase23,
            phase13: spec.phase13,
            detuning: spec.detuning,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineSection {
    pub kind: EngineKindSection,
    /// RK4/Lindblad step = shortest duration / step_divisor.
    pub step_divisor: u32,
}

impl Default for EngineSection {
    fn default() -> Self {
        Self { kind: EngineKindSection::Auto, step_divisor: DEFAULT_STEP_DIVISOR }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKindSection {
    Auto,
    Piecewise,
    Rk4,
    Lindblad,
}

/// Scalar error model for `protocol` runs; `evolve` reads only gamma.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorSection {
    pub epsilon: f64,
    pub scale1: f64,
    pub scale2: f64,
    pub scale3: f64,
    pub dphi12: f64,
    pub delta12: f64,
    pub delta23: f64,
    pub delta13: f64,
    pub gamma: f64,
}

impl Default for ErrorSection {
    fn default() -> Self {
        let p = SweepParams::default();
        Self {
            epsilon: p.epsilon,
            scale1: p.scale1,
            scale2: p.scale2,
            scale3: p.scale3,
            dphi12: p.dphi12,
            delta12: p.delta12,
            delta23: p.delta23,
            delta13: p.delta13,
            gamma: p.gamma,
        }
    }
}

impl ErrorSection {
    pub fn to_params(&self) -> SweepParams {
        SweepParams {
            epsilon: self.epsilon,
            scale1: self.scale1,
            scale2: self.scale2,
            scale3: self.scale3,
            dphi12: self.dphi12,
            delta12: self.delta12,
            delta23: self.delta23,
            delta13: self.delta13,
            gamma: self.gamma,
        }
    }
}

/// Raw schedule evolution: initial state, chirality, optional window,
/// and explicit pulse segments.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSection {
    /// Three complex amplitudes, e.g. ["1", "0", "-0.5i"]; normalized
    /// before use.
    pub initial: [String; 3],
    #[serde(default = "default_chirality")]
    pub chirality: Chirality,
    /// Evolution window [start, end]; defaults to the schedule hull.
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    #[serde(default)]
    pub detuning: DetuningSet,
    pub segments: Vec<SegmentSection>,
}

fn default_chirality() -> Chirality {
    Chirality::Left
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSection {
    pub t_start: f64,
    pub duration: f64,
    #[serde(default)]
    pub ch12: Option<EnvelopeSection>,
    #[serde(default)]
    pub ch23: Option<EnvelopeSection>,
    #[serde(default)]
    pub ch13: Option<EnvelopeSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeSection {
    pub shape: Shape,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Output directory; falls back to $CHIRALSIM_OUTPUT_DIR, then ".".
    pub dir: Option<String>,
    /// CSV file name for sweeps.
    pub csv: Option<String>,
    /// Optional JSON mirror of the sweep records.
    pub json: Option<String>,
}

impl RunConfig {
    /// Parse a TOML document; parse errors name the offending key.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    /// Domain-level validation of the protocol section.
    pub fn protocol_spec(&self) -> Result<ProtocolSpec, ConfigError> {
        let p = &self.protocol;
        let spec = ProtocolSpec {
            shape: p.shape,
            durations: p.durations,
            step1_area: p.step1_area,
            step2_area: p.step2_area,
            step3_area: p.step3_area,
            phase12: p.phase12,
            phase23: p.phase23,
            phase13: p.phase13,
            detuning: p.detuning,
        };
        spec.validate().map_err(|e| bad("protocol", e))?;
        DetuningSet::new(p.detuning.delta12, p.detuning.delta23, p.detuning.delta13)
            .map_err(|e| bad("protocol.detuning", e))?;
        Ok(spec)
    }

    /// Scalar error model for single runs.
    pub fn error_params(&self) -> Result<SweepParams, ConfigError> {
        let params = self.error.to_params();
        validate_params(&params, "error")?;
        Ok(params)
    }

    /// Engine choice for single runs, honoring `[engine]` and `[error]`.gamma.
    pub fn engine_choice(&self) -> Result<EngineChoice, ConfigError> {
        let div = self.engine.step_divisor;
        if !(10..=10_000_000).contains(&div) {
            return Err(bad("engine.step_divisor", "must be between 10 and 10000000"));
        }
        let choice = match self.engine.kind {
            EngineKindSection::Auto => {
                if self.error.gamma > 0.0 {
                    EngineChoice::Lindblad {
                        channels: CollapseChannel::downhill_set(self.error.gamma)
                            .map_err(|e| bad("error.gamma", e))?,
                        step_divisor: div,
                    }
                } else {
                    EngineChoice::Auto
                }
            }
            EngineKindSection::Piecewise => EngineChoice::Piecewise,
            EngineKindSection::Rk4 => EngineChoice::Rk4 { step_divisor: div },
            EngineKindSection::Lindblad => EngineChoice::Lindblad {
                channels: CollapseChannel::downhill_set(self.error.gamma)
                    .map_err(|e| bad("error.gamma", e))?,
                step_divisor: div,
            },
        };
        Ok(choice)
    }

    /// Expand and validate the sweep grid.
    pub fn sweep_points(&self) -> Result<Vec<SweepParams>, ConfigError> {
        let len = self
            .sweep
            .len()
            .ok_or_else(|| bad("sweep", "empty axis or grid size overflow"))?;
        if len == 0 {
            return Err(bad("sweep", "grid is empty"));
        }
        if len > MAX_GRID_POINTS {
            return Err(bad(
                "sweep",
                format!("grid has {len} points, more than the {MAX_GRID_POINTS} allowed"),
            ));
        }
        let points = self.sweep.points();
        for p in &points {
            validate_params(p, "sweep")?;
        }
        Ok(points)
    }

    /// Build the raw evolution inputs from the `[evolve]` section.
    pub fn evolve_inputs(&self) -> Result<(TimeDependentGenerator, StateVec3), ConfigError> {
        let section = self
            .evolve
            .as_ref()
            .ok_or_else(|| bad("evolve", "section missing"))?;
        let psi0 = parse_state(&section.initial).map_err(|e| bad("evolve.initial", e))?;
        let mut segments = Vec::new();
        for (idx, seg) in section.segments.iter().enumerate() {
            let key = format!("evolve.segments[{idx}]");
            let build = |env: &Option<EnvelopeSection>| -> Result<Option<Envelope>, ConfigError> {
                env.as_ref()
                    .map(|e| {
                        Envelope::new(e.shape, e.amplitude, seg.t_start, seg.duration, e.phase)
                            .map_err(|err| bad(&key, err))
                    })
                    .transpose()
            };
            segments.push(
                PulseSegment::new(build(&seg.ch12)?, build(&seg.ch23)?, build(&seg.ch13)?)
                    .map_err(|err| bad(&key, err))?,
            );
        }
        let schedule = Schedule::new(segments).map_err(|e| bad("evolve.segments", e))?;
        let detuning = DetuningSet::new(
            section.detuning.delta12,
            section.detuning.delta23,
            section.detuning.delta13,
        )
        .map_err(|e| bad("evolve.detuning", e))?;
        let mut gen = TimeDependentGenerator::new(schedule, detuning, section.chirality);
        if let Some([start, end]) = section.window {
            gen = gen.with_window(start, end).map_err(|e| bad("evolve.window", e))?;
        }
        Ok((gen, psi0))
    }
}

fn validate_params(p: &SweepParams, key: &str) -> Result<(), ConfigError> {
    let fields = [
        ("epsilon", p.epsilon),
        ("scale1", p.scale1),
        ("scale2", p.scale2),
        ("scale3", p.scale3),
        ("dphi12", p.dphi12),
        ("delta12", p.delta12),
        ("delta23", p.delta23),
        ("delta13", p.delta13),
        ("gamma", p.gamma),
    ];
    for (name, value) in fields {
        if !value.is_finite() {
            return Err(bad(&format!("{key}.{name}"), "must be finite"));
        }
    }
    if p.gamma < 0.0 {
        return Err(bad(&format!("{key}.gamma"), "must be non-negative"));
    }
    Ok(())
}

/// Parse a complex number: `1.5`, `-2e-3`, `i`, `-i`, `2.5i`, `1+2i`,
/// `1.5e-2-0.5i`. No interior whitespace.
pub fn parse_complex(text: &str) -> Result<Complex64, ConfigError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ConfigError("empty complex number".into()));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        let re: f64 = s
            .parse()
            .map_err(|_| ConfigError(format!("invalid real number '{s}'")))?;
        return Ok(Complex64::new(re, 0.0));
    };
    // find the sign that splits real and imaginary parts, skipping
    // exponent signs and a leading sign
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(idx, ch)| {
            matches!(ch, '+' | '-')
                && !matches!(body.as_bytes()[idx - 1], b'e' | b'E')
        })
        .map(|(idx, _)| idx)
        .last();
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re: f64 = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse()
            .map_err(|_| ConfigError(format!("invalid real part '{re_str}' in '{s}'")))?
    };
    let im: f64 = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => im_str
            .parse()
            .map_err(|_| ConfigError(format!("invalid imaginary part '{im_str}' in '{s}'")))?,
    };
    Ok(Complex64::new(re, im))
}

/// Parse and normalize three complex amplitude strings into a state.
pub fn parse_state(amps: &[String; 3]) -> Result<StateVec3, ConfigError> {
    let c1 = parse_complex(&amps[0])?;
    let c2 = parse_complex(&amps[1])?;
    let c3 = parse_complex(&amps[2])?;
    StateVec3::new(c1, c2, c3).map_err(ConfigError::from)
}
