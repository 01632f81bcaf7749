//! The three-step discrimination sequence and its contrast measure.
//!
//! Step I drives the 1-3 transition with pulse area pi/4 (a pi/2
//! rotation): left-handed molecules move to (|1> - i|3>)/sqrt(2),
//! right-handed ones to (|1> + i|3>)/sqrt(2). Step II drives 1-2 and
//! 2-3 with equal envelopes and a pi/2 phase lead on channel 12, so the
//! effective bright-state area reaches pi/2: the left branch lands on
//! |2> while the right branch sits in the dark state and does not move.
//! Step III drives 1-3 again with area 3pi/4, returning the right branch
//! to |1> and leaving |2> untouched. Both chiralities start from |1>.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{
    evolve_lindblad, evolve_piecewise, evolve_rk4, CollapseChannel, TimeDependentGenerator,
};
use crate::hamiltonian::{Chirality, DetuningSet};
use crate::pulses::{calibrate_amplitude, Channel, Envelope, PulseSegment, Schedule, Shape};
use crate::quantum::{DensityMatrix3, StateVec3};

/// Default per-channel pulse areas: pi/4 on 1-3 (step I), pi/(2 sqrt 2)
/// on 1-2 and 2-3 (step II, effective area pi/2), 3 pi/4 on 1-3
/// (step III).
pub const STEP_ONE_AREA: f64 = std::f64::consts::FRAC_PI_4;
pub const STEP_TWO_AREA: f64 = std::f64::consts::FRAC_PI_4 * std::f64::consts::SQRT_2;
pub const STEP_THREE_AREA: f64 = 3.0 * std::f64::consts::FRAC_PI_4;

/// Full description of one protocol instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    pub shape: Shape,
    /// Per-step durations, seconds.
    pub durations: [f64; 3],
    /// Channel-13 area of step I.
    pub step1_area: f64,
    /// Area on each of channels 12 and 23 in step II.
    pub step2_area: f64,
    /// Channel-13 area of step III.
    pub step3_area: f64,
    /// Carrier phase of channel 12 in step II; pi/2 makes
    /// Omega12 = i Omega23.
    pub phase12: f64,
    pub phase23: f64,
    pub phase13: f64,
    pub detuning: DetuningSet,
}

impl Default for ProtocolSpec {
    fn default() -> Self {
        Self {
            shape: Shape::Rect,
            durations: [1.0; 3],
            step1_area: STEP_ONE_AREA,
            step2_area: STEP_TWO_AREA,
            step3_area: STEP_THREE_AREA,
            phase12: std::f64::consts::FRAC_PI_2,
            phase23: 0.0,
            phase13: 0.0,
            detuning: DetuningSet::zero(),
        }
    }
}

impl ProtocolSpec {
    pub fn validate(&self) -> Result<()> {
        for d in self.durations {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::NonPositiveDuration(d));
            }
        }
        for a in [self.step1_area, self.step2_area, self.step3_area] {
            if !a.is_finite() || a < 0.0 {
                return Err(Error::NegativeArea(a));
            }
        }
        if ![self.phase12, self.phase23, self.phase13].iter().all(|p| p.is_finite()) {
            return Err(Error::NonFinite("protocol phases"));
        }
        Ok(())
    }

    pub fn min_duration(&self) -> f64 {
        self.durations.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Build the three-segment pulse schedule for a protocol spec.
pub fn build_protocol(spec: &ProtocolSpec) -> Result<Schedule> {
    spec.validate()?;
    let [d1, d2, d3] = spec.durations;

    let env13_1 = Envelope::new(
        spec.shape,
        calibrate_amplitude(spec.shape, d1, spec.step1_area)?,
        0.0,
        d1,
        spec.phase13,
    )?;
    let amp2 = calibrate_amplitude(spec.shape, d2, spec.step2_area)?;
    let env12 = Envelope::new(spec.shape, amp2, d1, d2, spec.phase12)?;
    let env23 = Envelope::new(spec.shape, amp2, d1, d2, spec.phase23)?;
    let env13_3 = Envelope::new(
        spec.shape,
        calibrate_amplitude(spec.shape, d3, spec.step3_area)?,
        d1 + d2,
        d3,
        spec.phase13,
    )?;

    Schedule::new(vec![
        PulseSegment::single(Channel::C13, env13_1),
        PulseSegment::new(Some(env12), Some(env23), None)?,
        PulseSegment::single(Channel::C13, env13_3),
    ])
}

/// Engine selection for protocol runs.
#[derive(Debug, Clone, PartialEq)]
pub enum EngineChoice {
    /// Exact piecewise propagation when the schedule factorizes,
    /// otherwise RK4 at the default step.
    Auto,
    Piecewise,
    /// Fixed-step RK4 with step = shortest duration / divisor.
    Rk4 { step_divisor: u32 },
    /// Lindblad master equation with the given collapse channels.
    Lindblad {
        channels: Vec<CollapseChannel>,
        step_divisor: u32,
    },
}

pub const DEFAULT_STEP_DIVISOR: u32 = 1000;

/// Which engine actually ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Piecewise,
    Rk4,
    Lindblad,
}

impl EngineKind {
    pub fn name(&self) -> &'static str {
        match self {
            EngineKind::Piecewise => "piecewise",
            EngineKind::Rk4 => "rk4",
            EngineKind::Lindblad => "lindblad",
        }
    }
}

/// Final state of a protocol run; mixed when decoherence is modelled.
#[derive(Debug, Clone, PartialEq)]
pub enum FinalState {
    Pure(StateVec3),
    Mixed(DensityMatrix3),
}

/// Outcome of running the protocol for one chirality.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub chirality: Chirality,
    pub final_state: FinalState,
    pub populations: [f64; 3],
    pub engine: EngineKind,
    /// Norm drift (pure engines) or trace drift (Lindblad).
    pub drift: f64,
}

/// Run the protocol for one chirality from the ground state |1>.
pub fn run_protocol(spec: &ProtocolSpec, chirality: Chirality) -> Result<ProtocolResult> {
    run_protocol_with(spec, chirality, &EngineChoice::Auto)
}

/// Run the protocol with an explicit engine choice.
pub fn run_protocol_with(
    spec: &ProtocolSpec,
    chirality: Chirality,
    engine: &EngineChoice,
) -> Result<ProtocolResult> {
    let schedule = build_protocol(spec)?;
    let gen = TimeDependentGenerator::new(schedule, spec.detuning, chirality);
    let psi0 = StateVec3::ground();

    let from_pure = |psi: StateVec3, engine: EngineKind, drift: f64| ProtocolResult {
        chirality,
        populations: psi.populations(),
        final_state: FinalState::Pure(psi),
        engine,
        drift,
    };

    match engine {
        EngineChoice::Piecewise => {
            let psi = evolve_piecewise(&gen, &psi0)?;
            Ok(from_pure(psi, EngineKind::Piecewise, 0.0))
        }
        EngineChoice::Auto => match evolve_piecewise(&gen, &psi0) {
            Ok(psi) => Ok(from_pure(psi, EngineKind::Piecewise, 0.0)),
            Err(Error::NonCommutingSegment) => {
                let step = spec.min_duration() / DEFAULT_STEP_DIVISOR as f64;
                let (psi, report) = evolve_rk4(&gen, &psi0, step)?;
                Ok(from_pure(psi, EngineKind::Rk4, report.norm_drift))
            }
            Err(other) => Err(other),
        },
        EngineChoice::Rk4 { step_divisor } => {
            let step = spec.min_duration() / (*step_divisor).max(10) as f64;
            let (psi, report) = evolve_rk4(&gen, &psi0, step)?;
            Ok(from_pure(psi, EngineKind::Rk4, report.norm_drift))
        }
        EngineChoice::Lindblad { channels, step_divisor } => {
            let step = spec.min_duration() / (*step_divisor).max(10) as f64;
            let rho0 = DensityMatrix3::pure(&psi0);
            let (rho, report) = evolve_lindblad(&gen, channels, &rho0, step)?;
            Ok(ProtocolResult {
                chirality,
                populations: rho.populations(),
                final_state: FinalState::Mixed(rho),
                engine: EngineKind::Lindblad,
                drift: report.trace_drift,
            })
        }
    }
}

/// States after each protocol step (exact piecewise propagation).
pub fn step_states(spec: &ProtocolSpec, chirality: Chirality) -> Result<[StateVec3; 3]> {
    let schedule = build_protocol(spec)?;
    let mut out = Vec::with_capacity(3);
    for k in 1..=3 {
        let prefix = Schedule::new(schedule.segments()[..k].to_vec())?;
        let gen = TimeDependentGenerator::new(prefix, spec.detuning, chirality);
        out.push(evolve_piecewise(&gen, &StateVec3::ground())?);
    }
    Ok([out[0], out[1], out[2]])
}

/// Discrimination contrast C = P_left(|2>) + P_right(|1>) - 1.
///
/// 1 for perfect discrimination; 0 for the identity protocol.
pub fn contrast(left: &ProtocolResult, right: &ProtocolResult) -> f64 {
    left.populations[1] + right.populations[0] - 1.0
}

/// Both chirality runs plus their contrast.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrimination {
    pub left: ProtocolResult,
    pub right: ProtocolResult,
    pub contrast: f64,
}

pub fn run_discrimination(spec: &ProtocolSpec, engine: &EngineChoice) -> Result<Discrimination> {
    let left = run_protocol_with(spec, Chirality::Left, engine)?;
    let right = run_protocol_with(spec, Chirality::Right, engine)?;
    let contrast = contrast(&left, &right);
    Ok(Discrimination { left, right, contrast })
}
