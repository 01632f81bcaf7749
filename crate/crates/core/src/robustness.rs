//! Error models and deterministic parameter sweeps.
//!
//! Grids are explicit cartesian products; records come back in grid
//! order and repeated sweeps over the same grid are bit-identical.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evolution::CollapseChannel;
use crate::hamiltonian::DetuningSet;
use crate::protocol::{
    run_discrimination, EngineChoice, EngineKind, ProtocolSpec, DEFAULT_STEP_DIVISOR,
};

/// Deterministic perturbation of a protocol spec.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorModel {
    /// Uniform area scale (1 + epsilon) applied to every step.
    pub area_scale: f64,
    /// Additional per-step area scales.
    pub step_scales: [f64; 3],
    /// Offset added to the channel-12 carrier phase (ideal pi/2).
    pub phase12_offset: f64,
    /// Detunings added to the spec's own.
    pub detuning: DetuningSet,
    /// Collapse channels for the decoherence extension.
    pub channels: Vec<CollapseChannel>,
}

impl Default for ErrorModel {
    fn default() -> Self {
        Self {
            area_scale: 1.0,
            step_scales: [1.0; 3],
            phase12_offset: 0.0,
            detuning: DetuningSet::zero(),
            channels: Vec::new(),
        }
    }
}

impl ErrorModel {
    pub fn uniform_area_error(epsilon: f64) -> Self {
        Self { area_scale: 1.0 + epsilon, ..Self::default() }
    }

    pub fn has_decoherence(&self) -> bool {
        self.channels.iter().any(|ch| ch.rate() > 0.0)
    }
}

/// Apply an error model to a spec; the zero model is the identity.
pub fn apply_error(spec: &ProtocolSpec, model: &ErrorModel) -> ProtocolSpec {
    ProtocolSpec {
        step1_area: spec.step1_area * model.area_scale * model.step_scales[0],
        step2_area: spec.step2_area * model.area_scale * model.step_scales[1],
        step3_area: spec.step3_area * model.area_scale * model.step_scales[2],
        phase12: spec.phase12 + model.phase12_offset,
        detuning: spec.detuning.add(&model.detuning),
        ..*spec
    }
}

/// One grid point of the sweep, as scalar parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    /// Uniform area error epsilon (scale 1 + epsilon).
    pub epsilon: f64,
    pub scale1: f64,
    pub scale2: f64,
    pub scale3: f64,
    /// Channel-12 phase offset, rad.
    pub dphi12: f64,
    pub delta12: f64,
    pub delta23: f64,
    pub delta13: f64,
    /// Common rate of the downhill collapse channels (3->1, 3->2, 2->1).
    pub gamma: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            scale1: 1.0,
            scale2: 1.0,
            scale3: 1.0,
            dphi12: 0.0,
            delta12: 0.0,
            delta23: 0.0,
            delta13: 0.0,
            gamma: 0.0,
        }
    }
}

impl SweepParams {
    pub fn to_model(&self) -> Result<ErrorModel> {
        Ok(ErrorModel {
            area_scale: 1.0 + self.epsilon,
            step_scales: [self.scale1, self.scale2, self.scale3],
            phase12_offset: self.dphi12,
            detuning: DetuningSet::new(self.delta12, self.delta23, self.delta13)?,
            channels: if self.gamma > 0.0 {
                CollapseChannel::downhill_set(self.gamma)?
            } else {
                Vec::new()
            },
        })
    }
}

/// Cartesian sweep axes. Expansion order is fixed: epsilon outermost,
/// then the step scales, phase offset, detunings, gamma innermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepGrid {
    pub epsilon: Vec<f64>,
    pub scale1: Vec<f64>,
    pub scale2: Vec<f64>,
    pub scale3: Vec<f64>,
    pub dphi12: Vec<f64>,
    pub delta12: Vec<f64>,
    pub delta23: Vec<f64>,
    pub delta13: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            epsilon: vec![0.0],
            scale1: vec![1.0],
            scale2: vec![1.0],
            scale3: vec![1.0],
            dphi12: vec![0.0],
            delta12: vec![0.0],
            delta23: vec![0.0],
            delta13: vec![0.0],
            gamma: vec![0.0],
        }
    }
}

impl SweepGrid {
    fn axes(&self) -> [&Vec<f64>; 9] {
        [
            &self.epsilon,
            &self.scale1,
            &self.scale2,
            &self.scale3,
            &self.dphi12,
            &self.delta12,
            &self.delta23,
            &self.delta13,
            &self.gamma,
        ]
    }

    /// Number of grid points; None on overflow or an empty axis.
    pub fn len(&self) -> Option<usize> {
        self.axes().iter().try_fold(1usize, |acc, axis| {
            if axis.is_empty() {
                None
            } else {
                acc.checked_mul(axis.len())
            }
        })
    }

    pub fn is_empty(&self) -> bool {
        self.axes().iter().any(|axis| axis.is_empty())
    }

    /// Expand the cartesian product in deterministic order.
    pub fn points(&self) -> Vec<SweepParams> {
        let mut out = Vec::new();
        for &epsilon in &self.epsilon {
            for &scale1 in &self.scale1 {
                for &scale2 in &self.scale2 {
                    for &scale3 in &self.scale3 {
                        for &dphi12 in &self.dphi12 {
                            for &delta12 in &self.delta12 {
                                for &delta23 in &self.delta23 {
                                    for &delta13 in &self.delta13 {
                                        for &gamma in &self.gamma {
                                            out.push(SweepParams {
                                                epsilon,
                                                scale1,
                                                scale2,
                                                scale3,
                                                dphi12,
                                                delta12,
                                                delta23,
                                                delta13,
                                                gamma,
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// One sweep row: the grid point, both chirality populations, contrast,
/// the engine that ran, and the worst norm/trace drift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(flatten)]
    pub params: SweepParams,
    pub p_left: [f64; 3],
    pub p_right: [f64; 3],
    pub contrast: f64,
    pub engine: EngineKind,
    pub drift: f64,
    /// Engine failure for this grid point, if any; failed points carry
    /// NaN populations and do not abort the sweep.
    pub error: Option<String>,
}

/// Engine auto-selection per grid point: exact piecewise at resonance
/// (pure area/phase errors), RK4 when detuned, Lindblad when any
/// collapse rate is positive.
pub fn select_engine(spec: &ProtocolSpec, model: &ErrorModel) -> EngineChoice {
    if model.has_decoherence() {
        EngineChoice::Lindblad {
            channels: model.channels.clone(),
            step_divisor: DEFAULT_STEP_DIVISOR,
        }
    } else if !spec.detuning.add(&model.detuning).is_zero() {
        EngineChoice::Rk4 { step_divisor: DEFAULT_STEP_DIVISOR }
    } else {
        EngineChoice::Piecewise
    }
}

/// Run the protocol over every grid point, in grid order.
pub fn run_sweep(spec: &ProtocolSpec, points: &[SweepParams]) -> Vec<SweepRecord> {
    points
        .iter()
        .map(|params| {
            let outcome = params.to_model().and_then(|model| {
                let perturbed = apply_error(spec, &model);
                let engine = select_engine(spec, &model);
                run_discrimination(&perturbed, &engine).map(|d| (d, engine))
            });
            match outcome {
                Ok((d, engine)) => SweepRecord {
                    params: *params,
                    p_left: d.left.populations,
                    p_right: d.right.populations,
                    contrast: d.contrast,
                    engine: match engine {
                        EngineChoice::Piecewise => EngineKind::Piecewise,
                        EngineChoice::Rk4 { .. } => EngineKind::Rk4,
                        EngineChoice::Lindblad { .. } => EngineKind::Lindblad,
                        EngineChoice::Auto => d.left.engine,
                    },
                    drift: d.left.drift.max(d.right.drift),
                    error: None,
                },
                Err(err) => SweepRecord {
                    params: *params,
                    p_left: [f64::NAN; 3],
                    p_right: [f64::NAN; 3],
                    contrast: f64::NAN,
                    engine: EngineKind::Piecewise,
                    drift: f64::NAN,
                    error: Some(err.to_string()),
                },
            }
        })
        .collect()
}
