//! Time-evolution engines.
//!
//! Three engines with one oracle relationship:
//!
//! * [`evolve_piecewise`] propagates exactly through any schedule whose
//!   segments factor into a common scalar envelope times a constant
//!   matrix (true for every protocol step at resonance, and for rect
//!   pulses at any detuning). Primary engine for protocol runs.
//! * [`evolve_rk4`] is a fixed-step classical 4th-order integrator for
//!   detuned/non-commuting generators, and an independent cross-check of
//!   the exact path.
//! * [`evolve_lindblad`] integrates the master equation
//!   d rho/dt = -i[H, rho] + sum_k gamma_k (L rho L+ - {L+L, rho}/2)
//!   with collapse channels L = |target><source|.
//!
//! Renormalization is never silent: the integrators return the final
//! norm/trace drift alongside the state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_detuned, Chirality, DetuningSet, RabiSet};
use crate::pulses::{PulseSegment, Schedule, Shape};
use crate::quantum::{DensityMatrix3, HermitianOp3, Mat3, StateVec3};

/// A schedule plus detuning set and chirality, evaluable to a Hermitian
/// generator at any time inside its window.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDependentGenerator {
    schedule: Schedule,
    detuning: DetuningSet,
    chirality: Chirality,
    window: (f64, f64),
}

impl TimeDependentGenerator {
    /// Window defaults to the schedule hull (zero-length at t = 0 for an
    /// empty schedule).
    pub fn new(schedule: Schedule, detuning: DetuningSet, chirality: Chirality) -> Self {
        let window = schedule.window().unwrap_or((0.0, 0.0));
        Self { schedule, detuning, chirality, window }
    }

    /// Extend the evolution window beyond the schedule hull (free
    /// evolution outside the pulses).
    pub fn with_window(mut self, start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || end < start {
            return Err(Error::InvalidWindow(start, end));
        }
        if let Some((hull_start, hull_end)) = self.schedule.window() {
            if start > hull_start || end < hull_end {
                return Err(Error::InvalidWindow(start, end));
            }
        }
        self.window = (start, end);
        Ok(self)
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn detuning(&self) -> &DetuningSet {
        &self.detuning
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn span(&self) -> f64 {
        self.window.1 - self.window.0
    }

    /// Chirality-signed generator at time t.
    pub fn hamiltonian_at(&self, t: f64) -> HermitianOp3 {
        let rabi = self.chirality.signed(&self.schedule.rabi_at(t));
        build_detuned(&rabi, &self.detuning)
    }

    /// Signed generator for one segment at time t, ignoring all other
    /// segments. Keeps piecewise integrands single-valued at shared
    /// segment boundaries.
    fn segment_hamiltonian(&self, seg: &PulseSegment, t: f64) -> HermitianOp3 {
        let rabi = self.chirality.signed(&seg.rabi_at(t));
        build_detuned(&rabi, &self.detuning)
    }

    /// Generator in the gaps between pulses: detuning diagonal only.
    fn free_hamiltonian(&self) -> HermitianOp3 {
        build_detuned(&RabiSet::zero(), &self.detuning)
    }

    /// The evolution window cut at segment boundaries. Free pieces cover
    /// the gaps.
    fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        let (start, end) = self.window;
        let mut cursor = start;
        for (idx, seg) in self.schedule.segments().iter().enumerate() {
            if seg.t_start() > cursor {
                out.push(Piece::free(cursor, seg.t_start()));
            }
            out.push(Piece {
                start: seg.t_start(),
                end: seg.end(),
                segment: Some(idx),
            });
            cursor = seg.end();
        }
        if end > cursor {
            out.push(Piece::free(cursor, end));
        }
        out
    }

    /// Shortest pulse duration, or the window span when the schedule is
    /// empty; bounds the RK4 step.
    fn step_limit(&self) -> f64 {
        let min_seg = self
            .schedule
            .segments()
            .iter()
            .map(|s| s.duration())
            .fold(f64::INFINITY, f64::min);
        if min_seg.is_finite() { min_seg / 10.0 } else { self.span() / 10.0 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    start: f64,
    end: f64,
    /// Index into the schedule, or None for free evolution.
    segment: Option<usize>,
}

impl Piece {
    fn free(start: f64, end: f64) -> Self {
        Self { start, end, segment: None }
    }

    fn len(&self) -> f64 {
        self.end - self.start
    }
}

/// A collapse channel |target><source| with rate gamma (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseChannel {
    source: usize,
    target: usize,
    rate: f64,
}

impl CollapseChannel {
    pub fn new(source: usize, target: usize, rate: f64) -> Result<Self> {
        for level in [source, target] {
            if !(1..=3).contains(&level) {
                return Err(Error::LevelOutOfRange(level));
            }
        }
        if source == target {
            return Err(Error::SelfCollapse);
        }
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidRate(rate));
        }
        Ok(Self { source, target, rate })
    }

    /// All downhill spontaneous-emission paths of the three-level ladder
    /// (3->1, 3->2, 2->1) at a common rate.
    pub fn downhill_set(rate: f64) -> Result<Vec<Self>> {
        Ok(vec![
            Self::new(3, 1, rate)?,
            Self::new(3, 2, rate)?,
            Self::new(2, 1, rate)?,
        ])
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// L = |target><source| as a matrix.
    fn matrix(&self) -> Mat3 {
        let mut m = Mat3::zero();
        m.set(self.target - 1, self.source - 1, Complex64::ONE);
        m
    }
}

/// Exact propagation through a piecewise-factorizable schedule.
///
/// Within each segment the generator must be a common scalar envelope
/// times a constant matrix. That holds when all envelopes in the segment
/// share one shape and the detuning vanishes (the constant matrix is the
/// resonant coupling pattern), or when every envelope is rect (the full
/// generator is constant). Anything else is rejected with
/// [`Error::NonCommutingSegment`].
pub fn evolve_piecewise(gen: &TimeDependentGenerator, psi0: &StateVec3) -> Result<StateVec3> {
    let mut psi = *psi0;
    for piece in gen.pieces() {
        let u = match piece.segment {
            None => gen.free_hamiltonian().expm(piece.len()),
            Some(idx) => {
                let seg = &gen.schedule().segments()[idx];
                segment_propagator(gen, seg)?
            }
        };
        psi = u.apply(&psi);
    }
    Ok(psi)
}

fn segment_propagator(
    gen: &TimeDependentGenerator,
    seg: &PulseSegment,
) -> Result<crate::quantum::Unitary3> {
    let shapes: Vec<Shape> = seg.envelopes().map(|(_, e)| e.shape).collect();
    let all_rect = shapes.iter().all(|s| *s == Shape::Rect);
    let uniform_shape = shapes.windows(2).all(|w| w[0] == w[1]);

    if all_rect {
        // constant generator, detuning included
        let rabi = gen.chirality().signed(&seg.rabi_at(seg.t_start()));
        return Ok(build_detuned(&rabi, gen.detuning()).expm(seg.duration()));
    }
    if !gen.detuning().is_zero() || !uniform_shape {
        return Err(Error::NonCommutingSegment);
    }
    // H(t) = f(t) * M with f the shared unit profile: exp(-i M int f dt)
    let shape = shapes[0];
    let mut coeffs = RabiSet::zero();
    for (ch, env) in seg.envelopes() {
        let c = env.complex_amplitude();
        match ch {
            crate::pulses::Channel::C12 => coeffs.omega12 = c,
            crate::pulses::Channel::C23 => coeffs.omega23 = c,
            crate::pulses::Channel::C13 => coeffs.omega13 = c,
        }
    }
    let signed = gen.chirality().signed(&coeffs);
    let constant = crate::hamiltonian::build_resonant(&signed);
    Ok(constant.expm(shape.unit_area(seg.duration())))
}

/// Final norm deviation and step count of an RK4 run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Report {
    /// |norm(psi_final) - 1| before the explicit renormalization that
    /// builds the returned state.
    pub norm_drift: f64,
    pub steps: usize,
}

fn check_step(gen: &TimeDependentGenerator, step: f64) -> Result<()> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidStep(step));
    }
    let limit = gen.step_limit();
    if limit > 0.0 && step > limit {
        return Err(Error::StepTooLarge { step, limit });
    }
    Ok(())
}

/// Classical fixed-step 4th-order integration of d psi/dt = -i H(t) psi.
///
/// Steps never straddle segment boundaries: each piece is integrated
/// with n = ceil(len/step) uniform sub-steps. The returned state is
/// explicitly normalized; the report carries the pre-normalization
/// drift.
pub fn evolve_rk4(
    gen: &TimeDependentGenerator,
    psi0: &StateVec3,
    step: f64,
) -> Result<(StateVec3, Rk4Report)> {
    check_step(gen, step)?;
    let mut y = psi0.amplitudes();
    let mut steps = 0usize;
    for piece in gen.pieces() {
        if piece.len() <= 0.0 {
            continue;
        }
        let h_of = |t: f64| -> Mat3 {
            match piece.segment {
                None => *gen.free_hamiltonian().matrix(),
                Some(idx) => *gen
                    .segment_hamiltonian(&gen.schedule().segments()[idx], t)
                    .matrix(),
            }
        };
        let n = (piece.len() / step).ceil().max(1.0) as usize;
        let h = piece.len() / n as f64;
        for k in 0..n {
            let t = piece.start + k as f64 * h;
            y = rk4_step_vec(&h_of, t, h, &y);
            steps += 1;
        }
    }
    let norm = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let report = Rk4Report { norm_drift: (norm - 1.0).abs(), steps };
    Ok((StateVec3::normalize(y)?, report))
}

fn rhs_vec(h: &Mat3, y: &[Complex64; 3]) -> [Complex64; 3] {
    let hy = h.mul_vec(y);
    [-Complex64::I * hy[0], -Complex64::I * hy[1], -Complex64::I * hy[2]]
}

fn rk4_step_vec(
    h_of: &impl Fn(f64) -> Mat3,
    t: f64,
    h: f64,
    y: &[Complex64; 3],
) -> [Complex64; 3] {
    let axpy = |y: &[Complex64; 3], a: f64, k: &[Complex64; 3]| {
        [y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]]
    };
    let h0 = h_of(t);
    let h_mid = h_of(t + 0.5 * h);
    let h1 = h_of(t + h);
    let k1 = rhs_vec(&h0, y);
    let k2 = rhs_vec(&h_mid, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs_vec(&h_mid, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs_vec(&h1, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Final trace deviation and step count of a Lindblad run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladReport {
    /// |trace(rho_final) - 1|.
    pub trace_drift: f64,
    pub steps: usize,
}

/// Fixed-step 4th-order integration of the Lindblad master equation.
pub fn evolve_lindblad(
    gen: &TimeDependentGenerator,
    channels: &[CollapseChannel],
    rho0: &DensityMatrix3,
    step: f64,
) -> Result<(DensityMatrix3, LindbladReport)> {
    check_step(gen, step)?;
    let dissipators: Vec<(f64, Mat3, Mat3)> = channels
        .iter()
        .filter(|ch| ch.rate > 0.0)
        .map(|ch| {
            let l = ch.matrix();
            let ldl = l.adjoint().mul(&l);
            (ch.rate, l, ldl)
        })
        .collect();

    let rhs = |h: &Mat3, rho: &Mat3| -> Mat3 {
        let comm = h.mul(rho).sub(&rho.mul(h)).scale(-Complex64::I);
        let mut out = comm;
        for (rate, l, ldl) in &dissipators {
            let jump = l.mul(rho).mul(&l.adjoint());
            let anti = ldl.mul(rho).add(&rho.mul(ldl));
            out = out.add(
                &jump
                    .sub(&anti.scale(Complex64::new(0.5, 0.0)))
                    .scale(Complex64::new(*rate, 0.0)),
            );
        }
        out
    };

    let mut rho = *rho0.matrix();
    let mut steps = 0usize;
    for piece in gen.pieces() {
        if piece.len() <= 0.0 {
            continue;
        }
        let h_of = |t: f64| -> Mat3 {
            match piece.segment {
                None => *gen.free_hamiltonian().matrix(),
                Some(idx) => *gen
                    .segment_hamiltonian(&gen.schedule().segments()[idx], t)
                    .matrix(),
            }
        };
        let n = (piece.len() / step).ceil().max(1.0) as usize;
        let h = piece.len() / n as f64;
        for k in 0..n {
            let t = piece.start + k as f64 * h;
            let h0 = h_of(t);
            let h_mid = h_of(t + 0.5 * h);
            let h1 = h_of(t + h);
            let scale = |m: &Mat3, a: f64| m.scale(Complex64::new(a, 0.0));
            let k1 = rhs(&h0, &rho);
            let k2 = rhs(&h_mid, &rho.add(&scale(&k1, 0.5 * h)));
            let k3 = rhs(&h_mid, &rho.add(&scale(&k2, 0.5 * h)));
            let k4 = rhs(&h1, &rho.add(&scale(&k3, h)));
            rho = rho
                .add(&scale(&k1, h / 6.0))
                .add(&scale(&k2, h / 3.0))
                .add(&scale(&k3, h / 3.0))
                .add(&scale(&k4, h / 6.0));
            steps += 1;
        }
    }
    let trace_drift = (rho.trace() - Complex64::ONE).norm();
    let report = LindbladReport { trace_drift, steps };
    Ok((DensityMatrix3::from_evolution(rho)?, report))
}
