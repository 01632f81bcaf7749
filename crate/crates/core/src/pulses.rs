//! Pulse envelopes, areas, and amplitude calibration.
//!
//! A rotation by theta on a driven transition corresponds to a pulse
//! area of theta/2: the pulse that takes |1> to (|1> - i|3>)/sqrt(2)
//! (a "pi/2 rotation") has area pi/4. This factor of two is easy to
//! trip over; [`rotation_angle`] pins the convention in one place.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::RabiSet;
use num_complex::Complex64;

/// Unit-amplitude area of the truncated gaussian per unit duration:
/// integral of exp(-(t-T/2)^2 / (2 sigma^2)) over [0, T] with
/// sigma = T/6, i.e. (sqrt(2 pi)/6) * erf(3/sqrt(2)).
const GAUSSIAN_UNIT_AREA: f64 = 0.416_643_481_580_515_8;

/// Envelope shapes. The gaussian is truncated at +-3 sigma with
/// sigma = duration/6, so every shape is strictly time-windowed; the
/// ~0.27% area shortfall is absorbed by calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Rect,
    Sin2,
    Gaussian,
}

impl Shape {
    /// Dimensionless profile at fractional position tau in [0, 1].
    fn profile(&self, tau: f64) -> f64 {
        match self {
            Shape::Rect => 1.0,
            Shape::Sin2 => {
                let s = (std::f64::consts::PI * tau).sin();
                s * s
            }
            Shape::Gaussian => {
                let x = 6.0 * (tau - 0.5);
                (-0.5 * x * x).exp()
            }
        }
    }

    /// Integral of the unit-amplitude profile over a pulse of the given
    /// duration (closed form per shape).
    pub fn unit_area(&self, duration: f64) -> f64 {
        match self {
            Shape::Rect => duration,
            Shape::Sin2 => 0.5 * duration,
            Shape::Gaussian => GAUSSIAN_UNIT_AREA * duration,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Rect => "rect",
            Shape::Sin2 => "sin2",
            Shape::Gaussian => "gaussian",
        }
    }
}

/// One time-windowed drive envelope with a constant carrier phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub shape: Shape,
    /// Peak Rabi amplitude, rad/s; non-negative.
    pub amplitude: f64,
    pub t_start: f64,
    pub duration: f64,
    /// Carrier phase, rad, constant over the pulse.
    pub phase: f64,
}

impl Envelope {
    pub fn new(shape: Shape, amplitude: f64, t_start: f64, duration: f64, phase: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::NonPositiveDuration(duration));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::NegativeAmplitude(amplitude));
        }
        if !t_start.is_finite() || !phase.is_finite() {
            return Err(Error::NonFinite("envelope timing or phase"));
        }
        Ok(Self { shape, amplitude, t_start, duration, phase })
    }

    pub fn end(&self) -> f64 {
        self.t_start + self.duration
    }

    /// Real envelope magnitude at time t; zero outside the window.
    pub fn value(&self, t: f64) -> f64 {
        if t < self.t_start || t > self.end() {
            return 0.0;
        }
        self.amplitude * self.shape.profile((t - self.t_start) / self.duration)
    }

    /// Complex Rabi amplitude at time t: value * exp(i phase).
    pub fn complex_value(&self, t: f64) -> Complex64 {
        Complex64::from_polar(self.value(t), self.phase)
    }

    /// Constant complex coefficient amplitude * exp(i phase), with the
    /// time dependence factored out.
    pub fn complex_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }

    /// Pulse area: integral of |Omega(t)| over the window, by the
    /// closed-form shape integral.
    pub fn area(&self) -> f64 {
        self.amplitude * self.shape.unit_area(self.duration)
    }
}

/// Rotation angle produced by a pulse of the given area: theta = 2*area.
pub fn rotation_angle(area: f64) -> f64 {
    2.0 * area
}

/// Peak amplitude that makes a pulse of the given shape and duration hit
/// the target area. Closed form for rect/sin2; bisection for gaussian.
pub fn calibrate_amplitude(shape: Shape, duration: f64, target_area: f64) -> Result<f64> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::NonPositiveDuration(duration));
    }
    if !(target_area.is_finite() && target_area >= 0.0) {
        return Err(Error::NegativeArea(target_area));
    }
    match shape {
        Shape::Rect => Ok(target_area / duration),
        Shape::Sin2 => Ok(2.0 * target_area / duration),
        Shape::Gaussian => {
            if target_area == 0.0 {
                return Ok(0.0);
            }
            let unit = shape.unit_area(duration);
            let mut lo = 0.0f64;
            let mut hi = target_area / unit;
            // area is linear in amplitude; grow until the bracket holds
            while hi * unit < target_area {
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid * unit < target_area {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo) <= f64::EPSILON * hi {
                    break;
                }
            }
            Ok(0.5 * (lo + hi))
        }
    }
}

/// Drive channel labels for the three transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    C12,
    C23,
    C13,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::C12, Channel::C23, Channel::C13];

    pub fn name(&self) -> &'static str {
        match self {
            Channel::C12 => "12",
            Channel::C23 => "23",
            Channel::C13 => "13",
        }
    }
}

/// One protocol step: simultaneous envelopes on a subset of the three
/// transition channels. Absent channels are identically zero. All
/// present envelopes share t_start and duration (simultaneous switching).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    env12: Option<Envelope>,
    env23: Option<Envelope>,
    env13: Option<Envelope>,
    t_start: f64,
    duration: f64,
}

impl PulseSegment {
    pub fn new(env12: Option<Envelope>, env23: Option<Envelope>, env13: Option<Envelope>) -> Result<Self> {
        let envs: Vec<&Envelope> = [&env12, &env23, &env13].into_iter().flatten().collect();
        let first = envs.first().ok_or(Error::EmptySegment)?;
        let (t_start, duration) = (first.t_start, first.duration);
        if envs.iter().any(|e| e.t_start != t_start || e.duration != duration) {
            return Err(Error::MisalignedEnvelopes);
        }
        Ok(Self { env12, env23, env13, t_start, duration })
    }

    /// Segment driving a single channel.
    pub fn single(channel: Channel, env: Envelope) -> Self {
        let mut seg = Self {
            env12: None,
            env23: None,
            env13: None,
            t_start: env.t_start,
            duration: env.duration,
        };
        match channel {
            Channel::C12 => seg.env12 = Some(env),
            Channel::C23 => seg.env23 = Some(env),
            Channel::C13 => seg.env13 = Some(env),
        }
        seg
    }

    pub fn envelope(&self, channel: Channel) -> Option<&Envelope> {
        match channel {
            Channel::C12 => self.env12.as_ref(),
            Channel::C23 => self.env23.as_ref(),
            Channel::C13 => self.env13.as_ref(),
        }
    }

    pub fn envelopes(&self) -> impl Iterator<Item = (Channel, &Envelope)> {
        Channel::ALL
            .into_iter()
            .filter_map(|ch| self.envelope(ch).map(|e| (ch, e)))
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn end(&self) -> f64 {
        self.t_start + self.duration
    }

    /// Rabi triple at time t (unsigned; chirality is applied by the
    /// evolution layer).
    pub fn rabi_at(&self, t: f64) -> RabiSet {
        let get = |e: &Option<Envelope>| e.map_or(Complex64::ZERO, |env| env.complex_value(t));
        RabiSet {
            omega12: get(&self.env12),
            omega23: get(&self.env23),
            omega13: get(&self.env13),
        }
    }
}

/// Ordered, non-overlapping pulse segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    segments: Vec<PulseSegment>,
}

impl Schedule {
    pub fn new(segments: Vec<PulseSegment>) -> Result<Self> {
        for k in 1..segments.len() {
            if segments[k].t_start() < segments[k - 1].end() {
                return Err(Error::OverlappingSegments(k, k - 1));
            }
        }
        Ok(Self { segments })
    }

    pub fn empty() -> Self {
        Self { segments: Vec::new() }
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Time hull of the segments, if any.
    pub fn window(&self) -> Option<(f64, f64)> {
        let first = self.segments.first()?;
        let last = self.segments.last()?;
        Some((first.t_start(), last.end()))
    }

    /// Rabi triple at time t. Segments do not overlap; where two share a
    /// boundary instant, the earlier one wins.
    pub fn rabi_at(&self, t: f64) -> RabiSet {
        self.segments
            .iter()
            .find(|seg| t >= seg.t_start() && t <= seg.end())
            .map_or_else(RabiSet::zero, |seg| seg.rabi_at(t))
    }
}
