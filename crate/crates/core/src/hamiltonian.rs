//! Interaction-picture Hamiltonians of the cyclic three-level system.
//!
//! The resonant generator is
//!
//! ```text
//! H = Omega12 |1><2| + Omega23 |2><3| + Omega13 |1><3| + h.c.
//! ```
//!
//! and the handedness of a molecule enters only through the sign of
//! Omega13. With the direct coupling off, the two remaining drives single
//! out a bright superposition of |1> and |3> that couples to |2> with
//! strength sqrt(|Omega12|^2 + |Omega23|^2), while the orthogonal dark
//! superposition decouples entirely.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{HermitianOp3, StateVec3};

/// The three complex Rabi amplitudes, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiSet {
    pub omega12: Complex64,
    pub omega23: Complex64,
    pub omega13: Complex64,
}

impl RabiSet {
    pub fn new(omega12: Complex64, omega23: Complex64, omega13: Complex64) -> Result<Self> {
        let set = Self { omega12, omega23, omega13 };
        if !set.is_finite() {
            return Err(Error::NonFinite("Rabi amplitudes"));
        }
        Ok(set)
    }

    pub fn zero() -> Self {
        Self {
            omega12: Complex64::ZERO,
            omega23: Complex64::ZERO,
            omega13: Complex64::ZERO,
        }
    }

    /// The step-II drive pair: Omega12 = i*Omega0, Omega23 = Omega0,
    /// direct coupling off.
    pub fn step_two_pair(omega0: f64) -> Self {
        Self {
            omega12: Complex64::new(0.0, omega0),
            omega23: Complex64::new(omega0, 0.0),
            omega13: Complex64::ZERO,
        }
    }

    fn is_finite(&self) -> bool {
        [self.omega12, self.omega23, self.omega13]
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Molecular handedness. Right-handed molecules see the direct 1-3
/// coupling with a flipped sign; the other two couplings are shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    /// Apply the handedness sign rule to a Rabi triple.
    pub fn signed(&self, rabi: &RabiSet) -> RabiSet {
        match self {
            Chirality::Left => *rabi,
            Chirality::Right => RabiSet {
                omega12: rabi.omega12,
                omega23: rabi.omega23,
                omega13: -rabi.omega13,
            },
        }
    }
}

/// Field detunings Delta_ij = omega_ij - (omega_i - omega_j), rad/s.
/// All zeros is the resonant case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetuningSet {
    pub delta12: f64,
    pub delta23: f64,
    pub delta13: f64,
}

impl Default for DetuningSet {
    fn default() -> Self {
        Self::zero()
    }
}

impl DetuningSet {
    pub fn new(delta12: f64, delta23: f64, delta13: f64) -> Result<Self> {
        let set = Self { delta12, delta23, delta13 };
        if ![delta12, delta23, delta13].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("detunings"));
        }
        Ok(set)
    }

    pub fn zero() -> Self {
        Self { delta12: 0.0, delta23: 0.0, delta13: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.delta12 == 0.0 && self.delta23 == 0.0 && self.delta13 == 0.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            delta12: self.delta12 + other.delta12,
            delta23: self.delta23 + other.delta23,
            delta13: self.delta13 + other.delta13,
        }
    }
}

/// Resonant interaction-picture Hamiltonian for a Rabi triple.
pub fn build_resonant(rabi: &RabiSet) -> HermitianOp3 {
    HermitianOp3::from_parts([0.0; 3], rabi.omega12, rabi.omega13, rabi.omega23)
}

/// Detuned generator in the frame co-rotating with the three fields:
/// the resonant matrix plus diag(0, -delta12, -delta13). Reduces to
/// [`build_resonant`] when all detunings vanish.
pub fn build_detuned(rabi: &RabiSet, det: &DetuningSet) -> HermitianOp3 {
    HermitianOp3::from_parts(
        [0.0, -det.delta12, -det.delta13],
        rabi.omega12,
        rabi.omega13,
        rabi.omega23,
    )
}

fn two_coupling_strength(rabi: &RabiSet) -> Result<f64> {
    let direct = rabi.omega13.norm();
    if direct > 0.0 {
        return Err(Error::DirectCouplingPresent(direct));
    }
    Ok((rabi.omega12.norm_sqr() + rabi.omega23.norm_sqr()).sqrt())
}

/// Bright superposition of |1> and |3> that carries all the coupling to
/// |2> under a two-drive Hamiltonian:
/// (Omega12 |1> + Omega23* |3>) / sqrt(|Omega12|^2 + |Omega23|^2).
pub fn bright_state(rabi: &RabiSet) -> Result<StateVec3> {
    let strength = two_coupling_strength(rabi)?;
    if strength == 0.0 {
        return Err(Error::BrightStateUndefined);
    }
    StateVec3::new(
        rabi.omega12 / strength,
        Complex64::ZERO,
        rabi.omega23.conj() / strength,
    )
}

/// Dark superposition orthogonal to the bright state; annihilated by the
/// two-drive Hamiltonian.
pub fn dark_state(rabi: &RabiSet) -> Result<StateVec3> {
    let strength = two_coupling_strength(rabi)?;
    if strength == 0.0 {
        return Err(Error::BrightStateUndefined);
    }
    StateVec3::new(
        rabi.omega23 / strength,
        Complex64::ZERO,
        -rabi.omega12.conj() / strength,
    )
}

/// Instantaneous eigensystem of the two-drive (dressed) Hamiltonian:
/// the dark state at eigenvalue 0 and (|2> +- |B>)/sqrt(2) at
/// +-sqrt(|Omega12|^2 + |Omega23|^2).
///
/// Both couplings zero is fully degenerate; the canonical basis is
/// returned with eigenvalues (0, 0, 0), ties broken by basis order.
pub fn dressed_eigensystem(rabi: &RabiSet) -> Result<[(f64, StateVec3); 3]> {
    let strength = two_coupling_strength(rabi)?;
    if strength == 0.0 {
        return Ok([
            (0.0, StateVec3::basis(1)?),
            (0.0, StateVec3::basis(2)?),
            (0.0, StateVec3::basis(3)?),
        ]);
    }
    let dark = dark_state(rabi)?;
    let bright = bright_state(rabi)?;
    let b = bright.amplitudes();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVec3::new(
        b[0] * inv_sqrt2,
        Complex64::new(inv_sqrt2, 0.0),
        b[2] * inv_sqrt2,
    )?;
    let minus = StateVec3::new(
        -b[0] * inv_sqrt2,
        Complex64::new(inv_sqrt2, 0.0),
        -b[2] * inv_sqrt2,
    )?;
    Ok([(0.0, dark), (strength, plus), (-strength, minus)])
}
