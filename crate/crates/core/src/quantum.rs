//! Complex 3-dimensional state and operator arithmetic.
//!
//! States live in the basis (|1>, |2>, |3>). Operators are dense 3x3
//! complex matrices; the matrix exponential of a Hermitian generator is
//! computed by spectral decomposition, which is exact to rounding at
//! this dimension.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense 3x3 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    e: [[Complex64; 3]; 3],
}

impl Mat3 {
    pub fn new(e: [[Complex64; 3]; 3]) -> Self {
        Self { e }
    }

    pub fn zero() -> Self {
        Self { e: [[ZERO; 3]; 3] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.e[i][i] = ONE;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.e[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.e[i][j] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[j][i].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for k in 0..3 {
                    acc += self.e[i][k] * other.e[k][j];
                }
                m.e[i][j] = acc;
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] += other.e[i][j];
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] -= other.e[i][j];
            }
        }
        m
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut m = *self;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] *= factor;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        let mut out = [ZERO; 3];
        for i in 0..3 {
            for k in 0..3 {
                out[i] += self.e[i][k] * v[k];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1] + self.e[2][2]
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for row in &self.e {
            for v in row {
                acc += v.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Frobenius norm of the difference.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }

    /// Sum of |e_ij|^2 over off-diagonal entries.
    fn off_diagonal_sqr(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    acc += self.e[i][j].norm_sqr();
                }
            }
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Eigendecomposition of a Hermitian 3x3 matrix by cyclic Jacobi with
/// complex 2x2 rotations. Returns eigenvalues in ascending order and
/// the matching orthonormal eigenvector columns.
pub(crate) fn eigh(h: &Mat3) -> ([f64; 3], Mat3) {
    let mut a = *h;
    let mut v = Mat3::identity();
    let scale = a.frobenius_norm().max(1.0);
    for _ in 0..50 {
        if a.off_diagonal_sqr().sqrt() <= tolerances::JACOBI_OFF * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a.get(p, q);
            let mag = apq.norm();
            if mag <= tolerances::JACOBI_OFF * scale / 10.0 {
                continue;
            }
            let phase = apq / mag;
            let app = a.get(p, p).re;
            let aqq = a.get(q, q).re;
            let tau = (aqq - app) / (2.0 * mag);
            // smaller-magnitude root of t^2 - 2*tau*t - 1 = 0
            let t = if tau >= 0.0 {
                -1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            let mut rot = Mat3::identity();
            rot.set(p, p, Complex64::new(c, 0.0));
            rot.set(p, q, -phase * s);
            rot.set(q, p, phase.conj() * s);
            rot.set(q, q, Complex64::new(c, 0.0));
            a = rot.adjoint().mul(&a).mul(&rot);
            v = v.mul(&rot);
        }
    }
    let mut pairs = [(a.get(0, 0).re, 0usize), (a.get(1, 1).re, 1), (a.get(2, 2).re, 2)];
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut vecs = Mat3::zero();
    let mut vals = [0.0; 3];
    for (dst, (val, src)) in pairs.iter().enumerate() {
        vals[dst] = *val;
        for i in 0..3 {
            vecs.set(i, dst, v.get(i, *src));
        }
    }
    (vals, vecs)
}

/// Pure quantum state: three complex amplitudes with unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVec3 {
    amps: [Complex64; 3],
}

impl StateVec3 {
    /// Normalize a raw amplitude triple into a state.
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64) -> Result<Self> {
        Self::normalize([c1, c2, c3])
    }

    /// Normalize a raw 3-vector; the direction is preserved. Idempotent
    /// at the bit level for vectors that are already unit norm.
    pub fn normalize(raw: [Complex64; 3]) -> Result<Self> {
        if raw.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm_sqr: f64 = raw.iter().map(|v| v.norm_sqr()).sum();
        if norm_sqr.is_finite() && norm_sqr >= f64::MIN_POSITIVE {
            let norm = norm_sqr.sqrt();
            return Ok(Self { amps: [raw[0] / norm, raw[1] / norm, raw[2] / norm] });
        }
        // |v|^2 overflowed or underflowed: pre-scale by the largest
        // component, which keeps every square representable
        let max_mag = raw
            .iter()
            .flat_map(|v| [v.re.abs(), v.im.abs()])
            .fold(0.0f64, f64::max);
        if max_mag == 0.0 {
            return Err(Error::DegenerateState);
        }
        let scaled = [raw[0] / max_mag, raw[1] / max_mag, raw[2] / max_mag];
        let norm = scaled.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let amps = [scaled[0] / norm, scaled[1] / norm, scaled[2] / norm];
        Ok(Self { amps })
    }

    /// Basis state |level> for level in 1..=3.
    pub fn basis(level: usize) -> Result<Self> {
        if !(1..=3).contains(&level) {
            return Err(Error::LevelOutOfRange(level));
        }
        let mut amps = [ZERO; 3];
        amps[level - 1] = ONE;
        Ok(Self { amps })
    }

    /// Ground state |1>.
    pub fn ground() -> Self {
        Self { amps: [ONE, ZERO, ZERO] }
    }

    pub fn amplitudes(&self) -> [Complex64; 3] {
        self.amps
    }

    pub fn amplitude(&self, level: usize) -> Result<Complex64> {
        if !(1..=3).contains(&level) {
            return Err(Error::LevelOutOfRange(level));
        }
        Ok(self.amps[level - 1])
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Global-phase-insensitive overlap |<self|other>|^2, clamped to [0, 1].
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr().clamp(0.0, 1.0)
    }

    /// Population of one level (1..=3).
    pub fn population(&self, level: usize) -> Result<f64> {
        if !(1..=3).contains(&level) {
            return Err(Error::LevelOutOfRange(level));
        }
        Ok(self.amps[level - 1].norm_sqr())
    }

    /// All three level populations.
    pub fn populations(&self) -> [f64; 3] {
        [
            self.amps[0].norm_sqr(),
            self.amps[1].norm_sqr(),
            self.amps[2].norm_sqr(),
        ]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Hermitian 3x3 generator, units rad/s (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOp3 {
    m: Mat3,
}

impl HermitianOp3 {
    /// Validate hermiticity entrywise within [`tolerances::HERMITICITY`].
    pub fn new(m: Mat3) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("Hermitian operator entries"));
        }
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dev = (m.get(i, j) - m.get(j, i).conj()).norm();
                worst = worst.max(dev);
            }
        }
        if worst > tolerances::HERMITICITY {
            return Err(Error::NotHermitian(worst));
        }
        Ok(Self { m })
    }

    /// Build from real diagonal and upper-triangle entries; Hermitian by
    /// construction.
    pub fn from_parts(diag: [f64; 3], h12: Complex64, h13: Complex64, h23: Complex64) -> Self {
        let mut m = Mat3::zero();
        for i in 0..3 {
            m.set(i, i, Complex64::new(diag[i], 0.0));
        }
        m.set(0, 1, h12);
        m.set(1, 0, h12.conj());
        m.set(0, 2, h13);
        m.set(2, 0, h13.conj());
        m.set(1, 2, h23);
        m.set(2, 1, h23.conj());
        Self { m }
    }

    pub fn zero() -> Self {
        Self { m: Mat3::zero() }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    /// H |psi> as a raw (unnormalized) amplitude triple.
    pub fn apply_raw(&self, psi: &StateVec3) -> [Complex64; 3] {
        self.m.mul_vec(&psi.amplitudes())
    }

    /// Eigenvalues (ascending) and orthonormal eigenstates.
    pub fn eigensystem(&self) -> ([f64; 3], [StateVec3; 3]) {
        let (vals, vecs) = eigh(&self.m);
        let state = |j: usize| StateVec3 {
            amps: [vecs.get(0, j), vecs.get(1, j), vecs.get(2, j)],
        };
        (vals, [state(0), state(1), state(2)])
    }

    /// exp(-i H duration) via spectral decomposition.
    pub fn expm(&self, duration: f64) -> Unitary3 {
        let (vals, vecs) = eigh(&self.m);
        let mut phases = Mat3::zero();
        for (k, lambda) in vals.iter().enumerate() {
            phases.set(k, k, (-Complex64::i() * (lambda * duration)).exp());
        }
        Unitary3 {
            m: vecs.mul(&phases).mul(&vecs.adjoint()),
        }
    }
}

/// exp(-i H duration) of a Hermitian generator.
pub fn expm_hermitian(h: &HermitianOp3, duration: f64) -> Unitary3 {
    h.expm(duration)
}

/// Unitary 3x3 propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary3 {
    m: Mat3,
}

impl Unitary3 {
    /// Validate unitarity within [`tolerances::UNITARITY`] (Frobenius).
    pub fn new(m: Mat3) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("unitary entries"));
        }
        let defect = m.adjoint().mul(&m).distance(&Mat3::identity());
        if defect > tolerances::UNITARITY {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Mat3::identity() }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    /// Composition: self applied after `first`.
    pub fn compose(&self, first: &Self) -> Self {
        Self { m: self.m.mul(&first.m) }
    }

    /// Frobenius norm of U-dagger U - I.
    pub fn unitarity_defect(&self) -> f64 {
        self.m.adjoint().mul(&self.m).distance(&Mat3::identity())
    }

    /// U |psi>. The raw result keeps unit norm to rounding; the residual
    /// is folded out by the state constructor rather than hidden.
    pub fn apply(&self, psi: &StateVec3) -> StateVec3 {
        let raw = self.m.mul_vec(&psi.amplitudes());
        StateVec3::normalize(raw).expect("unitary image of a unit vector cannot vanish")
    }

    /// Norm of U|psi> before renormalization; deviation from 1 measures
    /// rounding in the propagator product.
    pub fn apply_norm(&self, psi: &StateVec3) -> f64 {
        self.m
            .mul_vec(&psi.amplitudes())
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// 3x3 density matrix, dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix3 {
    m: Mat3,
}

impl DensityMatrix3 {
    /// Validate hermiticity, unit trace, and positivity within
    /// [`tolerances::DENSITY`].
    pub fn new(m: Mat3) -> Result<Self> {
        Self::validated(m, tolerances::DENSITY)
    }

    /// Validation with the looser integrator-output tolerance.
    pub fn from_evolution(m: Mat3) -> Result<Self> {
        Self::validated(m, tolerances::DENSITY_EVOLVED)
    }

    fn validated(m: Mat3, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidDensity("non-finite entries".into()));
        }
        let herm_dev = m.distance(&m.adjoint());
        if herm_dev > tol {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let trace_dev = (m.trace() - ONE).norm();
        if trace_dev > tol {
            return Err(Error::InvalidDensity(format!(
                "trace deviates from 1 by {trace_dev:.3e}"
            )));
        }
        let sym = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
        let (vals, _) = eigh(&sym);
        if vals[0] < -tol {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {:.3e}",
                vals[0]
            )));
        }
        Ok(Self { m })
    }

    /// |psi><psi|.
    pub fn pure(psi: &StateVec3) -> Self {
        let a = psi.amplitudes();
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.set(i, j, a[i] * a[j].conj());
            }
        }
        Self { m }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Population of one level (1..=3), the real diagonal entry.
    pub fn population(&self, level: usize) -> Result<f64> {
        if !(1..=3).contains(&level) {
            return Err(Error::LevelOutOfRange(level));
        }
        Ok(self.m.get(level - 1, level - 1).re)
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.m.get(0, 0).re, self.m.get(1, 1).re, self.m.get(2, 2).re]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = self.m.add(&self.m.adjoint()).scale(Complex64::new(0.5, 0.0));
        eigh(&sym).0[0]
    }

    /// Frobenius distance to another density matrix.
    pub fn distance(&self, other: &Self) -> f64 {
        self.m.distance(&other.m)
    }
}
