//! Independent numerical oracles for the integration tests.
//!
//! Everything here works on raw `[[Complex64; 3]; 3]` arrays and stays
//! deliberately separate from the library's matrix/eigen code paths, so
//! the two sides of every comparison are computed by different routes.

#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments)]

use num_complex::Complex64;

pub type CMat = [[Complex64; 3]; 3];

pub const Z: Complex64 = Complex64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity() -> CMat {
    let mut m = [[Z; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn mul(a: &CMat, b: &CMat) -> CMat {
    let mut out = [[Z; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &CMat, b: &CMat) -> CMat {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn scale(a: &CMat, factor: Complex64) -> CMat {
    let mut out = *a;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= factor;
        }
    }
    out
}

pub fn frob(a: &CMat) -> f64 {
    a.iter()
        .flatten()
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn mat_vec(a: &CMat, v: &[Complex64; 3]) -> [Complex64; 3] {
    let mut out = [Z; 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i] += a[i][k] * v[k];
        }
    }
    out
}

pub fn det(m: &CMat) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// exp(-i H t) by scaling-and-squaring of the plain Taylor series.
pub fn taylor_expm(h: &CMat, duration: f64) -> CMat {
    let a = scale(h, Complex64::new(0.0, -duration));
    let norm = frob(&a);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let a_small = scale(&a, Complex64::new(2f64.powi(-squarings), 0.0));

    let mut term = identity();
    let mut sum = identity();
    for n in 1..200 {
        term = scale(&mul(&term, &a_small), Complex64::new(1.0 / n as f64, 0.0));
        sum = add(&sum, &term);
        if frob(&term) < 1e-20 {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = mul(&out, &out);
    }
    out
}

/// Eigenvalues of a Hermitian 3x3 matrix by the trigonometric solution
/// of the characteristic cubic, ascending.
pub fn cardano_eigenvalues(m: &CMat) -> [f64; 3] {
    let q = (m[0][0].re + m[1][1].re + m[2][2].re) / 3.0;
    let p1 = m[0][1].norm_sqr() + m[0][2].norm_sqr() + m[1][2].norm_sqr();
    let p2 = (m[0][0].re - q).powi(2)
        + (m[1][1].re - q).powi(2)
        + (m[2][2].re - q).powi(2)
        + 2.0 * p1;
    if p2 <= f64::EPSILON * f64::EPSILON {
        return [q, q, q];
    }
    let p = (p2 / 6.0).sqrt();
    let mut shifted = *m;
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= Complex64::new(q, 0.0);
    }
    let b = scale(&shifted, Complex64::new(1.0 / p, 0.0));
    let r = (det(&b).re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e_hi = q + 2.0 * p * phi.cos();
    let e_lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e_mid = 3.0 * q - e_hi - e_lo;
    let mut vals = [e_lo, e_mid, e_hi];
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Recursive adaptive Simpson quadrature.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Deterministic pseudo-random stream for test matrices.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    /// Uniform in [-1, 1).
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    pub fn next_complex(&mut self) -> Complex64 {
        let re = self.next_f64();
        let im = self.next_f64();
        c(re, im)
    }

    /// Random Hermitian matrix with entries of order `magnitude`.
    pub fn hermitian(&mut self, magnitude: f64) -> CMat {
        let mut m = [[Z; 3]; 3];
        for i in 0..3 {
            m[i][i] = c(self.next_f64() * magnitude, 0.0);
            for j in (i + 1)..3 {
                let v = self.next_complex() * magnitude;
                m[i][j] = v;
                m[j][i] = v.conj();
            }
        }
        m
    }
}

// ---------------------------------------------------------------------
// Closed-form propagators of the three-step sequence (resonant case).
// These are hand-expanded rotation formulas, not matrix exponentials.
// ---------------------------------------------------------------------

/// Propagator of a 1-3 pulse: generator sign*(e^{i phase}|1><3| + h.c.),
/// pulse area `area`.
pub fn u13(area: f64, phase: f64, sign: f64) -> CMat {
    let (s, co) = (area.sin(), area.cos());
    let mut u = identity();
    u[0][0] = c(co, 0.0);
    u[2][2] = c(co, 0.0);
    let off = c(0.0, -s * sign);
    u[0][2] = off * Complex64::from_polar(1.0, phase);
    u[2][0] = off * Complex64::from_polar(1.0, -phase);
    u
}

/// Propagator of the two-drive step: equal envelope magnitudes on 1-2
/// and 2-3 with carrier phases phi12/phi23, accumulated effective
/// (bright-state) area eta. The bright state is
/// (e^{i phi12}|1> + e^{-i phi23}|3>)/sqrt(2).
pub fn u_two_drive(eta: f64, phi12: f64, phi23: f64) -> CMat {
    let b = [
        Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phi12),
        Z,
        Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -phi23),
    ];
    let (s, co) = (eta.sin(), eta.cos());
    let mut u = identity();
    for i in 0..3 {
        for j in 0..3 {
            let bb = b[i] * b[j].conj();
            let p2 = if i == 1 && j == 1 { 1.0 } else { 0.0 };
            u[i][j] += (co - 1.0) * (bb + c(p2, 0.0));
            let e2_j = if j == 1 { 1.0 } else { 0.0 };
            let e2_i = if i == 1 { 1.0 } else { 0.0 };
            u[i][j] += c(0.0, -s) * (b[i] * e2_j + e2_i * b[j].conj());
        }
    }
    u
}

/// Populations after the full three-step sequence from |1>, by the
/// closed-form propagator product. `scales` multiply the three ideal
/// step areas (pi/4, effective pi/2, 3pi/4); `dphi12` offsets the
/// channel-12 phase from its ideal pi/2.
pub fn protocol_oracle_populations(scales: [f64; 3], dphi12: f64, sign13: f64) -> [f64; 3] {
    let a1 = std::f64::consts::FRAC_PI_4 * scales[0];
    let eta = std::f64::consts::FRAC_PI_2 * scales[1];
    let a3 = 3.0 * std::f64::consts::FRAC_PI_4 * scales[2];
    let u = mul(
        &u13(a3, 0.0, sign13),
        &mul(
            &u_two_drive(eta, std::f64::consts::FRAC_PI_2 + dphi12, 0.0),
            &u13(a1, 0.0, sign13),
        ),
    );
    let psi = mat_vec(&u, &[Complex64::new(1.0, 0.0), Z, Z]);
    [psi[0].norm_sqr(), psi[1].norm_sqr(), psi[2].norm_sqr()]
}

/// Contrast P_left(2) + P_right(1) - 1 from the closed-form product.
pub fn protocol_oracle_contrast(scales: [f64; 3], dphi12: f64) -> f64 {
    let left = protocol_oracle_populations(scales, dphi12, 1.0);
    let right = protocol_oracle_populations(scales, dphi12, -1.0);
    left[1] + right[0] - 1.0
}
