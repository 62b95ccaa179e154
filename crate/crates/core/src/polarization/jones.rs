//! Jones vectors and ideal linear retarders.
//!
//! Conventions used everywhere in the crate:
//!
//! * `|H⟩ = (1, 0)`, `|V⟩ = (0, 1)`, `|D⟩ = (1, 1)/√2`, `|A⟩ = (1, −1)/√2`,
//!   `|R⟩ = (1, −i)/√2`, `|L⟩ = (1, i)/√2`.
//! * A retarder of retardance `δ` with optic axis at angle `φ` is the
//!   symmetric form `Rot(φ)·diag(e^{−iδ/2}, e^{iδ/2})·Rot(φ)ᵀ`, where `Rot` is
//!   the ordinary counter-clockwise rotation. Every retarder is in SU(2).
//! * Stokes vectors are `s₁ = |h|² − |v|²`, `s₂ = 2 Re(h̄v)`, `s₃ = 2 Im(h̄v)`.
//!   Under these choices `|R⟩` sits at `s₃ = −1`, and the Pancharatnam phase
//!   of a closed loop is `−Ω/2` with `Ω` the counter-clockwise solid angle.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{unit_phase, ComplexMatrix, C0, C1};
use crate::error::{Error, Result};

/// Normalized two-component polarization state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesVector {
    pub h: Complex64,
    pub v: Complex64,
}

impl JonesVector {
    /// Normalizes `(h, v)`; fails on the zero vector.
    pub fn new(h: Complex64, v: Complex64) -> Result<Self> {
        let norm = (h.norm_sqr() + v.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 1e-300) {
            return Err(Error::Domain("Jones vector must be finite and nonzero".into()));
        }
        Ok(JonesVector { h: h / norm, v: v / norm })
    }

    pub fn horizontal() -> Self {
        JonesVector { h: C1, v: C0 }
    }

    pub fn vertical() -> Self {
        JonesVector { h: C0, v: C1 }
    }

    pub fn diagonal() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        JonesVector { h: s, v: s }
    }

    pub fn antidiagonal() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        JonesVector { h: s, v: -s }
    }

    pub fn right_circular() -> Self {
        JonesVector { h: Complex64::new(FRAC_1_SQRT_2, 0.0), v: Complex64::new(0.0, -FRAC_1_SQRT_2) }
    }

    pub fn left_circular() -> Self {
        JonesVector { h: Complex64::new(FRAC_1_SQRT_2, 0.0), v: Complex64::new(0.0, FRAC_1_SQRT_2) }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &JonesVector) -> Complex64 {
        self.h.conj() * other.h + self.v.conj() * other.v
    }

    pub fn norm(&self) -> f64 {
        (self.h.norm_sqr() + self.v.norm_sqr()).sqrt()
    }

    pub fn stokes(&self) -> [f64; 3] {
        let hv = self.h.conj() * self.v;
        [self.h.norm_sqr() - self.v.norm_sqr(), 2.0 * hv.re, 2.0 * hv.im]
    }

    /// A state whose Stokes vector is the direction of `s`, with a real
    /// non-negative `h` component.
    pub fn from_stokes(s: [f64; 3]) -> Result<Self> {
        let r = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        if !(r.is_finite() && r > 1e-300) {
            return Err(Error::Domain("Stokes vector must be finite and nonzero".into()));
        }
        let polar = (s[0] / r).clamp(-1.0, 1.0).acos();
        let azimuth = s[2].atan2(s[1]);
        let (sin, cos) = (polar / 2.0).sin_cos();
        Ok(JonesVector { h: Complex64::new(cos, 0.0), v: Complex64::from_polar(sin, azimuth) })
    }

    /// Applies a 2x2 Jones matrix. No renormalization: unitary matrices keep the norm.
    pub fn transformed(&self, m: &ComplexMatrix) -> Self {
        debug_assert!(m.rows() == 2 && m.cols() == 2);
        JonesVector { h: m.get(0, 0) * self.h + m.get(0, 1) * self.v, v: m.get(1, 0) * self.h + m.get(1, 1) * self.v }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        JonesVector { h: self.h * c, v: self.v * c }
    }

    /// Representative of the same ray whose first significant component is
    /// real and positive. This is the reference gauge for open paths.
    pub fn canonical(&self) -> Self {
        let lead = if self.h.norm() > 1e-12 { self.h } else { self.v };
        self.scaled(unit_phase(lead).conj())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RetarderKind {
    Half,
    Quarter,
}

impl RetarderKind {
    pub fn retardance(self) -> f64 {
        match self {
            RetarderKind::Half => PI,
            RetarderKind::Quarter => FRAC_PI_2,
        }
    }
}

/// A waveplate: retarder kind plus optic-axis angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetarderSpec {
    pub kind: RetarderKind,
    pub axis: f64,
}

impl RetarderSpec {
    pub fn half(axis: f64) -> Self {
        RetarderSpec { kind: RetarderKind::Half, axis }
    }

    pub fn quarter(axis: f64) -> Self {
        RetarderSpec { kind: RetarderKind::Quarter, axis }
    }
}

/// Jones matrix of a linear retarder with arbitrary retardance.
pub fn retarder_matrix(retardance: f64, axis: f64) -> ComplexMatrix {
    let (s, c) = axis.sin_cos();
    let rot = ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).expect("2x2 rotation");
    let phase = ComplexMatrix::diagonal(&[
        Complex64::from_polar(1.0, -retardance / 2.0),
        Complex64::from_polar(1.0, retardance / 2.0),
    ]);
    let rot_t = ComplexMatrix::from_real(2, 2, &[c, s, -s, c]).expect("2x2 rotation");
    &(&rot * &phase) * &rot_t
}

pub fn waveplate_matrix(spec: RetarderSpec) -> ComplexMatrix {
    retarder_matrix(spec.kind.retardance(), spec.axis)
}
