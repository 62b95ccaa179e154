//! Per-rail waveplate programs of the variable-phase section.
//!
//! Each rail carries six plates: outer quarter, α-linked half, inner quarter,
//! inner quarter, α-linked half, outer quarter. The quarter plates sit at
//! ±45°; which sign each one takes is what distinguishes the rails. The
//! shipped presets come out of [`matching_sign_patterns`], an exhaustive
//! search over the sixteen sign patterns.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jones::{waveplate_matrix, JonesVector, RetarderKind, RetarderSpec};
use crate::complex::{equal_up_to_global_phase, ComplexMatrix, Tolerance, C0, CI};
use crate::error::{Error, Result};

/// Optic-axis setting of a plate inside a [`RailProgram`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PlateAxis {
    Fixed(f64),
    /// Follows the shared sweep angle α.
    Alpha,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plate {
    pub kind: RetarderKind,
    pub axis: PlateAxis,
}

impl Plate {
    pub fn resolve(&self, alpha: f64) -> RetarderSpec {
        let axis = match self.axis {
            PlateAxis::Fixed(a) => a,
            PlateAxis::Alpha => alpha,
        };
        RetarderSpec { kind: self.kind, axis }
    }
}

/// Ordered list of plates on one rail; the first plate acts first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RailProgram {
    pub plates: Vec<Plate>,
}

impl RailProgram {
    pub fn new(plates: Vec<Plate>) -> Self {
        RailProgram { plates }
    }

    /// The six-plate layout with quarter-plate axes `signs[k]·45°`.
    pub fn from_quarter_signs(signs: [i8; 4]) -> Self {
        let q =
            |s: i8| Plate { kind: RetarderKind::Quarter, axis: PlateAxis::Fixed(f64::from(s.signum()) * FRAC_PI_4) };
        let p = Plate { kind: RetarderKind::Half, axis: PlateAxis::Alpha };
        RailProgram::new(vec![q(signs[0]), p, q(signs[1]), q(signs[2]), p, q(signs[3])])
    }

    pub fn preset(rail: Rail) -> Self {
        Self::from_quarter_signs(rail.quarter_signs())
    }

    pub fn resolve(&self, alpha: f64) -> Vec<RetarderSpec> {
        self.plates.iter().map(|p| p.resolve(alpha)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.plates.is_empty()
    }
}

/// The three rails of the variable-phase section, top to bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rail {
    Top,
    Middle,
    Bottom,
}

impl Rail {
    pub const ALL: [Rail; 3] = [Rail::Top, Rail::Middle, Rail::Bottom];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Rail::Top => "rail-top",
            Rail::Middle => "rail-middle",
            Rail::Bottom => "rail-bottom",
        }
    }

    /// Quarter-plate sign pattern of the preset.
    ///
    /// The bottom rail is the unique variable-flip pattern whose traversal
    /// from `|V⟩` visits V, R, L, H, R, L, H at plate boundaries. Top and
    /// middle take the candidate sharing the most plates with the bottom rail.
    pub fn quarter_signs(self) -> [i8; 4] {
        match self {
            Rail::Top => [-1, 1, -1, -1],
            Rail::Middle => [-1, 1, -1, 1],
            Rail::Bottom => [-1, 1, 1, 1],
        }
    }

    pub fn target(self) -> RailTarget {
        match self {
            Rail::Top => RailTarget::Flip,
            Rail::Middle => RailTarget::Identity,
            Rail::Bottom => RailTarget::VariableFlip,
        }
    }
}

impl fmt::Display for Rail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rail::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| {
            Error::Domain(format!("unknown rail preset `{s}` (expected rail-top, rail-middle or rail-bottom)"))
        })
    }
}

/// Composite of a rail program: plate matrices multiplied in order, last plate leftmost.
pub fn rail_composite(program: &RailProgram, alpha: f64) -> Result<ComplexMatrix> {
    if program.is_empty() {
        return Err(Error::Domain("rail program has no plates".into()));
    }
    Ok(program.resolve(alpha).into_iter().fold(ComplexMatrix::identity(2), |acc, spec| &waveplate_matrix(spec) * &acc))
}

/// `i·[[0, e^{iφ}], [e^{−iφ}, 0]]`
pub fn variable_flip(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C0, CI * Complex64::from_polar(1.0, phi)],
        vec![CI * Complex64::from_polar(1.0, -phi), C0],
    ])
    .expect("2x2")
}

/// Target operation of a rail, up to an α-independent global phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RailTarget {
    /// `iX`
    Flip,
    Identity,
    /// `i·[[0, e^{±4iα}], [e^{∓4iα}, 0]]`; the sign of the exponent is a convention.
    VariableFlip,
}

const SEARCH_ALPHAS: [f64; 4] = [0.0, 0.1, 0.37, 1.2];

/// Target matrix for a given α and sign convention of the variable phase.
fn target_matrix(target: RailTarget, alpha: f64, sign: f64) -> ComplexMatrix {
    match target {
        RailTarget::Flip => variable_flip(0.0),
        RailTarget::Identity => ComplexMatrix::identity(2),
        RailTarget::VariableFlip => variable_flip(sign * 4.0 * alpha),
    }
}

/// True iff `composite(α) = g·target(α)` on the search grid for one unimodular
/// `g` that does not depend on α.
fn matches_target(program: &RailProgram, target: RailTarget, tol: Tolerance) -> Result<bool> {
    let composites = SEARCH_ALPHAS.iter().map(|&a| rail_composite(program, a)).collect::<Result<Vec<_>>>()?;
    for sign in [1.0, -1.0] {
        let t0 = target_matrix(target, 0.0, sign);
        if !equal_up_to_global_phase(&composites[0], &t0, tol)? {
            continue;
        }
        let pivot = if t0[(0, 0)].norm() > 0.5 { (0, 0) } else { (0, 1) };
        let g = composites[0][pivot] / t0[pivot];
        let mut ok = true;
        for (u, &a) in composites.iter().zip(&SEARCH_ALPHAS) {
            ok &= u.max_abs_diff(&target_matrix(target, a, sign).scale(g))? <= tol.eps();
        }
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All quarter-plate sign patterns whose composite meets `target`, in
/// lexicographic order with −1 before +1.
pub fn matching_sign_patterns(target: RailTarget) -> Vec<[i8; 4]> {
    let tol = Tolerance::DEFAULT;
    (0..16u8)
        .map(|bits| {
            let mut signs = [-1i8; 4];
            for (k, s) in signs.iter_mut().enumerate() {
                if bits & (0b1000 >> k) != 0 {
                    *s = 1;
                }
            }
            signs
        })
        .filter(|&signs| matches_target(&RailProgram::from_quarter_signs(signs), target, tol).unwrap_or(false))
        .collect()
}

/// States at the plate boundaries when `input` traverses `program`.
pub fn boundary_states(program: &RailProgram, alpha: f64, input: JonesVector) -> Vec<JonesVector> {
    let mut out = vec![input];
    let mut state = input;
    for spec in program.resolve(alpha) {
        state = state.transformed(&waveplate_matrix(spec));
        out.push(state);
    }
    out
}
