//! Mode networks: elements, circuits, the four-mode complex Hadamard family
//! and structural checks.
//!
//! Beamsplitters use the symmetric convention `[[√t, i√r], [i√r, √t]]` with
//! `t = 1 − r`. A circuit's elements act in list order, so the unitary is
//! `E_k ⋯ E_2 E_1`.

mod layout;
mod reck;

pub use layout::{physical_unitary, theta_prime, PhysicalLayout, Polarization, Stage, DETECTOR_SLOTS, ENCODING};
pub use reck::{reck_decompose, recompose, MeshPlan};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{is_unitary, ComplexMatrix, Tolerance, C0, C1, CI};
use crate::error::{Error, Result};

/// One two-mode (or single-mode) optical element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CircuitElement {
    /// Beamsplitter between modes `a` and `b` with reflectivity `r`.
    #[serde(rename = "bs")]
    Beamsplitter {
        a: usize,
        b: usize,
        r: f64,
    },
    Phase {
        mode: usize,
        phi: f64,
    },
    Swap {
        a: usize,
        b: usize,
    },
}

impl CircuitElement {
    pub fn bs(a: usize, b: usize, r: f64) -> Self {
        CircuitElement::Beamsplitter { a, b, r }
    }

    pub fn phase(mode: usize, phi: f64) -> Self {
        CircuitElement::Phase { mode, phi }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        CircuitElement::Swap { a, b }
    }

    fn validate(&self, modes: usize) -> Result<()> {
        let check = |m: usize| {
            if m < modes {
                Ok(())
            } else {
                Err(Error::Domain(format!("mode {m} out of range for a {modes}-mode circuit")))
            }
        };
        match *self {
            CircuitElement::Beamsplitter { a, b, r } => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::Domain(format!("beamsplitter modes must differ, got ({a}, {b})")));
                }
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::Domain(format!("reflectivity {r} outside [0, 1]")));
                }
            }
            CircuitElement::Phase { mode, phi } => {
                check(mode)?;
                if !phi.is_finite() {
                    return Err(Error::Domain("phase must be finite".into()));
                }
            }
            CircuitElement::Swap { a, b } => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::Domain(format!("swap modes must differ, got ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    /// Applies the element from the left to `m`.
    fn apply_left(&self, m: &mut ComplexMatrix) {
        match *self {
            CircuitElement::Beamsplitter { a, b, r } => {
                let bs = bs_block(r);
                m.mix_rows(a, b, bs);
            }
            CircuitElement::Phase { mode, phi } => {
                let p = Complex64::from_polar(1.0, phi);
                for j in 0..m.cols() {
                    m[(mode, j)] *= p;
                }
            }
            CircuitElement::Swap { a, b } => m.mix_rows(a, b, [[C0, C1], [C1, C0]]),
        }
    }
}

fn bs_block(r: f64) -> [[Complex64; 2]; 2] {
    let t = Complex64::new((1.0 - r).sqrt(), 0.0);
    let ir = CI * r.sqrt();
    [[t, ir], [ir, t]]
}

/// `[[√(1−r), i√r], [i√r, √(1−r)]]`.
pub fn beamsplitter_matrix(reflectivity: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::Domain(format!("reflectivity {reflectivity} outside [0, 1]")));
    }
    let [r0, r1] = bs_block(reflectivity);
    ComplexMatrix::from_rows(&[r0.to_vec(), r1.to_vec()])
}

/// An ordered list of elements over a fixed number of modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeCircuit {
    modes: usize,
    elements: Vec<CircuitElement>,
}

impl ModeCircuit {
    pub fn new(modes: usize, elements: Vec<CircuitElement>) -> Result<Self> {
        let c = ModeCircuit { modes, elements };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(modes: usize) -> Result<Self> {
        Self::new(modes, Vec::new())
    }

    /// Checks mode indices and parameters; useful after deserializing.
    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::Domain("a circuit needs at least one mode".into()));
        }
        for (k, e) in self.elements.iter().enumerate() {
            e.validate(self.modes).map_err(|err| Error::Domain(format!("element {k}: {err}")))?;
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn elements(&self) -> &[CircuitElement] {
        &self.elements
    }

    pub fn push(&mut self, element: CircuitElement) -> Result<()> {
        element.validate(self.modes)?;
        self.elements.push(element);
        Ok(())
    }
}

/// Unitary of `c`, with the first element acting first.
pub fn circuit_unitary(c: &ModeCircuit) -> Result<ComplexMatrix> {
    c.validate()?;
    let mut u = ComplexMatrix::identity(c.modes);
    for e in &c.elements {
        e.apply_left(&mut u);
    }
    Ok(u)
}

/// The four-mode complex Hadamard matrix
/// `½[[1,1,1,1],[1,e^{iθ},−1,−e^{iθ}],[1,−1,1,−1],[1,−e^{iθ},−1,e^{iθ}]]`.
pub fn h4(theta: f64) -> ComplexMatrix {
    let e = Complex64::from_polar(1.0, theta);
    let rows = [[C1, C1, C1, C1], [C1, e, -C1, -e], [C1, -C1, C1, -C1], [C1, -e, -C1, e]];
    ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j] * 0.5).expect("4x4")
}

/// Two layers of 50:50 beamsplitters around a swap of the middle modes, with
/// the phase `θ` on mode 3 between the layers.
///
/// Each layer pairs modes (0, 2) and (1, 3); the swap exchanges 1 and 2.
/// The result equals [`h4`] up to input and output phases.
pub fn fig1a_circuit(theta: f64) -> ModeCircuit {
    ModeCircuit::new(
        4,
        vec![
            CircuitElement::bs(0, 2, 0.5),
            CircuitElement::bs(1, 3, 0.5),
            CircuitElement::swap(1, 2),
            CircuitElement::phase(3, theta),
            CircuitElement::bs(0, 2, 0.5),
            CircuitElement::bs(1, 3, 0.5),
        ],
    )
    .expect("valid circuit")
}

/// The `θ` for which `u ≅ h4(θ)` up to port phases, in `(−π, π]`.
///
/// Rows and columns are rephased so the first row and column are real and
/// positive; `θ` is then the argument of entry (1, 1). Whether `u` really is
/// in the family is left to [`equal_up_to_diagonal_phases`](crate::complex::equal_up_to_diagonal_phases).
pub fn h4_theta(u: &ComplexMatrix) -> Result<f64> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::Shape(format!("expected a 4x4 matrix, got {}x{}", u.rows(), u.cols())));
    }
    let (a, b, c, d) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
    if [a, b, c].iter().any(|z| z.norm() < 1e-12) {
        return Err(Error::Domain("first row and column must have no zero entries".into()));
    }
    Ok(crate::polarization::wrap_angle((d * a / (b * c)).arg()))
}

/// True iff `m` is unitary and every entry has modulus `1/√n`, both within `tol`.
pub fn is_complex_hadamard(m: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let n = m.require_square()?;
    if !is_unitary(m, tol)? {
        return Ok(false);
    }
    let target = 1.0 / (n as f64).sqrt();
    Ok(m.as_slice().iter().all(|z| (z.norm() - target).abs() <= tol.eps()))
}

/// Number of distinct single-photon routes from `input` to `output`.
///
/// Every beamsplitter is a two-way branch regardless of its reflectivity;
/// swaps reroute and phases pass through. A count above one means the
/// circuit contains an interferometer between the two ports.
pub fn path_count(c: &ModeCircuit, input: usize, output: usize) -> Result<u128> {
    if input >= c.modes || output >= c.modes {
        return Err(Error::Domain(format!("ports ({input}, {output}) out of range for {} modes", c.modes)));
    }
    let mut counts = vec![0u128; c.modes];
    counts[input] = 1;
    for e in &c.elements {
        match *e {
            CircuitElement::Beamsplitter { a, b, .. } => {
                let total = counts[a].saturating_add(counts[b]);
                counts[a] = total;
                counts[b] = total;
            }
            CircuitElement::Swap { a, b } => counts.swap(a, b),
            CircuitElement::Phase { .. } => {}
        }
    }
    Ok(counts[output])
}
