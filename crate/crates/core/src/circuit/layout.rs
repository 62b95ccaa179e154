//! Rail × polarization construction of the four-mode network.
//!
//! Light occupies six slots: three rails (top, middle, bottom) times two
//! polarizations. Computational modes are encoded as
//! `|0⟩ = H on middle`, `|1⟩ = V on bottom`, `|2⟩ = V on middle`,
//! `|3⟩ = H on bottom`. The stages are, in order:
//!
//! 1. half plates at 22.5° on the middle and bottom rails;
//! 2. a beam displacer moving H up one rail;
//! 3. the per-rail waveplate programs, each with a calibration phase;
//! 4. a second displacer;
//! 5. half plates at 22.5° on the top and middle rails;
//! 6. polarizing splitters feeding the four detectors.
//!
//! Detector `D0` sees H on the middle rail, `D1` H on top, `D2` V on the
//! middle rail and `D3` V on top. With this labelling the network equals
//! `h4(θ′)` up to port phases, where `θ′ = 4α + 2φ_m − φ_t − φ_b`.

use std::f64::consts::FRAC_PI_8;

use num_complex::Complex64;

use crate::complex::{ComplexMatrix, C1};
use crate::error::{Error, Result};
use crate::polarization::{rail_composite, waveplate_matrix, Rail, RailProgram, RetarderSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

/// Slot of each computational input mode.
pub const ENCODING: [(Rail, Polarization); 4] = [
    (Rail::Middle, Polarization::H),
    (Rail::Bottom, Polarization::V),
    (Rail::Middle, Polarization::V),
    (Rail::Bottom, Polarization::H),
];

/// Slot seen by each detector.
pub const DETECTOR_SLOTS: [(Rail, Polarization); 4] = [
    (Rail::Middle, Polarization::H),
    (Rail::Top, Polarization::H),
    (Rail::Middle, Polarization::V),
    (Rail::Top, Polarization::V),
];

const SLOTS: usize = 6;

fn slot(rail: Rail, pol: Polarization) -> usize {
    2 * rail.index() + pol.index()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stage {
    /// One optional fixed plate per rail, indexed top, middle, bottom.
    Plates([Option<RetarderSpec>; 3]),
    /// The α-linked rail programs of the layout.
    RailPrograms,
    /// Moves horizontally polarized light up one rail.
    Displacer,
    /// Separates polarizations onto the detectors.
    Splitter,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalLayout {
    pub programs: [RailProgram; 3],
    pub stages: Vec<Stage>,
}

impl Default for PhysicalLayout {
    fn default() -> Self {
        let a = Some(RetarderSpec::half(FRAC_PI_8));
        PhysicalLayout {
            programs: Rail::ALL.map(RailProgram::preset),
            stages: vec![
                Stage::Plates([None, a, a]),
                Stage::Displacer,
                Stage::RailPrograms,
                Stage::Displacer,
                Stage::Plates([a, a, None]),
                Stage::Splitter,
            ],
        }
    }
}

impl PhysicalLayout {
    pub fn rails(&self) -> usize {
        self.programs.len()
    }

    /// The 4×4 transfer matrix from encoded inputs to detectors.
    ///
    /// `rail_phases` multiply the top, middle and bottom rail programs.
    pub fn unitary(&self, alpha: f64, rail_phases: [f64; 3]) -> Result<ComplexMatrix> {
        let mut state = ComplexMatrix::zeros(SLOTS, 4);
        for (mode, &(rail, pol)) in ENCODING.iter().enumerate() {
            state[(slot(rail, pol), mode)] = C1;
        }
        let mut detected = None;
        for (k, stage) in self.stages.iter().enumerate() {
            if detected.is_some() {
                return Err(Error::Domain(format!("stage {k} follows the splitter")));
            }
            match stage {
                Stage::Plates(plates) => {
                    for (r, plate) in plates.iter().enumerate() {
                        if let Some(spec) = plate {
                            apply_block(&mut state, r, &waveplate_matrix(*spec));
                        }
                    }
                }
                Stage::RailPrograms => {
                    for (r, program) in self.programs.iter().enumerate() {
                        let m = rail_composite(program, alpha)?.scale(Complex64::from_polar(1.0, rail_phases[r]));
                        apply_block(&mut state, r, &m);
                    }
                }
                Stage::Displacer => state = displace(&state, k)?,
                Stage::Splitter => detected = Some(split(&state)?),
            }
        }
        detected.ok_or_else(|| Error::Domain("layout has no splitter stage".into()))
    }
}

fn apply_block(state: &mut ComplexMatrix, rail: usize, m: &ComplexMatrix) {
    let block = [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]];
    state.mix_rows(2 * rail, 2 * rail + 1, block);
}

fn displace(state: &ComplexMatrix, stage: usize) -> Result<ComplexMatrix> {
    let top_h = slot(Rail::Top, Polarization::H);
    if state.row(top_h).iter().any(|z| z.norm() > 1e-12) {
        return Err(Error::Domain(format!("displacer at stage {stage} would push light off the top rail")));
    }
    let mut out = ComplexMatrix::zeros(SLOTS, state.cols());
    for r in 0..3 {
        let v = 2 * r + 1;
        for j in 0..state.cols() {
            out[(v, j)] = state.get(v, j);
            if r > 0 {
                out[(2 * (r - 1), j)] = state.get(2 * r, j);
            }
        }
    }
    Ok(out)
}

fn split(state: &ComplexMatrix) -> Result<ComplexMatrix> {
    let used: Vec<usize> = DETECTOR_SLOTS.iter().map(|&(r, p)| slot(r, p)).collect();
    for s in (0..SLOTS).filter(|s| !used.contains(s)) {
        if state.row(s).iter().any(|z| z.norm() > 1e-12) {
            return Err(Error::Domain(format!("light reaches slot {s}, which has no detector")));
        }
    }
    ComplexMatrix::from_fn(4, state.cols(), |i, j| state.get(used[i], j))
}

/// Transfer matrix of the default layout.
pub fn physical_unitary(alpha: f64, rail_phases: [f64; 3]) -> ComplexMatrix {
    PhysicalLayout::default().unitary(alpha, rail_phases).expect("default layout is consistent")
}

/// `θ′` realized by [`physical_unitary`]: `4α + 2φ_m − φ_t − φ_b`.
///
/// Only the combination `2φ_m − φ_t − φ_b` of the rail phases matters, so
/// equal phases on all rails leave `θ′` unchanged.
pub fn theta_prime(alpha: f64, rail_phases: [f64; 3]) -> f64 {
    let [t, m, b] = rail_phases;
    4.0 * alpha + 2.0 * m - t - b
}
