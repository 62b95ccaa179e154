//! Virtual counting experiment over a sweep of the rail-plate angle α.
//!
//! Each grid point draws its own ChaCha8 stream from `(seed, index)`, so the
//! records do not depend on evaluation order.

mod csv;
mod fit;

pub use self::csv::{fmt_g, write_fits, write_fringes, write_rse, write_singles};
pub use fit::{fit_fringe, relative_standard_error, residual_phase_amplitude, FitResult};

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::circuit::{physical_unitary, theta_prime};
use crate::error::{Error, Result};
use crate::interference::{coincidence_probability, singles_distribution, IndistinguishabilityModel};
use crate::random::stream_rng;

/// Detector pairs in output order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// Indices into [`PAIRS`] of the pairs that show fringes.
pub const LIVE_PAIRS: [usize; 4] = [0, 2, 3, 5];
/// Indices into [`PAIRS`] of the pairs suppressed by interference.
pub const SUPPRESSED_PAIRS: [usize; 2] = [1, 4];
/// Modes fed with single photons in the pair experiment, and the two inputs
/// of the singles experiment.
pub const INPUT_MODES: (usize, usize) = (0, 1);
pub const DETECTORS: usize = 4;

/// `"01"`, `"02"`, ...
pub fn pair_label(pair: usize) -> String {
    let (i, j) = PAIRS[pair];
    format!("{i}{j}")
}

/// Detector efficiency that drifts with `θ′`:
/// `η_d·(1 + depth·cos(θ′ + phase))` for detector `detector`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencyModulation {
    pub detector: usize,
    pub depth: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub alpha_grid: Vec<f64>,
    /// Expected two-photon events per grid point.
    pub pair_rate: f64,
    /// Expected single photons per grid point and input.
    pub singles_rate: f64,
    pub efficiencies: [f64; DETECTORS],
    /// Expected accidental coincidences per pair and grid point.
    pub accidental_rate: f64,
    pub x: f64,
    pub seed: u64,
    /// Calibration phases of the top, middle and bottom rails.
    pub rail_phases: [f64; 3],
    pub modulation: Option<EfficiencyModulation>,
}

impl SweepConfig {
    /// `points` equally spaced angles in `[0, 2π)`.
    pub fn default_grid(points: usize) -> Vec<f64> {
        (0..points).map(|k| TAU * k as f64 / points as f64).collect()
    }

    /// Ideal settings: unit efficiencies, no accidentals, `x = 1`.
    pub fn ideal(alpha_grid: Vec<f64>, pair_rate: f64, singles_rate: f64, seed: u64) -> Self {
        SweepConfig {
            alpha_grid,
            pair_rate,
            singles_rate,
            efficiencies: [1.0; DETECTORS],
            accidental_rate: 0.0,
            x: 1.0,
            seed,
            rail_phases: [0.0; 3],
            modulation: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        if self.alpha_grid.is_empty() {
            return bad("alpha grid is empty".into());
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !a.is_finite()) {
            return bad(format!("alpha {a} is not finite"));
        }
        for (name, rate) in [
            ("pair_rate", self.pair_rate),
            ("singles_rate", self.singles_rate),
            ("accidental_rate", self.accidental_rate),
        ] {
            if !(0.0..Poisson::<f64>::MAX_LAMBDA).contains(&rate) {
                return bad(format!("{name} must be finite and nonnegative, got {rate}"));
            }
        }
        for (d, &eta) in self.efficiencies.iter().enumerate() {
            if !(eta > 0.0 && eta <= 1.0) {
                return bad(format!("efficiency of detector {d} must lie in (0, 1], got {eta}"));
            }
        }
        IndistinguishabilityModel::new(self.x)?;
        if self.rail_phases.iter().any(|p| !p.is_finite()) {
            return bad("rail phases must be finite".into());
        }
        if let Some(m) = self.modulation {
            if m.detector >= DETECTORS {
                return bad(format!("modulated detector {} does not exist", m.detector));
            }
            if !(0.0..1.0).contains(&m.depth) || !m.phase.is_finite() {
                return bad(format!("modulation depth must lie in [0, 1), got {}", m.depth));
            }
        }
        Ok(())
    }

    fn efficiencies_at(&self, theta: f64) -> [f64; DETECTORS] {
        let mut eta = self.efficiencies;
        if let Some(m) = self.modulation {
            eta[m.detector] *= 1.0 + m.depth * (theta + m.phase).cos();
        }
        eta
    }
}

/// Counts recorded at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub alpha: f64,
    pub theta_prime: f64,
    /// Coincidences per entry of [`PAIRS`].
    pub pair_counts: [u64; 6],
    /// Single-photon counts, indexed `[input][detector]` for inputs 0 and 1.
    pub singles_counts: [[u64; DETECTORS]; 2],
    /// Expected accidentals per pair.
    pub accidentals_estimate: [f64; 6],
}

/// Pair counts after accidental subtraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrectedRecord {
    pub alpha: f64,
    pub theta_prime: f64,
    pub pair_counts: [f64; 6],
}

fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let d = Poisson::new(lambda).expect("rate validated");
    d.sample(rng) as u64
}

/// Poisson-sampled counts for every point of the grid.
///
/// Pair `(i, j)` has mean `pair_rate·η_i·η_j·P(i, j) + accidental_rate`,
/// with `P` the coincidence probability of photons in modes 0 and 1. Singles
/// from input `k` at detector `j` have mean `singles_rate·η_j·|U_jk|²`.
pub fn simulate_sweep(config: &SweepConfig) -> Result<Vec<CountRecord>> {
    config.validate()?;
    let model = IndistinguishabilityModel::new(config.x)?;
    let mut records = Vec::with_capacity(config.alpha_grid.len());
    for (index, &alpha) in config.alpha_grid.iter().enumerate() {
        let mut rng = stream_rng(config.seed, index as u64);
        let u = physical_unitary(alpha, config.rail_phases);
        let theta = theta_prime(alpha, config.rail_phases);
        let eta = config.efficiencies_at(theta);
        let mut pair_counts = [0; 6];
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            let p = coincidence_probability(&u, INPUT_MODES, (i, j), model)?;
            let lambda = config.pair_rate * eta[i] * eta[j] * p + config.accidental_rate;
            pair_counts[k] = sample_poisson(lambda, &mut rng);
        }
        let mut singles_counts = [[0; DETECTORS]; 2];
        for (slot, input) in [INPUT_MODES.0, INPUT_MODES.1].into_iter().enumerate() {
            let probs = singles_distribution(&u, input)?;
            for d in 0..DETECTORS {
                singles_counts[slot][d] = sample_poisson(config.singles_rate * eta[d] * probs[d], &mut rng);
            }
        }
        records.push(CountRecord {
            alpha,
            theta_prime: theta,
            pair_counts,
            singles_counts,
            accidentals_estimate: [config.accidental_rate; 6],
        });
    }
    Ok(records)
}

/// Subtracts `accidental_rate` from every pair count, flooring at zero.
pub fn subtract_accidentals(records: &[CountRecord], accidental_rate: f64) -> Result<Vec<CorrectedRecord>> {
    if !(accidental_rate.is_finite() && accidental_rate >= 0.0) {
        return Err(Error::Domain(format!("accidental rate must be nonnegative, got {accidental_rate}")));
    }
    Ok(records
        .iter()
        .map(|r| CorrectedRecord {
            alpha: r.alpha,
            theta_prime: r.theta_prime,
            pair_counts: r.pair_counts.map(|c| (c as f64 - accidental_rate).max(0.0)),
        })
        .collect())
}

/// `(θ′, counts)` trace of one pair.
pub fn pair_trace(records: &[CorrectedRecord], pair: usize) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.theta_prime, r.pair_counts[pair])).collect()
}

/// `(θ′, counts)` trace of one detector for one singles input slot.
pub fn singles_trace(records: &[CountRecord], input_slot: usize, detector: usize) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.theta_prime, r.singles_counts[input_slot][detector] as f64)).collect()
}

/// Fit of one pair's corrected fringe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairFit {
    pub pair: usize,
    pub fit: FitResult,
}

/// Fits of every pair plus the mean visibility of the live pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FringeAnalysis {
    pub fits: Vec<PairFit>,
    pub mean_live_visibility: f64,
}

/// Subtracts accidentals and fits each pair's fringe against `θ′`.
///
/// A pair with no counts left at all is reported as a flat zero fringe.
pub fn analyze_fringes(records: &[CountRecord], accidental_rate: f64) -> Result<FringeAnalysis> {
    let corrected = subtract_accidentals(records, accidental_rate)?;
    let mut fits = Vec::with_capacity(PAIRS.len());
    for pair in 0..PAIRS.len() {
        let trace = pair_trace(&corrected, pair);
        let fit = if trace.iter().all(|&(_, y)| y == 0.0) { FitResult::flat_zero() } else { fit_fringe(&trace)? };
        fits.push(PairFit { pair, fit });
    }
    let mean_live_visibility =
        LIVE_PAIRS.iter().map(|&k| fits[k].fit.visibility).sum::<f64>() / LIVE_PAIRS.len() as f64;
    Ok(FringeAnalysis { fits, mean_live_visibility })
}

/// Flatness summary of one singles trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SinglesTrace {
    pub input: usize,
    pub detector: usize,
    pub mean_counts: f64,
    pub rse: f64,
    pub amplitude_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SinglesAnalysis {
    pub traces: Vec<SinglesTrace>,
    pub mean_rse: f64,
}

/// RSE and fitted sinusoid amplitude of all eight singles traces.
pub fn analyze_singles(records: &[CountRecord]) -> Result<SinglesAnalysis> {
    let mut traces = Vec::with_capacity(2 * DETECTORS);
    for (slot, input) in [INPUT_MODES.0, INPUT_MODES.1].into_iter().enumerate() {
        for detector in 0..DETECTORS {
            let trace = singles_trace(records, slot, detector);
            let values: Vec<f64> = trace.iter().map(|p| p.1).collect();
            let rse = relative_standard_error(&values)?;
            let fit = fit_fringe(&trace)?;
            traces.push(SinglesTrace {
                input,
                detector,
                mean_counts: values.iter().sum::<f64>() / values.len() as f64,
                rse,
                amplitude_fraction: fit.amplitude_fraction,
            });
        }
    }
    let mean_rse = traces.iter().map(|t| t.rse).sum::<f64>() / traces.len() as f64;
    Ok(SinglesAnalysis { traces, mean_rse })
}
