//! Photon-number statistics of linear-optical networks.
//!
//! Transition probabilities follow the bosonic rule
//! `P(S→T) = |perm(U[T,S])|² / (Π s_i! · Π t_j!)`, where `U[T,S]` repeats row
//! `j` of `U` `t_j` times and column `i` `s_i` times.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{is_unitary, ComplexMatrix, Tolerance};
use crate::error::{Error, Result};
use crate::permanent::{permanent, submatrix_with_repetition};

/// Largest photon number accepted by [`evolve`].
pub const MAX_PHOTONS: usize = 6;

/// Occupation numbers, one per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FockState {
    occupations: Vec<usize>,
}

impl FockState {
    pub fn new(occupations: Vec<usize>) -> Self {
        FockState { occupations }
    }

    /// One photon in each listed mode (repeats allowed).
    pub fn from_modes(modes: usize, occupied: &[usize]) -> Result<Self> {
        let mut occ = vec![0; modes];
        for &m in occupied {
            if m >= modes {
                return Err(Error::Domain(format!("mode {m} out of range for {modes} modes")));
            }
            occ[m] += 1;
        }
        Ok(FockState::new(occ))
    }

    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn modes(&self) -> usize {
        self.occupations.len()
    }

    pub fn photons(&self) -> usize {
        self.occupations.iter().sum()
    }
}

/// Probabilities over output occupation patterns, in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OutputDistribution {
    entries: BTreeMap<Vec<usize>, f64>,
}

impl OutputDistribution {
    pub fn new(entries: BTreeMap<Vec<usize>, f64>) -> Self {
        OutputDistribution { entries }
    }

    /// Probability of `pattern`; zero if absent.
    pub fn get(&self, pattern: &[usize]) -> f64 {
        self.entries.get(pattern).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &f64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Largest absolute difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &OutputDistribution) -> f64 {
        self.entries.keys().chain(other.entries.keys()).map(|k| (self.get(k) - other.get(k)).abs()).fold(0.0, f64::max)
    }
}

/// Pairwise wavepacket overlap `x`: 1 for identical photons, 0 for fully
/// distinguishable ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IndistinguishabilityModel {
    x: f64,
}

impl IndistinguishabilityModel {
    pub const INDISTINGUISHABLE: Self = IndistinguishabilityModel { x: 1.0 };
    pub const DISTINGUISHABLE: Self = IndistinguishabilityModel { x: 0.0 };

    pub fn new(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("indistinguishability {x} outside [0, 1]")));
        }
        Ok(IndistinguishabilityModel { x })
    }

    pub fn x(self) -> f64 {
        self.x
    }
}

/// All occupation patterns of `photons` photons in `modes` modes, ascending.
pub fn occupation_patterns(modes: usize, photons: usize) -> Vec<Vec<usize>> {
    fn fill(prefix: &mut Vec<usize>, modes: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(prefix, modes, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes > 0 {
        fill(&mut Vec::with_capacity(modes), modes, photons, &mut out);
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn require_unitary(u: &ComplexMatrix) -> Result<usize> {
    let m = u.require_square()?;
    if !is_unitary(u, Tolerance::DEFAULT)? {
        return Err(Error::Domain("transfer matrix is not unitary".into()));
    }
    Ok(m)
}

/// Output distribution of `input` through `u`, over every pattern with the
/// same photon number (zero-probability patterns included).
pub fn evolve(u: &ComplexMatrix, input: &FockState) -> Result<OutputDistribution> {
    let m = require_unitary(u)?;
    if input.modes() != m {
        return Err(Error::Shape(format!("{}-mode input for a {m}-mode network", input.modes())));
    }
    let n = input.photons();
    if n > MAX_PHOTONS {
        return Err(Error::Size(format!("{n} photons exceeds the cap of {MAX_PHOTONS}")));
    }
    let s_norm: f64 = input.occupations().iter().map(|&s| factorial(s)).product();
    let mut entries = BTreeMap::new();
    for pattern in occupation_patterns(m, n) {
        let sub = submatrix_with_repetition(u, &pattern, input.occupations())?;
        let t_norm: f64 = pattern.iter().map(|&t| factorial(t)).product();
        let p = permanent(&sub)?.norm_sqr() / (s_norm * t_norm);
        entries.insert(pattern, p);
    }
    Ok(OutputDistribution::new(entries))
}

fn check_pair(name: &str, (a, b): (usize, usize), m: usize) -> Result<()> {
    if a == b {
        return Err(Error::Domain(format!("{name} modes must differ, got ({a}, {b})")));
    }
    if a >= m || b >= m {
        return Err(Error::Domain(format!("{name} modes ({a}, {b}) out of range for {m} modes")));
    }
    Ok(())
}

/// Probability of one photon at each of `out_modes` for single photons in
/// `in_modes` with overlap `x`:
/// `x·|U_ik U_jl + U_il U_jk|² + (1−x)·(|U_ik U_jl|² + |U_il U_jk|²)`.
pub fn coincidence_probability(
    u: &ComplexMatrix,
    in_modes: (usize, usize),
    out_modes: (usize, usize),
    model: IndistinguishabilityModel,
) -> Result<f64> {
    let m = u.require_square()?;
    check_pair("input", in_modes, m)?;
    check_pair("output", out_modes, m)?;
    let ((k, l), (i, j)) = (in_modes, out_modes);
    let direct = u.get(i, k) * u.get(j, l);
    let crossed = u.get(i, l) * u.get(j, k);
    let x = model.x();
    Ok(x * (direct + crossed).norm_sqr() + (1.0 - x) * (direct.norm_sqr() + crossed.norm_sqr()))
}

/// `Pr(j | i)`: probability that the partner of a photon detected at `i`
/// lands at `j`, conditioned on the two photons reaching distinct detectors.
pub fn conditional_coincidences(
    u: &ComplexMatrix,
    in_modes: (usize, usize),
    model: IndistinguishabilityModel,
) -> Result<BTreeMap<usize, BTreeMap<usize, f64>>> {
    let m = u.require_square()?;
    let mut out = BTreeMap::new();
    for i in 0..m {
        let mut row = BTreeMap::new();
        for j in (0..m).filter(|&j| j != i) {
            row.insert(j, coincidence_probability(u, in_modes, (i, j), model)?);
        }
        let total: f64 = row.values().sum();
        if total <= 1e-15 {
            return Err(Error::UndefinedConditional(i));
        }
        row.values_mut().for_each(|p| *p /= total);
        out.insert(i, row);
    }
    Ok(out)
}

/// Detection probabilities `|U_{j,input}|²` of a single photon.
pub fn singles_distribution(u: &ComplexMatrix, input_mode: usize) -> Result<Vec<f64>> {
    let m = u.require_square()?;
    if input_mode >= m {
        return Err(Error::Domain(format!("input mode {input_mode} out of range for {m} modes")));
    }
    Ok((0..m).map(|j| u.get(j, input_mode).norm_sqr()).collect())
}

/// `(P(x=0) − P(x)) / P(x=0)` for the chosen coincidence.
///
/// Positive values are a dip below the classical rate, negative values a
/// peak above it.
pub fn hom_visibility(
    u: &ComplexMatrix,
    in_modes: (usize, usize),
    out_modes: (usize, usize),
    model: IndistinguishabilityModel,
) -> Result<f64> {
    let classical = coincidence_probability(u, in_modes, out_modes, IndistinguishabilityModel::DISTINGUISHABLE)?;
    if classical <= 1e-15 {
        return Err(Error::UndefinedVisibility);
    }
    let p = coincidence_probability(u, in_modes, out_modes, model)?;
    Ok((classical - p) / classical)
}
