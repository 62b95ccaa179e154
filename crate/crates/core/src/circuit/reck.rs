//! Triangular (Reck) decomposition of a unitary into beamsplitters and phases.

use num_complex::Complex64;
use serde::Serialize;

use super::{circuit_unitary, CircuitElement, ModeCircuit};
use crate::complex::{is_unitary, ComplexMatrix, Tolerance, CI};
use crate::error::{Error, Result};

/// Entries smaller than this are treated as already eliminated.
const NEGLIGIBLE: f64 = 1e-14;

/// Beamsplitter mesh plus output phases.
///
/// `elements` act in order, then mode `k` picks up `residual_phases[k]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshPlan {
    pub modes: usize,
    pub elements: Vec<CircuitElement>,
    pub residual_phases: Vec<f64>,
}

impl MeshPlan {
    pub fn beamsplitter_count(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, CircuitElement::Beamsplitter { .. })).count()
    }

    /// The plan as a circuit, with the residual phases appended.
    pub fn to_circuit(&self) -> Result<ModeCircuit> {
        let mut elements = self.elements.clone();
        elements.extend(self.residual_phases.iter().enumerate().map(|(k, &phi)| CircuitElement::phase(k, phi)));
        ModeCircuit::new(self.modes, elements)
    }
}

/// Decomposes `u` by nulling its lower triangle row by row from the bottom.
///
/// Entry `(i, j)` is removed by a two-mode block on modes `j, j+1` made of a
/// phase on mode `j` followed by a beamsplitter. At most `n(n−1)/2`
/// beamsplitters are used; entries that are already zero are skipped.
pub fn reck_decompose(u: &ComplexMatrix, tol: Tolerance) -> Result<MeshPlan> {
    let n = u.require_square()?;
    if !is_unitary(u, tol)? {
        return Err(Error::Domain(format!("matrix is not unitary within {:e}", tol.eps())));
    }
    let mut w = u.clone();
    let mut elements = Vec::new();
    for i in (1..n).rev() {
        for j in 0..i {
            let x = w.get(i, j);
            if x.norm() <= NEGLIGIBLE {
                continue;
            }
            let y = w.get(i, j + 1);
            let r = x.norm_sqr() / (x.norm_sqr() + y.norm_sqr());
            let phi = x.arg() - y.arg() - std::f64::consts::FRAC_PI_2;
            // Right-multiply by the inverse of BS(r)·Phase_j(φ).
            let (st, sr) = ((1.0 - r).sqrt(), r.sqrt());
            let e = Complex64::from_polar(1.0, -phi);
            let inv = [[e * st, -CI * e * sr], [-CI * sr, Complex64::new(st, 0.0)]];
            w.mix_cols(j, j + 1, inv);
            elements.push(CircuitElement::phase(j, phi));
            elements.push(CircuitElement::bs(j, j + 1, r));
        }
    }
    let residual_phases = (0..n).map(|k| w.get(k, k).arg()).collect();
    Ok(MeshPlan { modes: n, elements, residual_phases })
}

/// Unitary implemented by `plan`.
pub fn recompose(plan: &MeshPlan) -> Result<ComplexMatrix> {
    if plan.residual_phases.len() != plan.modes {
        return Err(Error::Shape(format!("{} residual phases for {} modes", plan.residual_phases.len(), plan.modes)));
    }
    circuit_unitary(&plan.to_circuit()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::h4;
    use crate::random::{haar_unitary, seeded_rng};

    #[test]
    fn identity_gives_empty_plan() {
        let plan = reck_decompose(&ComplexMatrix::identity(4), Tolerance::DEFAULT).unwrap();
        assert!(plan.elements.is_empty());
        assert_eq!(plan.residual_phases, vec![0.0; 4]);
        assert_eq!(recompose(&plan).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn two_mode_case_uses_one_beamsplitter() {
        let u = haar_unitary(2, &mut seeded_rng(3));
        let plan = reck_decompose(&u, Tolerance::DEFAULT).unwrap();
        assert_eq!(plan.beamsplitter_count(), 1);
        assert!(recompose(&plan).unwrap().max_abs_diff(&u).unwrap() < 1e-12);
    }

    #[test]
    fn h4_round_trip() {
        let plan = reck_decompose(&h4(1.0), Tolerance::DEFAULT).unwrap();
        assert!(plan.beamsplitter_count() <= 6);
        assert!(recompose(&plan).unwrap().max_abs_diff(&h4(1.0)).unwrap() < 1e-9);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(reck_decompose(&m, Tolerance::DEFAULT), Err(Error::Domain(_))));
        let bad = MeshPlan { modes: 3, elements: vec![], residual_phases: vec![0.0] };
        assert!(recompose(&bad).is_err());
    }

    #[test]
    fn empty_plan_is_identity() {
        let plan = MeshPlan { modes: 3, elements: vec![], residual_phases: vec![0.0; 3] };
        assert_eq!(recompose(&plan).unwrap(), ComplexMatrix::identity(3));
    }
}
