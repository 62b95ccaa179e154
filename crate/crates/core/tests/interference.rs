mod common;

use std::f64::consts::PI;

use common::brute_force_evolve;
use hadamard_core::circuit::{beamsplitter_matrix, h4, physical_unitary};
use hadamard_core::interference::{
    coincidence_probability, conditional_coincidences, evolve, occupation_patterns, singles_distribution, FockState,
    IndistinguishabilityModel,
};
use hadamard_core::random::{haar_unitary, seeded_rng};
use proptest::prelude::*;

fn theta_grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |k| -PI + 2.0 * PI * k as f64 / points as f64)
}

fn random_input(modes: usize, photons: usize, code: u64) -> FockState {
    let mut occ = vec![0; modes];
    let mut c = code;
    for _ in 0..photons {
        occ[(c % modes as u64) as usize] += 1;
        c /= modes as u64;
    }
    FockState::new(occ)
}

#[test]
fn beamsplitter_hom_matches_oracle() {
    let bs = beamsplitter_matrix(0.5).unwrap();
    let input = FockState::new(vec![1, 1]);
    let a = evolve(&bs, &input).unwrap();
    let b = brute_force_evolve(&bs, &input);
    assert!(a.max_abs_diff(&b) < 1e-12);
}

#[test]
fn h4_two_photon_patterns_match_oracle() {
    let input = FockState::new(vec![1, 1, 0, 0]);
    let u = h4(0.7);
    let a = evolve(&u, &input).unwrap();
    assert_eq!(a.len(), 10);
    assert!(a.max_abs_diff(&brute_force_evolve(&u, &input)) < 1e-12);
}

#[test]
fn h4_family_matches_oracle_on_grid() {
    for theta in theta_grid(16) {
        let u = h4(theta);
        for occ in [vec![1, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 1, 0, 2], vec![1, 1, 1, 0]] {
            let input = FockState::new(occ);
            let d = evolve(&u, &input).unwrap();
            assert!(d.max_abs_diff(&brute_force_evolve(&u, &input)) < 1e-12);
        }
    }
}

#[test]
fn suppression_law_and_bunching() {
    let input = FockState::new(vec![1, 1, 0, 0]);
    for theta in theta_grid(16) {
        let d = evolve(&h4(theta), &input).unwrap();
        assert!(d.get(&[1, 0, 1, 0]) < 1e-12);
        assert!(d.get(&[0, 1, 0, 1]) < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-12);
        let bunched: f64 = (0..4)
            .map(|k| {
                let mut p = vec![0; 4];
                p[k] = 2;
                d.get(&p)
            })
            .sum();
        assert!((bunched - 0.5).abs() < 1e-12);
    }
}

#[test]
fn coincidence_formula_agrees_with_evolve_at_unit_overlap() {
    let input = FockState::new(vec![1, 1, 0, 0]);
    let one = IndistinguishabilityModel::INDISTINGUISHABLE;
    for theta in theta_grid(16) {
        let u = h4(theta);
        let d = brute_force_evolve(&u, &input);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut p = vec![0; 4];
                p[i] = 1;
                p[j] = 1;
                let direct = coincidence_probability(&u, (0, 1), (i, j), one).unwrap();
                assert!((direct - d.get(&p)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn fringe_visibility_equals_overlap() {
    for x in [0.0, 0.3, 0.5, 0.94, 1.0] {
        let model = IndistinguishabilityModel::new(x).unwrap();
        let max = coincidence_probability(&h4(0.0), (0, 1), (0, 1), model).unwrap();
        let min = coincidence_probability(&h4(PI), (0, 1), (0, 1), model).unwrap();
        assert!((max - (1.0 + x) / 8.0).abs() < 1e-15);
        assert!((min - (1.0 - x) / 8.0).abs() < 1e-15);
        assert!(((max - min) / (max + min) - x).abs() < 1e-12);
    }
}

#[test]
fn conditional_branches_follow_cosine() {
    let one = IndistinguishabilityModel::INDISTINGUISHABLE;
    for theta in theta_grid(64) {
        let c = conditional_coincidences(&h4(theta), (0, 1), one).unwrap();
        let (plus, minus) = ((1.0 + theta.cos()) / 2.0, (1.0 - theta.cos()) / 2.0);
        assert!((c[&0][&1] - plus).abs() < 1e-12);
        assert!((c[&0][&3] - minus).abs() < 1e-12);
        assert!((c[&2][&3] - plus).abs() < 1e-12);
        assert!((c[&2][&1] - minus).abs() < 1e-12);
        assert!(c[&0][&2].abs() < 1e-12 && c[&1][&3].abs() < 1e-12);
        for row in c.values() {
            assert!((row.values().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn physical_singles_are_flat() {
    for k in 0..64 {
        let u = physical_unitary(0.1 * k as f64, [0.0; 3]);
        for input in [0, 1] {
            for p in singles_distribution(&u, input).unwrap() {
                assert!((p - 0.25).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn pattern_count_is_multiset_coefficient() {
    assert_eq!(occupation_patterns(6, 3).len(), 56);
    assert_eq!(occupation_patterns(5, 4).len(), 70);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn random_networks_match_oracle(seed in any::<u64>(), modes in 2usize..=6, photons in 1usize..=3, code in any::<u64>()) {
        let u = haar_unitary(modes, &mut seeded_rng(seed));
        let input = random_input(modes, photons, code);
        let d = evolve(&u, &input).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-9);
        prop_assert!(d.iter().all(|(_, &p)| p >= 0.0));
        prop_assert!(d.max_abs_diff(&brute_force_evolve(&u, &input)) <= 1e-9);
    }
}
