mod common;

use std::f64::consts::PI;

use common::angle_gap;
use hadamard_core::circuit::h4;
use hadamard_core::experiment::{
    analyze_fringes, analyze_singles, fit_fringe, pair_trace, residual_phase_amplitude, simulate_sweep, singles_trace,
    subtract_accidentals, CountRecord, EfficiencyModulation, SweepConfig, PAIRS, SUPPRESSED_PAIRS,
};
use hadamard_core::interference::{coincidence_probability, conditional_coincidences, IndistinguishabilityModel};
use proptest::prelude::*;

fn noiseless_trace(x: f64, pair: (usize, usize), points: usize) -> Vec<(f64, f64)> {
    let model = IndistinguishabilityModel::new(x).unwrap();
    (0..points)
        .map(|k| {
            let theta = -PI + 2.0 * PI * k as f64 / points as f64;
            (theta, coincidence_probability(&h4(theta), (0, 1), pair, model).unwrap())
        })
        .collect()
}

#[test]
fn poisson_fringes_converge_to_cosine_law() {
    let rate = 1e6;
    let config = SweepConfig::ideal(SweepConfig::default_grid(64), rate, 0.0, 11);
    let records = simulate_sweep(&config).unwrap();
    let bound = 5.0 / rate.sqrt();
    for r in &records {
        let analytic = conditional_coincidences(
            &hadamard_core::circuit::physical_unitary(r.alpha, [0.0; 3]),
            (0, 1),
            IndistinguishabilityModel::INDISTINGUISHABLE,
        )
        .unwrap();
        let n = |p: usize| r.pair_counts[p] as f64;
        // Pairs 01, 02, 03 all contain detector 0.
        let from_zero = n(0) + n(1) + n(2);
        assert!((n(0) / from_zero - analytic[&0][&1]).abs() < bound);
        assert!((n(2) / from_zero - analytic[&0][&3]).abs() < bound);
        // Pairs 02, 12, 23 contain detector 2.
        let from_two = n(1) + n(3) + n(5);
        assert!((n(5) / from_two - analytic[&2][&3]).abs() < bound);
        assert!((n(3) / from_two - analytic[&2][&1]).abs() < bound);
    }
}

#[test]
fn noiseless_visibility_equals_overlap() {
    for x in [0.0, 0.5, 0.94, 1.0] {
        for pair in [(0, 1), (0, 3), (1, 2), (2, 3)] {
            let fit = fit_fringe(&noiseless_trace(x, pair, 64)).unwrap();
            assert!((fit.visibility - x).abs() < 1e-6, "x {x} pair {pair:?}: {}", fit.visibility);
        }
    }
}

#[test]
fn fringe_extrema_sit_at_zero_and_pi() {
    let up = fit_fringe(&noiseless_trace(1.0, (0, 1), 64)).unwrap();
    assert!(angle_gap(up.phase0, 0.0, 2.0 * PI) < 1e-9);
    let down = fit_fringe(&noiseless_trace(1.0, (0, 3), 64)).unwrap();
    assert!(angle_gap(down.phase0, PI, 2.0 * PI) < 1e-9);
}

#[test]
fn subtraction_matches_offset_shift() {
    let mut config = SweepConfig::ideal(SweepConfig::default_grid(48), 2e4, 0.0, 3);
    config.accidental_rate = 50.0;
    config.x = 0.9;
    let records = simulate_sweep(&config).unwrap();
    let rate = 20.0;
    let raw = subtract_accidentals(&records, 0.0).unwrap();
    let corrected = subtract_accidentals(&records, rate).unwrap();
    for pair in 0..PAIRS.len() {
        let before = pair_trace(&raw, pair);
        assert!(before.iter().all(|&(_, y)| y > rate), "flooring would occur");
        let a = fit_fringe(&before).unwrap();
        let b = fit_fringe(&pair_trace(&corrected, pair)).unwrap();
        assert!((a.offset - rate - b.offset).abs() < 1e-9);
        assert!((a.amplitude - b.amplitude).abs() < 1e-9);
        if a.amplitude > 1.0 {
            assert!(angle_gap(a.phase0, b.phase0, 2.0 * PI) < 1e-9);
        }
    }
}

#[test]
fn subtraction_raises_visibility() {
    let mut config = SweepConfig::ideal(SweepConfig::default_grid(64), 1e5, 0.0, 5);
    config.accidental_rate = 200.0;
    let records = simulate_sweep(&config).unwrap();
    let raw = analyze_fringes(&records, 0.0).unwrap();
    let corrected = analyze_fringes(&records, config.accidental_rate).unwrap();
    assert!(corrected.mean_live_visibility > raw.mean_live_visibility);
    assert!((corrected.mean_live_visibility - 1.0).abs() < 0.01);
}

#[test]
fn suppressed_pairs_hold_only_accidentals() {
    let mut config = SweepConfig::ideal(SweepConfig::default_grid(64), 1e5, 0.0, 8);
    config.accidental_rate = 400.0;
    let records = simulate_sweep(&config).unwrap();
    let raw = subtract_accidentals(&records, 0.0).unwrap();
    for &pair in &SUPPRESSED_PAIRS {
        let trace = pair_trace(&raw, pair);
        let mean = trace.iter().map(|p| p.1).sum::<f64>() / trace.len() as f64;
        // Standard error of the mean of 64 Poisson(400) draws is 2.5.
        assert!((mean - 400.0).abs() < 12.5);
    }
}

#[test]
fn ideal_suppressed_amplitude_is_noise_sized() {
    // For pure noise the fitted amplitude is Rayleigh distributed, so about
    // 86% of runs land below twice the per-component standard error.
    let mut below = 0;
    let runs = 40;
    for seed in 0..runs {
        let mut config = SweepConfig::ideal(SweepConfig::default_grid(64), 1e5, 0.0, seed);
        config.accidental_rate = 400.0;
        let records = simulate_sweep(&config).unwrap();
        let raw = subtract_accidentals(&records, 0.0).unwrap();
        for &pair in &SUPPRESSED_PAIRS {
            let fit = fit_fringe(&pair_trace(&raw, pair)).unwrap();
            if fit.amplitude < 2.0 * fit.amplitude_stderr {
                below += 1;
            }
            assert!(fit.amplitude < 5.0 * fit.amplitude_stderr);
        }
    }
    let fraction = below as f64 / (2 * runs) as f64;
    assert!(fraction > 0.75, "only {fraction} of fits below 2 sigma");
}

#[test]
fn injected_modulation_is_recovered() {
    let mut config = SweepConfig::ideal(SweepConfig::default_grid(64), 0.0, 4e8, 21);
    config.modulation = Some(EfficiencyModulation { detector: 2, depth: 0.01, phase: 0.4 });
    let records = simulate_sweep(&config).unwrap();
    for slot in 0..2 {
        let modulated = residual_phase_amplitude(&singles_trace(&records, slot, 2)).unwrap();
        assert!((modulated - 0.01).abs() < 1e-3, "{modulated}");
        let quiet = residual_phase_amplitude(&singles_trace(&records, slot, 1)).unwrap();
        assert!(quiet < 1e-3);
    }
}

#[test]
fn zero_counts_surface_a_fit_error() {
    let records: Vec<CountRecord> =
        simulate_sweep(&SweepConfig::ideal(SweepConfig::default_grid(16), 0.0, 0.0, 1)).unwrap();
    let raw = subtract_accidentals(&records, 0.0).unwrap();
    assert!(residual_phase_amplitude(&pair_trace(&raw, 1)).is_err());
    assert!(analyze_singles(&records).is_err());
}

#[test]
fn singles_rse_near_three_percent_at_1100_counts() {
    let config = SweepConfig::ideal(SweepConfig::default_grid(128), 0.0, 4400.0, 2);
    let analysis = analyze_singles(&simulate_sweep(&config).unwrap()).unwrap();
    assert!((0.02..=0.04).contains(&analysis.mean_rse), "{}", analysis.mean_rse);
    for t in &analysis.traces {
        assert!((t.mean_counts - 1100.0).abs() < 20.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rse_scales_as_inverse_root_counts(seed in any::<u64>(), per_point in 50.0f64..5000.0) {
        let config = SweepConfig::ideal(SweepConfig::default_grid(64), 0.0, 4.0 * per_point, seed);
        let analysis = analyze_singles(&simulate_sweep(&config).unwrap()).unwrap();
        let expected = 1.0 / per_point.sqrt();
        for t in &analysis.traces {
            prop_assert!(t.rse > expected / 2.0 && t.rse < expected * 2.0, "{} vs {}", t.rse, expected);
        }
    }

    #[test]
    fn sweeps_are_deterministic(seed in any::<u64>()) {
        let config = SweepConfig::ideal(SweepConfig::default_grid(8), 1e3, 1e3, seed);
        prop_assert_eq!(simulate_sweep(&config).unwrap(), simulate_sweep(&config).unwrap());
    }
}
