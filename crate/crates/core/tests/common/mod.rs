//! Independent reference implementations used only by the tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hadamard_core::complex::{ComplexMatrix, C0, C1};
use hadamard_core::interference::{FockState, OutputDistribution};
use num_complex::Complex64;

/// Permanent as the plain sum over all permutations. O(n!·n); n ≤ 8.
pub fn naive_permanent(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    assert_eq!(n, m.cols());
    assert!(n <= 8, "naive permanent is limited to n <= 8");
    if n == 0 {
        return C1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = C0;
    permute(&mut perm, 0, &mut |p| {
        total += p.iter().enumerate().map(|(i, &j)| m.get(i, j)).product::<Complex64>();
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Output distribution by expanding `Π_a (Σ_j U_{j,k_a} a_j†)|0⟩` over every
/// assignment of photons to output modes. O(mⁿ); n ≤ 4, m ≤ 6.
pub fn brute_force_evolve(u: &ComplexMatrix, input: &FockState) -> OutputDistribution {
    let m = u.rows();
    let n = input.photons();
    assert!(n <= 4 && m <= 6, "brute-force oracle is limited to n <= 4, m <= 6");
    let sources: Vec<usize> =
        input.occupations().iter().enumerate().flat_map(|(mode, &k)| std::iter::repeat_n(mode, k)).collect();
    let mut amps: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    let total = m.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut pattern = vec![0usize; m];
        let mut amp = C1;
        for &src in &sources {
            let dst = c % m;
            c /= m;
            pattern[dst] += 1;
            amp *= u.get(dst, src);
        }
        *amps.entry(pattern).or_insert(C0) += amp;
    }
    let s_norm: f64 = input.occupations().iter().map(|&s| factorial(s)).product();
    let entries = amps
        .into_iter()
        .map(|(pattern, amp)| {
            let t_norm: f64 = pattern.iter().map(|&t| factorial(t)).product();
            let p = amp.norm_sqr() * t_norm / s_norm;
            (pattern, p)
        })
        .collect();
    OutputDistribution::new(entries)
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / r, v[1] / r, v[2] / r]
}

/// Points along the great-circle arc from `a` to `b` (excluding `b`).
fn arc(a: [f64; 3], b: [f64; 3], steps: usize) -> Vec<[f64; 3]> {
    (0..steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            normalize([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])])
        })
        .collect()
}

/// Signed area enclosed by a geodesic polygon, by integrating
/// `(1 − cos ϑ) dφ` along its boundary in polar coordinates about `axis`.
///
/// By Stokes' theorem this is the surface integral of the area element over
/// the region to the left of the boundary, modulo 4π. `axis` must not lie on
/// the boundary. Consecutive vertices must not be antipodal.
pub fn solid_angle_by_integration(vertices: &[[f64; 3]], axis: [f64; 3], steps_per_edge: usize) -> f64 {
    let z = normalize(axis);
    let helper = if z[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let proj = dot(helper, z);
    let x = normalize([helper[0] - proj * z[0], helper[1] - proj * z[1], helper[2] - proj * z[2]]);
    let y = [z[1] * x[2] - z[2] * x[1], z[2] * x[0] - z[0] * x[2], z[0] * x[1] - z[1] * x[0]];

    let mut pts = Vec::new();
    for k in 0..vertices.len() {
        let next = vertices[(k + 1) % vertices.len()];
        pts.extend(arc(vertices[k], next, steps_per_edge));
    }
    pts.push(pts[0]);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let phi_p = dot(p, y).atan2(dot(p, x));
        let phi_q = dot(q, y).atan2(dot(q, x));
        let mut dphi = phi_q - phi_p;
        if dphi > std::f64::consts::PI {
            dphi -= std::f64::consts::TAU;
        } else if dphi < -std::f64::consts::PI {
            dphi += std::f64::consts::TAU;
        }
        let mid = normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]);
        total += (1.0 - dot(mid, z)) * dphi;
    }
    total
}

/// Difference of two angles reduced into `(−π, π]`, as a magnitude.
pub fn angle_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Closed geodesic polygon sampled with `steps_per_edge` points per edge,
/// as Jones states. The closing vertex is not repeated.
pub fn geodesic_loop(vertices: &[[f64; 3]], steps_per_edge: usize) -> hadamard_core::polarization::SpherePath {
    use hadamard_core::polarization::{JonesVector, SpherePath};
    let mut states = Vec::new();
    for k in 0..vertices.len() {
        let next = vertices[(k + 1) % vertices.len()];
        for p in arc(vertices[k], next, steps_per_edge) {
            states.push(JonesVector::from_stokes(p).unwrap());
        }
    }
    SpherePath::from_states(states)
}

/// Stokes vectors of the lune `R → P(α) → L → H`, with `P(α)` on the equator
/// at longitude `4α`.
pub fn lune(alpha: f64) -> Vec<[f64; 3]> {
    let (s, c) = (4.0 * alpha).sin_cos();
    vec![[0.0, 0.0, -1.0], [c, s, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
}
