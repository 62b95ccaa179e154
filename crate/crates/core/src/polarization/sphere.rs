//! Poincaré-sphere paths, Pancharatnam phases and spherical solid angles.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::jones::{retarder_matrix, JonesVector};
use super::rails::RailProgram;
use crate::complex::{unit_phase, C1};
use crate::error::{Error, Result};

/// Overlap below which two consecutive states count as orthogonal.
pub const MIN_OVERLAP: f64 = 1e-6;

/// Default number of partial-retarder steps per plate.
pub const DEFAULT_STEPS_PER_PLATE: usize = 256;

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// A discretized polarization trajectory together with its Stokes image.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePath {
    states: Vec<JonesVector>,
    points: Vec<[f64; 3]>,
}

impl SpherePath {
    pub fn from_states(states: Vec<JonesVector>) -> Self {
        let points = states.iter().map(JonesVector::stokes).collect();
        SpherePath { states, points }
    }

    pub fn states(&self) -> &[JonesVector] {
        &self.states
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &JonesVector {
        &self.states[0]
    }

    pub fn last(&self) -> &JonesVector {
        self.states.last().expect("non-empty path")
    }

    /// Total great-circle length of the path on the unit sphere.
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| angle_between(&w[0], &w[1])).sum()
    }

    /// Appends a state (and its Stokes point).
    pub fn push(&mut self, state: JonesVector) {
        self.points.push(state.stokes());
        self.states.push(state);
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Great-circle angle between two unit vectors.
pub fn angle_between(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm3(&cross(a, b)).atan2(dot(a, b))
}

/// Traces `input` through `program`, splitting each plate into
/// `steps_per_plate` partial retarders `J(δ·k/steps, axis)`.
///
/// The result has `1 + plates·steps_per_plate` states. Partial steps are
/// applied to the state at the start of each plate, so round-off does not
/// accumulate within a plate.
pub fn trace_path(program: &RailProgram, alpha: f64, input: JonesVector, steps_per_plate: usize) -> Result<SpherePath> {
    if steps_per_plate == 0 {
        return Err(Error::Domain("steps_per_plate must be at least 1".into()));
    }
    let mut path = SpherePath::from_states(vec![input]);
    let mut start = input;
    for spec in program.resolve(alpha) {
        let delta = spec.kind.retardance();
        for k in 1..=steps_per_plate {
            let frac = k as f64 / steps_per_plate as f64;
            path.push(start.transformed(&retarder_matrix(delta * frac, spec.axis)));
        }
        start = *path.last();
    }
    Ok(path)
}

/// Unit-modulus product of the consecutive overlaps of `states`, with the
/// closing overlap `⟨ψ_N|ψ_0⟩` when `close` is set.
fn bargmann_product(states: &[JonesVector], close: bool) -> Result<Complex64> {
    let mut prod = C1;
    let n = states.len();
    let links = if close && n > 1 { n } else { n.saturating_sub(1) };
    for k in 0..links {
        let next = (k + 1) % n;
        let overlap = states[k].inner(&states[next]);
        if overlap.norm() <= MIN_OVERLAP {
            return Err(Error::DegenerateStep { index: k, overlap: overlap.norm() });
        }
        prod *= unit_phase(overlap);
    }
    Ok(prod)
}

/// Discrete Pancharatnam phase `−arg Π_k ⟨ψ_k|ψ_{k+1}⟩`, in `(−π, π]`.
///
/// With `close` set the product includes the closing overlap `⟨ψ_N|ψ_0⟩`,
/// making the result gauge invariant.
pub fn pancharatnam_phase(path: &SpherePath, close: bool) -> Result<f64> {
    let prod = bargmann_product(path.states(), close)?;
    Ok(wrap_angle(-prod.arg()))
}

/// Signed spherical excess of the geodesic triangle `(a, b, c)`, from
/// `tan(E/2) = a·(b×c) / (1 + a·b + b·c + c·a)`.
fn triangle_excess(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let num = dot(a, &cross(b, c));
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

/// Apex for the triangle fan: the candidate direction whose antipode is
/// farthest from every vertex, so no fan triangle is degenerate.
fn fan_apex(vertices: &[[f64; 3]]) -> [f64; 3] {
    let s = 1.0 / 3f64.sqrt();
    let mut candidates = vec![vertices[0]];
    let sum = vertices.iter().fold([0.0; 3], |acc, v| [acc[0] + v[0], acc[1] + v[1], acc[2] + v[2]]);
    let r = norm3(&sum);
    if r > 1e-6 {
        candidates.push([sum[0] / r, sum[1] / r, sum[2] / r]);
    }
    for sign in [1.0, -1.0] {
        candidates.extend([[sign, 0.0, 0.0], [0.0, sign, 0.0], [0.0, 0.0, sign]]);
        for (y, z) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            candidates.push([sign * s, y * s, z * s]);
        }
    }
    let clearance = |q: &[f64; 3]| vertices.iter().map(|v| 1.0 + dot(q, v)).fold(f64::INFINITY, f64::min);
    candidates.into_iter().max_by(|p, q| clearance(p).total_cmp(&clearance(q))).expect("non-empty candidate list")
}

/// Signed solid angle enclosed by the geodesic polygon through `vertices`.
///
/// Counter-clockwise circulation seen from outside the sphere is positive.
/// The polygon is fanned into signed triangles from an apex that is not
/// antipodal to any vertex. The enclosed area of a closed curve is only
/// defined modulo 4π, so the result is reported in `(−2π, 2π]`: a small
/// counter-clockwise loop gives its area, a clockwise one minus its area.
pub fn solid_angle(vertices: &[[f64; 3]]) -> Result<f64> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::Domain(format!("a spherical polygon needs at least 3 vertices, got {n}")));
    }
    for (k, v) in vertices.iter().enumerate() {
        if (norm3(v) - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("vertex {k} is not a unit vector (|v| = {})", norm3(v))));
        }
    }
    for k in 0..n {
        let next = (k + 1) % n;
        if dot(&vertices[k], &vertices[next]) < -1.0 + 1e-12 {
            return Err(Error::DegenerateGeodesic { index: k, next });
        }
    }
    let apex = fan_apex(vertices);
    let total: f64 = (0..n).map(|k| triangle_excess(&apex, &vertices[k], &vertices[(k + 1) % n])).sum();
    let sphere = 2.0 * TAU;
    let reduced = total.rem_euclid(sphere);
    Ok(if reduced > TAU { reduced - sphere } else { reduced })
}

/// Largest per-step departure from parallel transport.
///
/// For each step the imaginary part of `⟨ψ_k|ψ_{k+1} − ψ_k⟩` is divided by
/// the Hilbert-space length `‖ψ_{k+1} − ψ_k‖` of the step. Zero means the
/// step keeps the state in phase with its predecessor; a pure phase
/// evolution with no motion on the sphere scores close to one. Steps of zero
/// length are ignored.
pub fn parallel_transport_residual(path: &SpherePath) -> Result<f64> {
    if path.len() < 2 {
        return Err(Error::Domain("transport residual needs a path of at least two states".into()));
    }
    let mut worst: f64 = 0.0;
    for w in path.states().windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let dh = b.h - a.h;
        let dv = b.v - a.v;
        let step = (dh.norm_sqr() + dv.norm_sqr()).sqrt();
        if step < 1e-15 {
            continue;
        }
        let proj = a.h.conj() * dh + a.v.conj() * dv;
        worst = worst.max(proj.im.abs() / step);
    }
    Ok(worst)
}

/// Summary of the geometric phase picked up along one rail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricPhaseReport {
    /// Pancharatnam phase of the closed traversal, radians in `(−π, π]`.
    pub pancharatnam: f64,
    /// Solid angle of the closed traversal, steradians in `[0, 4π)`.
    pub solid_angle: f64,
    /// [`parallel_transport_residual`] of the traced path.
    pub dynamical_residual: f64,
    /// Whether the endpoints were orthogonal and the loop was closed through
    /// the reference state.
    pub orthogonal_endpoints: bool,
}

/// Midpoint reference used to close a path whose endpoints are orthogonal.
///
/// The two endpoints are brought to their canonical gauge and summed; the
/// result overlaps both equally. For `|V⟩ → |H⟩` this is `|D⟩`.
pub fn reference_closure(start: &JonesVector, end: &JonesVector) -> Result<JonesVector> {
    let (a, b) = (start.canonical(), end.canonical());
    JonesVector::new(a.h + b.h, a.v + b.v)
}

/// Traces `input` through `program` and measures the geometric phase.
///
/// If the endpoints are not orthogonal the path is closed directly by the
/// geodesic back to the start. When they are orthogonal the phase of the
/// output is only defined against a reference, so the loop is closed through
/// [`reference_closure`]; the reported phase is then the phase of the output
/// relative to the canonical gauge of its ray. In both cases
/// `pancharatnam ≡ −solid_angle/2 (mod 2π)`.
pub fn geometric_phase_report(
    program: &RailProgram,
    input: JonesVector,
    alpha: f64,
    steps_per_plate: usize,
) -> Result<GeometricPhaseReport> {
    let path = trace_path(program, alpha, input, steps_per_plate)?;
    let dynamical_residual = parallel_transport_residual(&path)?;
    let orthogonal = path.last().inner(path.first()).norm() <= MIN_OVERLAP;
    let mut closed = path.clone();
    if orthogonal {
        closed.push(reference_closure(path.first(), path.last())?);
    }
    let pancharatnam = pancharatnam_phase(&closed, true)?;
    let solid = solid_angle(closed.points())?.rem_euclid(2.0 * TAU);
    Ok(GeometricPhaseReport { pancharatnam, solid_angle: solid, dynamical_residual, orthogonal_endpoints: orthogonal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::rails::Rail;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn empty_program_gives_single_point() {
        let path = trace_path(&RailProgram::new(vec![]), 0.0, JonesVector::horizontal(), 8).unwrap();
        assert_eq!(path.len(), 1);
        assert!(trace_path(&RailProgram::preset(Rail::Top), 0.0, JonesVector::horizontal(), 0).is_err());
    }

    #[test]
    fn path_length_and_unit_points() {
        let path = trace_path(&RailProgram::preset(Rail::Bottom), 0.3, JonesVector::vertical(), 16).unwrap();
        assert_eq!(path.len(), 1 + 6 * 16);
        for (s, p) in path.states().iter().zip(path.points()) {
            assert!((norm3(p) - 1.0).abs() < 1e-12);
            assert_eq!(*p, s.stokes());
        }
    }

    #[test]
    fn constant_path_has_zero_phase_and_residual() {
        let path = SpherePath::from_states(vec![JonesVector::diagonal(); 5]);
        assert_eq!(pancharatnam_phase(&path, true).unwrap(), 0.0);
        assert_eq!(parallel_transport_residual(&path).unwrap(), 0.0);
    }

    #[test]
    fn orthogonal_step_is_degenerate() {
        let path = SpherePath::from_states(vec![JonesVector::horizontal(), JonesVector::vertical()]);
        assert!(matches!(pancharatnam_phase(&path, false), Err(Error::DegenerateStep { index: 0, .. })));
    }

    #[test]
    fn octant_solid_angle() {
        let v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((solid_angle(&v).unwrap() - FRAC_PI_2).abs() < 1e-14);
        let rev = [v[2], v[1], v[0]];
        assert!((solid_angle(&rev).unwrap() + FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn out_and_back_is_zero() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [[1.0, 0.0, 0.0], [s, s, 0.0], [0.0, 1.0, 0.0], [s, s, 0.0]];
        assert!(solid_angle(&v).unwrap().abs() < 1e-14);
    }

    #[test]
    fn antipodal_edge_is_rejected() {
        let v = [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(solid_angle(&v), Err(Error::DegenerateGeodesic { index: 0, next: 1 })));
        assert!(solid_angle(&v[..2]).is_err());
    }

    #[test]
    fn eigenstate_shows_dynamical_phase() {
        let prog = RailProgram::new(vec![crate::polarization::rails::Plate {
            kind: crate::polarization::jones::RetarderKind::Half,
            axis: crate::polarization::rails::PlateAxis::Fixed(0.0),
        }]);
        let path = trace_path(&prog, 0.0, JonesVector::horizontal(), 64).unwrap();
        assert!(path.arc_length() < 1e-12);
        assert!(parallel_transport_residual(&path).unwrap() > 0.99);
    }
}
