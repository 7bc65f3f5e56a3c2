use serde::{Deserialize, Serialize};

use super::ode::{dp45_step, drive, unit_direction, Control, DriveEnd, StepControl, Vec2};
use super::{DomainU, FlowError};
use crate::polyfield::PlanarVectorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Forward,
    Backward,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationReason {
    ExitedDomain,
    ReachedSingularity,
    ArclengthBudget,
    ClosedOrbit,
    StepUnderflow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegrationSettings {
    pub rtol: f64,
    pub atol: f64,
    /// Arclength budget per time direction.
    pub max_arclength: f64,
    /// Upper bound on a single step (arclength).
    pub max_step: f64,
    /// Radius of the ball around a known singular point that ends an orbit.
    pub singular_eps: f64,
    /// Return distance that certifies a closed orbit.
    pub closure_tol: f64,
    /// Accuracy of the located boundary crossing.
    pub boundary_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        IntegrationSettings {
            rtol: 1e-9,
            atol: 1e-9,
            max_arclength: 50.0,
            max_step: 0.02,
            singular_eps: 1e-6,
            closure_tol: 1e-6,
            boundary_tol: 1e-10,
            max_steps: 2_000_000,
        }
    }
}

impl IntegrationSettings {
    fn control(&self) -> StepControl {
        StepControl {
            rtol: self.rtol,
            atol: self.atol,
            h_init: (self.max_step * 0.1).min(1e-3),
            h_min: 1e-14,
        }
    }
}

/// A trajectory clipped to the domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub vertices: Vec<[f64; 2]>,
    /// How the last vertex was reached.
    pub termination: TerminationReason,
    /// How the first vertex was reached, for two-sided orbits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_termination: Option<TerminationReason>,
    pub arclength: f64,
}

struct HalfOrbit {
    vertices: Vec<Vec2>,
    reason: TerminationReason,
    arclength: f64,
}

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn dist(a: Vec2, b: Vec2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Root of `g` along the partial step of length `s` in `[0, h]` from `from`,
/// given `g(from) < 0 <= g(step(h))`.
fn locate<F, G>(rhs: &F, from: Vec2, h: f64, g: G, tol: f64) -> (Vec2, f64)
where
    F: Fn(Vec2) -> Vec2,
    G: Fn(Vec2) -> f64,
{
    let (mut lo, mut hi) = (0.0, h);
    let mut best = dp45_step(rhs, from, h).0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let z = dp45_step(rhs, from, mid).0;
        if g(z) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
            best = z;
        }
    }
    (best, hi)
}

fn half_orbit(
    field: &PlanarVectorField,
    seed: Vec2,
    sign: f64,
    domain: &DomainU,
    singular: &[Vec2],
    s: &IntegrationSettings,
) -> HalfOrbit {
    let rhs = |z: Vec2| {
        let (a, b) = field.evaluate(z[0], z[1]);
        unit_direction([a, b], sign)
    };
    let nearest = |z: Vec2| singular.iter().map(|p| dist(*p, z)).fold(f64::INFINITY, f64::min);
    let mut vertices = vec![seed];
    if nearest(seed) <= s.singular_eps {
        return HalfOrbit {
            vertices,
            reason: TerminationReason::ReachedSingularity,
            arclength: 0.0,
        };
    }
    let tangent = rhs(seed);
    if tangent == [0.0, 0.0] {
        return HalfOrbit {
            vertices,
            reason: TerminationReason::ReachedSingularity,
            arclength: 0.0,
        };
    }
    let section = |z: Vec2| dot([z[0] - seed[0], z[1] - seed[1]], tangent);
    // closure is only tested once the orbit has left a neighbourhood of the seed
    let mut armed = false;
    let arm_radius = (100.0 * s.closure_tol).max(10.0 * s.max_step.min(1e-3));
    let mut arclength = 0.0;
    let mut reason = TerminationReason::ArclengthBudget;
    // the last step is shortened to land on the budget; `drive` takes `Fn`, so the
    // running length is shared through a cell
    let travelled = std::cell::Cell::new(0.0f64);
    let h_max = |z: Vec2| {
        let remaining = (s.max_arclength - travelled.get()).max(1e-300);
        s.max_step.min(0.5 * nearest(z).max(s.singular_eps * 0.5)).min(remaining)
    };

    let end = drive(&rhs, seed, &s.control(), s.max_steps, h_max, |from, to, h| {
        if !domain.contains(to) {
            let (z, used) = locate(&rhs, from, h, |z| if domain.contains(z) { -1.0 } else { 1.0 }, s.boundary_tol);
            let z = [
                z[0].clamp(domain.x_min(), domain.x_max()),
                z[1].clamp(domain.y_min(), domain.y_max()),
            ];
            arclength += used;
            vertices.push(z);
            reason = TerminationReason::ExitedDomain;
            return Control::Stop;
        }
        if armed && section(from) < 0.0 && section(to) >= 0.0 {
            let (z, used) = locate(&rhs, from, h, section, 1e-14);
            if dist(z, seed) < s.closure_tol && dot(rhs(z), tangent) > 0.0 {
                arclength += used;
                vertices.push(seed);
                reason = TerminationReason::ClosedOrbit;
                return Control::Stop;
            }
        }
        arclength += h;
        travelled.set(arclength);
        vertices.push(to);
        if !armed && dist(to, seed) > arm_radius {
            armed = true;
        }
        if nearest(to) <= s.singular_eps {
            reason = TerminationReason::ReachedSingularity;
            return Control::Stop;
        }
        if arclength >= s.max_arclength * (1.0 - 1e-12) {
            reason = TerminationReason::ArclengthBudget;
            return Control::Stop;
        }
        Control::Continue
    });
    match end {
        DriveEnd::Stopped => {}
        DriveEnd::StepUnderflow => reason = TerminationReason::StepUnderflow,
        DriveEnd::MaxSteps => reason = TerminationReason::ArclengthBudget,
    }
    HalfOrbit {
        vertices,
        reason,
        arclength,
    }
}

/// Integrates the arclength-normalized field from `seed`.
///
/// Orbits stop on leaving the domain, entering the `singular_eps` ball of a
/// point in `singular`, exhausting the arclength budget, or returning to the
/// seed. For [`Direction::Both`] the backward half is reversed and prepended;
/// it is skipped when the forward half already closed.
pub fn integrate(
    field: &PlanarVectorField,
    seed: [f64; 2],
    direction: Direction,
    domain: &DomainU,
    singular: &[[f64; 2]],
    settings: &IntegrationSettings,
) -> Result<Polyline, FlowError> {
    if !domain.contains(seed) {
        return Err(FlowError::SeedOutsideDomain { index: 0 });
    }
    let one = |sign| half_orbit(field, seed, sign, domain, singular, settings);
    Ok(match direction {
        Direction::Forward | Direction::Backward => {
            let sign = if direction == Direction::Forward { 1.0 } else { -1.0 };
            let h = one(sign);
            Polyline {
                vertices: h.vertices,
                termination: h.reason,
                start_termination: None,
                arclength: h.arclength,
            }
        }
        Direction::Both => {
            let fwd = one(1.0);
            if fwd.reason == TerminationReason::ClosedOrbit {
                return Ok(Polyline {
                    vertices: fwd.vertices,
                    termination: fwd.reason,
                    start_termination: None,
                    arclength: fwd.arclength,
                });
            }
            let bwd = one(-1.0);
            let mut vertices: Vec<[f64; 2]> = bwd.vertices.into_iter().rev().collect();
            vertices.extend_from_slice(&fwd.vertices[1..]);
            Polyline {
                vertices,
                termination: fwd.reason,
                start_termination: Some(bwd.reason),
                arclength: fwd.arclength + bwd.arclength,
            }
        }
    })
}

/// Time-`t` flow map of the unnormalized field (negative `t` runs backward).
/// Returns every accepted step as `(time, point)`, starting at `(0, seed)`.
pub fn flow_samples(
    field: &PlanarVectorField,
    seed: [f64; 2],
    t: f64,
    settings: &IntegrationSettings,
) -> Vec<(f64, [f64; 2])> {
    let sign = t.signum();
    let rhs = |z: Vec2| {
        let (a, b) = field.evaluate(z[0], z[1]);
        [sign * a, sign * b]
    };
    let target = t.abs();
    let mut out = vec![(0.0, seed)];
    if target == 0.0 {
        return out;
    }
    let mut now = 0.0;
    let mut ctl = settings.control();
    ctl.atol = ctl.atol.min(1e-12);
    ctl.rtol = ctl.rtol.min(1e-12);
    // h_max reads the shared clock through a cell: the driver takes `Fn`
    let clock = std::cell::Cell::new(0.0f64);
    drive(
        &rhs,
        seed,
        &ctl,
        settings.max_steps,
        |_| settings.max_step.min((target - clock.get()).max(1e-300)),
        |_, to, h| {
            now += h;
            clock.set(now);
            out.push((sign * now, to));
            if target - now <= 1e-13 * target.max(1.0) {
                Control::Stop
            } else {
                Control::Continue
            }
        },
    );
    out
}

/// Period of the closed orbit through `seed`: time of the first return to the
/// section through the seed normal to the flow.
pub fn orbit_period(
    field: &PlanarVectorField,
    seed: [f64; 2],
    max_time: f64,
    settings: &IntegrationSettings,
) -> Option<f64> {
    let rhs = |z: Vec2| {
        let (a, b) = field.evaluate(z[0], z[1]);
        [a, b]
    };
    let tangent = rhs(seed);
    if tangent == [0.0, 0.0] {
        return None;
    }
    let section = |z: Vec2| dot([z[0] - seed[0], z[1] - seed[1]], tangent);
    let mut now = 0.0;
    let mut left = false;
    let mut period = None;
    let mut ctl = settings.control();
    ctl.atol = ctl.atol.min(1e-12);
    ctl.rtol = ctl.rtol.min(1e-12);
    drive(&rhs, seed, &ctl, settings.max_steps, |_| settings.max_step, |from, to, h| {
        if left && section(from) < 0.0 && section(to) >= 0.0 {
            let (z, used) = locate(&rhs, from, h, section, 1e-15);
            if dist(z, seed) < 1e-4 {
                period = Some(now + used);
                return Control::Stop;
            }
        }
        now += h;
        if section(to) < 0.0 {
            left = true;
        }
        if now > max_time {
            Control::Stop
        } else {
            Control::Continue
        }
    });
    period
}
