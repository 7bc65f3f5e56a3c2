//! Dormand-Prince 5(4) embedded Runge-Kutta pair for planar autonomous systems.

pub type Vec2 = [f64; 2];

// Butcher tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, coefficients of the embedded error estimate
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy(y: Vec2, terms: &[(f64, Vec2)], h: f64) -> Vec2 {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One Dormand-Prince step. Returns the fifth-order solution and the error vector.
#[inline]
pub fn dp45_step<F: Fn(Vec2) -> Vec2>(f: &F, y: Vec2, h: f64) -> (Vec2, Vec2) {
    let k1 = f(y);
    let k2 = f(axpy(y, &[(A21, k1)], h));
    let k3 = f(axpy(y, &[(A31, k1), (A32, k2)], h));
    let k4 = f(axpy(y, &[(A41, k1), (A42, k2), (A43, k3)], h));
    let k5 = f(axpy(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], h));
    let k6 = f(axpy(
        y,
        &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        h,
    ));
    let y5 = axpy(y, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)], h);
    let k7 = f(y5);
    let err = [
        h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0]),
        h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1]),
    ];
    (y5, err)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rtol: 1e-9,
            atol: 1e-9,
            h_init: 1e-3,
            h_min: 1e-14,
        }
    }
}

#[inline]
pub fn error_norm(y0: Vec2, y1: Vec2, err: Vec2, ctl: &StepControl) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        let scale = ctl.atol + ctl.rtol * y0[i].abs().max(y1[i].abs());
        worst = worst.max((err[i] / scale).abs());
    }
    worst
}

/// What the step observer wants after an accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DriveEnd {
    Stopped,
    StepUnderflow,
    MaxSteps,
}

/// Adaptive driver. `h_max` bounds each step given the current state; `observe`
/// sees every accepted step as `(from, to, h)`.
pub fn drive<F, H, O>(
    f: &F,
    y0: Vec2,
    ctl: &StepControl,
    max_steps: usize,
    h_max: H,
    mut observe: O,
) -> DriveEnd
where
    F: Fn(Vec2) -> Vec2,
    H: Fn(Vec2) -> f64,
    O: FnMut(Vec2, Vec2, f64) -> Control,
{
    let mut y = y0;
    let mut h = ctl.h_init.min(h_max(y));
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < max_steps && attempts < 20 * max_steps {
        attempts += 1;
        let cap = h_max(y);
        if h > cap {
            h = cap;
        }
        if h.is_nan() || h < ctl.h_min {
            return DriveEnd::StepUnderflow;
        }
        let (y1, err) = dp45_step(f, y, h);
        let norm = error_norm(y, y1, err, ctl);
        if !norm.is_finite() {
            h *= 0.25;
            continue;
        }
        if norm <= 1.0 {
            accepted += 1;
            if observe(y, y1, h) == Control::Stop {
                return DriveEnd::Stopped;
            }
            y = y1;
            let grow = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= grow;
        } else {
            h *= (0.9 * norm.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    DriveEnd::MaxSteps
}

/// Unit-speed field `sign * f / |f|`; zero where `f` vanishes.
#[inline]
pub fn unit_direction(v: Vec2, sign: f64) -> Vec2 {
    let n = v[0].hypot(v[1]);
    if n == 0.0 || !n.is_finite() {
        [0.0, 0.0]
    } else {
        [sign * v[0] / n, sign * v[1] / n]
    }
}
