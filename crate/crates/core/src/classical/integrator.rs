//! Dormand-Prince 5(4) with local extrapolation and max-norm error control.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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

// 5th-order weights (also row 7 of the tableau, FSAL)
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// 5th minus 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MAX_GROWTH: f64 = 5.0;
const MAX_SHRINK: f64 = 0.2;

#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Largest accepted local error estimate, relative to max(1, |y|).
    pub max_local_error: f64,
}

pub struct Settings {
    /// Local relative error bound per accepted step.
    pub tol: f64,
    pub max_steps: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrate `dy/ds = rhs(s, y)` from `s0` to `s_end` (either direction),
/// landing exactly on every checkpoint between them. `observe` is called
/// with the initial state and after every accepted step.
pub fn integrate<const N: usize, F, O>(
    rhs: F,
    s0: f64,
    y0: [f64; N],
    s_end: f64,
    checkpoints: &[f64],
    settings: &Settings,
    mut observe: O,
) -> Result<IntegratorStats>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    let dir = if s_end >= s0 { 1.0 } else { -1.0 };
    let mut stops: Vec<f64> = checkpoints
        .iter()
        .copied()
        .filter(|c| (c - s0) * dir > 0.0 && (s_end - c) * dir > 0.0)
        .collect();
    stops.sort_by(|a, b| (a * dir).total_cmp(&(b * dir)));
    stops.push(s_end);

    let mut stats = IntegratorStats::default();
    let mut s = s0;
    let mut y = y0;
    let mut k1 = rhs(s, &y);
    stats.evaluations += 1;
    observe(s, &y);

    let span = (s_end - s0).abs();
    let mut h = dir * (span * 1e-3).max(f64::MIN_POSITIVE) * settings.tol.powf(0.2).min(1.0);
    let mut next_stop = 0;

    while next_stop < stops.len() {
        if stats.accepted + stats.rejected >= settings.max_steps {
            return Err(Error::Integration {
                t: s,
                steps: stats.accepted,
                reason: format!("step budget of {} exhausted", settings.max_steps),
            });
        }
        let target = stops[next_stop];
        let remaining = target - s;
        let mut landing = false;
        if (h.abs()) >= remaining.abs() {
            h = remaining;
            landing = true;
        }

        let k2 = rhs(s + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(s + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(s + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            s + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            s + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(s + h, &y_new);
        stats.evaluations += 6;

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = 1.0f64.max(y[i].abs()).max(y_new[i].abs());
            err = err.max(e.abs() / scale);
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration {
                t: s,
                steps: stats.accepted,
                reason: "non-finite state".into(),
            });
        }

        let ratio = err / settings.tol;
        let factor = if ratio == 0.0 {
            MAX_GROWTH
        } else {
            (SAFETY * ratio.powf(-0.2)).clamp(MAX_SHRINK, MAX_GROWTH)
        };

        if ratio <= 1.0 {
            stats.accepted += 1;
            stats.max_local_error = stats.max_local_error.max(err);
            s = if landing { target } else { s + h };
            y = y_new;
            k1 = k7;
            observe(s, &y);
            if landing {
                next_stop += 1;
            }
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= factor.min(1.0);
            if h.abs() <= 1e-14 * s.abs().max(span) {
                return Err(Error::Integration {
                    t: s,
                    steps: stats.accepted,
                    reason: format!("step size collapsed to {h:e} (error ratio {ratio:e})"),
                });
            }
        }
    }
    Ok(stats)
}
