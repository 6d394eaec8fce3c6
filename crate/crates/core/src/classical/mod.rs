//! Classical dynamics of a charge q passing a ring of charge Q, mass M and
//! radius R that encloses a flux line F.
//!
//! The Lagrangian is
//!
//! ```text
//! L = m v^2/2 + M R^2 Omega^2/2 + a(x) v Omega + b(x) v + Q F Omega / 2 pi
//! a(x) = q Q R^2 d / (8 pi eps0 c^2 (x^2 + d^2)^{3/2})
//! b(x) = q F d / (2 pi (x^2 + d^2))
//! ```
//!
//! and the Euler-Lagrange equations are
//!
//! ```text
//! m v' + a Omega'  = (a' Omega v + b' v) - (a' v Omega + b' v) = 0
//! a v' + M R^2 Omega' = -a' v^2
//! ```
//!
//! The flux appears in both parts of the x equation as the same product
//! b'(x) v and drops out; `QF Omega / 2 pi` is a total derivative and never
//! enters. Two first integrals follow:
//!
//! ```text
//! Omega + a(x) v / (M R^2) = Omega0
//! v^2 (1 - a^2 / (m M R^2)) = v0^2        (for Omega0 = 0)
//! ```
//!
//! The speed change is of order kappa = a(0)^2/(m M R^2), about 1e-20 for
//! electrons at d = 1 um, far below double precision on v itself. The
//! integration therefore runs on deviation variables scaled by kappa and by
//! Omega_s = a(0) v / (M R^2), in the dimensionless time s = t v / d.

mod integrator;

use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;

pub use integrator::IntegratorStats;

use crate::constants::SI;
use crate::error::{finite, positive, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const TOL_RANGE: (f64, f64) = (1e-14, 1e-6);
/// Default starting distance, in units of d.
pub const START_DISTANCE: f64 = 100.0;
/// Closest allowed starting distance, in units of d.
pub const MIN_START_DISTANCE: f64 = 50.0;
const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalParams {
    /// Incident charge (C).
    pub q: f64,
    /// Ring charge (C).
    pub big_q: f64,
    /// Incident mass (kg).
    pub m: f64,
    /// Ring mass (kg).
    pub big_m: f64,
    /// Ring radius (m).
    pub radius: f64,
    /// Impact distance (m).
    pub impact: f64,
    /// Enclosed flux (Wb).
    pub flux_wb: f64,
}

impl ClassicalParams {
    /// An electron passing an electron ring.
    pub fn electrons(radius: f64, impact: f64, flux_wb: f64) -> Self {
        Self {
            q: -SI.e,
            big_q: -SI.e,
            m: SI.m_e,
            big_m: SI.m_e,
            radius,
            impact,
            flux_wb,
        }
    }

    pub fn validate(&self) -> Result<()> {
        finite("q", self.q)?;
        finite("Q", self.big_q)?;
        positive("m", self.m)?;
        positive("M", self.big_m)?;
        positive("R", self.radius)?;
        positive("d", self.impact)?;
        finite("F", self.flux_wb)?;
        Ok(())
    }

    /// d / R; the dipole model wants this large.
    pub fn validity_ratio(&self) -> f64 {
        self.impact / self.radius
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.validity_ratio() < 10.0 {
            w.push(format!(
                "d/R = {:.3} is below 10; the dipole coupling assumes d >> R",
                self.validity_ratio()
            ));
        }
        w
    }

    fn inertia(&self) -> f64 {
        self.big_m * self.radius * self.radius
    }

    /// a(0) = q Q R^2 / (8 pi eps0 c^2 d^2).
    pub fn a0(&self) -> f64 {
        self.q * self.big_q * self.radius * self.radius
            / (8.0 * PI * SI.eps0 * SI.c * SI.c * self.impact * self.impact)
    }

    /// a(0)^2 / (m M R^2), the relative size of the speed change.
    pub fn kappa(&self) -> f64 {
        let a0 = self.a0();
        a0 * a0 / (self.m * self.inertia())
    }
}

/// a(x) = q Q R^2 d / (8 pi eps0 c^2 (x^2 + d^2)^{3/2}).
pub fn coupling_a(x: f64, p: &ClassicalParams) -> Result<f64> {
    p.validate()?;
    let x = finite("x", x)?;
    let xi = x / p.impact;
    Ok(p.a0() * shape(xi))
}

/// (1 + xi^2)^{-3/2}
fn shape(xi: f64) -> f64 {
    (1.0 + xi * xi).powf(-1.5)
}

/// d/dxi of `shape`.
fn shape_slope(xi: f64) -> f64 {
    -3.0 * xi * (1.0 + xi * xi).powf(-2.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalState {
    /// Incident coordinate (m).
    pub x: f64,
    /// dx/dt (m/s).
    pub v: f64,
    /// Ring angle (rad).
    pub theta: f64,
    /// Ring angular velocity (rad/s).
    pub omega: f64,
    /// Time (s).
    pub t: f64,
}

impl ClassicalState {
    /// Incoming state at x = -100 d.
    pub fn incoming(p: &ClassicalParams, speed: f64, omega: f64) -> Self {
        Self {
            x: -START_DISTANCE * p.impact,
            v: speed,
            theta: 0.0,
            omega,
            t: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        finite("x", self.x)?;
        finite("v", self.v)?;
        finite("theta", self.theta)?;
        finite("Omega", self.omega)?;
        finite("t", self.t)?;
        Ok(())
    }
}

/// Departure from the initial data, kept apart from the SI samples because
/// it is far below their resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    /// v / v_init - 1.
    pub dv_rel: f64,
    /// Omega - Omega_init (rad/s).
    pub d_omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reference {
    pub x: f64,
    pub speed: f64,
    pub omega: f64,
    pub t: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Samples in order of increasing t.
    pub samples: Vec<ClassicalState>,
    /// One entry per sample.
    pub deviations: Vec<Deviation>,
    /// The initial data.
    pub start: Reference,
    pub stats: IntegratorStats,
    pub tol: f64,
    pub warnings: Vec<String>,
}

impl Trajectory {
    /// Sample nearest to x = 0.
    pub fn closest_approach(&self) -> usize {
        let mut best = 0;
        for (i, s) in self.samples.iter().enumerate() {
            if s.x.abs() < self.samples[best].x.abs() {
                best = i;
            }
        }
        best
    }

    /// State at t_end (the last sample when integrating forward, the first
    /// when integrating backward).
    pub fn final_state(&self) -> ClassicalState {
        let first = self.samples[0];
        if first.t == self.start.t {
            *self.samples.last().unwrap()
        } else {
            first
        }
    }

    /// Index of the state at t_end.
    pub fn final_index(&self) -> usize {
        if self.samples[0].t == self.start.t {
            self.samples.len() - 1
        } else {
            0
        }
    }

    /// Signed (v(0) - v0) / v0 at closest approach, with v0 the asymptotic
    /// speed from the conserved v^2 (1 - a^2/(m M R^2)).
    pub fn closest_speed_change(&self, p: &ClassicalParams) -> f64 {
        let i = self.closest_approach();
        let u = self.deviations[i].dv_rel;
        let k = self.start.kappa * shape(self.start.x / p.impact).powi(2);
        let root = (1.0 - k).sqrt();
        // (1 + u)/sqrt(1 - k) - 1, with 1 - sqrt(1 - k) = k / (1 + sqrt(1 - k))
        (u + k / (1.0 + root)) / root
    }
}

pub struct IntegrationOptions {
    pub tol: f64,
    /// Extra times that must appear among the samples.
    pub sample_times: Vec<f64>,
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            sample_times: Vec::new(),
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// Scaled equations of motion. State: [x/d, (v/V - 1)/u_unit, theta,
/// (Omega - Omega_init)/omega_unit] in s = (t - t0) V / d.
struct Scaled {
    d: f64,
    speed: f64,
    omega_init: f64,
    kappa: f64,
    u_unit: f64,
    omega_unit: f64,
    coupled: bool,
    /// a(0) / (m V), multiplies a' Omega (1 + u) in the x force.
    drag: f64,
    /// q F / (pi d m V), multiplies the flux force shape.
    flux: f64,
}

impl Scaled {
    fn new(s0: &ClassicalState, p: &ClassicalParams) -> Self {
        let a0 = p.a0();
        let kappa = p.kappa();
        let coupled = a0 != 0.0;
        let speed = s0.v;
        Self {
            d: p.impact,
            speed,
            omega_init: s0.omega,
            kappa,
            u_unit: if kappa > 0.0 { kappa } else { 1.0 },
            omega_unit: if coupled {
                a0 * speed / p.inertia()
            } else {
                speed / p.impact
            },
            coupled,
            drag: a0 / (p.m * speed),
            flux: p.q * p.flux_wb / (PI * p.impact * p.m * speed),
        }
    }

    fn omega(&self, w: f64) -> f64 {
        self.omega_init + self.omega_unit * w
    }

    fn rhs(&self, y: &[f64; 4]) -> [f64; 4] {
        let xi = y[0];
        let u = self.u_unit * y[1];
        let w = 1.0 + u;
        let (alpha, alpha_p) = if self.coupled {
            (shape(xi), shape_slope(xi))
        } else {
            (0.0, 0.0)
        };
        let omega = self.omega(y[3]);

        // x force in units of m V^2 / d
        let b_slope = -xi / (1.0 + xi * xi).powi(2);
        let dl_dx = self.drag * alpha_p * omega * w + self.flux * b_slope * w;
        let convective = self.drag * alpha_p * omega * w + self.flux * b_slope * w;
        let f_x = dl_dx - convective;

        // [1, kappa alpha; alpha, 1] [U; W] = [f_x; -alpha' w^2]
        let det = 1.0 - self.kappa * alpha * alpha;
        let du = (f_x / self.u_unit + alpha * alpha_p * w * w * (self.kappa / self.u_unit)) / det;
        let dw = -alpha_p * w * w - alpha * du * self.u_unit;

        [w, du, (self.d / self.speed) * omega, dw]
    }
}

pub fn integrate_trajectory(
    s0: &ClassicalState,
    p: &ClassicalParams,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory> {
    integrate_trajectory_with(
        s0,
        p,
        t_end,
        &IntegrationOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn integrate_trajectory_with(
    s0: &ClassicalState,
    p: &ClassicalParams,
    t_end: f64,
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    p.validate()?;
    s0.validate()?;
    let t_end = finite("t_end", t_end)?;
    let tol = opts.tol;
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            expected: "in [1e-14, 1e-6]",
        });
    }
    if s0.v == 0.0 {
        return Err(Error::Domain {
            name: "v",
            value: 0.0,
            expected: "nonzero",
        });
    }
    if s0.x.abs() < MIN_START_DISTANCE * p.impact {
        return Err(Error::Domain {
            name: "x0",
            value: s0.x,
            expected: "|x0| >= 50 d",
        });
    }
    if t_end == s0.t {
        return Err(Error::Domain {
            name: "t_end",
            value: t_end,
            expected: "different from the initial time",
        });
    }

    let sc = Scaled::new(s0, p);
    let to_s = |t: f64| (t - s0.t) * sc.speed / sc.d;
    let xi0 = s0.x / p.impact;
    // closest approach of the unperturbed motion
    let mut stops = vec![-xi0];
    stops.extend(opts.sample_times.iter().map(|&t| to_s(t)));

    let mut samples = Vec::new();
    let mut deviations = Vec::new();
    let stats = integrator::integrate(
        |_, y| sc.rhs(y),
        0.0,
        [xi0, 0.0, s0.theta, 0.0],
        to_s(t_end),
        &stops,
        &integrator::Settings {
            tol,
            max_steps: opts.max_steps,
        },
        |s, y| {
            let u = sc.u_unit * y[1];
            let d_omega = sc.omega_unit * y[3];
            samples.push(ClassicalState {
                x: y[0] * sc.d,
                v: sc.speed * (1.0 + u),
                theta: y[2],
                omega: sc.omega_init + d_omega,
                t: s0.t + s * sc.d / sc.speed,
            });
            deviations.push(Deviation { dv_rel: u, d_omega });
        },
    )?;

    if samples.first().map(|s| s.t) > samples.last().map(|s| s.t) {
        samples.reverse();
        deviations.reverse();
    }
    if samples.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::Internal("sample times are not strictly increasing".into()));
    }

    Ok(Trajectory {
        samples,
        deviations,
        start: Reference {
            x: s0.x,
            speed: s0.v,
            omega: s0.omega,
            t: s0.t,
            kappa: sc.kappa,
        },
        stats,
        tol,
        warnings: p.warnings(),
    })
}

/// Time at which uniform motion from `s0` reaches x = 0.
pub fn crossing_time(s0: &ClassicalState) -> f64 {
    s0.t - s0.x / s0.v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Eq3Sign {
    /// v^2 (1 - a^2/(m M R^2)) conserved.
    Minus,
    /// v^2 (1 + a^2/(m M R^2)) conserved.
    Plus,
    /// Neither variant distinguishable (no coupling).
    Either,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleResidual {
    /// |Omega + a v/(M R^2) - Omega0|, normalized.
    pub eq2: f64,
    /// |v^2 (1 - a^2/(m M R^2)) - v0^2| / v0^2.
    pub eq3_minus: f64,
    /// Same with the opposite sign in front of a^2.
    pub eq3_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    /// Omega_init + a(x0) v_init / (M R^2).
    pub omega0: f64,
    /// max(|Omega0|, |a(0)| v0 / (M R^2)); falls back to |v0|/d without coupling.
    pub eq2_norm: f64,
    pub eq2_residual: f64,
    pub eq3_minus_residual: f64,
    pub eq3_plus_residual: f64,
    pub kappa: f64,
    /// Residuals in units of kappa (zero when kappa is zero).
    pub eq3_minus_over_kappa: f64,
    pub eq3_plus_over_kappa: f64,
    pub conserved: Eq3Sign,
    /// Signed (v(0) - v0)/v0 at closest approach.
    pub speed_change: f64,
    /// Signed (Omega(0) - Omega0) + a(0) v(0)/(M R^2) at closest approach, normalized.
    pub eq2_at_closest: f64,
    pub samples: Vec<SampleResidual>,
}

pub fn invariants_check(traj: &Trajectory, p: &ClassicalParams) -> InvariantReport {
    let a0 = p.a0();
    let speed = traj.start.speed;
    let coupled = a0 != 0.0;
    let omega_s = a0 * speed / p.inertia();
    let xi_init = traj.start.x / p.impact;
    let alpha_init = if coupled { shape(xi_init) } else { 0.0 };
    let omega0 = traj.start.omega + omega_s * alpha_init;
    let mut norm = omega0.abs().max(omega_s.abs());
    if norm == 0.0 {
        norm = speed.abs() / p.impact;
    }
    let kappa = traj.start.kappa;
    let k_init = kappa * alpha_init * alpha_init;

    let signed_eq2 = |s: &ClassicalState, dev: &Deviation| {
        let alpha = if coupled { shape(s.x / p.impact) } else { 0.0 };
        // Omega - Omega0 + a v/(M R^2), regrouped to keep the small parts
        (dev.d_omega + omega_s * ((alpha - alpha_init) + alpha * dev.dv_rel)) / norm
    };

    let samples: Vec<SampleResidual> = traj
        .samples
        .iter()
        .zip(&traj.deviations)
        .map(|(s, dev)| {
            let alpha = if coupled { shape(s.x / p.impact) } else { 0.0 };
            let u = dev.dv_rel;
            let k = kappa * alpha * alpha;
            let w2 = (1.0 + u) * (1.0 + u);
            let grow = 2.0 * u + u * u;
            SampleResidual {
                eq2: signed_eq2(s, dev).abs(),
                eq3_minus: (grow - k * w2 + k_init).abs() / (1.0 - k_init),
                eq3_plus: (grow + k * w2 - k_init).abs() / (1.0 + k_init),
            }
        })
        .collect();

    let max_of = |f: fn(&SampleResidual) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    let eq2_residual = max_of(|r| r.eq2);
    let eq3_minus_residual = max_of(|r| r.eq3_minus);
    let eq3_plus_residual = max_of(|r| r.eq3_plus);
    let over = |r: f64| if kappa > 0.0 { r / kappa } else { 0.0 };
    let conserved = if kappa == 0.0 || eq3_minus_residual == eq3_plus_residual {
        Eq3Sign::Either
    } else if eq3_minus_residual < eq3_plus_residual {
        Eq3Sign::Minus
    } else {
        Eq3Sign::Plus
    };
    let c = traj.closest_approach();

    InvariantReport {
        omega0,
        eq2_norm: norm,
        eq2_residual,
        eq3_minus_residual,
        eq3_plus_residual,
        kappa,
        eq3_minus_over_kappa: over(eq3_minus_residual),
        eq3_plus_over_kappa: over(eq3_plus_residual),
        conserved,
        speed_change: traj.closest_speed_change(p),
        eq2_at_closest: signed_eq2(&traj.samples[c], &traj.deviations[c]),
        samples,
    }
}

pub const TRAJECTORY_COLUMNS: [&str; 8] = [
    "t_s",
    "x_m",
    "v_m_per_s",
    "theta_rad",
    "Omega_rad_per_s",
    "dv_rel",
    "eq2_residual",
    "eq3_residual",
];

/// Write the samples with their per-sample residuals as CSV.
pub fn write_trajectory_csv<W: std::io::Write>(
    traj: &Trajectory,
    p: &ClassicalParams,
    out: W,
) -> std::result::Result<(), csv::Error> {
    let report = invariants_check(traj, p);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_COLUMNS)?;
    for ((s, dev), r) in traj.samples.iter().zip(&traj.deviations).zip(&report.samples) {
        let row = [s.t, s.x, s.v, s.theta, s.omega, dev.dv_rel, r.eq2, r.eq3_minus];
        w.write_record(row.iter().map(|v| crate::sweep::format_float(*v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trajectory_csv(traj: &Trajectory, p: &ClassicalParams, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_trajectory_csv(traj, p, std::io::BufWriter::new(file)).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}
