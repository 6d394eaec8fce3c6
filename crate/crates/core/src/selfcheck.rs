//! Quick checks of the library against its own oracles, meant to run in a
//! second or two from the command line.

use std::f64::consts::PI;

use serde::Serialize;

use crate::classical::{self, ClassicalParams, ClassicalState};
use crate::constants::{ReducedFlux, SI};
use crate::cylinder;
use crate::error::Result;
use crate::measurability::{self, ShieldScenario};
use crate::parallel::Execution;
use crate::rotator::{self, RotatorParams};
use crate::string;
use crate::sweep::{self, Quantity, SweepSpec, Variable};
use crate::thermal::{self, ThermalConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn run() -> Vec<Check> {
    vec![
        check("classical electron radius", {
            let r0 = SI.r0;
            Ok(((r0 / 1e-15 * 10.0).round() == 28.0, format!("r0 = {r0:e} m")))
        }),
        check("S_N closed form = level filling", (|| {
            let mut worst = 0.0f64;
            for n0 in 1..=30 {
                for i in 1..40 {
                    let phi = ReducedFlux::new(-0.5 + i as f64 / 40.0 + 1e-3)?;
                    let a = string::s_n_closed(n0, phi)?;
                    let b = string::s_n_bruteforce(n0, phi)?;
                    worst = worst.max((a - b).abs());
                }
            }
            Ok((worst <= 1e-12, format!("max difference {worst:e}")))
        })()),
        check("cylinder cancellation", (|| {
            let mut worst = 0.0f64;
            let mut exact = true;
            for phi in sweep::cell_centres(-0.5, 0.5, 101) {
                let phi = ReducedFlux::new(phi)?;
                worst = worst.max(cylinder::averaged_s(phi)?.abs());
                let r = cylinder::cylinder_shift(1_000_000, phi, 1e-6)?;
                exact &= r.total == r.ab;
            }
            Ok((worst <= 1e-12 && exact, format!("max |S_avg| {worst:e}, total == ab: {exact}")))
        })()),
        check("shift per electron r0/d", (|| {
            let p = RotatorParams::electron(1e-7, 1e-6, 1e6, 0.0);
            let d = rotator::supplementary_shift(1, &p)?.abs();
            Ok((rel(d, 2.8e-9) <= 0.01, format!("{d:e} rad")))
        })()),
        check("thermal validity window", (|| {
            let n0 = thermal::electrons_on_ring(1e-6, thermal::DEFAULT_A0)?;
            let w = thermal::validity_window(n0, 1e-6)?;
            Ok((
                rel(w.t_lo, 0.56) <= 0.02 && rel(w.t_hi, 2.2e4) <= 0.02,
                format!("T_lo = {:.4} K, T_hi = {:.4e} K", w.t_lo, w.t_hi),
            ))
        })()),
        check("thermal low-temperature limit", (|| {
            let phi = ReducedFlux::new(0.3)?;
            let w = thermal::validity_window(101, 1e-6)?;
            let c = thermal::c_t_direct(&ThermalConfig::new(101, 1e-6, w.t_lo / 100.0, phi))?;
            let want = 101.0 * string::s_n_closed(101, phi)?;
            Ok((rel(c, want) <= 1e-6, format!("C_T = {c}, N0 S_N = {want}")))
        })()),
        check("classical angular-momentum integral", (|| {
            let p = ClassicalParams::electrons(1e-7, 1e-6, SI.flux_quantum());
            let s0 = ClassicalState::incoming(&p, 1e6, 0.0);
            let tol = 1e-8;
            let traj = classical::integrate_trajectory(&s0, &p, 2e-10, tol)?;
            let r = classical::invariants_check(&traj, &p);
            Ok((
                r.eq2_residual <= 10.0 * tol,
                format!("residual {:e} with tol {tol:e}", r.eq2_residual),
            ))
        })()),
        check("shield phase uncertainty", (|| {
            let r = measurability::shield_analysis(&ShieldScenario {
                radius: 1e-6,
                distance: 1e-6,
                speed: 1e6,
                electrons: 1e9,
            })?;
            Ok((
                r.d_phase == PI / 4.0 && r.d_flux == PI * SI.hbar / (4.0 * SI.e),
                format!("dPhase = {}", r.d_phase),
            ))
        })()),
        check("sweep determinism", (|| {
            let spec = SweepSpec::new(
                Variable::Flux,
                -0.5,
                0.5,
                201,
                vec![Quantity::SEven, Quantity::SOdd, Quantity::SAvg],
            );
            let a = sweep::to_csv(&sweep::run_sweep_with(&spec, Execution::Parallel)?)?;
            let b = sweep::to_csv(&sweep::run_sweep_with(&spec, Execution::Sequential)?)?;
            Ok((a == b, format!("{} bytes", a.len())))
        })()),
    ]
}
