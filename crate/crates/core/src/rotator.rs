//! A single charge Q on a circle of radius R around a flux line, perturbed by
//! a charge q passing at impact distance d with constant speed v.
//!
//! To first order in qQ/(4 pi eps0 M c^2) the rotator stays in its angular
//! momentum eigenstate exp(i n theta) and only picks up a phase. With
//! nu = n - QF/(2 pi hbar):
//!
//! ```text
//! Phi_n(t) = hbar nu^2 t / (2 M R^2)
//!          - qQ nu / (8 pi eps0 M c^2 d) * v t / sqrt(v^2 t^2 + d^2)
//! ```
//!
//! The interaction part runs from -qQ nu/(8 pi eps0 M c^2 d) at t = -inf to
//! the opposite value at t = +inf, which leaves the supplementary shift
//! `delta_n = -qQ nu / (4 pi eps0 M c^2 d)`. The phase is evaluated in closed
//! form; there is nothing to integrate.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::constants::SI;
use crate::error::{finite, positive, Error, Result};
use crate::report::PhaseShiftReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatorParams {
    /// Charge q of the passing particle (C, signed).
    pub incident_charge: f64,
    /// Charge Q on the rotator (C, signed).
    pub rotator_charge: f64,
    /// Rotator mass M (kg).
    pub rotator_mass: f64,
    /// Rotator radius R (m).
    pub radius: f64,
    /// Impact distance d (m).
    pub impact: f64,
    /// Speed v of the passing particle (m/s).
    pub speed: f64,
    /// Enclosed flux F (Wb).
    pub flux_wb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatorPhase {
    pub n: i64,
    pub t: f64,
    pub phase: f64,
}

impl RotatorParams {
    /// Electron passing an electron rotator: q = Q = -e, M = m_e.
    pub fn electron(radius: f64, impact: f64, speed: f64, flux_wb: f64) -> Self {
        Self {
            incident_charge: -SI.e,
            rotator_charge: -SI.e,
            rotator_mass: SI.m_e,
            radius,
            impact,
            speed,
            flux_wb,
        }
    }

    pub fn validate(&self) -> Result<()> {
        finite("q", self.incident_charge)?;
        finite("Q", self.rotator_charge)?;
        positive("M", self.rotator_mass)?;
        positive("R", self.radius)?;
        positive("d", self.impact)?;
        positive("v", self.speed)?;
        finite("F", self.flux_wb)?;
        Ok(())
    }

    /// nu = n - QF / (2 pi hbar).
    pub fn shifted_momentum(&self, n: i64) -> f64 {
        n as f64 - self.rotator_charge * self.flux_wb / (TAU * SI.hbar)
    }

    /// qQ / (4 pi eps0 M c^2 d), the first-order coupling.
    fn coupling(&self) -> f64 {
        self.incident_charge * self.rotator_charge
            / (4.0 * PI * SI.eps0 * self.rotator_mass * SI.c * SI.c * self.impact)
    }

    fn is_electron_pair(&self) -> bool {
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs();
        same(self.incident_charge, -SI.e)
            && same(self.rotator_charge, -SI.e)
            && same(self.rotator_mass, SI.m_e)
    }
}

/// Interaction part of Phi_n(t) alone (the kinetic term dropped).
pub fn interaction_phase(n: i64, t: f64, p: &RotatorParams) -> Result<f64> {
    p.validate()?;
    let t = finite("t", t)?;
    let nu = p.shifted_momentum(n);
    let vt = p.speed * t;
    Ok(-0.5 * p.coupling() * nu * vt / vt.hypot(p.impact))
}

pub fn rotator_phase(n: i64, t: f64, p: &RotatorParams) -> Result<RotatorPhase> {
    let interaction = interaction_phase(n, t, p)?;
    let nu = p.shifted_momentum(n);
    let kinetic = SI.hbar / (2.0 * p.rotator_mass * p.radius * p.radius) * nu * nu * t;
    Ok(RotatorPhase {
        n,
        t,
        phase: kinetic + interaction,
    })
}

/// delta_n = -qQ (n - QF/2 pi hbar) / (4 pi eps0 M c^2 d).
pub fn supplementary_shift(n: i64, p: &RotatorParams) -> Result<f64> {
    p.validate()?;
    Ok(-p.coupling() * p.shifted_momentum(n))
}

/// Interference shift of an incident electron past an electron rotator.
///
/// The two interferometer arms pass on opposite sides of the flux and pick up
/// +delta_n and -delta_n, so the fringe shift carries 2 delta_n:
/// `Delta_n = -eF/hbar - (2 r0 / d)(n - QF/2 pi hbar)`. Only defined for
/// q = Q = -e and M = m_e; other charges should combine
/// [`supplementary_shift`] per arm.
pub fn total_shift_rotator(n: i64, p: &RotatorParams) -> Result<PhaseShiftReport> {
    p.validate()?;
    if !p.is_electron_pair() {
        return Err(Error::Usage(
            "total_shift_rotator needs q = Q = -e and M = m_e; use supplementary_shift per arm"
                .into(),
        ));
    }
    let nu = p.shifted_momentum(n);
    let ab = -SI.e * p.flux_wb / SI.hbar;
    let per_arm = -(SI.r0 / p.impact) * nu;
    Ok(PhaseShiftReport::new(ab, 2.0 * per_arm)
        .with_term("nu", nu)
        .with_term("delta_n_per_arm", per_arm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn flux_for(phi: f64) -> f64 {
        phi * SI.flux_quantum()
    }

    #[test]
    fn phase_vanishes_at_t0() {
        let p = RotatorParams::electron(1e-7, 1e-6, 1e6, flux_for(0.3));
        assert_eq!(rotator_phase(4, 0.0, &p).unwrap().phase, 0.0);
    }

    #[test]
    fn uncharged_incident_gives_free_rotor() {
        let mut p = RotatorParams::electron(1e-7, 1e-6, 1e6, flux_for(0.3));
        p.incident_charge = 0.0;
        let t = 3e-12;
        let nu = p.shifted_momentum(2);
        let free = SI.hbar / (2.0 * SI.m_e * 1e-14) * nu * nu * t;
        assert_eq!(rotator_phase(2, t, &p).unwrap().phase, free);
        assert_eq!(supplementary_shift(2, &p).unwrap(), 0.0);
    }

    #[test]
    fn long_time_limit_approaches_delta() {
        let p = RotatorParams::electron(1e-7, 1e-6, 1e6, flux_for(0.25));
        let t_big = 1e6 * p.impact / p.speed;
        let swing =
            interaction_phase(3, t_big, &p).unwrap() - interaction_phase(3, -t_big, &p).unwrap();
        let delta = supplementary_shift(3, &p).unwrap();
        // vT/sqrt(v^2T^2+d^2) = 1 - (d/vT)^2/2 + ...
        assert!(rel(swing, delta) < 1e-12, "{swing} vs {delta}");
    }

    #[test]
    fn delta_per_electron_at_one_micron() {
        // (n + phi) = 1
        let p = RotatorParams::electron(1e-7, 1e-6, 1e6, 0.0);
        let d = supplementary_shift(1, &p).unwrap();
        assert!(rel(d.abs(), 2.8e-9) < 0.01, "{d}");
        assert!(rel(d.abs(), SI.r0 / 1e-6) < 1e-12);
    }

    #[test]
    fn delta_example_n3_quarter_flux() {
        // electrons: QF/2 pi hbar = -phi, so nu = n + phi = 3.25
        let p = RotatorParams::electron(1e-7, 1e-6, 1e6, flux_for(0.25));
        let d = supplementary_shift(3, &p).unwrap();
        assert!(rel(d, -3.25 * SI.r0 / 1e-6) < 1e-12);
        assert!(rel(d, -9.158e-9) < 1e-3);
        assert_eq!(supplementary_shift(0, &RotatorParams::electron(1e-7, 1e-6, 1e6, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn delta_linear_in_n_and_inverse_in_d() {
        let p = RotatorParams::electron(1e-7, 1e-6, 1e6, flux_for(0.37));
        let steps: Vec<f64> = (-3..3)
            .map(|n| supplementary_shift(n + 1, &p).unwrap() - supplementary_shift(n, &p).unwrap())
            .collect();
        for s in &steps {
            assert!(rel(*s, steps[0]) < 1e-9);
        }
        let mut far = p;
        far.impact *= 2.0;
        assert_eq!(
            supplementary_shift(5, &far).unwrap(),
            supplementary_shift(5, &p).unwrap() / 2.0
        );
    }

    #[test]
    fn total_shift_examples() {
        let p0 = RotatorParams::electron(1e-7, 1e-6, 1e6, 0.0);
        let r = total_shift_rotator(0, &p0).unwrap();
        assert_eq!((r.ab, r.supplementary, r.total), (0.0, 0.0, 0.0));

        let p1 = RotatorParams::electron(1e-7, 1e-6, 1e6, SI.flux_quantum());
        let r = total_shift_rotator(0, &p1).unwrap();
        assert!(rel(r.ab, -TAU) < 1e-15);
        // electron sign convention: nu = n + phi = 1
        assert!(rel(r.supplementary, -2.0 * SI.r0 / 1e-6) < 1e-12);
        assert!(rel(r.supplementary, -5.6e-9) < 0.01);
        assert_eq!(r.total, r.ab + r.supplementary);
    }

    #[test]
    fn total_shift_independent_of_radius() {
        let a = RotatorParams::electron(1e-7, 1e-6, 1e6, flux_for(0.41));
        let mut b = a;
        b.radius *= 2.0;
        assert_eq!(total_shift_rotator(2, &a).unwrap(), total_shift_rotator(2, &b).unwrap());
    }

    #[test]
    fn total_shift_rejects_other_charges() {
        let mut p = RotatorParams::electron(1e-7, 1e-6, 1e6, 0.0);
        p.rotator_charge = SI.e;
        assert!(matches!(total_shift_rotator(0, &p), Err(Error::Usage(_))));
    }

    #[test]
    fn invalid_params() {
        let mut p = RotatorParams::electron(1e-7, 1e-6, 1e6, 0.0);
        p.speed = 0.0;
        assert!(supplementary_shift(0, &p).is_err());
        p.speed = 1e6;
        p.rotator_mass = -1.0;
        assert!(rotator_phase(0, 1.0, &p).is_err());
    }
}
