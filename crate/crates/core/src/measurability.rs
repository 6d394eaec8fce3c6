//! Order-of-magnitude uncertainty chains for observing the shield response
//! and for measuring the transient field between the interferometer arms.
//!
//! The coefficients are fixed to the printed chain (2 r0, hbar/4r0,
//! pi hbar/4e, pi/4); they are estimates, not a dynamical model. The
//! uncertainty relation is taken as dp dz >= hbar/2.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::SI;
use crate::error::{positive, Result};

pub const ORDER_OF_MAGNITUDE: &str = "order-of-magnitude estimate";

/// A phase spread this large already wipes out the fringes.
pub const WASHOUT_PHASE: f64 = PI / 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShieldScenario {
    /// Orbit radius of the shielding electrons R (m).
    pub radius: f64,
    /// Distance between incident and shielding electrons d (m).
    pub distance: f64,
    /// Incident speed v (m/s).
    pub speed: f64,
    /// Number of shielding electrons N.
    pub electrons: f64,
}

impl ShieldScenario {
    pub fn validate(&self) -> Result<()> {
        positive("R", self.radius)?;
        positive("d", self.distance)?;
        positive("v", self.speed)?;
        positive("N", self.electrons)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShieldReport {
    /// Displacement of a shielding electron during the passage, 2 r0 (m).
    pub displacement: f64,
    /// Momentum uncertainty hbar / (4 r0) (kg m/s).
    pub dp: f64,
    /// Field uncertainty e hbar / (16 pi eps0 c^2 m_e r0 R^2) (T).
    pub d_b: f64,
    /// Flux uncertainty pi hbar / (4 e) (Wb).
    pub d_flux: f64,
    /// d_b times pi R^2; reproduces d_flux (Wb).
    pub d_flux_from_field: f64,
    /// Phase uncertainty pi/4 (rad).
    pub d_phase: f64,
    pub destroys_interference: bool,
    pub note: &'static str,
}

pub fn shield_analysis(s: &ShieldScenario) -> Result<ShieldReport> {
    s.validate()?;
    let r0 = SI.r0;
    let d_b = SI.e * SI.hbar
        / (16.0 * PI * SI.eps0 * SI.c * SI.c * SI.m_e * r0 * s.radius * s.radius);
    let d_phase = PI / 4.0;
    Ok(ShieldReport {
        displacement: 2.0 * r0,
        dp: SI.hbar / (4.0 * r0),
        d_b,
        d_flux: PI * SI.hbar / (4.0 * SI.e),
        d_flux_from_field: d_b * PI * s.radius * s.radius,
        d_phase,
        destroys_interference: d_phase >= WASHOUT_PHASE,
        note: ORDER_OF_MAGNITUDE,
    })
}

/// Field e v / (4 pi eps0 c^2 d^2) of the incident electron at distance d (T).
pub fn b_e(distance: f64, speed: f64) -> Result<f64> {
    let d = positive("d", distance)?;
    let v = positive("v", speed)?;
    Ok(SI.e * v / (4.0 * PI * SI.eps0 * SI.c * SI.c * d * d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiStringScenario {
    /// Flux F carried by the semi-string (Wb).
    pub flux_wb: f64,
    /// Path separation scale d (m).
    pub distance: f64,
    /// Incident speed v (m/s).
    pub speed: f64,
    /// Position uncertainty of the semi-string end (m).
    pub dz: f64,
    /// Field B to be measured (T).
    pub field: f64,
}

impl SemiStringScenario {
    pub fn validate(&self) -> Result<()> {
        positive("F", self.flux_wb)?;
        positive("d", self.distance)?;
        positive("v", self.speed)?;
        positive("dz", self.dz)?;
        positive("B", self.field)?;
        Ok(())
    }

    /// The field for which the transferred momentum just reaches hbar / (2 dz).
    pub fn threshold_field(&self) -> f64 {
        SI.hbar * self.speed / (4.0 * SI.eps0 * SI.c * SI.c * self.flux_wb * self.distance * self.dz)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiStringReport {
    /// z momentum 2 eps0 c^2 F B d / v given to the semi-string (kg m/s).
    pub pz: f64,
    /// Momentum resolution hbar / (2 dz) allowed by the position spread.
    pub pz_resolution: f64,
    /// pz exceeds the resolution, so the field registers.
    pub detectable: bool,
    /// Flux uncertainty F dz / (pi d) (Wb).
    pub flux_uncertainty: f64,
    /// Phase uncertainty e F dz / (pi hbar d) (rad).
    pub d_phase: f64,
    /// B times d_phase (T rad).
    pub product: f64,
    pub b_e: f64,
    /// A registering measurement leaves a phase spread of at least one radian.
    pub destroys_interference: bool,
    pub note: &'static str,
}

pub fn semistring_analysis(s: &SemiStringScenario) -> Result<SemiStringReport> {
    s.validate()?;
    let pz = 2.0 * SI.eps0 * SI.c * SI.c * s.flux_wb * s.field * s.distance / s.speed;
    let pz_resolution = SI.hbar / (2.0 * s.dz);
    let d_phase = SI.e * s.flux_wb * s.dz / (PI * SI.hbar * s.distance);
    let detectable = pz >= pz_resolution;
    Ok(SemiStringReport {
        pz,
        pz_resolution,
        detectable,
        flux_uncertainty: s.flux_wb * s.dz / (PI * s.distance),
        d_phase,
        product: s.field * d_phase,
        b_e: b_e(s.distance, s.speed)?,
        destroys_interference: detectable && d_phase >= 1.0,
        note: ORDER_OF_MAGNITUDE,
    })
}
