//! SI constants, the reduced flux and the ring level-energy scale.
//!
//! Values are the CODATA 2018 recommended values (e, h, c and k are exact by
//! definition of the SI since 2019). Every formula in the crate reads its
//! constants from [`SI`] so that a single table feeds all modules.

use std::f64::consts::{PI, TAU};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{finite, positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Elementary charge (C).
    pub e: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Electron mass (kg).
    pub m_e: f64,
    /// Vacuum permittivity (F/m).
    pub eps0: f64,
    /// Speed of light (m/s).
    pub c: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Classical electron radius e^2 / (4 pi eps0 m_e c^2) (m).
    pub r0: f64,
}

const E: f64 = 1.602_176_634e-19;
const H: f64 = 6.626_070_15e-34;
const M_E: f64 = 9.109_383_701_5e-31;
const EPS0: f64 = 8.854_187_812_8e-12;
const C: f64 = 299_792_458.0;
const K_B: f64 = 1.380_649e-23;

/// The constants table used throughout the crate.
pub const SI: PhysicalConstants = PhysicalConstants::codata_2018();

impl PhysicalConstants {
    pub const fn codata_2018() -> Self {
        let hbar = H / (2.0 * PI);
        let r0 = E * E / (4.0 * PI * EPS0 * M_E * C * C);
        Self {
            e: E,
            hbar,
            m_e: M_E,
            eps0: EPS0,
            c: C,
            k_b: K_B,
            r0,
        }
    }

    /// Planck constant h = 2 pi hbar.
    pub fn h(&self) -> f64 {
        TAU * self.hbar
    }

    /// Single-electron flux quantum h/e (Wb).
    pub fn flux_quantum(&self) -> f64 {
        TAU * self.hbar / self.e
    }

    /// SHA-256 over the bit patterns of the table, hex encoded.
    ///
    /// Written into sweep metadata so that data files record which constants
    /// produced them.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        for v in [
            self.e, self.hbar, self.m_e, self.eps0, self.c, self.k_b, self.r0,
        ] {
            hasher.update(v.to_bits().to_le_bytes());
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Enclosed flux in units of h/e, phi = eF / (2 pi hbar).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ReducedFlux(f64);

/// A reduced flux folded into the window (-1/2, 1/2] plus the integer number
/// of flux quanta that were removed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WrappedFlux {
    pub reduced: f64,
    pub winding: i64,
}

impl ReducedFlux {
    pub fn new(phi: f64) -> Result<Self> {
        finite("phi", phi).map(Self)
    }

    pub fn from_flux(flux_wb: f64) -> Result<Self> {
        reduced_flux(flux_wb)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Flux in webers.
    pub fn flux_wb(self) -> f64 {
        self.0 * SI.flux_quantum()
    }

    /// Conventional AB shift -eF/hbar = -2 pi phi. Never wrapped.
    pub fn ab_shift(self) -> f64 {
        -TAU * self.0
    }

    /// Fold into (-1/2, 1/2].
    pub fn wrap(self) -> WrappedFlux {
        let winding = (self.0 - 0.5).ceil();
        WrappedFlux {
            reduced: self.0 - winding,
            winding: winding as i64,
        }
    }
}

impl WrappedFlux {
    pub fn flux(self) -> ReducedFlux {
        ReducedFlux(self.reduced)
    }
}

/// phi = eF / (2 pi hbar) for a flux `flux_wb` in webers.
pub fn reduced_flux(flux_wb: f64) -> Result<ReducedFlux> {
    let f = finite("flux_wb", flux_wb)?;
    Ok(ReducedFlux(SI.e * f / (TAU * SI.hbar)))
}

/// Conventional Aharonov-Bohm shift -eF/hbar (rad) of an electron.
pub fn ab_shift(flux_wb: f64) -> Result<f64> {
    let f = finite("flux_wb", flux_wb)?;
    Ok(-SI.e * f / SI.hbar)
}

/// Level spacing scale hbar^2 / (2 m_e R^2) of an electron on a ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyScale {
    /// eps_R (J).
    pub eps_r: f64,
    /// Ring radius R (m).
    pub radius: f64,
}

impl EnergyScale {
    /// k T / eps_R, the temperature in level units.
    pub fn reduced_temperature(&self, kelvin: f64) -> f64 {
        SI.k_b * kelvin / self.eps_r
    }

    pub fn kelvin(&self, reduced_temperature: f64) -> f64 {
        reduced_temperature * self.eps_r / SI.k_b
    }
}

pub fn level_energy_scale(radius: f64) -> Result<EnergyScale> {
    let r = positive("R", radius)?;
    Ok(EnergyScale {
        eps_r: SI.hbar * SI.hbar / (2.0 * SI.m_e * r * r),
        radius: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn r0_two_significant_figures() {
        assert!((SI.r0 - 2.817_940_326_2e-15).abs() < 1e-24);
        let two_sig = (SI.r0 / 1e-16).round() / 10.0;
        assert_eq!(two_sig, 28.0 / 10.0);
    }

    #[test]
    fn all_positive() {
        for v in [SI.e, SI.hbar, SI.m_e, SI.eps0, SI.c, SI.k_b, SI.r0] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn flux_quantum_maps_to_one() {
        // h/e = 4.135667696...e-15 Wb
        let fq = SI.h() / SI.e;
        assert!(close(fq, 4.135_667_696e-15, 1e-9));
        assert_eq!(reduced_flux(0.0).unwrap().value(), 0.0);
        assert!(close(reduced_flux(fq).unwrap().value(), 1.0, 1e-15));
        assert!(close(reduced_flux(-fq / 2.0).unwrap().value(), -0.5, 1e-15));
    }

    #[test]
    fn ab_shift_values() {
        let fq = SI.h() / SI.e;
        assert_eq!(ab_shift(0.0).unwrap(), 0.0);
        assert!(close(ab_shift(fq).unwrap(), -TAU, 1e-15));
        assert!(close(ab_shift(-fq / 2.0).unwrap(), PI, 1e-15));
        assert!(ab_shift(f64::NAN).is_err());
        assert!(reduced_flux(f64::INFINITY).is_err());
    }

    #[test]
    fn energy_scale_regression() {
        let s = level_energy_scale(1e-6).unwrap();
        // hbar^2/(2 m_e (1 um)^2) from the CODATA table
        assert!(close(s.eps_r, 6.104_264_322_461e-27, 1e-9), "{}", s.eps_r);
        let s2 = level_energy_scale(2e-6).unwrap();
        assert!(close(s2.eps_r, s.eps_r / 4.0, 1e-15));
        assert!(level_energy_scale(0.0).is_err());
        assert!(level_energy_scale(-1.0).is_err());
    }

    #[test]
    fn wrap_window_edges() {
        let w = ReducedFlux(0.5).wrap();
        assert_eq!((w.reduced, w.winding), (0.5, 0));
        let w = ReducedFlux(-0.5).wrap();
        assert_eq!((w.reduced, w.winding), (0.5, -1));
        let w = ReducedFlux(2.25).wrap();
        assert_eq!((w.reduced, w.winding), (0.25, 2));
        let w = ReducedFlux(-0.75).wrap();
        assert_eq!((w.reduced, w.winding), (0.25, -1));
    }

    #[test]
    fn checksum_is_stable() {
        assert_eq!(SI.checksum(), PhysicalConstants::codata_2018().checksum());
        assert_eq!(SI.checksum().len(), 64);
    }
}
