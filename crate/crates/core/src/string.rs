//! Circular metallic string at zero temperature.
//!
//! N0 independent electrons on a ring of radius R threaded by flux. The
//! single-electron level with angular momentum m has energy
//! eps_R (m + phi)^2, and the ground state fills the N0 lowest levels. The
//! shift of the incident electron is governed by the mean
//!
//! ```text
//! S_N = (1/N0) sum_j (m_j + phi)
//! ```
//!
//! over the occupied levels. [`s_n_bruteforce`] enumerates the filling;
//! [`s_n_closed`] uses the parity branches (odd N0: phi; even N0:
//! phi - 1/2 for phi > 0 and phi + 1/2 for phi < 0).
//!
//! Where the last filled level is degenerate (phi = 0 with N0 even, and
//! |phi| = 1/2) the ground state is not unique. Both implementations put
//! weight 1/2 on each member of the degenerate pair, which lands S_N on the
//! midpoint of the sawtooth jump.

use serde::Serialize;

use crate::constants::{ReducedFlux, SI};
use crate::error::{positive, Error, Result};
use crate::report::PhaseShiftReport;

/// Distance in reduced flux from a level crossing below which two levels
/// are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n0: u64) -> Self {
        if n0 % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StringConfig {
    /// Number of conduction electrons N0.
    pub n0: u64,
    /// Ring radius R (m).
    pub radius: f64,
    /// Impact distance d of the incident electron (m).
    pub impact: f64,
}

impl StringConfig {
    pub fn validate(&self) -> Result<()> {
        check_count(self.n0)?;
        positive("R", self.radius)?;
        positive("d", self.impact)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Occupation {
    /// Angular momentum quantum number.
    pub m: i64,
    /// Occupation in [0, 1].
    pub weight: f64,
    /// (m + phi)^2, in units of eps_R.
    pub energy: f64,
}

/// Occupied levels sorted by energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupationSet {
    pub entries: Vec<Occupation>,
    pub total: f64,
}

impl OccupationSet {
    pub fn quantum_numbers(&self) -> Vec<i64> {
        self.entries.iter().map(|o| o.m).collect()
    }

    /// True when the top level is shared between a degenerate pair.
    pub fn is_split(&self) -> bool {
        self.entries.iter().any(|o| o.weight < 1.0)
    }
}

pub(crate) fn check_count(n0: u64) -> Result<()> {
    if n0 == 0 {
        return Err(Error::Domain {
            name: "N0",
            value: 0.0,
            expected: ">= 1",
        });
    }
    Ok(())
}

/// Fill the N0 lowest single-electron levels.
pub fn fill_levels(n0: u64, phi: ReducedFlux) -> Result<OccupationSet> {
    check_count(n0)?;
    let phi_v = phi.value();
    // Levels are symmetric about m = -phi, i.e. about -winding.
    let centre = -phi.wrap().winding;
    let half_width = n0 as i64 + 2;
    let mut levels: Vec<(i64, f64)> = (centre - half_width..=centre + half_width)
        .map(|m| (m, m as f64 + phi_v))
        .collect();
    levels.sort_by(|a, b| a.1.abs().total_cmp(&b.1.abs()).then(a.0.cmp(&b.0)));

    let n = n0 as usize;
    let last = levels[n - 1];
    let next = levels[n];
    let split = (next.1.abs() - last.1.abs()).abs() <= 2.0 * DEGENERACY_TOL;

    let take = if split { n + 1 } else { n };
    let mut entries = Vec::with_capacity(take);
    for (i, &(m, x)) in levels[..take].iter().enumerate() {
        let weight = if split && i >= n - 1 { 0.5 } else { 1.0 };
        entries.push(Occupation {
            m,
            weight,
            energy: x * x,
        });
    }

    // Occupied |m + phi| stays below N0/2 + 1, well inside the search range.
    if let Some(o) = entries.iter().find(|o| (o.m - centre).abs() >= half_width) {
        return Err(Error::Internal(format!(
            "occupied level m = {} reached the edge of the search range",
            o.m
        )));
    }

    let total = entries.iter().map(|o| o.weight).sum();
    Ok(OccupationSet { entries, total })
}

/// S_N by explicit filling of the levels.
pub fn s_n_bruteforce(n0: u64, phi: ReducedFlux) -> Result<f64> {
    let occ = fill_levels(n0, phi)?;
    let sum: f64 = occ
        .entries
        .iter()
        .map(|o| o.weight * (o.m as f64 + phi.value()))
        .sum();
    Ok(sum / n0 as f64)
}

/// Sawtooth branch for a ring of the given parity, at a reduced flux already
/// folded into (-1/2, 1/2].
pub fn s_branch(parity: Parity, reduced: f64) -> f64 {
    match parity {
        Parity::Odd => {
            if reduced.abs() >= 0.5 - DEGENERACY_TOL {
                // half-filled pair at the zone edge
                reduced - 0.5f64.copysign(reduced)
            } else {
                reduced
            }
        }
        Parity::Even => {
            if reduced.abs() <= DEGENERACY_TOL {
                // half-filled pair at the Fermi level
                reduced
            } else if reduced > 0.0 {
                reduced - 0.5
            } else {
                reduced + 0.5
            }
        }
    }
}

/// S_N from the parity branches.
pub fn s_n_closed(n0: u64, phi: ReducedFlux) -> Result<f64> {
    check_count(n0)?;
    Ok(s_branch(Parity::of(n0), phi.wrap().reduced))
}

/// Whether `phi` sits on a level crossing of the top filled level.
pub fn is_degenerate(parity: Parity, phi: ReducedFlux) -> bool {
    let r = phi.wrap().reduced;
    match parity {
        Parity::Odd => r.abs() >= 0.5 - DEGENERACY_TOL,
        Parity::Even => r.abs() <= DEGENERACY_TOL || r.abs() >= 0.5 - DEGENERACY_TOL,
    }
}

/// -(2 N0 r0 / d) S for a given mean S.
pub fn supplementary_for(n0: u64, s: f64, impact: f64) -> f64 {
    -(2.0 * n0 as f64 * SI.r0 / impact) * s
}

pub fn string_shift(cfg: &StringConfig, phi: ReducedFlux) -> Result<PhaseShiftReport> {
    cfg.validate()?;
    let s = s_n_closed(cfg.n0, phi)?;
    let degenerate = is_degenerate(Parity::of(cfg.n0), phi);
    Ok(
        PhaseShiftReport::new(phi.ab_shift(), supplementary_for(cfg.n0, s, cfg.impact))
            .with_term("S_N", s)
            .with_term("winding", phi.wrap().winding as f64)
            .with_term("degenerate_averaged", if degenerate { 1.0 } else { 0.0 }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(v: f64) -> ReducedFlux {
        ReducedFlux::new(v).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn fill_three_at_tenth() {
        let occ = fill_levels(3, phi(0.1)).unwrap();
        assert_eq!(occ.quantum_numbers(), vec![0, -1, 1]);
        let e: Vec<f64> = occ.entries.iter().map(|o| o.energy).collect();
        for (got, want) in e.iter().zip([0.01, 0.81, 1.21]) {
            assert!(close(*got, want, 1e-14));
        }
        assert_eq!(occ.total, 3.0);
    }

    #[test]
    fn fill_four_at_tenth() {
        let occ = fill_levels(4, phi(0.1)).unwrap();
        assert_eq!(occ.quantum_numbers(), vec![0, -1, 1, -2]);
        assert!(!occ.is_split());
    }

    #[test]
    fn fill_four_at_zero_splits_top_pair() {
        let occ = fill_levels(4, phi(0.0)).unwrap();
        let full: Vec<i64> = occ.entries.iter().filter(|o| o.weight == 1.0).map(|o| o.m).collect();
        let half: Vec<i64> = occ.entries.iter().filter(|o| o.weight == 0.5).map(|o| o.m).collect();
        assert_eq!(full, vec![0, -1, 1]);
        assert_eq!(half, vec![-2, 2]);
        assert_eq!(occ.total, 4.0);
    }

    #[test]
    fn zero_electrons_rejected() {
        assert!(fill_levels(0, phi(0.1)).is_err());
        assert!(s_n_closed(0, phi(0.1)).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        assert!(close(s_n_bruteforce(3, phi(0.1)).unwrap(), 0.1, 1e-15));
        assert!(close(s_n_bruteforce(4, phi(0.1)).unwrap(), -0.4, 1e-15));
        for n0 in 1..40 {
            assert!(s_n_bruteforce(n0, phi(0.0)).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn closed_branches() {
        assert_eq!(s_n_closed(101, phi(0.3)).unwrap(), 0.3);
        assert!(close(s_n_closed(100, phi(0.3)).unwrap(), -0.2, 1e-15));
        assert!(close(s_n_closed(100, phi(-0.3)).unwrap(), 0.2, 1e-15));
    }

    #[test]
    fn degeneracy_points_hit_midpoint() {
        for n0 in [1, 2, 7, 8, 100, 101] {
            for v in [0.0, 0.5, -0.5, 1.5] {
                assert_eq!(s_n_closed(n0, phi(v)).unwrap(), 0.0, "n0={n0} phi={v}");
                assert!(s_n_bruteforce(n0, phi(v)).unwrap().abs() < 1e-14, "n0={n0} phi={v}");
            }
        }
    }

    #[test]
    fn large_flux_is_periodic() {
        for n0 in [5, 6] {
            let a = s_n_bruteforce(n0, phi(0.2)).unwrap();
            let b = s_n_bruteforce(n0, phi(7.2)).unwrap();
            let c = s_n_closed(n0, phi(-2.8)).unwrap();
            assert!(close(a, b, 1e-13) && close(a, c, 1e-13));
        }
    }

    #[test]
    fn string_shift_examples() {
        let cfg = StringConfig { n0: 101, radius: 1e-6, impact: 1e-6 };
        let r = string_shift(&cfg, phi(0.0)).unwrap();
        assert_eq!(r.supplementary, 0.0);

        // one electron with S forced to 1 gives 2 r0/d, i.e. r0/d per arm
        let per_electron = supplementary_for(1, 1.0, 1e-6);
        assert!(close(per_electron.abs() / 2.0, 2.8e-9, 0.01 * 2.8e-9));

        // N0 = 1000 on the odd branch at phi = 0.25
        let s1000 = supplementary_for(1000, 0.25, 1e-6);
        assert!(close(s1000, -500.0 * SI.r0 / 1e-6, 1e-20));
        assert!(close(s1000, -1.4e-6, 0.01 * 1.4e-6));

        let odd = StringConfig { n0: 1001, radius: 1e-6, impact: 1e-6 };
        let r = string_shift(&odd, phi(0.25)).unwrap();
        assert!(close(r.supplementary, -2.0 * 1001.0 * SI.r0 / 1e-6 * 0.25, 1e-20));
        assert_eq!(r.total, r.ab + r.supplementary);
    }
}
