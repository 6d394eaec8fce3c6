//! Real mesoscopic cylinder: parity-weighted average of the string result.
//!
//! A cylinder of finite thickness and height has, for every pair of radial
//! and axial quantum numbers, a family of angular substates. Whether such a
//! family holds an even or an odd number of electrons decides which sawtooth
//! branch it follows. A family is even with probability e|F|/(pi hbar) = 2|phi|
//! (the splitting of the two sublevels sharing m, relative to the spacing
//! between m - 1 and m) and odd with probability 1 - 2|phi|. The weighted
//! mean of the two branches vanishes identically:
//!
//! ```text
//! 2|phi| (phi - sgn(phi)/2) + (1 - 2|phi|) phi = 0
//! ```
//!
//! so the cylinder leaves only the conventional AB shift. The weight
//! derivation assumes 2|phi| < 1/2; the code evaluates on all of |phi| < 1/2
//! and flags the part of the window beyond that assumption.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::constants::{ReducedFlux, SI};
use crate::error::{positive, Error, Result};
use crate::report::PhaseShiftReport;
use crate::string::{check_count, s_branch, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParityWeights {
    pub w_even: f64,
    pub w_odd: f64,
    /// |phi| >= 1/4, outside the range assumed for the weights.
    pub beyond_weight_assumption: bool,
}

fn folded(phi: ReducedFlux) -> Result<f64> {
    let r = phi.wrap().reduced;
    if r.abs() >= 0.5 {
        return Err(Error::Domain {
            name: "phi (folded)",
            value: r,
            expected: "|phi| < 1/2",
        });
    }
    Ok(r)
}

pub fn parity_weights(phi: ReducedFlux) -> Result<ParityWeights> {
    let r = folded(phi)?;
    let w_even = 2.0 * r.abs();
    Ok(ParityWeights {
        w_even,
        w_odd: 1.0 - w_even,
        beyond_weight_assumption: r.abs() >= 0.25,
    })
}

/// Weighted mean of the two string branches in floating point.
pub fn averaged_s(phi: ReducedFlux) -> Result<f64> {
    let r = folded(phi)?;
    let w = parity_weights(phi)?;
    Ok(w.w_even * s_branch(Parity::Even, r) + w.w_odd * s_branch(Parity::Odd, r))
}

/// The same mean in exact rational arithmetic on the binary value of phi.
pub fn averaged_s_exact(phi: ReducedFlux) -> Result<f64> {
    let r = folded(phi)?;
    let x = BigRational::from_float(r)
        .ok_or_else(|| Error::Internal(format!("{r} has no rational value")))?;
    let one = BigRational::from_integer(BigInt::from(1));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let two = BigRational::from_integer(BigInt::from(2));

    let w_even = &two * x.abs();
    let w_odd = &one - &w_even;
    let s_odd = x.clone();
    let s_even = if x.is_zero() {
        x.clone()
    } else if x.is_positive() {
        &x - &half
    } else {
        &x + &half
    };
    let s = w_even * s_even + w_odd * s_odd;
    s.to_f64()
        .ok_or_else(|| Error::Internal("averaged S not representable".into()))
}

/// Shift of an electron passing a cylinder with `n` free electrons.
///
/// The supplementary term uses the exact mean, so `total == ab` bit for bit;
/// the floating-point mean and the per-parity contributions are attached as
/// terms.
pub fn cylinder_shift(n: u64, phi: ReducedFlux, impact: f64) -> Result<PhaseShiftReport> {
    check_count(n)?;
    let d = positive("d", impact)?;
    let r = folded(phi)?;
    let w = parity_weights(phi)?;
    let scale = -(2.0 * n as f64 * SI.r0 / d);
    let s = averaged_s_exact(phi)?;
    Ok(PhaseShiftReport::new(phi.ab_shift(), scale * s + 0.0)
        .with_term("even_families", scale * w.w_even * s_branch(Parity::Even, r))
        .with_term("odd_families", scale * w.w_odd * s_branch(Parity::Odd, r))
        .with_term("S_avg", s)
        .with_term("S_avg_float", averaged_s(phi)?)
        .with_term("w_even", w.w_even)
        .with_term(
            "beyond_weight_assumption",
            if w.beyond_weight_assumption { 1.0 } else { 0.0 },
        ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(v: f64) -> ReducedFlux {
        ReducedFlux::new(v).unwrap()
    }

    #[test]
    fn weights_examples() {
        let w = parity_weights(phi(0.0)).unwrap();
        assert_eq!((w.w_even, w.w_odd), (0.0, 1.0));
        let w = parity_weights(phi(0.25)).unwrap();
        assert_eq!((w.w_even, w.w_odd), (0.5, 0.5));
        assert!(w.beyond_weight_assumption);
        let w = parity_weights(phi(0.1)).unwrap();
        assert_eq!(w.w_even, 0.2);
        assert!((w.w_odd - 0.8).abs() < 1e-16);
        assert!(!w.beyond_weight_assumption);
        assert_eq!(w.w_even + w.w_odd, 1.0);
    }

    #[test]
    fn half_flux_rejected() {
        assert!(parity_weights(phi(0.5)).is_err());
        assert!(parity_weights(phi(-0.5)).is_err());
        assert!(averaged_s(phi(1.5)).is_err());
        // folding brings 1.1 back to 0.1
        assert!(parity_weights(phi(1.1)).is_ok());
    }

    #[test]
    fn averaged_examples() {
        // 0.2 (-0.4) + 0.8 (0.1)
        assert!(averaged_s(phi(0.1)).unwrap().abs() < 1e-16);
        // 0.6 (0.2) + 0.4 (-0.3)
        assert!(averaged_s(phi(-0.3)).unwrap().abs() < 1e-16);
        assert_eq!(averaged_s(phi(0.0)).unwrap(), 0.0);
        for v in [0.1, -0.3, 0.0, 0.49, -0.4999, 1e-300] {
            assert_eq!(averaged_s_exact(phi(v)).unwrap(), 0.0);
        }
    }

    #[test]
    fn shift_equals_ab() {
        for (n, v) in [(1u64, 0.2), (1_000_000_000, 0.49), (7, -0.31), (1000, 0.0)] {
            let r = cylinder_shift(n, phi(v), 1e-6).unwrap();
            assert_eq!(r.supplementary, 0.0);
            assert_eq!(r.total, r.ab);
            assert_eq!(r.ab, phi(v).ab_shift());
        }
        let huge = cylinder_shift(1_000_000_000, phi(0.2), 1e-6).unwrap();
        // each parity class alone shifts the fringes by a sizeable fraction of a radian
        let even = huge.term("even_families").unwrap();
        let odd = huge.term("odd_families").unwrap();
        assert!(even.abs() > 0.5, "{even}");
        assert!((even + odd).abs() < 1e-12 * even.abs());
        assert_eq!(cylinder_shift(10, phi(0.0), 1e-6).unwrap().total, 0.0);
        assert!(cylinder_shift(0, phi(0.1), 1e-6).is_err());
    }
}
