//! Circular metallic string at finite temperature.
//!
//! With Fermi-Dirac occupations the mean S_N is replaced by
//!
//! ```text
//! C_T = sum_n (n + phi) / (exp[(eps_R (n + phi)^2 - E0) / kT] + 1)
//! ```
//!
//! which tends to N0 S_N as T -> 0. Inside the window
//! N0 hbar^2 / (4 pi^2 k m_e R^2) << T << N0^2 hbar^2 / (8 pi k m_e R^2) a
//! Poisson-sum estimate gives
//!
//! ```text
//! C_T ~ -(4 pi m_e R^2 k T / hbar^2) sin(2 e F / hbar)
//!       * exp(-4 pi^2 m_e R^2 k T / (N0 hbar^2))
//! ```
//!
//! All sums run in level units: energies in eps_R = hbar^2 / (2 m_e R^2) and
//! temperatures as tau = k T / eps_R. E0 is the chemical potential that keeps
//! the particle number at N0 (bisection), unless the frozen ground-state
//! Fermi energy is requested.
//!
//! The direct sum pairs the levels k + r and -k + r (r the folded flux). Each
//! pair contributes k (f+ - f-) + r (f+ + f-), and the occupation difference
//! is evaluated in log space so that the large cancellation between the two
//! sides of the Fermi sea does not cost precision.

use std::f64::consts::{LN_2, PI, TAU};

use serde::Serialize;

use crate::constants::{level_energy_scale, EnergyScale, ReducedFlux, SI};
use crate::error::{positive, Error, Result};
use crate::parallel::{self, Execution};
use crate::report::PhaseShiftReport;
use crate::string::check_count;

pub const DEFAULT_A0: f64 = 2.5e-10;
pub const DEFAULT_TRUNC_EPS: f64 = 1e-12;

/// Occupations below exp(-745) underflow; nothing past this contributes.
const UNDERFLOW_EXPONENT: f64 = 750.0;
const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum ChemicalPotential {
    /// Solve sum f = N0 at the actual temperature.
    #[default]
    NumberConserving,
    /// Keep the T = 0 Fermi energy (midway between levels N0 and N0 + 1).
    FrozenGroundState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalConfig {
    pub n0: u64,
    /// Ring radius R (m).
    pub radius: f64,
    /// Temperature T (K).
    pub temperature: f64,
    pub phi: ReducedFlux,
    /// Relative tail-truncation tolerance, in (0, 1e-6].
    pub trunc_eps: f64,
    /// Interatomic distance a0 (m); only used to derive N0 from R.
    pub a0: f64,
    pub chemical_potential: ChemicalPotential,
}

impl ThermalConfig {
    pub fn new(n0: u64, radius: f64, temperature: f64, phi: ReducedFlux) -> Self {
        Self {
            n0,
            radius,
            temperature,
            phi,
            trunc_eps: DEFAULT_TRUNC_EPS,
            a0: DEFAULT_A0,
            chemical_potential: ChemicalPotential::NumberConserving,
        }
    }

    /// One electron per atom: N0 = round(2 pi R / a0).
    pub fn from_lattice(radius: f64, a0: f64, temperature: f64, phi: ReducedFlux) -> Result<Self> {
        let n0 = electrons_on_ring(radius, a0)?;
        Ok(Self {
            a0,
            ..Self::new(n0, radius, temperature, phi)
        })
    }

    pub fn at_temperature(&self, temperature: f64) -> Self {
        Self {
            temperature,
            ..*self
        }
    }

    pub fn at_flux(&self, phi: ReducedFlux) -> Self {
        Self { phi, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        check_count(self.n0)?;
        positive("R", self.radius)?;
        positive("a0", self.a0)?;
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::Domain {
                name: "T",
                value: self.temperature,
                expected: "finite and >= 0",
            });
        }
        if !(self.trunc_eps > 0.0 && self.trunc_eps <= 1e-6) {
            return Err(Error::Domain {
                name: "trunc_eps",
                value: self.trunc_eps,
                expected: "in (0, 1e-6]",
            });
        }
        Ok(())
    }

    pub fn energy_scale(&self) -> Result<EnergyScale> {
        level_energy_scale(self.radius)
    }

    fn reduced(&self) -> Result<ReducedRing> {
        self.validate()?;
        if self.temperature == 0.0 {
            return Err(Error::Usage(
                "T = 0 has no thermal smearing; use the zero-temperature string model".into(),
            ));
        }
        let scale = self.energy_scale()?;
        Ok(ReducedRing {
            n0: self.n0,
            r: self.phi.wrap().reduced,
            tau: scale.reduced_temperature(self.temperature),
            trunc_eps: self.trunc_eps,
        })
    }
}

/// N0 = round(2 pi R / a0).
pub fn electrons_on_ring(radius: f64, a0: f64) -> Result<u64> {
    let r = positive("R", radius)?;
    let a = positive("a0", a0)?;
    let n = (TAU * r / a).round();
    if n < 1.0 {
        return Err(Error::Domain {
            name: "2 pi R / a0",
            value: n,
            expected: ">= 1",
        });
    }
    Ok(n as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermiLevel {
    /// Chemical potential E0 (J).
    pub e0: f64,
    /// E0 / eps_R.
    pub reduced: f64,
    /// |sum f - N0| at the returned E0.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityWindow {
    /// N0 hbar^2 / (4 pi^2 k m_e R^2) (K).
    pub t_lo: f64,
    /// N0^2 hbar^2 / (8 pi k m_e R^2) (K).
    pub t_hi: f64,
}

impl ValidityWindow {
    pub fn contains(&self, temperature: f64) -> bool {
        temperature > self.t_lo && temperature < self.t_hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticValue {
    pub value: f64,
    /// False when T lies outside the validity window.
    pub in_window: bool,
}

/// Ring in level units: folded flux r, reduced temperature tau.
#[derive(Debug, Clone, Copy)]
struct ReducedRing {
    n0: u64,
    r: f64,
    tau: f64,
    trunc_eps: f64,
}

fn fermi(z: f64) -> f64 {
    if z > 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

/// ln cosh(x)
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// ln sinh(x) for x > 0
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

/// f(a) - f(b) for the occupation f(z) = 1/(e^z + 1), accurate when both
/// occupations are close to 0 or 1.
fn fermi_difference(a: f64, b: f64) -> f64 {
    // f(a) - f(b) = sinh((b - a)/2) / (2 cosh(a/2) cosh(b/2))
    let half = 0.5 * (b - a);
    if half == 0.0 {
        return 0.0;
    }
    let ln_mag = ln_sinh(half.abs()) - LN_2 - ln_cosh(0.5 * a) - ln_cosh(0.5 * b);
    ln_mag.exp().copysign(half)
}

impl ReducedRing {
    fn cap(&self, mu: f64) -> u64 {
        ((mu.max(0.0) + UNDERFLOW_EXPONENT * self.tau).sqrt() + 2.0).ceil() as u64
    }

    /// k past the Fermi surface on both sides of the pair.
    fn beyond_fermi(&self, k: u64, mu: f64) -> bool {
        let inner = k as f64 - self.r.abs();
        inner > 0.0 && inner * inner > mu
    }

    fn z(&self, x: f64, mu: f64) -> f64 {
        (x * x - mu) / self.tau
    }

    fn count(&self, mu: f64) -> f64 {
        let mut total = fermi(self.z(self.r, mu));
        for k in 1..=self.cap(mu) {
            let kf = k as f64;
            let pair = fermi(self.z(kf + self.r, mu)) + fermi(self.z(-kf + self.r, mu));
            total += pair;
            if self.beyond_fermi(k, mu) && pair < self.trunc_eps * total {
                break;
            }
        }
        total
    }

    fn c_t(&self, mu: f64) -> f64 {
        let r = self.r;
        let f0 = fermi(self.z(r, mu));
        let mut sum = r * f0;
        let mut scale = r.abs() * f0;
        for k in 1..=self.cap(mu) {
            let kf = k as f64;
            let zp = self.z(kf + r, mu);
            let zm = self.z(-kf + r, mu);
            let (fp, fm) = (fermi(zp), fermi(zm));
            let pair = kf * fermi_difference(zp, zm) + r * (fp + fm);
            sum += pair;
            scale += (kf + r).abs() * fp + (kf - r).abs() * fm;
            if self.beyond_fermi(k, mu) && pair.abs() < self.trunc_eps * scale {
                break;
            }
        }
        sum
    }

    /// Midpoint between the N0-th and (N0+1)-th level at T = 0.
    fn ground_state_fermi(&self) -> f64 {
        let n = self.n0 as usize;
        let mut levels: Vec<f64> = Vec::with_capacity(2 * n + 3);
        levels.push(self.r * self.r);
        for k in 1..=(n as u64 + 1) {
            let kf = k as f64;
            levels.push((kf + self.r).powi(2));
            levels.push((kf - self.r).powi(2));
        }
        levels.sort_by(f64::total_cmp);
        0.5 * (levels[n - 1] + levels[n])
    }

    fn solve_mu(&self) -> Result<(f64, f64)> {
        let target = self.n0 as f64;
        let mut hi = (target + 2.0).powi(2);
        let mut lo = -self.tau;
        let mut widen = self.tau.max(1.0);
        while self.count(lo) >= target {
            lo -= widen;
            widen *= 2.0;
            if !lo.is_finite() {
                return Err(Error::Internal("cannot bracket the chemical potential from below".into()));
            }
        }
        let mut widen = hi.max(1.0);
        while self.count(hi) <= target {
            hi += widen;
            widen *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Internal("cannot bracket the chemical potential from above".into()));
            }
        }
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count(mid) > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mu = 0.5 * (lo + hi);
        let residual = (self.count(mu) - target).abs();
        if residual >= 1e-9 * target {
            return Err(Error::Internal(format!(
                "chemical potential residual {residual:e} exceeds 1e-9 N0"
            )));
        }
        Ok((mu, residual))
    }

    fn mu(&self, mode: ChemicalPotential) -> Result<(f64, f64)> {
        match mode {
            ChemicalPotential::NumberConserving => self.solve_mu(),
            ChemicalPotential::FrozenGroundState => {
                let mu = self.ground_state_fermi();
                Ok((mu, (self.count(mu) - self.n0 as f64).abs()))
            }
        }
    }
}

/// Chemical potential E0 for the configured temperature.
pub fn chemical_potential(cfg: &ThermalConfig) -> Result<FermiLevel> {
    let ring = cfg.reduced()?;
    let (mu, residual) = ring.mu(cfg.chemical_potential)?;
    let scale = cfg.energy_scale()?;
    Ok(FermiLevel {
        e0: mu * scale.eps_r,
        reduced: mu,
        residual,
    })
}

/// Total Fermi-Dirac occupation at a given chemical potential (J).
pub fn occupation_sum(cfg: &ThermalConfig, e0: f64) -> Result<f64> {
    let ring = cfg.reduced()?;
    Ok(ring.count(e0 / cfg.energy_scale()?.eps_r))
}

/// C_T by direct summation over the levels.
pub fn c_t_direct(cfg: &ThermalConfig) -> Result<f64> {
    let ring = cfg.reduced()?;
    let (mu, _) = ring.mu(cfg.chemical_potential)?;
    Ok(ring.c_t(mu))
}

pub fn validity_window(n0: u64, radius: f64) -> Result<ValidityWindow> {
    check_count(n0)?;
    let r = positive("R", radius)?;
    let base = SI.hbar * SI.hbar / (SI.k_b * SI.m_e * r * r);
    let n = n0 as f64;
    Ok(ValidityWindow {
        t_lo: n * base / (4.0 * PI * PI),
        t_hi: n * n * base / (8.0 * PI),
    })
}

/// The Poisson-sum estimate of C_T, evaluated as printed (sine argument
/// 2eF/hbar = 4 pi phi).
pub fn c_t_asymptotic(cfg: &ThermalConfig) -> Result<AsymptoticValue> {
    cfg.validate()?;
    let r = cfg.radius;
    let prefactor = 4.0 * PI * SI.m_e * r * r * SI.k_b * cfg.temperature / (SI.hbar * SI.hbar);
    let decay = (-PI * prefactor / cfg.n0 as f64).exp();
    let sine = (2.0 * TAU * cfg.phi.wrap().reduced).sin();
    let window = validity_window(cfg.n0, r)?;
    Ok(AsymptoticValue {
        value: -prefactor * sine * decay,
        in_window: window.contains(cfg.temperature),
    })
}

/// -4 pi^2 m_e R^2 k / (N0 hbar^2), the decay rate of C_T in 1/K.
pub fn predicted_decay_rate(n0: u64, radius: f64) -> f64 {
    -4.0 * PI * PI * SI.m_e * radius * radius * SI.k_b / (n0 as f64 * SI.hbar * SI.hbar)
}

pub fn thermal_shift(cfg: &ThermalConfig, impact: f64) -> Result<PhaseShiftReport> {
    let d = positive("d", impact)?;
    let level = chemical_potential(cfg)?;
    let c = c_t_direct(cfg)?;
    let asym = c_t_asymptotic(cfg)?;
    Ok(PhaseShiftReport::new(cfg.phi.ab_shift(), -(2.0 * SI.r0 / d) * c)
        .with_term("C_T", c)
        .with_term("C_T_asymptotic", asym.value)
        .with_term("in_window", if asym.in_window { 1.0 } else { 0.0 })
        .with_term("E0_over_eps_R", level.reduced))
}

/// Least-squares fit of ln|C_T| against T on a temperature grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub temperatures: Vec<f64>,
    pub c_t: Vec<f64>,
    /// Slope of ln|C_T| vs T (1/K).
    pub raw_slope: f64,
    /// Slope of ln|C_T / T| vs T, i.e. the exponent once the linear-in-T
    /// prefactor of the asymptotic form is divided out (1/K).
    pub exponent_slope: f64,
    /// -4 pi^2 m_e R^2 k / (N0 hbar^2) (1/K).
    pub predicted: f64,
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Temperature sweep of C_T between `t_from` and `t_to` (K) with a fit of
/// its exponential decay.
pub fn decay_fit(
    cfg: &ThermalConfig,
    t_from: f64,
    t_to: f64,
    points: usize,
    exec: Execution,
) -> Result<DecayFit> {
    if points < 2 || !(t_from > 0.0 && t_to > t_from) {
        return Err(Error::Config(
            "decay fit needs >= 2 points and 0 < t_from < t_to".into(),
        ));
    }
    let temperatures = crate::sweep::linspace(t_from, t_to, points);
    let c_t = parallel::map(exec, &temperatures, |&t| c_t_direct(&cfg.at_temperature(t)))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let ln_c: Vec<f64> = c_t.iter().map(|c| c.abs().ln()).collect();
    let ln_c_over_t: Vec<f64> = ln_c.iter().zip(&temperatures).map(|(l, t)| l - t.ln()).collect();
    Ok(DecayFit {
        raw_slope: ls_slope(&temperatures, &ln_c),
        exponent_slope: ls_slope(&temperatures, &ln_c_over_t),
        predicted: predicted_decay_rate(cfg.n0, cfg.radius),
        temperatures,
        c_t,
    })
}

/// Fourier sine content of C_T over one flux period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicContent {
    /// amplitudes[k - 1] multiplies sin(2 pi k phi).
    pub amplitudes: Vec<f64>,
    pub samples: usize,
}

impl HarmonicContent {
    pub fn amplitude(&self, harmonic: usize) -> f64 {
        self.amplitudes[harmonic - 1]
    }
}

/// Sine coefficients b_k = (2/M) sum_j C_T(j/M) sin(2 pi k j/M), k = 1..=harmonics.
///
/// The asymptotic form predicts a pure sin(4 pi phi) (k = 2); a first-order
/// Poisson estimate of the direct sum is led by sin(2 pi phi) (k = 1). The
/// amplitudes show which one the direct sum actually carries.
pub fn harmonic_content(
    cfg: &ThermalConfig,
    samples: usize,
    harmonics: usize,
    exec: Execution,
) -> Result<HarmonicContent> {
    if samples < 2 * harmonics + 1 {
        return Err(Error::Config(format!(
            "{samples} flux samples cannot resolve {harmonics} harmonics"
        )));
    }
    let phis: Vec<f64> = (0..samples).map(|j| j as f64 / samples as f64).collect();
    let values = parallel::map(exec, &phis, |&p| {
        c_t_direct(&cfg.at_flux(ReducedFlux::new(p)?))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let amplitudes = (1..=harmonics)
        .map(|k| {
            let s: f64 = phis
                .iter()
                .zip(&values)
                .map(|(p, c)| c * (TAU * k as f64 * p).sin())
                .sum();
            2.0 * s / samples as f64
        })
        .collect();
    Ok(HarmonicContent {
        amplitudes,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::string::s_n_closed;

    fn phi(v: f64) -> ReducedFlux {
        ReducedFlux::new(v).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// Temperature (K) for a reduced temperature tau on a ring of radius R.
    fn kelvin(radius: f64, tau: f64) -> f64 {
        level_energy_scale(radius).unwrap().kelvin(tau)
    }

    #[test]
    fn fermi_difference_matches_direct() {
        for (a, b) in [(-3.0, 2.0), (0.1, 0.3), (-40.0, -38.0), (5.0, -5.0), (30.0, 31.0)] {
            let direct = fermi(a) - fermi(b);
            assert!((fermi_difference(a, b) - direct).abs() < 1e-15, "{a} {b}");
        }
        // deep in the Fermi sea the direct difference rounds to zero
        let d = fermi_difference(-100.0, -101.0);
        let expected = (-101.0f64).exp() - (-100.0f64).exp();
        assert!(rel(d, expected) < 1e-12, "{d} vs {expected}");
        assert_eq!(fermi_difference(1e6, 1e6 + 10.0), 0.0);
    }

    #[test]
    fn window_matches_printed_values() {
        let n0 = electrons_on_ring(1e-6, 2.5e-10).unwrap();
        assert_eq!(n0, 25133);
        let w = validity_window(n0, 1e-6).unwrap();
        assert!(rel(w.t_lo, 0.56) < 0.02, "{}", w.t_lo);
        assert!(rel(w.t_hi, 2.2e4) < 0.02, "{}", w.t_hi);
        assert!(rel(w.t_hi / w.t_lo, PI * n0 as f64 / 2.0) < 1e-12);
        assert!(validity_window(0, 1e-6).is_err());
        assert!(validity_window(10, 0.0).is_err());
    }

    #[test]
    fn zero_temperature_is_usage_error() {
        let cfg = ThermalConfig::new(10, 1e-6, 0.0, phi(0.1));
        assert!(matches!(c_t_direct(&cfg), Err(Error::Usage(_))));
    }

    #[test]
    fn invalid_trunc_eps() {
        let mut cfg = ThermalConfig::new(10, 1e-6, 1.0, phi(0.1));
        cfg.trunc_eps = 1e-3;
        assert!(c_t_direct(&cfg).is_err());
    }

    #[test]
    fn occupation_sums_to_n0() {
        let r = 1e-6;
        let cfg = ThermalConfig::new(101, r, kelvin(r, 1.0), phi(0.0));
        let level = chemical_potential(&cfg).unwrap();
        let total = occupation_sum(&cfg, level.e0).unwrap();
        assert!((total - 101.0).abs() < 1e-9);
        assert!(level.residual < 1e-9 * 101.0);
    }

    #[test]
    fn low_temperature_fermi_level_between_levels() {
        // N0 = 4, phi = 0.1: levels 0.01, 0.81, 1.21, 3.61 | 4.41
        let r = 1e-6;
        let cfg = ThermalConfig::new(4, r, kelvin(r, 0.01), phi(0.1));
        let mu = chemical_potential(&cfg).unwrap().reduced;
        assert!(mu > 3.61 && mu < 4.41, "{mu}");
    }

    #[test]
    fn large_ring_fermi_level_near_ground_state() {
        let r = 1e-6;
        let n0 = 25000;
        let w = validity_window(n0, r).unwrap();
        let t_mid = (w.t_lo * w.t_hi).sqrt();
        let cfg = ThermalConfig::new(n0, r, t_mid, phi(0.2));
        let mu = chemical_potential(&cfg).unwrap().reduced;
        let tau = level_energy_scale(r).unwrap().reduced_temperature(t_mid);
        let ground = (n0 as f64 / 2.0).powi(2);
        assert!((mu - ground).abs() < 3.0 * tau, "mu {mu} ground {ground} tau {tau}");
    }

    #[test]
    fn vanishes_at_zero_flux_and_is_periodic() {
        let r = 1e-6;
        let base = ThermalConfig::new(200, r, kelvin(r, 20.0), phi(0.0));
        assert_eq!(c_t_direct(&base).unwrap(), 0.0);
        let a = c_t_direct(&base.at_flux(phi(0.17))).unwrap();
        let b = c_t_direct(&base.at_flux(phi(1.17))).unwrap();
        let c = c_t_direct(&base.at_flux(phi(-0.17))).unwrap();
        assert!(rel(b, a) < 1e-10);
        assert!(rel(-c, a) < 1e-12);
    }

    #[test]
    fn low_temperature_limit_matches_string() {
        let r = 1e-6;
        for n0 in [10u64, 11] {
            let w = validity_window(n0, r).unwrap();
            for p in [0.1, 0.3, -0.25] {
                let cfg = ThermalConfig::new(n0, r, w.t_lo / 100.0, phi(p));
                let direct = c_t_direct(&cfg).unwrap();
                let zero_t = n0 as f64 * s_n_closed(n0, phi(p)).unwrap();
                assert!(rel(direct, zero_t) < 1e-6, "n0={n0} phi={p}: {direct} vs {zero_t}");
            }
        }
    }

    #[test]
    fn frozen_and_conserving_agree_at_low_t() {
        let r = 1e-6;
        let w = validity_window(50, r).unwrap();
        let mut cfg = ThermalConfig::new(50, r, w.t_lo / 50.0, phi(0.3));
        let a = c_t_direct(&cfg).unwrap();
        cfg.chemical_potential = ChemicalPotential::FrozenGroundState;
        let b = c_t_direct(&cfg).unwrap();
        assert!(rel(a, b) < 1e-9);
    }

    #[test]
    fn asymptotic_closed_form_identity() {
        let r = 1e-6;
        let n0 = 1000;
        let w = validity_window(n0, r).unwrap();
        let cfg = ThermalConfig::new(n0, r, 3.0 * w.t_lo, phi(0.1));
        let (t1, t2) = (3.0 * w.t_lo, 7.0 * w.t_lo);
        let c1 = c_t_asymptotic(&cfg.at_temperature(t1)).unwrap();
        let c2 = c_t_asymptotic(&cfg.at_temperature(t2)).unwrap();
        assert!(c1.in_window && c2.in_window);
        let lhs = c2.value.abs().ln() - c1.value.abs().ln();
        let rhs = (t2 / t1).ln() + predicted_decay_rate(n0, r) * (t2 - t1);
        assert!((lhs - rhs).abs() < 1e-12);
        assert_eq!(c_t_asymptotic(&cfg.at_flux(phi(0.0))).unwrap().value, 0.0);
        assert!(!c_t_asymptotic(&cfg.at_temperature(w.t_lo / 2.0)).unwrap().in_window);
    }

    #[test]
    fn thermal_shift_ab_term_independent_of_temperature() {
        let r = 1e-6;
        let w = validity_window(300, r).unwrap();
        let cfg = ThermalConfig::new(300, r, w.t_lo, phi(0.3));
        let a = thermal_shift(&cfg, 1e-6).unwrap();
        let b = thermal_shift(&cfg.at_temperature(5.0 * w.t_lo), 1e-6).unwrap();
        assert_eq!(a.ab, b.ab);
        assert!(b.supplementary.abs() < a.supplementary.abs());
        let zero = thermal_shift(&cfg.at_flux(phi(0.0)), 1e-6).unwrap();
        assert_eq!(zero.supplementary, 0.0);
    }

    #[test]
    fn not_proportional_to_n0_deep_in_window() {
        // fixed absolute temperature, doubled ring population
        let r = 1e-6;
        let w = validity_window(2000, r).unwrap();
        let t = 8.0 * w.t_lo;
        let c1 = c_t_direct(&ThermalConfig::new(2000, r, t, phi(0.1))).unwrap();
        let c2 = c_t_direct(&ThermalConfig::new(4000, r, t, phi(0.1))).unwrap();
        assert!(c1.abs() < 1e-2 * 2000.0);
        let ratio = (c2 / c1).abs();
        assert!(!(1.8..2.2).contains(&ratio), "ratio {ratio}");
    }
}
