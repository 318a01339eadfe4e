//! Brute-force spectrum by direct quadrature.
//!
//! The emission probability density is evaluated from the first-order
//! amplitude: a double time integral over `[0, t]^2` times a full-sphere
//! angular integral of the explicit polarization sum, with the image phase
//! `exp(i k.Rbar_uv - i k_z a [sin(w t') + sin(w t'')])` kept exact in `a`
//! and `t'`, `t''` always real. Nothing here calls the radiation tensor or
//! the lineshape code; only configuration types and unit constants are
//! shared with the closed forms.
//!
//! The time phase factorizes, so the double integral over `(t', t'')` is the
//! product `conj(G(-kappa)) G(kappa)` of single integrals
//! `G(kappa) = int_0^t exp(i D t - i kappa sin(w t)) dt`, evaluated with the
//! same composite rule in both variables.

pub mod modes;
pub mod quadrature;

use std::f64::consts::PI;

use nalgebra::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, SystemConfig, Vec3, SIGMA};
use crate::units;

pub use modes::{box_wavevector, oracle_mode_functions, polarization_basis};
pub use quadrature::{Rule, SphereRule};

type C64 = Complex<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("omega_k = {0:e} rad/s must be positive")]
    NonPositiveFrequency(f64),
    #[error("time t = {0:e} s must be >= 0")]
    NegativeTime(f64),
    #[error("quadrature did not converge: value {value:e}, error estimate {estimate:e} above target {target:e}")]
    NotConverged { value: f64, estimate: f64, target: f64 },
    #[error("position {position:?} m lies outside the box of side {side:e} m")]
    OutsideBox { position: [f64; 3], side: f64 },
    #[error("polarization index {0} (expected 0 or 1)")]
    BadPolarization(usize),
}

/// Sizes of the time and angular rules and the accuracy target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Gauss-Legendre points per time panel.
    pub time_order: usize,
    /// Number of panels over `[0, t]`; `None` picks one panel per half
    /// radian-turn of the fastest phase.
    pub time_panels: Option<usize>,
    /// Gauss-Legendre points in `cos(theta)`.
    pub n_theta: usize,
    /// Equally spaced points in `phi`.
    pub n_phi: usize,
    /// Relative error target for the total.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { time_order: 16, time_panels: None, n_theta: 64, n_phi: 128, rel_tol: 1e-6 }
    }
}

impl QuadratureSpec {
    /// Every rule doubled.
    pub fn refined(&self) -> Self {
        Self {
            time_order: 2 * self.time_order,
            time_panels: self.time_panels,
            n_theta: 2 * self.n_theta,
            n_phi: 2 * self.n_phi,
            rel_tol: self.rel_tol,
        }
    }

    /// Every rule halved; used for the error estimate.
    fn coarse(&self) -> Self {
        Self {
            time_order: (self.time_order / 2).max(2),
            time_panels: self.time_panels,
            n_theta: (self.n_theta / 2).max(2),
            n_phi: (self.n_phi / 2).max(2),
            rel_tol: self.rel_tol,
        }
    }

    fn panels(&self, detuning: f64, omega_p: f64, ka: f64, t: f64) -> usize {
        self.time_panels
            .unwrap_or_else(|| ((detuning.abs() + (1.0 + ka) * omega_p) * t / PI).ceil() as usize + 1)
            .max(1)
    }
}

/// Spectral density in s, split like the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OraclePoint {
    pub omega_k: f64,
    pub detuning: f64,
    pub single_atom: f64,
    /// Includes the Bell-state sign.
    pub interference: f64,
    pub total: f64,
    /// `|value - value at half order|`, floored at roundoff level.
    pub error_estimate: f64,
    pub time_nodes: usize,
}

pub fn oracle_spectrum_point(
    config: &SystemConfig,
    omega_k: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<OraclePoint, OracleError> {
    config.validate()?;
    if !(omega_k > 0.0) {
        return Err(OracleError::NonPositiveFrequency(omega_k));
    }
    if !(t >= 0.0) {
        return Err(OracleError::NegativeTime(t));
    }
    let fine = evaluate(config, omega_k, t, quad);
    let coarse = evaluate(config, omega_k, t, &quad.coarse());
    let total = fine.single + fine.interference;
    let k = units::wavenumber_cgs(units::wavenumber(omega_k));
    let mu = config.atom_a.dipole.norm() + config.atom_b.dipole.norm();
    let scale = k.powi(3) / (8.0 * PI * PI * units::HBAR_CGS) * 4.0 * PI * mu * mu * t * t;
    let floor = 1e-12 * scale;
    let estimate = (total - coarse.single - coarse.interference).abs().max(floor);
    let target = quad.rel_tol * total.abs() + floor;
    if estimate > target {
        return Err(OracleError::NotConverged { value: total, estimate, target });
    }
    Ok(OraclePoint {
        omega_k,
        detuning: omega_k - config.omega0,
        single_atom: fine.single,
        interference: fine.interference,
        total,
        error_estimate: estimate,
        time_nodes: fine.time_nodes,
    })
}

struct Raw {
    single: f64,
    interference: f64,
    time_nodes: usize,
}

struct Pair {
    u: usize,
    v: usize,
    weight: f64,
    interference: bool,
}

fn evaluate(config: &SystemConfig, omega_k: f64, t: f64, quad: &QuadratureSpec) -> Raw {
    let detuning = omega_k - config.omega0;
    let k = omega_k / units::SPEED_OF_LIGHT_SI;
    let mirror = config.mirror;
    let (a, omega_p) = if mirror.is_static() { (0.0, 0.0) } else { (mirror.amplitude, mirror.frequency) };

    let panels = quad.panels(detuning, omega_p, k * a, t);
    let time = Rule::composite(quad.time_order, panels, 0.0, t);
    let base: Vec<C64> =
        time.nodes.iter().zip(&time.weights).map(|(&s, &w)| C64::from_polar(w, detuning * s)).collect();
    let wobble: Vec<f64> = time.nodes.iter().map(|&s| (omega_p * s).sin()).collect();
    let g = |kappa: f64| -> C64 {
        if kappa == 0.0 {
            return base.iter().sum();
        }
        base.iter().zip(&wobble).map(|(b, &s)| b * C64::from_polar(1.0, -kappa * s)).sum()
    };
    let g0 = g(0.0);
    let direct_time = g0.norm_sqr();

    let pos = [config.atom_a.position, config.atom_b.position];
    let mu = [config.atom_a.dipole, config.atom_b.dipole];
    let sigma_mu = [SIGMA.apply(&mu[0]), SIGMA.apply(&mu[1])];
    let sign = config.bell_state.sign();
    // Both cross terms of the squared amplitude reduce to the same integrand.
    let pairs = [
        Pair { u: 0, v: 0, weight: 1.0, interference: false },
        Pair { u: 1, v: 1, weight: 1.0, interference: false },
        Pair { u: 0, v: 1, weight: 2.0 * sign, interference: true },
    ];
    let direct_sep: Vec<Vec3> = pairs.iter().map(|p| pos[p.u] - pos[p.v]).collect();
    let image_sep: Vec<Vec3> = pairs.iter().map(|p| pos[p.u] - SIGMA.apply(&pos[p.v])).collect();
    let with_images = mirror.enabled;

    let sphere = SphereRule::new(quad.n_theta, quad.n_phi);
    let rows: Vec<[C64; 2]> = (0..sphere.cos_theta.len())
        .into_par_iter()
        .map(|i| {
            let kappa = k * a * sphere.cos_theta.nodes[i];
            let image_time = if with_images { g(-kappa).conj() * g(kappa) } else { C64::new(0.0, 0.0) };
            let mut acc = [C64::new(0.0, 0.0); 2];
            for j in 0..sphere.phi.len() {
                let khat = Vec3::from(sphere.direction(i, j));
                let kvec = khat * k;
                let pol = polarization_basis(&khat);
                let w = sphere.weight(i, j);
                for (n, p) in pairs.iter().enumerate() {
                    let direct: f64 = pol.iter().map(|e| mu[p.u].dot(e) * mu[p.v].dot(e)).sum();
                    let mut term = C64::from_polar(direct, kvec.dot(&direct_sep[n])) * direct_time;
                    if with_images {
                        let image: f64 = pol.iter().map(|e| sigma_mu[p.u].dot(e) * mu[p.v].dot(e)).sum();
                        term -= C64::from_polar(image, kvec.dot(&image_sep[n])) * image_time;
                    }
                    acc[p.interference as usize] += term * (w * p.weight);
                }
            }
            acc
        })
        .collect();
    let mut sum = [C64::new(0.0, 0.0); 2];
    for row in rows {
        sum[0] += row[0];
        sum[1] += row[1];
    }
    let kc = units::wavenumber_cgs(k);
    let pref = kc.powi(3) / (8.0 * PI * PI * units::HBAR_CGS);
    Raw { single: pref * sum[0].re, interference: pref * sum[1].re, time_nodes: time.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AtomSpec, BellState, MirrorSpec};

    fn fig2(t_mirror: MirrorSpec) -> SystemConfig {
        SystemConfig {
            atom_a: AtomSpec::from_si([0.0, 0.0, 1e-6], [1e-30, 0.0, 0.0]),
            atom_b: AtomSpec::from_si([0.0, 0.0, 1.1e-6], [1e-30, 0.0, 0.0]),
            mirror: t_mirror,
            omega0: 1e15,
            bell_state: BellState::Symmetric,
            dicke_limit: false,
        }
    }

    #[test]
    fn free_single_atom_matches_sinc_squared() {
        // Far, mutually orthogonal dipoles without a mirror: only the direct
        // single-atom terms survive the angular integral.
        let mut cfg = fig2(MirrorSpec::absent());
        cfg.atom_b.dipole = Vec3::new(0.0, 1.0, 0.0) * cfg.atom_a.dipole.norm();
        cfg.atom_b.position = Vec3::new(0.0, 0.0, 3e-6);
        let t = 2e-9;
        let omega_k = cfg.omega0 + 7e8;
        let got = oracle_spectrum_point(&cfg, omega_k, t, &QuadratureSpec::default()).unwrap();
        let d: f64 = 7e8;
        let h0 = ((d * t / 2.0).sin() / (d / 2.0)).powi(2);
        let k = units::wavenumber_cgs(omega_k / units::SPEED_OF_LIGHT_SI);
        let want = k.powi(3) / (2.0 * PI * units::HBAR_CGS) * h0 * (4.0 / 3.0) * cfg.atom_a.dipole.norm_squared();
        assert!((got.single_atom / want - 1.0).abs() < 1e-10);
        assert!(got.interference.abs() < 1e-10 * want);
    }

    #[test]
    fn bell_sign_flips_interference() {
        let cfg = fig2(MirrorSpec::oscillating(2e-7, 1.5e9));
        let omega_k = cfg.omega0 + 1.5e9;
        let quad = QuadratureSpec::default();
        let s = oracle_spectrum_point(&cfg, omega_k, 5e-9, &quad).unwrap();
        let a = oracle_spectrum_point(&cfg.with_bell_state(BellState::Antisymmetric), omega_k, 5e-9, &quad).unwrap();
        assert_eq!(s.single_atom, a.single_atom);
        assert_eq!(s.interference, -a.interference);
    }

    #[test]
    fn zero_time_gives_zero() {
        let cfg = fig2(MirrorSpec::oscillating(2e-7, 1.5e9));
        let p = oracle_spectrum_point(&cfg, cfg.omega0, 0.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(p.total, 0.0);
    }

    #[test]
    fn starved_rule_reports_non_convergence() {
        let cfg = fig2(MirrorSpec::oscillating(2e-7, 1.5e9));
        let quad = QuadratureSpec { n_theta: 4, n_phi: 4, ..QuadratureSpec::default() };
        let r = oracle_spectrum_point(&cfg, cfg.omega0 + 1e9, 5e-9, &quad);
        assert!(matches!(r, Err(OracleError::NotConverged { .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = fig2(MirrorSpec::fixed());
        let q = QuadratureSpec::default();
        assert!(matches!(oracle_spectrum_point(&cfg, -1.0, 1e-9, &q), Err(OracleError::NonPositiveFrequency(_))));
        assert!(matches!(oracle_spectrum_point(&cfg, 1e15, -1e-9, &q), Err(OracleError::NegativeTime(_))));
        let mut bad = cfg.clone();
        bad.atom_a.position.z = -1e-6;
        assert!(matches!(oracle_spectrum_point(&bad, 1e15, 1e-9, &q), Err(OracleError::Config(_))));
    }
}
