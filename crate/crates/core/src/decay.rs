//! Collective decay rate `Gamma(t) = Gamma_A + Gamma_B +/- Gamma_AB` to first
//! order in the mirror amplitude, with all space-dependent factors taken at
//! the transition wavenumber `k0`.
//!
//! Two independent assemblies are provided: [`decay_rate`] contracts the
//! radiation tensor and its z-derivative for any geometry, and
//! [`decay_rate_expanded`] evaluates the fully expanded radial forms for two
//! atoms stacked along the mirror normal. [`cross_validate`] compares them.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{einstein_a, BellState, ConfigError, Geometry, Mat3, SystemConfig, Vec3, SIGMA};
use crate::coupling::Couplings;
use crate::tensor::TensorError;
use crate::units;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecayError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("expanded form needs both atoms on one normal to the mirror (transverse offset {offset:e} m)")]
    NotAxisAligned { offset: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayComponents {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_ab: f64,
    pub total: f64,
}

impl DecayComponents {
    fn assemble(gamma_a: f64, gamma_b: f64, gamma_ab: f64, bell: BellState) -> Self {
        Self { gamma_a, gamma_b, gamma_ab, total: gamma_a + gamma_b + bell.sign() * gamma_ab }
    }

    fn scaled(&self, by: f64) -> Self {
        Self {
            gamma_a: self.gamma_a / by,
            gamma_b: self.gamma_b / by,
            gamma_ab: self.gamma_ab / by,
            total: self.total / by,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayResult {
    /// Rates in 1/s.
    pub absolute: DecayComponents,
    /// Rates in units of the Einstein coefficient of atom A.
    pub scaled: DecayComponents,
    pub einstein_a: f64,
    pub t: f64,
    pub bell_state: BellState,
    /// Set when the first-order total comes out negative, i.e. the amplitude
    /// is outside the perturbative regime. The value is not clamped.
    pub negative_total: bool,
}

impl DecayResult {
    fn new(gamma_a: f64, gamma_b: f64, gamma_ab: f64, config: &SystemConfig, t: f64) -> Self {
        let absolute = DecayComponents::assemble(gamma_a, gamma_b, gamma_ab, config.bell_state);
        let a = einstein_a(config);
        Self {
            absolute,
            scaled: absolute.scaled(a),
            einstein_a: a,
            t,
            bell_state: config.bell_state,
            negative_total: absolute.total < 0.0,
        }
    }
}

fn modulation(config: &SystemConfig, t: f64) -> f64 {
    // 2 a sin(omega_p t)
    2.0 * config.mirror.displacement(t)
}

/// General-geometry rate from tensor contractions.
pub fn decay_rate(config: &SystemConfig, geometry: &Geometry, t: f64) -> Result<DecayResult, DecayError> {
    let k0 = config.k0();
    let c = Couplings::evaluate(config, geometry, k0)?;
    let pref = units::wavenumber_cgs(k0).powi(3) / units::HBAR_CGS;
    let m = modulation(config, t);
    let mu_a = &config.atom_a.dipole;
    let mu_b = &config.atom_b.dipole;

    let img = c.image.unwrap_or_default();
    // Couplings sums the two single-atom image terms; split them back out.
    let (img_a, img_b) = match geometry.images() {
        Some(g) => (single_image(k0, &g.rbar_a, mu_a)?, single_image(k0, &g.rbar_b, mu_b)?),
        None => ([0.0; 2], [0.0; 2]),
    };
    let gamma_a = pref * (2.0 / 3.0 * mu_a.norm_squared() - img_a[0] + m * img_a[1]);
    let gamma_b = pref * (2.0 / 3.0 * mu_b.norm_squared() - img_b[0] + m * img_b[1]);
    let gamma_ab = 2.0 * pref * (c.free_cross - img.cross[0] + m * img.cross[1]);
    Ok(DecayResult::new(gamma_a, gamma_b, gamma_ab, config, t))
}

fn single_image(k: f64, rbar: &Vec3, mu: &Vec3) -> Result<[f64; 2], TensorError> {
    let (t, d) = crate::tensor::tau_with_derivs(k, rbar)?;
    let left = SIGMA.apply(mu);
    Ok([left.dot(&(t.tau * mu)), left.dot(&(d.d1 * mu))])
}

/// Relative transverse offset below which two atoms count as stacked on one normal.
pub const AXIS_TOLERANCE: f64 = 1e-12;

/// Expanded radial forms for atoms on a common normal to the mirror.
///
/// The cross-atom static image bracket is evaluated as printed, with the
/// projector `I - n_A n_AB^T` built from the self-image direction of atom A
/// and the cross-image direction. For stacked atoms both are `+z`, so the
/// result coincides with the tensor form.
pub fn decay_rate_expanded(config: &SystemConfig, geometry: &Geometry, t: f64) -> Result<DecayResult, DecayError> {
    let ra = &config.atom_a.position;
    let rb = &config.atom_b.position;
    let offset = ((ra.x - rb.x).powi(2) + (ra.y - rb.y).powi(2)).sqrt();
    if offset > AXIS_TOLERANCE * ra.norm().max(rb.norm()) {
        return Err(DecayError::NotAxisAligned { offset });
    }
    let k0 = config.k0();
    let pref = units::wavenumber_cgs(k0).powi(3) / units::HBAR_CGS;
    let m = modulation(config, t);
    let mu_a = &config.atom_a.dipole;
    let mu_b = &config.atom_b.dipole;
    let eye = Mat3::identity();
    let sigma = SIGMA.matrix();
    let contract = |l: &Vec3, mat: &Mat3, r: &Vec3| l.dot(&(mat * r));

    let self_rate = |mu: &Vec3, rbar: Option<&Vec3>| -> f64 {
        let mut bracket = eye * (2.0 / 3.0);
        if let Some(rbar) = rbar {
            let len = rbar.norm();
            let n = rbar / len;
            let x = k0 * len;
            bracket -= sigma * static_bracket(&n, x);
            bracket += sigma * moving_bracket(&n, x) * (m / len);
        }
        contract(mu, &bracket, mu)
    };

    let images = geometry.images();
    let gamma_a = pref * self_rate(mu_a, images.map(|g| &g.rbar_a));
    let gamma_b = pref * self_rate(mu_b, images.map(|g| &g.rbar_b));

    let mut cross = if geometry.is_colocated() {
        eye * (2.0 / 3.0)
    } else {
        let len = geometry.r_ab_len();
        static_bracket(&(geometry.r_ab / len), k0 * len)
    };
    if let Some(g) = images {
        let len = g.rbar_ab_len();
        let n = g.rbar_ab / len;
        let n_a = g.rbar_a / g.rbar_a_len();
        let x = k0 * len;
        let (s, c) = x.sin_cos();
        let q = s / x.powi(3) - c / x.powi(2);
        let printed = (eye - n * n.transpose() * 3.0) * q - (eye - n_a * n.transpose()) * (s / x);
        cross += sigma * printed;
        cross += sigma * moving_bracket(&n, x) * (m / len);
    }
    let gamma_ab = 2.0 * pref * contract(mu_a, &cross, mu_b);
    Ok(DecayResult::new(gamma_a, gamma_b, gamma_ab, config, t))
}

/// `-(I - 3nn)(sin x/x^3 - cos x/x^2) + (I - nn) sin x/x`.
fn static_bracket(n: &Vec3, x: f64) -> Mat3 {
    let eye = Mat3::identity();
    let nn = n * n.transpose();
    let (s, c) = x.sin_cos();
    -(eye - nn * 3.0) * (s / x.powi(3) - c / x.powi(2)) + (eye - nn) * (s / x)
}

/// Bracket multiplying `2 a sin(omega_p t) / Rbar` for a separation along +z.
fn moving_bracket(n: &Vec3, x: f64) -> Mat3 {
    let eye = Mat3::identity();
    let nn = n * n.transpose();
    let ez = Vec3::z();
    let (s, c) = x.sin_cos();
    let q = s / x.powi(3) - c / x.powi(2);
    (eye - nn) * c - (eye - nn * 3.0) * (2.0 * s / x) + (eye - nn * 5.0) * (3.0 * q)
        - (n * ez.transpose() + ez * n.transpose()) * (s / x + 3.0 * c / x.powi(2) - 3.0 * s / x.powi(3))
}

/// Where the two assemblies disagree beyond tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathDisagreement {
    pub component: &'static str,
    pub suspect: &'static str,
    pub general: f64,
    pub expanded: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathAgreement {
    pub max_relative: f64,
}

/// Compares [`decay_rate`] and [`decay_rate_expanded`]. Differences are
/// measured relative to the Einstein coefficient.
pub fn cross_validate(
    config: &SystemConfig,
    geometry: &Geometry,
    t: f64,
    tolerance: f64,
) -> Result<Result<PathAgreement, PathDisagreement>, DecayError> {
    let g = decay_rate(config, geometry, t)?;
    let e = decay_rate_expanded(config, geometry, t)?;
    let parts = [
        ("gamma_a", "self-image brackets of atom A", g.scaled.gamma_a, e.scaled.gamma_a),
        ("gamma_b", "self-image brackets of atom B", g.scaled.gamma_b, e.scaled.gamma_b),
        (
            "gamma_ab",
            "cross-atom static image bracket with mixed image-direction projector",
            g.scaled.gamma_ab,
            e.scaled.gamma_ab,
        ),
    ];
    let mut max_relative: f64 = 0.0;
    for (component, suspect, general, expanded) in parts {
        let relative = (general - expanded).abs();
        if relative > tolerance {
            return Ok(Err(PathDisagreement { component, suspect, general, expanded, relative }));
        }
        max_relative = max_relative.max(relative);
    }
    Ok(Ok(PathAgreement { max_relative }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub z_b: f64,
    /// Scaled total with the mirror held at its average position.
    pub static_total: f64,
    /// One entry per requested time.
    pub rates: Vec<DecayResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayTable {
    pub times: Vec<f64>,
    pub rows: Vec<DecayRow>,
}

/// Scaled collective rate as a function of the position of atom B.
pub fn decay_vs_distance(config: &SystemConfig, z_b: &[f64], times: &[f64]) -> Result<DecayTable, DecayError> {
    let rows = z_b
        .par_iter()
        .map(|&z| {
            let cfg = config.with_z_b(z);
            let geometry = cfg.validate()?.geometry;
            let mut fixed = cfg.clone();
            fixed.mirror.amplitude = 0.0;
            let static_total = decay_rate(&fixed, &geometry, 0.0)?.scaled.total;
            let rates = times.iter().map(|&t| decay_rate(&cfg, &geometry, t)).collect::<Result<Vec<_>, _>>()?;
            Ok(DecayRow { z_b: z, static_total, rates })
        })
        .collect::<Result<Vec<_>, DecayError>>()?;
    Ok(DecayTable { times: times.to_vec(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AtomSpec, MirrorSpec};

    fn fig3(dipole: [f64; 3], z_b: f64) -> SystemConfig {
        SystemConfig {
            atom_a: AtomSpec::from_si([0.0, 0.0, 1.25e-6], dipole),
            atom_b: AtomSpec::from_si([0.0, 0.0, z_b], dipole),
            mirror: MirrorSpec::oscillating(2e-7, 1.5e9),
            omega0: 1e15,
            bell_state: BellState::Symmetric,
            dicke_limit: false,
        }
    }

    #[test]
    fn free_space_single_atom_is_half() {
        let cfg = fig3([1e-30, 0.0, 0.0], 2e-6).with_mirror(MirrorSpec::absent());
        let g = cfg.validate().unwrap().geometry;
        let r = decay_rate(&cfg, &g, 0.0).unwrap();
        assert!((r.scaled.gamma_a - 0.5).abs() < 1e-15);
        assert!((r.scaled.gamma_b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn total_is_signed_sum() {
        for bell in [BellState::Symmetric, BellState::Antisymmetric] {
            let cfg = fig3([1e-30, 0.0, 0.0], 2e-6).with_bell_state(bell);
            let g = cfg.validate().unwrap().geometry;
            let r = decay_rate(&cfg, &g, 1.3e-7).unwrap().absolute;
            assert_eq!(r.total, r.gamma_a + r.gamma_b + bell.sign() * r.gamma_ab);
        }
    }

    #[test]
    fn half_period_is_static() {
        let cfg = fig3([1e-30, 0.0, 0.0], 2e-6);
        let g = cfg.validate().unwrap().geometry;
        let t = std::f64::consts::PI / 1.5e9;
        let moving = decay_rate_expanded(&cfg, &g, t).unwrap().scaled.total;
        let fixed = decay_rate_expanded(&cfg.with_mirror(MirrorSpec::fixed()), &g, t).unwrap().scaled.total;
        assert!((moving - fixed).abs() < 1e-14);
    }

    #[test]
    fn expanded_rejects_offset_atoms() {
        let mut cfg = fig3([1e-30, 0.0, 0.0], 2e-6);
        cfg.atom_b.position.x = 1e-7;
        let g = cfg.validate().unwrap().geometry;
        assert!(matches!(decay_rate_expanded(&cfg, &g, 0.0), Err(DecayError::NotAxisAligned { .. })));
        assert!(decay_rate(&cfg, &g, 0.0).is_ok());
    }

    #[test]
    fn paths_agree_for_stacked_atoms() {
        for dipole in [[1e-30, 0.0, 0.0], [0.0, 0.0, 1e-30], [3e-31, -2e-31, 7e-31]] {
            let cfg = fig3(dipole, 0.7e-6);
            let g = cfg.validate().unwrap().geometry;
            let ok = cross_validate(&cfg, &g, 2.3e-7, 1e-9).unwrap().unwrap();
            assert!(ok.max_relative < 1e-10);
        }
    }

    #[test]
    fn sweep_rows_are_ordered() {
        let cfg = fig3([1e-30, 0.0, 0.0], 2e-6);
        let z: Vec<f64> = (0..7).map(|i| 0.3e-6 + 0.4e-6 * i as f64).collect();
        let table = decay_vs_distance(&cfg, &z, &[2e-7, 2.4e-7]).unwrap();
        assert_eq!(table.rows.len(), 7);
        for (row, z) in table.rows.iter().zip(&z) {
            assert_eq!(row.z_b, *z);
            assert_eq!(row.rates.len(), 2);
        }
    }
}
