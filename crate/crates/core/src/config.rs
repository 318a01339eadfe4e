//! Physical inputs, validation and derived geometry.
//!
//! The mirror's average position is the plane `z = 0` and the atoms live in
//! the half-space `z > 0`. All image constructions go through the reflection
//! `sigma = diag(1, 1, -1)`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Ratio below which `omega_p` counts as slow compared to `omega0` and to
/// the inverse light-transit times.
pub const ADIABATIC_RATIO: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{atom}.position.z = {z:e} m: atom behind mirror (z must be > 0)")]
    AtomBehindMirror { atom: AtomLabel, z: f64 },
    #[error("{atom}.dipole is zero")]
    ZeroDipole { atom: AtomLabel },
    #[error("omega0 = {0:e} rad/s must be positive")]
    NonPositiveTransition(f64),
    #[error("mirror.amplitude = {0:e} m must be >= 0")]
    NegativeAmplitude(f64),
    #[error("mirror.frequency = {0:e} rad/s must be >= 0")]
    NegativeMirrorFrequency(f64),
    #[error("{0} is not finite")]
    NonFinite(&'static str),
    #[error("atoms are co-located; set dicke_limit to use the coincident-atom limit")]
    CoincidentAtoms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomLabel {
    AtomA,
    AtomB,
}

impl std::fmt::Display for AtomLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AtomLabel::AtomA => "atom_a",
            AtomLabel::AtomB => "atom_b",
        })
    }
}

/// Symmetric (superradiant) or antisymmetric (subradiant) single-excitation state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    Symmetric,
    Antisymmetric,
}

impl BellState {
    pub fn sign(self) -> f64 {
        match self {
            BellState::Symmetric => 1.0,
            BellState::Antisymmetric => -1.0,
        }
    }
}

/// Reflection through the mirror plane.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReflectionMatrix;

impl ReflectionMatrix {
    pub fn matrix(self) -> Mat3 {
        Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0))
    }

    pub fn apply(self, v: &Vec3) -> Vec3 {
        Vec3::new(v.x, v.y, -v.z)
    }
}

pub const SIGMA: ReflectionMatrix = ReflectionMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpec {
    /// Position in meters.
    pub position: Vec3,
    /// Transition dipole in statC·cm.
    pub dipole: Vec3,
}

impl AtomSpec {
    /// Builds an atom from a position in meters and a dipole in C·m.
    pub fn from_si(position: [f64; 3], dipole_c_m: [f64; 3]) -> Self {
        Self { position: Vec3::from(position), dipole: Vec3::from(dipole_c_m).map(units::dipole_si_to_gaussian) }
    }

    pub fn dipole_si(&self) -> Vec3 {
        self.dipole.map(units::dipole_gaussian_to_si)
    }
}

/// Mirror trajectory `a(t) = a sin(omega_p t)` around `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorSpec {
    pub amplitude: f64,
    pub frequency: f64,
    /// `false` removes the mirror entirely (free space).
    pub enabled: bool,
}

impl MirrorSpec {
    pub fn oscillating(amplitude: f64, frequency: f64) -> Self {
        Self { amplitude, frequency, enabled: true }
    }

    pub fn fixed() -> Self {
        Self::oscillating(0.0, 0.0)
    }

    pub fn absent() -> Self {
        Self { amplitude: 0.0, frequency: 0.0, enabled: false }
    }

    pub fn is_static(&self) -> bool {
        !self.enabled || self.amplitude == 0.0 || self.frequency == 0.0
    }

    /// Instantaneous mirror displacement along +z.
    pub fn displacement(&self, t: f64) -> f64 {
        if self.is_static() {
            0.0
        } else {
            self.amplitude * (self.frequency * t).sin()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub atom_a: AtomSpec,
    pub atom_b: AtomSpec,
    pub mirror: MirrorSpec,
    /// Atomic transition frequency, rad/s.
    pub omega0: f64,
    pub bell_state: BellState,
    /// Accept co-located atoms by substituting the coincident-point tensor limit.
    pub dicke_limit: bool,
}

impl SystemConfig {
    /// Transition wavenumber, 1/m.
    pub fn k0(&self) -> f64 {
        units::wavenumber(self.omega0)
    }

    pub fn with_mirror(&self, mirror: MirrorSpec) -> Self {
        Self { mirror, ..self.clone() }
    }

    pub fn with_bell_state(&self, bell_state: BellState) -> Self {
        Self { bell_state, ..self.clone() }
    }

    /// Moves atom B along z, keeping its transverse coordinates.
    pub fn with_z_b(&self, z_b: f64) -> Self {
        let mut out = self.clone();
        out.atom_b.position.z = z_b;
        out
    }

    pub fn validate(&self) -> Result<Validated, ConfigError> {
        for (label, atom) in [(AtomLabel::AtomA, &self.atom_a), (AtomLabel::AtomB, &self.atom_b)] {
            if !atom.position.iter().all(|v| v.is_finite()) {
                return Err(ConfigError::NonFinite("position"));
            }
            if !atom.dipole.iter().all(|v| v.is_finite()) {
                return Err(ConfigError::NonFinite("dipole"));
            }
            if atom.position.z <= 0.0 {
                return Err(ConfigError::AtomBehindMirror { atom: label, z: atom.position.z });
            }
            if atom.dipole.norm_squared() == 0.0 {
                return Err(ConfigError::ZeroDipole { atom: label });
            }
        }
        if !self.omega0.is_finite() {
            return Err(ConfigError::NonFinite("omega0"));
        }
        if self.omega0 <= 0.0 {
            return Err(ConfigError::NonPositiveTransition(self.omega0));
        }
        if !self.mirror.amplitude.is_finite() {
            return Err(ConfigError::NonFinite("mirror.amplitude"));
        }
        if !self.mirror.frequency.is_finite() {
            return Err(ConfigError::NonFinite("mirror.frequency"));
        }
        if self.mirror.amplitude < 0.0 {
            return Err(ConfigError::NegativeAmplitude(self.mirror.amplitude));
        }
        if self.mirror.frequency < 0.0 {
            return Err(ConfigError::NegativeMirrorFrequency(self.mirror.frequency));
        }

        let geometry = Geometry::compute(&self.atom_a.position, &self.atom_b.position, self.mirror.enabled);
        if geometry.is_colocated() && !self.dicke_limit {
            return Err(ConfigError::CoincidentAtoms);
        }
        let warnings = self.regime_warnings(&geometry);
        Ok(Validated { geometry, warnings })
    }

    fn regime_warnings(&self, geometry: &Geometry) -> Vec<RegimeWarning> {
        let mut out = Vec::new();
        let m = &self.mirror;
        if !m.enabled || m.is_static() {
            return out;
        }
        let ratio = m.frequency / self.omega0;
        if ratio >= ADIABATIC_RATIO {
            out.push(RegimeWarning::FastMirrorVsTransition { ratio });
        }
        let z_a = self.atom_a.position.z;
        let z_b = self.atom_b.position.z;
        for length in [z_a, z_b, z_a + z_b] {
            let ratio = m.frequency * length / units::SPEED_OF_LIGHT_SI;
            if ratio >= ADIABATIC_RATIO {
                out.push(RegimeWarning::FastMirrorVsLightTransit { length, ratio });
            }
        }
        if let Some(img) = geometry.images() {
            let shortest = img.rbar_a_len().min(img.rbar_b_len()).min(img.rbar_ab_len());
            if m.amplitude >= shortest {
                out.push(RegimeWarning::AmplitudeNotSmallVsImageDistance {
                    amplitude: m.amplitude,
                    distance: shortest,
                });
            }
        }
        let k0a = self.k0() * m.amplitude;
        if k0a >= 1.0 {
            out.push(RegimeWarning::AmplitudeNotSmallVsWavelength { k0a });
        }
        let nearest = z_a.min(z_b);
        if m.amplitude >= nearest {
            out.push(RegimeWarning::MirrorReachesAtom { amplitude: m.amplitude, z: nearest });
        }
        out
    }
}

/// Non-fatal regime diagnostics. The closed forms assume an adiabatic,
/// small-amplitude mirror; these flag where that assumption degrades.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegimeWarning {
    FastMirrorVsTransition { ratio: f64 },
    FastMirrorVsLightTransit { length: f64, ratio: f64 },
    AmplitudeNotSmallVsImageDistance { amplitude: f64, distance: f64 },
    AmplitudeNotSmallVsWavelength { k0a: f64 },
    MirrorReachesAtom { amplitude: f64, z: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub geometry: Geometry,
    pub warnings: Vec<RegimeWarning>,
}

/// Separation vectors between the atoms and between atoms and mirror images.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    /// `r_A - r_B`.
    pub r_ab: Vec3,
    images: Option<ImageGeometry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageGeometry {
    /// `r_A - sigma r_A`.
    pub rbar_a: Vec3,
    /// `r_B - sigma r_B`.
    pub rbar_b: Vec3,
    /// `r_A - sigma r_B`.
    pub rbar_ab: Vec3,
}

impl ImageGeometry {
    pub fn rbar_a_len(&self) -> f64 {
        self.rbar_a.norm()
    }
    pub fn rbar_b_len(&self) -> f64 {
        self.rbar_b.norm()
    }
    pub fn rbar_ab_len(&self) -> f64 {
        self.rbar_ab.norm()
    }
}

impl Geometry {
    /// Unvalidated geometry for arbitrary positions.
    pub fn compute(r_a: &Vec3, r_b: &Vec3, mirror_enabled: bool) -> Self {
        let images = mirror_enabled.then(|| ImageGeometry {
            rbar_a: r_a - SIGMA.apply(r_a),
            rbar_b: r_b - SIGMA.apply(r_b),
            rbar_ab: r_a - SIGMA.apply(r_b),
        });
        Self { r_ab: r_a - r_b, images }
    }

    pub fn r_ab_len(&self) -> f64 {
        self.r_ab.norm()
    }

    pub fn is_colocated(&self) -> bool {
        self.r_ab.norm_squared() == 0.0
    }

    /// `None` when the mirror is disabled.
    pub fn images(&self) -> Option<&ImageGeometry> {
        self.images.as_ref()
    }

    pub fn r_ab_hat(&self) -> Option<Vec3> {
        (!self.is_colocated()).then(|| self.r_ab.normalize())
    }
}

/// Free-space single-atom emission rate `A = (4/3) omega0^3 |mu_A|^2 / (hbar c^3)`, 1/s.
pub fn einstein_a(config: &SystemConfig) -> f64 {
    let k = units::wavenumber_cgs(config.k0());
    4.0 / 3.0 * k.powi(3) * config.atom_a.dipole.norm_squared() / units::HBAR_CGS
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig2() -> SystemConfig {
        SystemConfig {
            atom_a: AtomSpec::from_si([0.0, 0.0, 1e-6], [1e-30, 0.0, 0.0]),
            atom_b: AtomSpec::from_si([0.0, 0.0, 1.1e-6], [1e-30, 0.0, 0.0]),
            mirror: MirrorSpec::oscillating(2e-7, 1.5e9),
            omega0: 1e15,
            bell_state: BellState::Symmetric,
            dicke_limit: false,
        }
    }

    #[test]
    fn stacked_atoms_geometry() {
        let mut cfg = fig2();
        cfg.mirror = MirrorSpec::fixed();
        let v = cfg.validate().unwrap();
        let img = v.geometry.images().unwrap();
        assert!((img.rbar_a_len() - 2e-6).abs() < 1e-20);
        assert!((img.rbar_b_len() - 2.2e-6).abs() < 1e-20);
        assert!((img.rbar_ab_len() - 2.1e-6).abs() < 1e-20);
        assert!((v.geometry.r_ab_len() - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn atom_behind_mirror() {
        let mut cfg = fig2();
        cfg.atom_a.position.z = -1e-6;
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, ConfigError::AtomBehindMirror { atom: AtomLabel::AtomA, .. }));
        assert!(err.to_string().contains("atom_a.position.z"));
        assert!(err.to_string().contains("behind mirror"));
    }

    #[test]
    fn structural_errors() {
        let mut cfg = fig2();
        cfg.atom_b.dipole = Vec3::zeros();
        assert_eq!(cfg.validate().unwrap_err(), ConfigError::ZeroDipole { atom: AtomLabel::AtomB });

        let mut cfg = fig2();
        cfg.omega0 = 0.0;
        assert!(matches!(cfg.validate(), Err(ConfigError::NonPositiveTransition(_))));

        let mut cfg = fig2();
        cfg.mirror.amplitude = -1.0;
        assert!(matches!(cfg.validate(), Err(ConfigError::NegativeAmplitude(_))));

        let mut cfg = fig2();
        cfg.mirror.frequency = -1.0;
        assert!(matches!(cfg.validate(), Err(ConfigError::NegativeMirrorFrequency(_))));

        let mut cfg = fig2();
        cfg.omega0 = f64::NAN;
        assert!(matches!(cfg.validate(), Err(ConfigError::NonFinite(_))));
    }

    #[test]
    fn colocated_needs_dicke_flag() {
        let mut cfg = fig2();
        cfg.atom_b.position = cfg.atom_a.position;
        assert_eq!(cfg.validate().unwrap_err(), ConfigError::CoincidentAtoms);
        cfg.dicke_limit = true;
        assert!(cfg.validate().unwrap().geometry.is_colocated());
    }

    #[test]
    fn fig2_parameters_are_in_regime() {
        let v = fig2().validate().unwrap();
        assert!(v.warnings.is_empty(), "{:?}", v.warnings);
    }

    #[test]
    fn regime_violations_warn() {
        let mut cfg = fig2();
        cfg.mirror = MirrorSpec::oscillating(3e-6, 1e13);
        let w = cfg.validate().unwrap().warnings;
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::FastMirrorVsTransition { .. })));
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::FastMirrorVsLightTransit { .. })));
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::AmplitudeNotSmallVsImageDistance { .. })));
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::AmplitudeNotSmallVsWavelength { .. })));
        assert!(w.iter().any(|w| matches!(w, RegimeWarning::MirrorReachesAtom { .. })));
    }

    #[test]
    fn disabled_mirror_has_no_images() {
        let cfg = fig2().with_mirror(MirrorSpec::absent());
        assert!(cfg.validate().unwrap().geometry.images().is_none());
    }

    #[test]
    fn static_mirror_flags() {
        assert!(MirrorSpec::oscillating(0.0, 1.0).is_static());
        assert!(MirrorSpec::oscillating(1.0, 0.0).is_static());
        assert!(!MirrorSpec::oscillating(1.0, 1.0).is_static());
        assert_eq!(MirrorSpec::oscillating(1.0, 0.0).displacement(3.0), 0.0);
    }

    #[test]
    fn reflection_is_involution() {
        let s = SIGMA.matrix();
        assert_eq!(s * s, Mat3::identity());
        let v = Vec3::new(1.0, -2.0, 3.0);
        assert_eq!(SIGMA.apply(&v), Vec3::new(1.0, -2.0, -3.0));
        assert_eq!(SIGMA.apply(&v), s * v);
    }

    #[test]
    fn einstein_coefficient_scaling() {
        let mut cfg = fig2();
        let a1 = einstein_a(&cfg);
        cfg.atom_a.dipole *= 2.0;
        assert!((einstein_a(&cfg) / a1 - 4.0).abs() < 1e-14);
        cfg.atom_a.dipole = Vec3::zeros();
        assert_eq!(einstein_a(&cfg), 0.0);
    }

    proptest! {
        #[test]
        fn image_of_b_is_free_separation_to_reflected_b(
            xa in -1e-6f64..1e-6, ya in -1e-6f64..1e-6, za in 1e-8f64..3e-6,
            xb in -1e-6f64..1e-6, yb in -1e-6f64..1e-6, zb in 1e-8f64..3e-6,
        ) {
            let ra = Vec3::new(xa, ya, za);
            let rb = Vec3::new(xb, yb, zb);
            let g = Geometry::compute(&ra, &rb, true);
            let reflected = Geometry::compute(&ra, &SIGMA.apply(&rb), true);
            prop_assert_eq!(reflected.r_ab, g.images().unwrap().rbar_ab);
            let img = g.images().unwrap();
            prop_assert!((img.rbar_a_len() - 2.0 * za).abs() <= 1e-15 * za);
            prop_assert!((img.rbar_b_len() - 2.0 * zb).abs() <= 1e-15 * zb);
        }

        #[test]
        fn dipole_storage_round_trip(mx in -1e-28f64..1e-28, my in -1e-28f64..1e-28, mz in -1e-28f64..1e-28) {
            let atom = AtomSpec::from_si([0.0, 0.0, 1e-6], [mx, my, mz]);
            let back = atom.dipole_si();
            for (b, m) in back.iter().zip([mx, my, mz]) {
                prop_assert!((b - m).abs() <= 1e-12 * m.abs());
            }
        }
    }
}
