//! Physical constants and SI/Gaussian conversions.
//!
//! Geometry is carried in SI (meters, rad/s). Rate prefactors of the form
//! `k^3 |mu|^2 / hbar` are evaluated in Gaussian units, so dipole moments are
//! stored in statC·cm and wavenumbers are converted to 1/cm at the point of use.

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;

/// Speed of light, cm/s.
pub const SPEED_OF_LIGHT_CGS: f64 = 2.997_924_58e10;

/// Reduced Planck constant, erg·s.
pub const HBAR_CGS: f64 = 1.054_571_817e-27;

/// Reduced Planck constant, J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// One C·m expressed in statC·cm (1 C = c/10 statC with c in cm/s, 1 m = 100 cm).
pub const STATC_CM_PER_C_M: f64 = SPEED_OF_LIGHT_CGS / 10.0 * 100.0;

pub const CM_PER_M: f64 = 100.0;

#[inline]
pub fn dipole_si_to_gaussian(c_m: f64) -> f64 {
    c_m * STATC_CM_PER_C_M
}

#[inline]
pub fn dipole_gaussian_to_si(statc_cm: f64) -> f64 {
    statc_cm / STATC_CM_PER_C_M
}

/// Wavenumber in 1/m for an angular frequency in rad/s.
#[inline]
pub fn wavenumber(omega: f64) -> f64 {
    omega / SPEED_OF_LIGHT_SI
}

/// Converts a wavenumber from 1/m to 1/cm.
#[inline]
pub fn wavenumber_cgs(k_per_m: f64) -> f64 {
    k_per_m / CM_PER_M
}
