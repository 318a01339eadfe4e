//! Dipole radiation tensor `F_lm sin(kr)/(k^3 r)` and its derivatives along
//! the mirror normal.
//!
//! With `x = kR` and `u = R/|R|` the tensor is
//!
//! ```text
//! tau = (I - u u^T) sin(x)/x - (I - 3 u u^T) (sin(x)/x^3 - cos(x)/x^2)
//!     = (S0 - S1) I + x^2 S2 u u^T
//! ```
//!
//! where `S_n(x) = j_n(x) / x^n` are reduced spherical Bessel functions. They
//! are entire and even in `x`, obey `S_n' = -x S_{n+1}`, and every radial
//! factor of `tau` and of its first two z-derivatives is a polynomial in `x`
//! times some `S_n`. Evaluating `S_n` by power series for small `x` therefore
//! removes every removable singularity in one place.

use thiserror::Error;

use crate::config::{Mat3, Vec3};

/// Below this `kR` the reduced Bessel functions are summed as power series;
/// above it they come from `sin`/`cos` and upward recurrence.
pub const SERIES_SWITCH: f64 = 2.5;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum TensorError {
    #[error("zero separation: the radiation tensor needs |R| > 0 (or the coincident-atom limit)")]
    ZeroSeparation,
    #[error("wavenumber k = {0:e} must be positive")]
    NonPositiveWavenumber(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadTensor {
    /// Dimensionless, symmetric.
    pub tau: Mat3,
    /// Meters.
    pub separation: Vec3,
    /// 1/m.
    pub k: f64,
}

/// First and second derivatives of `tau` with respect to the z-component of
/// the separation vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadTensorDerivs {
    /// 1/m.
    pub d1: Mat3,
    /// 1/m^2.
    pub d2: Mat3,
}

/// `S_n(x) = j_n(x)/x^n` for `n = 0..=4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedBessel(pub [f64; 5]);

impl ReducedBessel {
    pub fn new(x: f64) -> Self {
        if x.abs() < SERIES_SWITCH {
            Self::series(x)
        } else {
            Self::closed(x)
        }
    }

    /// `S_n(x) = sum_k (-x^2/2)^k / (k! (2n+2k+1)!!)`.
    pub fn series(x: f64) -> Self {
        let y = -0.5 * x * x;
        let mut out = [0.0; 5];
        let mut lead = 1.0; // 1/(2n+1)!!
        for (n, slot) in out.iter_mut().enumerate() {
            lead /= (2 * n + 1) as f64;
            let mut term = lead;
            let mut sum = term;
            for k in 1..60 {
                term *= y / (k as f64 * (2 * n + 2 * k + 1) as f64);
                sum += term;
                if term.abs() <= 1e-18 * sum.abs() {
                    break;
                }
            }
            *slot = sum;
        }
        Self(out)
    }

    /// Closed form via upward recurrence `j_{n+1} = (2n+1)/x j_n - j_{n-1}`.
    /// Accurate for `x` of order one and above.
    pub fn closed(x: f64) -> Self {
        let (s, c) = x.sin_cos();
        let mut j = [0.0; 5];
        j[0] = s / x;
        j[1] = s / (x * x) - c / x;
        for n in 1..4 {
            j[n + 1] = (2 * n + 1) as f64 / x * j[n] - j[n - 1];
        }
        let mut out = [0.0; 5];
        let mut xn = 1.0;
        for n in 0..5 {
            out[n] = j[n] / xn;
            xn *= x;
        }
        Self(out)
    }
}

/// Coincident-point value `(2/3) I`.
pub fn tau_coincident(k: f64) -> RadTensor {
    RadTensor { tau: Mat3::identity() * (2.0 / 3.0), separation: Vec3::zeros(), k }
}

pub fn tau(k: f64, r: &Vec3) -> Result<RadTensor, TensorError> {
    let (x, u) = reduce(k, r)?;
    let s = ReducedBessel::new(x);
    Ok(RadTensor { tau: tau_from(&s, x, &u), separation: *r, k })
}

pub fn tau_derivs(k: f64, r: &Vec3) -> Result<RadTensorDerivs, TensorError> {
    tau_with_derivs(k, r).map(|(_, d)| d)
}

/// `tau`, `d1` and `d2` from a single radial evaluation.
pub fn tau_with_derivs(k: f64, r: &Vec3) -> Result<(RadTensor, RadTensorDerivs), TensorError> {
    let (x, u) = reduce(k, r)?;
    let s = ReducedBessel::new(x);
    let [_, s1, s2, s3, s4] = s.0;
    let uz = u.z;
    let uu = u * u.transpose();
    let ez = Vec3::z();
    // e_z u^T + u e_z^T
    let sym = ez * u.transpose() + u * ez.transpose();
    let ezez = ez * ez.transpose();
    let x2 = x * x;
    let eye = Mat3::identity();

    let d1 = (eye * (x * (s2 - s1) * uz) - uu * (x2 * x * s3 * uz) + sym * (x * s2)) * k;

    let a_dd = s2 - s1 + x2 * (s2 - s3);
    let a_d_over_x = s2 - s1;
    let b_dd = x2 * s4 - s3;
    let b_d_over_x = -s3;
    let tz = 1.0 - uz * uz;
    let d2 = (eye * (a_dd * uz * uz + a_d_over_x * tz) + uu * ((b_dd * uz * uz + b_d_over_x * tz) * x2)
        - sym * (2.0 * x2 * s3 * uz)
        + ezez * (2.0 * s2))
        * (k * k);

    Ok((RadTensor { tau: tau_from(&s, x, &u), separation: *r, k }, RadTensorDerivs { d1, d2 }))
}

fn reduce(k: f64, r: &Vec3) -> Result<(f64, Vec3), TensorError> {
    if !(k > 0.0) {
        return Err(TensorError::NonPositiveWavenumber(k));
    }
    let len = r.norm();
    if len == 0.0 {
        return Err(TensorError::ZeroSeparation);
    }
    Ok((k * len, r / len))
}

fn tau_from(s: &ReducedBessel, x: f64, u: &Vec3) -> Mat3 {
    let [s0, s1, s2, ..] = s.0;
    Mat3::identity() * (s0 - s1) + (u * u.transpose()) * (x * x * s2)
}
