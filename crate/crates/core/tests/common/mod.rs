//! Test-only reference implementations, independent of the library's
//! closed forms.

#![allow(dead_code)]

use std::f64::consts::PI;

use coop_emission::oracle::SphereRule;
use coop_emission::{AtomSpec, BellState, Mat3, MirrorSpec, SystemConfig, Vec3};

pub const OMEGA_P: f64 = 1.5e9;
pub const OMEGA0: f64 = 1e15;
pub const AMPLITUDE: f64 = 2e-7;
pub const MU: f64 = 1e-30;

pub const PARALLEL: [f64; 3] = [MU, 0.0, 0.0];
pub const PERPENDICULAR: [f64; 3] = [0.0, 0.0, MU];

/// Spectrum figure set: atoms at 1 and 1.1 micron on the mirror normal.
pub fn fig2(dipole: [f64; 3]) -> SystemConfig {
    stacked(1e-6, 1.1e-6, dipole)
}

/// Decay figure set: atom A at 1.25 micron, atom B at `z_b`.
pub fn fig3(z_b: f64) -> SystemConfig {
    stacked(1.25e-6, z_b, PARALLEL)
}

pub fn stacked(z_a: f64, z_b: f64, dipole: [f64; 3]) -> SystemConfig {
    SystemConfig {
        atom_a: AtomSpec::from_si([0.0, 0.0, z_a], dipole),
        atom_b: AtomSpec::from_si([0.0, 0.0, z_b], dipole),
        mirror: MirrorSpec::oscillating(AMPLITUDE, OMEGA_P),
        omega0: OMEGA0,
        bell_state: BellState::Symmetric,
        dicke_limit: false,
    }
}

/// Einstein coefficient from the SI expression `omega^3 mu^2 / (3 pi eps0 hbar c^3)`.
pub fn einstein_a_si(omega: f64, mu_c_m: f64) -> f64 {
    let c = 299_792_458.0;
    let eps0 = 1.0 / (4e-7 * PI * c * c);
    let hbar = 1.054_571_817e-34;
    omega.powi(3) * mu_c_m * mu_c_m / (3.0 * PI * eps0 * hbar * c.powi(3))
}

/// First and second z-derivatives by central differences on a three-level
/// Richardson tableau in `h`, `h/2`, `h/4`.
pub fn richardson_z_derivs(f: impl Fn(&Vec3) -> Mat3, r: &Vec3, h: f64) -> (Mat3, Mat3) {
    let ez = Vec3::z();
    let f0 = f(r);
    let mut d1 = [Mat3::zeros(); 3];
    let mut d2 = [Mat3::zeros(); 3];
    for (level, scale) in [1.0, 0.5, 0.25].into_iter().enumerate() {
        let step = h * scale;
        let plus = f(&(r + ez * step));
        let minus = f(&(r - ez * step));
        d1[level] = (plus - minus) / (2.0 * step);
        d2[level] = (plus - f0 * 2.0 + minus) / (step * step);
    }
    (extrapolate(d1), extrapolate(d2))
}

fn extrapolate(d: [Mat3; 3]) -> Mat3 {
    let a = (d[1] * 4.0 - d[0]) / 3.0;
    let b = (d[2] * 4.0 - d[1]) / 3.0;
    (b * 16.0 - a) / 15.0
}

/// `(1/4pi) int dOmega (I - k k) cos(k.R)` on a product rule.
pub fn angular_tau(k: f64, r: &Vec3, rule: &SphereRule) -> Mat3 {
    let mut out = Mat3::zeros();
    for i in 0..rule.cos_theta.len() {
        for j in 0..rule.phi.len() {
            let khat = Vec3::from(rule.direction(i, j));
            let proj = Mat3::identity() - khat * khat.transpose();
            out += proj * (rule.weight(i, j) * (k * khat.dot(r)).cos());
        }
    }
    out / (4.0 * PI)
}

pub fn rel_frobenius(a: &Mat3, b: &Mat3) -> f64 {
    (a - b).norm() / b.norm()
}

/// `n` log-spaced values on `[lo, hi]`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
