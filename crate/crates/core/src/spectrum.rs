//! Emitted spectrum `P(omega_k, t) = P0 + P1 + P2`, split by order in the
//! mirror amplitude and by origin (single-atom vs interference).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{BellState, Geometry, SystemConfig};
use crate::coupling::Couplings;
use crate::lineshape::LineshapeSet;
use crate::tensor::TensorError;
use crate::units;

/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 4001;
/// Default grid half-width in units of the mirror frequency.
pub const DEFAULT_HALF_WIDTH_OMEGA_P: f64 = 5.0;
/// Minimum grid half-width in units of the mirror frequency.
pub const MIN_HALF_WIDTH_OMEGA_P: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("omega_k = {0:e} rad/s must be positive")]
    NonPositiveFrequency(f64),
    #[error("time t = {0:e} s must be >= 0")]
    NegativeTime(f64),
    #[error("frequency grid is empty")]
    EmptyGrid,
    #[error("frequency grid is not strictly increasing at index {0}")]
    NonMonotonicGrid(usize),
    #[error("frequency grid spans [{lo:e}, {hi:e}] rad/s of detuning; it must cover +/-{need:e}")]
    GridTooNarrow { lo: f64, hi: f64, need: f64 },
}

/// Constant in front of the interference contribution to the zeroth order.
///
/// `Derived` is `k^3/(pi hbar)`, twice the single-atom constant, which is what
/// the mode sum over the two cross terms of the squared amplitude produces.
/// `AsPrinted` carries an additional factor of `c` on the zeroth-order
/// interference term; it is dimensionally inconsistent and is kept only so the
/// quadrature oracle can reject it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferencePrefactor {
    #[default]
    Derived,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpectrumOptions {
    pub interference_prefactor: InterferencePrefactor,
}

/// Spectral densities in s (probability per unit angular frequency).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub omega_k: f64,
    pub detuning: f64,
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub single_atom: f64,
    /// Includes the Bell-state sign.
    pub interference: f64,
    pub total: f64,
}

pub fn spectrum_point(
    config: &SystemConfig,
    geometry: &Geometry,
    omega_k: f64,
    t: f64,
) -> Result<SpectrumPoint, SpectrumError> {
    spectrum_point_with(config, geometry, omega_k, t, &SpectrumOptions::default())
}

pub fn spectrum_point_with(
    config: &SystemConfig,
    geometry: &Geometry,
    omega_k: f64,
    t: f64,
    options: &SpectrumOptions,
) -> Result<SpectrumPoint, SpectrumError> {
    if !(omega_k > 0.0) {
        return Err(SpectrumError::NonPositiveFrequency(omega_k));
    }
    point_at(config, geometry, omega_k - config.omega0, t, options)
}

fn point_at(
    config: &SystemConfig,
    geometry: &Geometry,
    detuning: f64,
    t: f64,
    options: &SpectrumOptions,
) -> Result<SpectrumPoint, SpectrumError> {
    if !(t >= 0.0) {
        return Err(SpectrumError::NegativeTime(t));
    }
    let omega_k = config.omega0 + detuning;
    if !(omega_k > 0.0) {
        return Err(SpectrumError::NonPositiveFrequency(omega_k));
    }
    let k = units::wavenumber(omega_k);
    let c = Couplings::evaluate(config, geometry, k)?;
    let mirror = &config.mirror;
    let omega_p = if mirror.enabled { mirror.frequency } else { 0.0 };
    let a = if mirror.enabled { mirror.amplitude } else { 0.0 };
    let h = LineshapeSet::eval(detuning, omega_p, t);

    let single_pref = units::wavenumber_cgs(k).powi(3) / (2.0 * std::f64::consts::PI * units::HBAR_CGS);
    let cross_pref = 2.0 * single_pref;
    let cross_pref0 = match options.interference_prefactor {
        InterferencePrefactor::Derived => cross_pref,
        InterferencePrefactor::AsPrinted => cross_pref * units::SPEED_OF_LIGHT_CGS,
    };
    let sign = config.bell_state.sign();

    let img = c.image.unwrap_or_default();
    let s0 = single_pref * h.h0 * (c.free_single - img.single[0]);
    let x0 = sign * cross_pref0 * h.h0 * (c.free_cross - img.cross[0]);
    let (s1, x1, s2, x2) = if c.image.is_some() && a != 0.0 {
        let h23 = h.h2_plus_h3();
        (
            single_pref * a * h.h1 * img.single[1],
            sign * cross_pref * a * h.h1 * img.cross[1],
            -single_pref * 0.5 * a * a * h23 * img.single[2],
            -sign * cross_pref * 0.5 * a * a * h23 * img.cross[2],
        )
    } else {
        (0.0, 0.0, 0.0, 0.0)
    };

    let p0 = s0 + x0;
    let p1 = s1 + x1;
    let p2 = s2 + x2;
    Ok(SpectrumPoint {
        omega_k,
        detuning,
        p0,
        p1,
        p2,
        single_atom: s0 + s1 + s2,
        interference: x0 + x1 + x2,
        total: p0 + p1 + p2,
    })
}

/// Detunings `omega_k - omega0` at which the spectrum is sampled, rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    detunings: Vec<f64>,
}

impl FrequencyGrid {
    pub fn uniform(half_width: f64, points: usize) -> Result<Self, SpectrumError> {
        if points == 0 {
            return Err(SpectrumError::EmptyGrid);
        }
        if points == 1 {
            return Self::from_detunings(vec![0.0]);
        }
        let step = 2.0 * half_width / (points - 1) as f64;
        let detunings = (0..points)
            .map(|i| {
                // exact mirror symmetry about zero
                let j = i as f64 - (points - 1) as f64 / 2.0;
                j * step
            })
            .collect();
        Self::from_detunings(detunings)
    }

    /// 4001 points over `omega0 +/- 5 omega_p`; without mirror motion the
    /// window is ten sinc lobes wide instead.
    pub fn default_for(config: &SystemConfig, t: f64) -> Result<Self, SpectrumError> {
        let w = config.mirror.frequency;
        let half = if config.mirror.enabled && w > 0.0 {
            DEFAULT_HALF_WIDTH_OMEGA_P * w
        } else {
            20.0 * std::f64::consts::PI / t.max(f64::MIN_POSITIVE)
        };
        Self::uniform(half, DEFAULT_GRID_POINTS)
    }

    pub fn from_detunings(detunings: Vec<f64>) -> Result<Self, SpectrumError> {
        if detunings.is_empty() {
            return Err(SpectrumError::EmptyGrid);
        }
        if let Some(i) = detunings.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(SpectrumError::NonMonotonicGrid(i + 1));
        }
        Ok(Self { detunings })
    }

    pub fn from_omega_k(omega0: f64, omega_k: &[f64]) -> Result<Self, SpectrumError> {
        Self::from_detunings(omega_k.iter().map(|w| w - omega0).collect())
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    fn check_coverage(&self, omega_p: f64) -> Result<(), SpectrumError> {
        let need = MIN_HALF_WIDTH_OMEGA_P * omega_p;
        let lo = self.detunings[0];
        let hi = *self.detunings.last().unwrap();
        if lo > -need || hi < need {
            return Err(SpectrumError::GridTooNarrow { lo, hi, need });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub points: Vec<SpectrumPoint>,
    pub t: f64,
    pub bell_state: BellState,
    /// Trapezoid integral of `total` over the grid (total emission probability).
    pub normalization: f64,
    /// `total / normalization` per grid point, 1/(rad/s).
    pub normalized: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub index: usize,
    pub detuning: f64,
    /// Normalized height.
    pub height: f64,
}

pub fn spectrum_sweep(
    config: &SystemConfig,
    geometry: &Geometry,
    grid: &FrequencyGrid,
    t: f64,
) -> Result<SpectrumResult, SpectrumError> {
    spectrum_sweep_with(config, geometry, grid, t, &SpectrumOptions::default())
}

pub fn spectrum_sweep_with(
    config: &SystemConfig,
    geometry: &Geometry,
    grid: &FrequencyGrid,
    t: f64,
    options: &SpectrumOptions,
) -> Result<SpectrumResult, SpectrumError> {
    if grid.is_empty() {
        return Err(SpectrumError::EmptyGrid);
    }
    if config.mirror.enabled {
        grid.check_coverage(config.mirror.frequency)?;
    }
    let points = grid
        .detunings()
        .par_iter()
        .map(|&d| point_at(config, geometry, d, t, options))
        .collect::<Result<Vec<_>, _>>()?;
    let totals: Vec<f64> = points.iter().map(|p| p.total).collect();
    let normalization = trapezoid(grid.detunings(), &totals);
    let normalized =
        if normalization != 0.0 { totals.iter().map(|v| v / normalization).collect() } else { vec![0.0; totals.len()] };
    Ok(SpectrumResult { points, t, bell_state: config.bell_state, normalization, normalized })
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

impl SpectrumResult {
    pub fn detunings(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.detuning)
    }

    /// Interior grid indices where the normalized spectrum has a local maximum.
    pub fn local_maxima(&self) -> Vec<usize> {
        let v = &self.normalized;
        (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).collect()
    }

    /// Highest local maximum within `window` of `detuning`.
    pub fn peak_near(&self, detuning: f64, window: f64) -> Option<Peak> {
        self.local_maxima()
            .into_iter()
            .filter(|&i| (self.points[i].detuning - detuning).abs() <= window)
            .map(|i| Peak { index: i, detuning: self.points[i].detuning, height: self.normalized[i] })
            .max_by(|a, b| a.height.total_cmp(&b.height))
    }

    /// The `n` highest local maxima, in decreasing height.
    pub fn top_peaks(&self, n: usize) -> Vec<Peak> {
        let mut peaks: Vec<Peak> = self
            .local_maxima()
            .into_iter()
            .map(|i| Peak { index: i, detuning: self.points[i].detuning, height: self.normalized[i] })
            .collect();
        peaks.sort_by(|a, b| b.height.total_cmp(&a.height));
        peaks.truncate(n);
        peaks
    }

    /// Largest normalized value within `window` of `detuning`.
    pub fn max_near(&self, detuning: f64, window: f64) -> Option<f64> {
        self.points
            .iter()
            .zip(&self.normalized)
            .filter(|(p, _)| (p.detuning - detuning).abs() <= window)
            .map(|(_, v)| *v)
            .max_by(f64::total_cmp)
    }
}
