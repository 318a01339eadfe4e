//! JSON run configuration.
//!
//! Units are SI throughout: meters, C·m, rad/s, seconds. Unknown keys are
//! rejected at every level.

use std::path::{Path, PathBuf};

use coop_emission::oracle::QuadratureSpec;
use coop_emission::{AtomSpec, BellState, InterferencePrefactor, MirrorSpec, SystemConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Agreement bound used by `validate` when neither the config nor the flag sets one.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_VALIDATE_POINTS: usize = 9;
pub const DEFAULT_SWEEP_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Spectrum,
    Decay,
    DecaySweep,
    Validate,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::Decay => "decay",
            Task::DecaySweep => "decay-sweep",
            Task::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; when present it must match the subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub system: SystemSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecaySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate: Option<ValidateSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    /// Transition frequency, rad/s.
    pub omega0: f64,
    pub atom_a: AtomSection,
    pub atom_b: AtomSection,
    pub mirror: MirrorSection,
    #[serde(default = "symmetric")]
    pub bell_state: BellState,
    #[serde(default)]
    pub dicke_limit: bool,
    #[serde(default)]
    pub interference_prefactor: InterferencePrefactor,
}

fn symmetric() -> BellState {
    BellState::Symmetric
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    /// Meters.
    pub position: [f64; 3],
    /// C·m.
    pub dipole: [f64; 3],
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorSection {
    /// Meters.
    pub amplitude: f64,
    /// rad/s.
    pub frequency: f64,
    #[serde(default = "enabled")]
    pub enabled: bool,
}

fn enabled() -> bool {
    true
}

impl From<MirrorSection> for MirrorSpec {
    fn from(m: MirrorSection) -> Self {
        MirrorSpec { amplitude: m.amplitude, frequency: m.frequency, enabled: m.enabled }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    /// Evolution time, s.
    pub t: f64,
    /// Grid half-width in detuning, rad/s. Defaults to five mirror
    /// frequencies, or ten sinc lobes for a static mirror.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Extra curves drawn on the same plot, each written to its own CSV.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overlays: Vec<Overlay>,
}

/// Variation of the base system; unset fields are inherited.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overlay {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Applied to both atoms, C·m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror: Option<MirrorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bell_state: Option<BellState>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySection {
    /// s.
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub z_b: Range,
    /// s.
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSection {
    /// s.
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Detunings span `+/- half_width`; defaults to two mirror frequencies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub oracle: QuadratureSpec,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub points: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::io(path, source))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    /// Applies overrides and fills every default so the result can be
    /// echoed as a complete audit record.
    pub fn resolve(mut self, task: Task, o: &Overrides) -> Result<Self, CliError> {
        if let Some(declared) = self.task {
            if declared != task {
                return Err(CliError::Invalid(format!(
                    "task: config declares \"{}\" but the subcommand is \"{}\"",
                    declared.name(),
                    task.name()
                )));
            }
        }
        self.task = Some(task);
        if o.out.is_some() {
            self.output.csv = o.out.clone();
        }
        if o.plot.is_some() {
            self.output.plot = o.plot.clone();
        }
        let omega_p = if self.system.mirror.enabled { self.system.mirror.frequency } else { 0.0 };
        match task {
            Task::Spectrum => {
                let s = self.spectrum.as_mut().ok_or_else(|| missing("spectrum"))?;
                check_time("spectrum.t", s.t)?;
                let half = s.half_width.unwrap_or(if omega_p > 0.0 {
                    coop_emission::spectrum::DEFAULT_HALF_WIDTH_OMEGA_P * omega_p
                } else {
                    20.0 * std::f64::consts::PI / s.t.max(f64::MIN_POSITIVE)
                });
                check_positive("spectrum.half_width", half)?;
                s.half_width = Some(half);
                s.points = Some(o.points.or(s.points).unwrap_or(coop_emission::spectrum::DEFAULT_GRID_POINTS));
                check_points("spectrum.points", s.points, 2)?;
                let mut labels = Vec::new();
                for (i, ov) in s.overlays.iter().enumerate() {
                    let ok = !ov.label.is_empty()
                        && ov.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
                    if !ok || ov.label == "primary" || labels.contains(&ov.label) {
                        return Err(CliError::Invalid(format!(
                            "spectrum.overlays[{i}].label = {:?}: labels must be unique, \
                             non-empty, use [A-Za-z0-9_-] and not be \"primary\"",
                            ov.label
                        )));
                    }
                    labels.push(ov.label.clone());
                    if let Some(t) = ov.t {
                        check_time(&format!("spectrum.overlays[{i}].t"), t)?;
                    }
                }
            }
            Task::Decay => {
                let d = self.decay.as_ref().ok_or_else(|| missing("decay"))?;
                check_times("decay.times", &d.times)?;
            }
            Task::DecaySweep => {
                let s = self.decay_sweep.as_mut().ok_or_else(|| missing("decay_sweep"))?;
                check_times("decay_sweep.times", &s.times)?;
                s.z_b.points = Some(o.points.or(s.z_b.points).unwrap_or(DEFAULT_SWEEP_POINTS));
                check_points("decay_sweep.z_b.points", s.z_b.points, 2)?;
                if !(s.z_b.start > 0.0 && s.z_b.stop > s.z_b.start && s.z_b.stop.is_finite()) {
                    return Err(CliError::Invalid(format!(
                        "decay_sweep.z_b: need 0 < start < stop, got start = {:e}, stop = {:e}",
                        s.z_b.start, s.z_b.stop
                    )));
                }
            }
            Task::Validate => {
                let v = self.validate.as_mut().ok_or_else(|| missing("validate"))?;
                check_time("validate.t", v.t)?;
                v.points = Some(o.points.or(v.points).unwrap_or(DEFAULT_VALIDATE_POINTS));
                check_points("validate.points", v.points, 1)?;
                let half = v.half_width.unwrap_or(if omega_p > 0.0 {
                    2.0 * omega_p
                } else {
                    4.0 * std::f64::consts::PI / v.t.max(f64::MIN_POSITIVE)
                });
                check_positive("validate.half_width", half)?;
                v.half_width = Some(half);
                let tol = o.tolerance.or(v.tolerance).unwrap_or(DEFAULT_TOLERANCE);
                check_positive("validate.tolerance", tol)?;
                v.tolerance = Some(tol);
                let q = &v.oracle;
                if q.time_order < 2 || q.n_theta < 2 || q.n_phi < 2 || !q.rel_tol.is_finite() || q.rel_tol <= 0.0 {
                    return Err(CliError::Invalid(
                        "validate.oracle: time_order, n_theta and n_phi must be >= 2 and rel_tol > 0".into(),
                    ));
                }
            }
        }
        Ok(self)
    }
}

impl SystemSection {
    pub fn to_system(&self) -> SystemConfig {
        SystemConfig {
            atom_a: AtomSpec::from_si(self.atom_a.position, self.atom_a.dipole),
            atom_b: AtomSpec::from_si(self.atom_b.position, self.atom_b.dipole),
            mirror: self.mirror.into(),
            omega0: self.omega0,
            bell_state: self.bell_state,
            dicke_limit: self.dicke_limit,
        }
    }

    pub fn with_overlay(&self, ov: &Overlay) -> Self {
        let mut out = self.clone();
        if let Some(d) = ov.dipole {
            out.atom_a.dipole = d;
            out.atom_b.dipole = d;
        }
        if let Some(m) = ov.mirror {
            out.mirror = m;
        }
        if let Some(b) = ov.bell_state {
            out.bell_state = b;
        }
        out
    }
}

fn missing(section: &str) -> CliError {
    CliError::Invalid(format!("{section}: section required by this subcommand is missing"))
}

fn check_time(field: &str, t: f64) -> Result<(), CliError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{field} = {t:e} s must be finite and >= 0")))
    }
}

fn check_times(field: &str, times: &[f64]) -> Result<(), CliError> {
    if times.is_empty() {
        return Err(CliError::Invalid(format!("{field} must not be empty")));
    }
    for (i, &t) in times.iter().enumerate() {
        check_time(&format!("{field}[{i}]"), t)?;
    }
    Ok(())
}

fn check_positive(field: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{field} = {v:e} must be finite and > 0")))
    }
}

fn check_points(field: &str, n: Option<usize>, min: usize) -> Result<(), CliError> {
    match n {
        Some(n) if n >= min => Ok(()),
        Some(n) => Err(CliError::Invalid(format!("{field} = {n} must be >= {min}"))),
        None => Ok(()),
    }
}
