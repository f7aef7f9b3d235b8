//! Cryogenic heat bookkeeping: controller dissipation against stage cooling
//! power, and conduction through wiring between stages.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::consts::LORENZ_NUMBER;
use crate::materials::{Material, MaterialCatalog, MaterialError, MaterialKind};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Refinement cap per table segment: 2^MAX_LEVELS trapezoids.
const MAX_LEVELS: u32 = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum ThermalError {
    InvalidInput { field: &'static str, reason: &'static str },
    UnknownStage(String),
    Material(MaterialError),
}

impl fmt::Display for ThermalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidInput { field, reason } => write!(f, "{field}: {reason}"),
            Self::UnknownStage(name) => write!(f, "unknown stage `{name}`"),
            Self::Material(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for ThermalError {}

impl From<MaterialError> for ThermalError {
    fn from(e: MaterialError) -> Self {
        Self::Material(e)
    }
}

fn invalid(field: &'static str, reason: &'static str) -> ThermalError {
    ThermalError::InvalidInput { field, reason }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub name: String,
    /// Kelvin.
    pub temperature: f64,
    /// Watts.
    pub cooling_power: f64,
}

impl Stage {
    pub fn new(name: impl Into<String>, temperature: f64, cooling_power: f64) -> Self {
        Self {
            name: name.into(),
            temperature,
            cooling_power,
        }
    }
}

/// Stages ordered from room temperature down to the mixing chamber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StageModel {
    pub stages: Vec<Stage>,
}

impl StageModel {
    pub fn new(stages: Vec<Stage>) -> Result<Self, ThermalError> {
        let model = Self { stages };
        model.validate()?;
        Ok(model)
    }

    /// 300 K / 50 K / 3 K / 0.7 K / 0.1 K / 0.01 K. Only the 3 K figure
    /// (1 W, a pulse-tube second stage) is a physical anchor; the rest are
    /// typical dilution-refrigerator values meant to be overridden.
    pub fn default_ladder() -> Self {
        Self {
            stages: alloc::vec![
                Stage::new("300K", 300.0, 1000.0),
                Stage::new("50K", 50.0, 30.0),
                Stage::new("3K", 3.0, 1.0),
                Stage::new("still", 0.7, 10e-3),
                Stage::new("cold-plate", 0.1, 200e-6),
                Stage::new("mixing-chamber", 0.01, 20e-6),
            ],
        }
    }

    pub fn validate(&self) -> Result<(), ThermalError> {
        if self.stages.is_empty() {
            return Err(invalid("stages", "need at least one stage"));
        }
        for s in &self.stages {
            if !(s.temperature > 0.0 && s.temperature.is_finite()) {
                return Err(invalid("stages.temperature", "must be positive"));
            }
            if !(s.cooling_power > 0.0 && s.cooling_power.is_finite()) {
                return Err(invalid("stages.cooling_power", "must be positive"));
            }
        }
        if self.stages.windows(2).any(|w| w[1].temperature >= w[0].temperature) {
            return Err(invalid("stages", "temperatures must strictly decrease"));
        }
        for (i, s) in self.stages.iter().enumerate() {
            if self.stages[..i].iter().any(|o| o.name == s.name) {
                return Err(invalid("stages.name", "stage names must be unique"));
            }
        }
        Ok(())
    }

    pub fn stage(&self, name: &str) -> Result<&Stage, ThermalError> {
        self.stages
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| ThermalError::UnknownStage(name.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerKind {
    Target,
    Sfq,
    CryoCmos,
    Custom,
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Target => "target",
            Self::Sfq => "sfq",
            Self::CryoCmos => "cryo_cmos",
            Self::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerTech {
    pub kind: ControllerKind,
    /// Watts per qubit.
    pub power_per_qubit: f64,
}

impl ControllerTech {
    /// 1 nW per qubit.
    pub fn target() -> Self {
        Self {
            kind: ControllerKind::Target,
            power_per_qubit: 1e-9,
        }
    }

    /// 100 nW per qubit.
    pub fn sfq() -> Self {
        Self {
            kind: ControllerKind::Sfq,
            power_per_qubit: 100e-9,
        }
    }

    /// 10 µW per qubit.
    pub fn cryo_cmos() -> Self {
        Self {
            kind: ControllerKind::CryoCmos,
            power_per_qubit: 10e-6,
        }
    }

    pub fn custom(power_per_qubit: f64) -> Self {
        Self {
            kind: ControllerKind::Custom,
            power_per_qubit,
        }
    }

    /// The preset for `kind`; `None` for [`ControllerKind::Custom`].
    pub fn preset(kind: ControllerKind) -> Option<Self> {
        match kind {
            ControllerKind::Target => Some(Self::target()),
            ControllerKind::Sfq => Some(Self::sfq()),
            ControllerKind::CryoCmos => Some(Self::cryo_cmos()),
            ControllerKind::Custom => None,
        }
    }

    pub fn validate(&self) -> Result<(), ThermalError> {
        if self.power_per_qubit > 0.0 && self.power_per_qubit.is_finite() {
            Ok(())
        } else {
            Err(invalid("power_per_qubit", "must be positive"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerBudget {
    pub total: f64,
    pub feasible: bool,
    /// `cooling_power / total`.
    pub margin: f64,
}

pub fn controller_budget(qubits: u64, tech: &ControllerTech, stage: &Stage) -> Result<ControllerBudget, ThermalError> {
    if qubits == 0 {
        return Err(invalid("qubits", "must be at least 1"));
    }
    tech.validate()?;
    let total = qubits as f64 * tech.power_per_qubit;
    Ok(ControllerBudget {
        total,
        feasible: total <= stage.cooling_power,
        margin: stage.cooling_power / total,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductionPath {
    pub material: String,
    /// m².
    pub cross_section_area: f64,
    /// Meters.
    pub length: f64,
    pub t_hot: f64,
    pub t_cold: f64,
    pub count: u64,
    /// Fraction of the conducted heat that reaches the cold end; 1 means no
    /// shielding or heat sinking along the way.
    #[serde(default = "unit")]
    pub transmission: f64,
    /// Residual resistivity (Ω·m) used for a Wiedemann–Franz estimate when
    /// the material has no conductivity table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_resistivity: Option<f64>,
}

fn unit() -> f64 {
    1.0
}

impl ConductionPath {
    pub fn validate(&self) -> Result<(), ThermalError> {
        if !(self.cross_section_area > 0.0 && self.cross_section_area.is_finite()) {
            return Err(invalid("cross_section_area", "must be positive"));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(invalid("length", "must be positive"));
        }
        if !(self.t_cold > 0.0 && self.t_hot.is_finite()) {
            return Err(invalid("t_cold", "must be positive"));
        }
        if self.t_hot < self.t_cold {
            return Err(invalid("t_hot", "must be at least t_cold"));
        }
        if !(0.0..=1.0).contains(&self.transmission) {
            return Err(invalid("transmission", "must lie in [0, 1]"));
        }
        if let Some(rho) = self.residual_resistivity {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(invalid("residual_resistivity", "must be positive"));
            }
        }
        Ok(())
    }

    /// `count · A / L`, meters.
    pub fn geometry_factor(&self) -> f64 {
        self.count as f64 * self.cross_section_area / self.length
    }
}

/// Circular cross-section area for `diameter`.
pub fn disc_area(diameter: f64) -> f64 {
    PI * diameter * diameter / 4.0
}

/// Illustrative via array: 160000 Nb-Ti vias, 20 µm across and 3 mm long,
/// between 3 K and 10 mK. The geometry is a plausible choice, not a
/// measured one.
pub fn example_via_path() -> ConductionPath {
    ConductionPath {
        material: "Nb-Ti".to_string(),
        cross_section_area: disc_area(20e-6),
        length: 3e-3,
        t_hot: 3.0,
        t_cold: 0.01,
        count: 160_000,
        transmission: 1.0,
        residual_resistivity: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConductionMethod {
    Table,
    /// Estimated from residual resistivity; flagged in reports.
    WiedemannFranz,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConductionLoad {
    pub watts: f64,
    pub method: ConductionMethod,
}

fn trapezoid_segment<F: Fn(f64) -> Result<f64, MaterialError>>(
    k: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, MaterialError> {
    let h = b - a;
    let mut estimate = 0.5 * h * (k(a)? + k(b)?);
    let mut intervals = 1u64;
    for _ in 0..MAX_LEVELS {
        let step = h / intervals as f64;
        let mut mid_sum = 0.0;
        for i in 0..intervals {
            mid_sum += k(a + (i as f64 + 0.5) * step)?;
        }
        let refined = 0.5 * estimate + 0.5 * step * mid_sum;
        intervals *= 2;
        let converged = (refined - estimate).abs() <= tol * refined.abs();
        estimate = refined;
        if converged && intervals >= 4 {
            break;
        }
    }
    Ok(estimate)
}

/// `∫ k(T) dT` from `t_cold` to `t_hot` on the material's log-log table,
/// refined per table segment until successive trapezoid estimates agree to
/// `tol` relative.
pub fn conductivity_integral(material: &Material, t_cold: f64, t_hot: f64, tol: f64) -> Result<f64, ThermalError> {
    if !(tol > 0.0) {
        return Err(invalid("tolerance", "must be positive"));
    }
    if t_hot <= t_cold {
        return Ok(0.0);
    }
    let (min, max) = material
        .conductivity_range()
        .ok_or_else(|| MaterialError::NoConductivityData(material.name.clone()))?;
    for t in [t_cold, t_hot] {
        if !(t >= min && t <= max) {
            return Err(MaterialError::OutOfRange {
                material: material.name.clone(),
                temperature: t,
                min,
                max,
            }
            .into());
        }
    }
    let mut breaks = Vec::new();
    breaks.push(t_cold);
    breaks.extend(
        material
            .thermal_conductivity_table
            .iter()
            .map(|&(t, _)| t)
            .filter(|&t| t > t_cold && t < t_hot),
    );
    breaks.push(t_hot);
    let k = |t: f64| material.interpolate_conductivity(t);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += trapezoid_segment(&k, w[0], w[1], tol)?;
    }
    Ok(total)
}

pub fn conduction_load(path: &ConductionPath, catalog: &MaterialCatalog) -> Result<ConductionLoad, ThermalError> {
    conduction_load_with_tolerance(path, catalog, DEFAULT_TOLERANCE)
}

pub fn conduction_load_with_tolerance(
    path: &ConductionPath,
    catalog: &MaterialCatalog,
    tol: f64,
) -> Result<ConductionLoad, ThermalError> {
    path.validate()?;
    let material = catalog.lookup(&path.material)?;
    let scale = path.geometry_factor() * path.transmission;
    if !material.thermal_conductivity_table.is_empty() {
        let integral = conductivity_integral(material, path.t_cold, path.t_hot, tol)?;
        return Ok(ConductionLoad {
            watts: scale * integral,
            method: ConductionMethod::Table,
        });
    }
    match (material.kind, path.residual_resistivity) {
        (MaterialKind::Conductor, Some(rho)) => {
            // k = L0·T/ρ integrates to L0·(Th² − Tc²)/(2ρ).
            let integral = LORENZ_NUMBER * (path.t_hot * path.t_hot - path.t_cold * path.t_cold) / (2.0 * rho);
            Ok(ConductionLoad {
                watts: scale * integral,
                method: ConductionMethod::WiedemannFranz,
            })
        }
        _ => Err(MaterialError::NoConductivityData(material.name.clone()).into()),
    }
}

/// Controllers of one technology sitting on a stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerLoad {
    pub stage: String,
    pub qubits: u64,
    pub tech: ControllerTech,
}

/// A conduction path dumping its heat on `stage`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatPath {
    pub stage: String,
    pub path: ConductionPath,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ThermalArchitecture {
    #[serde(default)]
    pub controllers: Vec<ControllerLoad>,
    #[serde(default)]
    pub paths: Vec<HeatPath>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRow {
    pub stage: String,
    pub temperature: f64,
    pub cooling_power: f64,
    pub dissipation: f64,
    pub conduction_in: f64,
    pub total: f64,
    /// `cooling_power / total`; absent when nothing loads the stage.
    pub margin: Option<f64>,
    pub feasible: bool,
    /// Some conduction on this stage came from a Wiedemann–Franz estimate.
    pub estimated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub rows: Vec<StageRow>,
}

impl StageReport {
    pub fn all_feasible(&self) -> bool {
        self.rows.iter().all(|r| r.feasible)
    }

    pub fn row(&self, stage: &str) -> Option<&StageRow> {
        self.rows.iter().find(|r| r.stage == stage)
    }
}

pub fn stage_report(
    arch: &ThermalArchitecture,
    stages: &StageModel,
    catalog: &MaterialCatalog,
) -> Result<StageReport, ThermalError> {
    stages.validate()?;
    let n = stages.stages.len();
    let index = |name: &str| {
        stages
            .stages
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| ThermalError::UnknownStage(name.to_string()))
    };
    let mut dissipation = alloc::vec![0.0; n];
    let mut conduction = alloc::vec![0.0; n];
    let mut estimated = alloc::vec![false; n];
    for c in &arch.controllers {
        let i = index(&c.stage)?;
        c.tech.validate()?;
        dissipation[i] += c.qubits as f64 * c.tech.power_per_qubit;
    }
    for p in &arch.paths {
        let i = index(&p.stage)?;
        let load = conduction_load(&p.path, catalog)?;
        conduction[i] += load.watts;
        estimated[i] |= load.method == ConductionMethod::WiedemannFranz;
    }
    let rows = stages
        .stages
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let total = dissipation[i] + conduction[i];
            StageRow {
                stage: s.name.clone(),
                temperature: s.temperature,
                cooling_power: s.cooling_power,
                dissipation: dissipation[i],
                conduction_in: conduction[i],
                total,
                margin: (total > 0.0).then(|| s.cooling_power / total),
                feasible: total <= s.cooling_power,
                estimated: estimated[i],
            }
        })
        .collect();
    Ok(StageReport { rows })
}
