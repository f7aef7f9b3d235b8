//! Subcommand computations on a resolved [`Design`], and their tabular forms.

use pinchip_core::layout::{generate_layout, run_drc, DrcReport, InterposerLayout, LayoutConfig};
use pinchip_core::materials::MaterialCatalog;
use pinchip_core::rfnet::{crosstalk_proxy, mismatch_report, MismatchReport};
use pinchip_core::scaling::{
    logical_qubit_estimate, required_pitch_for_full_chip, scaling_report, Access, QubitArraySpec, ScalingReport,
    WiringArchitecture,
};
use pinchip_core::thermal::{stage_report, StageReport};
use pinchip_core::tlines::{coax_impedance, cpw_effective_permittivity, cpw_impedance, PinStack};
use serde::Serialize;

use crate::config::{Design, Line, RfSetup, ThermalSetup};
use crate::error::{CliError, Result};
use crate::formats::num;
use crate::formats::table::Table;

fn need<'a, T>(section: &str, v: Option<&'a T>) -> Result<&'a T> {
    v.ok_or_else(|| CliError::config(section, "section missing from config"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleRow {
    pub name: String,
    pub wire_pitch: f64,
    #[serde(flatten)]
    pub report: ScalingReport,
    /// Lateral only: qubit pitch at which the whole chip could be wired.
    pub required_pitch: Option<f64>,
    pub logical_qubits: Option<u64>,
}

pub fn scale_row(
    name: &str,
    array: &QubitArraySpec,
    arch: &WiringArchitecture,
    physical_per_logical: Option<u64>,
) -> Result<ScaleRow> {
    let report = scaling_report(array, arch).map_err(|e| CliError::analysis(format!("wiring `{name}`"), e))?;
    let logical = physical_per_logical
        .map(|per| logical_qubit_estimate(report.qubits, per))
        .transpose()
        .map_err(|e| CliError::config("array.physical_per_logical", e))?;
    Ok(ScaleRow {
        name: name.to_string(),
        wire_pitch: arch.wire_pitch,
        report,
        required_pitch: (arch.access == Access::Lateral)
            .then(|| required_pitch_for_full_chip(array.chip_side, arch.wire_pitch)),
        logical_qubits: logical,
    })
}

pub fn scale(design: &Design) -> Result<Vec<ScaleRow>> {
    let array = need("array", design.array.as_ref())?;
    if design.wiring.is_empty() {
        return Err(CliError::config("wiring", "no wiring architectures declared"));
    }
    design
        .wiring
        .iter()
        .map(|(name, arch)| scale_row(name, array, arch, design.physical_per_logical))
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub const SCALE_COLUMNS: [&str; 12] = [
    "name",
    "access",
    "wire_pitch_m",
    "qubits",
    "qubits_exact",
    "wires",
    "wires_exact",
    "qubits_per_side",
    "limiting_factor",
    "crossover_length_m",
    "required_pitch_m",
    "logical_qubits",
];

pub fn scale_table(rows: &[ScaleRow]) -> Table {
    let mut t = Table::new(SCALE_COLUMNS);
    for r in rows {
        t.push(vec![
            r.name.clone(),
            r.report.access.to_string(),
            num(r.wire_pitch),
            r.report.qubits.to_string(),
            num(r.report.qubits_exact),
            r.report.wires.to_string(),
            num(r.report.wires_exact),
            r.report.qubits_per_side.to_string(),
            r.report.limiting_factor.to_string(),
            opt(r.report.crossover_length),
            opt(r.required_pitch),
            r.logical_qubits.map(|l| l.to_string()).unwrap_or_default(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpedanceRow {
    pub name: String,
    pub kind: &'static str,
    pub impedance: f64,
    pub effective_permittivity: f64,
    /// Coupled lines: odd-mode impedance (`impedance` holds the even mode).
    pub odd_impedance: Option<f64>,
    pub coupling_db: Option<f64>,
    pub estimate: bool,
}

pub fn impedance(design: &Design) -> Result<Vec<ImpedanceRow>> {
    if design.lines.is_empty() {
        return Err(CliError::config("lines", "no transmission lines declared"));
    }
    design
        .lines
        .iter()
        .map(|l| {
            let ctx = || format!("line `{}`", l.name);
            Ok(match &l.line {
                Line::Coax(c) => ImpedanceRow {
                    name: l.name.clone(),
                    kind: "coax",
                    impedance: coax_impedance(c).map_err(|e| CliError::analysis(ctx(), e))?,
                    effective_permittivity: c.relative_permittivity,
                    odd_impedance: None,
                    coupling_db: None,
                    estimate: false,
                },
                Line::Cpw(c) => ImpedanceRow {
                    name: l.name.clone(),
                    kind: "cpw",
                    impedance: cpw_impedance(c).map_err(|e| CliError::analysis(ctx(), e))?,
                    effective_permittivity: cpw_effective_permittivity(c).map_err(|e| CliError::analysis(ctx(), e))?,
                    odd_impedance: None,
                    coupling_db: None,
                    estimate: false,
                },
                Line::CoupledCpw(c) => {
                    let m = c.mode_impedances().map_err(|e| CliError::analysis(ctx(), e))?;
                    let x = crosstalk_proxy(c).map_err(|e| CliError::analysis(ctx(), e))?;
                    ImpedanceRow {
                        name: l.name.clone(),
                        kind: "coupled_cpw",
                        impedance: m.even,
                        effective_permittivity: m.even_effective_permittivity,
                        odd_impedance: Some(m.odd),
                        coupling_db: Some(x.coupling_db),
                        estimate: x.is_estimate,
                    }
                }
            })
        })
        .collect()
}

pub const IMPEDANCE_COLUMNS: [&str; 7] = [
    "name",
    "type",
    "impedance_ohm",
    "effective_permittivity",
    "odd_impedance_ohm",
    "coupling_db",
    "estimate",
];

pub fn impedance_table(rows: &[ImpedanceRow]) -> Table {
    let mut t = Table::new(IMPEDANCE_COLUMNS);
    for r in rows {
        t.push(vec![
            r.name.clone(),
            r.kind.to_string(),
            num(r.impedance),
            num(r.effective_permittivity),
            opt(r.odd_impedance),
            opt(r.coupling_db),
            r.estimate.to_string(),
        ]);
    }
    t
}

pub fn rf(design: &Design) -> Result<MismatchReport> {
    let setup: &RfSetup = need("rf", design.rf.as_ref())?;
    mismatch_report(&setup.path, setup.band, setup.points).map_err(|e| CliError::analysis("rf", e))
}

pub const RF_COLUMNS: [&str; 7] = [
    "frequency_hz",
    "s11_re",
    "s11_im",
    "s21_re",
    "s21_im",
    "s11_db",
    "s21_db",
];

pub fn rf_table(report: &MismatchReport) -> Table {
    let mut t = Table::new(RF_COLUMNS);
    let r = &report.response;
    for ((f, s), (d11, d21)) in r.frequencies.iter().zip(&r.s).zip(r.s11_db().zip(r.s21_db())) {
        t.push(vec![
            num(*f),
            num(s.s11.re),
            num(s.s11.im),
            num(s.s21.re),
            num(s.s21.im),
            num(d11),
            num(d21),
        ]);
    }
    t
}

pub fn rf_summary(report: &MismatchReport) -> String {
    let first = report
        .first_reflection_minimum
        .map_or_else(|| "none".to_string(), |f| format!("{} Hz", num(f)));
    format!(
        "worst |S11| = {:.6} ({:.3} dB) at {} Hz; first reflection minimum: {first}",
        report.worst_s11,
        report.worst_s11_db,
        num(report.worst_frequency)
    )
}

pub struct LayoutResult {
    pub config: LayoutConfig,
    pub layout: InterposerLayout,
    pub drc: DrcReport,
}

pub fn layout(design: &Design) -> Result<LayoutResult> {
    let config = need("layout", design.layout.as_ref())?.clone();
    let pin: &PinStack = need("pin", design.pin.as_ref())?;
    let layout = generate_layout(&config).map_err(|e| CliError::config("layout", e))?;
    let drc = run_drc(&layout, &config, pin);
    Ok(LayoutResult { config, layout, drc })
}

pub fn drc_table(drc: &DrcReport) -> Table {
    let mut t = Table::new(["rule", "severity", "offending_count", "message"]);
    for f in &drc.findings {
        t.push(vec![
            f.rule.to_string(),
            f.severity.to_string(),
            f.offending.len().to_string(),
            f.message.clone(),
        ]);
    }
    t
}

pub fn budget(design: &Design, catalog: &MaterialCatalog) -> Result<StageReport> {
    let setup: &ThermalSetup = need("thermal", design.thermal.as_ref())?;
    stage_report(&setup.architecture, &setup.stages, catalog).map_err(|e| CliError::analysis("thermal", e))
}

pub const BUDGET_COLUMNS: [&str; 9] = [
    "stage",
    "temperature_k",
    "cooling_power_w",
    "dissipation_w",
    "conduction_in_w",
    "total_w",
    "margin",
    "feasible",
    "estimated",
];

pub fn budget_table(report: &StageReport) -> Table {
    let mut t = Table::new(BUDGET_COLUMNS);
    for r in &report.rows {
        t.push(vec![
            r.stage.clone(),
            num(r.temperature),
            num(r.cooling_power),
            num(r.dissipation),
            num(r.conduction_in),
            num(r.total),
            opt(r.margin),
            r.feasible.to_string(),
            r.estimated.to_string(),
        ]);
    }
    t
}
