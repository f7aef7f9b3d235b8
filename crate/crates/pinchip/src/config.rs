//! TOML design configuration. Every dimensional field is a string with a
//! unit suffix (see [`crate::units`]); dimensionless fields are plain numbers.
//! Errors carry the dotted path of the offending field.

use std::path::Path;

use pinchip_core::layout::{Annotation, AnnotationKind, LayoutConfig};
use pinchip_core::materials::MaterialCatalog;
use pinchip_core::math::{floor, snap_to_integer};
use pinchip_core::rfnet::{BondContact, InlineAttenuator, SignalPath, Taper, MAX_FREQUENCY};
use pinchip_core::scaling::{Access, BondWireGeometry, QubitArraySpec, WiringArchitecture};
use pinchip_core::thermal::{
    disc_area, ConductionPath, ControllerKind, ControllerLoad, ControllerTech, HeatPath, Stage, StageModel,
    ThermalArchitecture,
};
use pinchip_core::tlines::{
    coax_impedance, cpw_effective_permittivity, cpw_impedance, Coating, CoaxSpec, CoupledCpwSpec, CpwSpec, PinStack,
};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::units::{Area, Attenuation, Frequency, Inductance, Length, Power, Resistance, Resistivity, Temperature};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub array: Option<ArraySection>,
    #[serde(default)]
    pub wiring: Vec<WiringSection>,
    pub pin: Option<PinSection>,
    #[serde(default)]
    pub lines: Vec<LineSection>,
    pub rf: Option<RfSection>,
    pub layout: Option<LayoutSection>,
    pub thermal: Option<ThermalSection>,
    #[serde(default)]
    pub sweep: Vec<SweepSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub qubit_pitch: Length,
    pub chip_side: Length,
    /// Physical qubits per error-corrected logical qubit.
    pub physical_per_logical: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WiringSection {
    pub name: String,
    pub access: Access,
    pub wire_pitch: Option<Length>,
    pub bond: Option<BondSection>,
    pub wires_per_qubit: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BondSection {
    pub wire_diameter: Length,
    pub wire_gap: Length,
    pub wires_per_line: u32,
    #[serde(default)]
    pub grounds_shared: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinSection {
    pub core_diameter: Length,
    #[serde(default)]
    pub coatings: Vec<CoatingSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoatingSection {
    pub material: String,
    pub thickness: Length,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineType {
    Coax,
    Cpw,
    CoupledCpw,
}

/// One transmission-line definition. Which fields apply depends on `type`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSection {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: LineType,
    pub inner_diameter: Option<Length>,
    pub outer_diameter: Option<Length>,
    pub trace_width: Option<Length>,
    pub gap: Option<Length>,
    pub separation: Option<Length>,
    pub cover_height: Option<Length>,
    /// Catalog dielectric filling the line (coax) or forming the substrate
    /// (CPW). Mutually exclusive with `relative_permittivity`.
    pub dielectric: Option<String>,
    pub relative_permittivity: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfSection {
    /// Coax line whose impedance and permittivity describe the pin section.
    pub line: Option<String>,
    pub interposer_impedance: Option<Resistance>,
    pub pin_effective_permittivity: Option<f64>,
    pub system_impedance: Option<Resistance>,
    pub pin_length: Option<Length>,
    pub band_low: Option<Frequency>,
    pub band_high: Option<Frequency>,
    pub points: Option<usize>,
    /// CPW line whose impedance and permittivity describe the feed.
    pub feed_line: Option<String>,
    pub feed_length: Option<Length>,
    pub feed_effective_permittivity: Option<f64>,
    pub taper_length: Option<Length>,
    pub taper_segments: Option<u32>,
    pub bond_resistance: Option<Resistance>,
    pub bond_inductance: Option<Inductance>,
    #[serde(default)]
    pub attenuators: Vec<AttenuatorSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttenuatorSection {
    pub label: String,
    pub attenuation: Attenuation,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutSection {
    pub qubit_pitch: Option<Length>,
    pub array_side_count: Option<u32>,
    pub pad_diameter: Length,
    pub hole_diameter: Length,
    pub channel_width: Length,
    pub channel_depth: Length,
    pub pin_length: Length,
    pub pad_thickness: Length,
    pub tip_tolerance: Length,
    pub ground_curb_width: Length,
    pub ground_trace_width: Option<Length>,
    pub solder_ball_diameter: Option<Length>,
    #[serde(default)]
    pub annotations: Vec<AnnotationSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationSection {
    pub row: u32,
    pub kind: AnnotationKind,
    pub label: String,
    pub position: Length,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSection {
    pub stages: Option<Vec<StageSection>>,
    #[serde(default)]
    pub controllers: Vec<ControllerSection>,
    #[serde(default)]
    pub paths: Vec<PathSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSection {
    pub name: String,
    pub temperature: Temperature,
    pub cooling_power: Power,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    pub stage: String,
    /// Defaults to the full vertical array, `floor((ℓ/p_q)²)`.
    pub qubits: Option<u64>,
    pub tech: ControllerKind,
    /// Required for `custom`; overrides the preset otherwise.
    pub power_per_qubit: Option<Power>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    pub name: String,
    /// Stage that absorbs the heat.
    pub stage: String,
    /// Stage at the hot end; alternative to `t_hot`.
    pub from: Option<String>,
    pub material: String,
    pub diameter: Option<Length>,
    pub area: Option<Area>,
    pub length: Length,
    pub t_hot: Option<Temperature>,
    /// Defaults to the temperature of `stage`.
    pub t_cold: Option<Temperature>,
    pub count: u64,
    pub transmission: Option<f64>,
    pub residual_resistivity: Option<Resistivity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Scale,
    Impedance,
    Rf,
    Budget,
    Layout,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub name: String,
    pub parameter: String,
    pub start: toml::Value,
    pub stop: toml::Value,
    pub steps: usize,
    pub report: ReportKind,
    /// Further parameters stepped in lockstep with the first.
    #[serde(default)]
    pub linked: Vec<SweepAxis>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: String,
    pub start: toml::Value,
    pub stop: toml::Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Line {
    Coax(CoaxSpec),
    Cpw(CpwSpec),
    CoupledCpw(CoupledCpwSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedLine {
    pub name: String,
    pub line: Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RfSetup {
    pub path: SignalPath,
    pub band: (f64, f64),
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSetup {
    pub stages: StageModel,
    pub architecture: ThermalArchitecture,
}

/// A validated configuration in core-library types.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub array: Option<QubitArraySpec>,
    pub physical_per_logical: Option<u64>,
    pub wiring: Vec<(String, WiringArchitecture)>,
    pub pin: Option<PinStack>,
    pub lines: Vec<NamedLine>,
    pub rf: Option<RfSetup>,
    pub layout: Option<LayoutConfig>,
    pub thermal: Option<ThermalSetup>,
}

/// Raw config text plus its parsed tree, kept for sweeps.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub text: String,
    pub tree: toml::Value,
    pub raw: DesignConfig,
}

pub fn parse_tree(text: &str) -> Result<toml::Value> {
    text.parse::<toml::Table>()
        .map(toml::Value::Table)
        .map_err(|e| CliError::config("<config>", e.message()))
}

/// Deserializes a config tree, reporting the path of any bad field.
pub fn from_tree(tree: toml::Value) -> Result<DesignConfig> {
    serde_path_to_error::deserialize(tree).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(if path == "." { "<config>".into() } else { path }, e.into_inner())
    })
}

pub fn load(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    from_text(text)
}

pub fn from_text(text: String) -> Result<LoadedConfig> {
    let tree = parse_tree(&text)?;
    let raw = from_tree(tree.clone())?;
    Ok(LoadedConfig { text, tree, raw })
}

fn positive(path: impl Into<String>, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(path, "must be positive"))
    }
}

fn required<T>(path: impl Into<String>, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| CliError::config(path, "missing required field"))
}

fn find_named<'a, T>(items: &'a [T], name: &str, get: impl Fn(&T) -> &str) -> Option<(usize, &'a T)> {
    items.iter().enumerate().find(|(_, t)| get(t) == name)
}

/// Full-array qubit count `floor((ℓ/p_q)²)`.
pub fn full_array_qubits(array: &QubitArraySpec) -> u64 {
    let r = array.chip_side / array.qubit_pitch;
    floor(snap_to_integer(r * r)) as u64
}

impl DesignConfig {
    pub fn resolve(&self, catalog: &MaterialCatalog) -> Result<Design> {
        let array = self.array.as_ref().map(resolve_array).transpose()?;
        let wiring = self
            .wiring
            .iter()
            .enumerate()
            .map(|(i, w)| resolve_wiring(i, w))
            .collect::<Result<Vec<_>>>()?;
        check_unique("wiring", self.wiring.iter().map(|w| w.name.as_str()))?;
        let pin = self.pin.as_ref().map(|p| resolve_pin(p, catalog)).transpose()?;
        check_unique("lines", self.lines.iter().map(|l| l.name.as_str()))?;
        let lines = self
            .lines
            .iter()
            .enumerate()
            .map(|(i, l)| resolve_line(i, l, catalog))
            .collect::<Result<Vec<_>>>()?;
        let rf = self.rf.as_ref().map(|r| resolve_rf(r, &lines)).transpose()?;
        let layout = self
            .layout
            .as_ref()
            .map(|l| resolve_layout(l, array.as_ref()))
            .transpose()?;
        let thermal = self
            .thermal
            .as_ref()
            .map(|t| resolve_thermal(t, array.as_ref()))
            .transpose()?;
        Ok(Design {
            array,
            physical_per_logical: self.array.as_ref().and_then(|a| a.physical_per_logical),
            wiring,
            pin,
            lines,
            rf,
            layout,
            thermal,
        })
    }
}

fn check_unique<'a>(section: &str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for (i, n) in names.enumerate() {
        if !seen.insert(n) {
            return Err(CliError::config(
                format!("{section}[{i}].name"),
                format!("duplicate name `{n}`"),
            ));
        }
    }
    Ok(())
}

fn resolve_array(a: &ArraySection) -> Result<QubitArraySpec> {
    let spec = QubitArraySpec {
        qubit_pitch: a.qubit_pitch.get(),
        chip_side: a.chip_side.get(),
    };
    spec.validate().map_err(|e| match e {
        pinchip_core::scaling::ScalingError::InvalidInput { field, reason } => {
            CliError::config(format!("array.{field}"), reason)
        }
        other => CliError::config("array", other),
    })?;
    if a.physical_per_logical == Some(0) {
        return Err(CliError::config("array.physical_per_logical", "must be at least 1"));
    }
    Ok(spec)
}

fn resolve_wiring(i: usize, w: &WiringSection) -> Result<(String, WiringArchitecture)> {
    let base = format!("wiring[{i}]");
    let mut arch = match (&w.wire_pitch, &w.bond) {
        (Some(p), None) => WiringArchitecture {
            access: w.access,
            ..WiringArchitecture::lateral(positive(format!("{base}.wire_pitch"), p.get())?)
        },
        (None, Some(b)) => {
            let g = BondWireGeometry {
                wire_diameter: b.wire_diameter.get(),
                wire_gap: b.wire_gap.get(),
                wires_per_line: b.wires_per_line,
                grounds_shared: b.grounds_shared,
            };
            g.validate().map_err(|e| scaling_field(&format!("{base}.bond"), e))?;
            WiringArchitecture {
                access: w.access,
                ..WiringArchitecture::from_bonds(&g)
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::config(base, "give either `wire_pitch` or `bond`, not both"));
        }
        (None, None) => return Err(CliError::config(base, "needs `wire_pitch` or `bond`")),
    };
    arch.wires_per_qubit = w.wires_per_qubit.unwrap_or(1);
    arch.validate().map_err(|e| scaling_field(&base, e))?;
    Ok((w.name.clone(), arch))
}

fn scaling_field(base: &str, e: pinchip_core::scaling::ScalingError) -> CliError {
    match e {
        pinchip_core::scaling::ScalingError::InvalidInput { field, reason } => {
            CliError::config(format!("{base}.{field}"), reason)
        }
        other => CliError::config(base, other),
    }
}

fn resolve_pin(p: &PinSection, catalog: &MaterialCatalog) -> Result<PinStack> {
    positive("pin.core_diameter", p.core_diameter.get())?;
    let mut coatings = Vec::new();
    for (i, c) in p.coatings.iter().enumerate() {
        positive(format!("pin.coatings[{i}].thickness"), c.thickness.get())?;
        catalog
            .lookup(&c.material)
            .map_err(|e| CliError::config(format!("pin.coatings[{i}].material"), e))?;
        coatings.push(Coating {
            material: c.material.clone(),
            thickness: c.thickness.get(),
        });
    }
    Ok(PinStack {
        core_diameter: p.core_diameter.get(),
        coatings,
    })
}

fn line_permittivity(base: &str, l: &LineSection, catalog: &MaterialCatalog) -> Result<f64> {
    match (&l.dielectric, l.relative_permittivity) {
        (Some(name), None) => catalog
            .lookup(name)
            .and_then(|m| m.permittivity())
            .map_err(|e| CliError::config(format!("{base}.dielectric"), e)),
        (None, Some(eps)) if eps >= 1.0 && eps.is_finite() => Ok(eps),
        (None, Some(_)) => Err(CliError::config(
            format!("{base}.relative_permittivity"),
            "must be >= 1",
        )),
        (Some(_), Some(_)) => Err(CliError::config(
            base,
            "give either `dielectric` or `relative_permittivity`, not both",
        )),
        (None, None) => Err(CliError::config(base, "needs `dielectric` or `relative_permittivity`")),
    }
}

fn resolve_line(i: usize, l: &LineSection, catalog: &MaterialCatalog) -> Result<NamedLine> {
    let base = format!("lines[{i}]");
    let eps = line_permittivity(&base, l, catalog)?;
    let len = |field: &str, v: Option<Length>| -> Result<f64> {
        let path = format!("{base}.{field}");
        positive(path.clone(), required(path, v)?.get())
    };
    let forbid = |field: &str, present: bool| -> Result<()> {
        if present {
            Err(CliError::config(
                format!("{base}.{field}"),
                format!("not used by `{:?}` lines", l.kind),
            ))
        } else {
            Ok(())
        }
    };
    let cover = l
        .cover_height
        .map(|h| positive(format!("{base}.cover_height"), h.get()))
        .transpose()?;
    let line = match l.kind {
        LineType::Coax => {
            for (f, p) in [
                ("trace_width", l.trace_width.is_some()),
                ("gap", l.gap.is_some()),
                ("separation", l.separation.is_some()),
                ("cover_height", l.cover_height.is_some()),
            ] {
                forbid(f, p)?;
            }
            let spec = CoaxSpec {
                inner_diameter: len("inner_diameter", l.inner_diameter)?,
                outer_diameter: len("outer_diameter", l.outer_diameter)?,
                relative_permittivity: eps,
            };
            spec.validate()
                .map_err(|e| CliError::config(format!("{base}.outer_diameter"), e))?;
            Line::Coax(spec)
        }
        LineType::Cpw | LineType::CoupledCpw => {
            forbid("inner_diameter", l.inner_diameter.is_some())?;
            forbid("outer_diameter", l.outer_diameter.is_some())?;
            let trace_width = len("trace_width", l.trace_width)?;
            let gap = len("gap", l.gap)?;
            if l.kind == LineType::Cpw {
                forbid("separation", l.separation.is_some())?;
                Line::Cpw(CpwSpec {
                    trace_width,
                    gap,
                    relative_permittivity: eps,
                    cover_height: cover,
                })
            } else {
                Line::CoupledCpw(CoupledCpwSpec {
                    trace_width,
                    gap,
                    separation: len("separation", l.separation)?,
                    relative_permittivity: eps,
                    cover_height: cover,
                })
            }
        }
    };
    Ok(NamedLine {
        name: l.name.clone(),
        line,
    })
}

fn resolve_rf(r: &RfSection, lines: &[NamedLine]) -> Result<RfSetup> {
    let system = positive("rf.system_impedance", r.system_impedance.map_or(50.0, |z| z.get()))?;
    let pin_length = positive("rf.pin_length", required("rf.pin_length", r.pin_length)?.get())?;
    let lookup = |field: &str, name: &str| {
        find_named(lines, name, |l| l.name.as_str())
            .map(|(_, l)| l)
            .ok_or_else(|| CliError::config(format!("rf.{field}"), format!("no line named `{name}`")))
    };
    let (pin_z, pin_eps) = match (&r.line, r.interposer_impedance) {
        (Some(name), None) => match &lookup("line", name)?.line {
            Line::Coax(c) => (
                coax_impedance(c).map_err(|e| CliError::config("rf.line", e))?,
                c.relative_permittivity,
            ),
            _ => return Err(CliError::config("rf.line", format!("`{name}` is not a coax line"))),
        },
        (None, Some(z)) => (
            positive("rf.interposer_impedance", z.get())?,
            r.pin_effective_permittivity
                .unwrap_or(pinchip_core::rfnet::DEFAULT_PIN_PERMITTIVITY),
        ),
        (Some(_), Some(_)) => return Err(CliError::config("rf", "give either `line` or `interposer_impedance`")),
        (None, None) => return Err(CliError::config("rf", "needs `line` or `interposer_impedance`")),
    };
    if r.line.is_some() && r.pin_effective_permittivity.is_some() {
        return Err(CliError::config(
            "rf.pin_effective_permittivity",
            "taken from `rf.line`; remove one of them",
        ));
    }
    let mut path = SignalPath::nominal(pin_length, pin_z, system);
    path.pin.effective_permittivity = pin_eps;
    if let Some(name) = &r.feed_line {
        match &lookup("feed_line", name)?.line {
            Line::Cpw(c) => {
                path.feed.impedance = cpw_impedance(c).map_err(|e| CliError::config("rf.feed_line", e))?;
                path.feed.effective_permittivity =
                    cpw_effective_permittivity(c).map_err(|e| CliError::config("rf.feed_line", e))?;
            }
            _ => return Err(CliError::config("rf.feed_line", format!("`{name}` is not a cpw line"))),
        }
        if r.feed_effective_permittivity.is_some() {
            return Err(CliError::config(
                "rf.feed_effective_permittivity",
                "taken from `rf.feed_line`; remove one of them",
            ));
        }
    }
    if let Some(eps) = r.feed_effective_permittivity {
        if !(eps >= 1.0 && eps.is_finite()) {
            return Err(CliError::config("rf.feed_effective_permittivity", "must be >= 1"));
        }
        path.feed.effective_permittivity = eps;
    }
    if let Some(l) = r.feed_length {
        if !(l.get() >= 0.0) {
            return Err(CliError::config("rf.feed_length", "must be non-negative"));
        }
        path.feed.length = l.get();
    }
    path.taper = Taper {
        segments: r.taper_segments.unwrap_or(pinchip_core::rfnet::DEFAULT_TAPER_SEGMENTS),
        length: r.taper_length.map_or(0.0, |l| l.get()),
    };
    if !(path.taper.length >= 0.0) {
        return Err(CliError::config("rf.taper_length", "must be non-negative"));
    }
    if path.taper.length > 0.0 && path.taper.segments == 0 {
        return Err(CliError::config(
            "rf.taper_segments",
            "must be at least 1 when a taper is set",
        ));
    }
    path.bond = BondContact {
        resistance: r.bond_resistance.map_or(0.0, |x| x.get()),
        inductance: r.bond_inductance.map_or(0.0, |x| x.get()),
    };
    if path.bond.resistance < 0.0 {
        return Err(CliError::config("rf.bond_resistance", "must be non-negative"));
    }
    if path.bond.inductance < 0.0 {
        return Err(CliError::config("rf.bond_inductance", "must be non-negative"));
    }
    for (i, a) in r.attenuators.iter().enumerate() {
        if !(a.attenuation.get() >= 0.0) {
            return Err(CliError::config(
                format!("rf.attenuators[{i}].attenuation"),
                "must be >= 0 dB",
            ));
        }
        path.attenuators.push(InlineAttenuator {
            label: a.label.clone(),
            attenuation_db: a.attenuation.get(),
        });
    }
    let band = (
        r.band_low.map_or(0.0, |f| f.get()),
        r.band_high.map_or(MAX_FREQUENCY, |f| f.get()),
    );
    if !(band.0 >= 0.0) {
        return Err(CliError::config("rf.band_low", "must be non-negative"));
    }
    if band.1 > MAX_FREQUENCY {
        return Err(CliError::config("rf.band_high", "must not exceed 10GHz"));
    }
    if band.1 < band.0 {
        return Err(CliError::config("rf.band_high", "must be at least band_low"));
    }
    let points = r.points.unwrap_or(pinchip_core::rfnet::DEFAULT_SWEEP_POINTS);
    if points == 0 || (points == 1) != (band.0 == band.1) {
        return Err(CliError::config(
            "rf.points",
            "need >= 2 points for a band, exactly 1 for a single frequency",
        ));
    }
    Ok(RfSetup { path, band, points })
}

fn resolve_layout(l: &LayoutSection, array: Option<&QubitArraySpec>) -> Result<LayoutConfig> {
    let qubit_pitch = match (l.qubit_pitch, array) {
        (Some(p), _) => p.get(),
        (None, Some(a)) => a.qubit_pitch,
        (None, None) => {
            return Err(CliError::config(
                "layout.qubit_pitch",
                "missing and no [array] to inherit from",
            ))
        }
    };
    let array_side_count = match (l.array_side_count, array) {
        (Some(n), _) => n,
        (None, Some(a)) => {
            let n = floor(snap_to_integer(a.chip_side / qubit_pitch));
            u32::try_from(n as u64).map_err(|_| CliError::config("layout.array_side_count", "array too large"))?
        }
        (None, None) => {
            return Err(CliError::config(
                "layout.array_side_count",
                "missing and no [array] to inherit from",
            ))
        }
    };
    let cfg = LayoutConfig {
        qubit_pitch,
        array_side_count,
        pad_diameter: l.pad_diameter.get(),
        hole_diameter: l.hole_diameter.get(),
        channel_width: l.channel_width.get(),
        channel_depth: l.channel_depth.get(),
        pin_length: l.pin_length.get(),
        pad_thickness: l.pad_thickness.get(),
        tip_tolerance: l.tip_tolerance.get(),
        ground_curb_width: l.ground_curb_width.get(),
        ground_trace_width: l
            .ground_trace_width
            .map_or(pinchip_core::layout::GROUND_TRACE_WIDTH, |x| x.get()),
        solder_ball_diameter: l.solder_ball_diameter.map_or(40e-6, |x| x.get()),
        annotations: l
            .annotations
            .iter()
            .map(|a| Annotation {
                row: a.row,
                kind: a.kind,
                label: a.label.clone(),
                position: a.position.get(),
            })
            .collect(),
    };
    cfg.validate().map_err(|e| match e {
        pinchip_core::layout::LayoutError::InvalidConfig { field, reason } => {
            CliError::config(format!("layout.{field}"), reason)
        }
        other => CliError::config("layout", other),
    })?;
    Ok(cfg)
}

fn resolve_thermal(t: &ThermalSection, array: Option<&QubitArraySpec>) -> Result<ThermalSetup> {
    let stages = match &t.stages {
        None => StageModel::default_ladder(),
        Some(list) => {
            check_unique("thermal.stages", list.iter().map(|s| s.name.as_str()))?;
            let model = StageModel {
                stages: list
                    .iter()
                    .map(|s| Stage::new(s.name.clone(), s.temperature.get(), s.cooling_power.get()))
                    .collect(),
            };
            model.validate().map_err(|e| CliError::config("thermal.stages", e))?;
            model
        }
    };
    let stage_of = |path: String, name: &str| {
        stages
            .stage(name)
            .cloned()
            .map_err(|_| CliError::config(path, format!("unknown stage `{name}`")))
    };
    let mut arch = ThermalArchitecture::default();
    for (i, c) in t.controllers.iter().enumerate() {
        let base = format!("thermal.controllers[{i}]");
        stage_of(format!("{base}.stage"), &c.stage)?;
        let tech = match (ControllerTech::preset(c.tech), c.power_per_qubit) {
            (_, Some(p)) => ControllerTech {
                kind: c.tech,
                power_per_qubit: positive(format!("{base}.power_per_qubit"), p.get())?,
            },
            (Some(preset), None) => preset,
            (None, None) => {
                return Err(CliError::config(
                    format!("{base}.power_per_qubit"),
                    "required for custom controllers",
                ))
            }
        };
        let qubits = match (c.qubits, array) {
            (Some(q), _) => q,
            (None, Some(a)) => full_array_qubits(a),
            (None, None) => {
                return Err(CliError::config(
                    format!("{base}.qubits"),
                    "missing and no [array] to derive it from",
                ))
            }
        };
        if qubits == 0 {
            return Err(CliError::config(format!("{base}.qubits"), "must be at least 1"));
        }
        arch.controllers.push(ControllerLoad {
            stage: c.stage.clone(),
            qubits,
            tech,
        });
    }
    for (i, p) in t.paths.iter().enumerate() {
        let base = format!("thermal.paths[{i}]");
        let cold_stage = stage_of(format!("{base}.stage"), &p.stage)?;
        let t_hot = match (&p.from, p.t_hot) {
            (Some(name), None) => stage_of(format!("{base}.from"), name)?.temperature,
            (None, Some(t)) => t.get(),
            (Some(_), Some(_)) => return Err(CliError::config(base, "give either `from` or `t_hot`")),
            (None, None) => return Err(CliError::config(base, "needs `from` or `t_hot`")),
        };
        let area = match (p.diameter, p.area) {
            (Some(d), None) => disc_area(positive(format!("{base}.diameter"), d.get())?),
            (None, Some(a)) => positive(format!("{base}.area"), a.get())?,
            _ => return Err(CliError::config(base, "give exactly one of `diameter` or `area`")),
        };
        let path = ConductionPath {
            material: p.material.clone(),
            cross_section_area: area,
            length: p.length.get(),
            t_hot,
            t_cold: p.t_cold.map_or(cold_stage.temperature, |t| t.get()),
            count: p.count,
            transmission: p.transmission.unwrap_or(1.0),
            residual_resistivity: p.residual_resistivity.map(|r| r.get()),
        };
        path.validate().map_err(|e| match e {
            pinchip_core::thermal::ThermalError::InvalidInput { field, reason } => {
                CliError::config(format!("{base}.{field}"), reason)
            }
            other => CliError::config(base.clone(), other),
        })?;
        arch.paths.push(HeatPath {
            stage: p.stage.clone(),
            path,
        });
    }
    Ok(ThermalSetup {
        stages,
        architecture: arch,
    })
}

/// Names of the thermal paths, in config order, for labelling reports.
pub fn path_names(cfg: &DesignConfig) -> Vec<String> {
    cfg.thermal
        .as_ref()
        .map(|t| t.paths.iter().map(|p| p.name.clone()).collect())
        .unwrap_or_default()
}
