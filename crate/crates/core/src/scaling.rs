//! Dense-wiring feasibility for square qubit arrays.
//!
//! Two access schemes are compared. With lateral access (wire bonds around a
//! flip-chip stack) the wire count grows with the chip perimeter,
//! `N_w = 4·ℓ/p_w`, while the qubit count grows with its area,
//! `N_q = (ℓ/p_q)²`; the curves cross at `ℓ* = 4·p_q²/p_w`. With vertical
//! access both grow with area and the only requirement is `p_w ≤ p_q`.
//!
//! Reports carry both the real-valued counts and their floors.

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::math::{floor, snap_to_integer, sqrt};

/// Square qubit array: pitch and chip side length, both in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitArraySpec {
    pub qubit_pitch: f64,
    pub chip_side: f64,
}

impl QubitArraySpec {
    pub fn new(qubit_pitch: f64, chip_side: f64) -> Result<Self, ScalingError> {
        let spec = Self { qubit_pitch, chip_side };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ScalingError> {
        positive("qubit_pitch", self.qubit_pitch)?;
        positive("chip_side", self.chip_side)?;
        if self.chip_side < self.qubit_pitch {
            return Err(ScalingError::InvalidInput {
                field: "chip_side",
                reason: "chip side is smaller than one qubit pitch",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Access {
    Lateral,
    Vertical,
}

impl fmt::Display for Access {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lateral => "lateral",
            Self::Vertical => "vertical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PitchProvenance {
    Explicit,
    DerivedFromBondGeometry,
}

/// A wire-access scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WiringArchitecture {
    pub access: Access,
    /// Center-to-center wire pitch, meters.
    pub wire_pitch: f64,
    pub provenance: PitchProvenance,
    /// Wires needed per qubit. 1 assumes full demultiplexing of control lines.
    pub wires_per_qubit: u32,
}

impl WiringArchitecture {
    pub fn lateral(wire_pitch: f64) -> Self {
        Self {
            access: Access::Lateral,
            wire_pitch,
            provenance: PitchProvenance::Explicit,
            wires_per_qubit: 1,
        }
    }

    pub fn vertical(wire_pitch: f64) -> Self {
        Self {
            access: Access::Vertical,
            ..Self::lateral(wire_pitch)
        }
    }

    /// Lateral wire-bond access with the pitch derived from bond geometry.
    pub fn from_bonds(geometry: &BondWireGeometry) -> Self {
        Self {
            provenance: PitchProvenance::DerivedFromBondGeometry,
            ..Self::lateral(wire_pitch_from_bonds(geometry))
        }
    }

    pub fn validate(&self) -> Result<(), ScalingError> {
        positive("wire_pitch", self.wire_pitch)?;
        if self.wires_per_qubit == 0 {
            return Err(ScalingError::InvalidInput {
                field: "wires_per_qubit",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }
}

/// Bond wires forming one microwave line (e.g. ground-signal-ground).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BondWireGeometry {
    pub wire_diameter: f64,
    /// Edge-to-edge spacing between neighbouring wires.
    pub wire_gap: f64,
    pub wires_per_line: u32,
    /// Whether adjacent lines share their outer ground wires.
    pub grounds_shared: bool,
}

impl BondWireGeometry {
    pub fn validate(&self) -> Result<(), ScalingError> {
        positive("wire_diameter", self.wire_diameter)?;
        if !(self.wire_gap >= 0.0 && self.wire_gap.is_finite()) {
            return Err(ScalingError::InvalidInput {
                field: "wire_gap",
                reason: "must be finite and non-negative",
            });
        }
        if self.wires_per_line == 0 {
            return Err(ScalingError::InvalidInput {
                field: "wires_per_line",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitingFactor {
    QubitSize,
    WireCount,
}

impl fmt::Display for LimitingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::QubitSize => "qubit_size",
            Self::WireCount => "wire_count",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub access: Access,
    /// `floor(qubits_exact)`.
    pub qubits: u64,
    /// `floor(wires_exact)`.
    pub wires: u64,
    /// `(ℓ/p_q)²`.
    pub qubits_exact: f64,
    /// `4·ℓ/p_w` (lateral) or `(ℓ/p_w)²` (vertical).
    pub wires_exact: f64,
    /// Whole qubits that fit along one chip edge, `floor(ℓ/p_q)`.
    pub qubits_per_side: u64,
    pub limiting_factor: LimitingFactor,
    /// Lateral access only: chip side at which qubit and wire counts meet.
    pub crossover_length: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingError {
    InvalidInput { field: &'static str, reason: &'static str },
    WrongAccess { expected: Access, found: Access },
    PitchConditionViolated { wire_pitch: f64, qubit_pitch: f64 },
}

impl fmt::Display for ScalingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidInput { field, reason } => write!(f, "{field}: {reason}"),
            Self::WrongAccess { expected, found } => {
                write!(f, "expected {expected} access, got {found}")
            }
            Self::PitchConditionViolated {
                wire_pitch,
                qubit_pitch,
            } => write!(f, "wire pitch {wire_pitch} m exceeds qubit pitch {qubit_pitch} m"),
        }
    }
}

impl core::error::Error for ScalingError {}

fn positive(field: &'static str, value: f64) -> Result<(), ScalingError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ScalingError::InvalidInput {
            field,
            reason: "must be positive and finite",
        })
    }
}

/// Repeat distance of one bonded microwave line.
///
/// Each wire occupies `d + gap`. Shared grounds remove one wire per line.
pub fn wire_pitch_from_bonds(geometry: &BondWireGeometry) -> f64 {
    let cell = geometry.wire_diameter + geometry.wire_gap;
    let wires = if geometry.grounds_shared && geometry.wires_per_line > 1 {
        geometry.wires_per_line - 1
    } else {
        geometry.wires_per_line
    };
    f64::from(wires) * cell
}

/// Wires no wider than qubits: `p_w / p_q ≤ 1`.
pub fn check_pitch_condition(wire_pitch: f64, qubit_pitch: f64) -> bool {
    wire_pitch / qubit_pitch <= 1.0
}

/// Chip side at which lateral wire count equals qubit count, `4·p_q²/p_w`.
pub fn lateral_crossover_length(qubit_pitch: f64, wire_pitch: f64) -> f64 {
    4.0 * qubit_pitch * qubit_pitch / wire_pitch
}

/// Qubit pitch at which a lateral-access chip of side `chip_side` has exactly
/// as many qubits as wires: `ℓ / sqrt(4·ℓ/p_w)`.
pub fn required_pitch_for_full_chip(chip_side: f64, wire_pitch: f64) -> f64 {
    chip_side / sqrt(4.0 * chip_side / wire_pitch)
}

/// Error-corrected qubits supported by `physical` qubits at the given overhead.
pub fn logical_qubit_estimate(physical: u64, physical_per_logical: u64) -> Result<u64, ScalingError> {
    if physical_per_logical == 0 {
        return Err(ScalingError::InvalidInput {
            field: "physical_per_logical",
            reason: "must be at least 1",
        });
    }
    Ok(physical / physical_per_logical)
}

fn count(exact: f64) -> u64 {
    // Counts here are far below 2^53, so the cast is exact.
    floor(exact) as u64
}

fn qubit_counts(spec: &QubitArraySpec) -> (f64, u64) {
    let per_side = snap_to_integer(spec.chip_side / spec.qubit_pitch);
    (snap_to_integer(per_side * per_side), count(per_side))
}

pub fn lateral_scaling_report(spec: &QubitArraySpec, arch: &WiringArchitecture) -> Result<ScalingReport, ScalingError> {
    if arch.access != Access::Lateral {
        return Err(ScalingError::WrongAccess {
            expected: Access::Lateral,
            found: arch.access,
        });
    }
    spec.validate()?;
    arch.validate()?;
    let (qubits_exact, qubits_per_side) = qubit_counts(spec);
    let wires_exact = snap_to_integer(4.0 * spec.chip_side / arch.wire_pitch);
    let demand = qubits_exact * f64::from(arch.wires_per_qubit);
    let limiting_factor = if demand > wires_exact {
        LimitingFactor::WireCount
    } else {
        LimitingFactor::QubitSize
    };
    let crossover = lateral_crossover_length(spec.qubit_pitch, arch.wire_pitch) / f64::from(arch.wires_per_qubit);
    Ok(ScalingReport {
        access: Access::Lateral,
        qubits: count(qubits_exact),
        wires: count(wires_exact),
        qubits_exact,
        wires_exact,
        qubits_per_side,
        limiting_factor,
        crossover_length: Some(crossover),
    })
}

/// Vertical access. Requires the pitch condition (scaled by
/// `sqrt(wires_per_qubit)` when more than one wire serves each qubit), which
/// makes the qubit size the only limit.
pub fn vertical_scaling_report(
    spec: &QubitArraySpec,
    arch: &WiringArchitecture,
) -> Result<ScalingReport, ScalingError> {
    if arch.access != Access::Vertical {
        return Err(ScalingError::WrongAccess {
            expected: Access::Vertical,
            found: arch.access,
        });
    }
    spec.validate()?;
    arch.validate()?;
    let effective_pitch = arch.wire_pitch * sqrt(f64::from(arch.wires_per_qubit));
    if !check_pitch_condition(effective_pitch, spec.qubit_pitch) {
        return Err(ScalingError::PitchConditionViolated {
            wire_pitch: arch.wire_pitch,
            qubit_pitch: spec.qubit_pitch,
        });
    }
    let (qubits_exact, qubits_per_side) = qubit_counts(spec);
    let wires_per_side = snap_to_integer(spec.chip_side / arch.wire_pitch);
    let wires_exact = snap_to_integer(wires_per_side * wires_per_side);
    Ok(ScalingReport {
        access: Access::Vertical,
        qubits: count(qubits_exact),
        wires: count(wires_exact),
        qubits_exact,
        wires_exact,
        qubits_per_side,
        limiting_factor: LimitingFactor::QubitSize,
        crossover_length: None,
    })
}

/// Dispatches on `arch.access`.
pub fn scaling_report(spec: &QubitArraySpec, arch: &WiringArchitecture) -> Result<ScalingReport, ScalingError> {
    match arch.access {
        Access::Lateral => lateral_scaling_report(spec, arch),
        Access::Vertical => vertical_scaling_report(spec, arch),
    }
}
