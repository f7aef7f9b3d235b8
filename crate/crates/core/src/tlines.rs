//! Characteristic impedance of the line sections in the signal path.
//!
//! * Coax: the pin inside its interposer hole.
//! * CPW: signal traces on the ribbon cable, optionally under a ground cover
//!   (the shielded, stripline-like configuration).
//! * Edge-coupled CPW: even/odd mode impedances of two neighbouring traces,
//!   used as a coarse crosstalk proxy.
//!
//! The planar lines use quasi-static conformal mapping on an infinitely thick
//! substrate. Conductor thickness and kinetic inductance are ignored.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::consts::{COAX_PREFACTOR, SPEED_OF_LIGHT};
use crate::materials::{MaterialCatalog, MaterialError};
use crate::math::{agm, cosh, exp, ln, sqrt};

/// Prefactor of the planar-line impedance formulas (`η₀/4` with `η₀ = 120π`).
pub const CPW_PREFACTOR: f64 = 30.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub enum LineError {
    DegenerateGeometry(&'static str),
    InvalidInput { field: &'static str, reason: &'static str },
    Material(MaterialError),
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DegenerateGeometry(what) => write!(f, "degenerate geometry: {what}"),
            Self::InvalidInput { field, reason } => write!(f, "{field}: {reason}"),
            Self::Material(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for LineError {}

impl From<MaterialError> for LineError {
    fn from(e: MaterialError) -> Self {
        Self::Material(e)
    }
}

fn positive(field: &'static str, value: f64) -> Result<(), LineError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(LineError::InvalidInput {
            field,
            reason: "must be positive and finite",
        })
    }
}

fn permittivity(field: &'static str, eps: f64) -> Result<(), LineError> {
    if eps >= 1.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(LineError::InvalidInput {
            field,
            reason: "relative permittivity must be >= 1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coating {
    pub material: String,
    /// Meters.
    pub thickness: f64,
}

/// Pin cross-section: a core wire with concentric coatings, innermost first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinStack {
    pub core_diameter: f64,
    #[serde(default)]
    pub coatings: Vec<Coating>,
}

impl PinStack {
    pub fn validate(&self) -> Result<(), LineError> {
        positive("core_diameter", self.core_diameter)?;
        for c in &self.coatings {
            positive("coatings.thickness", c.thickness)?;
        }
        Ok(())
    }

    /// `core + 2·Σ thickness`.
    pub fn outer_diameter(&self) -> f64 {
        self.core_diameter + 2.0 * self.coatings.iter().map(|c| c.thickness).sum::<f64>()
    }

    /// Every coating material exists in `catalog`.
    pub fn check_materials(&self, catalog: &MaterialCatalog) -> Result<(), MaterialError> {
        self.coatings
            .iter()
            .try_for_each(|c| catalog.lookup(&c.material).map(|_| ()))
    }
}

pub fn pin_outer_diameter(pin: &PinStack) -> f64 {
    pin.outer_diameter()
}

/// Coaxial line: inner and outer conductor diameters (meters) and the
/// relative permittivity of the filling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoaxSpec {
    pub inner_diameter: f64,
    pub outer_diameter: f64,
    pub relative_permittivity: f64,
}

impl CoaxSpec {
    /// Coax filled with a dielectric from the catalog.
    pub fn with_dielectric(
        inner_diameter: f64,
        outer_diameter: f64,
        dielectric: &str,
        catalog: &MaterialCatalog,
    ) -> Result<Self, LineError> {
        let eps = catalog.lookup(dielectric)?.permittivity()?;
        Ok(Self {
            inner_diameter,
            outer_diameter,
            relative_permittivity: eps,
        })
    }

    pub fn validate(&self) -> Result<(), LineError> {
        positive("inner_diameter", self.inner_diameter)?;
        positive("outer_diameter", self.outer_diameter)?;
        permittivity("relative_permittivity", self.relative_permittivity)?;
        if self.outer_diameter <= self.inner_diameter {
            return Err(LineError::DegenerateGeometry(
                "coax outer diameter must exceed inner diameter",
            ));
        }
        Ok(())
    }
}

/// `Z = (η₀/2π)/sqrt(ε_r) · ln(D/d)`.
pub fn coax_impedance(spec: &CoaxSpec) -> Result<f64, LineError> {
    spec.validate()?;
    Ok(COAX_PREFACTOR / sqrt(spec.relative_permittivity) * ln(spec.outer_diameter / spec.inner_diameter))
}

/// Outer diameter giving impedance `impedance` for inner diameter `inner`.
pub fn coax_outer_for_impedance(
    inner_diameter: f64,
    impedance: f64,
    relative_permittivity: f64,
) -> Result<f64, LineError> {
    positive("inner_diameter", inner_diameter)?;
    permittivity("relative_permittivity", relative_permittivity)?;
    if !(impedance >= 0.0 && impedance.is_finite()) {
        return Err(LineError::InvalidInput {
            field: "impedance",
            reason: "must be finite and non-negative",
        });
    }
    Ok(inner_diameter * exp(impedance * sqrt(relative_permittivity) / COAX_PREFACTOR))
}

/// Volume-weighted permittivity of a dielectric mix, `Σ vᵢ·εᵢ / Σ vᵢ`.
pub fn mixed_permittivity(components: &[(f64, f64)]) -> Result<f64, LineError> {
    let mut volume = 0.0;
    let mut weighted = 0.0;
    for &(eps, v) in components {
        permittivity("relative_permittivity", eps)?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(LineError::InvalidInput {
                field: "volume",
                reason: "must be finite and non-negative",
            });
        }
        volume += v;
        weighted += v * eps;
    }
    if volume <= 0.0 {
        return Err(LineError::InvalidInput {
            field: "volume",
            reason: "total volume must be positive",
        });
    }
    Ok(weighted / volume)
}

/// Coplanar waveguide on a substrate of permittivity `relative_permittivity`.
/// With `cover_height` set, a ground plane sits that far above the trace on
/// the air side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwSpec {
    pub trace_width: f64,
    pub gap: f64,
    pub relative_permittivity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_height: Option<f64>,
}

impl CpwSpec {
    pub fn covered(&self) -> bool {
        self.cover_height.is_some()
    }

    pub fn validate(&self) -> Result<(), LineError> {
        positive("trace_width", self.trace_width)?;
        positive("gap", self.gap)?;
        permittivity("relative_permittivity", self.relative_permittivity)?;
        if let Some(h) = self.cover_height {
            positive("cover_height", h)?;
        }
        Ok(())
    }

    fn as_half_structure(&self) -> CoupledCpwSpec {
        // A single trace is the even mode of a split trace with zero separation.
        CoupledCpwSpec {
            trace_width: self.trace_width / 2.0,
            gap: self.gap,
            separation: 0.0,
            relative_permittivity: self.relative_permittivity,
            cover_height: self.cover_height,
        }
    }
}

pub fn cpw_impedance(spec: &CpwSpec) -> Result<f64, LineError> {
    spec.validate()?;
    let half = spec.as_half_structure().mode(Mode::Even);
    Ok(half.impedance() / 2.0)
}

/// `ε_eff = C / C_vacuum`; `(1 + ε_r)/2` when uncovered.
pub fn cpw_effective_permittivity(spec: &CpwSpec) -> Result<f64, LineError> {
    spec.validate()?;
    Ok(spec.as_half_structure().mode(Mode::Even).effective_permittivity())
}

/// Two identical CPW traces side by side. `separation` is the edge-to-edge
/// distance between the traces; `gap` separates each trace from its outer
/// ground plane. No ground is modelled between the traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledCpwSpec {
    pub trace_width: f64,
    pub gap: f64,
    pub separation: f64,
    pub relative_permittivity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_height: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeImpedances {
    pub even: f64,
    pub odd: f64,
    pub even_effective_permittivity: f64,
    pub odd_effective_permittivity: f64,
}

impl ModeImpedances {
    /// Voltage coupling coefficient `(Z_e − Z_o)/(Z_e + Z_o)`.
    pub fn coupling_coefficient(&self) -> f64 {
        (self.even - self.odd) / (self.even + self.odd)
    }
}

impl CoupledCpwSpec {
    pub fn validate(&self) -> Result<(), LineError> {
        positive("trace_width", self.trace_width)?;
        positive("gap", self.gap)?;
        positive("separation", self.separation)?;
        permittivity("relative_permittivity", self.relative_permittivity)?;
        if let Some(h) = self.cover_height {
            positive("cover_height", h)?;
        }
        Ok(())
    }

    pub fn mode_impedances(&self) -> Result<ModeImpedances, LineError> {
        self.validate()?;
        let even = self.mode(Mode::Even);
        let odd = self.mode(Mode::Odd);
        Ok(ModeImpedances {
            even: even.impedance(),
            odd: odd.impedance(),
            even_effective_permittivity: even.effective_permittivity(),
            odd_effective_permittivity: odd.effective_permittivity(),
        })
    }

    fn mode(&self, mode: Mode) -> ModeCapacitance {
        let a = self.separation / 2.0;
        let b = a + self.trace_width;
        let c = b + self.gap;
        let air = match self.cover_height {
            Some(h) => covered_ratio(mode, a, b, c, h),
            None => open_ratio(mode, a, b, c),
        };
        ModeCapacitance {
            air,
            substrate: open_ratio(mode, a, b, c),
            relative_permittivity: self.relative_permittivity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Magnetic wall on the symmetry plane.
    Even,
    /// Electric wall on the symmetry plane.
    Odd,
}

/// Normalised capacitances `C/ε` of one half structure in each half-space.
struct ModeCapacitance {
    air: f64,
    substrate: f64,
    relative_permittivity: f64,
}

impl ModeCapacitance {
    fn loaded(&self) -> f64 {
        self.air + self.relative_permittivity * self.substrate
    }

    fn vacuum(&self) -> f64 {
        self.air + self.substrate
    }

    fn effective_permittivity(&self) -> f64 {
        self.loaded() / self.vacuum()
    }

    /// `Z = 1/(c·sqrt(C·C_vac))`, per half structure.
    fn impedance(&self) -> f64 {
        4.0 * CPW_PREFACTOR / sqrt(self.loaded() * self.vacuum())
    }
}

// Each half-space of a half structure maps to a conformal quadrilateral with
// vertices p0 < A < B < C on the real axis: ground up to p0, a free boundary
// (slot or magnetic wall) to A, the trace from A to B, a slot from B to C and
// ground again beyond C. Its capacitance is K(k)/K(k') with
//   k²  = (B−A)(C−p0) / ((B−p0)(C−A))
//   k'² = (C−B)(A−p0) / ((B−p0)(C−A))
// Differences are passed in directly to keep precision when points crowd.
fn quadrilateral_ratio(ba: f64, cp: f64, bp: f64, ca: f64, cb: f64, ap: f64) -> f64 {
    let k = sqrt((ba * cp) / (bp * ca)).min(1.0);
    let kp = sqrt((cb * ap) / (bp * ca)).min(1.0);
    agm(1.0, k) / agm(1.0, kp)
}

/// Open half-space, mapped by `w = z²` (first quadrant onto a half plane).
fn open_ratio(mode: Mode, a: f64, b: f64, c: f64) -> f64 {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    match mode {
        // Ground on the symmetry wall: p0 = 0.
        Mode::Odd => quadrilateral_ratio(b2 - a2, c2, b2, c2 - a2, c2 - b2, a2),
        // p0 → −∞: k² = (B−A)/(C−A).
        Mode::Even => {
            let k = sqrt((b2 - a2) / (c2 - a2));
            let kp = sqrt((c2 - b2) / (c2 - a2));
            agm(1.0, k) / agm(1.0, kp)
        }
    }
}

/// Half-space closed by a ground cover at height `h`, mapped by
/// `w = cosh(πz/h)` (half strip onto a half plane). The wall maps to
/// `[−1, 1]`, the cover to `(−∞, −1]`.
fn covered_ratio(mode: Mode, a: f64, b: f64, c: f64, h: f64) -> f64 {
    let (ua, ub, uc) = (PI * a / h, PI * b / h, PI * c / h);
    // cosh x − cosh y without cancellation.
    let diff = |x: f64, y: f64| 2.0 * sinh(0.5 * (x + y)) * sinh(0.5 * (x - y));
    let to_wall = |x: f64| match mode {
        // p0 = cosh(0) = 1
        Mode::Odd => {
            let s = sinh(0.5 * x);
            2.0 * s * s
        }
        // p0 = −1
        Mode::Even => {
            let ch = cosh(0.5 * x);
            2.0 * ch * ch
        }
    };
    quadrilateral_ratio(
        diff(ub, ua),
        to_wall(uc),
        to_wall(ub),
        diff(uc, ua),
        diff(uc, ub),
        to_wall(ua),
    )
}

fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

/// Phase velocity and wavelength at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Propagation {
    pub phase_velocity: f64,
    /// Absent at DC.
    pub wavelength: Option<f64>,
}

/// Anything with a characteristic impedance and an effective permittivity.
pub trait LineGeometry {
    fn characteristic_impedance(&self) -> Result<f64, LineError>;
    fn effective_permittivity(&self) -> Result<f64, LineError>;
}

impl LineGeometry for CoaxSpec {
    fn characteristic_impedance(&self) -> Result<f64, LineError> {
        coax_impedance(self)
    }

    fn effective_permittivity(&self) -> Result<f64, LineError> {
        self.validate()?;
        Ok(self.relative_permittivity)
    }
}

impl LineGeometry for CpwSpec {
    fn characteristic_impedance(&self) -> Result<f64, LineError> {
        cpw_impedance(self)
    }

    fn effective_permittivity(&self) -> Result<f64, LineError> {
        cpw_effective_permittivity(self)
    }
}

/// `v = c/sqrt(ε_eff)`, `λ = v/f`.
pub fn propagation_for(effective_permittivity: f64, frequency: f64) -> Result<Propagation, LineError> {
    permittivity("effective_permittivity", effective_permittivity)?;
    if !(frequency >= 0.0 && frequency.is_finite()) {
        return Err(LineError::InvalidInput {
            field: "frequency",
            reason: "must be finite and non-negative",
        });
    }
    let v = SPEED_OF_LIGHT / sqrt(effective_permittivity);
    Ok(Propagation {
        phase_velocity: v,
        wavelength: (frequency > 0.0).then(|| v / frequency),
    })
}

pub fn line_propagation<L: LineGeometry + ?Sized>(line: &L, frequency: f64) -> Result<Propagation, LineError> {
    propagation_for(line.effective_permittivity()?, frequency)
}

/// Closed-form check used in tests: covered CPW air-side modulus
/// `tanh(πw/4h)/tanh(π(w+2s)/4h)`.
#[cfg(test)]
pub(crate) fn covered_air_modulus(w: f64, s: f64, h: f64) -> f64 {
    libm::tanh(PI * w / (4.0 * h)) / libm::tanh(PI * (w + 2.0 * s) / (4.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ellip_k_ratio;

    const UM: f64 = 1e-6;

    fn coax(d: f64, outer: f64) -> CoaxSpec {
        CoaxSpec {
            inner_diameter: d * UM,
            outer_diameter: outer * UM,
            relative_permittivity: 3.0,
        }
    }

    #[test]
    fn pin_stack_diameters() {
        let stack = |core: f64| PinStack {
            core_diameter: core * UM,
            coatings: alloc::vec![
                Coating {
                    material: "TiN".into(),
                    thickness: 1.0 * UM
                },
                Coating {
                    material: "In".into(),
                    thickness: 10.0 * UM
                },
            ],
        };
        assert!((stack(78.0).outer_diameter() - 100.0 * UM).abs() < 1e-18);
        assert!((stack(178.0).outer_diameter() - 200.0 * UM).abs() < 1e-18);
        let bare = PinStack {
            core_diameter: 100.0 * UM,
            coatings: Vec::new(),
        };
        assert_eq!(bare.outer_diameter(), 100.0 * UM);
    }

    #[test]
    fn coax_reference_values() {
        let z1 = coax_impedance(&coax(100.0, 200.0)).unwrap();
        let z2 = coax_impedance(&coax(200.0, 300.0)).unwrap();
        assert!((z1 - 23.99).abs() < 0.01, "{z1}");
        assert!((z2 - 14.03).abs() < 0.01, "{z2}");
    }

    #[test]
    fn coax_degenerate() {
        assert!(matches!(
            coax_impedance(&coax(200.0, 200.0)),
            Err(LineError::DegenerateGeometry(_))
        ));
        let z = coax_impedance(&coax(200.0, 200.0 * (1.0 + 1e-12))).unwrap();
        assert!(z.abs() < 1e-9);
    }

    #[test]
    fn coax_inverse() {
        let d50 = coax_outer_for_impedance(100.0 * UM, 50.0, 3.0).unwrap();
        let d25 = coax_outer_for_impedance(100.0 * UM, 25.0, 3.0).unwrap();
        assert!((d50 / UM - 423.98).abs() < 0.01, "{}", d50 / UM);
        assert!((d25 / UM - 205.91).abs() < 0.01, "{}", d25 / UM);
        assert_eq!(coax_outer_for_impedance(100.0 * UM, 0.0, 3.0).unwrap(), 100.0 * UM);
        assert!(coax_outer_for_impedance(100.0 * UM, -1.0, 3.0).is_err());
    }

    #[test]
    fn mixing_rule() {
        let eps = mixed_permittivity(&[(3.0, 0.8), (2.1, 0.2)]).unwrap();
        assert!((eps - 2.82).abs() < 1e-12);
        assert!(mixed_permittivity(&[]).is_err());
    }

    #[test]
    fn open_cpw_matches_textbook_formula() {
        let spec = CpwSpec {
            trace_width: 10.0 * UM,
            gap: 6.0 * UM,
            relative_permittivity: 11.45,
            cover_height: None,
        };
        let k = 10.0 / 22.0;
        let eps_eff = (1.0 + 11.45) / 2.0;
        let expected = CPW_PREFACTOR / sqrt(eps_eff) / ellip_k_ratio(k);
        let z = cpw_impedance(&spec).unwrap();
        assert!((z - expected).abs() < 1e-10 * expected, "{z} vs {expected}");
        assert!((cpw_effective_permittivity(&spec).unwrap() - eps_eff).abs() < 1e-12);
    }

    #[test]
    fn vacuum_substrate_has_unit_permittivity() {
        let spec = CpwSpec {
            trace_width: 10.0 * UM,
            gap: 6.0 * UM,
            relative_permittivity: 1.0,
            cover_height: Some(30.0 * UM),
        };
        assert!((cpw_effective_permittivity(&spec).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covered_cpw_matches_tanh_modulus() {
        let (w, s, h, er) = (10.0 * UM, 6.0 * UM, 20.0 * UM, 3.4);
        let spec = CpwSpec {
            trace_width: w,
            gap: s,
            relative_permittivity: er,
            cover_height: Some(h),
        };
        let r_air = ellip_k_ratio(covered_air_modulus(w, s, h));
        let r_sub = ellip_k_ratio(w / (w + 2.0 * s));
        let eps_eff = (r_air + er * r_sub) / (r_air + r_sub);
        let expected = 60.0 * PI / sqrt(eps_eff) / (r_air + r_sub);
        let z = cpw_impedance(&spec).unwrap();
        assert!((z - expected).abs() < 1e-9 * expected, "{z} vs {expected}");
        assert!((cpw_effective_permittivity(&spec).unwrap() - eps_eff).abs() < 1e-12);
        // The cover lowers the impedance.
        let open = cpw_impedance(&CpwSpec {
            cover_height: None,
            ..spec
        })
        .unwrap();
        assert!(z < open);
    }

    #[test]
    fn distant_cover_recovers_open_line() {
        let mut spec = CpwSpec {
            trace_width: 10.0 * UM,
            gap: 6.0 * UM,
            relative_permittivity: 11.45,
            cover_height: Some(1.0),
        };
        let covered = cpw_impedance(&spec).unwrap();
        spec.cover_height = None;
        let open = cpw_impedance(&spec).unwrap();
        assert!((covered - open).abs() < 1e-6 * open);
    }

    #[test]
    fn coupled_modes_bracket_single_line() {
        let coupled = CoupledCpwSpec {
            trace_width: 10.0 * UM,
            gap: 6.0 * UM,
            separation: 10.0 * UM,
            relative_permittivity: 11.45,
            cover_height: None,
        };
        let m = coupled.mode_impedances().unwrap();
        let single = cpw_impedance(&CpwSpec {
            trace_width: 10.0 * UM,
            gap: 6.0 * UM,
            relative_permittivity: 11.45,
            cover_height: None,
        })
        .unwrap();
        assert!(m.odd < single && single < m.even, "{m:?} {single}");
        let far = CoupledCpwSpec {
            separation: 10.0,
            ..coupled
        }
        .mode_impedances()
        .unwrap();
        assert!(far.coupling_coefficient() < 1e-6);
        assert!(m.coupling_coefficient() > far.coupling_coefficient());
    }

    #[test]
    fn propagation_examples() {
        let p = propagation_for(3.0, 10e9).unwrap();
        assert!((p.wavelength.unwrap() - 17.3085e-3).abs() < 1e-6);
        assert_eq!(propagation_for(1.0, 5e9).unwrap().phase_velocity, SPEED_OF_LIGHT);
        let dc = propagation_for(3.0, 0.0).unwrap();
        assert!(dc.wavelength.is_none());
        assert!(dc.phase_velocity > 0.0);
        assert!(propagation_for(3.0, -1.0).is_err());
        let line = coax(100.0, 200.0);
        assert_eq!(line_propagation(&line, 10e9).unwrap(), p);
    }
}
