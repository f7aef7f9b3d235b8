//! Frequency-domain analysis of the signal path with ABCD matrices.
//!
//! Elements are cascaded by matrix product at each frequency and converted to
//! S-parameters against real (possibly unequal) port impedances. The default
//! path runs from the ribbon-cable feed through an optional taper into the
//! coax pin and the bond contact.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::consts::{GIGAHERTZ, SPEED_OF_LIGHT};
use crate::math::{cos, log10, powf, sin, sqrt};
use crate::tlines::{CoupledCpwSpec, LineError};

pub type C64 = Complex64;

/// Upper end of the analysed band.
pub const MAX_FREQUENCY: f64 = 10.0 * GIGAHERTZ;

pub const DEFAULT_SWEEP_POINTS: usize = 1001;

pub const DEFAULT_TAPER_SEGMENTS: u32 = 16;

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);
const J: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub enum RfError {
    EmptyCascade,
    InvalidFrequencies(&'static str),
    BandOutOfRange { low: f64, high: f64 },
    InvalidElement { label: String, reason: &'static str },
    InvalidPortImpedance,
    Line(LineError),
}

impl fmt::Display for RfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyCascade => f.write_str("cascade needs at least one element"),
            Self::InvalidFrequencies(why) => write!(f, "invalid frequency grid: {why}"),
            Self::BandOutOfRange { low, high } => {
                write!(f, "band {low} Hz to {high} Hz is outside 0 Hz to {MAX_FREQUENCY} Hz")
            }
            Self::InvalidElement { label, reason } => write!(f, "element `{label}`: {reason}"),
            Self::InvalidPortImpedance => f.write_str("port impedances must be positive"),
            Self::Line(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for RfError {}

impl From<LineError> for RfError {
    fn from(e: LineError) -> Self {
        Self::Line(e)
    }
}

/// 2×2 complex transfer matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Abcd {
    pub const IDENTITY: Self = Self {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { a, b, c, d }
    }

    pub fn determinant(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// Largest element-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for Abcd {
    type Output = Self;

    /// `self` followed by `rhs`.
    fn mul(self, rhs: Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementKind {
    /// Lossless TEM section.
    UniformLine {
        impedance: f64,
        effective_permittivity: f64,
        length: f64,
    },
    /// `Z = R + jωL` in series.
    SeriesImpedance { resistance: f64, inductance: f64 },
    /// `Y = jωC` to ground.
    ShuntAdmittance { capacitance: f64 },
    /// Matched, frequency-flat attenuator for `reference_impedance`.
    IdealAttenuator {
        attenuation_db: f64,
        reference_impedance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkElement {
    pub label: String,
    #[serde(flatten)]
    pub kind: ElementKind,
}

impl NetworkElement {
    pub fn new(label: impl Into<String>, kind: ElementKind) -> Self {
        Self {
            label: label.into(),
            kind,
        }
    }

    pub fn line(label: impl Into<String>, impedance: f64, effective_permittivity: f64, length: f64) -> Self {
        Self::new(
            label,
            ElementKind::UniformLine {
                impedance,
                effective_permittivity,
                length,
            },
        )
    }

    pub fn validate(&self) -> Result<(), RfError> {
        let bad = |reason| RfError::InvalidElement {
            label: self.label.clone(),
            reason,
        };
        let finite_nonneg = |x: f64| x >= 0.0 && x.is_finite();
        match self.kind {
            ElementKind::UniformLine {
                impedance,
                effective_permittivity,
                length,
            } => {
                if !(impedance > 0.0 && impedance.is_finite()) {
                    return Err(bad("line impedance must be positive"));
                }
                if !(effective_permittivity >= 1.0 && effective_permittivity.is_finite()) {
                    return Err(bad("effective permittivity must be >= 1"));
                }
                if !finite_nonneg(length) {
                    return Err(bad("length must be non-negative"));
                }
            }
            ElementKind::SeriesImpedance { resistance, inductance } => {
                if !(finite_nonneg(resistance) && finite_nonneg(inductance)) {
                    return Err(bad("series R and L must be non-negative"));
                }
            }
            ElementKind::ShuntAdmittance { capacitance } => {
                if !finite_nonneg(capacitance) {
                    return Err(bad("shunt capacitance must be non-negative"));
                }
            }
            ElementKind::IdealAttenuator {
                attenuation_db,
                reference_impedance,
            } => {
                if !finite_nonneg(attenuation_db) {
                    return Err(bad("attenuation must be >= 0 dB"));
                }
                if !(reference_impedance > 0.0 && reference_impedance.is_finite()) {
                    return Err(bad("attenuator reference impedance must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Whether the element dissipates no power.
    pub fn is_lossless(&self) -> bool {
        match self.kind {
            ElementKind::UniformLine { .. } | ElementKind::ShuntAdmittance { .. } => true,
            ElementKind::SeriesImpedance { resistance, .. } => resistance == 0.0,
            ElementKind::IdealAttenuator { attenuation_db, .. } => attenuation_db == 0.0,
        }
    }
}

/// Propagation constant `β = 2πf·sqrt(ε_eff)/c`.
pub fn phase_constant(frequency: f64, effective_permittivity: f64) -> f64 {
    2.0 * PI * frequency * sqrt(effective_permittivity) / SPEED_OF_LIGHT
}

pub fn element_abcd(element: &NetworkElement, frequency: f64) -> Abcd {
    let omega = 2.0 * PI * frequency;
    match element.kind {
        ElementKind::UniformLine {
            impedance,
            effective_permittivity,
            length,
        } => {
            let theta = phase_constant(frequency, effective_permittivity) * length;
            let (s, c) = (sin(theta), cos(theta));
            Abcd::new(
                C64::new(c, 0.0),
                J * (impedance * s),
                J * (s / impedance),
                C64::new(c, 0.0),
            )
        }
        ElementKind::SeriesImpedance { resistance, inductance } => {
            Abcd::new(ONE, C64::new(resistance, omega * inductance), ZERO, ONE)
        }
        ElementKind::ShuntAdmittance { capacitance } => Abcd::new(ONE, ZERO, C64::new(0.0, omega * capacitance), ONE),
        ElementKind::IdealAttenuator {
            attenuation_db,
            reference_impedance: z0,
        } => {
            let t = powf(10.0, -attenuation_db / 20.0);
            let (sum, diff) = ((1.0 + t * t) / (2.0 * t), (1.0 - t * t) / (2.0 * t));
            Abcd::new(
                C64::new(sum, 0.0),
                C64::new(z0 * diff, 0.0),
                C64::new(diff / z0, 0.0),
                C64::new(sum, 0.0),
            )
        }
    }
}

/// Frequency-indexed ABCD matrices plus the port reference impedances.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortNetwork {
    pub frequencies: Vec<f64>,
    pub abcd: Vec<Abcd>,
    pub source_impedance: f64,
    pub load_impedance: f64,
}

pub const DEFAULT_REFERENCE_IMPEDANCE: f64 = 50.0;

impl TwoPortNetwork {
    pub fn with_ports(mut self, source_impedance: f64, load_impedance: f64) -> Self {
        self.source_impedance = source_impedance;
        self.load_impedance = load_impedance;
        self
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

fn check_frequencies(frequencies: &[f64]) -> Result<(), RfError> {
    if frequencies.is_empty() {
        return Err(RfError::InvalidFrequencies("no frequencies"));
    }
    if frequencies.iter().any(|f| !(*f >= 0.0 && f.is_finite())) {
        return Err(RfError::InvalidFrequencies("frequencies must be finite and >= 0"));
    }
    if frequencies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(RfError::InvalidFrequencies("frequencies must be strictly increasing"));
    }
    Ok(())
}

/// Multiplies the element matrices in order at every frequency. Ports default
/// to [`DEFAULT_REFERENCE_IMPEDANCE`]; see [`TwoPortNetwork::with_ports`].
pub fn cascade(elements: &[NetworkElement], frequencies: &[f64]) -> Result<TwoPortNetwork, RfError> {
    if elements.is_empty() {
        return Err(RfError::EmptyCascade);
    }
    check_frequencies(frequencies)?;
    elements.iter().try_for_each(NetworkElement::validate)?;
    let abcd = frequencies
        .iter()
        .map(|&f| elements.iter().fold(Abcd::IDENTITY, |acc, e| acc * element_abcd(e, f)))
        .collect();
    Ok(TwoPortNetwork {
        frequencies: frequencies.to_vec(),
        abcd,
        source_impedance: DEFAULT_REFERENCE_IMPEDANCE,
        load_impedance: DEFAULT_REFERENCE_IMPEDANCE,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParameters {
    pub s11: C64,
    pub s12: C64,
    pub s21: C64,
    pub s22: C64,
}

impl SParameters {
    /// Power-wave S-parameters for real port impedances `z1` (port 1) and
    /// `z2` (port 2).
    pub fn from_abcd(m: &Abcd, z1: f64, z2: f64) -> Self {
        let (z1c, z2c) = (C64::new(z1, 0.0), C64::new(z2, 0.0));
        let den = m.a * z2c + m.b + m.c * z1c * z2c + m.d * z1c;
        let root = 2.0 * sqrt(z1 * z2);
        Self {
            s11: (m.a * z2c + m.b - m.c * z1c * z2c - m.d * z1c) / den,
            s12: m.determinant() * root / den,
            s21: C64::new(root, 0.0) / den,
            s22: (-m.a * z2c + m.b - m.c * z1c * z2c + m.d * z1c) / den,
        }
    }
}

/// Magnitude in dB, `20·log10|z|`.
pub fn db(z: C64) -> f64 {
    20.0 * log10(z.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    pub frequencies: Vec<f64>,
    pub s: Vec<SParameters>,
    pub source_impedance: f64,
    pub load_impedance: f64,
}

impl FrequencyResponse {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn s11_db(&self) -> impl Iterator<Item = f64> + '_ {
        self.s.iter().map(|s| db(s.s11))
    }

    pub fn s21_db(&self) -> impl Iterator<Item = f64> + '_ {
        self.s.iter().map(|s| db(s.s21))
    }

    /// Largest `|S11|` and the frequency where it occurs (first on ties).
    pub fn worst_reflection(&self) -> Option<(f64, f64)> {
        let mut worst: Option<(f64, f64)> = None;
        for (f, s) in self.frequencies.iter().zip(&self.s) {
            let mag = s.s11.norm();
            if worst.is_none_or(|(w, _)| mag > w) {
                worst = Some((mag, *f));
            }
        }
        worst
    }

    /// Frequency of the first interior local minimum of `|S11|` above DC.
    pub fn first_reflection_minimum(&self) -> Option<f64> {
        let mags: Vec<f64> = self.s.iter().map(|s| s.s11.norm()).collect();
        (1..mags.len().saturating_sub(1))
            .find(|&i| mags[i] <= mags[i - 1] && mags[i] < mags[i + 1])
            .map(|i| self.frequencies[i])
    }
}

pub fn to_s_parameters(network: &TwoPortNetwork) -> Result<FrequencyResponse, RfError> {
    let (z1, z2) = (network.source_impedance, network.load_impedance);
    if !(z1 > 0.0 && z2 > 0.0 && z1.is_finite() && z2.is_finite()) {
        return Err(RfError::InvalidPortImpedance);
    }
    Ok(FrequencyResponse {
        frequencies: network.frequencies.clone(),
        s: network.abcd.iter().map(|m| SParameters::from_abcd(m, z1, z2)).collect(),
        source_impedance: z1,
        load_impedance: z2,
    })
}

/// `points` frequencies from `low` to `high`, both endpoints included.
pub fn uniform_grid(low: f64, high: f64, points: usize) -> Result<Vec<f64>, RfError> {
    if !(low >= 0.0 && high.is_finite() && low <= high) {
        return Err(RfError::InvalidFrequencies("band must satisfy 0 <= low <= high"));
    }
    match points {
        0 => Err(RfError::InvalidFrequencies("no frequencies")),
        1 if low == high => Ok(alloc::vec![low]),
        1 => Err(RfError::InvalidFrequencies("one point needs low == high")),
        _ if low == high => Err(RfError::InvalidFrequencies("zero-width band needs one point")),
        _ => {
            let last = (points - 1) as f64;
            Ok((0..points)
                .map(|i| {
                    if i + 1 == points {
                        high
                    } else {
                        low + (high - low) * (i as f64) / last
                    }
                })
                .collect())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSection {
    pub impedance: f64,
    pub effective_permittivity: f64,
    pub length: f64,
}

/// Piecewise-uniform exponential impedance taper between the feed and the pin.
/// A zero length disables it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Taper {
    pub segments: u32,
    pub length: f64,
}

impl Default for Taper {
    fn default() -> Self {
        Self {
            segments: DEFAULT_TAPER_SEGMENTS,
            length: 0.0,
        }
    }
}

/// Series contact impedance at the pin-pad bond. Zero below 1 K.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BondContact {
    pub resistance: f64,
    pub inductance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InlineAttenuator {
    pub label: String,
    pub attenuation_db: f64,
}

/// Ribbon feed → taper → coax pin → bond, terminated at both ends in the
/// system impedance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalPath {
    pub system_impedance: f64,
    pub feed: LineSection,
    pub taper: Taper,
    pub pin: LineSection,
    pub bond: BondContact,
    /// Placed on the feed, ahead of the taper.
    #[serde(default)]
    pub attenuators: Vec<InlineAttenuator>,
}

/// Effective permittivity used for the ribbon feed by default: a CPW on
/// polyimide (`ε_r = 3.4`), `(1 + ε_r)/2`.
pub const DEFAULT_FEED_EFFECTIVE_PERMITTIVITY: f64 = 2.2;

/// Default feed length, meters.
pub const DEFAULT_FEED_LENGTH: f64 = 10e-3;

/// Default pin dielectric (STYCAST fill).
pub const DEFAULT_PIN_PERMITTIVITY: f64 = 3.0;

impl SignalPath {
    /// Default path: a feed matched to the system, no taper, a pin section of
    /// the given impedance and length in a `ε_r = 3` fill, and an ideal bond.
    pub fn nominal(pin_length: f64, interposer_impedance: f64, system_impedance: f64) -> Self {
        Self {
            system_impedance,
            feed: LineSection {
                impedance: system_impedance,
                effective_permittivity: DEFAULT_FEED_EFFECTIVE_PERMITTIVITY,
                length: DEFAULT_FEED_LENGTH,
            },
            taper: Taper::default(),
            pin: LineSection {
                impedance: interposer_impedance,
                effective_permittivity: DEFAULT_PIN_PERMITTIVITY,
                length: pin_length,
            },
            bond: BondContact::default(),
            attenuators: Vec::new(),
        }
    }

    pub fn elements(&self) -> Vec<NetworkElement> {
        let mut out = Vec::new();
        out.push(NetworkElement::line(
            "feed",
            self.feed.impedance,
            self.feed.effective_permittivity,
            self.feed.length,
        ));
        for att in &self.attenuators {
            out.push(NetworkElement::new(
                att.label.clone(),
                ElementKind::IdealAttenuator {
                    attenuation_db: att.attenuation_db,
                    reference_impedance: self.feed.impedance,
                },
            ));
        }
        if self.taper.length > 0.0 && self.taper.segments > 0 {
            let n = self.taper.segments;
            let ratio = self.pin.impedance / self.feed.impedance;
            for i in 0..n {
                let x = (f64::from(i) + 0.5) / f64::from(n);
                out.push(NetworkElement::line(
                    alloc::format!("taper[{i}]"),
                    self.feed.impedance * powf(ratio, x),
                    self.feed.effective_permittivity,
                    self.taper.length / f64::from(n),
                ));
            }
        }
        out.push(NetworkElement::line(
            "pin",
            self.pin.impedance,
            self.pin.effective_permittivity,
            self.pin.length,
        ));
        out.push(NetworkElement::new(
            "bond",
            ElementKind::SeriesImpedance {
                resistance: self.bond.resistance,
                inductance: self.bond.inductance,
            },
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MismatchReport {
    pub response: FrequencyResponse,
    pub worst_s11: f64,
    pub worst_s11_db: f64,
    pub worst_frequency: f64,
    pub first_reflection_minimum: Option<f64>,
}

pub fn mismatch_report(path: &SignalPath, band: (f64, f64), points: usize) -> Result<MismatchReport, RfError> {
    let (low, high) = band;
    if !(low >= 0.0 && high <= MAX_FREQUENCY && low <= high) {
        return Err(RfError::BandOutOfRange { low, high });
    }
    if !(path.system_impedance > 0.0 && path.system_impedance.is_finite()) {
        return Err(RfError::InvalidPortImpedance);
    }
    let grid = uniform_grid(low, high, points)?;
    let network = cascade(&path.elements(), &grid)?.with_ports(path.system_impedance, path.system_impedance);
    let response = to_s_parameters(&network)?;
    let (worst_s11, worst_frequency) = response
        .worst_reflection()
        .ok_or(RfError::InvalidFrequencies("no frequencies"))?;
    let first_reflection_minimum = response.first_reflection_minimum();
    Ok(MismatchReport {
        worst_s11,
        worst_s11_db: 20.0 * log10(worst_s11),
        worst_frequency,
        first_reflection_minimum,
        response,
    })
}

/// [`mismatch_report`] on the [`SignalPath::nominal`] path with
/// [`DEFAULT_SWEEP_POINTS`] points.
pub fn nominal_mismatch_report(
    pin_length: f64,
    interposer_impedance: f64,
    system_impedance: f64,
    band: (f64, f64),
) -> Result<MismatchReport, RfError> {
    let path = SignalPath::nominal(pin_length, interposer_impedance, system_impedance);
    mismatch_report(&path, band, DEFAULT_SWEEP_POINTS)
}

/// Coarse crosstalk indicator for neighbouring ribbon traces. This is an
/// estimate from the even/odd impedance split, not a field solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrosstalkEstimate {
    pub even_impedance: f64,
    pub odd_impedance: f64,
    pub coupling_coefficient: f64,
    pub coupling_db: f64,
    pub is_estimate: bool,
}

pub fn crosstalk_proxy(spec: &CoupledCpwSpec) -> Result<CrosstalkEstimate, RfError> {
    let modes = spec.mode_impedances()?;
    let k = modes.coupling_coefficient();
    Ok(CrosstalkEstimate {
        even_impedance: modes.even,
        odd_impedance: modes.odd,
        coupling_coefficient: k,
        coupling_db: 20.0 * log10(k),
        is_estimate: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn quarter_wave(z: f64, f: f64, eps: f64) -> NetworkElement {
        let lambda = SPEED_OF_LIGHT / (f * sqrt(eps));
        NetworkElement::line("qw", z, eps, lambda / 4.0)
    }

    #[test]
    fn line_at_dc_is_identity() {
        let e = NetworkElement::line("l", 24.0, 3.0, 0.02);
        assert!(element_abcd(&e, 0.0).max_abs_diff(&Abcd::IDENTITY) < 1e-15);
    }

    #[test]
    fn quarter_wave_closed_form() {
        let f = 5e9;
        let m = element_abcd(&quarter_wave(24.0, f, 3.0), f);
        let expected = Abcd::new(ZERO, J * 24.0, J / 24.0, ZERO);
        assert!(m.max_abs_diff(&expected) < 1e-12, "{m:?}");
    }

    #[test]
    fn series_resistor() {
        let e = NetworkElement::new(
            "r",
            ElementKind::SeriesImpedance {
                resistance: 1.0,
                inductance: 0.0,
            },
        );
        let m = element_abcd(&e, 3e9);
        assert!(m.max_abs_diff(&Abcd::new(ONE, ONE, ZERO, ONE)) < 1e-15);
    }

    #[test]
    fn two_quarter_waves_make_minus_identity() {
        let f = 5e9;
        let qw = quarter_wave(24.0, f, 3.0);
        let net = cascade(&[qw.clone(), qw], &[f]).unwrap();
        let minus = Abcd::new(-ONE, ZERO, ZERO, -ONE);
        assert!(net.abcd[0].max_abs_diff(&minus) < 1e-12);
    }

    #[test]
    fn single_element_cascade() {
        let e = NetworkElement::line("l", 14.0, 3.0, 0.015);
        let net = cascade(core::slice::from_ref(&e), &[1e9, 2e9]).unwrap();
        assert_eq!(net.abcd[1], Abcd::IDENTITY * element_abcd(&e, 2e9));
    }

    #[test]
    fn cascade_rejects_bad_inputs() {
        assert_eq!(cascade(&[], &[1.0]), Err(RfError::EmptyCascade));
        let e = NetworkElement::line("l", 14.0, 3.0, 0.015);
        assert!(cascade(core::slice::from_ref(&e), &[2.0, 1.0]).is_err());
        assert!(cascade(core::slice::from_ref(&e), &[-1.0]).is_err());
        let bad = NetworkElement::line("neg", -5.0, 3.0, 0.01);
        assert!(matches!(cascade(&[bad], &[1.0]), Err(RfError::InvalidElement { .. })));
    }

    #[test]
    fn matched_line_is_transparent() {
        let e = NetworkElement::line("l", 50.0, 3.0, 0.02);
        let grid = uniform_grid(0.0, 10e9, 11).unwrap();
        let resp = to_s_parameters(&cascade(&[e], &grid).unwrap()).unwrap();
        for s in &resp.s {
            assert!(s.s11.norm() < 1e-12);
            assert!((s.s21.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn attenuator_20db() {
        let e = NetworkElement::new(
            "att",
            ElementKind::IdealAttenuator {
                attenuation_db: 20.0,
                reference_impedance: 50.0,
            },
        );
        let resp = to_s_parameters(&cascade(core::slice::from_ref(&e), &[1e9]).unwrap()).unwrap();
        assert!((resp.s[0].s21.norm() - 0.1).abs() < 1e-12);
        assert!(resp.s[0].s11.norm() < 1e-12);
        assert!((element_abcd(&e, 1e9).determinant() - ONE).norm() < 1e-12);
        assert!(!e.is_lossless());
    }

    #[test]
    fn unequal_ports_quarter_wave_transformer_matches() {
        // sqrt(50·12.5) = 25 Ω matches 50 Ω to 12.5 Ω at the design frequency.
        let f = 4e9;
        let net = cascade(&[quarter_wave(25.0, f, 3.0)], &[f])
            .unwrap()
            .with_ports(50.0, 12.5);
        let s = to_s_parameters(&net).unwrap().s[0];
        assert!(s.s11.norm() < 1e-12);
        assert!((s.s21.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_endpoints_and_errors() {
        let g = uniform_grid(0.0, 10e9, 1001).unwrap();
        assert_eq!(g.len(), 1001);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1000], 10e9);
        assert!((g[1] - 1e7).abs() < 1e-3);
        assert_eq!(uniform_grid(5.0, 5.0, 1).unwrap(), vec![5.0]);
        assert!(uniform_grid(1.0, 0.0, 3).is_err());
        assert!(uniform_grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn band_limits() {
        let path = SignalPath::nominal(0.02, 24.0, 50.0);
        assert!(matches!(
            mismatch_report(&path, (0.0, 20e9), 11),
            Err(RfError::BandOutOfRange { .. })
        ));
    }

    #[test]
    fn matched_path_has_no_reflection() {
        let r = nominal_mismatch_report(0.02, 50.0, 50.0, (0.0, MAX_FREQUENCY)).unwrap();
        assert!(r.worst_s11 < 1e-12);
        assert_eq!(r.response.len(), DEFAULT_SWEEP_POINTS);
    }

    #[test]
    fn taper_segments_are_geometric() {
        let mut path = SignalPath::nominal(0.02, 24.0, 50.0);
        path.taper = Taper {
            segments: 4,
            length: 1e-3,
        };
        let els = path.elements();
        assert_eq!(els.len(), 1 + 4 + 2);
        let zs: Vec<f64> = els[1..5]
            .iter()
            .map(|e| match e.kind {
                ElementKind::UniformLine { impedance, .. } => impedance,
                _ => unreachable!(),
            })
            .collect();
        assert!(zs.windows(2).all(|w| w[1] < w[0]));
        assert!(zs[0] < 50.0 && zs[3] > 24.0);
    }

    #[test]
    fn crosstalk_is_flagged_estimate() {
        let spec = CoupledCpwSpec {
            trace_width: 10e-6,
            gap: 6e-6,
            separation: 112e-6,
            relative_permittivity: 3.4,
            cover_height: None,
        };
        let open = crosstalk_proxy(&spec).unwrap();
        assert!(open.is_estimate);
        assert!(open.coupling_db < 0.0);
        let covered = crosstalk_proxy(&CoupledCpwSpec {
            cover_height: Some(20e-6),
            ..spec
        })
        .unwrap();
        assert!(covered.coupling_coefficient < open.coupling_coefficient);
    }
}
