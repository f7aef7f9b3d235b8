//! Dimensional quantities written as strings with an explicit unit suffix,
//! e.g. `"500um"`, `"18 mm"`, `"10GHz"`, `"100nW"`.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

pub trait Dimension {
    const NAME: &'static str;
    /// Suffix of the SI base unit.
    const SI: &'static str;
    const UNITS: &'static [(&'static str, f64)];
}

macro_rules! dimension {
    ($ty:ident, $name:literal, $si:literal, [$(($suffix:literal, $factor:expr)),+ $(,)?]) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub struct $ty;

        impl Dimension for $ty {
            const NAME: &'static str = $name;
            const SI: &'static str = $si;
            const UNITS: &'static [(&'static str, f64)] = &[$(($suffix, $factor)),+];
        }
    };
}

dimension!(
    LengthDim,
    "length",
    "m",
    [
        ("m", 1.0),
        ("cm", 1e-2),
        ("mm", 1e-3),
        ("um", 1e-6),
        ("µm", 1e-6),
        ("μm", 1e-6),
        ("nm", 1e-9),
    ]
);
dimension!(
    AreaDim,
    "area",
    "m2",
    [("m2", 1.0), ("mm2", 1e-6), ("um2", 1e-12), ("µm2", 1e-12),]
);
dimension!(
    FrequencyDim,
    "frequency",
    "Hz",
    [("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9),]
);
dimension!(
    PowerDim,
    "power",
    "W",
    [
        ("W", 1.0),
        ("kW", 1e3),
        ("mW", 1e-3),
        ("uW", 1e-6),
        ("µW", 1e-6),
        ("nW", 1e-9),
        ("pW", 1e-12),
    ]
);
dimension!(
    TemperatureDim,
    "temperature",
    "K",
    [("K", 1.0), ("mK", 1e-3), ("uK", 1e-6), ("µK", 1e-6),]
);
dimension!(
    ResistanceDim,
    "resistance",
    "ohm",
    [("ohm", 1.0), ("Ohm", 1.0), ("Ω", 1.0), ("mohm", 1e-3), ("kohm", 1e3),]
);
dimension!(
    InductanceDim,
    "inductance",
    "H",
    [
        ("H", 1.0),
        ("mH", 1e-3),
        ("uH", 1e-6),
        ("µH", 1e-6),
        ("nH", 1e-9),
        ("pH", 1e-12),
    ]
);
dimension!(
    CapacitanceDim,
    "capacitance",
    "F",
    [
        ("F", 1.0),
        ("uF", 1e-6),
        ("µF", 1e-6),
        ("nF", 1e-9),
        ("pF", 1e-12),
        ("fF", 1e-15),
    ]
);
dimension!(
    ResistivityDim,
    "resistivity",
    "ohm*m",
    [("ohm*m", 1.0), ("ohm*cm", 1e-2), ("uohm*cm", 1e-8), ("nohm*m", 1e-9),]
);
dimension!(AttenuationDim, "attenuation", "dB", [("dB", 1.0)]);

/// Every dimension's `(name, SI suffix, units)`, used to identify a bare
/// quantity string.
pub const ALL_DIMENSIONS: &[(&str, &str, &[(&str, f64)])] = &[
    (LengthDim::NAME, LengthDim::SI, LengthDim::UNITS),
    (AreaDim::NAME, AreaDim::SI, AreaDim::UNITS),
    (FrequencyDim::NAME, FrequencyDim::SI, FrequencyDim::UNITS),
    (PowerDim::NAME, PowerDim::SI, PowerDim::UNITS),
    (TemperatureDim::NAME, TemperatureDim::SI, TemperatureDim::UNITS),
    (ResistanceDim::NAME, ResistanceDim::SI, ResistanceDim::UNITS),
    (InductanceDim::NAME, InductanceDim::SI, InductanceDim::UNITS),
    (CapacitanceDim::NAME, CapacitanceDim::SI, CapacitanceDim::UNITS),
    (ResistivityDim::NAME, ResistivityDim::SI, ResistivityDim::UNITS),
    (AttenuationDim::NAME, AttenuationDim::SI, AttenuationDim::UNITS),
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnitError {
    #[error("`{0}` has no numeric value")]
    NoNumber(String),
    #[error("`{0}` has no unit suffix")]
    NoUnit(String),
    #[error("unknown unit `{unit}` in `{text}`")]
    UnknownUnit { text: String, unit: String },
    #[error("`{text}` is a {found}, expected a {expected} (e.g. {example})")]
    WrongDimension {
        text: String,
        found: &'static str,
        expected: &'static str,
        example: String,
    },
}

/// Splits `"12.5 um"` into `(12.5, "um")`.
pub fn split_quantity(text: &str) -> Result<(f64, &str), UnitError> {
    let t = text.trim();
    let end = t
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && i > 0
                    && t[i + 1..].starts_with(|n: char| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map_or(t.len(), |(i, _)| i);
    let value: f64 = t[..end]
        .trim()
        .parse()
        .map_err(|_| UnitError::NoNumber(text.to_string()))?;
    let unit = t[end..].trim();
    if unit.is_empty() {
        return Err(UnitError::NoUnit(text.to_string()));
    }
    Ok((value, unit))
}

/// Sub-unit prefixes divide by the exact reciprocal so that `"18mm"` gives
/// the same double as the literal `0.018`.
fn to_si(value: f64, factor: f64) -> f64 {
    if factor < 1.0 {
        value / (1.0 / factor).round()
    } else {
        value * factor
    }
}

/// Identifies the dimension of a quantity string and returns
/// `(value in SI, dimension name, SI suffix)`.
pub fn parse_any(text: &str) -> Result<(f64, &'static str, &'static str), UnitError> {
    let (value, unit) = split_quantity(text)?;
    for (name, si, units) in ALL_DIMENSIONS {
        if let Some((_, factor)) = units.iter().find(|(s, _)| *s == unit) {
            return Ok((to_si(value, *factor), name, si));
        }
    }
    Err(UnitError::UnknownUnit {
        text: text.to_string(),
        unit: unit.to_string(),
    })
}

pub fn parse<D: Dimension>(text: &str) -> Result<f64, UnitError> {
    let (value, unit) = split_quantity(text)?;
    if let Some((_, factor)) = D::UNITS.iter().find(|(s, _)| *s == unit) {
        return Ok(to_si(value, *factor));
    }
    match parse_any(text) {
        Ok((_, found, _)) => Err(UnitError::WrongDimension {
            text: text.to_string(),
            found,
            expected: D::NAME,
            example: format!("\"1{}\"", D::UNITS[0].0),
        }),
        Err(e) => Err(e),
    }
}

/// An SI value read from a unit-suffixed string.
pub struct Quantity<D> {
    value: f64,
    _dim: PhantomData<D>,
}

impl<D> Quantity<D> {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            _dim: PhantomData,
        }
    }

    pub fn get(&self) -> f64 {
        self.value
    }
}

impl<D> Clone for Quantity<D> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<D> Copy for Quantity<D> {}

impl<D> PartialEq for Quantity<D> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, D::SI)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> Result<Self, De::Error> {
        struct V<D>(PhantomData<D>);

        impl<D: Dimension> Visitor<'_> for V<D> {
            type Value = Quantity<D>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a {} with a unit, e.g. \"1{}\"", D::NAME, D::UNITS[0].0)
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Self::Value, E> {
                parse::<D>(s).map(Quantity::new).map_err(E::custom)
            }
        }

        deserializer.deserialize_str(V(PhantomData))
    }
}

pub type Length = Quantity<LengthDim>;
pub type Area = Quantity<AreaDim>;
pub type Frequency = Quantity<FrequencyDim>;
pub type Power = Quantity<PowerDim>;
pub type Temperature = Quantity<TemperatureDim>;
pub type Resistance = Quantity<ResistanceDim>;
pub type Inductance = Quantity<InductanceDim>;
pub type Capacitance = Quantity<CapacitanceDim>;
pub type Resistivity = Quantity<ResistivityDim>;
pub type Attenuation = Quantity<AttenuationDim>;

/// Renders `value` (SI) in the unit with suffix `suffix` of dimension `D`.
pub fn format_in<D: Dimension>(value: f64, suffix: &str) -> Option<String> {
    D::UNITS
        .iter()
        .find(|(s, _)| *s == suffix)
        .map(|(s, f)| format!("{}{s}", value / f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse::<LengthDim>("500um").unwrap(), 500e-6);
        assert_eq!(parse::<LengthDim>(" 18 mm ").unwrap(), 18e-3);
        assert_eq!(parse::<LengthDim>("1.5e-3m").unwrap(), 1.5e-3);
        assert_eq!(parse::<FrequencyDim>("10GHz").unwrap(), 10e9);
        assert_eq!(parse::<TemperatureDim>("10mK").unwrap(), 10e-3);
        assert!((parse::<PowerDim>("100nW").unwrap() - 100e-9).abs() < 1e-22);
        assert_eq!(parse::<ResistanceDim>("50ohm").unwrap(), 50.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse::<LengthDim>("500"), Err(UnitError::NoUnit(_))));
        assert!(matches!(parse::<LengthDim>("mm"), Err(UnitError::NoNumber(_))));
        assert!(matches!(
            parse::<LengthDim>("5 furlong"),
            Err(UnitError::UnknownUnit { .. })
        ));
        let err = parse::<LengthDim>("10GHz").unwrap_err();
        assert!(matches!(err, UnitError::WrongDimension { found: "frequency", .. }));
    }

    #[test]
    fn parse_any_reports_dimension() {
        let (v, dim, si) = parse_any("3K").unwrap();
        assert_eq!((v, dim, si), (3.0, "temperature", "K"));
    }

    #[test]
    fn deserializes_with_serde() {
        #[derive(Deserialize)]
        struct T {
            pitch: Length,
        }
        let t: T = toml::from_str("pitch = \"56um\"").unwrap();
        assert_eq!(t.pitch.get(), 56e-6);
        assert!(toml::from_str::<T>("pitch = 56").is_err());
    }
}
