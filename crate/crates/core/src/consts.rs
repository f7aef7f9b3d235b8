//! Physical constants and unit multipliers.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Free-space wave impedance, ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730_313_668;

/// Free-space impedance over 2π, the prefactor of the coax impedance formula.
pub const COAX_PREFACTOR: f64 = 59.952;

/// Lorenz number for the Wiedemann–Franz law, W·Ω/K².
pub const LORENZ_NUMBER: f64 = 2.44e-8;

/// Standard gravity, used to express forces in gram-force.
pub const STANDARD_GRAVITY: f64 = 9.806_65;

pub const MICROMETER: f64 = 1e-6;
pub const MILLIMETER: f64 = 1e-3;
pub const GIGAHERTZ: f64 = 1e9;

/// One N/mm² expressed in pascals.
pub const NEWTON_PER_MM2: f64 = 1e6;
