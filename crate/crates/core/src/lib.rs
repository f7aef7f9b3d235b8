//! Engineering models for pin-chip bonded qubit arrays.
//!
//! The crate covers the analysis side of a fully vertical qubit interconnect:
//! wiring-density limits for lateral and vertical access ([`scaling`]),
//! characteristic impedance of the coax pins and CPW ribbon lines
//! ([`tlines`]), ABCD/S-parameter analysis of the signal path ([`rfnet`]),
//! interposer layout generation with design-rule checks ([`layout`]) and
//! cryogenic power and heat-load budgets ([`thermal`]). Material data lives
//! in [`materials`].
//!
//! Everything here is pure computation on value types. The crate is `no_std`
//! and only needs `alloc`; file formats and the command-line front end live in
//! the `pinchip` crate.
//!
//! All quantities are SI: meters, kelvin, watts, hertz, ohms, pascals.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod consts;
pub mod layout;
pub mod materials;
pub mod math;
pub mod rfnet;
pub mod scaling;
pub mod thermal;
pub mod tlines;

pub use layout::{DrcReport, InterposerLayout, LayoutConfig};
pub use materials::{Material, MaterialCatalog, MaterialKind};
pub use rfnet::{FrequencyResponse, NetworkElement, TwoPortNetwork};
pub use scaling::{QubitArraySpec, ScalingReport, WiringArchitecture};
pub use tlines::{CoaxSpec, CpwSpec, PinStack};
