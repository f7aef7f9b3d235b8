//! Two-port Touchstone (version 1) writer, real/imaginary format.

use std::fmt::Write;

use pinchip_core::rfnet::FrequencyResponse;

/// Port 1 reference goes in the option line. Version 1 files have a single
/// reference impedance, so a different port 2 reference is recorded in a
/// comment only.
pub fn write(response: &FrequencyResponse, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "! {line}");
    }
    if response.load_impedance != response.source_impedance {
        let _ = writeln!(out, "! port 2 reference impedance {} ohm", response.load_impedance);
    }
    let _ = writeln!(out, "# HZ S RI R {}", response.source_impedance);
    let _ = writeln!(out, "! freq S11re S11im S21re S21im S12re S12im S22re S22im");
    for (f, s) in response.frequencies.iter().zip(&response.s) {
        let _ = writeln!(
            out,
            "{} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e}",
            f, s.s11.re, s.s11.im, s.s21.re, s.s21.im, s.s12.re, s.s12.im, s.s22.re, s.s22.im
        );
    }
    out
}
