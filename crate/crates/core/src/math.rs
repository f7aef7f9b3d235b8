//! Float helpers for `no_std` builds and the complete elliptic integral.

use core::f64::consts::FRAC_PI_2;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn log10(x: f64) -> f64 {
    libm::log10(x)
}

/// Relative tolerance of the AGM iteration in [`ellip_k`].
pub const AGM_TOLERANCE: f64 = 1e-15;

/// Complete elliptic integral of the first kind, `K(k)`, with modulus `k`
/// (not the parameter `m = k²`).
///
/// Computed as `π / (2·AGM(1, k'))`. Returns `+∞` for `k = 1` and NaN outside
/// `[0, 1]`.
pub fn ellip_k(k: f64) -> f64 {
    if !(0.0..=1.0).contains(&k) {
        return f64::NAN;
    }
    if k == 1.0 {
        return f64::INFINITY;
    }
    let kp = sqrt((1.0 - k) * (1.0 + k));
    FRAC_PI_2 / agm(1.0, kp)
}

/// Ratio `K(k) / K(k')` with `k' = sqrt(1 - k²)`.
pub fn ellip_k_ratio(k: f64) -> f64 {
    let kp = sqrt((1.0 - k) * (1.0 + k));
    ellip_k(k) / ellip_k(kp)
}

/// Arithmetic–geometric mean of `a` and `b`.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    // Quadratic convergence; 64 rounds is far beyond what any finite input needs.
    for _ in 0..64 {
        if (a - b).abs() <= AGM_TOLERANCE * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = sqrt(a * b);
        a = next_a;
    }
    0.5 * (a + b)
}

/// Snaps `x` to the nearest integer when it lies within `1e-9` relative of it.
///
/// Used before flooring counts so that decimal inputs such as `0.2 / 0.0005`
/// do not floor to `399`.
pub fn snap_to_integer(x: f64) -> f64 {
    let r = round(x);
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Relative closeness test used for invariants that should hold up to rounding.
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
