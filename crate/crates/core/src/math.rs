//! Floating-point helpers and the shared numeric constants.

/// κ = ln 2 / 2, the constant of the average encoding inequality.
pub const KAPPA: f64 = core::f64::consts::LN_2 / 2.0;

/// Equality tolerance for double-precision identities.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Maximum total mass error accepted when a distribution is validated.
pub const MASS_TOL: f64 = 1e-12;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `-p log₂ p` with the `0 log 0 = 0` convention.
#[inline]
pub fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * log2(p)
    }
}

/// Square root that treats tiny negative rounding residue as zero.
#[inline]
pub fn sqrt_clamped(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        sqrt(x)
    }
}

/// Number of bits needed to store any integer in `0..=max`.
pub fn bits_for(max: usize) -> usize {
    (usize::BITS - max.leading_zeros()) as usize
}
