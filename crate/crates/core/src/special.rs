//! Gamma-family special functions.
//!
//! Lanczos-type expansion (g = 10.900511, 11 coefficients) giving ~1e-15
//! relative accuracy on the real line away from the poles; negative
//! arguments go through the reflection formula. Nothing here is asymptotic,
//! so accuracy is uniform over the ranges the crate touches
//! (|x| ≲ a few hundred for `ln_gamma`, |x| ≲ 30 for `gamma`).

use std::f64::consts::{E, PI};

pub const SQRT_PI: f64 = 1.7724538509055160273;

const GAMMA_R: f64 = 10.900511;
const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173;
const LN_2_SQRT_E_OVER_PI: f64 = 0.6207822376352452223;
const LN_PI: f64 = 1.1447298858494001741;

/// Γ(x) for real non-pole x (poles at 0, -1, -2, ... return non-finite
/// values; callers in this crate never hit them).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let mut s = GAMMA_DK[0];
        for (i, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (i as f64 - x);
        }
        PI / ((PI * x).sin()
            * s
            * TWO_SQRT_E_OVER_PI
            * ((0.5 - x + GAMMA_R) / E).powf(0.5 - x))
    } else {
        let mut s = GAMMA_DK[0];
        for (i, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (x - 1.0 + i as f64);
        }
        s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + GAMMA_R) / E).powf(x - 0.5)
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        let mut s = GAMMA_DK[0];
        for (i, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (i as f64 - x);
        }
        LN_PI
            - (PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + GAMMA_R) / E).ln()
    } else {
        let mut s = GAMMA_DK[0];
        for (i, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (x - 1.0 + i as f64);
        }
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + GAMMA_R) / E).ln()
    }
}

/// |Γ(-α)| for α ∈ (0, 1), via |Γ(-α)| = Γ(1-α)/α.
pub fn abs_gamma_neg(alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    gamma(1.0 - alpha) / alpha
}
