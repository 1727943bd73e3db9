//! Complementary error function used by the concentration profile.

/// Past this argument the profile contribution is dropped (`erfc(6) ~ 2e-17`).
pub const ERFC_CUTOFF: f64 = 6.0;

/// `erfc(x)` for `x >= 0`, returning exactly zero beyond [`ERFC_CUTOFF`].
pub fn erfc_clipped(x: f64) -> f64 {
    if x > ERFC_CUTOFF {
        0.0
    } else {
        libm::erfc(x)
    }
}
