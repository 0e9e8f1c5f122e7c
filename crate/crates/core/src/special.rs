//! Error function helpers for Gaussian interval masses.
//!
//! erf and erfc come from `libm` in double precision.

use crate::scalar::Real;

fn via_f64<T: Real>(x: T, f: fn(f64) -> f64) -> T {
    match x.to_f64() {
        Some(v) => T::of(f(v)),
        None => T::nan(),
    }
}

pub fn erf<T: Real>(x: T) -> T {
    via_f64(x, libm::erf)
}

pub fn erfc<T: Real>(x: T) -> T {
    via_f64(x, libm::erfc)
}

/// erf(b) − erf(a), evaluated through erfc when both limits sit in the
/// same tail so that the difference keeps full relative precision.
pub fn erf_diff<T: Real>(a: T, b: T) -> T {
    if a >= T::zero() && b >= T::zero() {
        erfc(a) - erfc(b)
    } else if a <= T::zero() && b <= T::zero() {
        erfc(-b) - erfc(-a)
    } else {
        erf(b) - erf(a)
    }
}

/// ∫ₐᵇ exp(−(q − m)² / (2τ²)) dq. Infinite limits are allowed.
pub fn gaussian_interval<T: Real>(mean: T, tau: T, a: T, b: T) -> T {
    let s = T::of(2.0).sqrt() * tau;
    tau * (T::PI() / T::of(2.0)).sqrt() * erf_diff((a - mean) / s, (b - mean) / s)
}
