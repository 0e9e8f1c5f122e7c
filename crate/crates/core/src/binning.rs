//! Signed partitions of the real line and root binning.
//!
//! A quadrature outcome `q` is mapped to "+" or "−" by the interval that
//! contains it. Root binning labels an interval "+" where f(q)·g(q) ≥ 0,
//! so the binned correlators pick up ∫|f g| exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::Real;
use crate::wavefunc::Wavefunction;

pub const DEFAULT_RESOLUTION: usize = 20_001;
/// Breakpoints are bisected until the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-10;
/// |f g| below this on a whole "−" interval counts as identically zero.
pub const ZERO_TOL: f64 = 1e-12;
/// Largest |f g| mass tolerated outside the sampling window.
pub const TAIL_TOL: f64 = 1e-9;
/// Largest imaginary part tolerated for "real" inputs.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn of_product<T: Real>(x: T) -> Self {
        if x >= T::zero() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Breakpoints b₁ < … < bₘ and one sign per interval
/// (−∞, b₁), [b₁, b₂), …, [bₘ, +∞).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedPartition<T> {
    breakpoints: Vec<T>,
    signs: Vec<Sign>,
}

/// One interval of a partition; `None` stands for an infinite end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: Option<T>,
    pub hi: Option<T>,
    pub sign: Sign,
}

impl<T: Real> Interval<T> {
    pub fn lo_or(&self, default: T) -> T {
        self.lo.unwrap_or(default)
    }

    pub fn hi_or(&self, default: T) -> T {
        self.hi.unwrap_or(default)
    }
}

impl<T: Real> SignedPartition<T> {
    pub fn new(breakpoints: Vec<T>, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} breakpoints need {} signs, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                signs.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("breakpoints must be finite and strictly increasing".into()));
        }
        Ok(Self { breakpoints, signs })
    }

    /// The whole line with a single sign.
    pub fn uniform(sign: Sign) -> Self {
        Self {
            breakpoints: Vec::new(),
            signs: vec![sign],
        }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign of the interval containing `q`; a breakpoint belongs to the
    /// interval on its right.
    pub fn classify(&self, q: T) -> Sign {
        let idx = self.breakpoints.partition_point(|&b| b <= q);
        self.signs[idx]
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval<T>> + '_ {
        self.signs.iter().enumerate().map(move |(i, &sign)| Interval {
            lo: if i == 0 { None } else { Some(self.breakpoints[i - 1]) },
            hi: self.breakpoints.get(i).copied(),
            sign,
        })
    }

    /// Drops breakpoints between equal signs.
    pub fn coalesced(&self) -> Self {
        let mut breakpoints = Vec::with_capacity(self.breakpoints.len());
        let mut signs = vec![self.signs[0]];
        for (b, s) in self.breakpoints.iter().zip(&self.signs[1..]) {
            if *s != *signs.last().expect("non-empty") {
                breakpoints.push(*b);
                signs.push(*s);
            }
        }
        Self { breakpoints, signs }
    }
}

/// Positive-negative binning: "+" iff q ≥ 0.
pub fn pn_binning<T: Real>() -> SignedPartition<T> {
    SignedPartition {
        breakpoints: vec![T::zero()],
        signs: vec![Sign::Minus, Sign::Plus],
    }
}

pub fn classify<T: Real>(partition: &SignedPartition<T>, q: T) -> Sign {
    partition.classify(q)
}

/// Root binning with the window taken from both wavefunctions and the
/// default sampling resolution.
pub fn root_binning_auto<T: Real>(f: &Wavefunction<T>, g: &Wavefunction<T>) -> Result<SignedPartition<T>> {
    let window = f.eval_window().max(g.eval_window());
    root_binning(f, g, window, DEFAULT_RESOLUTION)
}

/// Partition with "+" exactly where f(q)·g(q) ≥ 0.
///
/// Sign changes are bracketed on `resolution` equally spaced samples over
/// `[−window, window]` and then bisected to [`BISECTION_TOL`]. Touching
/// zeros without a sign flip are not breakpoints. A "−" interval on which
/// |f g| never exceeds [`ZERO_TOL`] is merged into its "+" neighbours.
pub fn root_binning<T: Real>(
    f: &Wavefunction<T>,
    g: &Wavefunction<T>,
    window: T,
    resolution: usize,
) -> Result<SignedPartition<T>> {
    if !(window > T::zero()) || resolution < 2 {
        return Err(Error::InvalidParameter("root binning needs window > 0 and resolution >= 2".into()));
    }
    let real_tol = T::of(REAL_TOL);
    f.check_real(real_tol)?;
    g.check_real(real_tol)?;
    let product = |q: T| f.evaluate_real(q) * g.evaluate_real(q);

    let tail = tail_mass(&product, window, f.max_width().max(g.max_width()))?;
    if tail > T::of(TAIL_TOL) {
        return Err(Error::WindowTooSmall {
            window: window.to_f64().unwrap_or(f64::NAN),
            mass: tail.to_f64().unwrap_or(f64::NAN),
        });
    }

    let step = (window + window) / T::of_usize(resolution - 1);
    let grid = |k: usize| -window + step * T::of_usize(k);
    let samples: Vec<T> = (0..resolution).map(|k| product(grid(k))).collect();

    // Raw intervals between sign flips, with the peak |f g| on each.
    let mut breakpoints = Vec::new();
    let mut signs = vec![Sign::of_product(samples[0])];
    let mut peaks = vec![samples[0].abs()];
    for (k, &sample) in samples.iter().enumerate().skip(1) {
        let s = Sign::of_product(sample);
        if s != *signs.last().expect("non-empty") {
            breakpoints.push(bisect(&product, grid(k - 1), grid(k)));
            signs.push(s);
            peaks.push(T::zero());
        }
        let p = peaks.last_mut().expect("non-empty");
        *p = p.max(sample.abs());
    }

    let zero_tol = T::of(ZERO_TOL);
    for (s, p) in signs.iter_mut().zip(&peaks) {
        if *s == Sign::Minus && *p < zero_tol {
            *s = Sign::Plus;
        }
    }
    Ok(SignedPartition { breakpoints, signs }.coalesced())
}

/// Locates the sign change of `h` inside [lo, hi].
fn bisect<T: Real>(h: &impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    let lo_sign = Sign::of_product(h(lo));
    let tol = T::of(BISECTION_TOL);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) * T::of(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if Sign::of_product(h(mid)) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The breakpoint opens the right-hand interval.
    hi
}

/// ∫_{|q| > window} |h(q)| dq, integrated out to 20 widths beyond the window.
fn tail_mass<T: Real>(h: &impl Fn(T) -> T, window: T, width: T) -> Result<T> {
    let span = T::of(20.0) * width.max(T::one());
    let tol = T::of(TAIL_TOL * 1e-2);
    let right = quadrature::integrate(|q| h(q).abs(), window, window + span, tol)?;
    let left = quadrature::integrate(|q| h(q).abs(), -window - span, -window, tol)?;
    Ok(right + left)
}
