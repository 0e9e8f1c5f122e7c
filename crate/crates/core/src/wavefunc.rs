//! One-dimensional wavefunctions in position space.
//!
//! A [`Wavefunction`] is either a finite sum of Gaussian terms
//!
//! ```text
//! ψ(q) = Σ Aₖ exp(−(q − cₖ)² / (2σₖ²)) exp(iκₖ q)
//! ```
//!
//! or a truncated Fock expansion ψ(q) = Σ cₙ φₙ(q) over Hermite functions.
//! Both forms are closed under the unitary Fourier transform
//! ψ̃(p) = (2π)^{−1/2} ∫ ψ(q) e^{−iqp} dq, so momentum-space profiles are
//! again wavefunctions of the same kind. Norms and overlaps of Gaussian sums
//! are evaluated in closed form.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::hermite_functions;
use crate::quadrature;
use crate::scalar::Real;
use crate::special::gaussian_interval;

/// Tolerance used for mixed-representation quadrature fallbacks.
pub const QUADRATURE_TOL: f64 = 1e-9;
/// Tail allowance, in widths, added beyond the outermost Gaussian center.
pub const WINDOW_WIDTHS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// `A exp(−(q − c)²/(2σ²)) exp(iκq)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTerm<T> {
    pub amplitude: Complex<T>,
    pub center: T,
    pub width: T,
    pub linear_phase: T,
}

impl<T: Real> GaussianTerm<T> {
    pub fn new(amplitude: Complex<T>, center: T, width: T) -> Result<Self> {
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::InvalidParameter(format!("Gaussian width must be > 0, got {width}")));
        }
        if !center.is_finite() {
            return Err(Error::InvalidParameter(format!("Gaussian center must be finite, got {center}")));
        }
        Ok(Self {
            amplitude,
            center,
            width,
            linear_phase: T::zero(),
        })
    }

    pub fn real(amplitude: T, center: T, width: T) -> Result<Self> {
        Self::new(Complex::new(amplitude, T::zero()), center, width)
    }

    pub fn with_linear_phase(mut self, kappa: T) -> Self {
        self.linear_phase = kappa;
        self
    }

    #[inline]
    pub fn evaluate(&self, q: T) -> Complex<T> {
        let x = (q - self.center) / self.width;
        let envelope = (-x * x * T::of(0.5)).exp();
        if self.linear_phase == T::zero() {
            self.amplitude * envelope
        } else {
            self.amplitude * Complex::from_polar(envelope, self.linear_phase * q)
        }
    }

    /// Closed-form unitary Fourier transform of the term:
    /// amplitude `Aσ e^{iκc}`, center `κ`, width `1/σ`, linear phase `−c`.
    pub fn fourier(&self) -> Self {
        let phase = Complex::from_polar(self.width, self.linear_phase * self.center);
        Self {
            amplitude: self.amplitude * phase,
            center: self.linear_phase,
            width: self.width.recip(),
            linear_phase: -self.center,
        }
    }

    /// ψ(q − d): center moves by `d`, the linear phase contributes `e^{−iκd}`.
    pub fn displaced(&self, d: T) -> Self {
        let mut out = *self;
        out.center = self.center + d;
        if self.linear_phase != T::zero() {
            out.amplitude = self.amplitude * Complex::from_polar(T::one(), -self.linear_phase * d);
        }
        out
    }

    /// ⟨self|other⟩ = ∫ conj(self(q)) other(q) dq.
    pub fn overlap(&self, other: &Self) -> Complex<T> {
        let v1 = self.width * self.width;
        let v2 = other.width * other.width;
        let vsum = v1 + v2;
        let tau2 = v1 * v2 / vsum;
        let dc = self.center - other.center;
        let dk = other.linear_phase - self.linear_phase;
        let mean = (self.center * v2 + other.center * v1) / vsum;
        let magnitude = (T::TAU() * tau2).sqrt() * (-(dc * dc) / (vsum + vsum) - dk * dk * tau2 * T::of(0.5)).exp();
        self.amplitude.conj() * other.amplitude * Complex::from_polar(magnitude, dk * mean)
    }

    fn is_real(&self) -> bool {
        self.amplitude.im == T::zero() && self.linear_phase == T::zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation<T> {
    Gaussians(Vec<GaussianTerm<T>>),
    Fock(Vec<Complex<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction<T> {
    repr: Representation<T>,
    parity: Parity,
}

impl<T: Real> Wavefunction<T> {
    /// Gaussian-sum wavefunction; zero-amplitude terms are dropped.
    pub fn from_terms(terms: Vec<GaussianTerm<T>>) -> Self {
        let terms = terms.into_iter().filter(|t| t.amplitude != Complex::new(T::zero(), T::zero())).collect();
        Self {
            repr: Representation::Gaussians(terms),
            parity: Parity::None,
        }
    }

    /// Fock expansion; parity follows from the support.
    pub fn from_fock(coeffs: Vec<Complex<T>>) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let has_even = coeffs.iter().step_by(2).any(|c| *c != zero);
        let has_odd = coeffs.iter().skip(1).step_by(2).any(|c| *c != zero);
        let parity = match (has_even, has_odd) {
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::None,
        };
        Self {
            repr: Representation::Fock(coeffs),
            parity,
        }
    }

    pub fn from_real_fock(coeffs: &[T]) -> Self {
        Self::from_fock(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    /// The vacuum Gaussian of width σ, normalized.
    pub fn vacuum(width: T) -> Result<Self> {
        let amp = (T::PI() * width * width).powf(T::of(-0.25));
        Ok(Self::from_terms(vec![GaussianTerm::real(amp, T::zero(), width)?]).with_parity(Parity::Even))
    }

    /// Declares the parity of a wavefunction built from terms.
    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn representation(&self) -> &Representation<T> {
        &self.repr
    }

    pub fn terms(&self) -> Option<&[GaussianTerm<T>]> {
        match &self.repr {
            Representation::Gaussians(t) => Some(t),
            Representation::Fock(_) => None,
        }
    }

    pub fn fock_coeffs(&self) -> Option<&[Complex<T>]> {
        match &self.repr {
            Representation::Fock(c) => Some(c),
            Representation::Gaussians(_) => None,
        }
    }

    pub fn evaluate(&self, q: T) -> Complex<T> {
        match &self.repr {
            Representation::Gaussians(terms) => terms.iter().map(|t| t.evaluate(q)).sum(),
            Representation::Fock(coeffs) => {
                if coeffs.is_empty() {
                    return Complex::new(T::zero(), T::zero());
                }
                let phi = hermite_functions(coeffs.len() - 1, q);
                coeffs.iter().zip(phi).map(|(c, p)| *c * p).sum()
            }
        }
    }

    #[inline]
    pub fn evaluate_real(&self, q: T) -> T {
        self.evaluate(q).re
    }

    pub fn fourier_transform(&self) -> Self {
        let repr = match &self.repr {
            Representation::Gaussians(terms) => Representation::Gaussians(terms.iter().map(GaussianTerm::fourier).collect()),
            Representation::Fock(coeffs) => {
                // ⟨p|n⟩ = (−i)ⁿ ⟨q|n⟩ at q = p.
                let rot = [
                    Complex::new(T::one(), T::zero()),
                    Complex::new(T::zero(), -T::one()),
                    Complex::new(-T::one(), T::zero()),
                    Complex::new(T::zero(), T::one()),
                ];
                Representation::Fock(coeffs.iter().enumerate().map(|(n, c)| *c * rot[n % 4]).collect())
            }
        };
        Self { repr, parity: self.parity }
    }

    pub fn norm_squared(&self) -> T {
        match &self.repr {
            Representation::Gaussians(terms) => {
                let mut total = T::zero();
                for (i, a) in terms.iter().enumerate() {
                    total += a.overlap(a).re;
                    for b in &terms[i + 1..] {
                        total += T::of(2.0) * a.overlap(b).re;
                    }
                }
                total
            }
            Representation::Fock(coeffs) => coeffs.iter().map(|c| c.norm_sqr()).sum(),
        }
    }

    pub fn norm(&self) -> T {
        self.norm_squared().max(T::zero()).sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > T::min_positive_value()) || !n.is_finite() {
            return Err(Error::DegenerateWavefunction);
        }
        Ok(self.scaled(Complex::new(n.recip(), T::zero())))
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        let repr = match &self.repr {
            Representation::Gaussians(terms) => Representation::Gaussians(
                terms
                    .iter()
                    .map(|t| GaussianTerm {
                        amplitude: t.amplitude * factor,
                        ..*t
                    })
                    .collect(),
            ),
            Representation::Fock(coeffs) => Representation::Fock(coeffs.iter().map(|c| *c * factor).collect()),
        };
        Self { repr, parity: self.parity }
    }

    /// ⟨self|other⟩, conjugating `self`.
    ///
    /// Gaussian pairs use closed-form term overlaps and Fock pairs a
    /// coefficient dot product; mixed pairs fall back to adaptive quadrature
    /// at tolerance [`QUADRATURE_TOL`].
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        match (&self.repr, &other.repr) {
            (Representation::Gaussians(a), Representation::Gaussians(b)) => {
                Ok(a.iter().flat_map(|x| b.iter().map(move |y| x.overlap(y))).sum())
            }
            (Representation::Fock(a), Representation::Fock(b)) => Ok(a.iter().zip(b).map(|(x, y)| x.conj() * *y).sum()),
            _ => {
                let w = self.eval_window().max(other.eval_window());
                quadrature::integrate_complex(
                    |q| self.evaluate(q).conj() * other.evaluate(q),
                    -w,
                    w,
                    T::of(QUADRATURE_TOL),
                )
            }
        }
    }

    /// Half-width of the region outside which the wavefunction is negligible.
    pub fn eval_window(&self) -> T {
        match &self.repr {
            Representation::Gaussians(terms) => {
                let c = terms.iter().map(|t| t.center.abs()).fold(T::zero(), T::max);
                c + T::of(WINDOW_WIDTHS) * self.max_width()
            }
            Representation::Fock(coeffs) => {
                let n = coeffs.len().max(1) - 1;
                T::of_usize(2 * n + 1).sqrt() + T::of(WINDOW_WIDTHS)
            }
        }
    }

    /// Largest Gaussian width (1 for Fock expansions).
    pub fn max_width(&self) -> T {
        match &self.repr {
            Representation::Gaussians(terms) => terms.iter().map(|t| t.width).fold(T::zero(), T::max),
            Representation::Fock(_) => T::one(),
        }
    }

    /// Smallest Gaussian width (1 for Fock expansions).
    pub fn min_width(&self) -> T {
        match &self.repr {
            Representation::Gaussians(terms) if !terms.is_empty() => {
                terms.iter().map(|t| t.width).fold(T::infinity(), T::min)
            }
            _ => T::one(),
        }
    }

    /// True when every term is real with no linear phase; such sums admit
    /// closed-form interval integrals.
    pub fn is_real_gaussian_sum(&self) -> bool {
        matches!(&self.repr, Representation::Gaussians(t) if t.iter().all(GaussianTerm::is_real))
    }

    /// Largest |Im ψ(q)| on a grid over the evaluation window.
    pub fn max_imaginary(&self) -> T {
        if self.is_real_gaussian_sum() {
            return T::zero();
        }
        if let Representation::Fock(c) = &self.repr {
            if c.iter().all(|c| c.im == T::zero()) {
                return T::zero();
            }
        }
        let w = self.eval_window();
        let n = 4001;
        (0..n)
            .map(|k| {
                let q = -w + (w + w) * T::of_usize(k) / T::of_usize(n - 1);
                self.evaluate(q).im.abs()
            })
            .fold(T::zero(), T::max)
    }

    pub fn check_real(&self, tol: T) -> Result<()> {
        let im = self.max_imaginary();
        if im < tol {
            Ok(())
        } else {
            Err(Error::NotReal(im.to_f64().unwrap_or(f64::NAN)))
        }
    }

    /// Samples ψ(−q) against ±ψ(q) to confirm the declared parity.
    pub fn check_parity(&self, rel_tol: T) -> bool {
        let sign = match self.parity {
            Parity::Even => T::one(),
            Parity::Odd => -T::one(),
            Parity::None => return true,
        };
        let w = self.eval_window();
        let n = 257;
        let vals: Vec<_> = (0..n)
            .map(|k| {
                let q = w * T::of_usize(k) / T::of_usize(n - 1);
                (self.evaluate(q), self.evaluate(-q))
            })
            .collect();
        let scale = vals.iter().map(|(a, _)| a.norm()).fold(T::zero(), T::max).max(T::min_positive_value());
        vals.iter().all(|(a, b)| (*b - *a * sign).norm() <= rel_tol * scale)
    }

    /// ψ(q − d) for Gaussian sums.
    pub fn displaced(&self, d: T) -> Result<Self> {
        match &self.repr {
            Representation::Gaussians(terms) => Ok(Self {
                repr: Representation::Gaussians(terms.iter().map(|t| t.displaced(d)).collect()),
                parity: Parity::None,
            }),
            Representation::Fock(_) => Err(Error::InvalidParameter("displacement needs a Gaussian-sum wavefunction".into())),
        }
    }

    /// Multiplies by `e^{iκq}` (Gaussian sums only).
    pub fn with_added_linear_phase(&self, kappa: T) -> Result<Self> {
        match &self.repr {
            Representation::Gaussians(terms) => Ok(Self {
                repr: Representation::Gaussians(
                    terms
                        .iter()
                        .map(|t| GaussianTerm {
                            linear_phase: t.linear_phase + kappa,
                            ..*t
                        })
                        .collect(),
                ),
                parity: Parity::None,
            }),
            Representation::Fock(_) => Err(Error::InvalidParameter("linear phase needs a Gaussian-sum wavefunction".into())),
        }
    }

    /// Concatenates two Gaussian sums.
    pub fn add(&self, other: &Self) -> Result<Self> {
        match (&self.repr, &other.repr) {
            (Representation::Gaussians(a), Representation::Gaussians(b)) => {
                let parity = if self.parity == other.parity { self.parity } else { Parity::None };
                Ok(Self::from_terms(a.iter().chain(b).copied().collect()).with_parity(parity).simplified())
            }
            (Representation::Fock(a), Representation::Fock(b)) => {
                let n = a.len().max(b.len());
                let zero = Complex::new(T::zero(), T::zero());
                let c = (0..n)
                    .map(|i| a.get(i).copied().unwrap_or(zero) + b.get(i).copied().unwrap_or(zero))
                    .collect();
                Ok(Self::from_fock(c))
            }
            _ => Err(Error::InvalidParameter("cannot add wavefunctions in different representations".into())),
        }
    }

    /// Merges Gaussian terms sharing center, width and linear phase.
    pub fn simplified(&self) -> Self {
        let Representation::Gaussians(terms) = &self.repr else {
            return self.clone();
        };
        let tol = T::of(1e-12);
        let close = |a: T, b: T| (a - b).abs() <= tol * (T::one() + a.abs().max(b.abs()));
        let mut merged: Vec<GaussianTerm<T>> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged
                .iter_mut()
                .find(|m| close(m.center, t.center) && close(m.width, t.width) && close(m.linear_phase, t.linear_phase))
            {
                Some(m) => m.amplitude += t.amplitude,
                None => merged.push(*t),
            }
        }
        let scale = merged.iter().map(|t| t.amplitude.norm()).fold(T::zero(), T::max);
        merged.retain(|t| t.amplitude.norm() > scale * T::epsilon());
        Self {
            repr: Representation::Gaussians(merged),
            parity: self.parity,
        }
    }
}

/// ∫ₐᵇ f(q) g(q) dq for real-valued wavefunctions.
///
/// Pairs of real Gaussian sums are integrated term by term with error
/// functions; everything else goes through adaptive quadrature with absolute
/// tolerance `tol`. Infinite limits are clipped to the evaluation window in
/// the quadrature path.
pub fn product_integral<T: Real>(f: &Wavefunction<T>, g: &Wavefunction<T>, a: T, b: T, tol: T) -> Result<T> {
    if f.is_real_gaussian_sum() && g.is_real_gaussian_sum() {
        let (Some(ft), Some(gt)) = (f.terms(), g.terms()) else { unreachable!() };
        let mut total = T::zero();
        for x in ft {
            for y in gt {
                let v1 = x.width * x.width;
                let v2 = y.width * y.width;
                let vsum = v1 + v2;
                let dc = x.center - y.center;
                let coeff = x.amplitude.re * y.amplitude.re * (-(dc * dc) / (vsum + vsum)).exp();
                if coeff == T::zero() {
                    continue;
                }
                let tau = (v1 * v2 / vsum).sqrt();
                let mean = (x.center * v2 + y.center * v1) / vsum;
                total += coeff * gaussian_interval(mean, tau, a, b);
            }
        }
        return Ok(total);
    }
    let w = f.eval_window().max(g.eval_window());
    let lo = a.max(-w);
    let hi = b.min(w);
    if lo >= hi {
        return Ok(T::zero());
    }
    // Panels no wider than the narrowest feature.
    let feature = f.min_width().min(g.min_width());
    let panels = ((hi - lo) / (feature + feature)).ceil().to_usize().unwrap_or(1).clamp(1, 4096);
    quadrature::integrate_panels(|q| f.evaluate_real(q) * g.evaluate_real(q), lo, hi, tol, panels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gauss(amp: f64, c: f64, w: f64) -> GaussianTerm<f64> {
        GaussianTerm::real(amp, c, w).unwrap()
    }

    fn quad_overlap(a: &Wavefunction<f64>, b: &Wavefunction<f64>) -> Complex<f64> {
        let w = a.eval_window().max(b.eval_window());
        quadrature::integrate_complex(|q| a.evaluate(q).conj() * b.evaluate(q), -w, w, 1e-12).unwrap()
    }

    #[test]
    fn normalized_vacuum_at_origin() {
        let v = Wavefunction::vacuum(1.0_f64).unwrap();
        assert!((v.evaluate(0.0).re - PI.powf(-0.25)).abs() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-14);
        let again = v.normalize().unwrap();
        assert!((again.evaluate(0.3) - v.evaluate(0.3)).norm() < 1e-12);
    }

    #[test]
    fn coincident_peaks_include_cross_term() {
        let one = Wavefunction::from_terms(vec![gauss(1.0, 0.7, 0.8)]);
        let two = Wavefunction::from_terms(vec![gauss(1.0, 0.7, 0.8), gauss(1.0, 0.7, 0.8)]);
        assert!((two.norm_squared() - 4.0 * one.norm_squared()).abs() < 1e-13);
    }

    #[test]
    fn zero_norm_is_rejected() {
        let z = Wavefunction::<f64>::from_terms(vec![]);
        assert_eq!(z.normalize(), Err(Error::DegenerateWavefunction));
        let cancel = Wavefunction::from_terms(vec![gauss(1.0, 0.0, 1.0), gauss(-1.0, 0.0, 1.0)]);
        assert_eq!(cancel.normalize(), Err(Error::DegenerateWavefunction));
    }

    #[test]
    fn bad_width_rejected() {
        assert!(GaussianTerm::real(1.0, 0.0, 0.0).is_err());
        assert!(GaussianTerm::real(1.0, 0.0, -2.0).is_err());
    }

    #[test]
    fn term_fourier_matches_quadrature() {
        let t = GaussianTerm::new(Complex::new(0.6, -0.3), 1.3, 0.7).unwrap().with_linear_phase(0.9);
        let ft = t.fourier();
        for &p in &[-2.0, -0.4, 0.0, 0.9, 2.5] {
            let num = quadrature::integrate_complex(
                |q: f64| t.evaluate(q) * Complex::from_polar(1.0, -q * p),
                -15.0,
                15.0,
                1e-13,
            )
            .unwrap()
                / (2.0 * PI).sqrt();
            assert!((num - ft.evaluate(p)).norm() < 1e-11, "p={p}: {num} vs {}", ft.evaluate(p));
        }
    }

    #[test]
    fn fock_four_is_fourier_invariant() {
        let mut c = vec![Complex::new(0.0, 0.0); 5];
        c[4] = Complex::new(1.0, 0.0);
        let psi = Wavefunction::from_fock(c);
        assert_eq!(psi.fourier_transform(), psi);
        assert_eq!(psi.parity(), Parity::Even);
    }

    #[test]
    fn even_cat_transform_is_cosine_modulated() {
        let a = 3.0;
        let f = Wavefunction::from_terms(vec![gauss(1.0, -a, 1.0), gauss(1.0, a, 1.0)]).normalize().unwrap();
        let ft = f.fourier_transform();
        // Quadrature oracle, and the shape e^{−p²/2} cos(ap) up to one constant.
        let k = ft.evaluate(0.0).re;
        for &p in &[0.0, 0.2, 0.5, 1.1, 2.0] {
            let num = quadrature::integrate(|q: f64| f.evaluate_real(q) * (q * p).cos(), -20.0, 20.0, 1e-13).unwrap()
                / (2.0 * PI).sqrt();
            let v = ft.evaluate(p);
            assert!(v.im.abs() < 1e-13);
            assert!((v.re - num).abs() < 1e-11);
            assert!((v.re - k * (-p * p / 2.0).exp() * (a * p).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_overlap_matches_quadrature() {
        let a = Wavefunction::from_terms(vec![
            GaussianTerm::new(Complex::new(0.4, 0.2), -1.0, 0.6).unwrap().with_linear_phase(0.3),
            gauss(-0.8, 0.5, 1.4),
        ]);
        let b = Wavefunction::from_terms(vec![
            GaussianTerm::new(Complex::new(-0.1, 0.9), 0.2, 1.1).unwrap().with_linear_phase(-0.7),
            gauss(0.3, 2.0, 0.5),
        ]);
        let closed = a.inner_product(&b).unwrap();
        assert!((closed - quad_overlap(&a, &b)).norm() < 1e-10);
    }

    #[test]
    fn mixed_representation_uses_quadrature() {
        let v = Wavefunction::vacuum(1.0_f64).unwrap();
        let fock0 = Wavefunction::from_real_fock(&[1.0]);
        let ip = v.inner_product(&fock0).unwrap();
        assert!((ip.re - 1.0).abs() < 1e-9 && ip.im.abs() < 1e-9);
    }

    #[test]
    fn displacement_moves_center() {
        let v = Wavefunction::vacuum(1.0).unwrap().with_added_linear_phase(0.5).unwrap();
        let d = v.displaced(2.0).unwrap();
        for &q in &[-1.0, 0.0, 1.5, 3.0] {
            assert!((d.evaluate(q) - v.evaluate(q - 2.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn product_integral_closed_vs_quadrature() {
        let f = Wavefunction::from_terms(vec![gauss(1.0, -1.0, 1.0), gauss(0.5, 1.5, 0.6)]);
        let g = Wavefunction::from_terms(vec![gauss(-0.7, 0.0, 0.9), gauss(1.2, 2.0, 1.3)]);
        for &(a, b) in &[(-3.0, 0.5), (0.5, 2.2), (f64::NEG_INFINITY, 0.0), (1.0, f64::INFINITY)] {
            let closed = product_integral(&f, &g, a, b, 1e-12).unwrap();
            let w = 20.0;
            let num = quadrature::integrate(|q| f.evaluate_real(q) * g.evaluate_real(q), a.max(-w), b.min(w), 1e-13).unwrap();
            assert!((closed - num).abs() < 1e-11, "[{a},{b}] {closed} vs {num}");
        }
    }

    #[test]
    fn simplify_merges_duplicates() {
        let f = Wavefunction::from_terms(vec![gauss(1.0, 1.0, 1.0), gauss(2.0, 1.0, 1.0), gauss(1.0, -1.0, 1.0)]);
        let s = f.simplified();
        assert_eq!(s.terms().unwrap().len(), 2);
        assert!((s.evaluate(0.4) - f.evaluate(0.4)).norm() < 1e-14);
    }

    #[test]
    fn odd_function_transform_is_imaginary() {
        let g = Wavefunction::from_terms(vec![gauss(-1.0, -2.0, 1.0), gauss(1.0, 2.0, 1.0)]).with_parity(Parity::Odd);
        let gt = g.fourier_transform();
        assert!(gt.check_parity(1e-12));
        for &p in &[0.1, 0.7, 1.9] {
            assert!(gt.evaluate(p).re.abs() < 1e-14);
        }
    }

    #[test]
    fn f32_smoke() {
        let v = Wavefunction::<f32>::vacuum(1.0).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-5);
        let ft = v.fourier_transform();
        assert!((ft.evaluate(0.0).re - v.evaluate(0.0).re).abs() < 1e-5);
    }
}
