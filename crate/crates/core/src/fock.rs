//! Hermite functions and Fock-basis expansions.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bell::{self, BellAnalysis};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::wavefunc::{GaussianTerm, Parity, Representation, Wavefunction};

/// Expansions capturing less probability than `1 − CAPTURE_EPS` are flagged.
pub const CAPTURE_EPS: f64 = 0.01;

/// φₙ(q) = (2ⁿ n! √π)^{−1/2} Hₙ(q) e^{−q²/2}.
pub fn hermite_function<T: Real>(n: usize, q: T) -> T {
    *hermite_functions(n, q).last().expect("non-empty")
}

/// φ₀(q) … φₙ(q), by the recurrence on the normalized functions themselves
/// (φₖ₊₁ = √(2/(k+1)) q φₖ − √(k/(k+1)) φₖ₋₁), which never forms Hₙ.
pub fn hermite_functions<T: Real>(n_max: usize, q: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    let phi0 = T::PI().powf(T::of(-0.25)) * (-q * q * T::of(0.5)).exp();
    out.push(phi0);
    if n_max == 0 {
        return out;
    }
    out.push(T::of(2.0).sqrt() * q * phi0);
    for k in 1..n_max {
        let kt = T::of_usize(k);
        let next = (T::of(2.0) / (kt + T::one())).sqrt() * q * out[k] - (kt / (kt + T::one())).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Real Fock coefficients c₀ … c_{n_max}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockExpansion<T> {
    coeffs: Vec<T>,
    captured: T,
    low_capture: bool,
}

impl<T: Real> FockExpansion<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        let captured: T = coeffs.iter().map(|c| *c * *c).sum();
        if captured > T::one() + T::of(1e-9) {
            return Err(Error::InvalidParameter(format!("Fock probabilities sum to {captured} > 1")));
        }
        Ok(Self {
            low_capture: captured < T::one() - T::of(CAPTURE_EPS),
            coeffs,
            captured,
        })
    }

    /// From sparse `(n, cₙ)` rows.
    pub fn from_rows(rows: &[(usize, T)]) -> Result<Self> {
        let n_max = rows.iter().map(|r| r.0).max().unwrap_or(0);
        let mut coeffs = vec![T::zero(); n_max + 1];
        for &(n, c) in rows {
            coeffs[n] += c;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Σ cₙ².
    pub fn captured(&self) -> T {
        self.captured
    }

    /// Set when the captured probability is below `1 − CAPTURE_EPS`.
    pub fn low_capture(&self) -> bool {
        self.low_capture
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.coeffs.iter().map(|c| *c * *c).collect()
    }

    /// Non-zero `(n, cₙ)` rows.
    pub fn rows(&self) -> Vec<(usize, T)> {
        self.coeffs.iter().copied().enumerate().filter(|(_, c)| *c != T::zero()).collect()
    }

    /// Keeps only the orders `n ≡ residue (mod 4)`.
    pub fn restricted_mod4(&self, residue: usize) -> Result<Self> {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 4 == residue % 4 { c } else { T::zero() })
            .collect();
        Self::new(c)
    }

    pub fn normalized(&self) -> Result<Self> {
        if self.captured <= T::zero() {
            return Err(Error::DegenerateWavefunction);
        }
        let s = self.captured.sqrt().recip();
        Self::new(self.coeffs.iter().map(|c| *c * s).collect())
    }

    pub fn to_wavefunction(&self) -> Wavefunction<T> {
        Wavefunction::from_real_fock(&self.coeffs)
    }

    /// Residues mod 4 of the non-zero orders.
    pub fn support_mod4(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.rows().iter().map(|(n, _)| n % 4).collect();
        r.sort_unstable();
        r.dedup();
        r
    }
}

/// cₙ = ⟨φₙ|ψ⟩ for n ≤ n_max.
///
/// Gaussian terms are projected in closed form: with I₀ the Gaussian
/// overlap with φ₀ and c̃ = c + iκσ² the complex center of a term,
///
/// ```text
/// Iₙ₊₁ = [c̃ Iₙ − (1 − σ²) √(n/2) Iₙ₋₁] / ((1 + σ²) √((n+1)/2)),
/// ```
///
/// which follows from integrating φₙ′ against the term by parts.
pub fn decompose<T: Real>(psi: &Wavefunction<T>, n_max: usize) -> Result<FockExpansion<T>> {
    let coeffs = project_complex(psi, n_max);
    let scale = coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let imag = coeffs.iter().map(|c| c.im.abs()).fold(T::zero(), T::max);
    if imag > T::of(1e-9) * scale.max(T::one()) {
        return Err(Error::NotReal(imag.to_f64().unwrap_or(f64::NAN)));
    }
    FockExpansion::new(coeffs.into_iter().map(|c| c.re).collect())
}

fn project_complex<T: Real>(psi: &Wavefunction<T>, n_max: usize) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    match psi.representation() {
        Representation::Fock(c) => (0..=n_max).map(|n| c.get(n).copied().unwrap_or(zero)).collect(),
        Representation::Gaussians(terms) => {
            let mut total = vec![zero; n_max + 1];
            let ground = GaussianTerm::real(T::PI().powf(T::of(-0.25)), T::zero(), T::one()).expect("unit width");
            for t in terms {
                let v = t.width * t.width;
                let center = Complex::new(t.center, t.linear_phase * v);
                let up = T::one() + v;
                let down = T::one() - v;
                let mut prev = zero;
                let mut cur = ground.overlap(t);
                total[0] += cur;
                for n in 0..n_max {
                    let nt = T::of_usize(n);
                    let next = (center * cur - prev * (down * (nt * T::of(0.5)).sqrt()))
                        / (up * ((nt + T::one()) * T::of(0.5)).sqrt());
                    prev = cur;
                    cur = next;
                    total[n + 1] += cur;
                }
            }
            total
        }
    }
}

/// Result of [`fock_state_s`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockBell<T> {
    pub s: T,
    pub v: T,
    pub w: T,
    pub theta_m: T,
    pub analysis: BellAnalysis<T>,
}

/// Optimal CHSH value for the pair (f, g) given as Fock expansions.
///
/// When f lives on n ≡ 0 (mod 4) and g on n ≡ 1 (mod 4) both are Fourier
/// eigenvectors, so W = V and S = 2√2 V²; this is checked to 1e−6.
pub fn fock_state_s<T: Real>(f: &FockExpansion<T>, g: &FockExpansion<T>) -> Result<FockBell<T>> {
    let fw = f.to_wavefunction();
    let gw = g.to_wavefunction();
    if fw.parity() != Parity::Even {
        return Err(Error::Parity("f must be supported on even Fock orders".into()));
    }
    if gw.parity() != Parity::Odd {
        return Err(Error::Parity("g must be supported on odd Fock orders".into()));
    }
    let fw = fw.normalize()?;
    let gw = gw.normalize()?;
    let analysis = bell::analyze(&fw, &gw)?;
    if f.support_mod4() == [0] && g.support_mod4() == [1] {
        let tsirelson = T::of(2.0) * T::SQRT_2() * analysis.v * analysis.v;
        if (analysis.w - analysis.v).abs() > T::of(1e-6) || (analysis.s_max - tsirelson).abs() > T::of(1e-6) {
            return Err(Error::Inconsistent(format!(
                "Fourier-eigenvector pair gave V = {}, W = {}, S = {}",
                analysis.v, analysis.w, analysis.s_max
            )));
        }
    }
    Ok(FockBell {
        s: analysis.s_max,
        v: analysis.v,
        w: analysis.w,
        theta_m: analysis.theta_m,
        analysis,
    })
}
