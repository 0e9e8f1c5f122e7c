//! Even/odd multi-paw cat states and the α scans over them.
//!
//! Peak j of an N-paw state sits at (j + ½)α for j = −N/2 … N/2 − 1 and
//! carries weight cos(π(2j+1)/4) in f and sin(π(2j+1)/4) in g.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::wavefunc::{GaussianTerm, Parity, Wavefunction};

/// Spacing used for the flat-family table.
pub const TABLE1_ALPHA: f64 = 15.0;
/// Squeezing used for the envelope-family table.
pub const TABLE2_SQUEEZING: f64 = 0.3;
pub const DEFAULT_BRACKET: (f64, f64) = (0.5, 5.0);
pub const SCAN_STEP: f64 = 0.02;
pub const GOLDEN_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatKind {
    /// Equal-height peaks of width 1.
    Flat,
    /// Width-s peaks under a Gaussian envelope of width 1/s.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatFamilySpec<T> {
    pub kind: CatKind,
    pub n_paws: usize,
    pub alpha: T,
    pub s: T,
}

impl<T: Real> CatFamilySpec<T> {
    pub fn flat(n_paws: usize, alpha: T) -> Self {
        Self {
            kind: CatKind::Flat,
            n_paws,
            alpha,
            s: T::one(),
        }
    }

    pub fn envelope(n_paws: usize, alpha: T, s: T) -> Self {
        Self {
            kind: CatKind::Envelope,
            n_paws,
            alpha,
            s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paws < 2 || !self.n_paws.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("paw count must be even and >= 2, got {}", self.n_paws)));
        }
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        match self.kind {
            CatKind::Flat if self.s != T::one() => {
                Err(Error::InvalidParameter(format!("flat family has width 1, got s = {}", self.s)))
            }
            CatKind::Envelope if !(self.s > T::zero() && self.s <= T::one()) => {
                Err(Error::InvalidParameter(format!("s must lie in (0, 1], got {}", self.s)))
            }
            _ => Ok(()),
        }
    }

    /// Whether the paw count is enough for tolerance `epsilon`.
    pub fn satisfies_truncation(&self, epsilon: T) -> Result<bool> {
        Ok(self.n_paws >= min_paws(epsilon, self.alpha, self.s)?)
    }

    /// Normalized (f, g).
    pub fn build(&self) -> Result<(Wavefunction<T>, Wavefunction<T>)> {
        self.validate()?;
        match self.kind {
            CatKind::Flat => cat_flat(self.n_paws, self.alpha),
            CatKind::Envelope => cat_envelope(self.n_paws, self.alpha, self.s),
        }
    }

    pub fn s_max(&self) -> Result<T> {
        let (f, g) = self.build()?;
        Ok(bell::analyze(&f, &g)?.s_max)
    }
}

/// Peak centers and (f, g) weights.
pub fn peaks<T: Real>(n_paws: usize, alpha: T) -> Vec<(T, T, T)> {
    let half = (n_paws / 2) as i64;
    (-half..half)
        .map(|j| {
            let k = T::of((2 * j + 1) as f64);
            let (sin, cos) = (T::FRAC_PI_4() * k).sin_cos();
            ((T::of(j as f64) + T::of(0.5)) * alpha, cos, sin)
        })
        .collect()
}

fn assemble<T: Real>(terms_f: Vec<GaussianTerm<T>>, terms_g: Vec<GaussianTerm<T>>) -> Result<(Wavefunction<T>, Wavefunction<T>)> {
    let f = Wavefunction::from_terms(terms_f).normalize()?.with_parity(Parity::Even);
    let g = Wavefunction::from_terms(terms_g).normalize()?.with_parity(Parity::Odd);
    Ok((f, g))
}

/// Two-paw cat with peaks at ±a.
pub fn cat2<T: Real>(a: T) -> Result<(Wavefunction<T>, Wavefunction<T>)> {
    if !(a > T::zero()) {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    cat_flat(2, a + a)
}

pub fn cat_flat<T: Real>(n_paws: usize, alpha: T) -> Result<(Wavefunction<T>, Wavefunction<T>)> {
    CatFamilySpec::flat(n_paws, alpha).validate()?;
    let mut tf = Vec::new();
    let mut tg = Vec::new();
    for (c, wf, wg) in peaks(n_paws, alpha) {
        tf.push(GaussianTerm::real(wf, c, T::one())?);
        tg.push(GaussianTerm::real(wg, c, T::one())?);
    }
    assemble(tf, tg)
}

/// Width-s comb truncated to N teeth, multiplied by exp(−s²q²/2).
///
/// A tooth at c becomes a Gaussian of width s/√(1+s⁴) centered at
/// c/(1+s⁴), scaled by exp(−c²s²/(2(1+s⁴))).
pub fn cat_envelope<T: Real>(n_paws: usize, alpha: T, s: T) -> Result<(Wavefunction<T>, Wavefunction<T>)> {
    CatFamilySpec::envelope(n_paws, alpha, s).validate()?;
    let s2 = s * s;
    let d = T::one() + s2 * s2;
    let width = s / d.sqrt();
    let mut tf = Vec::new();
    let mut tg = Vec::new();
    for (c, wf, wg) in peaks(n_paws, alpha) {
        let damp = (-c * c * s2 / (d + d)).exp();
        tf.push(GaussianTerm::real(wf * damp, c / d, width)?);
        tg.push(GaussianTerm::real(wg * damp, c / d, width)?);
    }
    assemble(tf, tg)
}

/// Smallest even N with N > 2√(2|ln ε|)/(α s).
pub fn min_paws<T: Real>(epsilon: T, alpha: T, s: T) -> Result<usize> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(alpha > T::zero() && s > T::zero()) {
        return Err(Error::InvalidParameter("alpha and s must be positive".into()));
    }
    let bound = (T::of(2.0) * (T::of(2.0) * epsilon.ln().abs()).sqrt() / (alpha * s))
        .to_f64()
        .unwrap_or(f64::INFINITY);
    if !bound.is_finite() {
        return Err(Error::InvalidParameter("paw bound is not finite".into()));
    }
    let mut n = (bound.floor() as usize + 1).max(2);
    if n % 2 == 1 {
        n += 1;
    }
    Ok(n)
}

/// Maximizes S over α for the envelope family.
///
/// Scans the bracket on a 0.02 grid, then refines the best grid point by
/// golden-section search. Fails if the best grid point is a bracket edge.
pub fn optimize_alpha<T: Real>(n_paws: usize, s: T, bracket: (T, T)) -> Result<(T, T)> {
    let (lo, hi) = bracket;
    if !(lo > T::zero() && hi > lo) {
        return Err(Error::InvalidParameter(format!("invalid bracket ({lo}, {hi})")));
    }
    let step = T::of(SCAN_STEP);
    let count = ((hi - lo) / step).floor().to_usize().unwrap_or(0) + 1;
    let s_at = |alpha: T| CatFamilySpec::envelope(n_paws, alpha, s).s_max();
    let grid: Vec<(T, T)> = (0..count)
        .into_par_iter()
        .map(|k| {
            let alpha = lo + step * T::of_usize(k);
            s_at(alpha).map(|v| (alpha, v))
        })
        .collect::<Result<_>>()?;
    let (best, _) = grid
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |acc, (k, &(_, v))| if v > acc.1 { (k, v) } else { acc });
    if best == 0 || best + 1 == grid.len() {
        return Err(Error::BracketTooSmall {
            edge: grid[best].0.to_f64().unwrap_or(f64::NAN),
        });
    }
    golden_max(s_at, grid[best - 1].0, grid[best + 1].0, T::of(GOLDEN_TOL))
}

fn golden_max<T: Real>(f: impl Fn(T) -> Result<T>, mut a: T, mut b: T, tol: T) -> Result<(T, T)> {
    let r = (T::of(5.0).sqrt() - T::one()) * T::of(0.5);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        }
    }
    let x = (a + b) * T::of(0.5);
    let fx = f(x)?;
    Ok([(x1, f1), (x2, f2), (x, fx)].into_iter().fold((x, fx), |acc, p| if p.1 > acc.1 { p } else { acc }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row<T> {
    pub n_paws: usize,
    pub s: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table2Row<T> {
    pub n_paws: usize,
    pub alpha_opt: T,
    pub s: T,
}

/// S for flat cats at α = 15, N = 2, 4, …, 12.
pub fn table1<T: Real>() -> Result<Vec<Table1Row<T>>> {
    (1..=6)
        .into_par_iter()
        .map(|k| {
            let n_paws = 2 * k;
            let s = CatFamilySpec::flat(n_paws, T::of(TABLE1_ALPHA)).s_max()?;
            Ok(Table1Row { n_paws, s })
        })
        .collect()
}

/// Optimal α and S for envelope cats at s = 0.3, N = 4, 6, …, 12.
pub fn table2<T: Real>() -> Result<Vec<Table2Row<T>>> {
    let s = T::of(TABLE2_SQUEEZING);
    let bracket = (T::of(DEFAULT_BRACKET.0), T::of(DEFAULT_BRACKET.1));
    (2..=6)
        .map(|k| {
            let n_paws = 2 * k;
            let (alpha_opt, s_opt) = optimize_alpha(n_paws, s, bracket)?;
            Ok(Table2Row {
                n_paws,
                alpha_opt,
                s: s_opt,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn four_paw_sign_patterns() {
        let p = peaks::<f64>(4, 2.0);
        let sf: Vec<f64> = p.iter().map(|x| x.1.signum()).collect();
        let sg: Vec<f64> = p.iter().map(|x| x.2.signum()).collect();
        assert_eq!(sf, vec![-1.0, 1.0, 1.0, -1.0]);
        assert_eq!(sg, vec![-1.0, -1.0, 1.0, 1.0]);
        let centers: Vec<f64> = p.iter().map(|x| x.0).collect();
        assert_eq!(centers, vec![-3.0, -1.0, 1.0, 3.0]);
        for (_, wf, wg) in p {
            assert!((wf.abs() - wg.abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn families_are_normalized_with_parity() {
        for (f, g) in [
            cat2(0.7_f64).unwrap(),
            cat_flat(6, 3.0).unwrap(),
            cat_envelope(8, 1.8, 0.3).unwrap(),
        ] {
            assert!((f.norm_squared() - 1.0).abs() < 1e-12);
            assert!((g.norm_squared() - 1.0).abs() < 1e-12);
            assert!(f.check_parity(1e-12));
            assert!(g.check_parity(1e-12));
        }
    }

    #[test]
    fn tiny_two_paw_odd_cat_stays_normalizable() {
        let (_, g) = cat2(1e-4_f64).unwrap();
        assert!((g.norm_squared() - 1.0).abs() < 1e-6);
        assert!(g.check_parity(1e-9));
    }

    #[test]
    fn envelope_matches_direct_product() {
        let (alpha, s, n) = (1.8, 0.3, 6usize);
        let (f, g) = cat_envelope(n, alpha, s).unwrap();
        // Envelope times comb of width-s Gaussians, normalized on a fine grid.
        let direct = |q: f64, pick_sin: bool| {
            let comb: f64 = peaks::<f64>(n, alpha)
                .iter()
                .map(|&(c, wf, wg)| (if pick_sin { wg } else { wf }) * (-(q - c).powi(2) / (2.0 * s * s)).exp())
                .sum();
            (-(q * q) * s * s / 2.0).exp() * comb
        };
        for pick_sin in [false, true] {
            let h = 1e-3;
            let norm: f64 = (-20_000..=20_000).map(|k| direct(k as f64 * h, pick_sin).powi(2) * h).sum::<f64>().sqrt();
            let w = if pick_sin { &g } else { &f };
            for k in -80..=80 {
                let q = k as f64 * 0.1;
                assert!((w.evaluate_real(q) - direct(q, pick_sin) / norm).abs() < 1e-10, "q = {q}");
            }
        }
    }

    #[test]
    fn paw_bound() {
        let a = PI.sqrt();
        assert_eq!(min_paws(0.01, a, 0.3).unwrap(), 12);
        assert_eq!(min_paws(0.01, a, 0.6).unwrap(), 6);
        assert_eq!(min_paws(1.0 - 1e-15, a, 0.3).unwrap(), 2);
        assert!(min_paws(0.0, a, 0.3).is_err());
        assert!(min_paws(1.0, a, 0.3).is_err());
    }

    #[test]
    fn validation() {
        assert!(cat_flat::<f64>(3, 1.0).is_err());
        assert!(cat_flat::<f64>(0, 1.0).is_err());
        assert!(cat_flat::<f64>(4, -1.0).is_err());
        assert!(cat_envelope::<f64>(4, 2.0, 1.5).is_err());
        assert!(cat2::<f64>(0.0).is_err());
    }

    #[test]
    fn two_paw_table_row() {
        let (f, g) = cat2(10.0_f64).unwrap();
        let a = bell::analyze(&f, &g).unwrap();
        assert!((a.s_max - 1.895).abs() < 2e-3, "{}", a.s_max);
    }

    #[test]
    fn narrow_bracket_is_rejected() {
        let err = optimize_alpha(4, 0.3, (0.5, 1.0)).unwrap_err();
        assert!(matches!(err, Error::BracketTooSmall { .. }));
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_max(|x: f64| Ok(1.0 - (x - 0.3).powi(2)), 0.0, 1.0, 1e-6).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-12);
    }
}
