//! CHSH correlators for |Ψ⟩ = (|ff⟩ + e^{iθ}|gg⟩)/√2 under root binning.
//!
//! With f even and g odd, all four correlators reduce to two overlaps,
//! V = ∫|f g| dq and W = ∫|f̃ h̃| dp with FT(g) = i h̃:
//!
//! ```text
//! E_qq = V² cos θ    E_pp = −W² cos θ    E_qp = E_pq = −V W sin θ
//! S = |E_qq + E_qp + E_pq − E_pp| = |cos θ (V² + W²) − 2 sin θ V W|
//! ```
//!
//! [`brute_force_correlator`] recomputes each E by integrating the joint
//! quadrature density over the four sign rectangles, without using any of
//! the identities above.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::binning::{self, Interval, Sign, SignedPartition};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, MappedRule};
use crate::scalar::Real;
use crate::wavefunc::{self, Parity, Wavefunction};

/// Tolerance on normalization and parity of a [`TwoModeState`].
pub const STATE_TOL: f64 = 1e-9;
/// Total quadrature budget for V and W.
pub const OVERLAP_TOL: f64 = 1e-9;
/// Gauss–Legendre nodes per interval in the brute-force oracle.
pub const BRUTE_FORCE_NODES: usize = 64;

/// Measured quadrature on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Quadrature {
    Q,
    P,
}

impl std::fmt::Display for Quadrature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quadrature::Q => "q",
            Quadrature::P => "p",
        })
    }
}

/// (|ff⟩ + e^{iθ}|gg⟩)/√2 with f even, g odd, both real and normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState<T> {
    f: Wavefunction<T>,
    g: Wavefunction<T>,
    theta: T,
}

impl<T: Real> TwoModeState<T> {
    pub fn new(f: Wavefunction<T>, g: Wavefunction<T>, theta: T) -> Result<Self> {
        let tol = T::of(STATE_TOL);
        check_parity(&f, Parity::Even, "f")?;
        check_parity(&g, Parity::Odd, "g")?;
        f.check_real(tol)?;
        g.check_real(tol)?;
        for (name, w) in [("f", &f), ("g", &g)] {
            let n = w.norm_squared();
            if (n - T::one()).abs() > tol {
                return Err(Error::InvalidParameter(format!("{name} is not normalized: norm² = {n}")));
            }
        }
        let theta = wrap_phase(theta);
        Ok(Self { f, g, theta })
    }

    pub fn f(&self) -> &Wavefunction<T> {
        &self.f
    }

    pub fn g(&self) -> &Wavefunction<T> {
        &self.g
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn with_theta(&self, theta: T) -> Self {
        Self {
            theta: wrap_phase(theta),
            ..self.clone()
        }
    }

    /// Ψ(x₁, x₂) as a sum of product terms.
    pub fn amplitude(&self) -> TwoModeAmplitude<T> {
        let r = T::FRAC_1_SQRT_2();
        TwoModeAmplitude::new(vec![
            ProductTerm {
                coeff: Complex::new(r, T::zero()),
                first: self.f.clone(),
                second: self.f.clone(),
            },
            ProductTerm {
                coeff: Complex::from_polar(r, self.theta),
                first: self.g.clone(),
                second: self.g.clone(),
            },
        ])
    }
}

/// θ reduced to [0, 2π).
pub fn wrap_phase<T: Real>(theta: T) -> T {
    let tau = T::TAU();
    let r = theta % tau;
    if r < T::zero() {
        r + tau
    } else {
        r
    }
}

fn check_parity<T: Real>(w: &Wavefunction<T>, want: Parity, name: &str) -> Result<()> {
    let ok = match w.parity() {
        p if p == want => true,
        Parity::None => w.clone().with_parity(want).check_parity(T::of(STATE_TOL)),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Parity(format!("{name} must be {want:?}")))
    }
}

/// One product term `coeff · a(x₁) b(x₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm<T> {
    pub coeff: Complex<T>,
    pub first: Wavefunction<T>,
    pub second: Wavefunction<T>,
}

/// A two-mode amplitude Ψ(x₁, x₂) = Σₜ cₜ aₜ(x₁) bₜ(x₂).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeAmplitude<T> {
    terms: Vec<ProductTerm<T>>,
}

impl<T: Real> TwoModeAmplitude<T> {
    pub fn new(terms: Vec<ProductTerm<T>>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[ProductTerm<T>] {
        &self.terms
    }

    /// ⟨self|other⟩ from one-mode inner products.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        let mut total = Complex::new(T::zero(), T::zero());
        for a in &self.terms {
            for b in &other.terms {
                let o1 = a.first.inner_product(&b.first)?;
                let o2 = a.second.inner_product(&b.second)?;
                total += a.coeff.conj() * b.coeff * o1 * o2;
            }
        }
        Ok(total)
    }

    pub fn norm_squared(&self) -> Result<T> {
        Ok(self.inner_product(self)?.re)
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_squared()?.sqrt();
        if !(n > T::min_positive_value()) {
            return Err(Error::DegenerateWavefunction);
        }
        Ok(Self {
            terms: self
                .terms
                .iter()
                .map(|t| ProductTerm {
                    coeff: t.coeff / n,
                    ..t.clone()
                })
                .collect(),
        })
    }

    /// The amplitude expressed in the requested quadratures (Fourier
    /// transforming the momentum sides).
    pub fn in_bases(&self, bases: (Quadrature, Quadrature)) -> Self {
        let tf = |w: &Wavefunction<T>, b: Quadrature| match b {
            Quadrature::Q => w.clone(),
            Quadrature::P => w.fourier_transform(),
        };
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| ProductTerm {
                    coeff: t.coeff,
                    first: tf(&t.first, bases.0),
                    second: tf(&t.second, bases.1),
                })
                .collect(),
        }
    }

    pub fn evaluate(&self, x1: T, x2: T) -> Complex<T> {
        self.terms.iter().map(|t| t.coeff * t.first.evaluate(x1) * t.second.evaluate(x2)).sum()
    }
}

/// ∫_{D⁺} f g − ∫_{D⁻} f g for real f, g.
pub fn overlap_v<T: Real>(f: &Wavefunction<T>, g: &Wavefunction<T>, partition: &SignedPartition<T>) -> Result<T> {
    let tol = T::of(binning::REAL_TOL);
    f.check_real(tol)?;
    g.check_real(tol)?;
    let n = T::of_usize(partition.signs().len());
    let per_interval = T::of(OVERLAP_TOL) / n;
    let mut total = T::zero();
    for iv in partition.intervals() {
        let lo = iv.lo_or(T::neg_infinity());
        let hi = iv.hi_or(T::infinity());
        total += iv.sign.value::<T>() * wavefunc::product_integral(f, g, lo, hi, per_interval)?;
    }
    Ok(total)
}

/// (f̃, h̃) with f̃ = FT(f) and FT(g) = i h̃; both real.
pub fn momentum_pair<T: Real>(f: &Wavefunction<T>, g: &Wavefunction<T>) -> Result<(Wavefunction<T>, Wavefunction<T>)> {
    let ft = f.fourier_transform();
    let gt = g.fourier_transform();
    let tol = T::of(binning::REAL_TOL);
    ft.check_real(tol)?;
    // FT(g) must be purely imaginary: i·FT(g) is then real.
    let rotated = gt.scaled(Complex::new(T::zero(), T::one()));
    if rotated.check_real(tol).is_err() {
        return Err(Error::NotReal(rotated.max_imaginary().to_f64().unwrap_or(f64::NAN)));
    }
    let ht = gt.scaled(Complex::new(T::zero(), -T::one()));
    Ok((ft, ht))
}

/// W = ∫|f̃ h̃| dp, via root binning in momentum space.
pub fn overlap_w<T: Real>(f: &Wavefunction<T>, g: &Wavefunction<T>) -> Result<T> {
    let (ft, ht) = momentum_pair(f, g)?;
    let partition = binning::root_binning_auto(&ft, &ht)?;
    overlap_v(&ft, &ht, &partition)
}

pub fn chsh_s<T: Real>(v: T, w: T, theta: T) -> T {
    (theta.cos() * (v * v + w * w) - T::of(2.0) * theta.sin() * v * w).abs()
}

/// (S, θₘ) with S = √(V⁴ + W⁴ + 6V²W²) and θₘ = atan2(−2VW, V² + W²).
pub fn chsh_s_max<T: Real>(v: T, w: T) -> (T, T) {
    let v2 = v * v;
    let w2 = w * w;
    let s = (v2 * v2 + w2 * w2 + T::of(6.0) * v2 * w2).sqrt();
    let theta_m = (-T::of(2.0) * v * w).atan2(v2 + w2);
    (s, theta_m)
}

/// CHSH combination with E_pp carrying the minus sign.
pub fn assemble_s<T: Real>(e_qq: T, e_pp: T, e_qp: T, e_pq: T) -> T {
    (e_qq + e_qp + e_pq - e_pp).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatorReport<T> {
    pub v: T,
    pub w: T,
    pub e_qq: T,
    pub e_pp: T,
    pub e_qp: T,
    pub e_pq: T,
    pub theta_m: T,
    pub s_at_theta: T,
    pub s_max: T,
}

impl<T: Real> CorrelatorReport<T> {
    pub fn from_overlaps(v: T, w: T, theta: T) -> Self {
        let (s_max, theta_m) = chsh_s_max(v, w);
        let (sin, cos) = theta.sin_cos();
        Self {
            v,
            w,
            e_qq: v * v * cos,
            e_pp: -w * w * cos,
            e_qp: -v * w * sin,
            e_pq: -v * w * sin,
            theta_m,
            s_at_theta: chsh_s(v, w, theta),
            s_max,
        }
    }

    pub fn correlator(&self, bases: (Quadrature, Quadrature)) -> T {
        match bases {
            (Quadrature::Q, Quadrature::Q) => self.e_qq,
            (Quadrature::P, Quadrature::P) => self.e_pp,
            (Quadrature::Q, Quadrature::P) => self.e_qp,
            (Quadrature::P, Quadrature::Q) => self.e_pq,
        }
    }
}

/// Overlaps, partitions and optimal S of a pair (f, g).
#[derive(Debug, Clone, PartialEq)]
pub struct BellAnalysis<T> {
    pub v: T,
    pub w: T,
    pub s_max: T,
    pub theta_m: T,
    pub q_partition: SignedPartition<T>,
    pub p_partition: SignedPartition<T>,
}

/// Root-binning analysis of f (even) and g (odd).
pub fn analyze<T: Real>(f: &Wavefunction<T>, g: &Wavefunction<T>) -> Result<BellAnalysis<T>> {
    let q_partition = binning::root_binning_auto(f, g)?;
    let (ft, ht) = momentum_pair(f, g)?;
    let p_partition = binning::root_binning_auto(&ft, &ht)?;
    finish_analysis(f, g, &ft, &ht, q_partition, p_partition)
}

/// Same as [`analyze`] with caller-supplied binnings, e.g. positive-negative.
pub fn analyze_with_partitions<T: Real>(
    f: &Wavefunction<T>,
    g: &Wavefunction<T>,
    q_partition: SignedPartition<T>,
    p_partition: SignedPartition<T>,
) -> Result<BellAnalysis<T>> {
    let (ft, ht) = momentum_pair(f, g)?;
    finish_analysis(f, g, &ft, &ht, q_partition, p_partition)
}

fn finish_analysis<T: Real>(
    f: &Wavefunction<T>,
    g: &Wavefunction<T>,
    ft: &Wavefunction<T>,
    ht: &Wavefunction<T>,
    q_partition: SignedPartition<T>,
    p_partition: SignedPartition<T>,
) -> Result<BellAnalysis<T>> {
    let v = overlap_v(f, g, &q_partition)?;
    let w = overlap_v(ft, ht, &p_partition)?;
    let (s_max, theta_m) = chsh_s_max(v, w);
    Ok(BellAnalysis {
        v,
        w,
        s_max,
        theta_m,
        q_partition,
        p_partition,
    })
}

pub fn correlators<T: Real>(state: &TwoModeState<T>) -> Result<CorrelatorReport<T>> {
    let a = analyze(&state.f, &state.g)?;
    Ok(CorrelatorReport::from_overlaps(a.v, a.w, state.theta))
}

/// Binned correlation E = P₊₊ + P₋₋ − P₊₋ − P₋₊ and its four probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinnedCorrelation<T> {
    pub e: T,
    pub p_pp: T,
    pub p_pm: T,
    pub p_mp: T,
    pub p_mm: T,
}

impl<T: Real> BinnedCorrelation<T> {
    pub fn total_probability(&self) -> T {
        self.p_pp + self.p_pm + self.p_mp + self.p_mm
    }
}

/// Brute-force E for the chosen quadrature pair, integrating
/// |⟨x₁|⟨x₂|Ψ⟩|² over the four sign-domain products.
///
/// Position sides are binned by root binning of (f, g) and momentum sides
/// by root binning of (f̃, h̃).
pub fn brute_force_correlator<T: Real>(
    state: &TwoModeState<T>,
    bases: (Quadrature, Quadrature),
    tol: T,
) -> Result<BinnedCorrelation<T>> {
    let q_part = binning::root_binning_auto(&state.f, &state.g)?;
    let (ft, ht) = momentum_pair(&state.f, &state.g)?;
    let p_part = binning::root_binning_auto(&ft, &ht)?;
    let pick = |b: Quadrature| match b {
        Quadrature::Q => &q_part,
        Quadrature::P => &p_part,
    };
    brute_force_amplitude(&state.amplitude(), bases, pick(bases.0), pick(bases.1), tol)
}

/// Brute-force binned correlation of an arbitrary two-mode amplitude.
///
/// Each side's partition intervals are clipped to the evaluation window and
/// covered by Gauss–Legendre panels, refined until every panel integrates
/// the side's marginal mass to its share of `tol`. The joint density is
/// then summed over the tensor grid of both sides' nodes.
pub fn brute_force_amplitude<T: Real>(
    amplitude: &TwoModeAmplitude<T>,
    bases: (Quadrature, Quadrature),
    first: &SignedPartition<T>,
    second: &SignedPartition<T>,
    tol: T,
) -> Result<BinnedCorrelation<T>> {
    if !(tol >= T::of(1e-10)) {
        return Err(Error::InvalidParameter(format!("brute-force tolerance must be >= 1e-10, got {tol}")));
    }
    let amp = amplitude.in_bases(bases);
    let rule = gauss_legendre::<T>(BRUTE_FORCE_NODES);
    let side1: Vec<&Wavefunction<T>> = amp.terms.iter().map(|t| &t.first).collect();
    let side2: Vec<&Wavefunction<T>> = amp.terms.iter().map(|t| &t.second).collect();
    let nodes1 = side_nodes(&side1, first, &rule, tol)?;
    let nodes2 = side_nodes(&side2, second, &rule, tol)?;

    // Pre-evaluated mode functions at the nodes, coefficient folded into side 1.
    let a: Vec<Vec<Complex<T>>> = amp
        .terms
        .iter()
        .map(|t| nodes1.iter().map(|n| t.coeff * t.first.evaluate(n.x)).collect())
        .collect();
    let b: Vec<Vec<Complex<T>>> = amp
        .terms
        .iter()
        .map(|t| nodes2.iter().map(|n| t.second.evaluate(n.x)).collect())
        .collect();

    let rows: Vec<[T; 2]> = (0..nodes1.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = [T::zero(); 2];
            for (j, n2) in nodes2.iter().enumerate() {
                let psi: Complex<T> = (0..amp.terms.len()).map(|t| a[t][i] * b[t][j]).sum();
                let k = usize::from(n2.sign == Sign::Minus);
                acc[k] += n2.w * psi.norm_sqr();
            }
            [acc[0] * nodes1[i].w, acc[1] * nodes1[i].w]
        })
        .collect();

    let mut p = [[T::zero(); 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let k = usize::from(nodes1[i].sign == Sign::Minus);
        p[k][0] += row[0];
        p[k][1] += row[1];
    }
    let (p_pp, p_pm, p_mp, p_mm) = (p[0][0], p[0][1], p[1][0], p[1][1]);
    Ok(BinnedCorrelation {
        e: p_pp + p_mm - p_pm - p_mp,
        p_pp,
        p_pm,
        p_mp,
        p_mm,
    })
}

/// Four correlators by brute force and the CHSH value assembled from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BruteForceChsh<T> {
    pub e_qq: BinnedCorrelation<T>,
    pub e_pp: BinnedCorrelation<T>,
    pub e_qp: BinnedCorrelation<T>,
    pub e_pq: BinnedCorrelation<T>,
    pub s: T,
}

pub fn brute_force_chsh<T: Real>(
    amplitude: &TwoModeAmplitude<T>,
    q_partition: &SignedPartition<T>,
    p_partition: &SignedPartition<T>,
    tol: T,
) -> Result<BruteForceChsh<T>> {
    use Quadrature::{P, Q};
    let part = |b: Quadrature| match b {
        Q => q_partition,
        P => p_partition,
    };
    let run = |b: (Quadrature, Quadrature)| brute_force_amplitude(amplitude, b, part(b.0), part(b.1), tol);
    let e_qq = run((Q, Q))?;
    let e_pp = run((P, P))?;
    let e_qp = run((Q, P))?;
    let e_pq = run((P, Q))?;
    Ok(BruteForceChsh {
        s: assemble_s(e_qq.e, e_pp.e, e_qp.e, e_pq.e),
        e_qq,
        e_pp,
        e_qp,
        e_pq,
    })
}

struct Node<T> {
    x: T,
    w: T,
    sign: Sign,
}

fn side_nodes<T: Real>(
    funcs: &[&Wavefunction<T>],
    partition: &SignedPartition<T>,
    rule: &(Vec<T>, Vec<T>),
    tol: T,
) -> Result<Vec<Node<T>>> {
    let window = funcs.iter().map(|w| w.eval_window()).fold(T::zero(), T::max);
    let mass = |x: T| funcs.iter().map(|w| w.evaluate(x).norm_sqr()).sum::<T>();
    let mut nodes = Vec::new();
    let clipped: Vec<Interval<T>> = partition
        .intervals()
        .filter_map(|iv| {
            let lo = iv.lo_or(-window).max(-window);
            let hi = iv.hi_or(window).min(window);
            (lo < hi).then_some(Interval {
                lo: Some(lo),
                hi: Some(hi),
                sign: iv.sign,
            })
        })
        .collect();
    let span = window + window;
    for iv in clipped {
        let (lo, hi) = (iv.lo.expect("clipped"), iv.hi.expect("clipped"));
        let mut stack = vec![(lo, hi, 0usize)];
        while let Some((a, b, depth)) = stack.pop() {
            let whole = MappedRule::new(rule, a, b);
            let mid = (a + b) * T::of(0.5);
            let left = MappedRule::new(rule, a, mid);
            let right = MappedRule::new(rule, mid, b);
            let coarse = whole.integrate(mass);
            let fine = left.integrate(mass) + right.integrate(mass);
            let allowed = tol * T::of(0.1) * (b - a) / span;
            if (coarse - fine).abs() <= allowed {
                for (x, w) in whole.nodes.into_iter().zip(whole.weights) {
                    nodes.push(Node { x, w, sign: iv.sign });
                }
            } else if depth >= 40 {
                return Err(Error::Quadrature {
                    achieved: (coarse - fine).abs().to_f64().unwrap_or(f64::NAN),
                    requested: allowed.to_f64().unwrap_or(f64::NAN),
                });
            } else {
                stack.push((mid, b, depth + 1));
                stack.push((a, mid, depth + 1));
            }
        }
    }
    Ok(nodes)
}
