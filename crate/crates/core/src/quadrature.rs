//! Quadrature rules: Gauss–Legendre, Gauss–Hermite and a globally adaptive
//! Gauss–Kronrod 7/15 integrator.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes and weights of an n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let half = n.div_ceil(2);
    let nt = T::of_usize(n);
    for i in 0..half {
        let mut x = (T::PI() * (T::of_usize(i) + T::of(0.75)) / (nt + T::of(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * T::of(4.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kt = T::of_usize(k);
        let p2 = ((kt + kt - T::one()) * x * p1 - (kt - T::one()) * p0) / kt;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let d = T::of_usize(n) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// A Gauss–Legendre rule mapped onto [a, b].
#[derive(Debug, Clone)]
pub struct MappedRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> MappedRule<T> {
    pub fn new(reference: &(Vec<T>, Vec<T>), a: T, b: T) -> Self {
        let half = (b - a) * T::of(0.5);
        let mid = (b + a) * T::of(0.5);
        let nodes = reference.0.iter().map(|&x| mid + half * x).collect();
        let weights = reference.1.iter().map(|&w| w * half).collect();
        Self { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Nodes and *function* weights of the n-point Gauss–Hermite rule.
///
/// The weights λᵢ = wᵢ·e^{xᵢ²} = 1/(n φₙ₋₁(xᵢ)²) integrate F over the real
/// line directly, `∫ F ≈ Σ λᵢ F(xᵢ)`, exactly when F is a polynomial of
/// degree < 2n times e^{−q²}. φ are the orthonormal Hermite functions.
pub fn gauss_hermite<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "Gauss–Hermite rule needs at least one node");
    let m = n.div_ceil(2);
    let nt = T::of_usize(n);
    let mut roots: Vec<T> = Vec::with_capacity(m);
    let mut weights: Vec<T> = Vec::with_capacity(m);
    let mut z = T::zero();
    for i in 0..m {
        z = match i {
            0 => {
                let t = nt + nt + T::one();
                t.sqrt() - T::of(1.85575) * t.powf(T::of(-1.0 / 6.0))
            }
            1 => z - T::of(1.14) * nt.powf(T::of(0.426)) / z,
            2 => T::of(1.86) * z - T::of(0.86) * roots[0],
            3 => T::of(1.91) * z - T::of(0.91) * roots[1],
            _ => T::of(2.0) * z - roots[i - 2],
        };
        let mut prev = T::zero();
        for _ in 0..200 {
            let (pn, pn1) = hermite_pair(n, z);
            let deriv = (nt + nt).sqrt() * pn1 - z * pn;
            let dz = pn / deriv;
            z -= dz;
            prev = pn1;
            if dz.abs() <= T::epsilon() * T::of(8.0) * z.abs().max(T::one()) {
                break;
            }
        }
        let (_, pn1) = hermite_pair(n, z);
        let pn1 = if pn1 == T::zero() { prev } else { pn1 };
        roots.push(z);
        weights.push(T::one() / (nt * pn1 * pn1));
    }
    let mut nodes = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    for i in 0..m {
        nodes[i] = roots[i];
        nodes[n - 1 - i] = -roots[i];
        w[i] = weights[i];
        w[n - 1 - i] = weights[i];
    }
    // Ascending order.
    nodes.reverse();
    w.reverse();
    (nodes, w)
}

/// (φₙ(x), φₙ₋₁(x)) via the orthonormal three-term recurrence.
fn hermite_pair<T: Real>(n: usize, x: T) -> (T, T) {
    let mut prev = T::zero();
    let mut cur = T::PI().powf(T::of(-0.25)) * (-x * x * T::of(0.5)).exp();
    for k in 1..=n {
        let kt = T::of_usize(k);
        let next = x * (T::of(2.0) / kt).sqrt() * cur - ((kt - T::one()) / kt).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let center = (a + b) * T::of(0.5);
    let half = (b - a) * T::of(0.5);
    let fc = f(center);
    let mut kronrod = fc * T::of(WGK[7]);
    let mut gauss = fc * T::of(WG[3]);
    for j in 0..7 {
        let dx = half * T::of(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        kronrod += T::of(WGK[j]) * s;
        if j % 2 == 1 {
            gauss += T::of(WG[j / 2]) * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod 7/15 integration of `f` on [a, b] to an
/// absolute error estimate of `abs_tol`.
///
/// A single starting panel can miss features much narrower than b − a;
/// use [`integrate_panels`] when their scale is known.
pub fn integrate<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, abs_tol: T) -> Result<T> {
    integrate_with_limit(&mut f, a, b, abs_tol, 1, 2000)
}

/// Same as [`integrate`], starting from `panels` equal panels.
pub fn integrate_panels<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, abs_tol: T, panels: usize) -> Result<T> {
    integrate_with_limit(&mut f, a, b, abs_tol, panels, 2000 + panels)
}

pub fn integrate_with_limit<T: Real>(
    f: &mut impl FnMut(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    panels: usize,
    max_intervals: usize,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let panels = panels.clamp(1, max_intervals.max(1));
    let h = (b - a) / T::of_usize(panels);
    let mut segments = Vec::with_capacity(panels);
    let mut total = T::zero();
    let mut error = T::zero();
    for k in 0..panels {
        let lo = a + h * T::of_usize(k);
        let hi = if k + 1 == panels { b } else { lo + h };
        let (v, e) = gk15(f, lo, hi);
        total += v;
        error += e;
        segments.push((lo, hi, v, e));
    }
    // Below this the error estimate is pure rounding noise.
    let noise = T::epsilon() * T::of(50.0);
    while error > abs_tol && error > noise * total.abs() {
        if segments.len() >= max_intervals {
            return Err(Error::Quadrature {
                achieved: error.to_f64().unwrap_or(f64::NAN),
                requested: abs_tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (idx, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, s)| if s.3 > best.1 { (i, s.3) } else { best });
        let (lo, hi, v, _) = segments.swap_remove(idx);
        let mid = (lo + hi) * T::of(0.5);
        if mid <= lo || mid >= hi {
            // Interval cannot be split further in this precision.
            segments.push((lo, hi, v, T::zero()));
            error = segments.iter().map(|s| s.3).sum();
            continue;
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
        total = segments.iter().map(|s| s.2).sum();
        error = segments.iter().map(|s| s.3).sum();
    }
    Ok(total)
}

/// Complex-valued counterpart of [`integrate`]; real and imaginary parts
/// share the tolerance.
pub fn integrate_complex<T: Real>(
    mut f: impl FnMut(T) -> Complex<T>,
    a: T,
    b: T,
    abs_tol: T,
) -> Result<Complex<T>> {
    let re = integrate(|x| f(x).re, a, b, abs_tol)?;
    let im = integrate(|x| f(x).im, a, b, abs_tol)?;
    Ok(Complex::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 16, 64] {
            let rule = gauss_legendre::<f64>(n);
            let wsum: f64 = rule.1.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n}");
            let deg = 2 * n - 1;
            let got: f64 = rule.0.iter().zip(&rule.1).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let want = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((got - want).abs() < 1e-13, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn hermite_rule_integrates_gaussian_moments() {
        let (x, w) = gauss_hermite::<f64>(40);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        let m0: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x).exp()).sum();
        assert!((m0 - PI.sqrt()).abs() < 1e-13);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4) * (-x * x).exp()).sum();
        assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-12);
        // A wider Gaussian.
        let wide: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x / 2.0).exp()).sum();
        assert!((wide - (2.0 * PI).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn hermite_rule_large_order() {
        let (x, w) = gauss_hermite::<f64>(200);
        let m0: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x).exp()).sum();
        assert!((m0 - PI.sqrt()).abs() < 1e-11, "{m0}");
    }

    #[test]
    fn adaptive_handles_kinks_and_peaks() {
        let v = integrate(|x: f64| x.abs(), -1.0, 2.0, 1e-12).unwrap();
        assert!((v - 2.5).abs() < 1e-12);
        let v = integrate_panels(|x: f64| (-(x - 3.0).powi(2) * 200.0).exp(), -20.0, 20.0, 1e-13, 16).unwrap();
        assert!((v - (PI / 200.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_reports_failure() {
        let err = integrate_with_limit(&mut |x: f64| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-15, 1, 10);
        assert!(matches!(err, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn mapped_rule() {
        let rule = MappedRule::new(&gauss_legendre::<f64>(8), 1.0, 3.0);
        let v = rule.integrate(|x| x * x);
        assert!((v - 26.0 / 3.0).abs() < 1e-13);
    }
}
