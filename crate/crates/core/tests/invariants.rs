use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use proptest::prelude::*;

use cvbell::bell;
use cvbell::binning::{self, Sign};
use cvbell::catstates::CatFamilySpec;
use cvbell::fock::FockExpansion;
use cvbell::prepsim::{self, HybridState};
use cvbell::quadrature;
use cvbell::{GaussianTerm, Wavefunction};

fn term() -> impl Strategy<Value = GaussianTerm<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -6.0..6.0f64, 0.3..2.0f64, -2.0..2.0f64).prop_map(|(re, im, c, w, k)| {
        GaussianTerm::new(Complex64::new(re, im), c, w).unwrap().with_linear_phase(k)
    })
}

fn gaussian_sum() -> impl Strategy<Value = Wavefunction<f64>> {
    prop::collection::vec(term(), 1..=8).prop_map(Wavefunction::from_terms)
}

/// Real even f and real odd g built from mirrored peaks.
fn parity_pair() -> impl Strategy<Value = (Wavefunction<f64>, Wavefunction<f64>)> {
    prop::collection::vec((0.2..1.0f64, -1.0..1.0f64, 0.5..6.0f64, 0.5..1.5f64), 1..=3).prop_map(|peaks| {
        let mut f = Vec::new();
        let mut g = Vec::new();
        for (a, b, c, w) in peaks {
            for sign in [1.0, -1.0] {
                f.push(GaussianTerm::real(a, sign * c, w).unwrap());
                g.push(GaussianTerm::real(sign * b, sign * c, w).unwrap());
            }
        }
        (Wavefunction::from_terms(f), Wavefunction::from_terms(g))
    })
}

#[derive(Debug, Clone)]
enum Gate {
    H(usize),
    Cnot(usize),
    X(usize),
    Phase(usize, f64),
    Disp(usize, usize, f64),
    Lambda(usize, usize, f64),
}

fn gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..2usize).prop_map(Gate::H),
        (0..2usize).prop_map(Gate::Cnot),
        (0..2usize).prop_map(Gate::X),
        (0..2usize, -PI..PI).prop_map(|(q, p)| Gate::Phase(q, p)),
        (0..2usize, 0..2usize, -4.0..4.0f64).prop_map(|(q, m, d)| Gate::Disp(q, m, d)),
        (0..2usize, 0..2usize, 1.0..12.0f64).prop_map(|(q, m, a)| Gate::Lambda(q, m, a)),
    ]
}

fn apply(st: &HybridState<f64>, g: &Gate) -> HybridState<f64> {
    match *g {
        Gate::H(q) => prepsim::hadamard(st, q),
        Gate::Cnot(q) => prepsim::cnot(st, q, 1 - q),
        Gate::X(q) => prepsim::bit_flip(st, q),
        Gate::Phase(q, p) => prepsim::phase(st, q, p),
        Gate::Disp(q, m, d) => prepsim::cond_displacement(st, q, m, d),
        Gate::Lambda(q, m, a) => prepsim::lambda_gate(st, q, m, a),
    }
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_inner_product_matches_quadrature(a in gaussian_sum(), b in gaussian_sum()) {
        let closed = a.inner_product(&b).unwrap();
        let w = a.eval_window().max(b.eval_window());
        let numeric = quadrature::integrate_complex(|q| a.evaluate(q).conj() * b.evaluate(q), -w, w, 1e-11).unwrap();
        prop_assert!((closed - numeric).norm() < 1e-8, "{closed} vs {numeric}");
    }

    #[test]
    fn inner_product_is_hermitian(a in gaussian_sum(), b in gaussian_sum()) {
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn overlaps_obey_cauchy_schwarz((f, g) in parity_pair()) {
        let f = f.normalize().unwrap();
        let g = g.normalize().unwrap();
        let a = bell::analyze(&f, &g).unwrap();
        prop_assert!(a.v >= -1e-9 && a.v <= 1.0 + 1e-9, "V={}", a.v);
        prop_assert!(a.w >= -1e-9 && a.w <= 1.0 + 1e-9, "W={}", a.w);
    }

    #[test]
    fn root_binning_agrees_with_product_sign((f, g) in parity_pair(), offset in 0.0..1.0f64) {
        let part = binning::root_binning_auto(&f, &g).unwrap();
        let w = f.eval_window().max(g.eval_window());
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        for k in 0..10_000 {
            let u = (offset + k as f64 * golden).fract();
            let q = -w + 2.0 * w * u;
            let p = f.evaluate_real(q) * g.evaluate_real(q);
            if p.abs() < 1e-12 {
                continue;
            }
            let want = if p > 0.0 { Sign::Plus } else { Sign::Minus };
            let near_root = part.breakpoints().iter().any(|b| (b - q).abs() < 1e-9);
            prop_assert!(near_root || binning::classify(&part, q) == want, "q={q}");
        }
    }

    #[test]
    fn root_binning_is_antisymmetric_for_opposite_parity((f, g) in parity_pair(), q in 0.01..12.0f64) {
        let part = binning::root_binning_auto(&f, &g).unwrap();
        let p = f.evaluate_real(q) * g.evaluate_real(q);
        prop_assume!(p.abs() > 1e-12);
        prop_assume!(part.breakpoints().iter().all(|b| (b.abs() - q).abs() > 1e-9));
        prop_assert_eq!(binning::classify(&part, q), binning::classify(&part, -q).flip());
    }

    #[test]
    fn s_max_dominates_every_angle(v in 0.0..1.0f64, w in 0.0..1.0f64, theta in 0.0..2.0 * PI) {
        let (s_max, theta_m) = bell::chsh_s_max(v, w);
        prop_assert!(s_max + 1e-12 >= bell::chsh_s(v, w, theta));
        prop_assert!(s_max <= 2.0 * SQRT_2 + 1e-12);
        prop_assert!((bell::chsh_s(v, w, theta_m) - s_max).abs() < 1e-8);
        let r = bell::CorrelatorReport::from_overlaps(v, w, theta);
        prop_assert!((bell::assemble_s(r.e_qq, r.e_pp, r.e_qp, r.e_pq) - r.s_at_theta).abs() < 1e-12);
    }

    #[test]
    fn root_binning_beats_positive_negative(n in prop::sample::select(vec![2usize, 4, 6]), alpha in 2.0..15.0f64) {
        let (f, g) = CatFamilySpec::flat(n, alpha).build().unwrap();
        let root = bell::analyze(&f, &g).unwrap();
        let pn = bell::analyze_with_partitions(&f, &g, binning::pn_binning(), binning::pn_binning()).unwrap();
        prop_assert!(root.s_max + 1e-9 >= pn.s_max, "{} < {}", root.s_max, pn.s_max);
    }

    #[test]
    fn gates_preserve_norm(seq in prop::collection::vec(gate(), 1..12)) {
        let mut st = prepsim::init(2, 2, 1.0).unwrap();
        for g in &seq {
            st = apply(&st, g);
            prop_assert!((st.norm_squared().unwrap() - 1.0).abs() < 1e-9, "{g:?}");
        }
        let h2 = prepsim::hadamard(&prepsim::hadamard(&st, 0).unwrap(), 0).unwrap();
        prop_assert!(h2.distance(&st).unwrap() < 1e-9);
        let total: f64 = [0u8, 1]
            .iter()
            .map(|&o| prepsim::measure_qubit(&st, 1, o).map(|r| r.0).unwrap_or(0.0))
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "{total}");
    }

    #[test]
    fn mod4_supports_are_fourier_eigenvectors(residue in 0usize..4, raw in prop::collection::vec(-1.0..1.0f64, 1..5)) {
        let mut coeffs = vec![0.0; 4 * raw.len()];
        for (k, c) in raw.iter().enumerate() {
            coeffs[4 * k + residue] = *c;
        }
        let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        coeffs.iter_mut().for_each(|c| *c /= norm);
        let e = FockExpansion::new(coeffs).unwrap();
        let psi = e.to_wavefunction();
        let ft = psi.fourier_transform();
        let eig = Complex64::new(0.0, -1.0).powu(residue as u32);
        for (a, b) in psi.fock_coeffs().unwrap().iter().zip(ft.fock_coeffs().unwrap()) {
            prop_assert!((a * eig - b).norm() < 1e-15);
        }
    }
}
