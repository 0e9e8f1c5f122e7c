//! Exact simulation of qubit-controlled cat-state preparation.
//!
//! A [`HybridState`] is a superposition over qubit basis strings, each
//! carrying a sum of mode products with Gaussian-sum factors. Every gate
//! used by the protocols maps Gaussian sums to Gaussian sums, so runs are
//! exact up to floating point.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex;
use serde::Serialize;

use crate::bell::{self, ProductTerm, TwoModeAmplitude};
use crate::catstates;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::wavefunc::Wavefunction;

/// Outcomes with probability below this are rejected.
pub const IMPOSSIBLE_PROB: f64 = 1e-12;
/// Smallest spacing for which peaks are treated as separated.
pub const MIN_PROTOCOL_ALPHA: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeProduct<T> {
    pub amp: Complex<T>,
    pub modes: Vec<Wavefunction<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch<T> {
    pub bits: Vec<u8>,
    pub terms: Vec<ModeProduct<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridState<T> {
    n_qubits: usize,
    n_modes: usize,
    branches: Vec<Branch<T>>,
}

fn product_overlap<T: Real>(a: &ModeProduct<T>, b: &ModeProduct<T>) -> Result<Complex<T>> {
    let mut acc = a.amp.conj() * b.amp;
    for (x, y) in a.modes.iter().zip(&b.modes) {
        acc *= x.inner_product(y)?;
    }
    Ok(acc)
}

/// All qubits |0⟩, every mode a width-s vacuum.
pub fn init<T: Real>(n_qubits: usize, n_modes: usize, s: T) -> Result<HybridState<T>> {
    if !(s > T::zero()) {
        return Err(Error::InvalidParameter(format!("squeezing width must be positive, got {s}")));
    }
    let vac = Wavefunction::vacuum(s)?;
    Ok(HybridState {
        n_qubits,
        n_modes,
        branches: vec![Branch {
            bits: vec![0; n_qubits],
            terms: vec![ModeProduct {
                amp: Complex::new(T::one(), T::zero()),
                modes: vec![vac; n_modes],
            }],
        }],
    })
}

/// A state from explicit branches; same-bit branches are merged and the
/// total norm must be 1.
pub fn from_branches<T: Real>(n_qubits: usize, n_modes: usize, branches: Vec<Branch<T>>) -> Result<HybridState<T>> {
    for b in &branches {
        if b.bits.len() != n_qubits || b.bits.iter().any(|&x| x > 1) {
            return Err(Error::InvalidParameter(format!("bad bit string {:?}", b.bits)));
        }
        if b.terms.iter().any(|t| t.modes.len() != n_modes) {
            return Err(Error::InvalidParameter(format!("every term needs {n_modes} modes")));
        }
    }
    let st = HybridState::merged(n_qubits, n_modes, branches)?;
    let n = st.norm_squared()?;
    if (n - T::one()).abs() > T::of(1e-9) {
        return Err(Error::InvalidParameter(format!("state norm² is {n}, expected 1")));
    }
    Ok(st)
}

impl<T: Real> HybridState<T> {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn branches(&self) -> &[Branch<T>] {
        &self.branches
    }

    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        let mut total = Complex::new(T::zero(), T::zero());
        for a in &self.branches {
            for b in other.branches.iter().filter(|b| b.bits == a.bits) {
                for ta in &a.terms {
                    for tb in &b.terms {
                        total += product_overlap(ta, tb)?;
                    }
                }
            }
        }
        Ok(total)
    }

    pub fn norm_squared(&self) -> Result<T> {
        Ok(self.inner_product(self)?.re)
    }

    /// ‖self − other‖.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if (self.n_qubits, self.n_modes) != (other.n_qubits, other.n_modes) {
            return Err(Error::InvalidParameter("states have different shapes".into()));
        }
        let minus = Complex::new(-T::one(), T::zero());
        let negated = other.branches.iter().map(|b| Branch {
            bits: b.bits.clone(),
            terms: b
                .terms
                .iter()
                .map(|t| ModeProduct {
                    amp: t.amp * minus,
                    modes: t.modes.clone(),
                })
                .collect(),
        });
        let diff = Self::merged(self.n_qubits, self.n_modes, self.branches.iter().cloned().chain(negated))?;
        Ok(diff.norm_squared()?.max(T::zero()).sqrt())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.n_qubits {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                what: "qubit",
                index: q,
                limit: self.n_qubits,
            })
        }
    }

    fn check_mode(&self, m: usize) -> Result<()> {
        if m < self.n_modes {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                what: "mode",
                index: m,
                limit: self.n_modes,
            })
        }
    }

    /// Collects same-bit branches and combines equal mode products.
    fn merged(n_qubits: usize, n_modes: usize, branches: impl IntoIterator<Item = Branch<T>>) -> Result<Self> {
        let mut groups: BTreeMap<Vec<u8>, Vec<ModeProduct<T>>> = BTreeMap::new();
        for b in branches {
            groups.entry(b.bits).or_default().extend(b.terms);
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = Vec::with_capacity(groups.len());
        for (bits, terms) in groups {
            let terms = if n_modes == 1 {
                let mut sum: Option<Wavefunction<T>> = None;
                for t in terms {
                    let w = t.modes[0].scaled(t.amp);
                    sum = Some(match sum {
                        Some(s) => s.add(&w)?,
                        None => w.simplified(),
                    });
                }
                sum.filter(|w| w.terms().is_none_or(|t| !t.is_empty()))
                    .map(|w| {
                        vec![ModeProduct {
                            amp: Complex::new(T::one(), T::zero()),
                            modes: vec![w],
                        }]
                    })
                    .unwrap_or_default()
            } else {
                let mut acc: Vec<ModeProduct<T>> = Vec::new();
                for t in terms {
                    match acc.iter_mut().find(|a| a.modes == t.modes) {
                        Some(a) => a.amp += t.amp,
                        None => acc.push(t),
                    }
                }
                acc.retain(|t| t.amp != zero);
                acc
            };
            if !terms.is_empty() {
                out.push(Branch { bits, terms });
            }
        }
        Ok(Self {
            n_qubits,
            n_modes,
            branches: out,
        })
    }

    fn map_branches(&self, f: impl Fn(&Branch<T>) -> Result<Vec<Branch<T>>>) -> Result<Self> {
        let mut next = Vec::new();
        for b in &self.branches {
            next.extend(f(b)?);
        }
        Self::merged(self.n_qubits, self.n_modes, next)
    }

    /// Product terms as a two-mode amplitude.
    pub fn two_mode_amplitude(&self) -> Result<TwoModeAmplitude<T>> {
        if self.n_modes != 2 {
            return Err(Error::InvalidParameter(format!("expected two modes, state has {}", self.n_modes)));
        }
        let terms = self
            .branches
            .iter()
            .flat_map(|b| &b.terms)
            .map(|t| ProductTerm {
                coeff: t.amp,
                first: t.modes[0].clone(),
                second: t.modes[1].clone(),
            })
            .collect();
        Ok(TwoModeAmplitude::new(terms))
    }

    /// The single-mode wavefunction left once every qubit is disentangled.
    pub fn single_mode(&self) -> Result<Wavefunction<T>> {
        match self.branches.as_slice() {
            [b] if self.n_modes == 1 => {
                let mut sum: Option<Wavefunction<T>> = None;
                for t in &b.terms {
                    let w = t.modes[0].scaled(t.amp);
                    sum = Some(match sum {
                        Some(s) => s.add(&w)?,
                        None => w,
                    });
                }
                sum.ok_or(Error::DegenerateWavefunction)
            }
            _ => Err(Error::InvalidParameter("state is not a single-mode product with the qubits".into())),
        }
    }
}

pub fn hadamard<T: Real>(st: &HybridState<T>, qubit: usize) -> Result<HybridState<T>> {
    st.check_qubit(qubit)?;
    let r = T::FRAC_1_SQRT_2();
    st.map_branches(|b| {
        let from_one = b.bits[qubit] == 1;
        Ok([0u8, 1u8]
            .into_iter()
            .map(|bit| {
                let sign = if from_one && bit == 1 { -r } else { r };
                let mut bits = b.bits.clone();
                bits[qubit] = bit;
                Branch {
                    bits,
                    terms: b
                        .terms
                        .iter()
                        .map(|t| ModeProduct {
                            amp: t.amp * sign,
                            modes: t.modes.clone(),
                        })
                        .collect(),
                }
            })
            .collect())
    })
}

pub fn cnot<T: Real>(st: &HybridState<T>, control: usize, target: usize) -> Result<HybridState<T>> {
    st.check_qubit(control)?;
    st.check_qubit(target)?;
    if control == target {
        return Err(Error::InvalidParameter("control and target must differ".into()));
    }
    st.map_branches(|b| {
        let mut b = b.clone();
        if b.bits[control] == 1 {
            b.bits[target] ^= 1;
        }
        Ok(vec![b])
    })
}

pub fn bit_flip<T: Real>(st: &HybridState<T>, qubit: usize) -> Result<HybridState<T>> {
    st.check_qubit(qubit)?;
    st.map_branches(|b| {
        let mut b = b.clone();
        b.bits[qubit] ^= 1;
        Ok(vec![b])
    })
}

/// diag(1, e^{iφ}) on one qubit.
pub fn phase<T: Real>(st: &HybridState<T>, qubit: usize, phi: T) -> Result<HybridState<T>> {
    st.check_qubit(qubit)?;
    let factor = Complex::from_polar(T::one(), phi);
    st.map_branches(|b| {
        let mut b = b.clone();
        if b.bits[qubit] == 1 {
            for t in &mut b.terms {
                t.amp *= factor;
            }
        }
        Ok(vec![b])
    })
}

fn map_mode<T: Real>(
    st: &HybridState<T>,
    qubit: usize,
    mode: usize,
    f: impl Fn(u8, &Wavefunction<T>) -> Result<(Complex<T>, Wavefunction<T>)>,
) -> Result<HybridState<T>> {
    st.check_qubit(qubit)?;
    st.check_mode(mode)?;
    st.map_branches(|b| {
        let bit = b.bits[qubit];
        let mut b = b.clone();
        for t in &mut b.terms {
            let (factor, w) = f(bit, &t.modes[mode])?;
            t.amp *= factor;
            t.modes[mode] = w;
        }
        Ok(vec![b])
    })
}

/// e^{−i d p σ_z}: shifts the mode by +d where the qubit is 0 and by −d where it is 1.
pub fn cond_displacement<T: Real>(st: &HybridState<T>, qubit: usize, mode: usize, d: T) -> Result<HybridState<T>> {
    let one = Complex::new(T::one(), T::zero());
    map_mode(st, qubit, mode, |bit, w| Ok((one, w.displaced(if bit == 0 { d } else { -d })?)))
}

/// exp(iπ/4 (2q/α − 1)(1 − σ_z)): identity on qubit 0, the phase ramp
/// e^{iπ(2q/α − 1)/2} on qubit 1.
pub fn lambda_gate<T: Real>(st: &HybridState<T>, qubit: usize, mode: usize, alpha: T) -> Result<HybridState<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let one = Complex::new(T::one(), T::zero());
    let minus_i = Complex::new(T::zero(), -T::one());
    map_mode(st, qubit, mode, |bit, w| {
        if bit == 0 {
            Ok((one, w.clone()))
        } else {
            Ok((minus_i, w.with_added_linear_phase(T::PI() / alpha)?))
        }
    })
}

/// Projects a qubit onto `outcome`; returns the exact probability and the
/// renormalized post-measurement state.
pub fn measure_qubit<T: Real>(st: &HybridState<T>, qubit: usize, outcome: u8) -> Result<(T, HybridState<T>)> {
    st.check_qubit(qubit)?;
    if outcome > 1 {
        return Err(Error::InvalidParameter(format!("qubit outcome must be 0 or 1, got {outcome}")));
    }
    let kept = HybridState {
        n_qubits: st.n_qubits,
        n_modes: st.n_modes,
        branches: st.branches.iter().filter(|b| b.bits[qubit] == outcome).cloned().collect(),
    };
    let prob = kept.norm_squared()? / st.norm_squared()?;
    if !(prob >= T::of(IMPOSSIBLE_PROB)) {
        return Err(Error::ImpossibleOutcome(prob.to_f64().unwrap_or(f64::NAN)));
    }
    let scale = Complex::new(T::one() / kept.norm_squared()?.sqrt(), T::zero());
    let branches = kept
        .branches
        .into_iter()
        .map(|mut b| {
            for t in &mut b.terms {
                t.amp *= scale;
            }
            b
        })
        .collect();
    Ok((
        prob,
        HybridState {
            branches,
            ..kept
        },
    ))
}

/// One protocol step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep<T> {
    pub gate: String,
    pub outcome: Option<u8>,
    pub probability: Option<T>,
}

#[derive(Debug, Clone, Default)]
struct Recorder<T> {
    steps: Vec<TraceStep<T>>,
    success: f64,
}

impl<T: Real> Recorder<T> {
    fn new() -> Self {
        Self {
            steps: Vec::new(),
            success: 1.0,
        }
    }

    fn gate(&mut self, gate: String) {
        self.steps.push(TraceStep {
            gate,
            outcome: None,
            probability: None,
        });
    }

    fn measure(&mut self, st: &HybridState<T>, qubit: usize, outcome: u8) -> Result<HybridState<T>> {
        let (p, next) = measure_qubit(st, qubit, outcome)?;
        self.success *= p.to_f64().unwrap_or(f64::NAN);
        self.steps.push(TraceStep {
            gate: format!("measure q{qubit}"),
            outcome: Some(outcome),
            probability: Some(p),
        });
        Ok(next)
    }
}

/// Hadamard, conditional displacement by d, Hadamard.
fn grow<T: Real>(st: &HybridState<T>, rec: &mut Recorder<T>, qubit: usize, mode: usize, d: T) -> Result<HybridState<T>> {
    let st = hadamard(st, qubit)?;
    rec.gate(format!("H q{qubit}"));
    let st = cond_displacement(&st, qubit, mode, d)?;
    rec.gate(format!("D(±{d}) q{qubit} -> m{mode}"));
    let st = hadamard(&st, qubit)?;
    rec.gate(format!("H q{qubit}"));
    Ok(st)
}

fn check_protocol<T: Real>(n: usize, alpha: T) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("iteration count n must be >= 1".into()));
    }
    if !(alpha >= T::of(MIN_PROTOCOL_ALPHA)) {
        return Err(Error::InvalidParameter(format!("alpha must be >= {MIN_PROTOCOL_ALPHA}, got {alpha}")));
    }
    Ok(())
}

/// Odd 2^{n+1}-paw cat on `mode`, using `qubit` as ancilla (left in |0⟩).
fn prepare_odd_cat<T: Real>(
    st: &HybridState<T>,
    rec: &mut Recorder<T>,
    qubit: usize,
    mode: usize,
    n: usize,
    alpha: T,
) -> Result<HybridState<T>> {
    let st = grow(st, rec, qubit, mode, alpha)?;
    let st = rec.measure(&st, qubit, 1)?;
    let mut st = bit_flip(&st, qubit)?;
    rec.gate(format!("X q{qubit}"));
    for k in 2..=n {
        let d = alpha * T::of(2f64.powi(k as i32 - 1));
        st = grow(&st, rec, qubit, mode, d)?;
        st = rec.measure(&st, qubit, 0)?;
    }
    let st = grow(&st, rec, qubit, mode, alpha * T::of(0.5))?;
    rec.measure(&st, qubit, 0)
}

#[derive(Debug, Clone)]
pub struct GProtocolRun<T> {
    pub state: Wavefunction<T>,
    pub success_prob: T,
    /// |⟨g|state⟩| against the flat odd cat of the same size.
    pub fidelity: T,
    pub trace: Vec<TraceStep<T>>,
}

pub fn run_g_protocol<T: Real>(n: usize, alpha: T) -> Result<GProtocolRun<T>> {
    check_protocol(n, alpha)?;
    let mut rec = Recorder::new();
    let st = init(1, 1, T::one())?;
    rec.gate("init |0> vacuum".into());
    let st = prepare_odd_cat(&st, &mut rec, 0, 0, n, alpha)?;
    let state = st.single_mode()?;
    let (_, target) = catstates::cat_flat(1 << (n + 1), alpha)?;
    let fidelity = target.inner_product(&state)?.norm() / state.norm();
    Ok(GProtocolRun {
        state,
        success_prob: T::of(rec.success),
        fidelity,
        trace: rec.steps,
    })
}

#[derive(Debug, Clone)]
pub struct PsiProtocolRun<T> {
    pub state: TwoModeAmplitude<T>,
    pub success_prob: T,
    pub theta: T,
    /// |⟨target|state⟩| against (|ff⟩ + e^{iθ}|gg⟩)/√2 built from flat cats.
    pub fidelity: T,
    /// Phase of ⟨gg|state⟩ relative to ⟨ff|state⟩.
    pub relative_phase: T,
    pub trace: Vec<TraceStep<T>>,
}

/// Prepares (|ff⟩ + e^{iθ}|gg⟩)/√2 with two ancillas.
///
/// Each mode receives an odd cat, the ancillas are entangled into
/// |11⟩ + e^{iθ}|00⟩, the Λ gates turn the |11⟩ sector
/// into f ⊗ f, and a CNOT plus Hadamard followed by a 0 outcome on the
/// first ancilla disentangles them.
pub fn run_psi_protocol<T: Real>(n: usize, alpha: T, theta: T) -> Result<PsiProtocolRun<T>> {
    check_protocol(n, alpha)?;
    let mut rec = Recorder::new();
    let st = init(2, 2, T::one())?;
    rec.gate("init |00> vacuum".into());
    let st = prepare_odd_cat(&st, &mut rec, 0, 0, n, alpha)?;
    let st = prepare_odd_cat(&st, &mut rec, 1, 1, n, alpha)?;

    let st = hadamard(&st, 0)?;
    rec.gate("H q0".into());
    let st = cnot(&st, 0, 1)?;
    rec.gate("CNOT q0 -> q1".into());
    // e^{iθ} on the |00⟩ sector.
    let st = bit_flip(&st, 0)?;
    let st = phase(&st, 0, theta)?;
    let st = bit_flip(&st, 0)?;
    rec.gate(format!("X P({theta}) X q0"));
    let st = lambda_gate(&st, 0, 0, alpha)?;
    rec.gate("Lambda q0 -> m0".into());
    let st = lambda_gate(&st, 1, 1, alpha)?;
    rec.gate("Lambda q1 -> m1".into());
    let st = cnot(&st, 0, 1)?;
    rec.gate("CNOT q0 -> q1".into());
    let st = hadamard(&st, 0)?;
    rec.gate("H q0".into());
    let st = rec.measure(&st, 0, 0)?;

    let state = st.two_mode_amplitude()?.normalize()?;
    let (f, g) = catstates::cat_flat(1 << (n + 1), alpha)?;
    let target = bell::TwoModeState::new(f.clone(), g.clone(), theta)?.amplitude();
    let fidelity = target.inner_product(&state)?.norm();
    let project = |w: &Wavefunction<T>| {
        let pair = TwoModeAmplitude::new(vec![ProductTerm {
            coeff: Complex::new(T::one(), T::zero()),
            first: w.clone(),
            second: w.clone(),
        }]);
        pair.inner_product(&state)
    };
    let relative_phase = (project(&g)? / project(&f)?).arg();
    Ok(PsiProtocolRun {
        state,
        success_prob: T::of(rec.success),
        theta,
        fidelity,
        relative_phase,
        trace: rec.steps,
    })
}

/// Plain-text protocol trace.
pub fn format_trace<T: Real>(trace: &[TraceStep<T>]) -> String {
    let mut out = String::new();
    for (k, step) in trace.iter().enumerate() {
        let _ = match (step.outcome, step.probability) {
            (Some(o), Some(p)) => writeln!(out, "{k:3}  {:<28} outcome={o} p={p:.9}", step.gate),
            _ => writeln!(out, "{k:3}  {}", step.gate),
        };
    }
    out
}
