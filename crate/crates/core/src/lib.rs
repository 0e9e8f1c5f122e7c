//! CHSH violation with homodyne measurements on even/odd two-mode states.
//!
//! The crate builds single-mode wavefunctions as Gaussian sums or Fock
//! expansions, bins quadrature outcomes by the sign of f·g, evaluates the
//! two overlaps that fix every correlator, and simulates the qubit-assisted
//! preparation of multi-paw cat states.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod binning;
pub mod catstates;
pub mod error;
pub mod fock;
pub mod prepsim;
pub mod quadrature;
pub mod reference;
pub mod scalar;
pub mod special;
pub mod wavefunc;

pub use bell::{
    analyze, chsh_s, chsh_s_max, correlators, BellAnalysis, BinnedCorrelation, CorrelatorReport, Quadrature, TwoModeAmplitude,
    TwoModeState,
};
pub use binning::{root_binning, root_binning_auto, Sign, SignedPartition};
pub use catstates::{cat2, cat_envelope, cat_flat, min_paws, optimize_alpha, CatFamilySpec, CatKind};
pub use error::{Error, Result};
pub use fock::{decompose, fock_state_s, FockExpansion};
pub use prepsim::{run_g_protocol, run_psi_protocol, HybridState};
pub use scalar::Real;
pub use wavefunc::{GaussianTerm, Parity, Wavefunction};

pub type Wavefunction64 = Wavefunction<f64>;
pub type GaussianTerm64 = GaussianTerm<f64>;
pub type SignedPartition64 = SignedPartition<f64>;
pub type TwoModeState64 = TwoModeState<f64>;
pub type FockExpansion64 = FockExpansion<f64>;
pub type HybridState64 = HybridState<f64>;
pub type Wavefunction32 = Wavefunction<f32>;
