//! Published reference values with per-value tolerances.
//!
//! Fock rows are stored as signed probabilities: the amplitude of |n⟩ is
//! sign(p)·√|p|.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fock::FockExpansion;

const RAW: &str = include_str!("../data/reference.json");
pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct Reference {
    pub version: u32,
    pub table1: Table1Ref,
    pub table2: Table2Ref,
    pub two_paw: TwoPawRef,
    pub four_paw: FourPawRef,
    pub near_maximal: NearMaximalRef,
    pub fock: FockRef,
    pub prepsim: PrepsimRef,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table1Ref {
    pub alpha: f64,
    pub rows: Vec<Table1RowRef>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Table1RowRef {
    pub n_paws: usize,
    pub s: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Table2Ref {
    pub squeezing: f64,
    pub rows: Vec<Table2RowRef>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Table2RowRef {
    pub n_paws: usize,
    pub alpha_opt: f64,
    pub s: f64,
    pub alpha_tol: f64,
    pub s_tol: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct TwoPawRef {
    pub a: f64,
    pub v: f64,
    pub v_tol: f64,
    /// W·π.
    pub w_over_pi: f64,
    pub w_tol: f64,
    pub s: f64,
    pub s_tol: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct FourPawRef {
    pub a: f64,
    pub w_over_pi: f64,
    pub w_tol: f64,
    pub s: f64,
    pub s_tol: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct NearMaximalRef {
    pub n_paws: usize,
    /// α².
    pub alpha_sq: f64,
    pub s: f64,
    pub epsilon: f64,
    pub min_paws: usize,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FockRef {
    pub alpha_sq: f64,
    pub s: f64,
    pub n_max: usize,
    pub prob_tol: f64,
    pub f_probabilities: Vec<(usize, f64)>,
    pub g_probabilities: Vec<(usize, f64)>,
    pub pairs: Vec<FockPairRef>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FockPairRef {
    pub name: String,
    pub f: Vec<(usize, f64)>,
    pub g: Vec<(usize, f64)>,
    pub s: f64,
    pub tol: f64,
}

impl FockPairRef {
    pub fn expansions(&self) -> Result<(FockExpansion<f64>, FockExpansion<f64>)> {
        Ok((signed_rows(&self.f)?, signed_rows(&self.g)?))
    }
}

/// Expansion from (n, signed probability) rows.
pub fn signed_rows(rows: &[(usize, f64)]) -> Result<FockExpansion<f64>> {
    let amps: Vec<(usize, f64)> = rows.iter().map(|&(n, p)| (n, p.signum() * p.abs().sqrt())).collect();
    FockExpansion::from_rows(&amps)
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct PrepsimRef {
    pub g_protocol: GProtocolRef,
    pub psi_protocol: PsiProtocolRef,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct GProtocolRef {
    pub n: usize,
    pub alpha: f64,
    pub success_prob: f64,
    pub prob_tol: f64,
    pub min_fidelity: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct PsiProtocolRef {
    pub n: usize,
    pub alpha: f64,
    pub s: f64,
    pub s_tol: f64,
    pub min_fidelity: f64,
}

pub fn parse(raw: &str) -> Result<Reference> {
    let r: Reference = serde_json::from_str(raw).map_err(|e| Error::Reference(e.to_string()))?;
    if r.version != SUPPORTED_VERSION {
        return Err(Error::Reference(format!("unsupported version {}", r.version)));
    }
    Ok(r)
}

/// The bundled reference set.
pub fn reference() -> &'static Reference {
    static CELL: OnceLock<Reference> = OnceLock::new();
    CELL.get_or_init(|| parse(RAW).expect("bundled reference data is valid"))
}

pub fn within(value: f64, expected: f64, tol: f64) -> bool {
    (value - expected).abs() <= tol
}
