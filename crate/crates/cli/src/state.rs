use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use cvbell::catstates::{self, CatFamilySpec};
use cvbell::fock::FockExpansion;
use cvbell::reference;
use cvbell::Wavefunction64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cat2,
    Flat,
    Envelope,
    Fock,
}

/// Which (f, g) pair to analyze.
#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Paw count (flat and envelope families).
    #[arg(long = "N", value_name = "N")]
    pub n_paws: Option<usize>,
    /// Peak spacing.
    #[arg(long, value_parser = positive)]
    pub alpha: Option<f64>,
    /// Squeezing of the envelope family.
    #[arg(long, value_parser = positive)]
    pub s: Option<f64>,
    /// Half-spacing of the two-paw cat.
    #[arg(long, value_parser = positive)]
    pub a: Option<f64>,
    /// Truncation level used to pick N for envelope cats when --N is absent.
    #[arg(long, value_parser = positive, default_value_t = 0.01)]
    pub epsilon: f64,
    /// JSON file with Fock rows for the fock family.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

pub fn positive(raw: &str) -> std::result::Result<f64, String> {
    let x: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a positive number, got {raw}"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FockValues {
    #[default]
    Amplitude,
    SignedProbability,
}

/// Rows are `[n, value]`; values are amplitudes unless `values` says
/// `signed_probability`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockFile {
    pub f: Vec<(usize, f64)>,
    pub g: Vec<(usize, f64)>,
    #[serde(default)]
    pub values: FockValues,
}

impl FockFile {
    pub fn expansions(&self) -> Result<(FockExpansion<f64>, FockExpansion<f64>)> {
        let build = |rows: &[(usize, f64)]| match self.values {
            FockValues::Amplitude => FockExpansion::from_rows(rows),
            FockValues::SignedProbability => reference::signed_rows(rows),
        };
        Ok((build(&self.f)?, build(&self.g)?))
    }
}

/// The resolved state and the parameters actually used.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedState {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_paws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip)]
    pub f: Wavefunction64,
    #[serde(skip)]
    pub g: Wavefunction64,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.with_context(|| format!("--{flag} is required for the {family} family"))
}

fn reject(present: bool, flag: &str, family: &str) -> Result<()> {
    if present {
        bail!("--{flag} does not apply to the {family} family");
    }
    Ok(())
}

impl StateArgs {
    pub fn resolve(&self) -> Result<ResolvedState> {
        let mut out = ResolvedState {
            family: self.family,
            n_paws: None,
            alpha: None,
            s: None,
            a: None,
            f: Wavefunction64::from_terms(Vec::new()),
            g: Wavefunction64::from_terms(Vec::new()),
        };
        let (f, g) = match self.family {
            Family::Cat2 => {
                for (p, flag) in [(self.n_paws.is_some(), "N"), (self.alpha.is_some(), "alpha"), (self.s.is_some(), "s"), (self.file.is_some(), "file")] {
                    reject(p, flag, "cat2")?;
                }
                let a = need(self.a, "a", "cat2")?;
                out.a = Some(a);
                catstates::cat2(a)?
            }
            Family::Flat => {
                reject(self.a.is_some(), "a", "flat")?;
                reject(self.s.is_some(), "s", "flat")?;
                reject(self.file.is_some(), "file", "flat")?;
                let spec = CatFamilySpec::flat(need(self.n_paws, "N", "flat")?, need(self.alpha, "alpha", "flat")?);
                out.n_paws = Some(spec.n_paws);
                out.alpha = Some(spec.alpha);
                spec.build()?
            }
            Family::Envelope => {
                reject(self.a.is_some(), "a", "envelope")?;
                reject(self.file.is_some(), "file", "envelope")?;
                let alpha = need(self.alpha, "alpha", "envelope")?;
                let s = need(self.s, "s", "envelope")?;
                let n = match self.n_paws {
                    Some(n) => n,
                    None => catstates::min_paws(self.epsilon, alpha, s)?,
                };
                let spec = CatFamilySpec::envelope(n, alpha, s);
                out.n_paws = Some(n);
                out.alpha = Some(alpha);
                out.s = Some(s);
                spec.build()?
            }
            Family::Fock => {
                for (p, flag) in [(self.n_paws.is_some(), "N"), (self.alpha.is_some(), "alpha"), (self.s.is_some(), "s"), (self.a.is_some(), "a")] {
                    reject(p, flag, "fock")?;
                }
                let path = self.file.as_ref().context("--file is required for the fock family")?;
                let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let file: FockFile = serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
                let (f, g) = file.expansions()?;
                (f.to_wavefunction().normalize()?, g.to_wavefunction().normalize()?)
            }
        };
        out.f = f;
        out.g = g;
        Ok(out)
    }
}
