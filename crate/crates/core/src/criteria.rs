//! Absolute separability, PPT and state classification for `2 ⊗ d` states.
//!
//! A `2 ⊗ d` state with spectrum `λ1 >= ... >= λ2d` is absolutely separable
//! iff `λ1 - λ(2d-1) - 2 sqrt(λ(2d-2) λ2d) <= 0`. The left-hand side is the
//! "violation"; positive values place the state outside the AS set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_desc, partial_transpose_b};
use crate::states::DensityMatrix;

/// Eigenvalues with modulus at or below this are treated as exact zeros
/// before the square root. Round-off of order 1e-17 would otherwise
/// contribute ~1e-8 through `sqrt`.
pub const SPECTRAL_NOISE_FLOOR: f64 = 1e-13;

/// Spectra may dip this far below zero or out of order.
pub const SPECTRUM_SLACK: f64 = 1e-12;

pub const BOUNDARY_TOL: f64 = 1e-9;
pub const PPT_TOL: f64 = 1e-10;

/// Tunable tolerances for verdicts and rank counting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rank: f64,
    pub boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: crate::linalg::RANK_TOL,
            boundary: BOUNDARY_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "AS_interior")]
    AsInterior,
    #[serde(rename = "AS_boundary")]
    AsBoundary,
    #[serde(rename = "not_AS")]
    NotAs,
}

impl Verdict {
    pub fn from_lhs(lhs: f64, boundary_tol: f64) -> Self {
        if lhs.abs() <= boundary_tol {
            Verdict::AsBoundary
        } else if lhs < 0.0 {
            Verdict::AsInterior
        } else {
            Verdict::NotAs
        }
    }

    pub fn is_as(self) -> bool {
        !matches!(self, Verdict::NotAs)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AsInterior => "AS_interior",
            Verdict::AsBoundary => "AS_boundary",
            Verdict::NotAs => "not_AS",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Non-increasing.
    pub eigenvalues: Vec<f64>,
    pub as_lhs: f64,
    pub verdict: Verdict,
}

/// `λ1 - λ(2d-1) - 2 sqrt(λ(2d-2) λ2d)` for a non-increasing spectrum.
pub fn as_lhs(eigs: &[f64]) -> Result<f64> {
    let n = eigs.len();
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadSpectrum(format!(
            "expected an even number (>= 4) of eigenvalues, got {n}"
        )));
    }
    if let Some(bad) = eigs.iter().find(|x| !x.is_finite()) {
        return Err(Error::BadSpectrum(format!("non-finite eigenvalue {bad}")));
    }
    if let Some(w) = eigs.windows(2).find(|w| w[1] > w[0] + SPECTRUM_SLACK) {
        return Err(Error::BadSpectrum(format!(
            "eigenvalues not non-increasing ({} before {})",
            w[0], w[1]
        )));
    }
    if let Some(neg) = eigs.iter().find(|&&x| x < -SPECTRUM_SLACK) {
        return Err(Error::BadSpectrum(format!("negative eigenvalue {neg}")));
    }
    let clean = |x: f64| {
        if x.abs() <= SPECTRAL_NOISE_FLOOR {
            0.0
        } else {
            x.max(0.0)
        }
    };
    let largest = clean(eigs[0]);
    let second_smallest = clean(eigs[n - 2]);
    let third_smallest = clean(eigs[n - 3]);
    let smallest = clean(eigs[n - 1]);
    Ok(largest - second_smallest - 2.0 * (third_smallest * smallest).sqrt())
}

pub fn spectrum_report(eigs: Vec<f64>, boundary_tol: f64) -> Result<SpectrumReport> {
    let lhs = as_lhs(&eigs)?;
    Ok(SpectrumReport {
        eigenvalues: eigs,
        as_lhs: lhs,
        verdict: Verdict::from_lhs(lhs, boundary_tol),
    })
}

/// Spectral AS test at the default boundary tolerance.
pub fn is_absolutely_separable(rho: &DensityMatrix) -> Result<SpectrumReport> {
    is_absolutely_separable_with(rho, BOUNDARY_TOL)
}

pub fn is_absolutely_separable_with(
    rho: &DensityMatrix,
    boundary_tol: f64,
) -> Result<SpectrumReport> {
    if rho.dims().d_a != 2 {
        return Err(Error::DimensionMismatch {
            expected: "a 2 ⊗ d state".into(),
            found: rho.dims().to_string(),
        });
    }
    spectrum_report(eig_hermitian_desc(rho.matrix())?, boundary_tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptReport {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

/// Smallest eigenvalue of the partial transpose on B.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose_b(rho.matrix(), rho.dims())?;
    let e = eig_hermitian_desc(&pt)?;
    Ok(*e.last().expect("non-empty spectrum"))
}

pub fn is_ppt(rho: &DensityMatrix) -> Result<PptReport> {
    let min_eigenvalue = min_partial_transpose_eigenvalue(rho)?;
    Ok(PptReport {
        is_ppt: min_eigenvalue >= -PPT_TOL,
        min_eigenvalue,
    })
}

/// Combined AS / PPT label.
///
/// PPT implies separability only for `2 ⊗ 2` and `2 ⊗ 3`; [`Classification::label`]
/// drops the separability claim for larger `dB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    NptEntangled,
    PptNotAs,
    As,
    AsBoundary,
}

impl Classification {
    pub fn label(self, d_b: usize) -> &'static str {
        let sep_known = d_b <= 3;
        match self {
            Classification::NptEntangled if sep_known => "NPT_entangled",
            Classification::NptEntangled => "NPT",
            Classification::PptNotAs if sep_known => "PPT_not_AS",
            Classification::PptNotAs => "PPT, not AS",
            Classification::As => "AS",
            Classification::AsBoundary => "AS_boundary",
        }
    }

    pub fn is_as(self) -> bool {
        matches!(self, Classification::As | Classification::AsBoundary)
    }

    fn from_parts(verdict: Verdict, ppt: bool) -> Self {
        match verdict {
            Verdict::AsInterior => Classification::As,
            Verdict::AsBoundary => Classification::AsBoundary,
            Verdict::NotAs if ppt => Classification::PptNotAs,
            Verdict::NotAs => Classification::NptEntangled,
        }
    }
}

/// Full classification with both reports.
#[derive(Debug, Clone, PartialEq)]
pub struct StateAnalysis {
    pub spectrum: SpectrumReport,
    pub ppt: PptReport,
    pub classification: Classification,
}

pub fn analyze(rho: &DensityMatrix, boundary_tol: f64) -> Result<StateAnalysis> {
    let spectrum = is_absolutely_separable_with(rho, boundary_tol)?;
    let ppt = is_ppt(rho)?;
    let classification = Classification::from_parts(spectrum.verdict, ppt.is_ppt);
    Ok(StateAnalysis {
        spectrum,
        ppt,
        classification,
    })
}

pub fn classify(rho: &DensityMatrix) -> Result<Classification> {
    Ok(analyze(rho, BOUNDARY_TOL)?.classification)
}
