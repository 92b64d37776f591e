//! Parameter scans and random-unitary sampling.
//!
//! Every scan returns one [`ScanRecord`] per grid point or sample, in index
//! order. Grid points and samples are evaluated in parallel; random draws use
//! the ChaCha stream `index` of the run seed, so output does not depend on
//! scheduling.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{analyze, Classification, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::linalg::BipartiteDims;
use crate::states::{
    bd_alpha_family, bd_from_correlations, correlations_to_probs, maximally_mixed, modified_werner,
    DensityMatrix, WernerParams, VALIDITY_SLACK,
};
use crate::switch::{branch_probability, switch_unitary_closed, Branch};
use crate::unitaries::{cnot, haar_random_with, u_theta, RngSeed, UnitaryMatrix};

/// Uniform 1-D grid `min, ..., max` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let spec = format!("{min}:{max}:{count}");
        if count < 2 {
            return Err(Error::InvalidGrid {
                spec,
                reason: "need at least 2 points".into(),
            });
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidGrid {
                spec,
                reason: "need finite min < max".into(),
            });
        }
        Ok(Self { min, max, count })
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }

    /// Default θ grid: `[0, π]`, 181 points.
    pub fn default_theta() -> Self {
        Self::new(0.0, PI, 181).unwrap()
    }

    /// Default p grid: `[0, 1]`, 101 points.
    pub fn default_p() -> Self {
        Self::new(0.0, 1.0, 101).unwrap()
    }

    pub fn default_alpha() -> Self {
        Self::new(1.0 / 6.0, 0.5, 34).unwrap()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Parses `min:max:count`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidGrid {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected min:max:count"));
        }
        let min: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| bad("min is not a number"))?;
        let max: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| bad("max is not a number"))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("count is not an integer"))?;
        Self::new(min, max, count)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Classify,
    Switch,
    WernerScan,
    WernerSurface,
    RandomScatter,
    BdGeometry,
    BdAlpha,
    BdAlphaRandom,
    HigherDim,
}

impl ExperimentId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Classify => "classify",
            ExperimentId::Switch => "switch",
            ExperimentId::WernerScan => "werner-scan",
            ExperimentId::WernerSurface => "werner-surface",
            ExperimentId::RandomScatter => "random-scatter",
            ExperimentId::BdGeometry => "bd-geometry",
            ExperimentId::BdAlpha => "bd-alpha",
            ExperimentId::BdAlphaRandom => "bd-alpha-random",
            ExperimentId::HigherDim => "higher-dim",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which unitaries a random scatter draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScatterMode {
    /// `U1 = CNOT`, `U2` Haar random (two-qubit states only).
    CnotPlusRandom,
    /// Both unitaries Haar random.
    RandomPair,
}

impl FromStr for ScatterMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cnot-plus-random" | "cnot_plus_random" => Ok(ScatterMode::CnotPlusRandom),
            "random-pair" | "random_pair" => Ok(ScatterMode::RandomPair),
            other => Err(format!(
                "unknown mode `{other}` (expected cnot-plus-random or random-pair)"
            )),
        }
    }
}

/// Input parameters of one record; unused ones stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub theta: Option<f64>,
    pub p: Option<f64>,
    pub gamma: Option<f64>,
    pub phi: Option<f64>,
    pub alpha: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub seed: Option<u64>,
    pub branch: Option<Branch>,
}

impl ScanParams {
    fn werner(params: WernerParams) -> Self {
        Self {
            p: Some(params.p),
            gamma: Some(params.gamma),
            phi: Some(params.phi),
            ..Self::default()
        }
    }
}

/// Analysis of the state a record describes.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub eigenvalues: Vec<f64>,
    /// Left-hand side of the AS inequality ("violation").
    pub as_lhs: f64,
    pub verdict: Verdict,
    pub classification: Classification,
    pub rank: usize,
    pub min_pt_eigenvalue: f64,
}

impl Evaluation {
    pub fn of(rho: &DensityMatrix, tol: &Tolerances) -> Result<Self> {
        let a = analyze(rho, tol.boundary)?;
        let rank = a
            .spectrum
            .eigenvalues
            .iter()
            .filter(|&&x| x > tol.rank)
            .count();
        Ok(Self {
            eigenvalues: a.spectrum.eigenvalues,
            as_lhs: a.spectrum.as_lhs,
            verdict: a.spectrum.verdict,
            classification: a.classification,
            rank,
            min_pt_eigenvalue: a.ppt.min_eigenvalue,
        })
    }
}

/// Summary of the input state before the switch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialInfo {
    pub as_lhs: f64,
    pub classification: Classification,
    pub min_pt_eigenvalue: f64,
}

impl From<&Evaluation> for InitialInfo {
    fn from(e: &Evaluation) -> Self {
        Self {
            as_lhs: e.as_lhs,
            classification: e.classification,
            min_pt_eigenvalue: e.min_pt_eigenvalue,
        }
    }
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub experiment: ExperimentId,
    pub index: usize,
    pub dims: BipartiteDims,
    pub params: ScanParams,
    pub initial: Option<InitialInfo>,
    /// `None` when the record was skipped.
    pub evaluation: Option<Evaluation>,
    /// Plus-branch probability; `None` when no switch is applied.
    pub prob_plus: Option<f64>,
    /// Set when the post-selected branch had (numerically) zero probability.
    pub skipped: bool,
}

impl ScanRecord {
    pub fn as_lhs(&self) -> Option<f64> {
        self.evaluation.as_ref().map(|e| e.as_lhs)
    }

    pub fn violates(&self) -> bool {
        self.evaluation.as_ref().is_some_and(|e| !e.verdict.is_as())
    }
}

/// Switches `rho` through `(u1, u2)` on `branch` and evaluates the result.
/// Zero-probability branches yield a skipped record rather than an error.
#[allow(clippy::too_many_arguments)]
pub fn switch_record(
    experiment: ExperimentId,
    index: usize,
    params: ScanParams,
    u1: &UnitaryMatrix,
    u2: &UnitaryMatrix,
    rho: &DensityMatrix,
    initial: Option<InitialInfo>,
    branch: Branch,
    tol: &Tolerances,
) -> Result<ScanRecord> {
    let prob_plus = branch_probability(u1, u2, rho, Branch::Plus);
    let (evaluation, skipped) = match switch_unitary_closed(u1, u2, rho, branch) {
        Ok(out) => (Some(Evaluation::of(&out.state, tol)?), false),
        Err(Error::ZeroProbabilityBranch { .. }) => (None, true),
        Err(e) => return Err(e),
    };
    Ok(ScanRecord {
        experiment,
        index,
        dims: rho.dims(),
        params,
        initial,
        evaluation,
        prob_plus: Some(prob_plus),
        skipped,
    })
}

/// Record describing `rho` itself, without any switch.
pub fn state_record(
    experiment: ExperimentId,
    index: usize,
    params: ScanParams,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<ScanRecord> {
    Ok(ScanRecord {
        experiment,
        index,
        dims: rho.dims(),
        params,
        initial: None,
        evaluation: Some(Evaluation::of(rho, tol)?),
        prob_plus: None,
        skipped: false,
    })
}

/// Spectrum of switch(CNOT, U(θ)) applied to a modified Werner state along
/// a θ grid.
pub fn werner_eigen_scan(
    params: WernerParams,
    theta_grid: &GridSpec,
    tol: &Tolerances,
) -> Result<Vec<ScanRecord>> {
    let rho = modified_werner(params)?;
    let initial = InitialInfo::from(&Evaluation::of(&rho, tol)?);
    let gate = cnot();
    theta_grid
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(i, theta)| {
            let params = ScanParams {
                theta: Some(theta),
                branch: Some(Branch::Plus),
                ..ScanParams::werner(params)
            };
            switch_record(
                ExperimentId::WernerScan,
                i,
                params,
                &gate,
                &u_theta(theta),
                &rho,
                Some(initial),
                Branch::Plus,
                tol,
            )
        })
        .collect()
}

/// Violation of switch(CNOT, U(θ)) on modified Werner states over a
/// `p × θ` grid, p-major.
pub fn werner_violation_surface(
    p_grid: &GridSpec,
    theta_grid: &GridSpec,
    gamma: f64,
    phi: f64,
    tol: &Tolerances,
) -> Result<Vec<ScanRecord>> {
    if p_grid.min < 0.0 || p_grid.max > 1.0 {
        return Err(Error::ParamOutOfRange {
            name: "p",
            value: if p_grid.min < 0.0 {
                p_grid.min
            } else {
                p_grid.max
            },
            range: "[0, 1]",
        });
    }
    let gate = cnot();
    let thetas = theta_grid.points();
    let states: Vec<(WernerParams, DensityMatrix, InitialInfo)> = p_grid
        .points()
        .into_iter()
        .map(|p| {
            let params = WernerParams { p, gamma, phi };
            let rho = modified_werner(params)?;
            let initial = InitialInfo::from(&Evaluation::of(&rho, tol)?);
            Ok((params, rho, initial))
        })
        .collect::<Result<_>>()?;
    let n_theta = thetas.len();
    (0..states.len() * n_theta)
        .into_par_iter()
        .map(|k| {
            let (params, rho, initial) = &states[k / n_theta];
            let theta = thetas[k % n_theta];
            let sp = ScanParams {
                theta: Some(theta),
                branch: Some(Branch::Plus),
                ..ScanParams::werner(*params)
            };
            switch_record(
                ExperimentId::WernerSurface,
                k,
                sp,
                &gate,
                &u_theta(theta),
                rho,
                Some(*initial),
                Branch::Plus,
                tol,
            )
        })
        .collect()
}

fn draw_pair(
    mode: ScatterMode,
    dim: usize,
    seed: RngSeed,
    index: usize,
) -> (UnitaryMatrix, UnitaryMatrix) {
    let mut rng = seed.rng_for(index as u64);
    match mode {
        ScatterMode::CnotPlusRandom => (cnot(), haar_random_with(dim, &mut rng)),
        ScatterMode::RandomPair => {
            let u1 = haar_random_with(dim, &mut rng);
            let u2 = haar_random_with(dim, &mut rng);
            (u1, u2)
        }
    }
}

fn scatter(
    experiment: ExperimentId,
    base: ScanParams,
    rho: &DensityMatrix,
    n_samples: usize,
    seed: RngSeed,
    mode: ScatterMode,
    tol: &Tolerances,
) -> Result<Vec<ScanRecord>> {
    if n_samples < 1 {
        return Err(Error::ParamOutOfRange {
            name: "n_samples",
            value: 0.0,
            range: ">= 1",
        });
    }
    let dim = rho.dim();
    if mode == ScatterMode::CnotPlusRandom && dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: "a two-qubit state for CNOT pairing".into(),
            found: rho.dims().to_string(),
        });
    }
    let initial = InitialInfo::from(&Evaluation::of(rho, tol)?);
    let params = ScanParams {
        seed: Some(seed.0),
        branch: Some(Branch::Plus),
        ..base
    };
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let (u1, u2) = draw_pair(mode, dim, seed, i);
            switch_record(
                experiment,
                i,
                params.clone(),
                &u1,
                &u2,
                rho,
                Some(initial),
                Branch::Plus,
                tol,
            )
        })
        .collect()
}

/// Plus-branch switch of `rho` under `n_samples` random unitary pairs.
pub fn random_unitary_scatter(
    rho: &DensityMatrix,
    n_samples: usize,
    seed: RngSeed,
    mode: ScatterMode,
    tol: &Tolerances,
) -> Result<Vec<ScanRecord>> {
    scatter(
        ExperimentId::RandomScatter,
        ScanParams::default(),
        rho,
        n_samples,
        seed,
        mode,
        tol,
    )
}

/// Same as [`random_unitary_scatter`] but tags records with Werner parameters.
pub fn werner_random_scatter(
    params: WernerParams,
    n_samples: usize,
    seed: RngSeed,
    tol: &Tolerances,
) -> Result<Vec<ScanRecord>> {
    let rho = modified_werner(params)?;
    scatter(
        ExperimentId::RandomScatter,
        ScanParams::werner(params),
        &rho,
        n_samples,
        seed,
        ScatterMode::CnotPlusRandom,
        tol,
    )
}

/// Bell-diagonal point cloud over a cubic correlation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BdGeometry {
    pub theta: f64,
    pub resolution: usize,
    /// One record per valid grid point, in grid order.
    pub records: Vec<ScanRecord>,
    /// Grid points outside the tetrahedron of states.
    pub invalid_points: usize,
}

impl BdGeometry {
    pub fn initial_as_count(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.initial.is_some_and(|i| i.classification.is_as()))
            .count()
    }

    /// Initially AS points that stay AS after the switch.
    pub fn surviving_as_count(&self) -> usize {
        self.records.iter().filter(|r| is_survivor(r)).count()
    }

    pub fn survivors(&self) -> impl Iterator<Item = &ScanRecord> {
        self.records.iter().filter(|r| is_survivor(r))
    }
}

fn is_survivor(r: &ScanRecord) -> bool {
    r.initial.is_some_and(|i| i.classification.is_as())
        && r.evaluation.as_ref().is_some_and(|e| e.verdict.is_as())
}

/// Sweeps `(c1, c2, c3)` over `resolution³` points of `[-1, 1]³` and
/// records, for every valid Bell-diagonal state, its initial classification
/// and the verdict after switch(CNOT, U(θ)).
pub fn bd_geometry_scan(theta: f64, resolution: usize, tol: &Tolerances) -> Result<BdGeometry> {
    if resolution < 10 {
        return Err(Error::ParamOutOfRange {
            name: "resolution",
            value: resolution as f64,
            range: ">= 10",
        });
    }
    let axis = GridSpec::new(-1.0, 1.0, resolution)?.points();
    let mut valid = Vec::new();
    for &c1 in &axis {
        for &c2 in &axis {
            for &c3 in &axis {
                let w = correlations_to_probs(c1, c2, c3);
                if w.iter().all(|&p| p >= -VALIDITY_SLACK) {
                    valid.push([c1, c2, c3]);
                }
            }
        }
    }
    let invalid_points = axis.len().pow(3) - valid.len();
    let (gate, u) = (cnot(), u_theta(theta));
    let records = valid
        .par_iter()
        .enumerate()
        .map(|(i, &[c1, c2, c3])| {
            let rho = bd_from_correlations(c1, c2, c3)?;
            let initial = InitialInfo::from(&Evaluation::of(&rho, tol)?);
            let params = ScanParams {
                theta: Some(theta),
                c1: Some(c1),
                c2: Some(c2),
                c3: Some(c3),
                branch: Some(Branch::Plus),
                ..ScanParams::default()
            };
            switch_record(
                ExperimentId::BdGeometry,
                i,
                params,
                &gate,
                &u,
                &rho,
                Some(initial),
                Branch::Plus,
                tol,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BdGeometry {
        theta,
        resolution,
        records,
        invalid_points,
    })
}

/// Violation of the one-parameter BD family along an α grid (no switch).
pub fn bd_alpha_scan(alpha_grid: &GridSpec, tol: &Tolerances) -> Result<Vec<ScanRecord>> {
    alpha_grid
        .points()
        .into_iter()
        .enumerate()
        .map(|(i, alpha)| {
            let rho = bd_alpha_family(alpha)?;
            let params = ScanParams {
                alpha: Some(alpha),
                ..ScanParams::default()
            };
            state_record(ExperimentId::BdAlpha, i, params, &rho, tol)
        })
        .collect()
}

/// Switch(CNOT, Haar U) on the BD family member `alpha`.
pub fn bd_alpha_random(
    alpha: f64,
    n_samples: usize,
    seed: RngSeed,
    tol: &Tolerances,
) -> Result<Vec<ScanRecord>> {
    let rho = bd_alpha_family(alpha)?;
    let base = ScanParams {
        alpha: Some(alpha),
        ..ScanParams::default()
    };
    scatter(
        ExperimentId::BdAlphaRandom,
        base,
        &rho,
        n_samples,
        seed,
        ScatterMode::CnotPlusRandom,
        tol,
    )
}

/// Two Haar-random unitaries of dimension `2 dB` switched on `I/(2 dB)`.
pub fn higher_dim_scan(
    d_b: usize,
    n_samples: usize,
    seed: RngSeed,
    tol: &Tolerances,
) -> Result<Vec<ScanRecord>> {
    if d_b < 3 {
        return Err(Error::ParamOutOfRange {
            name: "d_b",
            value: d_b as f64,
            range: ">= 3",
        });
    }
    let rho = maximally_mixed(BipartiteDims::qubit_qudit(d_b));
    scatter(
        ExperimentId::HigherDim,
        ScanParams::default(),
        &rho,
        n_samples,
        seed,
        ScatterMode::RandomPair,
        tol,
    )
}

/// Fraction of non-skipped records whose final state violates the AS
/// inequality.
pub fn violating_fraction(records: &[ScanRecord]) -> f64 {
    let evaluated = records.iter().filter(|r| !r.skipped).count();
    if evaluated == 0 {
        return 0.0;
    }
    records.iter().filter(|r| r.violates()).count() as f64 / evaluated as f64
}
