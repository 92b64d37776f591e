//! State and unitary inputs given on the command line or as JSON files.
//!
//! Matrix files look like
//! `{"dims": [2, 2], "re": [...], "im": [...]}` with `re` and `im` holding
//! the `n*n` entries in row-major order (`im` may be omitted for real
//! matrices).

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::experiments::ScanParams;
use crate::linalg::{BipartiteDims, ComplexMatrix};
use crate::states::{
    bd_alpha_family, bd_from_correlations, bd_from_probs, boundary_rank3, maximally_mixed,
    modified_werner, DensityMatrix, WernerParams,
};
use crate::unitaries::{cnot, haar_random, u_theta, RngSeed, UnitaryMatrix};

/// Accepted deviation from Hermiticity, unit trace and unitarity in files.
pub const FILE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dims: [usize; 2],
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, dims: BipartiteDims) -> Self {
        let entries = m.entries();
        Self {
            dims: [dims.d_a, dims.d_b],
            re: entries.iter().map(|z| z.re).collect(),
            im: entries.iter().map(|z| z.im).collect(),
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: malformed matrix JSON: {e}", path.display())))
    }

    fn to_matrix(&self) -> Result<(ComplexMatrix, BipartiteDims), CliError> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1]).map_err(CliError::usage)?;
        let n = dims.total();
        if self.re.len() != n * n {
            return Err(CliError::Usage(format!(
                "`re` has {} entries, expected {} for dims {dims}",
                self.re.len(),
                n * n
            )));
        }
        if !self.im.is_empty() && self.im.len() != n * n {
            return Err(CliError::Usage(format!(
                "`im` has {} entries, expected {} or none",
                self.im.len(),
                n * n
            )));
        }
        let entries = (0..n * n)
            .map(|k| Complex64::new(self.re[k], self.im.get(k).copied().unwrap_or(0.0)))
            .collect();
        let m = ComplexMatrix::new(n, n, entries).map_err(CliError::usage)?;
        Ok((m, dims))
    }

    pub fn to_state(&self) -> Result<DensityMatrix, CliError> {
        let (m, dims) = self.to_matrix()?;
        DensityMatrix::new(m, dims, FILE_TOL).map_err(CliError::usage)
    }

    pub fn to_unitary(&self) -> Result<UnitaryMatrix, CliError> {
        let (m, _) = self.to_matrix()?;
        UnitaryMatrix::with_tolerance(m, FILE_TOL).map_err(CliError::usage)
    }
}

/// State families selectable with `--state`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StateKind {
    Werner,
    BoundaryRank3,
    BdProbs,
    BdCorr,
    BdAlpha,
    MaximallyMixed,
    File(String),
}

impl FromStr for StateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "werner" => StateKind::Werner,
            "boundary-rank3" => StateKind::BoundaryRank3,
            "bd-probs" => StateKind::BdProbs,
            "bd-corr" => StateKind::BdCorr,
            "bd-alpha" => StateKind::BdAlpha,
            "maximally-mixed" => StateKind::MaximallyMixed,
            other => match other.strip_prefix("file:") {
                Some(path) if !path.is_empty() => StateKind::File(path.to_string()),
                _ => {
                    return Err(format!(
                        "unknown state `{other}` (werner, boundary-rank3, bd-probs, bd-corr, bd-alpha, maximally-mixed, file:<path>)"
                    ))
                }
            },
        })
    }
}

/// Options describing an input state.
#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct StateArgs {
    /// werner | boundary-rank3 | bd-probs | bd-corr | bd-alpha | maximally-mixed | file:<path>
    #[arg(long, default_value = "werner")]
    pub state: StateKind,
    /// Werner mixing weight.
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Werner pure-state angle (radians).
    #[arg(long, default_value_t = PI / 4.0)]
    pub gamma: f64,
    /// Werner pure-state phase (radians).
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Bell weights `p1,p2,p3,p4` on phi+, phi-, psi+, psi-.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub probs: Option<Vec<f64>>,
    /// Correlations `c1,c2,c3`.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    pub corr: Option<Vec<f64>>,
    /// Parameter of the one-parameter Bell-diagonal family.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Qudit dimension for the maximally mixed state.
    #[arg(long, default_value_t = 2)]
    pub db: usize,
}

impl StateArgs {
    /// Builds the state and the parameter columns describing it.
    pub fn build(&self) -> Result<(DensityMatrix, ScanParams), CliError> {
        let mut params = ScanParams::default();
        let rho = match &self.state {
            StateKind::Werner => {
                let w = WernerParams {
                    p: self.p,
                    gamma: self.gamma,
                    phi: self.phi,
                };
                params.p = Some(w.p);
                params.gamma = Some(w.gamma);
                params.phi = Some(w.phi);
                modified_werner(w).map_err(CliError::usage)?
            }
            StateKind::BoundaryRank3 => boundary_rank3(),
            StateKind::BdProbs => {
                let p = self.probs.as_ref().ok_or_else(|| {
                    CliError::Usage("--state bd-probs needs --probs p1,p2,p3,p4".into())
                })?;
                bd_from_probs([p[0], p[1], p[2], p[3]]).map_err(CliError::usage)?
            }
            StateKind::BdCorr => {
                let c = self.corr.as_ref().ok_or_else(|| {
                    CliError::Usage("--state bd-corr needs --corr c1,c2,c3".into())
                })?;
                params.c1 = Some(c[0]);
                params.c2 = Some(c[1]);
                params.c3 = Some(c[2]);
                bd_from_correlations(c[0], c[1], c[2]).map_err(CliError::usage)?
            }
            StateKind::BdAlpha => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| CliError::Usage("--state bd-alpha needs --alpha".into()))?;
                params.alpha = Some(alpha);
                bd_alpha_family(alpha).map_err(CliError::usage)?
            }
            StateKind::MaximallyMixed => {
                if self.db < 2 {
                    return Err(CliError::Usage("--db must be at least 2".into()));
                }
                maximally_mixed(BipartiteDims::qubit_qudit(self.db))
            }
            StateKind::File(path) => MatrixFile::read(Path::new(path))?.to_state()?,
        };
        Ok((rho, params))
    }
}

/// Unitary selectable with `--u1` / `--u2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum UnitarySpec {
    Cnot,
    Identity,
    UTheta(f64),
    Haar(u64),
    File(String),
}

impl FromStr for UnitarySpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("cnot", None) => Ok(UnitarySpec::Cnot),
            ("identity", None) => Ok(UnitarySpec::Identity),
            ("utheta", Some(t)) => t
                .parse()
                .map(UnitarySpec::UTheta)
                .map_err(|_| format!("bad angle in `{s}`")),
            ("haar", Some(seed)) => seed
                .parse()
                .map(UnitarySpec::Haar)
                .map_err(|_| format!("bad seed in `{s}`")),
            ("file", Some(path)) if !path.is_empty() => Ok(UnitarySpec::File(path.to_string())),
            _ => Err(format!(
                "unknown unitary `{s}` (cnot, identity, utheta:<θ>, haar:<seed>, file:<path>)"
            )),
        }
    }
}

impl UnitarySpec {
    pub fn build(&self, dim: usize) -> Result<UnitaryMatrix, CliError> {
        let u = match self {
            UnitarySpec::Cnot => cnot(),
            UnitarySpec::Identity => UnitaryMatrix::identity(dim),
            UnitarySpec::UTheta(t) => u_theta(*t),
            UnitarySpec::Haar(seed) => haar_random(dim, RngSeed(*seed)).map_err(CliError::usage)?,
            UnitarySpec::File(path) => MatrixFile::read(Path::new(path))?.to_unitary()?,
        };
        if u.dim() != dim {
            return Err(CliError::Usage(format!(
                "unitary {self:?} is {0}x{0} but the state needs {dim}x{dim}",
                u.dim()
            )));
        }
        Ok(u)
    }

    pub fn theta(&self) -> Option<f64> {
        match self {
            UnitarySpec::UTheta(t) => Some(*t),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unitary_specs() {
        assert_eq!("cnot".parse::<UnitarySpec>().unwrap(), UnitarySpec::Cnot);
        assert_eq!(
            "utheta:1.5".parse::<UnitarySpec>().unwrap(),
            UnitarySpec::UTheta(1.5)
        );
        assert_eq!(
            "haar:42".parse::<UnitarySpec>().unwrap(),
            UnitarySpec::Haar(42)
        );
        assert!("utheta".parse::<UnitarySpec>().is_err());
        assert!("haar:x".parse::<UnitarySpec>().is_err());
        assert!("rot".parse::<UnitarySpec>().is_err());
    }

    #[test]
    fn parses_state_kinds() {
        assert_eq!("werner".parse::<StateKind>().unwrap(), StateKind::Werner);
        assert_eq!(
            "file:a.json".parse::<StateKind>().unwrap(),
            StateKind::File("a.json".into())
        );
        assert!("file:".parse::<StateKind>().is_err());
        assert!("ghz".parse::<StateKind>().is_err());
    }

    #[test]
    fn matrix_file_round_trip() {
        let rho = boundary_rank3();
        let f = MatrixFile::from_matrix(rho.matrix(), rho.dims());
        let json = serde_json::to_string(&f).unwrap();
        let back: MatrixFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_state().unwrap(), rho);
    }

    #[test]
    fn matrix_file_rejections() {
        let bad_trace = MatrixFile {
            dims: [2, 2],
            re: ComplexMatrix::identity(4)
                .entries()
                .iter()
                .map(|z| z.re)
                .collect(),
            im: vec![],
        };
        assert!(matches!(bad_trace.to_state(), Err(CliError::Usage(_))));
        let short = MatrixFile {
            dims: [2, 2],
            re: vec![0.25; 4],
            im: vec![],
        };
        assert!(matches!(short.to_state(), Err(CliError::Usage(_))));
        let mut skew =
            MatrixFile::from_matrix(boundary_rank3().matrix(), BipartiteDims::two_qubits());
        skew.im[1] = 1e-6;
        assert!(matches!(skew.to_state(), Err(CliError::Usage(_))));
        // deviations inside the file tolerance are accepted
        let mut nearly =
            MatrixFile::from_matrix(boundary_rank3().matrix(), BipartiteDims::two_qubits());
        nearly.re[0] += 1e-9;
        assert!(nearly.to_state().is_ok());
    }
}
