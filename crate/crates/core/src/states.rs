//! Constructors for the state families under study.
//!
//! Basis ordering is `|00>, |01>, |10>, |11>` with subsystem A as the most
//! significant index. Bell vectors are
//! `phi± = (|00> ± |11>)/√2` and `psi± = (|01> ± |10>)/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, re, BipartiteDims, ComplexMatrix, ZERO};
use crate::unitaries::{pauli_x, pauli_y, pauli_z};

/// Slack admitted on `p_i >= 0` so that grid points on facets stay valid.
pub const VALIDITY_SLACK: f64 = 1e-12;

const PARAM_SLACK: f64 = 1e-9;

/// A bipartite density matrix tagged with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: BipartiteDims,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity and unit trace to within `tol`.
    pub fn new(matrix: ComplexMatrix, dims: BipartiteDims, tol: f64) -> Result<Self> {
        dims.check(&matrix)?;
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian {
                defect,
                tolerance: tol,
            });
        }
        let tr = matrix.trace();
        if (tr - re(1.0)).norm() > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {:.6e}{:+.6e}i, expected 1",
                tr.re, tr.im
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Wraps a matrix already known to be a state. Only the shape is checked.
    pub fn from_matrix_unchecked(matrix: ComplexMatrix, dims: BipartiteDims) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }
}

/// Parameters of `p |xi><xi| + (1-p) I/4` with
/// `|xi> = cos(gamma)|00> + e^{i phi} sin(gamma)|11>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerParams {
    pub p: f64,
    pub gamma: f64,
    pub phi: f64,
}

impl WernerParams {
    /// Maximally entangled `|xi>` (gamma = π/4, phi = 0).
    pub fn maximally_entangled(p: f64) -> Self {
        Self {
            p,
            gamma: PI / 4.0,
            phi: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_range("p", self.p, 0.0, 1.0, "[0, 1]")?;
        check_range("gamma", self.gamma, 0.0, PI, "[0, π]")?;
        check_range("phi", self.phi, 0.0, 2.0 * PI, "[0, 2π]")?;
        Ok(())
    }
}

fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if !(value >= lo - PARAM_SLACK && value <= hi + PARAM_SLACK) {
        return Err(Error::ParamOutOfRange { name, value, range });
    }
    Ok(())
}

/// Bell-diagonal parametrisations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BdParams {
    /// Weights on `phi+, phi-, psi+, psi-`.
    Probs([f64; 4]),
    /// Coefficients of `XX, YY, ZZ`.
    Correlations([f64; 3]),
}

impl BdParams {
    pub fn to_state(&self) -> Result<DensityMatrix> {
        match *self {
            BdParams::Probs(p) => bd_from_probs(p),
            BdParams::Correlations([c1, c2, c3]) => bd_from_correlations(c1, c2, c3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    pub fn vector(self) -> [Complex64; 4] {
        let h = re(FRAC_1_SQRT_2);
        match self {
            Bell::PhiPlus => [h, ZERO, ZERO, h],
            Bell::PhiMinus => [h, ZERO, ZERO, -h],
            Bell::PsiPlus => [ZERO, h, h, ZERO],
            Bell::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }

    pub fn projector(self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vector())
    }
}

/// `(|00><00| + |01><01| + |10><10|) / 3`, a rank-3 state on the AS boundary.
pub fn boundary_rank3() -> DensityMatrix {
    let t = 1.0 / 3.0;
    DensityMatrix::from_matrix_unchecked(
        ComplexMatrix::from_diagonal(&[t, t, t, 0.0]),
        BipartiteDims::two_qubits(),
    )
}

/// Flat rank-`(2d-1)` state `diag(1/(2d-1), ..., 1/(2d-1), 0)` in `2 ⊗ d`.
pub fn flat_rank_deficient(d: usize) -> DensityMatrix {
    let dims = BipartiteDims::qubit_qudit(d);
    let n = dims.total();
    let w = 1.0 / (n - 1) as f64;
    let mut diag = vec![w; n];
    diag[n - 1] = 0.0;
    DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_diagonal(&diag), dims)
}

pub fn modified_werner(params: WernerParams) -> Result<DensityMatrix> {
    params.validate()?;
    let WernerParams { p, gamma, phi } = params;
    let xi = [
        re(gamma.cos()),
        ZERO,
        ZERO,
        Complex64::from_polar(gamma.sin(), phi),
    ];
    let pure = ComplexMatrix::projector(&xi).scale_real(p);
    let noise = ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    Ok(DensityMatrix::from_matrix_unchecked(
        &pure + &noise,
        BipartiteDims::two_qubits(),
    ))
}

/// `sum_k p_k |B_k><B_k|` over `phi+, phi-, psi+, psi-`.
pub fn bd_from_probs(probs: [f64; 4]) -> Result<DensityMatrix> {
    if probs.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidProbs {
            probs: probs.to_vec(),
            reason: "non-finite entry",
        });
    }
    if probs.iter().any(|&p| p < -VALIDITY_SLACK) {
        return Err(Error::InvalidProbs {
            probs: probs.to_vec(),
            reason: "negative weight",
        });
    }
    if (probs.iter().sum::<f64>() - 1.0).abs() > VALIDITY_SLACK {
        return Err(Error::InvalidProbs {
            probs: probs.to_vec(),
            reason: "weights do not sum to 1",
        });
    }
    let mut m = ComplexMatrix::zeros(4, 4);
    for (bell, &p) in Bell::ALL.iter().zip(&probs) {
        m = &m + &bell.projector().scale_real(p);
    }
    Ok(DensityMatrix::from_matrix_unchecked(
        m,
        BipartiteDims::two_qubits(),
    ))
}

/// Bell weights `(phi+, phi-, psi+, psi-)` of `(I + sum_i c_i σ_i⊗σ_i)/4`.
pub fn correlations_to_probs(c1: f64, c2: f64, c3: f64) -> [f64; 4] {
    [
        (1.0 + c1 - c2 + c3) / 4.0,
        (1.0 - c1 + c2 + c3) / 4.0,
        (1.0 + c1 + c2 - c3) / 4.0,
        (1.0 - c1 - c2 - c3) / 4.0,
    ]
}

/// Inverse of [`correlations_to_probs`].
pub fn probs_to_correlations(p: [f64; 4]) -> [f64; 3] {
    [
        p[0] - p[1] + p[2] - p[3],
        -p[0] + p[1] + p[2] - p[3],
        p[0] + p[1] - p[2] - p[3],
    ]
}

/// `(I + c1 XX + c2 YY + c3 ZZ) / 4`, rejected if any Bell weight is negative.
pub fn bd_from_correlations(c1: f64, c2: f64, c3: f64) -> Result<DensityMatrix> {
    let weights = correlations_to_probs(c1, c2, c3);
    if weights.iter().any(|&p| !(p >= -VALIDITY_SLACK)) {
        return Err(Error::InvalidState {
            c1,
            c2,
            c3,
            weights,
        });
    }
    let terms = [
        (c1, kron(&pauli_x(), &pauli_x())),
        (c2, kron(&pauli_y(), &pauli_y())),
        (c3, kron(&pauli_z(), &pauli_z())),
    ];
    let mut m = ComplexMatrix::identity(4);
    for (coeff, op) in &terms {
        m = &m + &op.scale_real(*coeff);
    }
    Ok(DensityMatrix::from_matrix_unchecked(
        m.scale_real(0.25),
        BipartiteDims::two_qubits(),
    ))
}

/// Weights `(3α - 1/2, 1/2 - α, 1/2 - α, 1/2 - α)` for `1/6 <= α <= 1/2`.
pub fn bd_alpha_probs(alpha: f64) -> Result<[f64; 4]> {
    check_range("alpha", alpha, 1.0 / 6.0, 0.5, "[1/6, 1/2]")?;
    let rest = (0.5 - alpha).max(0.0);
    Ok([(3.0 * alpha - 0.5).max(0.0), rest, rest, rest])
}

pub fn bd_alpha_family(alpha: f64) -> Result<DensityMatrix> {
    let probs = bd_alpha_probs(alpha)?;
    // Clamping at the endpoints can leave a 1e-16 sum defect; renormalize.
    let total: f64 = probs.iter().sum();
    bd_from_probs(probs.map(|p| p / total))
}

/// `I / (dA dB)`.
pub fn maximally_mixed(dims: BipartiteDims) -> DensityMatrix {
    let n = dims.total();
    DensityMatrix::from_matrix_unchecked(
        ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
        dims,
    )
}
