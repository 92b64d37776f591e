//! Quantum switch of two channels with a qubit control.
//!
//! The joint Kraus operators are
//! `W_ij = K1_i K2_j ⊗ |0><0| + K2_j K1_i ⊗ |1><1|`, acting on
//! `system ⊗ control` with the control as the least significant factor.
//! After the switch the control is measured in `{|+>, |->}`.
//!
//! For single-Kraus (unitary) channels and control `|+>` the post-selected
//! state collapses to `L ρ L^dagger / Tr[L ρ L^dagger]` with
//! `L = (U1 U2 ± U2 U1)/2`; [`switch_unitary_closed`] evaluates that form
//! directly and the Kraus route serves as its reference.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dagger, kron, re, BipartiteDims, ComplexMatrix, ZERO};
use crate::states::DensityMatrix;
use crate::unitaries::UnitaryMatrix;

/// Kraus completeness tolerance.
pub const KRAUS_TOL: f64 = 1e-10;

/// Branches whose unnormalized trace falls below this are rejected.
pub const ZERO_PROBABILITY_TOL: f64 = 1e-12;

/// A trace-preserving channel given by its Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::InvalidChannel {
            defect: f64::INFINITY,
        })?;
        let n = first.rows();
        if let Some(bad) = ops.iter().find(|k| k.rows() != n || k.cols() != n) {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} Kraus operators"),
                found: format!("{}x{}", bad.rows(), bad.cols()),
            });
        }
        let mut sum = ComplexMatrix::zeros(n, n);
        for k in &ops {
            sum = &sum + &(&dagger(k) * k);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(n));
        if !(defect <= KRAUS_TOL) {
            return Err(Error::InvalidChannel { defect });
        }
        Ok(Self { ops })
    }

    pub fn unitary(u: &UnitaryMatrix) -> Self {
        Self {
            ops: vec![u.matrix().clone()],
        }
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }
}

/// Pure control qubit `a|0> + b|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlState {
    a: Complex64,
    b: Complex64,
}

impl ControlState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidControl { norm });
        }
        Ok(Self { a, b })
    }

    pub fn plus() -> Self {
        Self {
            a: re(FRAC_1_SQRT_2),
            b: re(FRAC_1_SQRT_2),
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.a, self.b]
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.amplitudes())
    }
}

impl Default for ControlState {
    fn default() -> Self {
        Self::plus()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// `|±> = (|0> ± |1>)/√2`.
    pub fn vector(self) -> [Complex64; 2] {
        let h = re(FRAC_1_SQRT_2);
        match self {
            Branch::Plus => [h, h],
            Branch::Minus => [h, -h],
        }
    }

    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

impl FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(format!("unknown branch `{other}` (expected plus or minus)")),
        }
    }
}

/// Post-selected system state for one control outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchOutcome {
    pub state: DensityMatrix,
    pub probability: f64,
    pub branch: Branch,
}

/// Joint system ⊗ control state produced by the switch.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub matrix: ComplexMatrix,
    pub system: BipartiteDims,
}

/// Applies the switch superchannel to `rho ⊗ |control><control|`.
pub fn switch_joint(
    ch1: &KrausChannel,
    ch2: &KrausChannel,
    rho: &DensityMatrix,
    control: ControlState,
) -> Result<JointState> {
    let n = rho.dim();
    for ch in [ch1, ch2] {
        if ch.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("channel on {n} dimensions"),
                found: format!("{} dimensions", ch.dim()),
            });
        }
    }
    let p0 = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
    let p1 = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
    let input = kron(rho.matrix(), &control.projector());
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    for k1 in ch1.ops() {
        for k2 in ch2.ops() {
            let w = &kron(&(k1 * k2), &p0) + &kron(&(k2 * k1), &p1);
            out = &out + &(&(&w * &input) * &dagger(&w));
        }
    }
    Ok(JointState {
        matrix: out,
        system: rho.dims(),
    })
}

/// Projects the control onto `|±>` and renormalizes the system state.
pub fn measure_control(joint: &JointState, branch: Branch) -> Result<SwitchOutcome> {
    let n = joint.system.total();
    if joint.matrix.rows() != 2 * n || !joint.matrix.is_square() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0} joint state", 2 * n),
            found: format!("{}x{}", joint.matrix.rows(), joint.matrix.cols()),
        });
    }
    let v = branch.vector();
    let reduced = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = ZERO;
        for a in 0..2 {
            for b in 0..2 {
                acc += v[a].conj() * joint.matrix.get(2 * i + a, 2 * j + b) * v[b];
            }
        }
        acc
    });
    normalize_branch(reduced, joint.system, branch)
}

/// `L = (U1 U2 ± U2 U1) / 2` for the chosen branch.
pub fn switch_operator(u1: &UnitaryMatrix, u2: &UnitaryMatrix, branch: Branch) -> ComplexMatrix {
    let a = u1.matrix() * u2.matrix();
    let b = u2.matrix() * u1.matrix();
    (&a + &b.scale_real(branch.sign())).scale_real(0.5)
}

/// Closed-form switch of two unitary channels with control `|+>`.
pub fn switch_unitary_closed(
    u1: &UnitaryMatrix,
    u2: &UnitaryMatrix,
    rho: &DensityMatrix,
    branch: Branch,
) -> Result<SwitchOutcome> {
    let n = rho.dim();
    for u in [u1, u2] {
        if u.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} unitary"),
                found: format!("{0}x{0}", u.dim()),
            });
        }
    }
    let l = switch_operator(u1, u2, branch);
    let unnormalized = &(&l * rho.matrix()) * &dagger(&l);
    normalize_branch(unnormalized, rho.dims(), branch)
}

fn normalize_branch(
    m: ComplexMatrix,
    dims: BipartiteDims,
    branch: Branch,
) -> Result<SwitchOutcome> {
    let probability = m.trace().re;
    if !(probability >= ZERO_PROBABILITY_TOL) {
        return Err(Error::ZeroProbabilityBranch { probability });
    }
    let state = m.scale_real(1.0 / probability).hermitian_part();
    Ok(SwitchOutcome {
        state: DensityMatrix::from_matrix_unchecked(state, dims),
        probability,
        branch,
    })
}

/// Probability of `branch` without forming the normalized state.
pub fn branch_probability(
    u1: &UnitaryMatrix,
    u2: &UnitaryMatrix,
    rho: &DensityMatrix,
    branch: Branch,
) -> f64 {
    let l = switch_operator(u1, u2, branch);
    (&(&l * rho.matrix()) * &dagger(&l)).trace().re
}
