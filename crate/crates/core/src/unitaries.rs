//! Fixed gates and a Haar-distributed unitary sampler.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, re, ComplexMatrix, ONE, ZERO};

/// Maximum tolerated `max |U^dagger U - I|`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Recorded in run manifests so scatter data can be regenerated.
pub const RNG_ALGORITHM: &str =
    "ChaCha20 (rand_chacha 0.3): seed_from_u64(seed), stream = sample index; Ginibre + QR with R-diagonal phase fix";

/// Square matrix with `U^dagger U = I` to within [`UNITARY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, UNITARY_TOL)
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = m.unitarity_defect();
        if !(defect <= tol) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }
}

/// Seed for reproducible sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Generator for draw `index`. Distinct indices use disjoint ChaCha
    /// streams, so parallel scans are order independent.
    pub fn rng_for(self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[1.0, -1.0])
}

/// CNOT with the first qubit as control.
pub fn cnot() -> UnitaryMatrix {
    #[rustfmt::skip]
    let m = ComplexMatrix::from_real(4, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 1.0, 0.0,
    ]).unwrap();
    UnitaryMatrix(m)
}

/// Real symmetric one-parameter two-qubit unitary
/// ```text
/// [ cos θ    0       0      sin θ ]
/// [ 0        cos θ   sin θ  0     ]
/// [ 0        sin θ  -cos θ  0     ]
/// [ sin θ    0       0     -cos θ ]
/// ```
pub fn u_theta(theta: f64) -> UnitaryMatrix {
    let (s, co) = theta.sin_cos();
    #[rustfmt::skip]
    let m = ComplexMatrix::from_real(4, 4, &[
        co,  0.0, 0.0, s,
        0.0, co,  s,   0.0,
        0.0, s,  -co,  0.0,
        s,   0.0, 0.0, -co,
    ]).unwrap();
    UnitaryMatrix(m)
}

/// Haar-random `n x n` unitary drawn from `rng`.
///
/// A complex Ginibre matrix is QR-factorised and each column of `Q` is
/// multiplied by the phase of the matching diagonal entry of `R`, which
/// removes the bias of the bare factorisation.
pub fn haar_random_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    assert!(n >= 1, "dimension must be positive");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        entries.push(Complex64::new(a * scale, b * scale));
    }
    let ginibre = DMatrix::from_row_slice(n, n, &entries);
    let qr = ginibre.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            re(1.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix(ComplexMatrix::from_nalgebra(q))
}

/// Haar-random unitary from stream 0 of `seed`.
pub fn haar_random(n: usize, seed: RngSeed) -> Result<UnitaryMatrix> {
    if n < 2 {
        return Err(Error::DimensionMismatch {
            expected: "n >= 2".into(),
            found: n.to_string(),
        });
    }
    Ok(haar_random_with(n, &mut seed.rng_for(0)))
}
