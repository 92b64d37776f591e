#![allow(dead_code)]

use abssep::linalg::{dagger, ComplexMatrix};
use abssep::{BipartiteDims, DensityMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random density matrix of the given rank, `G G^dagger / Tr` with `G` an
/// `n x rank` Ginibre matrix.
pub fn random_density<R: Rng>(dims: BipartiteDims, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dims.total(), rank, rng);
    let m = &g * &dagger(&g);
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part(), dims, 1e-10).unwrap()
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(n, n, rng).hermitian_part()
}
