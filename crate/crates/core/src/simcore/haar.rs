use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::dense::DenseMatrix;
use super::state::{check_qubits, StateVector};
use crate::error::{Error, Result};

/// Default cap on qubits for dense unitaries (matrix side 64).
pub const DENSE_UNITARY_CAP: usize = 6;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn sample_haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    check_qubits(n)?;
    let amps: Vec<C64> = (0..1usize << n).map(|_| gaussian(rng)).collect();
    StateVector::normalized(amps)
}

pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DenseMatrix> {
    sample_haar_unitary_capped(n, DENSE_UNITARY_CAP, rng)
}

/// Haar-random unitary on `n` qubits: Gram–Schmidt on the columns of a
/// complex Ginibre matrix. Gram–Schmidt yields the QR factor whose R has a
/// positive real diagonal, which is the phase fixing that makes Q Haar.
pub fn sample_haar_unitary_capped<R: Rng + ?Sized>(
    n: usize,
    cap: usize,
    rng: &mut R,
) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("unitary needs at least one qubit".into()));
    }
    if n > cap {
        return Err(Error::TooManyQubits { requested: n, cap });
    }
    let dim = 1usize << n;
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        // two passes keep the result orthonormal to ~1e-15
        for _ in 0..2 {
            for c in &columns {
                let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        columns.push(v);
    }
    DenseMatrix::from_columns(&columns)
}
