//! Finite-section Fredholm index diagnostic for Toeplitz compressions.
//!
//! The compression A of T to the discrete Hardy range is square, so the raw
//! near-null counts of A and A^H are always equal; the index lives in where
//! those null vectors sit. Genuine kernel and cokernel elements of a Toeplitz
//! operator with a smooth winding symbol are low-frequency along the curve,
//! while the finite section manufactures spurious null vectors concentrated
//! at the truncation cutoff (the top of the retained frequency band). We
//! count only the genuine ones on each side.

use crate::ops::cmatrix::{hermitian_eigen, CMatrix};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IndexError {
    #[error("projection range is empty")]
    EmptyRange,
    #[error("tolerance must be in (0, 1), got {0}")]
    BadTolerance(f64),
    #[error("operator dimensions {t} do not match projection {p}")]
    DimensionMismatch { t: usize, p: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub index: i64,
    /// Near-null singular values of the compression (same count both sides).
    pub null_count: usize,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub sigma_max: f64,
    /// Smallest kept singular value over largest dropped one; infinite when
    /// nothing is dropped.
    pub gap_ratio: f64,
    /// False when the dropped/kept separation is under 10x.
    pub reliable: bool,
}

/// Dominant DFT bin of a sample vector along the curve parameter.
fn dominant_bin(u: &[Complex64]) -> usize {
    let n = u.len();
    let mut best = (0usize, -1.0f64);
    for b in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &uj) in u.iter().enumerate() {
            let th = -2.0 * std::f64::consts::PI * (b * j % n) as f64 / n as f64;
            acc += uj * Complex64::from_polar(1.0, th);
        }
        let p = acc.norm_sqr();
        if p > best.1 {
            best = (b, p);
        }
    }
    best.0
}

fn is_low_frequency(bin: usize, n: usize) -> bool {
    bin < n / 4 || bin > 3 * n / 4
}

pub fn fredholm_index(t: &CMatrix, p: &CMatrix, tol: f64) -> Result<IndexReport, IndexError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(IndexError::BadTolerance(tol));
    }
    if t.rows != p.rows || t.cols != p.cols || t.rows != t.cols {
        return Err(IndexError::DimensionMismatch { t: t.rows, p: p.rows });
    }
    let n = p.rows;
    // Orthonormal basis Q of the discrete Hardy range: eigenvectors of the
    // Hermitian P P^H with eigenvalue above 1/2.
    let gram = p.mul(&p.adjoint());
    let eig = hermitian_eigen(&gram);
    let kept: Vec<usize> = (0..n).filter(|&i| eig.values[i] > 0.5).collect();
    let r = kept.len();
    if r == 0 {
        return Err(IndexError::EmptyRange);
    }
    let mut q = CMatrix::zeros(n, r);
    for (col, &src) in kept.iter().enumerate() {
        for i in 0..n {
            q.set(i, col, eig.vectors.get(i, src));
        }
    }
    let a = q.adjoint().mul(&t.mul(&q));

    // Singular values and right singular vectors of A and of A^H.
    let right = hermitian_eigen(&a.adjoint().mul(&a));
    let left = hermitian_eigen(&a.mul(&a.adjoint()));
    // Eigenvalues of A^H A carry absolute noise around 1e-16 * lambda_max;
    // snap that floor to zero so sqrt does not lift it to the tol scale.
    let lambda_max = right.values.iter().cloned().fold(0.0, f64::max);
    let floor = 1e-13 * lambda_max;
    let sigmas: Vec<f64> = right
        .values
        .iter()
        .map(|&v| if v < floor { 0.0 } else { v.sqrt() })
        .collect();
    let sigma_max = sigmas.iter().cloned().fold(0.0, f64::max);
    let cut = tol * sigma_max;
    let null_count = sigmas.iter().filter(|&&s| s < cut).count();
    let (gap_ratio, reliable) = if null_count == 0 {
        (f64::INFINITY, true)
    } else {
        let dropped = sigmas[null_count - 1].max(1e-300);
        let kept_sigma = if null_count < r {
            sigmas[null_count]
        } else {
            sigma_max
        };
        let ratio = kept_sigma / dropped;
        (ratio, ratio >= 10.0)
    };

    let mut kernel_dim = 0usize;
    let mut cokernel_dim = 0usize;
    for m in 0..null_count {
        let v: Vec<Complex64> = (0..r).map(|i| right.vectors.get(i, m)).collect();
        let u = q.apply(&v);
        if is_low_frequency(dominant_bin(&u), n) {
            kernel_dim += 1;
        }
        let w: Vec<Complex64> = (0..r).map(|i| left.vectors.get(i, m)).collect();
        let uw = q.apply(&w);
        if is_low_frequency(dominant_bin(&uw), n) {
            cokernel_dim += 1;
        }
    }
    Ok(IndexReport {
        index: kernel_dim as i64 - cokernel_dim as i64,
        null_count,
        kernel_dim,
        cokernel_dim,
        sigma_max,
        gap_ratio,
        reliable,
    })
}
