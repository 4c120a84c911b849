//! Gaussian copula benchmark: a stationary Gaussian field with exponential
//! correlation, pointwise transformed to standard Gumbel margins.
//!
//! This is the non-max-stable reference structure; any asymptotic dependence
//! it appears to have at finite levels vanishes in the limit.

use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{MarginScale, ReplicateMatrix, SiteGrid};
use crate::rng::substream;
use crate::{Error, Result};

/// How `lambda` enters the exponential correlation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrParam {
    /// `rho(h) = exp(-lambda * h)`.
    #[default]
    Rate,
    /// `rho(h) = exp(-h / lambda)`.
    Range,
}

/// Exponential correlation matrix over the grid's pairwise distances.
pub fn exp_correlation(grid: &SiteGrid, lambda: f64, corr: CorrParam) -> Array2<f64> {
    let m = grid.len();
    let mut rho = Array2::zeros((m, m));
    for i in 0..m {
        rho[[i, i]] = 1.0;
        for j in (i + 1)..m {
            let h = grid.distance(i, j);
            let r = match corr {
                CorrParam::Rate => (-lambda * h).exp(),
                CorrParam::Range => (-h / lambda).exp(),
            };
            rho[[i, j]] = r;
            rho[[j, i]] = r;
        }
    }
    rho
}

const JITTERS: [f64; 4] = [0.0, 1e-14, 1e-12, 1e-10];

/// Lower-triangular Cholesky factor of a symmetric matrix, retrying with a
/// diagonal jitter up to 1e-10 before giving up.
pub fn cholesky_spd(matrix: &Array2<f64>) -> Result<Array2<f64>> {
    let (n, m) = matrix.dim();
    if n != m {
        return Err(Error::domain(format!("matrix is {n}x{m}, not square")));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = (matrix[[i, j]] - matrix[[j, i]]).abs();
            if diff > 1e-12 * matrix[[i, i]].abs().max(1.0) {
                return Err(Error::domain(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    for &jitter in &JITTERS {
        if let Some(l) = try_cholesky(matrix, jitter) {
            return Ok(l);
        }
    }
    Err(Error::NotPositiveDefinite)
}

fn try_cholesky(a: &Array2<f64>, jitter: f64) -> Option<Array2<f64>> {
    let n = a.nrows();
    let mut l = Array2::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]] + jitter;
        for t in 0..j {
            d -= l[[j, t]] * l[[j, t]];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let ljj = d.sqrt();
        l[[j, j]] = ljj;
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for t in 0..j {
                s -= l[[i, t]] * l[[j, t]];
            }
            l[[i, j]] = s / ljj;
        }
    }
    Some(l)
}

/// Simulate the Gaussian-copula field on Gumbel margins.
pub fn simulate_gauss_copula(
    grid: &SiteGrid,
    lambda: f64,
    corr: CorrParam,
    n_rep: usize,
    seed: u64,
) -> Result<ReplicateMatrix> {
    if grid.is_empty() {
        return Err(Error::domain("site grid must be non-empty"));
    }
    if n_rep == 0 {
        return Err(Error::domain("n_rep must be at least 1"));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda {lambda} must be positive")));
    }

    let rho = exp_correlation(grid, lambda, corr);
    let chol = cholesky_spd(&rho)?;
    let m = grid.len();
    let normal = Normal::standard();

    let rows: Vec<Vec<f64>> = (0..n_rep)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, rep as u64);
            let g: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            (0..m)
                .map(|i| {
                    let mut z = 0.0;
                    for t in 0..=i {
                        z += chol[[i, t]] * g[t];
                    }
                    let p = normal
                        .cdf(z)
                        .clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
                    -(-p.ln()).ln()
                })
                .collect()
        })
        .collect();

    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let values = Array2::from_shape_vec((n_rep, m), flat).expect("shape");
    ReplicateMatrix::new(values, MarginScale::Gumbel, Some(grid.clone()))
}
