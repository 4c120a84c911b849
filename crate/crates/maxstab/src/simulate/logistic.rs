//! Symmetric multivariate logistic dependence on Gumbel margins.
//!
//! Replicates follow the joint CDF `exp{-(sum z_j^(-1/alpha))^alpha}` on unit
//! Fréchet margins, sampled with the positive-stable mixture construction:
//! `Z_j = (S / E_j)^alpha` with `S` positive alpha-stable and `E_j` unit
//! exponentials. `alpha = 1` is exact independence and skips the stable draw.

use rand::Rng;
use rand_distr::{Exp1, Open01};
use rayon::prelude::*;
use std::f64::consts::PI;

use super::{MarginScale, ReplicateMatrix};
use crate::rng::substream;
use crate::{Error, Result};

/// Log of a positive alpha-stable variate from its (uniform, exponential) seed.
///
/// Kanter's representation: with `t = pi * u` and `c = 1 - alpha`,
/// `S = (a(t) / w)^(c/alpha)` where
/// `a(t) = sin(c t) * sin(alpha t)^(alpha/c) / sin(t)^(1/c)`.
/// The Laplace transform of `S` is `exp(-s^alpha)`.
fn log_positive_stable(alpha: f64, u: f64, w: f64) -> f64 {
    let t = PI * u;
    let c = 1.0 - alpha;
    let log_a = (c * t).sin().ln() + (alpha / c) * (alpha * t).sin().ln() - t.sin().ln() / c;
    (c / alpha) * (log_a - w.ln())
}

/// Positive alpha-stable variate with Laplace transform `exp(-s^alpha)`.
///
/// `uniform` must lie in (0, 1) and `exponential` must be positive; the
/// degenerate case `alpha = 1` (S identically 1) is handled by the caller.
pub fn positive_stable(alpha: f64, uniform: f64, exponential: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0, 1)")));
    }
    if !(uniform > 0.0 && uniform < 1.0) {
        return Err(Error::domain(format!("uniform seed {uniform} outside (0, 1)")));
    }
    if !(exponential > 0.0) || !exponential.is_finite() {
        return Err(Error::domain(format!(
            "exponential seed {exponential} must be positive and finite"
        )));
    }
    Ok(log_positive_stable(alpha, uniform, exponential).exp())
}

/// Simulate the exchangeable logistic model on Gumbel margins.
pub fn simulate_logistic(m: usize, alpha: f64, n_rep: usize, seed: u64) -> Result<ReplicateMatrix> {
    if m == 0 {
        return Err(Error::domain("need at least one site"));
    }
    if n_rep == 0 {
        return Err(Error::domain("n_rep must be at least 1"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0, 1]")));
    }

    let rows: Vec<Vec<f64>> = (0..n_rep)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, rep as u64);
            let log_s = if alpha < 1.0 {
                let u: f64 = rng.sample(Open01);
                let w: f64 = rng.sample(Exp1);
                log_positive_stable(alpha, u, w)
            } else {
                0.0
            };
            (0..m)
                .map(|_| {
                    let e: f64 = rng.sample(Exp1);
                    // Gumbel value: alpha * (log S - log E), the log of (S/E)^alpha
                    alpha * (log_s - e.ln())
                })
                .collect()
        })
        .collect();

    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let values = ndarray::Array2::from_shape_vec((n_rep, m), flat).expect("shape");
    ReplicateMatrix::new(values, MarginScale::Gumbel, None)
}
