//! Gumbel/Fréchet margin algebra and the constrained location MLE.
//!
//! The subset maximum of a max-stable field on standard Gumbel margins is
//! again Gumbel with unit scale and a location in `[0, log k]`, so the only
//! free parameter under the null is the location. The estimator here is the
//! closed-form unit-scale Gumbel MLE, clipped to that interval.

use crate::simulate::{MarginScale, ReplicateMatrix};
use crate::{Error, Result};

/// Standard Gumbel CDF, `exp(-exp(-z))`.
pub fn gumbel_cdf(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::NonFinite("gumbel_cdf input"));
    }
    Ok((-(-z).exp()).exp())
}

/// Standard Gumbel quantile, `-log(-log p)` for `p` in (0, 1).
pub fn gumbel_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("probability {p} outside (0, 1)")));
    }
    Ok(-(-p.ln()).ln())
}

/// Elementwise log: standard Fréchet values to standard Gumbel scale.
pub fn frechet_to_gumbel(values: &[f64]) -> Result<Vec<f64>> {
    for &v in values {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!(
                "Fréchet value {v} is not strictly positive and finite"
            )));
        }
    }
    Ok(values.iter().map(|v| v.ln()).collect())
}

/// Elementwise exp: Gumbel scale back to standard Fréchet scale.
pub fn gumbel_to_frechet(values: &[f64]) -> Result<Vec<f64>> {
    for &v in values {
        if !v.is_finite() {
            return Err(Error::NonFinite("gumbel_to_frechet input"));
        }
    }
    Ok(values.iter().map(|v| v.exp()).collect())
}

/// Rank-transform every column of a raw-scale matrix to standard Gumbel.
///
/// The value with rank `r` among `n` (ties get the average rank) maps to
/// `-log(-log(r/(n+1)))`. Column-wise order is preserved; a constant column
/// is rejected as a degenerate margin.
pub fn empirical_to_gumbel(matrix: &ReplicateMatrix) -> Result<ReplicateMatrix> {
    if matrix.scale() != MarginScale::Raw {
        return Err(Error::ScaleMismatch {
            expected: MarginScale::Raw,
            got: matrix.scale(),
        });
    }
    let n = matrix.n_rep();
    if n < 2 {
        return Err(Error::domain("rank transform needs at least 2 replicates"));
    }
    let mut out = matrix.values().clone();
    for j in 0..matrix.n_sites() {
        let col: Vec<f64> = matrix.values().column(j).to_vec();
        let ranks = average_ranks(&col);
        if col.iter().all(|&v| v == col[0]) {
            return Err(Error::DegenerateMargin(j));
        }
        for (i, &r) in ranks.iter().enumerate() {
            let p = r / (n as f64 + 1.0);
            out[[i, j]] = -(-p.ln()).ln();
        }
    }
    ReplicateMatrix::new(out, MarginScale::Gumbel, matrix.grid().cloned())
}

/// 1-based ranks with ties replaced by the group average.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1..=j+1 share the average (i+j+2)/2
        let avg = (i + j + 2) as f64 / 2.0;
        for t in i..=j {
            ranks[order[t]] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Location estimate for a unit-scale Gumbel sample, with the max-stability
/// bound `[0, log k]` applied by clipping.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LocationEstimate {
    /// Unconstrained maximum likelihood estimate.
    pub mu_hat: f64,
    /// `mu_hat` clipped to `[0, log k]`.
    pub mu_clamped: f64,
    /// Cardinality of the site subset the sample came from.
    pub k: usize,
    /// Sample size used in the fit.
    pub n: usize,
}

impl LocationEstimate {
    /// Whether the constraint was active.
    pub fn clamped(&self) -> bool {
        self.mu_hat != self.mu_clamped
    }
}

/// Maximum likelihood location of a Gumbel(mu, 1) sample, clipped to `[0, log k]`.
///
/// The unit-scale Gumbel likelihood is maximised in closed form by
/// `mu = -log((1/n) sum exp(-y_i))`, evaluated with a log-sum-exp shift so
/// large `|y|` cannot overflow. The likelihood is concave in `mu`, so clipping
/// the unconstrained maximiser to the interval gives the constrained one.
pub fn fit_gumbel_location(sample: &[f64], k: usize) -> Result<LocationEstimate> {
    if sample.is_empty() {
        return Err(Error::domain("cannot fit location to an empty sample"));
    }
    if k < 1 {
        return Err(Error::domain("subset cardinality k must be at least 1"));
    }
    let mut shift = f64::NEG_INFINITY;
    for &y in sample {
        if !y.is_finite() {
            return Err(Error::NonFinite("fit_gumbel_location sample"));
        }
        shift = shift.max(-y);
    }
    let n = sample.len();
    let sum: f64 = sample.iter().map(|&y| (-y - shift).exp()).sum();
    let mu_hat = -(shift + (sum / n as f64).ln());
    let mu_clamped = mu_hat.clamp(0.0, (k as f64).ln());
    Ok(LocationEstimate {
        mu_hat,
        mu_clamped,
        k,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{MarginScale, ReplicateMatrix};
    use approx::assert_abs_diff_eq;
    use ndarray::Array2;
    use proptest::prelude::*;
    use rand::Rng;

    /// Independent maximiser of the Gumbel(mu, 1) log-likelihood by grid search.
    fn grid_search_mu(sample: &[f64], lo: f64, hi: f64, step: f64) -> f64 {
        let loglik = |mu: f64| -> f64 {
            sample.iter().map(|&y| -(y - mu) - (-(y - mu)).exp()).sum()
        };
        let n_steps = ((hi - lo) / step).round() as usize;
        let mut best = lo;
        let mut best_ll = loglik(lo);
        for i in 1..=n_steps {
            let mu = lo + step * i as f64;
            let ll = loglik(mu);
            if ll > best_ll {
                best_ll = ll;
                best = mu;
            }
        }
        best
    }

    #[test]
    fn cdf_known_values() {
        assert_abs_diff_eq!(gumbel_cdf(0.0).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(gumbel_cdf(50.0).unwrap(), 1.0, epsilon = 1e-15);
        let z = -((-(0.5f64.ln())) as f64).ln();
        assert_abs_diff_eq!(gumbel_cdf(z).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn cdf_rejects_non_finite() {
        assert!(gumbel_cdf(f64::NAN).is_err());
        assert!(gumbel_cdf(f64::INFINITY).is_err());
    }

    #[test]
    fn quantile_known_values() {
        assert_abs_diff_eq!(gumbel_quantile(0.5).unwrap(), 0.3665129205816643, epsilon = 1e-12);
        assert_abs_diff_eq!(gumbel_quantile((-1.0f64).exp()).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            gumbel_quantile((-std::f64::consts::E).exp()).unwrap(),
            -1.0,
            epsilon = 1e-12
        );
        assert!(gumbel_quantile(0.0).is_err());
        assert!(gumbel_quantile(1.0).is_err());
        assert!(gumbel_quantile(-0.2).is_err());
        assert!(gumbel_quantile(f64::NAN).is_err());
    }

    #[test]
    fn frechet_gumbel_transforms() {
        let e = std::f64::consts::E;
        assert_eq!(frechet_to_gumbel(&[1.0]).unwrap(), vec![0.0]);
        assert_abs_diff_eq!(frechet_to_gumbel(&[e]).unwrap()[0], 1.0, epsilon = 1e-15);
        let y = frechet_to_gumbel(&[(-2.0f64).exp(), (3.0f64).exp()]).unwrap();
        assert_abs_diff_eq!(y[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(y[1], 3.0, epsilon = 1e-12);
        assert!(frechet_to_gumbel(&[0.0]).is_err());
        assert!(frechet_to_gumbel(&[-1.0]).is_err());
        let x = gumbel_to_frechet(&[-2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(x[0], (-2.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], (3.0f64).exp(), epsilon = 1e-12);
    }

    fn raw_matrix(values: Array2<f64>) -> ReplicateMatrix {
        ReplicateMatrix::new(values, MarginScale::Raw, None).unwrap()
    }

    #[test]
    fn rank_transform_two_values() {
        let m = raw_matrix(Array2::from_shape_vec((2, 1), vec![3.0, 1.0]).unwrap());
        let g = empirical_to_gumbel(&m).unwrap();
        let expect = |p: f64| -(-p.ln()).ln();
        assert_abs_diff_eq!(g.values()[[0, 0]], expect(2.0 / 3.0), epsilon = 1e-15);
        assert_abs_diff_eq!(g.values()[[1, 0]], expect(1.0 / 3.0), epsilon = 1e-15);
        assert_eq!(g.scale(), MarginScale::Gumbel);
    }

    #[test]
    fn rank_transform_preserves_order() {
        let col: Vec<f64> = (0..20).map(|i| (i as f64).sin() * 10.0).collect();
        let m = raw_matrix(Array2::from_shape_vec((20, 1), col.clone()).unwrap());
        let g = empirical_to_gumbel(&m).unwrap();
        for i in 0..20 {
            for t in 0..20 {
                if col[i] < col[t] {
                    assert!(g.values()[[i, 0]] < g.values()[[t, 0]]);
                }
            }
        }
    }

    #[test]
    fn rank_transform_average_ties() {
        let m = raw_matrix(Array2::from_shape_vec((3, 1), vec![1.0, 1.0, 2.0]).unwrap());
        let g = empirical_to_gumbel(&m).unwrap();
        let expect = |p: f64| -(-p.ln()).ln();
        assert_abs_diff_eq!(g.values()[[0, 0]], expect(1.5 / 4.0), epsilon = 1e-15);
        assert_abs_diff_eq!(g.values()[[1, 0]], expect(1.5 / 4.0), epsilon = 1e-15);
        assert_abs_diff_eq!(g.values()[[2, 0]], expect(3.0 / 4.0), epsilon = 1e-15);
    }

    #[test]
    fn rank_transform_idempotent_on_ranks() {
        let mut rng = crate::rng::substream(11, 0);
        let vals: Vec<f64> = (0..30).map(|_| rng.random_range(-5.0..5.0)).collect();
        let m = raw_matrix(Array2::from_shape_vec((10, 3), vals).unwrap());
        let once = empirical_to_gumbel(&m).unwrap();
        let retagged =
            ReplicateMatrix::new(once.values().clone(), MarginScale::Raw, None).unwrap();
        let twice = empirical_to_gumbel(&retagged).unwrap();
        assert_eq!(once.values(), twice.values());
    }

    #[test]
    fn rank_transform_rejects_constant_column() {
        let m = raw_matrix(Array2::from_shape_vec((3, 2), vec![1.0, 7.0, 1.0, 8.0, 1.0, 9.0]).unwrap());
        match empirical_to_gumbel(&m) {
            Err(Error::DegenerateMargin(0)) => {}
            other => panic!("expected degenerate margin on column 0, got {other:?}"),
        }
    }

    #[test]
    fn fit_identity_case() {
        let est = fit_gumbel_location(&[0.0, 0.0, 0.0], 2).unwrap();
        assert_abs_diff_eq!(est.mu_hat, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(est.mu_clamped, 0.0, epsilon = 1e-15);
        assert!(!est.clamped());
    }

    #[test]
    fn fit_clamps_at_upper_bound() {
        let est = fit_gumbel_location(&[5.0, 5.0, 5.0, 5.0], 2).unwrap();
        assert_abs_diff_eq!(est.mu_hat, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(est.mu_clamped, 2.0f64.ln(), epsilon = 1e-15);
        assert!(est.clamped());
    }

    #[test]
    fn fit_matches_grid_search_fixture() {
        let sample = [0.0, 2.0f64.ln()];
        let est = fit_gumbel_location(&sample, 4).unwrap();
        assert_abs_diff_eq!(est.mu_hat, -(0.75f64.ln()), epsilon = 1e-12);
        assert!(!est.clamped());
        let oracle = grid_search_mu(&sample, -1.0, 2.0, 1e-6);
        assert_abs_diff_eq!(est.mu_hat, oracle, epsilon = 2e-6);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit_gumbel_location(&[], 2).is_err());
        assert!(fit_gumbel_location(&[1.0], 0).is_err());
        assert!(fit_gumbel_location(&[f64::NAN], 2).is_err());
    }

    #[test]
    fn fit_survives_extreme_values() {
        // log-sum-exp keeps exp(-y) from overflowing
        let est = fit_gumbel_location(&[-745.0, -740.0], 2).unwrap();
        assert!(est.mu_hat.is_finite());
        assert!(est.mu_hat < -700.0);
    }

    #[test]
    fn fit_is_consistent_at_large_n() {
        let mut rng = crate::rng::substream(2024, 0);
        let sample: Vec<f64> = (0..100_000)
            .map(|_| {
                let e: f64 = rng.sample(rand_distr::Exp1);
                -e.ln()
            })
            .collect();
        let est = fit_gumbel_location(&sample, 2).unwrap();
        assert!(est.mu_hat.abs() < 0.02, "mu_hat = {}", est.mu_hat);
    }

    proptest! {
        #[test]
        fn cdf_quantile_roundtrip(p in 1e-8f64..=1.0 - 1e-8) {
            let z = gumbel_quantile(p).unwrap();
            let back = gumbel_cdf(z).unwrap();
            prop_assert!((back - p).abs() < 1e-10);
        }

        #[test]
        fn transform_roundtrip(values in proptest::collection::vec(-30.0f64..30.0, 1..40)) {
            let x = gumbel_to_frechet(&values).unwrap();
            let back = frechet_to_gumbel(&x).unwrap();
            for (a, b) in values.iter().zip(back.iter()) {
                let tol = 1e-12 * a.abs().max(1.0);
                prop_assert!((a - b).abs() <= tol);
            }
        }

        #[test]
        fn shift_equivariance(
            values in proptest::collection::vec(-10.0f64..10.0, 1..50),
            c in -5.0f64..5.0,
        ) {
            let base = fit_gumbel_location(&values, 3).unwrap();
            let shifted: Vec<f64> = values.iter().map(|v| v + c).collect();
            let moved = fit_gumbel_location(&shifted, 3).unwrap();
            prop_assert!((moved.mu_hat - base.mu_hat - c).abs() < 1e-10);
        }

        #[test]
        fn clamp_stays_in_bounds(
            values in proptest::collection::vec(-10.0f64..10.0, 1..50),
            k in 1usize..12,
        ) {
            let est = fit_gumbel_location(&values, k).unwrap();
            prop_assert!(est.mu_clamped >= 0.0);
            prop_assert!(est.mu_clamped <= (k as f64).ln());
        }
    }
}
