//! Storm-profile max-stable process with a bivariate Gaussian kernel.
//!
//! A replicate is the pointwise maximum over a Poisson storm process: storm
//! `i` has intensity `area/gamma_i` (cumulative unit-exponential sums, so the
//! intensities are descending) and a centre uniform on the site bounding box
//! extended by a buffer. The field value at a site is the largest
//! `intensity * kernel(site - centre)`; the loop stops exactly when no later
//! storm can exceed the smallest accumulated maximum. Output is the log of
//! the unit-Fréchet field, i.e. standard Gumbel margins.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MarginScale, ReplicateMatrix, SiteGrid};
use crate::rng::substream;
use crate::{Error, Result};

/// Symmetric 2x2 covariance for the storm kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cov2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Cov2 {
    pub fn identity() -> Self {
        Cov2 {
            xx: 1.0,
            xy: 0.0,
            yy: 1.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// Strict positive definiteness (finite entries, positive leading minors).
    pub fn is_spd(&self) -> bool {
        self.xx.is_finite()
            && self.xy.is_finite()
            && self.yy.is_finite()
            && self.xx > 0.0
            && self.det() > 0.0
    }

    /// Quadratic form `v' * inverse(self) * v`.
    pub fn inv_quad(&self, dx: f64, dy: f64) -> f64 {
        (self.yy * dx * dx - 2.0 * self.xy * dx * dy + self.xx * dy * dy) / self.det()
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        let tr = self.xx + self.yy;
        let gap = ((self.xx - self.yy).powi(2) + 4.0 * self.xy * self.xy).sqrt();
        (tr + gap) / 2.0
    }
}

/// Simulate the storm-profile process on Gumbel margins.
///
/// `buffer` extends the storm-centre window beyond the site bounding box on
/// every side; `None` uses four kernel standard deviations, which keeps the
/// truncation bias on the maxima negligible.
pub fn simulate_smith(
    grid: &SiteGrid,
    omega: Cov2,
    n_rep: usize,
    seed: u64,
    buffer: Option<f64>,
) -> Result<ReplicateMatrix> {
    if grid.is_empty() {
        return Err(Error::domain("site grid must be non-empty"));
    }
    if n_rep == 0 {
        return Err(Error::domain("n_rep must be at least 1"));
    }
    if !omega.is_spd() {
        return Err(Error::domain(
            "storm kernel covariance is not symmetric positive definite",
        ));
    }
    let buffer = buffer.unwrap_or_else(|| 4.0 * omega.max_eigenvalue().sqrt());
    if !(buffer > 0.0) {
        return Err(Error::domain(format!("buffer {buffer} must be positive")));
    }

    let (xmin, xmax, ymin, ymax) = grid.bounding_box();
    let width = (xmax - xmin) + 2.0 * buffer;
    let height = (ymax - ymin) + 2.0 * buffer;
    let area = width * height;
    let kernel_peak = 1.0 / (2.0 * std::f64::consts::PI * omega.det().sqrt());
    let sites = grid.coords();
    let m = sites.len();

    let rows: Vec<Vec<f64>> = (0..n_rep)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, rep as u64);
            let mut field = vec![0.0f64; m];
            let mut floor = 0.0f64; // smallest accumulated maximum across sites
            let mut gamma = 0.0f64;
            loop {
                let e: f64 = rng.sample(Exp1);
                gamma += e;
                let intensity = area / gamma;
                // no later storm can beat the floor anywhere
                if intensity * kernel_peak <= floor {
                    break;
                }
                let ux = xmin - buffer + width * rng.random::<f64>();
                let uy = ymin - buffer + height * rng.random::<f64>();
                for (j, &(sx, sy)) in sites.iter().enumerate() {
                    let q = omega.inv_quad(sx - ux, sy - uy);
                    let contrib = intensity * kernel_peak * (-0.5 * q).exp();
                    if contrib > field[j] {
                        field[j] = contrib;
                    }
                }
                floor = field.iter().copied().fold(f64::INFINITY, f64::min);
            }
            field.iter().map(|z| z.ln()).collect()
        })
        .collect();

    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let values = ndarray::Array2::from_shape_vec((n_rep, m), flat).expect("shape");
    ReplicateMatrix::new(values, MarginScale::Gumbel, Some(grid.clone()))
}
