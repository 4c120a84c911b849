//! Benchmark simulators for three spatial dependence structures, all emitting
//! replicate matrices on standard Gumbel margins.
//!
//! Two of the generators (storm-profile and logistic) are max-stable; the
//! Gaussian copula is not, which is what makes it the power benchmark for the
//! diagnostic. Every generator is deterministic given a seed: replicate `r`
//! draws from its own RNG stream, so output is independent of thread count.

mod gauss;
mod logistic;
mod smith;

pub use gauss::{cholesky_spd, exp_correlation, simulate_gauss_copula, CorrParam};
pub use logistic::{positive_stable, simulate_logistic};
pub use smith::{simulate_smith, Cov2};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Marginal scale carried by a replicate matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginScale {
    Gumbel,
    Frechet,
    Raw,
}

impl std::fmt::Display for MarginScale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MarginScale::Gumbel => write!(f, "gumbel"),
            MarginScale::Frechet => write!(f, "frechet"),
            MarginScale::Raw => write!(f, "raw"),
        }
    }
}

/// Site coordinates in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteGrid {
    coords: Vec<(f64, f64)>,
}

impl SiteGrid {
    /// Validating constructor: non-empty, finite, pairwise-distinct points.
    pub fn new(coords: Vec<(f64, f64)>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("site grid must contain at least one site"));
        }
        for &(x, y) in &coords {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFinite("site coordinate"));
            }
        }
        for i in 0..coords.len() {
            for j in (i + 1)..coords.len() {
                if coords[i] == coords[j] {
                    return Err(Error::domain(format!(
                        "sites {} and {} share coordinates ({}, {})",
                        i + 1,
                        j + 1,
                        coords[i].0,
                        coords[i].1
                    )));
                }
            }
        }
        Ok(Self { coords })
    }

    /// Constructor that skips the distinctness check. Intended for fixtures
    /// that deliberately place coincident sites.
    pub fn unchecked(coords: Vec<(f64, f64)>) -> Self {
        Self { coords }
    }

    /// Regular unit-spaced grid of `nx` by `ny` sites centred in the
    /// `nx` by `ny` square: coordinates `(i + 0.5, j + 0.5)`.
    pub fn regular(nx: usize, ny: usize) -> Self {
        let mut coords = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                coords.push((i as f64 + 0.5, j as f64 + 0.5));
            }
        }
        Self { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    /// Euclidean distance between sites `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (xi, yi) = self.coords[i];
        let (xj, yj) = self.coords[j];
        ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt()
    }

    /// Largest pairwise distance among the given site indices.
    pub fn diameter(&self, subset: &[usize]) -> f64 {
        let mut d = 0.0f64;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                d = d.max(self.distance(i, j));
            }
        }
        d
    }

    /// Axis-aligned bounding box `(xmin, xmax, ymin, ymax)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for &(x, y) in &self.coords {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        (xmin, xmax, ymin, ymax)
    }
}

/// `n_rep` by `m` table of field values with a declared marginal scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateMatrix {
    values: Array2<f64>,
    scale: MarginScale,
    grid: Option<SiteGrid>,
}

impl ReplicateMatrix {
    pub fn new(values: Array2<f64>, scale: MarginScale, grid: Option<SiteGrid>) -> Result<Self> {
        let (n_rep, m) = values.dim();
        if n_rep == 0 || m == 0 {
            return Err(Error::domain("replicate matrix must be non-empty"));
        }
        for &v in values.iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite("replicate matrix entry"));
            }
            if scale == MarginScale::Frechet && v <= 0.0 {
                return Err(Error::domain(format!(
                    "Fréchet-scale matrix contains non-positive value {v}"
                )));
            }
        }
        if let Some(g) = &grid {
            if g.len() != m {
                return Err(Error::domain(format!(
                    "grid has {} sites but matrix has {} columns",
                    g.len(),
                    m
                )));
            }
        }
        Ok(Self {
            values,
            scale,
            grid,
        })
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn scale(&self) -> MarginScale {
        self.scale
    }

    pub fn grid(&self) -> Option<&SiteGrid> {
        self.grid.as_ref()
    }

    /// Number of replicates (rows).
    pub fn n_rep(&self) -> usize {
        self.values.nrows()
    }

    /// Number of sites (columns).
    pub fn n_sites(&self) -> usize {
        self.values.ncols()
    }

    /// Same values resampled by replicate row; keeps scale and grid.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            values: self.values.select(ndarray::Axis(0), rows),
            scale: self.scale,
            grid: self.grid.clone(),
        }
    }
}

/// Model choice plus model-specific parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelConfig {
    /// Storm-profile max-stable process with Gaussian kernel covariance.
    Smith {
        omega: Cov2,
        /// Window extension beyond the site bounding box; defaults to
        /// four standard deviations of the kernel.
        buffer: Option<f64>,
    },
    /// Symmetric multivariate logistic dependence, exchangeable across sites.
    Logistic { alpha: f64 },
    /// Gaussian copula with exponential correlation, transformed to Gumbel margins.
    Gauss {
        lambda: f64,
        #[serde(default)]
        corr_param: CorrParam,
    },
}

/// Full simulation request: model, replicate count, and seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(flatten)]
    pub model: ModelConfig,
    pub n_rep: usize,
    pub seed: u64,
}

/// Dispatch a simulation request on the given site grid.
///
/// The logistic model is exchangeable, so it uses only the number of sites
/// and attaches no grid to its output.
pub fn simulate(grid: &SiteGrid, config: &SimConfig) -> Result<ReplicateMatrix> {
    match &config.model {
        ModelConfig::Smith { omega, buffer } => {
            simulate_smith(grid, *omega, config.n_rep, config.seed, *buffer)
        }
        ModelConfig::Logistic { alpha } => {
            simulate_logistic(grid.len(), *alpha, config.n_rep, config.seed)
        }
        ModelConfig::Gauss { lambda, corr_param } => {
            simulate_gauss_copula(grid, *lambda, *corr_param, config.n_rep, config.seed)
        }
    }
}
