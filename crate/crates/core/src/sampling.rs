//! Seeded synthetic point clouds.

use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Field, PointCloud};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    UniformBall,
    GaussianMixture,
    /// Tight clusters at `floor((q - 1) / 2)` points of the complex moment
    /// curve `t -> (t, t^2, ..., t^d)`, per measure.
    MomentCurveClusters,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-ball" => Ok(Self::UniformBall),
            "gaussian-mixture" => Ok(Self::GaussianMixture),
            "moment-curve-clusters" => Ok(Self::MomentCurveClusters),
            _ => Err(Error::InvalidConfig(format!(
                "unknown distribution {s:?} (expected uniform-ball, gaussian-mixture or moment-curve-clusters)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenRequest {
    pub distribution: Distribution,
    pub field: Field,
    pub d: usize,
    /// Points per measure.
    pub n: usize,
    /// Number of measures.
    pub m: usize,
    /// Fan order for moment-curve clusters.
    pub q: Option<usize>,
    pub seed: u64,
}

impl GenRequest {
    pub fn new(distribution: Distribution, d: usize, n: usize, seed: u64) -> Self {
        Self {
            distribution,
            field: Field::Complex,
            d,
            n,
            m: 1,
            q: None,
            seed,
        }
    }

    pub fn clusters_per_measure(&self) -> Option<usize> {
        self.q.map(|q| (q.saturating_sub(1) / 2).max(1))
    }
}

fn uniform_ball(rng: &mut ChaCha8Rng, dim: usize, out: &mut Vec<f64>) {
    let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let radius = rng.gen::<f64>().powf(1.0 / dim as f64);
    out.extend(dir.iter().map(|x| x / norm * radius));
}

fn moment_point(t: Complex64, d: usize) -> Vec<f64> {
    let mut z = Complex64::new(1.0, 0.0);
    (0..d)
        .flat_map(|_| {
            z *= t;
            [z.re, z.im]
        })
        .collect()
}

/// One cloud per measure, unit weights, deterministic in the seed.
pub fn generate(req: &GenRequest) -> Result<Vec<PointCloud>> {
    if req.d == 0 || req.n == 0 || req.m == 0 {
        return Err(Error::InvalidConfig("d, n and m must be positive".into()));
    }
    let dim = req.d * req.field.real_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    (0..req.m)
        .map(|measure| {
            let mut coords = Vec::with_capacity(dim * req.n);
            match req.distribution {
                Distribution::UniformBall => {
                    for _ in 0..req.n {
                        uniform_ball(&mut rng, dim, &mut coords);
                    }
                }
                Distribution::GaussianMixture => {
                    let components = 3;
                    let centers: Vec<Vec<f64>> = (0..components)
                        .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
                        .collect();
                    let spread = Normal::new(0.0, 0.5).expect("valid deviation");
                    for _ in 0..req.n {
                        let c = &centers[rng.gen_range(0..components)];
                        coords.extend(c.iter().map(|x| x + spread.sample(&mut rng)));
                    }
                }
                Distribution::MomentCurveClusters => {
                    if req.field != Field::Complex {
                        return Err(Error::InvalidConfig("moment-curve clusters live in C^d".into()));
                    }
                    let clusters = req
                        .clusters_per_measure()
                        .ok_or_else(|| Error::InvalidConfig("moment-curve clusters need q".into()))?;
                    let total = clusters * req.m;
                    let jitter = Normal::new(0.0, 0.02).expect("valid deviation");
                    for p in 0..req.n {
                        let c = measure * clusters + p % clusters;
                        let t = Complex64::from_polar(
                            0.6 + 0.8 * c as f64 / total as f64,
                            std::f64::consts::TAU * c as f64 / total as f64,
                        );
                        coords.extend(moment_point(t, req.d).iter().map(|x| x + jitter.sample(&mut rng)));
                    }
                }
            }
            PointCloud::unit_weights(req.field, req.d, coords)
        })
        .collect()
}
