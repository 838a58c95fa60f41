//! Complex regular fans, the partitions they induce on `C^d`, and the
//! cubical wedges of `H^d` indexed by `Q8`.
//!
//! A fan with center `x = (a, b)` on the unit sphere of `C^{d+1}` sends
//! `u` to the displacement `<u, a> - conj(b)` (with `<u, a> = sum u_i conj(a_i)`)
//! and labels it by the half-open arc `[2 pi r / q, 2 pi (r + 1) / q)`
//! containing its argument. A fan with `a = 0` lies at infinity and labels
//! everything `0`.

mod cloud;
mod sum;
mod wedge;

pub use cloud::{Field, MeasureSet, PointCloud};
pub use sum::{compensated_total, CompensatedSum};
pub use wedge::{
    soft_wedge_masses, soft_wedge_weights, wedge_index, wedge_region_masses, wedge_region_of,
    WedgeConfig,
};

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{AbelianGroup, GroupFunction, GroupSpec};

pub const NORM_TOLERANCE: f64 = 1e-12;
const SNAP: f64 = 1e-9;

/// Sector of `w` for a regular `q`-fan; `0` for `w = 0`.
///
/// Arguments within `1e-9` of a sector boundary (in units of `2 pi / q`)
/// are snapped onto it so that exact roots of unity land on their own ray.
pub fn sector_index(w: Complex64, q: usize) -> usize {
    sector_coordinate(w, q).0
}

fn sector_coordinate(w: Complex64, q: usize) -> (usize, f64) {
    if w.re == 0.0 && w.im == 0.0 {
        return (0, 0.0);
    }
    let mut theta = w.im.atan2(w.re);
    if theta < 0.0 {
        theta += TAU;
    }
    let mut t = theta * q as f64 / TAU;
    let n = t.round();
    if (t - n).abs() < SNAP {
        t = n;
    }
    let r = t.floor();
    ((r as usize) % q, t - r)
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

/// Soft sector membership: the point's argument is smeared by a compact
/// symmetric kernel of half-width `h` radians (capped at `pi / q`), so at
/// most two adjacent sectors share the weight. `h = 0` is the hard rule.
pub fn soft_sectors(w: Complex64, q: usize, h: f64) -> [(usize, f64); 2] {
    let (r, frac) = sector_coordinate(w, q);
    let width = TAU / q as f64;
    let h = h.min(width / 2.0);
    if h <= 0.0 || (w.re == 0.0 && w.im == 0.0) {
        return [(r, 1.0), (r, 0.0)];
    }
    let lower = frac * width;
    let upper = width - lower;
    if lower < h {
        let spill = smoothstep((h - lower) / (2.0 * h));
        [(r, 1.0 - spill), ((r + q - 1) % q, spill)]
    } else if upper < h {
        let spill = smoothstep((h - upper) / (2.0 * h));
        [(r, 1.0 - spill), ((r + 1) % q, spill)]
    } else {
        [(r, 1.0), (r, 0.0)]
    }
}

/// `k` regular fans in `C^d`, serialized as
/// `{"orders": [q_1, ...], "centers": [[a_1, ..., a_d, b], ...]}` with each
/// complex number written `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FanConfigRepr")]
pub struct FanConfig {
    orders: AbelianGroup,
    #[serde(with = "crate::serde_util::complex_vec_vec")]
    centers: Vec<Vec<Complex64>>,
}

#[derive(Deserialize)]
struct FanConfigRepr {
    orders: AbelianGroup,
    #[serde(with = "crate::serde_util::complex_vec_vec")]
    centers: Vec<Vec<Complex64>>,
}

impl TryFrom<FanConfigRepr> for FanConfig {
    type Error = Error;

    fn try_from(r: FanConfigRepr) -> Result<Self> {
        FanConfig::new(r.orders, r.centers)
    }
}

impl FanConfig {
    pub fn new(orders: AbelianGroup, centers: Vec<Vec<Complex64>>) -> Result<Self> {
        if centers.len() != orders.rank() {
            return Err(Error::LengthMismatch {
                expected: orders.rank(),
                found: centers.len(),
            });
        }
        let len = centers[0].len();
        if len < 2 {
            return Err(Error::InvalidConfig("centers live in C^{d+1} with d >= 1".into()));
        }
        for x in &centers {
            if x.len() != len {
                return Err(Error::DimensionMismatch { expected: len, found: x.len() });
            }
            let n: f64 = x.iter().map(Complex64::norm_sqr).sum();
            if !((n - 1.0).abs() <= NORM_TOLERANCE) {
                return Err(Error::InvalidConfig(format!("center has squared norm {n}, expected 1")));
            }
        }
        Ok(Self { orders, centers })
    }

    /// Scales every center onto the unit sphere first.
    pub fn normalized(orders: AbelianGroup, mut centers: Vec<Vec<Complex64>>) -> Result<Self> {
        for x in &mut centers {
            let n = x.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
            if !(n > 0.0) || !n.is_finite() {
                return Err(Error::InvalidConfig("center must be a nonzero finite vector".into()));
            }
            x.iter_mut().for_each(|z| *z /= n);
        }
        Self::new(orders, centers)
    }

    /// Fans centered at `a = 1, b = 0` in the first coordinate.
    pub fn standard(orders: AbelianGroup, d: usize) -> Result<Self> {
        let mut x = vec![Complex64::new(0.0, 0.0); d + 1];
        x[0] = Complex64::new(1.0, 0.0);
        let k = orders.rank();
        Self::new(orders, vec![x; k])
    }

    pub fn d(&self) -> usize {
        self.centers[0].len() - 1
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.orders
    }

    pub fn centers(&self) -> &[Vec<Complex64>] {
        &self.centers
    }

    pub fn a(&self, j: usize) -> &[Complex64] {
        let x = &self.centers[j];
        &x[..x.len() - 1]
    }

    pub fn b(&self, j: usize) -> Complex64 {
        *self.centers[j].last().expect("nonempty center")
    }

    pub fn at_infinity(&self, j: usize) -> bool {
        self.a(j).iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// At least one fan is not at infinity.
    pub fn is_nontrivial(&self) -> bool {
        (0..self.centers.len()).any(|j| !self.at_infinity(j))
    }

    /// `<u, a_j> - conj(b_j)` for a point given as `[re_1, im_1, ...]`.
    pub fn displacement(&self, j: usize, point: &[f64]) -> Complex64 {
        let mut acc = -self.b(j).conj();
        for (i, a) in self.a(j).iter().enumerate() {
            acc += Complex64::new(point[2 * i], point[2 * i + 1]) * a.conj();
        }
        acc
    }

    /// `g . x`: center `j` multiplied by `zeta_{q_j}^{g_j}`.
    pub fn act(&self, g: &[usize]) -> Result<Self> {
        self.orders.check(g)?;
        let centers = self
            .centers
            .iter()
            .zip(g.iter().zip(self.orders.orders()))
            .map(|(x, (&gj, &q))| {
                let z = Complex64::from_polar(1.0, TAU * gj as f64 / q as f64);
                x.iter().map(|c| c * z).collect()
            })
            .collect();
        Ok(Self {
            orders: self.orders.clone(),
            centers,
        })
    }

    fn check_cloud(&self, c: &PointCloud) -> Result<()> {
        if c.field != Field::Complex {
            return Err(Error::InvalidConfig("fans classify complex points".into()));
        }
        if c.d != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), found: c.d });
        }
        Ok(())
    }
}

/// The region `(r_1, ..., r_k)` containing `point`.
pub fn classify(point: &[f64], cfg: &FanConfig) -> Vec<usize> {
    (0..cfg.centers.len())
        .map(|j| {
            if cfg.at_infinity(j) {
                0
            } else {
                sector_index(cfg.displacement(j, point), cfg.orders.orders()[j])
            }
        })
        .collect()
}

/// Lexicographic index of [`classify`].
pub fn region_index(point: &[f64], cfg: &FanConfig) -> usize {
    let orders = cfg.orders.orders();
    let mut idx = 0;
    for j in 0..orders.len() {
        let r = if cfg.at_infinity(j) {
            0
        } else {
            sector_index(cfg.displacement(j, point), orders[j])
        };
        idx = idx * orders[j] + r;
    }
    idx
}

/// Per-measure region masses `g -> mu_i(R_g)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMassTable {
    pub functions: Vec<GroupFunction>,
}

impl RegionMassTable {
    pub fn group(&self) -> &GroupSpec {
        &self.functions[0].group
    }

    pub fn masses(&self, measure: usize) -> &[Complex64] {
        &self.functions[measure].values
    }

    pub fn totals(&self) -> Vec<Complex64> {
        self.functions
            .iter()
            .map(|f| compensated_total(&f.values))
            .collect()
    }
}

/// Accumulates the weight of each point into its region: assignments may be
/// computed in parallel, sums run in point order with compensation.
pub(crate) fn accumulate(weights: &[Complex64], labels: &[usize], n_regions: usize) -> Vec<Complex64> {
    let mut sums = vec![CompensatedSum::default(); n_regions];
    for (w, &l) in weights.iter().zip(labels) {
        sums[l].add(*w);
    }
    sums.iter().map(CompensatedSum::value).collect()
}

pub fn region_labels(cloud: &PointCloud, cfg: &FanConfig) -> Result<Vec<usize>> {
    cfg.check_cloud(cloud)?;
    Ok(cloud
        .coords()
        .par_chunks_exact(cloud.stride())
        .map(|p| region_index(p, cfg))
        .collect())
}

pub fn region_masses(ms: &MeasureSet, cfg: &FanConfig) -> Result<RegionMassTable> {
    let n = cfg.orders.order();
    let functions = ms
        .measures
        .iter()
        .map(|c| {
            let labels = region_labels(c, cfg)?;
            GroupFunction::new(
                GroupSpec::Abelian(cfg.orders.clone()),
                accumulate(c.weights(), &labels, n),
            )
        })
        .collect::<Result<_>>()?;
    Ok(RegionMassTable { functions })
}

/// Region masses with every sector boundary blurred by `h` radians; each
/// point's weight is split over the product of its per-fan memberships.
pub fn soft_region_masses(ms: &MeasureSet, cfg: &FanConfig, h: f64) -> Result<Vec<Vec<Complex64>>> {
    let orders = cfg.orders.orders();
    let k = orders.len();
    let n = cfg.orders.order();
    ms.measures
        .iter()
        .map(|c| {
            cfg.check_cloud(c)?;
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            let mut parts: Vec<[(usize, f64); 2]> = vec![[(0, 1.0), (0, 0.0)]; k];
            for (p, w) in c.points().zip(c.weights()) {
                for j in 0..k {
                    parts[j] = if cfg.at_infinity(j) {
                        [(0, 1.0), (0, 0.0)]
                    } else {
                        soft_sectors(cfg.displacement(j, p), orders[j], h)
                    };
                }
                for mask in 0..(1usize << k) {
                    let mut idx = 0;
                    let mut frac = 1.0;
                    for (j, part) in parts.iter().enumerate() {
                        let (r, f) = part[(mask >> j) & 1];
                        frac *= f;
                        idx = idx * orders[j] + r;
                    }
                    if frac > 0.0 {
                        out[idx] += w * frac;
                    }
                }
            }
            Ok(out)
        })
        .collect()
}
