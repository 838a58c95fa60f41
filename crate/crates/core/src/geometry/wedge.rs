//! Cubical wedges in `H^d`: the displacement `<u, a> - conj(b)` (with
//! `<u, a> = sum u_i conj(a_i)`) falls in the cone over the face of the
//! 8-cell whose outward normal `g in Q8` is nearest.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{accumulate, Field, MeasureSet, PointCloud, RegionMassTable, NORM_TOLERANCE};
use crate::error::{Error, Result};
use crate::fourier::{GroupFunction, GroupSpec, Q8Element};
use crate::quaternion::Quaternion;

/// The element `g` maximizing `<v, g>`; earlier elements win ties, so
/// `v = 0` maps to `+1`.
pub fn wedge_index(v: Quaternion) -> Q8Element {
    let scores = [v.w, -v.w, v.x, -v.x, v.y, -v.y, v.z, -v.z];
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    Q8Element::ALL[best]
}

/// Softmax of `<v / |v|, g> / tau` over `Q8`, in element order.
pub fn soft_wedge_weights(v: Quaternion, tau: f64) -> [f64; 8] {
    let n = v.norm();
    if tau <= 0.0 || n == 0.0 {
        let mut out = [0.0; 8];
        out[wedge_index(v).index()] = 1.0;
        return out;
    }
    let u = v.scale(1.0 / n);
    let scores = [u.w, -u.w, u.x, -u.x, u.y, -u.y, u.z, -u.z];
    let top = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = scores.map(|s| ((s - top) / tau).exp());
    let z: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= z);
    out
}

/// A single wedge center `(a, b)` on the unit sphere of `H^{d+1}`,
/// serialized as `{"center": [[w, x, y, z], ...]}` with `b` last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WedgeConfigRepr")]
pub struct WedgeConfig {
    center: Vec<Quaternion>,
}

#[derive(Deserialize)]
struct WedgeConfigRepr {
    center: Vec<Quaternion>,
}

impl TryFrom<WedgeConfigRepr> for WedgeConfig {
    type Error = Error;

    fn try_from(r: WedgeConfigRepr) -> Result<Self> {
        WedgeConfig::new(r.center)
    }
}

impl WedgeConfig {
    pub fn new(center: Vec<Quaternion>) -> Result<Self> {
        if center.len() < 2 {
            return Err(Error::InvalidConfig("center lives in H^{d+1} with d >= 1".into()));
        }
        let n: f64 = center.iter().map(|q| q.norm_sqr()).sum();
        if !((n - 1.0).abs() <= NORM_TOLERANCE) {
            return Err(Error::InvalidConfig(format!("center has squared norm {n}, expected 1")));
        }
        Ok(Self { center })
    }

    pub fn normalized(mut center: Vec<Quaternion>) -> Result<Self> {
        let n = center.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidConfig("center must be a nonzero finite vector".into()));
        }
        center.iter_mut().for_each(|q| *q = q.scale(1.0 / n));
        Self::new(center)
    }

    pub fn d(&self) -> usize {
        self.center.len() - 1
    }

    pub fn center(&self) -> &[Quaternion] {
        &self.center
    }

    pub fn a(&self) -> &[Quaternion] {
        &self.center[..self.center.len() - 1]
    }

    pub fn b(&self) -> Quaternion {
        self.center[self.center.len() - 1]
    }

    /// `<u, a> - conj(b)` for a point given as `[w_1, x_1, y_1, z_1, ...]`.
    pub fn displacement(&self, point: &[f64]) -> Quaternion {
        let mut acc = -self.b().conj();
        for (i, a) in self.a().iter().enumerate() {
            let u = Quaternion::new(point[4 * i], point[4 * i + 1], point[4 * i + 2], point[4 * i + 3]);
            acc = acc + u * a.conj();
        }
        acc
    }

    /// Left multiplication of the center by `g`; the displacement becomes
    /// `v conj(g)`, so labels move from `h` to `h g^{-1}`.
    pub fn act(&self, g: Q8Element) -> Self {
        let q = g.quaternion();
        Self {
            center: self.center.iter().map(|&x| q * x).collect(),
        }
    }

    pub(crate) fn check_cloud(&self, c: &PointCloud) -> Result<()> {
        if c.field != Field::Quaternion {
            return Err(Error::InvalidConfig("wedges classify quaternionic points".into()));
        }
        if c.d != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), found: c.d });
        }
        Ok(())
    }
}

pub fn wedge_region_of(point: &[f64], cfg: &WedgeConfig) -> Q8Element {
    wedge_index(cfg.displacement(point))
}

pub fn wedge_region_masses(ms: &MeasureSet, cfg: &WedgeConfig) -> Result<RegionMassTable> {
    let functions = ms
        .measures
        .iter()
        .map(|c| {
            cfg.check_cloud(c)?;
            let labels: Vec<usize> = c
                .coords()
                .par_chunks_exact(c.stride())
                .map(|p| wedge_region_of(p, cfg).index())
                .collect();
            GroupFunction::new(GroupSpec::Q8, accumulate(c.weights(), &labels, 8))
        })
        .collect::<Result<_>>()?;
    Ok(RegionMassTable { functions })
}

/// Wedge masses with each point spread by [`soft_wedge_weights`].
pub fn soft_wedge_masses(ms: &MeasureSet, cfg: &WedgeConfig, tau: f64) -> Result<Vec<[Complex64; 8]>> {
    ms.measures
        .iter()
        .map(|c| {
            cfg.check_cloud(c)?;
            let mut out = [Complex64::new(0.0, 0.0); 8];
            for (p, w) in c.points().zip(c.weights()) {
                let s = soft_wedge_weights(cfg.displacement(p), tau);
                for (o, f) in out.iter_mut().zip(s) {
                    *o += w * f;
                }
            }
            Ok(out)
        })
        .collect()
}
