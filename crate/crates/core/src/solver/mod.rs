//! Search for fan (or wedge) configurations whose prescribed Fourier
//! transforms vanish on given point clouds.
//!
//! Hard region masses are piecewise constant in the configuration, so the
//! search minimizes a smoothed objective first and anneals the smoothing
//! width towards zero, finishing on the exact classifier. The optimizer is
//! a seeded CMA-ES on the product of unit spheres with restarts.

mod cmaes;
mod verify;

pub use cmaes::{Cma, Generation};
pub use verify::{verify, verify_claim, ClaimCheck, VerificationReport};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::certify::{certify, AnnihilationSpec, PartitionClaim};
use crate::error::{Error, Result};
use crate::fourier::{fourier_transform, q8_fourier_transform, AbelianGroup, Q8Transform};
use crate::geometry::{
    region_masses, soft_region_masses, soft_wedge_masses, wedge_region_masses, FanConfig,
    Field, MeasureSet, PointCloud, RegionMassTable, WedgeConfig,
};
use crate::quaternion::Quaternion;

/// What the configuration must balance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    Fans { spec: AnnihilationSpec },
    /// One cubical wedge partition of `H^d`; for every measure the
    /// transforms `c_(0,1)`, `c_(1,1)` and `c_sigma` vanish, leaving masses
    /// constant on `{+-1, +-i}` and on `{+-j, +-k}`.
    Wedges,
}

impl Target {
    pub fn implied_claim(&self) -> Result<PartitionClaim> {
        match self {
            Target::Fans { spec } => spec.implied_claim(),
            Target::Wedges => Ok(PartitionClaim::Q8ModuloZ4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    #[serde(default = "default_evaluations")]
    pub max_evaluations: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    pub seed: u64,
}

fn default_evaluations() -> usize {
    200_000
}

fn default_restarts() -> usize {
    20
}

fn default_stages() -> usize {
    6
}

fn default_tolerance() -> f64 {
    1e-3
}

impl Budget {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            max_evaluations: default_evaluations(),
            restarts: default_restarts(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveProblem {
    pub target: Target,
    pub measures: MeasureSet,
    /// Initial smoothing width in radians; halved each stage. Defaults to
    /// half a sector (`pi / (2 q_max)`) for fans and `0.25` for wedges.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<f64>,
    /// Smoothed stages before the final hard stage.
    #[serde(default = "default_stages")]
    pub stages: usize,
    pub budget: Budget,
    /// Relative residual below which a run counts as converged.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl SolveProblem {
    pub fn new(target: Target, measures: MeasureSet, seed: u64) -> Self {
        Self {
            target,
            measures,
            smoothing: None,
            stages: default_stages(),
            budget: Budget::with_seed(seed),
            tolerance: default_tolerance(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.target {
            Target::Fans { spec } => {
                spec.validate()?;
                if self.measures.field() != Field::Complex {
                    return Err(Error::InvalidConfig("fan problems need complex point clouds".into()));
                }
                if spec.measures > self.measures.len() {
                    return Err(Error::InvalidConfig(format!(
                        "spec refers to {} measures but {} were given",
                        spec.measures,
                        self.measures.len()
                    )));
                }
            }
            Target::Wedges => {
                if self.measures.field() != Field::Quaternion {
                    return Err(Error::InvalidConfig("wedge problems need quaternionic point clouds".into()));
                }
            }
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidConfig("tolerance must be non-negative".into()));
        }
        if self.smoothing.is_some_and(|s| !(s >= 0.0)) {
            return Err(Error::InvalidConfig("smoothing must be non-negative".into()));
        }
        Ok(())
    }

    /// Least dimension for which existence is guaranteed, if any.
    pub fn certified_dimension(&self) -> Result<Option<u32>> {
        match &self.target {
            Target::Fans { spec } => Ok(certify(spec)?.certified_dimension),
            Target::Wedges => {
                let real_measures: usize = self
                    .measures
                    .measures
                    .iter()
                    .map(|c| if c.is_real() { 1 } else { 2 })
                    .sum();
                Ok((real_measures <= 2).then_some(3))
            }
        }
    }

    /// Whether existence of a solution is guaranteed in the clouds' dimension.
    pub fn is_certified(&self) -> Result<bool> {
        Ok(self
            .certified_dimension()?
            .is_some_and(|d| d as usize <= self.measures.d()))
    }

    fn default_smoothing(&self) -> f64 {
        match &self.target {
            Target::Fans { spec } => PI / (2.0 * *spec.orders.orders().iter().max().unwrap_or(&2) as f64),
            Target::Wedges => 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Configuration {
    Fans(FanConfig),
    Wedges(WedgeConfig),
}

impl Configuration {
    pub fn region_masses(&self, ms: &MeasureSet) -> Result<RegionMassTable> {
        match self {
            Configuration::Fans(c) => region_masses(ms, c),
            Configuration::Wedges(c) => wedge_region_masses(ms, c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub config: Configuration,
    /// Max over annihilated transforms of `|c_{i,eps}| / |mu_i|`, from the
    /// hard classifier.
    pub residual: f64,
    /// Hard objective `sum |c_{i,eps}|^2`.
    pub objective: f64,
    pub region_masses: RegionMassTable,
    pub converged: bool,
    pub evaluations: usize,
    pub restarts: usize,
    pub tolerance: f64,
    pub seed: u64,
}

/// Mass scale used to make residuals relative: `|mu_i(total)|`, or the
/// total variation when the total cancels.
pub(crate) fn mass_scale(c: &PointCloud) -> f64 {
    let t = c.total().norm();
    if t > 0.0 {
        t
    } else {
        c.weights().iter().map(|w| w.norm()).sum::<f64>().max(f64::MIN_POSITIVE)
    }
}

/// Annihilated transform values per measure, from region masses.
pub(crate) fn annihilated_fan_transforms(
    spec: &AnnihilationSpec,
    masses: &[Vec<Complex64>],
) -> Result<Vec<Vec<Complex64>>> {
    let group = &spec.orders;
    (0..masses.len().min(spec.measures))
        .map(|i| {
            let s = fourier_transform(group, &masses[i])?;
            spec.characters_of(i + 1)
                .iter()
                .map(|eps| Ok(s.coefficients[group.index_of(eps)?]))
                .collect()
        })
        .collect()
}

pub(crate) fn wedge_killed(t: &Q8Transform) -> [Complex64; 6] {
    [
        t.eps(0, 1),
        t.eps(1, 1),
        t.c_sigma[0][0],
        t.c_sigma[0][1],
        t.c_sigma[1][0],
        t.c_sigma[1][1],
    ]
}

/// Per-measure sums of squared annihilated transforms and their largest
/// modulus (the `c_sigma` block counts by its Frobenius norm).
fn transform_norms(prob: &SolveProblem, config: &Configuration, smoothing: f64) -> Result<Vec<(f64, f64)>> {
    match (&prob.target, config) {
        (Target::Fans { spec }, Configuration::Fans(cfg)) => {
            let masses = if smoothing > 0.0 {
                soft_region_masses(&prob.measures, cfg, smoothing)?
            } else {
                region_masses(&prob.measures, cfg)?
                    .functions
                    .into_iter()
                    .map(|f| f.values)
                    .collect()
            };
            Ok(annihilated_fan_transforms(spec, &masses)?
                .into_iter()
                .map(|cs| {
                    let sq: f64 = cs.iter().map(|c| c.norm_sqr()).sum();
                    let max = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
                    (sq, max)
                })
                .collect())
        }
        (Target::Wedges, Configuration::Wedges(cfg)) => {
            let masses: Vec<[Complex64; 8]> = if smoothing > 0.0 {
                soft_wedge_masses(&prob.measures, cfg, smoothing)?
            } else {
                wedge_region_masses(&prob.measures, cfg)?
                    .functions
                    .iter()
                    .map(|f| f.values.clone().try_into().expect("eight wedges"))
                    .collect()
            };
            masses
                .iter()
                .map(|m| {
                    let t = q8_fourier_transform(m)?;
                    let k = wedge_killed(&t);
                    let eps_max = k[0].norm().max(k[1].norm());
                    Ok((k.iter().map(|c| c.norm_sqr()).sum(), eps_max.max(t.sigma_norm_sqr().sqrt())))
                })
                .collect()
        }
        _ => Err(Error::InvalidConfig("configuration does not match the problem target".into())),
    }
}

/// `sum |c_{i,eps}|^2` over the annihilated transforms; `smoothing = 0`
/// uses exact region masses.
pub fn objective(config: &Configuration, prob: &SolveProblem, smoothing: f64) -> Result<f64> {
    Ok(transform_norms(prob, config, smoothing)?.iter().map(|p| p.0).sum())
}

/// Max relative modulus of the annihilated transforms under the hard
/// classifier.
pub fn hard_residual(config: &Configuration, prob: &SolveProblem) -> Result<f64> {
    let norms = transform_norms(prob, config, 0.0)?;
    Ok(norms
        .iter()
        .zip(&prob.measures.measures)
        .map(|(n, c)| n.1 / mass_scale(c))
        .fold(0.0, f64::max))
}

/// Affine normalization of the clouds (weighted centroid to the origin,
/// unit RMS radius). Configurations found for the normalized clouds map
/// back without changing any label.
struct Frame {
    center: Vec<f64>,
    scale: f64,
}

impl Frame {
    fn fit(ms: &MeasureSet) -> Self {
        let stride = ms.measures[0].stride();
        let mut center = vec![0.0; stride];
        let mut mass = 0.0;
        for c in &ms.measures {
            for (p, w) in c.points().zip(c.weights()) {
                let a = w.norm();
                mass += a;
                center.iter_mut().zip(p).for_each(|(s, x)| *s += a * x);
            }
        }
        if mass > 0.0 {
            center.iter_mut().for_each(|s| *s /= mass);
        }
        let mut var = 0.0;
        for c in &ms.measures {
            for (p, w) in c.points().zip(c.weights()) {
                var += w.norm() * p.iter().zip(&center).map(|(x, m)| (x - m).powi(2)).sum::<f64>();
            }
        }
        let scale = if mass > 0.0 && var > 0.0 { (var / mass).sqrt() } else { 1.0 };
        Self { center, scale }
    }

    fn apply(&self, ms: &MeasureSet) -> Result<MeasureSet> {
        let clouds = ms
            .measures
            .iter()
            .map(|c| {
                let coords = c
                    .coords()
                    .chunks_exact(c.stride())
                    .flat_map(|p| p.iter().zip(&self.center).map(|(x, m)| (x - m) / self.scale))
                    .collect();
                PointCloud::new(c.field, c.d, coords, c.weights().to_vec())
            })
            .collect::<Result<_>>()?;
        MeasureSet::new(clouds)
    }

    /// `b = conj(<c, a>) + s b'` block by block, then renormalized.
    fn restore(&self, x: &[f64], field: Field, d: usize) -> Vec<f64> {
        let rd = field.real_dim();
        let block = rd * (d + 1);
        let mut out = Vec::with_capacity(x.len());
        for blk in x.chunks_exact(block) {
            let mut v = blk.to_vec();
            match field {
                Field::Complex => {
                    let mut ca = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        let c = Complex64::new(self.center[2 * i], self.center[2 * i + 1]);
                        let a = Complex64::new(blk[2 * i], blk[2 * i + 1]);
                        ca += c * a.conj();
                    }
                    let b = ca.conj() + Complex64::new(blk[2 * d], blk[2 * d + 1]) * self.scale;
                    v[2 * d] = b.re;
                    v[2 * d + 1] = b.im;
                }
                Field::Quaternion => {
                    let mut ca = Quaternion::ZERO;
                    for i in 0..d {
                        let c = Quaternion::from_array(self.center[4 * i..4 * i + 4].try_into().expect("4"));
                        let a = Quaternion::from_array(blk[4 * i..4 * i + 4].try_into().expect("4"));
                        ca = ca + c * a.conj();
                    }
                    let b = ca.conj() + Quaternion::from_array(blk[4 * d..].try_into().expect("4")).scale(self.scale);
                    v[4 * d..].copy_from_slice(&b.to_array());
                }
            }
            out.extend(v);
        }
        normalize_blocks(&mut out, block);
        out
    }
}

fn normalize_blocks(x: &mut [f64], block: usize) {
    for blk in x.chunks_exact_mut(block) {
        let n = blk.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.0 && n.is_finite() {
            blk.iter_mut().for_each(|v| *v /= n);
        } else {
            blk.iter_mut().for_each(|v| *v = 0.0);
            blk[block - 2] = 1.0;
        }
    }
}

/// Parameter layout: one block of real coordinates per fan (or the single
/// wedge center), `[a_1, ..., a_d, b]`.
struct Layout {
    field: Field,
    d: usize,
    orders: Option<AbelianGroup>,
}

impl Layout {
    fn block(&self) -> usize {
        self.field.real_dim() * (self.d + 1)
    }

    fn blocks(&self) -> usize {
        self.orders.as_ref().map_or(1, AbelianGroup::rank)
    }

    fn config(&self, x: &[f64]) -> Result<Configuration> {
        match &self.orders {
            Some(g) => {
                let centers = x
                    .chunks_exact(self.block())
                    .map(|b| b.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
                    .collect();
                Ok(Configuration::Fans(FanConfig::normalized(g.clone(), centers)?))
            }
            None => {
                let center = x
                    .chunks_exact(4)
                    .map(|q| Quaternion::from_array(q.try_into().expect("4")))
                    .collect();
                Ok(Configuration::Wedges(WedgeConfig::normalized(center)?))
            }
        }
    }

    /// Distance of each block to the excluded set: centers at infinity whose
    /// `b` would make the labelling discontinuous.
    fn excluded_distances(&self, x: &[f64]) -> Vec<f64> {
        let rd = self.field.real_dim();
        x.chunks_exact(self.block())
            .enumerate()
            .map(|(j, blk)| {
                let a2: f64 = blk[..rd * self.d].iter().map(|v| v * v).sum();
                let b = &blk[rd * self.d..];
                let gap2 = match &self.orders {
                    Some(g) => {
                        // with displacement <u,a> - conj(b), the removed copy
                        // of Z_q sits at b = -zeta^r
                        let q = g.orders()[j];
                        let b = Complex64::new(b[0], b[1]);
                        (0..q)
                            .map(|r| (b + Complex64::from_polar(1.0, TAU * r as f64 / q as f64)).norm_sqr())
                            .fold(f64::INFINITY, f64::min)
                    }
                    None => {
                        let v = Quaternion::from_array(b.try_into().expect("4"));
                        let n = v.norm().max(f64::MIN_POSITIVE);
                        let mut s = [v.w, -v.w, v.x, -v.x, v.y, -v.y, v.z, -v.z].map(|t| t / n);
                        s.sort_by(|a, b| b.total_cmp(a));
                        (s[0] - s[1]).powi(2)
                    }
                };
                (a2 + gap2).sqrt()
            })
            .collect()
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let rd = self.field.real_dim();
        let mut x = Vec::with_capacity(self.block() * self.blocks());
        for _ in 0..self.blocks() {
            let a: Vec<f64> = (0..rd * self.d).map(|_| rng.sample(StandardNormal)).collect();
            let an = a.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            x.extend(a.iter().map(|v| v / an));
            let radius = 0.5 * rng.gen::<f64>();
            let b: Vec<f64> = (0..rd).map(|_| rng.sample(StandardNormal)).collect();
            let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            x.extend(b.iter().map(|v| v / bn * radius));
        }
        normalize_blocks(&mut x, self.block());
        x
    }
}

const EXCLUSION_RADIUS: f64 = 0.1;

fn penalty(distances: &[f64]) -> f64 {
    distances
        .iter()
        .map(|&d| (1.0 - d / EXCLUSION_RADIUS).max(0.0).powi(2))
        .sum()
}

/// Minimizes the annihilated transforms, returning the best configuration
/// found under the hard classifier. Refuses uncertified problems unless
/// `force` is set; running out of budget is reported through `converged`.
pub fn solve(prob: &SolveProblem, force: bool) -> Result<SolveResult> {
    prob.validate()?;
    if !force && !prob.is_certified()? {
        let why = match prob.certified_dimension()? {
            Some(d) => format!(
                "existence is certified from dimension {d}, but the clouds live in dimension {}",
                prob.measures.d()
            ),
            None => "the characteristic polynomial vanishes, so no dimension is certified".into(),
        };
        return Err(Error::Uncertified(why));
    }
    let frame = Frame::fit(&prob.measures);
    let local = SolveProblem {
        measures: frame.apply(&prob.measures)?,
        ..prob.clone()
    };
    let layout = Layout {
        field: prob.measures.field(),
        d: prob.measures.d(),
        orders: match &prob.target {
            Target::Fans { spec } => Some(spec.orders.clone()),
            Target::Wedges => None,
        },
    };
    let block = layout.block();
    let scales: Vec<f64> = local.measures.measures.iter().map(mass_scale).collect();
    let relative = |x: &[f64], smoothing: f64| -> Result<(f64, f64)> {
        let cfg = layout.config(x)?;
        let norms = transform_norms(&local, &cfg, smoothing)?;
        let obj = norms.iter().zip(&scales).map(|(n, s)| n.0 / (s * s)).sum();
        let res = norms.iter().zip(&scales).map(|(n, s)| n.1 / s).fold(0.0, f64::max);
        Ok((obj, res))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(prob.budget.seed);
    let smoothing0 = prob.smoothing.unwrap_or_else(|| prob.default_smoothing());
    let max_evals = prob.budget.max_evaluations.max(1);
    let per_restart = (max_evals / (prob.budget.restarts + 1)).max(1);
    let mut evaluations = 0usize;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut restarts = 0usize;
    let project = |v: &mut [f64]| normalize_blocks(v, block);

    'restarts: for attempt in 0..=prob.budget.restarts {
        if evaluations >= max_evals {
            break;
        }
        restarts = attempt;
        let start = layout.random_start(&mut rng);
        let mut cma = Cma::new(&start, 0.3, None);
        let restart_end = (evaluations + per_restart).min(max_evals);
        let stages = prob.stages;
        for stage in 0..=stages {
            let smoothing = if stage < stages { smoothing0 / f64::powi(2.0, stage as i32) } else { 0.0 };
            let stage_end = evaluations + restart_end.saturating_sub(evaluations) / (stages + 1 - stage);
            if stage > 0 {
                let s = cma.sigma.max(0.02);
                cma.reset_shape(s);
            }
            let f = |x: &[f64]| match relative(x, smoothing) {
                Ok((v, _)) => v + penalty(&layout.excluded_distances(x)),
                Err(_) => f64::INFINITY,
            };
            while evaluations < stage_end {
                let generation = cma.step(&mut rng, &f, &project);
                evaluations += cma.lambda();
                let cand = &generation.candidates[generation.best];
                let (_, res) = relative(cand, 0.0)?;
                if best.as_ref().is_none_or(|b| res < b.1) {
                    best = Some((cand.clone(), res));
                }
                if res < prob.tolerance {
                    break 'restarts;
                }
                if cma.spread() < 1e-10 {
                    break;
                }
            }
        }
    }

    let (x, _) = best.unwrap_or_else(|| (layout.random_start(&mut rng), f64::INFINITY));
    let restored = frame.restore(&x, layout.field, layout.d);
    let config = layout.config(&restored)?;
    let residual = hard_residual(&config, prob)?;
    Ok(SolveResult {
        objective: objective(&config, prob, 0.0)?,
        region_masses: config.region_masses(&prob.measures)?,
        converged: residual < prob.tolerance,
        residual,
        config,
        evaluations,
        restarts,
        tolerance: prob.tolerance,
        seed: prob.budget.seed,
    })
}
