//! A compact (mu/mu_w, lambda) CMA-ES with ask/tell, after Hansen's tutorial.
//!
//! Candidates are drawn sequentially from a seeded generator and evaluated
//! in parallel; ranking uses the candidate index to break ties, so a run is
//! a pure function of its seed.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub struct Cma {
    n: usize,
    lambda: usize,
    weights: Vec<f64>,
    mueff: f64,
    cc: f64,
    cs: f64,
    c1: f64,
    cmu: f64,
    damps: f64,
    chi_n: f64,
    generation: usize,
    pub mean: DVector<f64>,
    pub sigma: f64,
    cov: DMatrix<f64>,
    basis: DMatrix<f64>,
    scales: DVector<f64>,
    pc: DVector<f64>,
    ps: DVector<f64>,
}

pub struct Generation {
    pub candidates: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    /// Index of the best candidate of this generation.
    pub best: usize,
}

impl Cma {
    pub fn new(mean: &[f64], sigma: f64, lambda: Option<usize>) -> Self {
        let n = mean.len();
        let nf = n as f64;
        let lambda = lambda.unwrap_or(4 + (3.0 * nf.ln()).floor() as usize).max(4);
        let mu = lambda / 2;
        let raw: Vec<f64> = (0..mu)
            .map(|i| (mu as f64 + 0.5).ln() - ((i + 1) as f64).ln())
            .collect();
        let s: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / s).collect();
        let mueff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let cc = (4.0 + mueff / nf) / (nf + 4.0 + 2.0 * mueff / nf);
        let cs = (mueff + 2.0) / (nf + mueff + 5.0);
        let c1 = 2.0 / ((nf + 1.3).powi(2) + mueff);
        let cmu = (1.0 - c1).min(2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nf + 2.0).powi(2) + mueff));
        let damps = 1.0 + 2.0 * (((mueff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + cs;
        let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));
        Self {
            n,
            lambda,
            weights,
            mueff,
            cc,
            cs,
            c1,
            cmu,
            damps,
            chi_n,
            generation: 0,
            mean: DVector::from_column_slice(mean),
            sigma,
            cov: DMatrix::identity(n, n),
            basis: DMatrix::identity(n, n),
            scales: DVector::from_element(n, 1.0),
            pc: DVector::zeros(n),
            ps: DVector::zeros(n),
        }
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Largest standard deviation along a principal axis.
    pub fn spread(&self) -> f64 {
        self.sigma * self.scales.max()
    }

    /// Restores isotropy while keeping the mean, for a fresh search phase.
    pub fn reset_shape(&mut self, sigma: f64) {
        let n = self.n;
        self.sigma = sigma;
        self.cov = DMatrix::identity(n, n);
        self.basis = DMatrix::identity(n, n);
        self.scales = DVector::from_element(n, 1.0);
        self.pc = DVector::zeros(n);
        self.ps = DVector::zeros(n);
        self.generation = 0;
    }

    pub fn ask(&self, rng: &mut impl Rng) -> Vec<DVector<f64>> {
        (0..self.lambda)
            .map(|_| {
                let z = DVector::from_fn(self.n, |_, _| rng.sample::<f64, _>(StandardNormal));
                let y = &self.basis * z.component_mul(&self.scales);
                &self.mean + y * self.sigma
            })
            .collect()
    }

    pub fn tell(&mut self, xs: &[DVector<f64>], values: &[f64]) {
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let old = self.mean.clone();
        let mut mean = DVector::zeros(self.n);
        for (w, &i) in self.weights.iter().zip(&order) {
            mean += &xs[i] * *w;
        }
        let yw = (&mean - &old) / self.sigma;
        let inv_sqrt = &self.basis
            * DMatrix::from_diagonal(&self.scales.map(|d| 1.0 / d))
            * self.basis.transpose();
        self.ps = &self.ps * (1.0 - self.cs) + (&inv_sqrt * &yw) * (self.cs * (2.0 - self.cs) * self.mueff).sqrt();
        self.generation += 1;
        let ps_norm = self.ps.norm();
        let denom = (1.0 - (1.0 - self.cs).powi(2 * self.generation as i32)).sqrt();
        let hsig = ps_norm / denom / self.chi_n < 1.4 + 2.0 / (self.n as f64 + 1.0);
        let h = if hsig { 1.0 } else { 0.0 };
        self.pc = &self.pc * (1.0 - self.cc) + &yw * (h * (self.cc * (2.0 - self.cc) * self.mueff).sqrt());
        let mut rank_mu = DMatrix::zeros(self.n, self.n);
        for (w, &i) in self.weights.iter().zip(&order) {
            let y = (&xs[i] - &old) / self.sigma;
            rank_mu += &y * y.transpose() * *w;
        }
        let rank_one = &self.pc * self.pc.transpose() + &self.cov * ((1.0 - h) * self.cc * (2.0 - self.cc));
        self.cov = &self.cov * (1.0 - self.c1 - self.cmu) + rank_one * self.c1 + rank_mu * self.cmu;
        self.sigma *= ((self.cs / self.damps) * (ps_norm / self.chi_n - 1.0)).min(1.0).exp();
        self.mean = mean;
        self.decompose();
    }

    fn decompose(&mut self) {
        let sym = (&self.cov + self.cov.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let floor = 1e-20 * eig.eigenvalues.max().max(1e-300);
        self.scales = eig.eigenvalues.map(|l| l.max(floor).sqrt());
        self.basis = eig.eigenvectors;
        self.cov = &self.basis
            * DMatrix::from_diagonal(&self.scales.map(|d| d * d))
            * self.basis.transpose();
    }

    /// One ask/evaluate/tell cycle. `project` maps each raw proposal to the
    /// point actually evaluated; the raw proposals drive the update.
    pub fn step<F, P>(&mut self, rng: &mut impl Rng, f: &F, project: &P) -> Generation
    where
        F: Fn(&[f64]) -> f64 + Sync,
        P: Fn(&mut [f64]) + Sync,
    {
        let xs = self.ask(rng);
        let candidates: Vec<Vec<f64>> = xs
            .iter()
            .map(|x| {
                let mut v = x.as_slice().to_vec();
                project(&mut v);
                v
            })
            .collect();
        let values: Vec<f64> = candidates
            .par_iter()
            .map(|c| {
                let v = f(c);
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .collect();
        self.tell(&xs, &values);
        let mut m = self.mean.as_slice().to_vec();
        project(&mut m);
        self.mean = DVector::from_vec(m);
        let best = (0..values.len())
            .min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)))
            .expect("nonempty population");
        Generation {
            candidates,
            values,
            best,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run(f: impl Fn(&[f64]) -> f64 + Sync, x0: &[f64], gens: usize, seed: u64) -> (Vec<f64>, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cma = Cma::new(x0, 0.5, None);
        let mut best = (x0.to_vec(), f64::INFINITY);
        for _ in 0..gens {
            let g = cma.step(&mut rng, &f, &|_: &mut [f64]| {});
            if g.values[g.best] < best.1 {
                best = (g.candidates[g.best].clone(), g.values[g.best]);
            }
        }
        best
    }

    #[test]
    fn minimizes_ellipsoid() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| 10f64.powi(i as i32) * (v - 1.0).powi(2)).sum();
        let (x, v) = run(f, &[0.0; 4], 400, 1);
        assert!(v < 1e-10, "{v}");
        assert!(x.iter().all(|xi| (xi - 1.0).abs() < 1e-4));
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (0..x.len() - 1).map(|i| 100.0 * (x[i + 1] - x[i] * x[i]).powi(2) + (1.0 - x[i]).powi(2)).sum();
        let (_, v) = run(f, &[-1.0, 1.0, 0.5], 1500, 2);
        assert!(v < 1e-8, "{v}");
    }

    #[test]
    fn seeded_runs_repeat() {
        let f = |x: &[f64]| x.iter().map(|v| v.abs().sqrt()).sum();
        let a = run(f, &[0.3, -0.2, 0.9], 50, 9);
        let b = run(f, &[0.3, -0.2, 0.9], 50, 9);
        assert_eq!(a.0, b.0);
        assert_eq!(a.1.to_bits(), b.1.to_bits());
    }
}
