use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use fanpart::certify::{
    build_equipartition_set, build_makeev_set, certify, z9_pair_set, AnnihilationSpec, PartitionClaim, Reading,
};
use fanpart::fourier::{fourier_inverse, fourier_transform, q8_fourier_transform, AbelianGroup, Q8Element};
use fanpart::geometry::{classify, region_index, region_masses, FanConfig, Field, MeasureSet, PointCloud, WedgeConfig};
use fanpart::poly::{dickson, product_of_linear_forms, q8_chern_check, Q8CohElement, TorsionPoly};
use fanpart::quaternion::Quaternion;
use fanpart::sampling::{generate, Distribution, GenRequest};
use fanpart::solver::{hard_residual, objective, solve, verify, verify_claim, Configuration, SolveProblem, Target};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:.0?}"))
}

fn dimension(spec: &AnnihilationSpec) -> Result<Option<u32>, String> {
    certify(spec).map(|r| r.certified_dimension).map_err(|e| e.to_string())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ac1() -> Outcome {
    let t = Instant::now();
    let r = certify(&build_equipartition_set(&[9], 1).unwrap()).map_err(|e| e.to_string())?;
    let want = TorsionPoly::monomial(&[9], vec![4], 6).unwrap();
    check(r.polynomial == want, format!("f = {}", r.polynomial))?;
    check(r.certified_dimension == Some(4), format!("d = {:?}", r.certified_dimension))?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("f = {}, d = 4", r.polynomial))
}

fn ac2() -> Outcome {
    let t = Instant::now();
    let mut n = 0;
    for p in [3usize, 5, 7, 11, 13] {
        for m in 1..=3usize {
            let d = dimension(&build_equipartition_set(&[p], m).unwrap())?;
            let want = (m * (p - 1) / 2) as u32;
            check(d == Some(want), format!("p={p} m={m}: {d:?} != {want}"))?;
            n += 1;
        }
    }
    within(t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{n} cases"))
}

fn ac3() -> Outcome {
    let cases: [(&[usize], usize, u32); 4] = [(&[3, 3], 2, 4), (&[5, 5], 1, 6), (&[3, 3], 2, 4), (&[3, 3], 8, 16)];
    for (orders, m, want) in cases {
        let d = dimension(&build_equipartition_set(orders, m).unwrap())?;
        check(d == Some(want), format!("{orders:?} m={m}: {d:?} != {want}"))?;
    }
    Ok("(3,3)m2=4 (5,5)m1=6 (3,3)m8=16".into())
}

fn z9_expected() -> TorsionPoly {
    let o = [9usize, 9];
    let mono = |a: u32, b: u32, k: i64| TorsionPoly::monomial(&o, vec![a, b], k).unwrap();
    mono(28, 9, 6).try_sub(&mono(10, 27, 6)).unwrap()
}

fn z9_factored() -> TorsionPoly {
    let o = [9usize, 9];
    let x = TorsionPoly::monomial(&o, vec![2, 0], 1).unwrap();
    let y = TorsionPoly::monomial(&o, vec![0, 2], 1).unwrap();
    let mut f = TorsionPoly::monomial(&o, vec![10, 9], 6).unwrap();
    for k in [1i64, 4, 16] {
        f = f.try_mul(&x.try_sub(&y.scale(BigInt::from(k))).unwrap().pow(3)).unwrap();
    }
    f
}

fn ac4() -> Outcome {
    let cases: [(&[usize], usize, usize, u32); 3] = [(&[15], 3, 1, 5), (&[15], 5, 1, 6), (&[6, 6], 3, 2, 16)];
    for (orders, p, m, want) in cases {
        let d = dimension(&build_makeev_set(orders, p, m).unwrap())?;
        check(d == Some(want), format!("{orders:?} p={p} m={m}: {d:?} != {want}"))?;
    }
    let r = certify(&z9_pair_set(Reading::Leading)).map_err(|e| e.to_string())?;
    check(r.polynomial == z9_expected(), format!("z9 pair f = {}", r.polynomial))?;
    check(z9_factored() == z9_expected(), format!("factored form = {}", z9_factored()))?;
    check(r.certified_dimension == Some(27), format!("z9 pair d = {:?}", r.certified_dimension))?;
    Ok(format!("5, 6, 16; z9 pair f = {}, d = 27", r.polynomial))
}

fn uniform(d: usize, n: usize, seed: u64) -> MeasureSet {
    MeasureSet::new(generate(&GenRequest::new(Distribution::UniformBall, d, n, seed)).unwrap()).unwrap()
}

fn ac5() -> Outcome {
    let mut converged = 0;
    let mut slowest = Duration::ZERO;
    for seed in 1..=5u64 {
        let prob = SolveProblem::new(
            Target::Fans { spec: build_equipartition_set(&[3], 1).unwrap() },
            uniform(1, 30, seed),
            seed,
        );
        let t = Instant::now();
        let r = solve(&prob, false).map_err(|e| e.to_string())?;
        slowest = slowest.max(t.elapsed());
        within(t.elapsed(), Duration::from_secs(60))?;
        let total = prob.measures.measures[0].total().re;
        let balanced = r.region_masses.masses(0).iter().all(|m| (m - total / 3.0).norm() < 1e-3 * total);
        if r.converged && r.residual < 1e-3 && balanced {
            converged += 1;
        }
    }
    check(converged >= 4, format!("{converged}/5 converged"))?;
    Ok(format!("{converged}/5 converged, slowest {slowest:.2?}"))
}

fn ac6() -> Outcome {
    let t = Instant::now();
    let prob = SolveProblem::new(
        Target::Fans { spec: build_makeev_set(&[6], 3, 1).unwrap() },
        uniform(2, 30, 11),
        3,
    );
    let r = solve(&prob, false).map_err(|e| e.to_string())?;
    within(t.elapsed(), Duration::from_secs(300))?;
    check(r.converged, format!("residual {:.3e}", r.residual))?;
    let total = prob.measures.measures[0].total().re;
    let m: Vec<f64> = r.region_masses.masses(0).iter().map(|z| z.re).collect();
    let mut worst: f64 = 0.0;
    for shift in 0..2 {
        for s in 0..3 {
            let sum = m[(2 * s + shift) % 6] + m[(2 * s + shift + 1) % 6];
            worst = worst.max((sum - total / 3.0).abs());
        }
    }
    check(worst < 1e-3 * total, format!("sub-fan deviation {worst:.3e}"))?;
    check(verify(&r, &prob).map_err(|e| e.to_string())?.passed, "verify failed")?;
    Ok(format!("sub-fan deviation {worst:.2e}, {:.2?}", t.elapsed()))
}

fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn ac7() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for orders in [vec![3], vec![4], vec![9], vec![3, 3], vec![6, 6]] {
        let g = AbelianGroup::new(orders).unwrap();
        for _ in 0..100 {
            let f = random_values(&mut rng, g.order());
            let s = fourier_transform(&g, &f).unwrap();
            let back = fourier_inverse(&g, &s.coefficients).unwrap();
            let inv = f.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let lhs: f64 = f.iter().map(|z| z.norm_sqr()).sum();
            let rhs: f64 = g.order() as f64 * s.coefficients.iter().map(|z| z.norm_sqr()).sum::<f64>();
            worst = worst.max(inv).max((lhs - rhs).abs() / lhs);
        }
    }
    for _ in 0..100 {
        let f = random_values(&mut rng, 8);
        let q = q8_fourier_transform(&f).unwrap();
        let back = q.reconstruct();
        let inv = f.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let lhs: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        let rhs = 8.0 * (q.c_eps.iter().map(|z| z.norm_sqr()).sum::<f64>() + 2.0 * q.sigma_norm_sqr());
        worst = worst.max(inv).max((lhs - rhs).abs() / lhs);
    }
    check(worst < 1e-12, format!("worst error {worst:.3e}"))?;
    within(t.elapsed(), Duration::from_secs(5))?;
    Ok(format!("600 functions, worst error {worst:.1e}"))
}

fn monic_forms(p: usize, k: usize) -> Vec<Vec<usize>> {
    let g = AbelianGroup::new(vec![p; k]).unwrap();
    g.elements()
        .filter(|e| e.iter().rev().find(|&&x| x != 0) == Some(&1))
        .collect()
}

fn ac8() -> Outcome {
    let t = Instant::now();
    for (p, k) in [(3usize, 2usize), (5, 2), (3, 3)] {
        let forms = monic_forms(p, k);
        check(forms.len() == (p.pow(k as u32) - 1) / (p - 1), "form count")?;
        let prod = product_of_linear_forms(&vec![p; k], &forms, 1).unwrap();
        let d = dickson(p as u64, k).unwrap();
        check(prod == d, format!("p={p} k={k}: {prod} != {d}"))?;
    }
    within(t.elapsed(), Duration::from_secs(10))?;
    Ok("(3,2) (5,2) (3,3)".into())
}

fn ac9() -> Outcome {
    let got = q8_chern_check();
    check(got == Q8CohElement::term(0, 0, 3, 4), format!("c6 = {got}"))?;
    Ok(format!("c6 = {got}"))
}

fn q8_orbit_cloud(rng: &mut ChaCha8Rng, elements: &[Q8Element], copies: usize) -> PointCloud {
    let mut coords = Vec::new();
    for _ in 0..copies {
        let v = Quaternion::new(1.0, rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
        for g in elements {
            coords.extend((v * g.quaternion()).to_array());
            coords.extend((0..8).map(|_| rng.gen_range(-1.0..1.0)));
        }
    }
    PointCloud::unit_weights(Field::Quaternion, 3, coords).unwrap()
}

fn z33_orbit_cloud(rng: &mut ChaCha8Rng, copies: usize) -> PointCloud {
    let mut pts = Vec::new();
    for _ in 0..copies {
        let z1 = Complex64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.1..1.9));
        let z2 = Complex64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.1..1.9));
        let rest = [c(rng.gen(), rng.gen()), c(rng.gen(), rng.gen())];
        for k1 in 0..3 {
            for k2 in 0..3 {
                let r1 = Complex64::from_polar(1.0, TAU * k1 as f64 / 3.0);
                let r2 = Complex64::from_polar(1.0, TAU * k2 as f64 / 3.0);
                pts.push(vec![z1 * r1, z2 * r2, rest[0], rest[1]]);
            }
        }
    }
    let n = pts.len();
    PointCloud::complex(&pts, vec![c(1.0, 0.0); n]).unwrap()
}

fn ac10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut center = vec![Quaternion::ZERO; 4];
    center[0] = Quaternion::ONE;
    let wedge = Configuration::Wedges(WedgeConfig::new(center).unwrap());

    let balanced = MeasureSet::new((0..2).map(|_| q8_orbit_cloud(&mut rng, &Q8Element::ALL, 5)).collect()).unwrap();
    let prob = SolveProblem::new(Target::Wedges, balanced, 0);
    let obj = objective(&wedge, &prob, 0.0).map_err(|e| e.to_string())?;
    check(obj < 1e-24, format!("Q8 orbit objective {obj:.3e}"))?;
    let v = verify_claim(&wedge, &prob, &PartitionClaim::Q8ModuloZ4, 1e-9).map_err(|e| e.to_string())?;
    check(v.passed && v.checks.len() == 32, "Q8 orbit union claim rejected")?;

    let z4 = [Q8Element::PlusOne, Q8Element::PlusI, Q8Element::MinusOne, Q8Element::MinusI];
    let prob = SolveProblem::new(
        Target::Wedges,
        MeasureSet::new(vec![q8_orbit_cloud(&mut rng, &z4, 4)]).unwrap(),
        0,
    );
    let v = verify_claim(&wedge, &prob, &PartitionClaim::Q8ModuloZ4, 1e-9).map_err(|e| e.to_string())?;
    check(v.passed, "cyclic orbit union claim rejected")?;

    let lopsided = [Q8Element::PlusOne, Q8Element::PlusJ];
    let prob = SolveProblem::new(
        Target::Wedges,
        MeasureSet::new(vec![q8_orbit_cloud(&mut rng, &lopsided, 6)]).unwrap(),
        0,
    );
    let v = verify_claim(&wedge, &prob, &PartitionClaim::Q8ModuloZ4, 1e-3).map_err(|e| e.to_string())?;
    check(!v.passed && v.failures().count() == 16, "lopsided cloud accepted")?;

    let spec = build_equipartition_set(&[3, 3], 2).unwrap();
    let axes = |j: usize| {
        let mut x = vec![c(0.0, 0.0); 5];
        x[j] = c(1.0, 0.0);
        x
    };
    let fans = Configuration::Fans(FanConfig::new(spec.orders.clone(), vec![axes(0), axes(1)]).unwrap());
    let ms = MeasureSet::new(vec![z33_orbit_cloud(&mut rng, 4), z33_orbit_cloud(&mut rng, 3)]).unwrap();
    let prob = SolveProblem::new(Target::Fans { spec: spec.clone() }, ms, 0);
    check(prob.certified_dimension().unwrap() == Some(4), "C^4 not certified")?;
    let obj = objective(&fans, &prob, 0.0).map_err(|e| e.to_string())?;
    check(obj < 1e-24, format!("Z3xZ3 orbit objective {obj:.3e}"))?;
    check(hard_residual(&fans, &prob).unwrap() < 1e-12, "Z3xZ3 residual")?;
    let v = verify_claim(&fans, &prob, &PartitionClaim::FullEquipartition, 1e-9).map_err(|e| e.to_string())?;
    check(v.passed, "Z3xZ3 orbit rejected")?;

    let skewed = MeasureSet::new(vec![uniform(4, 27, 1).measures[0].clone(), z33_orbit_cloud(&mut rng, 3)]).unwrap();
    let prob = SolveProblem::new(Target::Fans { spec }, skewed, 0);
    let v = verify_claim(&fans, &prob, &PartitionClaim::FullEquipartition, 1e-3).map_err(|e| e.to_string())?;
    check(!v.passed && v.failures().all(|f| f.measure == 1), "random cloud accepted")?;
    Ok("symmetric objectives 0; 4 verify controls".into())
}

fn random_fan(rng: &mut ChaCha8Rng, group: &AbelianGroup, d: usize) -> FanConfig {
    let centers = (0..group.rank())
        .map(|_| {
            let mut x: Vec<Complex64> = (0..=d).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            if rng.gen_bool(0.1) {
                x[..d].iter_mut().for_each(|a| *a = c(0.0, 0.0));
            }
            x
        })
        .collect();
    FanConfig::normalized(group.clone(), centers).unwrap()
}

fn ac11() -> Outcome {
    let groups: [&[usize]; 8] = [&[3], &[4], &[9], &[36], &[3, 3], &[2, 2, 2], &[6, 6], &[2, 3, 6]];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = 0usize;
    let mut trials = 0usize;
    for orders in groups {
        let group = AbelianGroup::new(orders.to_vec()).unwrap();
        for _ in 0..1000 {
            let d = rng.gen_range(1..=3);
            let cfg = random_fan(&mut rng, &group, d);
            let point: Vec<f64> = (0..2 * d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let label = classify(&point, &cfg);
            if group.check(&label).is_err() || group.index_of(&label).unwrap() != region_index(&point, &cfg) {
                violations += 1;
            }
            for g in group.elements() {
                let moved = classify(&point, &cfg.act(&g).unwrap());
                let mut want = group.add(&label, &group.neg(&g));
                for j in (0..group.rank()).filter(|&j| cfg.at_infinity(j)) {
                    want[j] = 0;
                }
                if moved != want {
                    violations += 1;
                }
            }
            trials += 1;
        }
        let cfg = random_fan(&mut rng, &group, 2);
        let ms = uniform(2, 200, rng.gen());
        let masses = region_masses(&ms, &cfg).unwrap();
        let sum: Complex64 = masses.masses(0).iter().sum();
        if (sum - ms.measures[0].total()).norm() > 1e-9 {
            violations += 1;
        }
    }
    check(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{trials} trials, 0 violations"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("AC-1", ac1),
        ("AC-2", ac2),
        ("AC-3", ac3),
        ("AC-4", ac4),
        ("AC-5", ac5),
        ("AC-6", ac6),
        ("AC-7", ac7),
        ("AC-8", ac8),
        ("AC-9", ac9),
        ("AC-10", ac10),
        ("AC-11", ac11),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("{name:<6} PASS  {:>9.2?}  {detail}", t.elapsed()),
            Err(why) => {
                println!("{name:<6} FAIL  {:>9.2?}  {why}", t.elapsed());
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
