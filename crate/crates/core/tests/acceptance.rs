//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails if any criterion fails, except for a failure recorded in
//! `KNOWN_RED` whose measured value matches its analytic explanation.

use blaschke_core::circle;
use blaschke_core::classify::{classify, conjugate_map, random_product};
use blaschke_core::dynamics::{backward_orbit_sample, measure_preservation_statistic};
use blaschke_core::semicrossed::{
    conjugation_transport, ergodic_lower_bound, fourier_coefficient, is_semisimple,
    monomial_spectral_radius, multiply, norm_bounds, quasinilpotent_witness, radical_membership,
    DiskFunction, RadicalOptions, RadicalVerdict, SemicrossedElement, SAMPLE_GRID,
};
use blaschke_core::dynamics::SampleOptions;
use blaschke_core::{Complex, FiniteBlaschkeProduct, Kind, Location, MobiusTransform, Step};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

/// Criteria expected to be red, with the reason printed alongside.
const KNOWN_RED: &[(u32, &str)] = &[(
    8,
    "the one-step image of Lebesgue measure is harmonic measure at phi(0) = 1/4, whose KS distance \
     from uniform is arcsin(1/4)/pi = 0.0804 < 0.1",
)];

struct Outcome {
    pass: bool,
    /// The failure is the documented one and the numbers match its analysis.
    explained: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            explained: false,
            detail,
        }
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn square() -> FiniteBlaschkeProduct {
    FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(0.0, 0.0); 2]).unwrap()
}

fn hyperbolic() -> FiniteBlaschkeProduct {
    FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(-0.5, 0.0); 2]).unwrap()
}

/// `(3z^2 + 1)/(3 + z^2)`, zeros `+-i/sqrt 3`.
fn parabolic_zero() -> FiniteBlaschkeProduct {
    let a = 1.0 / 3f64.sqrt();
    FiniteBlaschkeProduct::new(c(1.0, 0.0), vec![c(0.0, a), c(0.0, -a)]).unwrap()
}

/// Zeros `i/sqrt 3, -1/3` with `u = conj(p)/p`, `p = (1 - a1)(1 - a2)`.
fn parabolic_positive() -> FiniteBlaschkeProduct {
    let zeros = vec![c(0.0, 1.0 / 3f64.sqrt()), c(-1.0 / 3.0, 0.0)];
    let p = zeros.iter().fold(c(1.0, 0.0), |acc, &a| acc * (c(1.0, 0.0) - a));
    let u = p.conj() / p;
    FiniteBlaschkeProduct::new(u / u.norm(), zeros).unwrap()
}

/// Sum of `(1 - |a|^2)/|1 - a|^2 * w(a)` over the zeros.
fn weighted_sum(zeros: &[Complex], w: impl Fn(Complex) -> f64) -> f64 {
    zeros
        .iter()
        .map(|&a| (1.0 - a.norm_sqr()) / (c(1.0, 0.0) - a).norm_sqr() * w(a))
        .sum()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    let cl = classify(&square()).unwrap();
    let good = cl.kind == Kind::Elliptic && cl.denjoy_wolff.point.norm() < 1e-12;
    ok &= good;
    notes.push(format!("z^2 {} DW={:.1e}", cl.kind, cl.denjoy_wolff.point.norm()));

    let phi = hyperbolic();
    let cl = classify(&phi).unwrap();
    // angular derivative at 1: sum (1 - |a|^2)/|1 - a|^2 = 2 (3/4)/(9/4) = 2/3
    let oracle = weighted_sum(phi.zeros(), |_| 1.0);
    let m = cl.denjoy_wolff.multiplier.re;
    let good = cl.kind == Kind::Hyperbolic
        && (cl.denjoy_wolff.point - c(1.0, 0.0)).norm() < 1e-9
        && (m - 2.0 / 3.0).abs() <= 1e-9
        && (oracle - 2.0 / 3.0).abs() <= 1e-15;
    ok &= good;
    notes.push(format!("hyperbolic multiplier {m:.12}"));

    let phi = parabolic_zero();
    let cl = classify(&phi).unwrap();
    let s = cl.criterion_value.unwrap_or(f64::NAN);
    let good = cl.kind == Kind::Parabolic && s.abs() <= 1e-12 && cl.step == Step::Zero;
    ok &= good;
    notes.push(format!("parabolic-zero S={s:.1e}"));

    let phi = parabolic_positive();
    let cl = classify(&phi).unwrap();
    let s = cl.criterion_value.unwrap_or(f64::NAN);
    let oracle = weighted_sum(phi.zeros(), |a| a.im);
    let target = 1.0 / (2.0 * 3f64.sqrt());
    let good = cl.kind == Kind::Parabolic
        && cl.step == Step::Positive
        && (s - target).abs() <= 1e-9
        && (oracle - target).abs() <= 1e-12;
    ok &= good;
    notes.push(format!("parabolic-positive S={s:.12} (1/(2 sqrt 3)={target:.12})"));

    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    notes.push(format!("{:.3}s < 1s", elapsed.as_secs_f64()));
    Outcome::new(ok, format!("classification: {}", notes.join("; ")))
}

/// Fraction of 2^18 equispaced test angles within `eps` of a sample angle.
fn coverage_oracle(points: &[Complex], eps: f64) -> f64 {
    let mut angles: Vec<f64> = points.iter().map(|z| z.im.atan2(z.re).rem_euclid(TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let n = 1 << 18;
    let hit = (0..n)
        .filter(|&i| {
            let t = TAU * (i as f64 + 0.5) / n as f64;
            let j = angles.partition_point(|&a| a < t);
            let near = |k: usize| {
                let d = (angles[k % angles.len()] - t).abs();
                d.min(TAU - d)
            };
            near(j) <= eps || near(j + angles.len() - 1) <= eps
        })
        .count();
    hit as f64 / n as f64
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, phi, dense) in [
        ("z^2", square(), true),
        ("parabolic-zero", parabolic_zero(), true),
        ("hyperbolic", hyperbolic(), false),
    ] {
        let s = backward_orbit_sample(&phi, 10_000, 50, 0).unwrap();
        let f = s.covered_fraction_at(0.01);
        let oracle = coverage_oracle(&s.points, 0.01);
        let on_circle = s.points.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12);
        let good = on_circle
            && (f - oracle).abs() < 1e-3
            && if dense { f >= 0.99 } else { f <= 0.5 };
        ok &= good;
        notes.push(format!("{name} {f:.4} (grid oracle {oracle:.4})"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    notes.push(format!("{:.2}s < 10s", elapsed.as_secs_f64()));
    Outcome::new(ok, format!("Julia coverage at eps 0.01: {}", notes.join("; ")))
}

fn criterion_3() -> Outcome {
    let cases = [
        ("z^2", square(), true),
        ("hyperbolic", hyperbolic(), false),
        ("parabolic-zero", parabolic_zero(), true),
        ("parabolic-positive", parabolic_positive(), false),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, phi, expected) in cases {
        let cl = classify(&phi).unwrap();
        let got = is_semisimple(&cl);
        ok &= got == expected;
        notes.push(format!("{name}={got}"));
    }
    Outcome::new(ok, format!("semi-simplicity: {}", notes.join(", ")))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let phi = square();
    let z = DiskFunction::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0)]);
    let zm1 = DiskFunction::from_coeffs(vec![c(-1.0, 0.0), c(1.0, 0.0)]);
    let e = monomial_spectral_radius(&phi, &z, 1, 200, SAMPLE_GRID).unwrap();
    let worst = e.lower_bounds.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let e = monomial_spectral_radius(&phi, &zm1, 1, 200, SAMPLE_GRID).unwrap();
    let last = e.extrapolated;
    let jensen = ergodic_lower_bound(&zm1, SAMPLE_GRID).unwrap();
    // independent midpoint rule for exp(int log|e^{it} - 1| dt/2pi), Jensen value 1
    let m = 1 << 16;
    let mean_log = (0..m)
        .map(|k| (2.0 * (PI * (k as f64 + 0.5) / m as f64).sin()).abs().ln())
        .sum::<f64>()
        / m as f64;
    let elapsed = start.elapsed();
    let ok = worst <= 1e-12
        && last >= 0.99
        && (jensen - 1.0).abs() <= 1e-3
        && (mean_log.exp() - 1.0).abs() <= 1e-3
        && elapsed < Duration::from_secs(30);
    Outcome::new(
        ok,
        format!(
            "elliptic spectral radius: f=z max|entry-1|={worst:.1e}; f=z-1 entry 200={last:.6}; \
             ergodic bound {jensen:.6} (independent quadrature {:.6}); {:.2}s < 30s",
            mean_log.exp(),
            elapsed.as_secs_f64()
        ),
    )
}

fn random_disk_function(rng: &mut ChaCha8Rng, max_degree: usize) -> DiskFunction {
    let d = rng.gen_range(0..=max_degree);
    loop {
        let coeffs: Vec<Complex> = (0..=d)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = DiskFunction::from_coeffs(coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, max_k: usize, max_degree: usize) -> SemicrossedElement {
    let mut e = SemicrossedElement::zero();
    while e.is_zero() {
        for _ in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(0..=max_k);
            e.add_term(k, random_disk_function(rng, max_degree));
        }
    }
    e
}

fn criterion_5() -> Outcome {
    let opts = RadicalOptions {
        tol: 1e-6,
        ..RadicalOptions::default()
    };
    let phi = hyperbolic();
    let cl = classify(&phi).unwrap();
    let f = SemicrossedElement::monomial(1, DiskFunction::from_coeffs(vec![c(-1.0, 0.0), c(1.0, 0.0)]));
    let (hyp_ok, hyp_note) = match radical_membership(&f, &phi, &cl, &opts).unwrap() {
        RadicalVerdict::NotInRadical(w) => {
            // independent value |x - 1| at the witness point
            let oracle = (w.point - c(1.0, 0.0)).norm();
            let ok = w.k == 1 && w.value >= 1.9 && (oracle - w.value).abs() < 1e-12;
            (ok, format!("hyperbolic U(z-1) NotInRadical, |x-1|={:.6} at {:.6}", w.value, w.point))
        }
        v => (false, format!("hyperbolic U(z-1) gave {v:?}")),
    };

    let phi = square();
    let cl = classify(&phi).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut elements = vec![
        f.clone(),
        SemicrossedElement::monomial(0, DiskFunction::constant(c(1e-3, 0.0))),
        SemicrossedElement::monomial(2, DiskFunction::from_coeffs(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])),
    ];
    elements.extend((0..50).map(|_| random_element(&mut rng, 3, 3)));
    let rejected = elements
        .iter()
        .filter(|e| matches!(radical_membership(e, &phi, &cl, &opts).unwrap(), RadicalVerdict::NotInRadical(_)))
        .count();
    let ok = hyp_ok && rejected == elements.len();
    Outcome::new(
        ok,
        format!(
            "radical: {hyp_note}; z^2: {rejected}/{} nonzero elements NotInRadical",
            elements.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let phi = hyperbolic();
    let cl = classify(&phi).unwrap();
    let mut s2 = Vec::new();
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [200, 400, 800] {
        let (_, r) = quasinilpotent_witness(&phi, &cl, p, 5, &SampleOptions::default()).unwrap();
        // independent grid value of sup |f (f o phi)| from the closed form of f
        let n = 1 << 16;
        let peak = |z: Complex| ((c(1.0, 0.0) + r.x0.conj() * z) * 0.5).norm().powi(p as i32);
        let grid = (0..n)
            .map(|k| {
                let z = Complex::from_polar(1.0, TAU * k as f64 / n as f64);
                peak(z) * peak(phi.evaluate(z).unwrap())
            })
            .fold(0.0, f64::max);
        ok &= r.s2 >= grid * (1.0 - 1e-9) && r.s2 <= grid * 1.01 + 1e-15;
        if p == 800 {
            ok &= r.s2 <= 0.02 && r.certificate >= 0.999;
            notes.push(format!("certificate |f(x0)|={:.6}", r.certificate));
        }
        notes.push(format!("p={p} s2={:.3e} (grid oracle {grid:.3e})", r.s2));
        s2.push(r.s2);
    }
    ok &= s2.windows(2).all(|w| w[1] <= w[0]);
    Outcome::new(ok, format!("quasinilpotent witness: {}", notes.join("; ")))
}

fn coefficient_gap(a: &SemicrossedElement, b: &SemicrossedElement) -> f64 {
    let ks: std::collections::BTreeSet<usize> = a.terms().chain(b.terms()).map(|(k, _)| k).collect();
    ks.into_iter()
        .map(|k| {
            let (fa, fb) = (fourier_coefficient(a, k), fourier_coefficient(b, k));
            let n = fa.coeffs().len().max(fb.coeffs().len());
            (0..n)
                .map(|i| {
                    let x = fa.coeffs().get(i).copied().unwrap_or_default();
                    let y = fb.coeffs().get(i).copied().unwrap_or_default();
                    (x - y).norm()
                })
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = SemicrossedElement::monomial(1, DiskFunction::constant(c(1.0, 0.0)));
    let mut cov = 0.0f64;
    for phi in [square(), hyperbolic()] {
        for _ in 0..10 {
            let f = random_disk_function(&mut rng, 3);
            let fu = multiply(&SemicrossedElement::monomial(0, f.clone()), &one, &phi).unwrap();
            let g = fourier_coefficient(&fu, 1);
            for k in 0..1024 {
                let z = circle::on_circle(TAU * k as f64 / 1024.0);
                cov = cov.max((g.eval(z) - f.eval(phi.evaluate(z).unwrap())).norm());
            }
        }
    }
    let phi = square();
    let mut assoc = 0.0f64;
    for _ in 0..100 {
        let a = random_element(&mut rng, 2, 3);
        let b = random_element(&mut rng, 2, 3);
        let d = random_element(&mut rng, 2, 3);
        let left = multiply(&multiply(&a, &b, &phi).unwrap(), &d, &phi).unwrap();
        let right = multiply(&a, &multiply(&b, &d, &phi).unwrap(), &phi).unwrap();
        assoc = assoc.max(coefficient_gap(&left, &right));
    }
    Outcome::new(
        cov <= 1e-9 && assoc <= 1e-8,
        format!("covariance max error {cov:.1e} on a 1024-grid (z^2 and hyperbolic); associativity max error {assoc:.1e} over 100 triples"),
    )
}

/// Kolmogorov distance of the sample from the Poisson law at `r` in (0, 1).
fn ks_against_poisson(phi: &FiniteBlaschkeProduct, r: f64, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cdf = |t: f64| t / TAU + (r * t.sin()).atan2(1.0 - r * t.cos()) / PI;
    let mut u: Vec<f64> = (0..n)
        .map(|_| {
            let w = phi.evaluate(Complex::from_polar(1.0, TAU * rng.gen::<f64>())).unwrap();
            cdf(w.im.atan2(w.re).rem_euclid(TAU))
        })
        .collect();
    u.sort_by(f64::total_cmp);
    u.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n as f64).max((i + 1) as f64 / n as f64 - x))
        .fold(0.0, f64::max)
}

fn criterion_8() -> Outcome {
    let sq = measure_preservation_statistic(&square(), 10_000, 0).unwrap();
    let phi = hyperbolic();
    let hyp = measure_preservation_statistic(&phi, 10_000, 0).unwrap();
    let r = phi.evaluate(c(0.0, 0.0)).unwrap().norm();
    let exact = r.asin() / PI;
    let fit = ks_against_poisson(&phi, r, 10_000, 1);
    let pass = sq <= 0.03 && hyp >= 0.1;
    // sampling error of a 10^4-point KS statistic is about 1/sqrt(n) = 0.01
    let explained = sq <= 0.03 && !pass && (hyp - exact).abs() <= 0.03 && fit <= 0.03;
    Outcome {
        pass,
        explained,
        detail: format!(
            "measure preservation: KS(z^2)={sq:.4} <= 0.03; KS(hyperbolic)={hyp:.4} vs >= 0.1 \
             (exact value arcsin(|phi(0)|)/pi={exact:.4}; KS against harmonic measure at phi(0) {fit:.4})"
        ),
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut kinds = 0;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let degree = rng.gen_range(2..=4);
        let phi = random_product(&mut rng, degree).unwrap();
        let lambda = Complex::from_polar(1.0, rng.gen_range(0.0..TAU));
        let cc = Complex::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..TAU));
        let tau = MobiusTransform::new(lambda, cc).unwrap();
        let psi = conjugate_map(&phi, &tau).unwrap();
        let (k1, k2) = (classify(&phi).unwrap(), classify(&psi).unwrap());
        if k1.kind == k2.kind {
            kinds += 1;
        }
        if k1.kind == Kind::Elliptic && k1.denjoy_wolff.location == Location::Interior {
            worst = worst.max((k1.denjoy_wolff.multiplier.norm() - k2.denjoy_wolff.multiplier.norm()).abs());
        }
        let f = SemicrossedElement::monomial(rng.gen_range(0..=3), random_disk_function(&mut rng, 3));
        let g = conjugation_transport(&f, &tau).unwrap();
        let (a, b) = (norm_bounds(&f), norm_bounds(&g));
        worst = worst.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
    }
    Outcome::new(
        kinds == 50 && worst <= 1e-6,
        format!("conjugation invariance: kind preserved {kinds}/50; max norm-bound / multiplier change {worst:.1e}"),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut passed = 0;
    let mut unexplained = Vec::new();
    for (id, run) in criteria {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} [{id}] {} ({:.2}s)", o.detail, start.elapsed().as_secs_f64());
        if o.pass {
            passed += 1;
            if KNOWN_RED.iter().any(|(k, _)| *k == id) {
                println!("      criterion {id} is listed as known red but passed; update KNOWN_RED");
                unexplained.push(id);
            }
        } else {
            match KNOWN_RED.iter().find(|(k, _)| *k == id) {
                Some((_, why)) if o.explained => println!("      known red: {why}"),
                _ => unexplained.push(id),
            }
        }
    }
    println!("acceptance: {passed}/9 criteria pass");
    if !unexplained.is_empty() {
        println!("unexpected results for criteria {unexplained:?}");
        std::process::exit(1);
    }
}
