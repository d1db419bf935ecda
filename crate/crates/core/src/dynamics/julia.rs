//! Backward-orbit sampling of the Julia set.

use crate::blaschke::FiniteBlaschkeProduct;
use crate::circle;
use crate::error::{Error, Result};
use crate::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleMethod {
    InverseIteration,
    PeriodicPoints,
}

/// How the next backward step is chosen among the `N` preimages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BranchRule {
    /// Best-first walk of the preimage tree: the node sitting in the largest
    /// unsampled arc is expanded next.
    #[default]
    GapFilling,
    /// A single backward orbit with a uniformly random branch at every step.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleOptions {
    pub n_points: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub rule: BranchRule,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            n_points: 10_000,
            burn_in: 50,
            seed: 0,
            epsilon: 0.01,
            rule: BranchRule::GapFilling,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaSample {
    pub points: Vec<Complex>,
    pub method: SampleMethod,
    pub branch_rule: BranchRule,
    pub burn_in: usize,
    pub seed: u64,
    pub epsilon_cover: f64,
    pub covered_fraction: f64,
}

impl JuliaSample {
    pub fn angles(&self) -> Vec<f64> {
        self.points.iter().map(|&z| circle::angle(z)).collect()
    }

    pub fn covered_fraction_at(&self, eps: f64) -> f64 {
        circle::covered_fraction(&self.angles(), eps)
    }

    pub fn largest_gap(&self) -> f64 {
        circle::largest_gap(&self.angles())
    }

    /// `theta,re,im` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im\n");
        for &z in &self.points {
            let _ = writeln!(out, "{},{},{}", circle::angle(z), z.re, z.im);
        }
        out
    }
}

/// Backward-orbit sample with the default branch rule and `epsilon = 0.01`.
pub fn backward_orbit_sample(
    phi: &FiniteBlaschkeProduct,
    n_points: usize,
    burn_in: usize,
    seed: u64,
) -> Result<JuliaSample> {
    backward_orbit_sample_with(
        phi,
        &SampleOptions {
            n_points,
            burn_in,
            seed,
            ..SampleOptions::default()
        },
    )
}

pub fn backward_orbit_sample_with(
    phi: &FiniteBlaschkeProduct,
    opts: &SampleOptions,
) -> Result<JuliaSample> {
    if opts.n_points == 0 {
        return Err(Error::InvalidArgument("n_points must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut w = circle::on_circle(TAU * rng.gen::<f64>());
    for _ in 0..opts.burn_in {
        w = random_preimage(phi, w, &mut rng)?;
    }
    let points = match opts.rule {
        BranchRule::Uniform => uniform_walk(phi, w, opts.n_points, &mut rng)?,
        BranchRule::GapFilling => gap_filling(phi, w, opts.n_points, &mut rng)?,
    };
    let angles: Vec<f64> = points.iter().map(|&z| circle::angle(z)).collect();
    Ok(JuliaSample {
        covered_fraction: circle::covered_fraction(&angles, opts.epsilon),
        points,
        method: SampleMethod::InverseIteration,
        branch_rule: opts.rule,
        burn_in: opts.burn_in,
        seed: opts.seed,
        epsilon_cover: opts.epsilon,
    })
}

fn random_preimage(phi: &FiniteBlaschkeProduct, w: Complex, rng: &mut ChaCha8Rng) -> Result<Complex> {
    let pre = phi.preimages(w)?;
    Ok(pre[rng.gen_range(0..pre.len())])
}

fn uniform_walk(
    phi: &FiniteBlaschkeProduct,
    start: Complex,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Complex>> {
    let mut out = Vec::with_capacity(n);
    let mut w = start;
    out.push(w);
    while out.len() < n {
        w = random_preimage(phi, w, rng)?;
        out.push(w);
    }
    Ok(out)
}

/// Sorted recorded angles with gap queries.
struct ArcIndex {
    keys: BTreeSet<u64>,
}

impl ArcIndex {
    fn new() -> Self {
        Self {
            keys: BTreeSet::new(),
        }
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn insert(&mut self, x: f64) {
        self.keys.insert(x.to_bits());
    }

    /// Length of the empty arc containing `x` and the distance from `x` to
    /// the nearest recorded angle.
    fn gap(&self, x: f64) -> (f64, f64) {
        if self.keys.is_empty() {
            return (TAU, TAU);
        }
        let k = x.to_bits();
        let lo = self
            .keys
            .range(..=k)
            .next_back()
            .map(|&b| f64::from_bits(b))
            .unwrap_or_else(|| f64::from_bits(*self.keys.iter().next_back().unwrap()) - TAU);
        let hi = self
            .keys
            .range(k + 1..)
            .next()
            .map(|&b| f64::from_bits(b))
            .unwrap_or_else(|| f64::from_bits(*self.keys.iter().next().unwrap()) + TAU);
        (hi - lo, (x - lo).min(hi - x))
    }
}

struct Node {
    priority: f64,
    order: u64,
    point: Complex,
    streak: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// Consecutive expansions along one chain that record nothing before the
/// chain is dropped.
const STREAK_CAP: usize = 256;

/// Best-first exploration of the backward preimage tree rooted at `start`.
/// A node is recorded when it is at least `pi / n` from every recorded
/// point. Whatever is still missing when the exploration stalls is filled
/// by a uniform walk from the last recorded point.
fn gap_filling(
    phi: &FiniteBlaschkeProduct,
    start: Complex,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Complex>> {
    let delta = PI / n as f64;
    let mut index = ArcIndex::new();
    let mut out = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    let mut order = 0u64;
    heap.push(Node {
        priority: TAU,
        order,
        point: start,
        streak: 0,
    });
    let max_expansions = 50 * n;
    let idle_limit = 10 * n;
    let (mut expansions, mut idle) = (0usize, 0usize);
    while out.len() < n && expansions < max_expansions && idle < idle_limit {
        let Some(node) = heap.pop() else { break };
        let x = circle::angle(node.point);
        let (g, d) = index.gap(x);
        if let Some(top) = heap.peek() {
            if g < 0.5 * top.priority {
                order += 1;
                heap.push(Node {
                    priority: g,
                    order,
                    ..node
                });
                continue;
            }
        }
        expansions += 1;
        let streak = if d >= delta || index.len() == 0 {
            index.insert(x);
            out.push(node.point);
            idle = 0;
            0
        } else {
            idle += 1;
            node.streak + 1
        };
        if streak > STREAK_CAP {
            continue;
        }
        for p in phi.preimages(node.point)? {
            order += 1;
            heap.push(Node {
                priority: index.gap(circle::angle(p)).0,
                order,
                point: p,
                streak,
            });
        }
    }
    if out.len() < n {
        let mut w = *out.last().unwrap_or(&start);
        while out.len() < n {
            w = random_preimage(phi, w, rng)?;
            out.push(w);
        }
    }
    Ok(out)
}
