//! Dense complex polynomials in ascending-power form and a simultaneous
//! (Aberth-Ehrlich) root finder.

use crate::error::{Error, Result};
use crate::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients below this magnitude at the top end are dropped on construction.
pub const TRIM_TOLERANCE: f64 = 1e-14;

/// A polynomial `c[0] + c[1] z + ... + c[d] z^d`.
///
/// The zero polynomial is stored with an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Complex>", into = "Vec<Complex>")]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex>,
}

impl From<Vec<Complex>> for ComplexPolynomial {
    fn from(coeffs: Vec<Complex>) -> Self {
        Self::new(coeffs)
    }
}

impl From<ComplexPolynomial> for Vec<Complex> {
    fn from(p: ComplexPolynomial) -> Self {
        p.coeffs
    }
}

impl ComplexPolynomial {
    pub fn new(coeffs: Vec<Complex>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn identity() -> Self {
        Self::new(vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)])
    }

    /// `lead * prod (z - r)`.
    pub fn from_roots(lead: Complex, roots: &[Complex]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            coeffs.push(Complex::new(0.0, 0.0));
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k - 1] - r * coeffs[k];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.norm() < TRIM_TOLERANCE) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let zero = Complex::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |c_k| |z|^k`, the natural scale for the rounding error of `eval(z)`.
    pub fn abs_scale(&self, z: Complex) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `self(g(z))` by Horner's scheme on polynomials.
    pub fn compose(&self, g: &ComplexPolynomial) -> Self {
        let mut acc = ComplexPolynomial::zero();
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &ComplexPolynomial::constant(c);
        }
        acc
    }

    /// Sum of coefficient moduli; an upper bound for the sup norm on the circle.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// All roots, with numerically multiple roots merged.
    pub fn roots(&self) -> Result<Vec<Root>> {
        find_roots(self, &RootOptions::default())
    }

    pub fn roots_with(&self, opts: &RootOptions) -> Result<Vec<Root>> {
        find_roots(self, opts)
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn add(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex::new(0.0, 0.0);
        ComplexPolynomial::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn neg(self) -> ComplexPolynomial {
        ComplexPolynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn sub(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn mul(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

/// A root together with its numerical multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Relative backward-error target `|p(z)| / sum |c_k||z|^k`.
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// Roots closer than this are always merged.
    pub merge_radius: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_sweeps: 500,
            merge_radius: 1e-7,
        }
    }
}

/// Clusters wider than `merge_radius` but inside this radius are merged only
/// when the residual at their centroid is at rounding level.
const CLUSTER_RADIUS: f64 = 1e-4;
const CENTROID_RESIDUAL: f64 = 1e-13;
/// Residual accepted for roots that hit the sweep limit (multiple roots stall here).
const STALL_RESIDUAL: f64 = 1e-10;

fn find_roots(p: &ComplexPolynomial, opts: &RootOptions) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument(
            "the zero polynomial has no isolated roots".into(),
        ));
    }
    // exact zeros at the origin
    let shift = p.coeffs.iter().take_while(|c| **c == Complex::new(0.0, 0.0)).count();
    let reduced = ComplexPolynomial::new(p.coeffs[shift..].to_vec());
    let mut raw = vec![Complex::new(0.0, 0.0); shift];
    raw.extend(aberth(&reduced, opts)?);
    Ok(merge_roots(p, &raw, opts.merge_radius))
}

fn aberth(p: &ComplexPolynomial, opts: &RootOptions) -> Result<Vec<Complex>> {
    let d = p.degree();
    let c = p.coeffs();
    match d {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-c[0] / c[1]]),
        _ => {}
    }
    let radius = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 } * 1.05;
    let mut z: Vec<Complex> = (0..d)
        .map(|k| {
            let jitter = 0.7 + 0.25 * (k as f64 * 1.618_033_988_75).sin();
            Complex::from_polar(radius, TAU * (k as f64 + jitter) / d as f64)
        })
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;

    for _ in 0..opts.max_sweeps {
        let mut all_done = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (ratio, residual) = newton_ratio(p, z[i]);
            // iterate to rounding level so that clusters of a multiple root
            // contract far enough to be recognised
            if residual <= 4.0 * eps {
                done[i] = true;
                continue;
            }
            all_done = false;
            let sum: Complex = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = match ratio {
                // stationary point: nudge off it
                None => Complex::from_polar(1e-3 * (1.0 + z[i].norm()), i as f64),
                Some(ratio) => ratio / (Complex::new(1.0, 0.0) - ratio * sum),
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::RootSolveFailure {
                    sweeps: opts.max_sweeps,
                    worst: f64::INFINITY,
                    residuals: residuals(p, &z),
                });
            }
            z[i] -= step;
            if step.norm() <= 4.0 * eps * z[i].norm().max(eps) {
                done[i] = true;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    let res = residuals(p, &z);
    let worst = res.iter().cloned().fold(0.0, f64::max);
    if worst <= opts.tolerance.max(STALL_RESIDUAL) {
        Ok(z)
    } else {
        Err(Error::RootSolveFailure {
            sweeps: opts.max_sweeps,
            worst,
            residuals: res,
        })
    }
}

fn residuals(p: &ComplexPolynomial, z: &[Complex]) -> Vec<f64> {
    z.iter().map(|&x| newton_ratio(p, x).1).collect()
}

/// Newton correction `p(z) / p'(z)` (`None` at a stationary point) and the
/// relative residual. Outside the unit disk both come from the reversed
/// polynomial `q(w) = w^d p(1/w)`, so large roots do not overflow.
fn newton_ratio(p: &ComplexPolynomial, z: Complex) -> (Option<Complex>, f64) {
    let c = p.coeffs();
    if z.norm() <= 1.0 {
        let (val, dval) = p.eval_with_derivative(z);
        let residual = val.norm() / p.abs_scale(z).max(f64::MIN_POSITIVE);
        let ratio = (dval.norm() != 0.0).then(|| val / dval);
        return (ratio, residual);
    }
    let w = z.inv();
    let r = w.norm();
    let zero = Complex::new(0.0, 0.0);
    let (mut q, mut dq, mut scale) = (zero, zero, 0.0);
    for &ck in c {
        dq = dq * w + q;
        q = q * w + ck;
        scale = scale * r + ck.norm();
    }
    let d = (c.len() - 1) as f64;
    let denom = q * d - w * dq;
    let ratio = (denom.norm() != 0.0).then(|| z * q / denom);
    (ratio, q.norm() / scale.max(f64::MIN_POSITIVE))
}

fn relative_residual(p: &ComplexPolynomial, z: Complex) -> f64 {
    newton_ratio(p, z).1
}

/// Single-linkage clustering of the raw roots; a cluster collapses to one
/// multiple root when it is tight (`merge_radius`) or when its centroid is a
/// rounding-level root of `p`.
fn merge_roots(p: &ComplexPolynomial, raw: &[Complex], merge_radius: f64) -> Vec<Root> {
    let clusters = link(raw, CLUSTER_RADIUS);
    let mut out = Vec::with_capacity(raw.len());
    for members in clusters {
        if members.len() == 1 {
            out.push(Root {
                value: raw[members[0]],
                multiplicity: 1,
            });
            continue;
        }
        let pts: Vec<Complex> = members.iter().map(|&i| raw[i]).collect();
        let centroid = pts.iter().sum::<Complex>() / pts.len() as f64;
        if relative_residual(p, centroid) <= CENTROID_RESIDUAL {
            out.push(Root {
                value: polish_multiple(p, centroid, pts.len()),
                multiplicity: pts.len(),
            });
        } else {
            for sub in link(&pts, merge_radius) {
                let c = sub.iter().map(|&i| pts[i]).sum::<Complex>() / sub.len() as f64;
                out.push(Root {
                    value: c,
                    multiplicity: sub.len(),
                });
            }
        }
    }
    out
}

fn link(pts: &[Complex], radius: f64) -> Vec<Vec<usize>> {
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (pts[i] - pts[j]).norm() <= radius * (1.0 + pts[i].norm()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    groups
}

/// A root of multiplicity `m` is a simple root of the `(m-1)`-th derivative.
fn polish_multiple(p: &ComplexPolynomial, start: Complex, m: usize) -> Complex {
    let mut q = p.clone();
    for _ in 1..m {
        q = q.derivative();
    }
    let mut z = start;
    let mut best = q.eval(z).norm();
    for _ in 0..8 {
        let (v, dv) = q.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let cand = z - v / dv;
        let r = q.eval(cand).norm();
        if !(r < best) || (cand - z).norm() > CLUSTER_RADIUS * (1.0 + z.norm()) {
            break;
        }
        best = r;
        z = cand;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sorted_by_angle(mut v: Vec<Root>) -> Vec<Root> {
        v.sort_by(|a, b| a.value.arg().total_cmp(&b.value.arg()));
        v
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = ComplexPolynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-15, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), 1);
        assert!(ComplexPolynomial::new(vec![c(1e-16, 0.0)]).is_zero());
    }

    #[test]
    fn from_roots_expands_product() {
        let p = ComplexPolynomial::from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p.coeffs(), &[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn derivative_and_horner_agree() {
        let p = ComplexPolynomial::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(2.0, 0.0)]);
        let z = c(0.3, -0.7);
        let (v, dv) = p.eval_with_derivative(z);
        assert_abs_diff_eq!((v - p.eval(z)).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((dv - p.derivative().eval(z)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = ComplexPolynomial::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let g = ComplexPolynomial::new(vec![c(0.5, 0.0), c(0.0, 0.0), c(1.0, -1.0)]);
        let h = f.compose(&g);
        let z = c(0.2, 0.9);
        assert_abs_diff_eq!((h.eval(z) - f.eval(g.eval(z))).norm(), 0.0, epsilon = 1e-13);
        assert_eq!(h.degree(), 4);
    }

    #[test]
    fn far_root_does_not_overflow() {
        // roots 1e-8, 1e8 and 39 points of modulus 0.9
        let mut p = ComplexPolynomial::new(vec![c(-1e-8, 0.0), c(1.0, 0.0)]);
        p = &p * &ComplexPolynomial::new(vec![c(-1.0, 0.0), c(1e-8, 0.0)]);
        for k in 0..39 {
            let w = Complex::from_polar(0.9, k as f64);
            p = &p * &ComplexPolynomial::new(vec![-w, c(1.0, 0.0)]);
        }
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 41);
        assert!(roots.iter().any(|r| (r.value - c(1e8, 0.0)).norm() < 1e-2));
        assert!(roots.iter().any(|r| (r.value - c(1e-8, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn roots_of_unity() {
        let p = ComplexPolynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let r = sorted_by_angle(p.roots().unwrap());
        assert_eq!(r.len(), 3);
        for (k, root) in r.iter().enumerate() {
            let expected = Complex::from_polar(1.0, TAU * (k as f64 - 1.0) / 3.0);
            assert_abs_diff_eq!((root.value - expected).norm(), 0.0, epsilon = 1e-12);
            assert_eq!(root.multiplicity, 1);
        }
    }

    #[test]
    fn exact_zero_roots_are_kept() {
        // z^2 - z
        let p = ComplexPolynomial::new(vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        let r = sorted_by_angle(p.roots().unwrap());
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|x| x.value.norm() == 0.0));
        assert!(r.iter().any(|x| (x.value - c(1.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn triple_root_is_merged_and_polished() {
        // -(z - 1)^3, the fixed-point polynomial of (3z^2+1)/(3+z^2)
        let p = ComplexPolynomial::from_roots(c(-1.0, 0.0), &[c(1.0, 0.0); 3]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert_abs_diff_eq!((r[0].value - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn double_root_next_to_simple_root() {
        let p = ComplexPolynomial::from_roots(
            c(0.5, 0.5),
            &[c(0.0, 1.0), c(0.0, 1.0), c(-0.3, 0.2)],
        );
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 2);
        let double = r.iter().find(|x| x.multiplicity == 2).unwrap();
        assert_abs_diff_eq!((double.value - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn close_but_distinct_roots_stay_separate() {
        let p = ComplexPolynomial::from_roots(c(1.0, 0.0), &[c(0.5, 0.0), c(0.5 + 1e-4, 0.0)]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn zero_polynomial_has_no_roots() {
        assert!(ComplexPolynomial::zero().roots().is_err());
        assert!(ComplexPolynomial::constant(c(2.0, 0.0)).roots().unwrap().is_empty());
    }

    #[test]
    fn serde_is_plain_coefficient_list() {
        let p = ComplexPolynomial::new(vec![c(1.0, 0.0), c(0.0, -2.0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1.0,0.0],[0.0,-2.0]]");
        let back: ComplexPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
