//! Quadrature on intervals, reference simplices and Euclidean balls.
//!
//! Simplex rules live on the reference simplex `{s ≥ 0, Σs ≤ 1}` in the
//! coordinates `s = (λ_1, …, λ_n)`; their weights sum to one, so a rule for a
//! physical simplex is obtained by scaling with its volume.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (x.iter().map(|t| 0.5 * (t + 1.0)).collect(), w.iter().map(|v| 0.5 * v).collect())
}

/// `panels` copies of the `points`-point Gauss rule on equal subintervals of `[0, 1]`.
pub fn composite_gauss_unit(points: usize, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre_unit(points);
    let h = 1.0 / panels as f64;
    let mut nodes = Vec::with_capacity(points * panels);
    let mut weights = Vec::with_capacity(points * panels);
    for p in 0..panels {
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push((p as f64 + xi) * h);
            weights.push(wi * h);
        }
    }
    (nodes, weights)
}

/// A rule on the reference `n`-simplex with weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexRule<R> {
    dim: usize,
    degree: usize,
    nodes: Vec<Vec<R>>,
    weights: Vec<R>,
}

const DUNAVANT4: [(f64, f64); 2] = [(0.445948490915965, 0.223381589678011), (0.091576213509771, 0.109951743655322)];

const KEAST5_VERTEX: [(f64, f64); 2] =
    [(0.0927352503108912, 0.01224884051939366), (0.3108859192633006, 0.01878132095300264)];
const KEAST5_EDGE: (f64, f64) = (0.4544962958743504, 0.007091003462846911);

impl<R: Real> SimplexRule<R> {
    /// A rule exact for polynomials of total degree `degree` on the `dim`-simplex.
    ///
    /// Uses the symmetric 6-point triangle rule (degree 4) and the 14-point
    /// tetrahedron rule (degree 5) when they suffice, collapsed Gauss
    /// products otherwise.
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        let (nodes, weights, exact): (Vec<Vec<f64>>, Vec<f64>, usize) = match dim {
            0 => (vec![vec![]], vec![1.0], usize::MAX),
            1 => {
                let m = degree / 2 + 1;
                let (x, w) = gauss_legendre_unit(m);
                (x.into_iter().map(|t| vec![t]).collect(), w, 2 * m - 1)
            }
            2 if degree <= 4 => {
                let mut nodes = Vec::new();
                let mut weights = Vec::new();
                for (a, w) in DUNAVANT4 {
                    let b = 1.0 - 2.0 * a;
                    for bary in [[a, a, b], [a, b, a], [b, a, a]] {
                        nodes.push(vec![bary[1], bary[2]]);
                        weights.push(w);
                    }
                }
                (nodes, weights, 4)
            }
            3 if degree <= 5 => {
                let mut nodes = Vec::new();
                let mut weights = Vec::new();
                for (a, w) in KEAST5_VERTEX {
                    let b = 1.0 - 3.0 * a;
                    for j in 0..4 {
                        let mut bary = [a; 4];
                        bary[j] = b;
                        nodes.push(bary[1..].to_vec());
                        weights.push(w);
                    }
                }
                let (a, w) = KEAST5_EDGE;
                let b = 0.5 - a;
                for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
                    let mut bary = [b; 4];
                    bary[i] = a;
                    bary[j] = a;
                    nodes.push(bary[1..].to_vec());
                    weights.push(w);
                }
                (nodes, weights, 5)
            }
            2 | 3 => {
                let (nodes, weights) = collapsed(dim, degree);
                (nodes, weights, degree)
            }
            d => return Err(Error::UnsupportedDimension(d)),
        };
        let total: f64 = weights.iter().sum();
        Ok(Self {
            dim,
            degree: if exact == usize::MAX { degree } else { exact.max(degree) },
            nodes: nodes.iter().map(|n| n.iter().map(|&v| R::lit(v)).collect()).collect(),
            weights: weights.iter().map(|&w| R::lit(w / total)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degree of polynomial exactness.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Nodes in reference coordinates `s = (λ_1, …, λ_n)`.
    pub fn nodes(&self) -> &[Vec<R>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }
}

/// Collapsed (Duffy) Gauss product on the reference simplex; unnormalized.
fn collapsed(dim: usize, degree: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = (degree + dim) / 2 + 1;
    let (x, w) = gauss_legendre_unit(m);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    match dim {
        2 => {
            for (u, wu) in x.iter().zip(&w) {
                for (v, wv) in x.iter().zip(&w) {
                    nodes.push(vec![*u, v * (1.0 - u)]);
                    weights.push(wu * wv * (1.0 - u));
                }
            }
        }
        3 => {
            for (u, wu) in x.iter().zip(&w) {
                for (v, wv) in x.iter().zip(&w) {
                    for (z, wz) in x.iter().zip(&w) {
                        let s1 = *u;
                        let s2 = v * (1.0 - u);
                        let s3 = z * (1.0 - u) * (1.0 - v);
                        nodes.push(vec![s1, s2, s3]);
                        weights.push(wu * wv * wz * (1.0 - u) * (1.0 - u) * (1.0 - v));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    (nodes, weights)
}

/// Exact `∫ s^α ds` over the reference `n`-simplex: `Π α_i! / (n + |α|)!`.
pub fn simplex_monomial_integral(alpha: &[u32]) -> f64 {
    let n = alpha.len() as u32;
    let total: u32 = alpha.iter().sum();
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    alpha.iter().map(|&a| fact(a)).product::<f64>() / fact(n + total)
}

/// Product rule on a ball `B(0, radius) ⊂ R^n`, `n ∈ {1, 2, 3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallRule<R> {
    dim: usize,
    radius: R,
    nodes: Vec<Vec<R>>,
    weights: Vec<R>,
}

impl<R: Real> BallRule<R> {
    /// A one-node rule at `x` with unit weight.
    pub fn single_node(x: Vec<R>) -> Self {
        Self { dim: x.len(), radius: R::zero(), nodes: vec![x], weights: vec![R::one()] }
    }

    /// Radial Gauss-Legendre with weight `r^{n−1}` times a uniform angular
    /// rule: `n_theta` equispaced angles in 2-D, `n_theta` azimuths and
    /// `n_theta / 2` Gauss polar nodes in 3-D. In 1-D, `n_r` Gauss points
    /// on the segment.
    pub fn new(dim: usize, radius: R, n_r: usize, n_theta: usize) -> Result<Self> {
        if n_r == 0 || (dim >= 2 && n_theta == 0) {
            return Err(Error::InvalidParameter("ball rule needs at least one node per direction".into()));
        }
        let rad = radius.as_f64();
        let (rx, rw) = gauss_legendre_unit(n_r);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match dim {
            1 => {
                let (x, w) = gauss_legendre(n_r);
                for (xi, wi) in x.iter().zip(&w) {
                    nodes.push(vec![rad * xi]);
                    weights.push(rad * wi);
                }
            }
            2 => {
                for (r, wr) in rx.iter().zip(&rw) {
                    for j in 0..n_theta {
                        let th = 2.0 * PI * (j as f64 + 0.5) / n_theta as f64;
                        let rr = rad * r;
                        nodes.push(vec![rr * th.cos(), rr * th.sin()]);
                        weights.push(wr * rad * rr * 2.0 * PI / n_theta as f64);
                    }
                }
            }
            3 => {
                let n_polar = (n_theta / 2).max(1);
                let (cx, cw) = gauss_legendre(n_polar);
                for (r, wr) in rx.iter().zip(&rw) {
                    for (c, wc) in cx.iter().zip(&cw) {
                        let sin = (1.0 - c * c).sqrt();
                        for j in 0..n_theta {
                            let ph = 2.0 * PI * (j as f64 + 0.5) / n_theta as f64;
                            let rr = rad * r;
                            nodes.push(vec![rr * sin * ph.cos(), rr * sin * ph.sin(), rr * c]);
                            weights.push(wr * rad * rr * rr * wc * 2.0 * PI / n_theta as f64);
                        }
                    }
                }
            }
            d => return Err(Error::UnsupportedDimension(d)),
        }
        Ok(Self {
            dim,
            radius,
            nodes: nodes.iter().map(|n| n.iter().map(|&v| R::lit(v)).collect()).collect(),
            weights: weights.iter().map(|&w| R::lit(w)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> R {
        self.radius
    }

    pub fn nodes(&self) -> &[Vec<R>] {
        &self.nodes
    }

    /// Weights summing to the ball's volume.
    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights rescaled to sum to one.
    pub fn averaging_weights(&self) -> Vec<R> {
        let total: R = crate::scalar::pairwise_sum(&self.weights);
        self.weights.iter().map(|&w| w / total).collect()
    }
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monomials(dim: usize, max_degree: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|m: Vec<u32>| {
                    let used: u32 = m.iter().sum();
                    (0..=max_degree - used).map(move |a| {
                        let mut n = m.clone();
                        n.push(a);
                        n
                    })
                })
                .collect();
        }
        out
    }

    fn apply(rule: &SimplexRule<f64>, alpha: &[u32]) -> f64 {
        let fact = (1..=rule.dim()).map(|k| k as f64).product::<f64>();
        rule.nodes()
            .iter()
            .zip(rule.weights())
            .map(|(s, w)| w * s.iter().zip(alpha).map(|(x, &a)| x.powi(a as i32)).product::<f64>())
            .sum::<f64>()
            / fact
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for p in 0..2 * n {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn simplex_rules_match_dirichlet_formula() {
        for dim in 1..=3 {
            for degree in [1, 2, 4, 5, 6, 8] {
                let rule = SimplexRule::<f64>::new(dim, degree).unwrap();
                assert!(rule.weights().iter().all(|&w| w > 0.0));
                for alpha in monomials(dim, degree as u32) {
                    let exact = simplex_monomial_integral(&alpha);
                    let got = apply(&rule, &alpha);
                    assert!((got - exact).abs() < 1e-14, "dim={dim} degree={degree} {alpha:?}");
                }
            }
        }
    }

    #[test]
    fn symmetric_rules_are_used_for_low_degree() {
        assert_eq!(SimplexRule::<f64>::new(2, 4).unwrap().len(), 6);
        assert_eq!(SimplexRule::<f64>::new(3, 5).unwrap().len(), 14);
        assert!(SimplexRule::<f64>::new(4, 2).is_err());
    }

    #[test]
    fn composite_rule_is_exact_for_cubics() {
        let (x, w) = composite_gauss_unit(2, 5);
        let got: f64 = x.iter().zip(&w).map(|(t, w)| w * t * t * t).sum();
        assert!((got - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ball_rules_have_the_right_volume_and_moments() {
        for dim in 1..=3 {
            let rule = BallRule::<f64>::new(dim, 0.5, 4, 8).unwrap();
            let vol: f64 = rule.weights().iter().sum();
            assert!((vol - unit_ball_volume(dim) * 0.5f64.powi(dim as i32)).abs() < 1e-12);
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            // ∫ |y|² over B(0, ρ) = n ω_n ρ^{n+2} / (n + 2)
            let second: f64 =
                rule.nodes().iter().zip(rule.weights()).map(|(y, w)| w * y.iter().map(|v| v * v).sum::<f64>()).sum();
            let exact = dim as f64 * unit_ball_volume(dim) * 0.5f64.powi(dim as i32 + 2) / (dim as f64 + 2.0);
            assert!((second - exact).abs() < 1e-12, "dim={dim}");
            let first: f64 = rule.nodes().iter().zip(rule.weights()).map(|(y, w)| w * y[0]).sum();
            assert!(first.abs() < 1e-14);
        }
    }
}
