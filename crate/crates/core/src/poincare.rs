//! The averaged cone homotopy on the unit ball `B ⊂ R^n`.
//!
//! For `x ∈ B` the cone contraction is
//! `χ_x(ω)_y(u_1, …, u_{k−1}) = ∫_0^1 t^{k−1} ω_{x+t(y−x)}(y − x, u_1, …, u_{k−1}) dt`
//! and `h(ω)` averages `χ_x(ω)` over `x ∈ ½B`. On functions, `h(f)` is the
//! mean of `f` over `½B`. The identities `dh + hd = Id` (degree ≥ 1) and
//! `h(f) + h(df) = f` are checked numerically, with `dh` by central
//! differences.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orlicz::luxemburg_from_samples;
use crate::poly::{subsets, Poly, PolyForm};
use crate::quadrature::{composite_gauss_unit, BallRule};
use crate::scalar::{permutation_sign, Real};
use crate::young::YoungFunction;

/// Writes the components of a form at a point into the output buffer.
pub type Evaluator<R> = Arc<dyn Fn(&[R], &mut [R]) + Send + Sync>;

/// A `k`-form on the ball given by closed-form component evaluators and
/// those of its exterior derivative.
#[derive(Clone)]
pub struct AnalyticForm<R> {
    n: usize,
    k: usize,
    label: String,
    eval: Evaluator<R>,
    d_eval: Evaluator<R>,
}

impl<R> fmt::Debug for AnalyticForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnalyticForm({}, n={}, k={})", self.label, self.n, self.k)
    }
}

impl<R: Real> AnalyticForm<R> {
    pub fn new(n: usize, k: usize, label: impl Into<String>, eval: Evaluator<R>, d_eval: Evaluator<R>) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if k > n {
            return Err(Error::InvalidDegree { degree: k, allowed: format!("0..={n}") });
        }
        Ok(Self { n, k, label: label.into(), eval, d_eval })
    }

    /// A polynomial form; `dω` is derived exactly.
    pub fn from_poly(form: &PolyForm<R>, label: impl Into<String>) -> Result<Self> {
        let n = form.dim();
        let k = form.degree();
        let d = if k < n { Some(form.d()) } else { None };
        let f = form.clone();
        let eval: Evaluator<R> = Arc::new(move |y, out| {
            for (o, p) in out.iter_mut().zip(f.components()) {
                *o = p.eval(y);
            }
        });
        let d_eval: Evaluator<R> = Arc::new(move |y, out| {
            if let Some(d) = &d {
                for (o, p) in out.iter_mut().zip(d.components()) {
                    *o = p.eval(y);
                }
            }
        });
        Self::new(n, k, label, eval, d_eval)
    }

    /// `y^α dy_I` with `I` increasing.
    pub fn monomial(n: usize, alpha: [u8; 3], index: &[usize]) -> Result<Self> {
        let mut e = [0u8; 4];
        e[..3].copy_from_slice(&alpha);
        let p = Poly::monomial(n, e, R::one());
        let label = format!("y^{:?} dy{:?}", &alpha[..n], index);
        Self::from_poly(&PolyForm::monomial_form(p, index), label)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_components(&self) -> usize {
        binomial(self.n, self.k)
    }

    pub fn components(&self, y: &[R]) -> Vec<R> {
        let mut out = vec![R::zero(); self.n_components()];
        (self.eval)(y, &mut out);
        out
    }

    /// Components of `dω` (empty in top degree).
    pub fn d_components(&self, y: &[R]) -> Vec<R> {
        if self.k == self.n {
            return Vec::new();
        }
        let mut out = vec![R::zero(); binomial(self.n, self.k + 1)];
        (self.d_eval)(y, &mut out);
        out
    }

    /// `dω` as an analytic form whose own derivative is zero.
    pub fn d(&self) -> Result<Self> {
        if self.k == self.n {
            return Err(Error::InvalidDegree { degree: self.k, allowed: format!("0..{}", self.n) });
        }
        let inner = self.d_eval.clone();
        Self::new(self.n, self.k + 1, format!("d({})", self.label), inner, Arc::new(|_, out: &mut [R]| out.fill(R::zero())))
    }

    /// Largest gap between the analytic `dω` and central differences of the components.
    pub fn derivative_consistency(&self, points: &[Vec<R>], step: R) -> R {
        let mut worst = R::zero();
        if self.k == self.n {
            return worst;
        }
        let table = DTable::new(self.n, self.k);
        for y in points {
            let fd = table.apply(self.n, |j| {
                let (plus, minus) = shifted(y, j, step);
                let (a, b) = (self.components(&plus), self.components(&minus));
                a.iter().zip(&b).map(|(&p, &m)| (p - m) / (step + step)).collect()
            });
            for (a, b) in fd.iter().zip(self.d_components(y)) {
                worst = worst.max((*a - b).abs());
            }
        }
        worst
    }
}

fn binomial(n: usize, k: usize) -> usize {
    subsets(n, k).len()
}

fn shifted<R: Real>(y: &[R], j: usize, step: R) -> (Vec<R>, Vec<R>) {
    let mut plus = y.to_vec();
    let mut minus = y.to_vec();
    plus[j] = plus[j] + step;
    minus[j] = minus[j] - step;
    (plus, minus)
}

/// Index bookkeeping for `d` and `ι` on component vectors.
struct DTable {
    /// For each `(k+1)`-subset: `(j, index of the k-subset without j, sign)`.
    d_terms: Vec<Vec<(usize, usize, bool)>>,
    k_count: usize,
}

impl DTable {
    fn new(n: usize, k: usize) -> Self {
        let lower = subsets(n, k);
        let d_terms = subsets(n, k + 1)
            .iter()
            .map(|set| {
                set.iter()
                    .enumerate()
                    .map(|(pos, &j)| {
                        let mut rest = set.clone();
                        rest.remove(pos);
                        (j, lower.iter().position(|s| *s == rest).expect("subset"), pos % 2 == 0)
                    })
                    .collect()
            })
            .collect();
        Self { d_terms, k_count: lower.len() }
    }

    /// `(dη)_I = Σ_pos (−1)^pos ∂_{I_pos} η_{I∖I_pos}` given `partials(j)[J] = ∂_j η_J`.
    fn apply<R: Real>(&self, n: usize, partials: impl Fn(usize) -> Vec<R>) -> Vec<R> {
        let p: Vec<Vec<R>> = (0..n).map(partials).collect();
        debug_assert!(p.iter().all(|v| v.len() == self.k_count));
        self.d_terms
            .iter()
            .map(|terms| {
                terms.iter().fold(R::zero(), |acc, &(j, idx, plus)| if plus { acc + p[j][idx] } else { acc - p[j][idx] })
            })
            .collect()
    }
}

/// Interior-product table: `(ι_v ω)_J = Σ (sign) v_i ω_I` over `I = J ∪ {i}`.
#[derive(Clone, Debug)]
struct InteriorTable {
    /// For each `(k−1)`-subset `J`: `(i, index of I, sign)`.
    terms: Vec<Vec<(usize, usize, bool)>>,
}

impl InteriorTable {
    fn new(n: usize, k: usize) -> Self {
        let upper = subsets(n, k);
        let lower = subsets(n, k - 1);
        let terms = lower
            .iter()
            .map(|j| {
                (0..n)
                    .filter(|i| !j.contains(i))
                    .map(|i| {
                        let pos = j.iter().filter(|&&a| a < i).count();
                        let mut set = j.clone();
                        set.insert(pos, i);
                        (i, upper.iter().position(|s| *s == set).expect("subset"), pos % 2 == 0)
                    })
                    .collect()
            })
            .collect();
        Self { terms }
    }
}

/// Nodes and weights for `½B` (averaging), `B` (norms) and `[0, 1]` (cone parameter).
#[derive(Clone, Debug, PartialEq)]
pub struct BallQuadrature<R> {
    n: usize,
    refine: usize,
    half: BallRule<R>,
    half_avg: Vec<R>,
    ball: BallRule<R>,
    t_nodes: Vec<R>,
    t_weights: Vec<R>,
}

/// Panels of the composite 2-point Gauss rule in `t` at refinement 0.
pub const BASE_T_PANELS: usize = 8;

impl<R: Real> BallQuadrature<R> {
    /// Base counts: polar `4 × 8` in 2-D, spherical `2 × 2 × 4` in 3-D,
    /// `BASE_T_PANELS` two-point panels in `t`; every count doubles per
    /// refinement level.
    pub fn new(n: usize, refine: usize) -> Result<Self> {
        if refine > 6 {
            return Err(Error::InvalidParameter("refinement level above 6".into()));
        }
        let f = 1usize << refine;
        let (n_r, n_theta) = match n {
            1 => (4, 1),
            2 => (4, 8),
            3 => (2, 4),
            d => return Err(Error::UnsupportedDimension(d)),
        };
        let half = BallRule::new(n, R::lit(0.5), n_r * f, n_theta * f)?;
        let ball = BallRule::new(n, R::one(), 2 * n_r * f, 2 * n_theta * f)?;
        let (t, w) = composite_gauss_unit(2, BASE_T_PANELS * f);
        let half_avg = half.averaging_weights();
        Ok(Self {
            n,
            refine,
            half,
            half_avg,
            ball,
            t_nodes: t.into_iter().map(R::lit).collect(),
            t_weights: w.into_iter().map(R::lit).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn refine(&self) -> usize {
        self.refine
    }

    pub fn half_ball(&self) -> &BallRule<R> {
        &self.half
    }

    pub fn ball(&self) -> &BallRule<R> {
        &self.ball
    }

    pub fn t_rule(&self) -> (&[R], &[R]) {
        (&self.t_nodes, &self.t_weights)
    }

    /// `(½B nodes, t nodes)`.
    pub fn node_counts(&self) -> (usize, usize) {
        (self.half.len(), self.t_nodes.len())
    }
}

fn minor_values<R: Real>(n: usize, vectors: &[Vec<R>]) -> Vec<R> {
    let k = vectors.len();
    subsets(n, k)
        .iter()
        .map(|set| crate::poly::small_det(&set.iter().map(|&i| vectors.iter().map(|v| v[i]).collect()).collect::<Vec<_>>()))
        .collect()
}

/// `χ_x(ω)_y(u_1, …, u_{k−1})` with the quadrature's `t` rule.
pub fn cone_contraction<R: Real>(
    omega: &AnalyticForm<R>,
    x: &[R],
    y: &[R],
    vectors: &[Vec<R>],
    quad: &BallQuadrature<R>,
) -> Result<R> {
    let k = omega.degree();
    if k == 0 {
        return Err(Error::InvalidDegree { degree: 0, allowed: "1..=n (use degree0_average for functions)".into() });
    }
    if vectors.len() + 1 != k {
        return Err(Error::DimensionMismatch { expected: k - 1, got: vectors.len() });
    }
    let n = omega.dim();
    let mut all = vec![y.iter().zip(x).map(|(&a, &b)| a - b).collect::<Vec<R>>()];
    all.extend(vectors.iter().cloned());
    let minors = minor_values(n, &all);
    let mut z = vec![R::zero(); n];
    let mut comps = vec![R::zero(); omega.n_components()];
    let mut terms = Vec::with_capacity(quad.t_nodes.len());
    for (&t, &w) in quad.t_nodes.iter().zip(&quad.t_weights) {
        for i in 0..n {
            z[i] = x[i] + t * (y[i] - x[i]);
        }
        (omega.eval)(&z, &mut comps);
        let v: R = comps.iter().zip(&minors).map(|(&a, &b)| a * b).sum();
        terms.push(w * t.powi(k as i32 - 1) * v);
    }
    Ok(crate::scalar::pairwise_sum(&terms))
}

/// Components of `h(ω)` at `y` (a `(k−1)`-form), `k ≥ 1`.
pub fn h_components<R: Real>(omega: &AnalyticForm<R>, quad: &BallQuadrature<R>, y: &[R]) -> Vec<R> {
    let n = omega.dim();
    let k = omega.degree();
    debug_assert!(k >= 1);
    let table = InteriorTable::new(n, k);
    let mut out = vec![R::zero(); table.terms.len()];
    let mut z = vec![R::zero(); n];
    let mut v = vec![R::zero(); n];
    let mut comps = vec![R::zero(); omega.n_components()];
    let mut acc = vec![R::zero(); n + 1];
    for (x, &wx) in quad.half.nodes().iter().zip(&quad.half_avg) {
        for i in 0..n {
            v[i] = y[i] - x[i];
        }
        // ∫ t^{k−1} ω_z dt, then contract with y − x
        let mut integrated = vec![R::zero(); comps.len()];
        for (&t, &w) in quad.t_nodes.iter().zip(&quad.t_weights) {
            for i in 0..n {
                z[i] = x[i] + t * v[i];
            }
            (omega.eval)(&z, &mut comps);
            let f = w * t.powi(k as i32 - 1);
            for (a, &c) in integrated.iter_mut().zip(&comps) {
                *a = *a + f * c;
            }
        }
        for (oj, terms) in out.iter_mut().zip(&table.terms) {
            acc.fill(R::zero());
            let mut s = R::zero();
            for &(i, idx, plus) in terms {
                let term = v[i] * integrated[idx];
                s = if plus { s + term } else { s - term };
            }
            *oj = *oj + wx * s;
        }
    }
    out
}

/// `h(ω)_y(u_1, …, u_{k−1})`.
pub fn averaged_homotopy<R: Real>(
    omega: &AnalyticForm<R>,
    quad: &BallQuadrature<R>,
    y: &[R],
    vectors: &[Vec<R>],
) -> Result<R> {
    let k = omega.degree();
    if k == 0 {
        return Err(Error::InvalidDegree { degree: 0, allowed: "1..=n (use degree0_average for functions)".into() });
    }
    if vectors.len() + 1 != k {
        return Err(Error::DimensionMismatch { expected: k - 1, got: vectors.len() });
    }
    let comps = h_components(omega, quad, y);
    let minors = minor_values(omega.dim(), vectors);
    Ok(comps.iter().zip(&minors).map(|(&a, &b)| a * b).sum())
}

/// Mean of a function over `½B`.
pub fn degree0_average<R: Real>(f: &AnalyticForm<R>, quad: &BallQuadrature<R>) -> Result<R> {
    if f.degree() != 0 {
        return Err(Error::InvalidDegree { degree: f.degree(), allowed: "0".into() });
    }
    let terms: Vec<R> = quad.half.nodes().iter().zip(&quad.half_avg).map(|(x, &w)| w * f.components(x)[0]).collect();
    Ok(crate::scalar::pairwise_sum(&terms))
}

/// Central-difference step used for `dh`.
pub const FD_STEP: f64 = 1e-4;

/// Components of `d(h(ω))` at `y` by central differences.
pub fn dh_components<R: Real>(omega: &AnalyticForm<R>, quad: &BallQuadrature<R>, y: &[R], step: R) -> Vec<R> {
    let n = omega.dim();
    let table = DTable::new(n, omega.degree() - 1);
    table.apply(n, |j| {
        let (plus, minus) = shifted(y, j, step);
        let a = h_components(omega, quad, &plus);
        let b = h_components(omega, quad, &minus);
        a.iter().zip(&b).map(|(&p, &m)| (p - m) / (step + step)).collect()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    /// `max |dh(ω) + h(dω) − ω| / max |ω|` over evaluated points.
    pub max_residual: f64,
    pub max_abs_residual: f64,
    pub evaluated: usize,
    /// Points within `1e-3` of the boundary sphere.
    pub skipped: usize,
}

/// Checks `dh(ω) + h(dω) = ω` (or `h(f) + h(df) = f`) at the given points.
pub fn verify_homotopy_identity<R: Real>(
    omega: &AnalyticForm<R>,
    quad: &BallQuadrature<R>,
    points: &[Vec<R>],
) -> Result<IdentityResidual> {
    if omega.dim() != quad.dim() {
        return Err(Error::DimensionMismatch { expected: quad.dim(), got: omega.dim() });
    }
    let step = R::lit(FD_STEP);
    let limit = 1.0 - 1e-3;
    let inside: Vec<&Vec<R>> =
        points.iter().filter(|y| y.iter().map(|v| v.as_f64().powi(2)).sum::<f64>().sqrt() <= limit).collect();
    let skipped = points.len() - inside.len();
    let k = omega.degree();
    let n = omega.dim();
    let h_of_scalar = if k == 0 { Some(degree0_average(omega, quad)?) } else { None };
    let d_omega = if k < n { Some(omega.d()?) } else { None };
    let per_point: Vec<(f64, f64)> = inside
        .par_iter()
        .map(|y| {
            let target = omega.components(y);
            let mut lhs = match (k, h_of_scalar) {
                (0, Some(c)) => vec![c],
                _ => dh_components(omega, quad, y, step),
            };
            if let Some(d) = &d_omega {
                for (a, b) in lhs.iter_mut().zip(h_components(d, quad, y)) {
                    *a = *a + b;
                }
            }
            let res = lhs.iter().zip(&target).map(|(a, b)| (*a - *b).abs().as_f64()).fold(0.0, f64::max);
            let scale = target.iter().map(|v| v.abs().as_f64()).fold(0.0, f64::max);
            (res, scale)
        })
        .collect();
    let max_abs = per_point.iter().map(|p| p.0).fold(0.0, f64::max);
    let scale = per_point.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(IdentityResidual {
        max_residual: if scale > 0.0 { max_abs / scale } else { max_abs },
        max_abs_residual: max_abs,
        evaluated: inside.len(),
        skipped,
    })
}

/// Checks the single-cone identity `χ_x(dω) + dχ_x(ω) = ω` at the given points.
pub fn verify_cone_identity<R: Real>(
    omega: &AnalyticForm<R>,
    x: &[R],
    quad: &BallQuadrature<R>,
    points: &[Vec<R>],
) -> Result<f64> {
    let n = omega.dim();
    let k = omega.degree();
    if k == 0 {
        return Err(Error::InvalidDegree { degree: 0, allowed: "1..=n".into() });
    }
    let single = BallQuadrature { half: point_rule(x)?, half_avg: vec![R::one()], ..quad.clone() };
    let d_omega = if k < n { Some(omega.d()?) } else { None };
    let step = R::lit(FD_STEP);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for y in points {
        let mut lhs = dh_components(omega, &single, y, step);
        if let Some(d) = &d_omega {
            for (a, b) in lhs.iter_mut().zip(h_components(d, &single, y)) {
                *a = *a + b;
            }
        }
        let target = omega.components(y);
        for (a, b) in lhs.iter().zip(&target) {
            worst = worst.max((*a - *b).abs().as_f64());
            scale = scale.max(b.abs().as_f64());
        }
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

fn point_rule<R: Real>(x: &[R]) -> Result<BallRule<R>> {
    Ok(BallRule::single_node(x.to_vec()))
}

/// Uniform points in `B(0, radius)` from a seeded generator.
pub fn sample_points<R: Real>(n: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<R>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if p.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            out.push(p.iter().map(|v| R::lit(v * radius)).collect());
        }
    }
    out
}

/// Every monomial form `y^α dy_I` with `|α| ≤ max_degree` and `1 ≤ |I| ≤ n`.
pub fn monomial_corpus<R: Real>(n: usize, max_degree: usize) -> Result<Vec<AnalyticForm<R>>> {
    let mut out = Vec::new();
    for k in 1..=n {
        for index in subsets(n, k) {
            for alpha in exponents(n, max_degree) {
                out.push(AnalyticForm::monomial(n, alpha, &index)?);
            }
        }
    }
    Ok(out)
}

fn exponents(n: usize, max_degree: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    let m = max_degree as u8;
    for a in 0..=m {
        for b in 0..=if n >= 2 { m - a } else { 0 } {
            for c in 0..=if n >= 3 { m - a - b } else { 0 } {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Random polynomial `k`-forms with coefficients of total degree `≤ degree`.
pub fn random_polynomial_forms<R: Real>(
    n: usize,
    k: usize,
    count: usize,
    degree: usize,
    seed: u64,
) -> Result<Vec<AnalyticForm<R>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = exponents(n, degree);
    (0..count)
        .map(|i| {
            let comps = (0..binomial(n, k))
                .map(|_| {
                    let mut p = Poly::zero(n);
                    for a in &monos {
                        let e = [a[0], a[1], a[2], 0];
                        p = p.add(&Poly::monomial(n, e, R::lit(rng.gen_range(-1.0..1.0))));
                    }
                    p
                })
                .collect();
            AnalyticForm::from_poly(&PolyForm::from_components(n, k, comps), format!("random[{i}]"))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    /// `max ‖h(ω)‖_φ / ‖ω‖_φ` with the base quadrature.
    pub ratio: f64,
    /// The same with every node count doubled.
    pub ratio_refined: f64,
    pub relative_change: f64,
    /// Relative change below 10%.
    pub stable: bool,
    /// Some `ω` had zero norm but nonzero `h(ω)`.
    pub contradiction: bool,
}

fn ball_norm<R: Real>(phi: &YoungFunction<R>, quad: &BallQuadrature<R>, values: &[R]) -> R {
    luxemburg_from_samples(phi, values, quad.ball.weights(), R::lit(crate::orlicz::DEFAULT_TOL)).norm
}

fn euclid<R: Real>(v: &[R]) -> R {
    v.iter().map(|&a| a * a).sum::<R>().sqrt()
}

/// `(‖h(ω)‖_φ, ‖ω‖_φ)` over `B` with the quadrature's ball rule.
pub fn homotopy_norms<R: Real>(phi: &YoungFunction<R>, omega: &AnalyticForm<R>, quad: &BallQuadrature<R>) -> Result<(R, R)> {
    let nodes = quad.ball.nodes();
    let omega_vals: Vec<R> = nodes.iter().map(|y| euclid(&omega.components(y))).collect();
    let h_vals: Vec<R> = if omega.degree() == 0 {
        let c = degree0_average(omega, quad)?.abs();
        vec![c; nodes.len()]
    } else {
        nodes.par_iter().map(|y| euclid(&h_components(omega, quad, y))).collect()
    };
    Ok((ball_norm(phi, quad, &h_vals), ball_norm(phi, quad, &omega_vals)))
}

/// Empirical operator-norm ratio of `h`, at two quadrature levels.
pub fn verify_boundedness<R: Real>(
    phi: &YoungFunction<R>,
    omegas: &[AnalyticForm<R>],
    quad: &BallQuadrature<R>,
) -> Result<BoundednessReport> {
    if omegas.is_empty() {
        return Err(Error::InvalidParameter("boundedness needs at least one form".into()));
    }
    let refined = BallQuadrature::new(quad.dim(), quad.refine() + 1)?;
    let mut ratio = 0.0f64;
    let mut ratio_refined = 0.0f64;
    let mut contradiction = false;
    for omega in omegas {
        for (q, slot) in [(quad, &mut ratio), (&refined, &mut ratio_refined)] {
            let (h, w) = homotopy_norms(phi, omega, q)?;
            if w.as_f64() == 0.0 {
                contradiction |= h.as_f64() > 0.0;
            } else {
                *slot = slot.max(h.as_f64() / w.as_f64());
            }
        }
    }
    let relative_change = if ratio > 0.0 { (ratio_refined - ratio).abs() / ratio } else { ratio_refined };
    Ok(BoundednessReport { ratio, ratio_refined, relative_change, stable: relative_change < 0.1, contradiction })
}

/// Sign of a permutation of `0..k`, re-exported for callers building frames.
pub fn frame_sign(order: &[usize]) -> i8 {
    permutation_sign(order)
}
