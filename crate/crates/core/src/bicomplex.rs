//! The Čech-de Rham bicomplex over the open-star cover of a mesh.
//!
//! `C^{k,m}` holds, for every `m`-simplex `Δ`, a `k`-form on
//! `U_Δ = ⋃{T top : Δ ⊂ T}`. A form on `U_Δ` is stored as one polynomial
//! piece per top simplex of the star, in that simplex's local coordinates, so
//! restriction to a smaller star is exact and nodal values at any quadrature
//! rule are derived on demand.
//!
//! `d′ = (−1)^m d` acts piecewise, `d″` is the alternating Čech differential.
//! The row homotopy `H` averages cone contractions toward points of a small
//! ball inside `Δ` itself: every segment from such a point to `y ∈ T` stays in
//! `T`, so each piece is handled exactly. The column homotopy `P` uses the
//! barycentric hat functions as partition of unity.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{numerical_rank, LinearComplex};
use crate::error::{Error, Result};
use crate::forms::{barycentric, de_rham, MeshForm, PiecewiseForm, DEFAULT_QUAD_DEGREE};
use crate::mesh::{inradius, Mesh};
use crate::orlicz::{luxemburg_from_samples, LuxemburgNorm, DEFAULT_TOL};
use crate::poly::{Poly, PolyForm};
use crate::quadrature::{BallRule, SimplexRule};
use crate::scalar::{Field, Real};
use crate::simplicial::Cochain;
use crate::young::YoungFunction;

/// Residual above which a zigzag step is reported as a breakdown.
pub const ZIGZAG_BREAKDOWN: f64 = 1e-6;

fn count<R: Real>(mesh: &Mesh<R>, m: usize) -> usize {
    if m <= mesh.dim() {
        mesh.complex().count(m)
    } else {
        0
    }
}

/// Local coordinates in top simplex `t` of the point with barycentrics `beta` over `face`.
fn local_point<R: Real>(mesh: &Mesh<R>, t: usize, face: &[usize], beta: &[R]) -> Vec<R> {
    let n = mesh.dim();
    let local = mesh.local_indices(t, face).expect("face of its star");
    let mut s = vec![R::zero(); n];
    for (&a, &b) in local.iter().zip(beta) {
        if a > 0 {
            s[a - 1] = s[a - 1] + b;
        }
    }
    s
}

/// Star data: `U_Δ` volumes and the averaging nodes of every simplex.
#[derive(Clone, Debug)]
pub struct StarCover<R> {
    n: usize,
    refine: usize,
    rule: SimplexRule<R>,
    /// `averaging[m][i]`: barycentric coordinates over the simplex and normalized weights.
    averaging: Vec<Vec<Vec<(Vec<R>, R)>>>,
    radii: Vec<Vec<R>>,
    volumes: Vec<Vec<R>>,
}

impl<R: Real> StarCover<R> {
    /// Averaging balls have radius half the simplex inradius; their node
    /// counts and the degree of the norm rule grow with `refine`.
    pub fn new(mesh: &Mesh<R>, refine: usize) -> Result<Self> {
        if refine > 4 {
            return Err(Error::InvalidParameter("star cover refinement above 4".into()));
        }
        let n = mesh.dim();
        let f = 1usize << refine;
        let rule = SimplexRule::new(n, DEFAULT_QUAD_DEGREE + 2 * refine)?;
        let mut averaging = Vec::with_capacity(n + 1);
        let mut radii = Vec::with_capacity(n + 1);
        let mut volumes = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut nodes_m = Vec::with_capacity(mesh.complex().count(m));
            let mut radii_m = Vec::with_capacity(mesh.complex().count(m));
            let mut vol_m = Vec::with_capacity(mesh.complex().count(m));
            for i in 0..mesh.complex().count(m) {
                let star = mesh.star(m, i);
                vol_m.push(star.iter().map(|&t| mesh.chart(t).volume()).sum());
                if m == 0 {
                    nodes_m.push(vec![(vec![R::one()], R::one())]);
                    radii_m.push(R::zero());
                    continue;
                }
                let face = mesh.complex().simplex(m, i);
                let t = star[0];
                let local = mesh.local_indices(t, face).expect("face of its star");
                let pts: Vec<Vec<R>> = local.iter().map(|&a| mesh.chart(t).vertex(a)).collect();
                let r = inradius(&pts) / R::lit(2.0);
                let gram = DMatrix::from_fn(m, m, |a, b| {
                    pts[a + 1].iter().zip(&pts[0]).zip(pts[b + 1].iter().zip(&pts[0])).map(|((p, o), (q, u))| (*p - *o) * (*q - *u)).sum::<R>().as_f64()
                });
                let chol = Cholesky::new(gram).ok_or_else(|| Error::InvalidComplex(format!("degenerate {m}-simplex {i}")))?;
                let lt = chol.l().transpose();
                let ball = match m {
                    1 => BallRule::new(1, r, 2 * f, 1)?,
                    _ => BallRule::new(m, r, 2 * f, 4 * f)?,
                };
                let centre = 1.0 / (m as f64 + 1.0);
                let nodes = ball
                    .nodes()
                    .iter()
                    .zip(ball.averaging_weights())
                    .map(|(q, w)| {
                        let q = DVector::from_iterator(m, q.iter().map(|v| v.as_f64()));
                        let sigma = lt.clone().solve_upper_triangular(&q).expect("nonsingular frame");
                        let mut beta = vec![R::zero(); m + 1];
                        let mut rest = 1.0;
                        for a in 0..m {
                            let v = centre + sigma[a];
                            beta[a + 1] = R::lit(v);
                            rest -= v;
                        }
                        beta[0] = R::lit(rest);
                        (beta, w)
                    })
                    .collect();
                nodes_m.push(nodes);
                radii_m.push(r);
            }
            averaging.push(nodes_m);
            radii.push(radii_m);
            volumes.push(vol_m);
        }
        Ok(Self { n, refine, rule, averaging, radii, volumes })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn refine(&self) -> usize {
        self.refine
    }

    /// Rule used for modulars and nodal residuals on every top simplex.
    pub fn rule(&self) -> &SimplexRule<R> {
        &self.rule
    }

    /// Averaging nodes (barycentrics over the simplex) and weights summing to one.
    pub fn averaging_nodes(&self, m: usize, i: usize) -> &[(Vec<R>, R)] {
        &self.averaging[m][i]
    }

    pub fn radius(&self, m: usize, i: usize) -> R {
        self.radii[m][i]
    }

    /// `Vol(U_Δ)`.
    pub fn star_volume(&self, m: usize, i: usize) -> R {
        self.volumes[m][i]
    }

    /// `V = max(max Vol U_Δ, 1 / min Vol U_Δ)` over all simplices of degree `m`.
    pub fn volume_bound(&self, m: usize) -> f64 {
        let vols = &self.volumes[m];
        let hi = vols.iter().map(|v| v.as_f64()).fold(0.0, f64::max);
        let lo = vols.iter().map(|v| v.as_f64()).fold(f64::INFINITY, f64::min);
        hi.max(1.0 / lo)
    }
}

/// An element of `C^{k,m}`: `pieces[i][j]` is `ω_Δ` on the `j`-th top simplex of `U_Δ`, `Δ` the `i`-th `m`-simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct BicomplexElement<S> {
    n: usize,
    k: usize,
    m: usize,
    pieces: Vec<Vec<PolyForm<S>>>,
}

impl<S: Field> BicomplexElement<S> {
    pub fn zero<R: Real>(mesh: &Mesh<R>, k: usize, m: usize) -> Result<Self> {
        let n = mesh.dim();
        if k > n {
            return Err(Error::InvalidDegree { degree: k, allowed: format!("0..={n}") });
        }
        let pieces = (0..count(mesh, m)).map(|i| vec![PolyForm::zero(n, k); mesh.star(m, i).len()]).collect();
        Ok(Self { n, k, m, pieces })
    }

    /// Builds an element from a closure `(Δ index, top simplex) → piece`.
    pub fn from_fn<R: Real>(
        mesh: &Mesh<R>,
        k: usize,
        m: usize,
        mut f: impl FnMut(usize, usize) -> PolyForm<S>,
    ) -> Result<Self> {
        let mut out = Self::zero(mesh, k, m)?;
        for (i, row) in out.pieces.iter_mut().enumerate() {
            for (slot, &t) in row.iter_mut().zip(mesh.star(m, i)) {
                let p = f(i, t);
                if p.dim() != out.n || p.degree() != k {
                    return Err(Error::DimensionMismatch { expected: k, got: p.degree() });
                }
                *slot = p;
            }
        }
        Ok(out)
    }

    /// `restrict_E`: the family `ω|_{U_v}` of a global form.
    pub fn restrict<R: Real>(mesh: &Mesh<R>, global: &PiecewiseForm<S>) -> Result<Self> {
        if global.pieces().len() != mesh.n_top() {
            return Err(Error::DimensionMismatch { expected: mesh.n_top(), got: global.pieces().len() });
        }
        Self::from_fn(mesh, global.degree(), 0, |_, t| global.piece(t).clone())
    }

    /// Inverse of `constants_F`: `ω_Δ ≡ θ(Δ)`.
    pub fn from_constants<R: Real>(mesh: &Mesh<R>, theta: &Cochain<S>) -> Result<Self> {
        let n = mesh.dim();
        let values = theta.values();
        Self::from_fn(mesh, 0, theta.degree(), |i, _| PolyForm::function(Poly::constant(n, values[i].clone())))
    }

    /// Random element whose every `ω_Δ` is tangentially continuous on `U_Δ`:
    /// `W(a) + W(g) W(b)` with independent random Whitney cochains.
    pub fn random<R: Real>(mesh: &Mesh<R>, k: usize, m: usize, rng: &mut impl Rng) -> Result<Self> {
        let complex = mesh.complex();
        let mut draw = |deg: usize| -> Cochain<S> {
            let values = (0..complex.count(deg)).map(|_| S::from_f64(rng.gen_range(-1.0..1.0)).expect("finite")).collect();
            Cochain::from_values(complex, deg, values).expect("sized")
        };
        let mut per_delta = Vec::with_capacity(count(mesh, m));
        for _ in 0..count(mesh, m) {
            let a = MeshForm::whitney_interpolate(complex, &draw(k))?;
            let g = MeshForm::whitney_interpolate(complex, &draw(0))?;
            let b = MeshForm::whitney_interpolate(complex, &draw(k))?;
            per_delta.push((a, g, b));
        }
        Self::from_fn(mesh, k, m, |i, t| {
            let (a, g, b) = &per_delta[i];
            a.piece(mesh, t).add(&b.piece(mesh, t).mul_function(&g.piece(mesh, t).components()[0]))
        })
    }

    /// `(k, m)`.
    pub fn bidegree(&self) -> (usize, usize) {
        (self.k, self.m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Vec<PolyForm<S>>] {
        &self.pieces
    }

    /// `ω_Δ` on the `j`-th top simplex of the star of `Δ`.
    pub fn piece(&self, i: usize, j: usize) -> &PolyForm<S> {
        &self.pieces[i][j]
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&PolyForm<S>, &PolyForm<S>) -> PolyForm<S>) -> Self {
        assert_eq!(self.bidegree(), other.bidegree(), "bidegree mismatch");
        let pieces = self
            .pieces
            .iter()
            .zip(&other.pieces)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| f(p, q)).collect())
            .collect();
        Self { n: self.n, k: self.k, m: self.m, pieces }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |p, q| p.add(q))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |p, q| p.sub(q))
    }

    pub fn scale(&self, c: &S) -> Self {
        let pieces = self.pieces.iter().map(|row| row.iter().map(|p| p.scale(c)).collect()).collect();
        Self { n: self.n, k: self.k, m: self.m, pieces }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().flatten().all(PolyForm::is_zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.pieces.iter().flatten().map(PolyForm::max_abs_coeff).fold(0.0, f64::max)
    }

    /// `d′ω = (−1)^m dω`, piece by piece.
    pub fn d_prime(&self) -> Result<Self> {
        if self.k >= self.n {
            return Err(Error::InvalidDegree { degree: self.k, allowed: format!("0..{}", self.n) });
        }
        let odd = self.m % 2 == 1;
        let pieces = self
            .pieces
            .iter()
            .map(|row| row.iter().map(|p| if odd { p.d().neg() } else { p.d() }).collect())
            .collect();
        Ok(Self { n: self.n, k: self.k + 1, m: self.m, pieces })
    }

    /// `(d″ω)_Δ = Σ_i (−1)^i ω_{∂_iΔ}|_{U_Δ}`.
    pub fn d_double_prime<R: Real>(&self, mesh: &Mesh<R>) -> Result<Self> {
        self.check_mesh(mesh)?;
        let m1 = self.m + 1;
        let complex = mesh.complex();
        let mut out = Self::zero(mesh, self.k, m1)?;
        for (i, row) in out.pieces.iter_mut().enumerate() {
            let simplex = complex.simplex(m1, i);
            let star = mesh.star(m1, i);
            for f in 0..=m1 {
                let mut face = simplex.to_vec();
                face.remove(f);
                let fi = complex.index_of(&face).expect("faces are in the complex");
                let fstar = mesh.star(self.m, fi);
                for (slot, t) in row.iter_mut().zip(star) {
                    let j = fstar.binary_search(t).expect("star of a face contains the star");
                    let p = &self.pieces[fi][j];
                    *slot = if f % 2 == 0 { slot.add(p) } else { slot.sub(p) };
                }
            }
        }
        Ok(out)
    }

    /// `(Pω)_Δ = Σ_{v ∉ Δ} (−1)^{#{u ∈ Δ : u < v}} η_v ω_{vΔ}` for `m ≥ 1`, landing in `C^{k,m−1}`.
    pub fn column_homotopy<R: Real>(&self, mesh: &Mesh<R>, pou: &PartitionOfUnity) -> Result<Self> {
        self.check_mesh(mesh)?;
        pou.check(mesh)?;
        if self.m == 0 {
            return Err(Error::InvalidDegree { degree: 0, allowed: "1.. (use partition_glue in degree 0)".into() });
        }
        let m0 = self.m - 1;
        let complex = mesh.complex();
        let n = self.n;
        let mut out = Self::zero(mesh, self.k, m0)?;
        for (i, row) in out.pieces.iter_mut().enumerate() {
            let simplex = complex.simplex(m0, i);
            for (slot, &t) in row.iter_mut().zip(mesh.star(m0, i)) {
                let top = mesh.top(t);
                for (local_v, &v) in top.iter().enumerate() {
                    if simplex.binary_search(&v).is_ok() {
                        continue;
                    }
                    let below = simplex.iter().filter(|&&u| u < v).count();
                    let mut bigger = simplex.to_vec();
                    bigger.insert(below, v);
                    let bi = complex.index_of(&bigger).expect("faces of a top simplex are in the complex");
                    let j = mesh.star(self.m, bi).binary_search(&t).expect("t contains the bigger simplex");
                    let term = self.pieces[bi][j].mul_function(&barycentric(n, local_v));
                    *slot = if below % 2 == 0 { slot.add(&term) } else { slot.sub(&term) };
                }
            }
        }
        Ok(out)
    }

    /// `P⁰ω = Σ_v η_v ω_v`, a global form, for `m = 0`.
    pub fn partition_glue<R: Real>(&self, mesh: &Mesh<R>, pou: &PartitionOfUnity) -> Result<PiecewiseForm<S>> {
        self.check_mesh(mesh)?;
        pou.check(mesh)?;
        if self.m != 0 {
            return Err(Error::InvalidDegree { degree: self.m, allowed: "0".into() });
        }
        let pieces = (0..mesh.n_top())
            .map(|t| {
                let mut acc = PolyForm::zero(self.n, self.k);
                for (local_v, &v) in mesh.top(t).iter().enumerate() {
                    let j = mesh.star(0, v).binary_search(&t).expect("t contains its vertices");
                    acc = acc.add(&self.pieces[v][j].mul_function(&barycentric(self.n, local_v)));
                }
                acc
            })
            .collect();
        PiecewiseForm::new(self.n, self.k, pieces)
    }

    fn check_mesh<R: Real>(&self, mesh: &Mesh<R>) -> Result<()> {
        if mesh.dim() != self.n || self.pieces.len() != count(mesh, self.m) {
            return Err(Error::DimensionMismatch { expected: count(mesh, self.m), got: self.pieces.len() });
        }
        Ok(())
    }
}

impl<R: Real> BicomplexElement<R> {
    /// Pointwise norms `|ω_Δ|_x` at every rule node of every star piece, with
    /// weights `w · Vol(T)`.
    pub fn samples(&self, mesh: &Mesh<R>, rule: &SimplexRule<R>) -> (Vec<R>, Vec<R>) {
        let mut values = Vec::new();
        let mut weights = Vec::new();
        for (i, row) in self.pieces.iter().enumerate() {
            for (p, &t) in row.iter().zip(mesh.star(self.m, i)) {
                let chart = mesh.chart(t);
                for (s, &w) in rule.nodes().iter().zip(rule.weights()) {
                    values.push(chart.norm_squared(self.k, &p.eval(s)).sqrt());
                    weights.push(w * chart.volume());
                }
            }
        }
        (values, weights)
    }

    /// Largest pointwise norm over the rule nodes.
    pub fn nodal_max(&self, mesh: &Mesh<R>, rule: &SimplexRule<R>) -> f64 {
        self.samples(mesh, rule).0.iter().map(|v| v.as_f64()).fold(0.0, f64::max)
    }

    /// `(H ω)_Δ = (−1)^m · mean over x of the cone contraction toward x`, `k ≥ 1`.
    pub fn row_homotopy(&self, mesh: &Mesh<R>, cover: &StarCover<R>) -> Result<Self> {
        self.check_mesh(mesh)?;
        if self.k == 0 {
            return Err(Error::InvalidDegree { degree: 0, allowed: "1..=n (use row_average in degree 0)".into() });
        }
        let sign = if self.m % 2 == 1 { -R::one() } else { R::one() };
        let complex = mesh.complex();
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let face = complex.simplex(self.m, i);
                row.iter()
                    .zip(mesh.star(self.m, i))
                    .map(|(p, &t)| {
                        let mut acc = PolyForm::zero(self.n, self.k - 1);
                        for (beta, w) in cover.averaging_nodes(self.m, i) {
                            let x = local_point(mesh, t, face, beta);
                            acc = acc.add(&p.cone_contraction(&x).scale(w));
                        }
                        acc.scale(&sign)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n: self.n, k: self.k - 1, m: self.m, pieces })
    }

    /// `H⁰`: the mean of `ω_Δ` over the averaging nodes (and over the star's pieces).
    pub fn row_average(&self, mesh: &Mesh<R>, cover: &StarCover<R>) -> Result<Cochain<R>> {
        self.check_mesh(mesh)?;
        if self.k != 0 {
            return Err(Error::InvalidDegree { degree: self.k, allowed: "0".into() });
        }
        let complex = mesh.complex();
        let values = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let face = complex.simplex(self.m, i);
                let mut total = R::zero();
                for (p, &t) in row.iter().zip(mesh.star(self.m, i)) {
                    for (beta, w) in cover.averaging_nodes(self.m, i) {
                        total = total + *w * p.eval(&local_point(mesh, t, face, beta))[0];
                    }
                }
                total / R::lit(row.len() as f64)
            })
            .collect();
        Cochain::from_values(complex, self.m, values)
    }

    /// `ϱ_φ(ω/α) = Σ_Δ ∫_{U_Δ} φ(|ω_Δ| / α) dV` by quadrature.
    pub fn modular(&self, phi: &YoungFunction<R>, mesh: &Mesh<R>, rule: &SimplexRule<R>, alpha: R) -> Result<R> {
        if !(alpha > R::zero()) {
            return Err(Error::InvalidParameter("modular scale must be positive".into()));
        }
        let (values, weights) = self.samples(mesh, rule);
        let terms: Vec<R> = values.iter().zip(&weights).map(|(&v, &w)| w * phi.eval(v / alpha)).collect();
        Ok(crate::scalar::pairwise_sum(&terms))
    }

    /// `‖ω‖_{C_φ}`.
    pub fn norm(&self, phi: &YoungFunction<R>, mesh: &Mesh<R>, rule: &SimplexRule<R>) -> LuxemburgNorm<R> {
        let (values, weights) = self.samples(mesh, rule);
        luxemburg_from_samples(phi, &values, &weights, R::lit(DEFAULT_TOL))
    }

    /// `|ω|_{C_φ} = ‖ω‖ + ‖d′ω‖` (no second term in top degree).
    pub fn graph_norm(&self, phi: &YoungFunction<R>, mesh: &Mesh<R>, rule: &SimplexRule<R>) -> Result<R> {
        let base = self.norm(phi, mesh, rule).norm;
        if self.k == self.n {
            return Ok(base);
        }
        Ok(base + self.d_prime()?.norm(phi, mesh, rule).norm)
    }
}

/// The barycentric hat functions `η_v = λ_v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionOfUnity {
    n: usize,
    n_vertices: usize,
    /// `max_{v, T} |dλ_v|` on the mesh.
    gradient_bound: f64,
}

impl PartitionOfUnity {
    pub fn new<R: Real>(mesh: &Mesh<R>) -> Self {
        let n = mesh.dim();
        let mut bound = 0.0f64;
        for t in 0..mesh.n_top() {
            for j in 0..=n {
                let d = PolyForm::function(barycentric::<R>(n, j)).d();
                let comps = d.eval(&vec![R::zero(); n]);
                bound = bound.max(mesh.chart(t).norm_squared(1, &comps).sqrt().as_f64());
            }
        }
        Self { n, n_vertices: mesh.complex().n_vertices(), gradient_bound: bound }
    }

    /// The measured `max |dη_v|`.
    pub fn gradient_bound(&self) -> f64 {
        self.gradient_bound
    }

    /// `η_v` on top simplex `t` in local coordinates (zero off the star of `v`).
    pub fn eta<R: Real, S: Field>(&self, mesh: &Mesh<R>, v: usize, t: usize) -> Poly<S> {
        match mesh.top(t).binary_search(&v) {
            Ok(j) => barycentric(self.n, j),
            Err(_) => Poly::zero(self.n),
        }
    }

    /// `max |Σ_v η_v − 1|` and the range of `η_v` over the rule nodes.
    pub fn sum_and_range<R: Real>(&self, mesh: &Mesh<R>, rule: &SimplexRule<R>) -> (f64, f64, f64) {
        let mut worst = 0.0f64;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for t in 0..mesh.n_top() {
            for s in rule.nodes() {
                let mut total = 0.0;
                for v in 0..self.n_vertices {
                    let e = self.eta::<R, R>(mesh, v, t).eval(s).as_f64();
                    if mesh.top(t).binary_search(&v).is_ok() {
                        lo = lo.min(e);
                        hi = hi.max(e);
                    }
                    total += e;
                }
                worst = worst.max((total - 1.0).abs());
            }
        }
        (worst, lo, hi)
    }

    fn check<R: Real>(&self, mesh: &Mesh<R>) -> Result<()> {
        if mesh.dim() != self.n || mesh.complex().n_vertices() != self.n_vertices {
            return Err(Error::DimensionMismatch { expected: self.n_vertices, got: mesh.complex().n_vertices() });
        }
        Ok(())
    }
}

/// `𝓔`: glues a `d″`-closed `(k, 0)` element into a global form.
pub fn glue_e<R: Real>(
    omega: &BicomplexElement<R>,
    mesh: &Mesh<R>,
    cover: &StarCover<R>,
    pou: &PartitionOfUnity,
) -> Result<PiecewiseForm<R>> {
    if omega.m != 0 {
        return Err(Error::InvalidDegree { degree: omega.m, allowed: "0".into() });
    }
    let res = omega.d_double_prime(mesh)?.nodal_max(mesh, cover.rule());
    if res > 1e-9 {
        return Err(Error::NotACocycle(res));
    }
    omega.partition_glue(mesh, pou)
}

/// `𝓕`: the cochain of essential values of a `d′`-closed `(0, m)` element.
pub fn constants_f<R: Real>(omega: &BicomplexElement<R>, mesh: &Mesh<R>, cover: &StarCover<R>) -> Result<Cochain<R>> {
    if omega.k != 0 {
        return Err(Error::InvalidDegree { degree: omega.k, allowed: "0".into() });
    }
    let complex = mesh.complex();
    let mut values = Vec::with_capacity(omega.pieces.len());
    let mut worst = 0.0f64;
    for (i, row) in omega.pieces.iter().enumerate() {
        let face = complex.simplex(omega.m, i);
        let beta = vec![R::one() / R::lit(omega.m as f64 + 1.0); omega.m + 1];
        let reference = row[0].eval(&local_point(mesh, mesh.star(omega.m, i)[0], face, &beta))[0];
        for (p, _) in row.iter().zip(mesh.star(omega.m, i)) {
            for s in cover.rule().nodes() {
                worst = worst.max((p.eval(s)[0] - reference).abs().as_f64());
            }
        }
        values.push(reference);
    }
    if worst > 1e-9 {
        return Err(Error::NotInKernel(worst));
    }
    Cochain::from_values(complex, omega.m, values)
}

/// Zigzag output for one closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct Zigzag<R> {
    pub cochain: Cochain<R>,
    /// `max |d′ω^j|` after each step `j = 0..=k`.
    pub closed_residuals: Vec<f64>,
    /// `max |δθ|`.
    pub cocycle_residual: f64,
}

/// Sign relating the zigzag to the de Rham map on cohomology: `[zigzag ω] = sign · [∫ω]`.
pub fn zigzag_sign(k: usize) -> i8 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// De Rham to simplicial: `ω ↦ 𝓕((d″H)^k restrict_E(ω))`.
pub fn zigzag<R: Real>(omega: &PiecewiseForm<R>, mesh: &Mesh<R>, cover: &StarCover<R>) -> Result<Zigzag<R>> {
    let k = omega.degree();
    let rule = cover.rule();
    let mut current = BicomplexElement::restrict(mesh, omega)?;
    let mut closed_residuals = Vec::with_capacity(k + 1);
    let closed = |e: &BicomplexElement<R>| -> Result<f64> {
        if e.k == e.n {
            Ok(0.0)
        } else {
            Ok(e.d_prime()?.nodal_max(mesh, rule))
        }
    };
    let r0 = closed(&current)?;
    if r0 > 1e-9 {
        return Err(Error::NotACocycle(r0));
    }
    closed_residuals.push(r0);
    for step in 0..k {
        let alpha = current.row_homotopy(mesh, cover)?;
        current = alpha.d_double_prime(mesh)?;
        let r = closed(&current)?;
        closed_residuals.push(r);
        if !(r <= ZIGZAG_BREAKDOWN) {
            return Err(Error::NumericalBreakdown { step: step + 1, residual: r });
        }
    }
    let cochain = constants_f(&current, mesh, cover)?;
    let cocycle_residual = if k < mesh.dim() { cochain.coboundary(mesh.complex()).max_abs() } else { 0.0 };
    Ok(Zigzag { cochain, closed_residuals, cocycle_residual })
}

/// Pairing-matrix evidence that the zigzag is an isomorphism in degree `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiPairing {
    pub degree: usize,
    pub expected: usize,
    pub rank: usize,
    /// Rows: zigzag images of the harmonic inputs; columns: harmonic representatives.
    pub pairing_matrix: Vec<Vec<f64>>,
    /// Largest pairing of an exact input's image with a harmonic representative.
    pub exact_pairing_max: f64,
    pub closed_residual: f64,
    /// Largest gap between the harmonic pairings of the zigzag image and of `sign · ∫`.
    pub de_rham_gap: f64,
}

/// Zigzag images of Whitney interpolants of the harmonic basis plus `n_exact`
/// random exact forms, paired against the harmonic basis.
pub fn betti_pairing<R: Real>(mesh: &Mesh<R>, cover: &StarCover<R>, k: usize, n_exact: usize, seed: u64) -> Result<BettiPairing> {
    let complex = mesh.complex();
    let lc = LinearComplex::<R>::from_simplicial(complex);
    let harmonic = lc.harmonic_basis(k)?;
    let expected = harmonic.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut closed_residual = 0.0f64;
    let mut de_rham_gap = 0.0f64;
    let pair = |theta: &Cochain<R>| -> Vec<f64> {
        harmonic.iter().map(|h| h.iter().zip(theta.values()).map(|(a, b)| a * b.as_f64()).sum()).collect()
    };
    let mut rows = Vec::with_capacity(expected);
    for h in &harmonic {
        let c = Cochain::from_values(complex, k, h.iter().map(|&v| R::lit(v)).collect())?;
        let form = MeshForm::whitney_interpolate(complex, &c)?.to_piecewise(mesh);
        let z = zigzag(&form, mesh, cover)?;
        closed_residual = closed_residual.max(z.cocycle_residual).max(z.closed_residuals.iter().cloned().fold(0.0, f64::max));
        let integrals = de_rham(mesh, &form, DEFAULT_QUAD_DEGREE)?;
        let sign = zigzag_sign(k) as f64;
        let row = pair(&z.cochain);
        for (a, b) in row.iter().zip(pair(&integrals)) {
            de_rham_gap = de_rham_gap.max((a - sign * b).abs());
        }
        rows.push(row);
    }
    let mut exact_pairing_max = 0.0f64;
    if k >= 1 {
        for _ in 0..n_exact {
            let beta = Cochain::<R>::random(complex, k - 1, &mut rng);
            let form = MeshForm::whitney_interpolate(complex, &beta.coboundary(complex))?.to_piecewise(mesh);
            let z = zigzag(&form, mesh, cover)?;
            closed_residual = closed_residual.max(z.cocycle_residual);
            for v in pair(&z.cochain) {
                exact_pairing_max = exact_pairing_max.max(v.abs());
            }
        }
    }
    let rank = if expected == 0 {
        0
    } else {
        numerical_rank(&DMatrix::from_fn(rows.len(), expected, |i, j| rows[i][j]))
    };
    Ok(BettiPairing { degree: k, expected, rank, pairing_matrix: rows, exact_pairing_max, closed_residual, de_rham_gap })
}

/// Largest residuals of the bicomplex identities over random elements of every bidegree.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub dd_prime: f64,
    pub dd_double_prime: f64,
    pub anticommute: f64,
    pub h: f64,
    pub p: f64,
}

pub fn identity_residuals<R: Real>(mesh: &Mesh<R>, cover: &StarCover<R>, seed: u64) -> Result<IdentityResiduals> {
    let n = mesh.dim();
    let pou = PartitionOfUnity::new(mesh);
    let rule = cover.rule();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = IdentityResiduals::default();
    for m in 0..=n {
        for k in 0..=n {
            let w = BicomplexElement::<R>::random(mesh, k, m, &mut rng)?;
            let d2 = w.d_double_prime(mesh)?;
            out.dd_double_prime = out.dd_double_prime.max(d2.d_double_prime(mesh)?.nodal_max(mesh, rule));
            if k < n {
                let d1 = w.d_prime()?;
                if k + 1 < n {
                    out.dd_prime = out.dd_prime.max(d1.d_prime()?.nodal_max(mesh, rule));
                }
                let anti = d1.d_double_prime(mesh)?.add(&d2.d_prime()?);
                out.anticommute = out.anticommute.max(anti.nodal_max(mesh, rule));
            }
            // H d′ + d′ H = Id, or H¹ d′ + inc H⁰ = Id in degree 0
            let mut lhs = if k < n { w.d_prime()?.row_homotopy(mesh, cover)? } else { BicomplexElement::zero(mesh, k, m)? };
            if k == 0 {
                lhs = lhs.add(&BicomplexElement::from_constants(mesh, &w.row_average(mesh, cover)?)?);
            } else {
                lhs = lhs.add(&w.row_homotopy(mesh, cover)?.d_prime()?);
            }
            out.h = out.h.max(lhs.sub(&w).nodal_max(mesh, rule));
            // P d″ + d″ P = Id, or P¹ d″ + inc P⁰ = Id in degree 0
            let mut lhs = d2.column_homotopy(mesh, &pou)?;
            if m == 0 {
                lhs = lhs.add(&BicomplexElement::restrict(mesh, &w.partition_glue(mesh, &pou)?)?);
            } else {
                lhs = lhs.add(&w.column_homotopy(mesh, &pou)?.d_double_prime(mesh)?);
            }
            out.p = out.p.max(lhs.sub(&w).nodal_max(mesh, rule));
        }
    }
    Ok(out)
}

/// `(max, min)` over random elements of `‖d″ω‖_{C_φ} / ‖ω‖_{C_φ}` in bidegree `(k, m)`.
pub fn d_double_prime_ratio<R: Real>(
    phi: &YoungFunction<R>,
    mesh: &Mesh<R>,
    cover: &StarCover<R>,
    k: usize,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let w = BicomplexElement::<R>::random(mesh, k, m, &mut rng)?;
        let base = w.norm(phi, mesh, cover.rule()).norm.as_f64();
        if base > 0.0 {
            let top = w.d_double_prime(mesh)?.norm(phi, mesh, cover.rule()).norm.as_f64();
            worst = worst.max(top / base);
        }
    }
    Ok(worst)
}

/// `[min, max]` of `‖restrict_E ω‖_{C_φ} / ‖ω‖_{L^φ}` over random Whitney forms of degree `k`.
pub fn glue_norm_ratios<R: Real>(
    phi: &YoungFunction<R>,
    mesh: &Mesh<R>,
    cover: &StarCover<R>,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range = [f64::INFINITY, 0.0f64];
    for _ in 0..trials {
        let c = Cochain::<R>::random(mesh.complex(), k, &mut rng);
        let g = MeshForm::<R>::whitney_interpolate(mesh.complex(), &Cochain::random(mesh.complex(), 0, &mut rng))?;
        let form = MeshForm::whitney_interpolate(mesh.complex(), &c)?.to_piecewise(mesh);
        let pieces = (0..mesh.n_top()).map(|t| form.piece(t).mul_function(&g.piece(mesh, t).components()[0]).add(form.piece(t))).collect();
        let form = PiecewiseForm::new(mesh.dim(), k, pieces)?;
        let global = crate::forms::lphi_norm(phi, mesh, &form, cover.rule(), R::lit(DEFAULT_TOL))?.norm.as_f64();
        let local = BicomplexElement::restrict(mesh, &form)?.norm(phi, mesh, cover.rule()).norm.as_f64();
        if global > 0.0 {
            range[0] = range[0].min(local / global);
            range[1] = range[1].max(local / global);
        }
    }
    Ok(range)
}

/// `[min, max]` of `‖𝓕ω‖_{ℓ^φ} / ‖ω‖_{C_φ}` over random constant elements of degree `m`.
pub fn constants_norm_ratios<R: Real>(
    phi: &YoungFunction<R>,
    mesh: &Mesh<R>,
    cover: &StarCover<R>,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range = [f64::INFINITY, 0.0f64];
    for _ in 0..trials {
        let theta = Cochain::<R>::random(mesh.complex(), m, &mut rng);
        let elem = BicomplexElement::from_constants(mesh, &theta)?;
        let back = constants_f(&elem, mesh, cover)?;
        let lhs = back.norm(phi).as_f64();
        let rhs = elem.norm(phi, mesh, cover.rule()).norm.as_f64();
        if rhs > 0.0 {
            range[0] = range[0].min(lhs / rhs);
            range[1] = range[1].max(lhs / rhs);
        }
    }
    Ok(range)
}
