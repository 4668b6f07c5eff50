//! Differential forms on a [`Mesh`]: Whitney forms of cochains, general
//! piecewise-polynomial forms, integration over simplices, pointwise comass
//! and `L^φ` norms.
//!
//! A form on the mesh is stored as one [`PolyForm`] per top simplex, written in
//! that simplex's local coordinates `s = (λ_1, …, λ_n)`.

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::orlicz::{luxemburg_from_samples, LuxemburgNorm};
use crate::poly::{small_det, subsets, Poly, PolyForm};
use crate::quadrature::SimplexRule;
use crate::scalar::{Field, Real};
use crate::simplicial::{Cochain, SimplicialComplex};
use crate::young::YoungFunction;

/// Default polynomial exactness of simplex quadrature.
pub const DEFAULT_QUAD_DEGREE: usize = 4;

/// The barycentric coordinate `λ_i` on the reference `n`-simplex.
pub fn barycentric<S: Field>(n: usize, i: usize) -> Poly<S> {
    if i == 0 {
        let ones = vec![-S::one(); n];
        Poly::affine(S::one(), &ones)
    } else {
        Poly::var(n, i - 1)
    }
}

/// The Whitney form of the local face `a_0 < … < a_k` of the reference `n`-simplex:
/// `k! Σ_i (−1)^i λ_{a_i} dλ_{a_0} ∧ … ∧ \widehat{dλ_{a_i}} ∧ … ∧ dλ_{a_k}`.
pub fn whitney_local<S: Field>(n: usize, face: &[usize]) -> PolyForm<S> {
    let k = face.len() - 1;
    let dl: Vec<PolyForm<S>> = face.iter().map(|&a| PolyForm::function(barycentric(n, a)).d()).collect();
    let mut out = PolyForm::zero(n, k);
    let fact = S::from_int((1..=k as i64).product());
    for i in 0..=k {
        let mut term = PolyForm::function(barycentric(n, face[i]));
        for (j, d) in dl.iter().enumerate() {
            if j != i {
                term = term.wedge(d);
            }
        }
        out = if i % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out.scale(&fact)
}

/// A form given by one polynomial piece per top simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseForm<S> {
    dim: usize,
    degree: usize,
    pieces: Vec<PolyForm<S>>,
}

impl<S: Field> PiecewiseForm<S> {
    pub fn new(dim: usize, degree: usize, pieces: Vec<PolyForm<S>>) -> Result<Self> {
        if degree > dim {
            return Err(Error::InvalidDegree { degree, allowed: format!("0..={dim}") });
        }
        if let Some(p) = pieces.iter().find(|p| p.dim() != dim || p.degree() != degree) {
            return Err(Error::DimensionMismatch { expected: degree, got: p.degree() });
        }
        Ok(Self { dim, degree, pieces })
    }

    pub fn zero<R: Real>(mesh: &Mesh<R>, degree: usize) -> Self {
        Self { dim: mesh.dim(), degree, pieces: vec![PolyForm::zero(mesh.dim(), degree); mesh.n_top()] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pieces(&self) -> &[PolyForm<S>] {
        &self.pieces
    }

    pub fn piece(&self, t: usize) -> &PolyForm<S> {
        &self.pieces[t]
    }

    pub fn d(&self) -> Result<Self> {
        if self.degree >= self.dim {
            return Err(Error::InvalidDegree { degree: self.degree, allowed: format!("0..{}", self.dim) });
        }
        Ok(Self { dim: self.dim, degree: self.degree + 1, pieces: self.pieces.iter().map(PolyForm::d).collect() })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { dim: self.dim, degree: self.degree, pieces: self.pieces.iter().zip(&other.pieces).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { dim: self.dim, degree: self.degree, pieces: self.pieces.iter().zip(&other.pieces).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { dim: self.dim, degree: self.degree, pieces: self.pieces.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(PolyForm::is_zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.pieces.iter().map(PolyForm::max_abs_coeff).fold(0.0, f64::max)
    }

    /// Components at local coordinates `s` of top simplex `t`.
    pub fn eval(&self, t: usize, s: &[S]) -> Vec<S> {
        self.pieces[t].eval(s)
    }
}

impl<R: Real> PiecewiseForm<R> {
    /// Pullback of a form with polynomial coefficients in ambient coordinates.
    /// On the torus only translation-invariant (constant) forms are meaningful.
    pub fn from_ambient(mesh: &Mesh<R>, form: &PolyForm<R>) -> Result<Self> {
        if form.dim() != mesh.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: mesh.ambient_dim(), got: form.dim() });
        }
        if form.degree() > mesh.dim() {
            return Err(Error::InvalidDegree { degree: form.degree(), allowed: format!("0..={}", mesh.dim()) });
        }
        let pieces = mesh.charts().iter().map(|c| form.pullback_affine(c.origin(), c.edges())).collect();
        Ok(Self { dim: mesh.dim(), degree: form.degree(), pieces })
    }

    /// `|ω|_x` at the point of top simplex `t` with barycentric coordinates `bary`.
    pub fn pointwise_norm(&self, mesh: &Mesh<R>, t: usize, bary: &[R]) -> R {
        let comps = self.pieces[t].eval(&bary[1..]);
        mesh.chart(t).norm_squared(self.degree, &comps).sqrt()
    }
}

/// A Whitney form: coefficients on the `k`-simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshForm<S> {
    cochain: Cochain<S>,
}

impl<S: Field> MeshForm<S> {
    /// `W(θ) = Σ_Δ θ(Δ) w_Δ`.
    pub fn whitney_interpolate(complex: &SimplicialComplex, theta: &Cochain<S>) -> Result<Self> {
        if theta.degree() > complex.dim() {
            return Err(Error::InvalidDegree { degree: theta.degree(), allowed: format!("0..={}", complex.dim()) });
        }
        if theta.values().len() != complex.count(theta.degree()) {
            return Err(Error::DimensionMismatch { expected: complex.count(theta.degree()), got: theta.values().len() });
        }
        Ok(Self { cochain: theta.clone() })
    }

    pub fn degree(&self) -> usize {
        self.cochain.degree()
    }

    pub fn cochain(&self) -> &Cochain<S> {
        &self.cochain
    }

    /// Polynomial degree of the coefficients on each top simplex.
    pub fn poly_degree(&self, dim: usize) -> usize {
        usize::from(self.degree() < dim)
    }

    /// `d W(θ) = W(δθ)`.
    pub fn d(&self, complex: &SimplicialComplex) -> Result<Self> {
        if self.degree() >= complex.dim() {
            return Err(Error::InvalidDegree { degree: self.degree(), allowed: format!("0..{}", complex.dim()) });
        }
        Ok(Self { cochain: self.cochain.coboundary(complex) })
    }

    /// The piece on top simplex `t`.
    pub fn piece<R: Real>(&self, mesh: &Mesh<R>, t: usize) -> PolyForm<S> {
        let n = mesh.dim();
        let k = self.degree();
        let top = mesh.top(t);
        let mut out = PolyForm::zero(n, k);
        for local in subsets(n + 1, k + 1) {
            let face: Vec<usize> = local.iter().map(|&i| top[i]).collect();
            let idx = mesh.complex().index_of(&face).expect("face of a top simplex");
            let c = &self.cochain.values()[idx];
            if !c.is_zero() {
                out = out.add(&whitney_local::<S>(n, &local).scale(c));
            }
        }
        out
    }

    pub fn to_piecewise<R: Real>(&self, mesh: &Mesh<R>) -> PiecewiseForm<S> {
        PiecewiseForm { dim: mesh.dim(), degree: self.degree(), pieces: (0..mesh.n_top()).map(|t| self.piece(mesh, t)).collect() }
    }
}

/// `∫` over the local face `local` (ascending) of a piece, with a rule on the face.
pub fn integrate_piece<R: Real>(piece: &PolyForm<R>, local: &[usize], rule: &SimplexRule<R>) -> R {
    let n = piece.dim();
    let k = local.len() - 1;
    debug_assert_eq!(piece.degree(), k);
    debug_assert_eq!(rule.dim(), k);
    let corner = |a: usize| -> Vec<R> {
        let mut v = vec![R::zero(); n];
        if a > 0 {
            v[a - 1] = R::one();
        }
        v
    };
    let origin = corner(local[0]);
    let cols: Vec<Vec<R>> =
        local[1..].iter().map(|&a| corner(a).iter().zip(&origin).map(|(&x, &y)| x - y).collect()).collect();
    let dets: Vec<R> = subsets(n, k)
        .iter()
        .map(|set| small_det(&set.iter().map(|&i| cols.iter().map(|c| c[i]).collect()).collect::<Vec<_>>()))
        .collect();
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let mut terms = Vec::with_capacity(rule.len());
    for (r, &w) in rule.nodes().iter().zip(rule.weights()) {
        let mut s = origin.clone();
        for (rj, c) in r.iter().zip(&cols) {
            for (si, &ci) in s.iter_mut().zip(c) {
                *si = *si + *rj * ci;
            }
        }
        let comps = piece.eval(&s);
        let v: R = comps.iter().zip(&dets).map(|(&a, &b)| a * b).sum();
        terms.push(w * v);
    }
    crate::scalar::pairwise_sum(&terms) / R::lit(fact)
}

/// `∫_Δ ω` for the `k`-simplex `index`, using a containing top simplex.
pub fn integrate_form<R: Real>(
    mesh: &Mesh<R>,
    omega: &PiecewiseForm<R>,
    index: usize,
    rule: &SimplexRule<R>,
) -> Result<R> {
    let k = omega.degree();
    if rule.dim() != k {
        return Err(Error::DimensionMismatch { expected: k, got: rule.dim() });
    }
    if index >= mesh.complex().count(k) {
        return Err(Error::IndexOutOfRange { index, size: mesh.complex().count(k) });
    }
    let t = mesh.star(k, index)[0];
    let local = mesh.local_indices(t, mesh.complex().simplex(k, index)).expect("face");
    Ok(integrate_piece(omega.piece(t), &local, rule))
}

/// The de Rham map `ω ↦ (Δ ↦ ∫_Δ ω)`.
pub fn de_rham<R: Real>(mesh: &Mesh<R>, omega: &PiecewiseForm<R>, quad_degree: usize) -> Result<Cochain<R>> {
    let k = omega.degree();
    let rule = SimplexRule::new(k, quad_degree)?;
    let values = (0..mesh.complex().count(k)).map(|i| integrate_form(mesh, omega, i, &rule)).collect::<Result<Vec<_>>>()?;
    Cochain::from_values(mesh.complex(), k, values)
}

/// `|∫_Δ dω − ∫_{∂Δ} ω|` on every top simplex containing the `k`-simplex `index`.
pub fn stokes_residual<R: Real>(mesh: &Mesh<R>, omega: &PiecewiseForm<R>, index: usize, quad_degree: usize) -> Result<R> {
    let k = omega.degree() + 1;
    let d_omega = omega.d()?;
    let rule_k = SimplexRule::new(k, quad_degree)?;
    let rule_f = SimplexRule::new(k - 1, quad_degree)?;
    let simplex = mesh.complex().simplex(k, index).to_vec();
    let mut worst = R::zero();
    for &t in mesh.star(k, index) {
        let local = mesh.local_indices(t, &simplex).expect("face");
        let lhs = integrate_piece(d_omega.piece(t), &local, &rule_k);
        let mut rhs = R::zero();
        for i in 0..=k {
            let mut face = local.clone();
            face.remove(i);
            let v = integrate_piece(omega.piece(t), &face, &rule_f);
            rhs = if i % 2 == 0 { rhs + v } else { rhs - v };
        }
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Pointwise norms and volume weights at every quadrature node of every top simplex.
pub fn norm_samples<R: Real>(mesh: &Mesh<R>, omega: &PiecewiseForm<R>, rule: &SimplexRule<R>) -> (Vec<R>, Vec<R>) {
    let mut values = Vec::with_capacity(mesh.n_top() * rule.len());
    let mut weights = Vec::with_capacity(values.capacity());
    for t in 0..mesh.n_top() {
        let chart = mesh.chart(t);
        for (s, &w) in rule.nodes().iter().zip(rule.weights()) {
            let comps = omega.piece(t).eval(s);
            values.push(chart.norm_squared(omega.degree(), &comps).sqrt());
            weights.push(w * chart.volume());
        }
    }
    (values, weights)
}

/// Luxemburg norm with modular `∫_M φ(|ω|_x / α) dV`, by quadrature.
pub fn lphi_norm<R: Real>(
    phi: &YoungFunction<R>,
    mesh: &Mesh<R>,
    omega: &PiecewiseForm<R>,
    rule: &SimplexRule<R>,
    tol: R,
) -> Result<LuxemburgNorm<R>> {
    if rule.dim() != mesh.dim() {
        return Err(Error::DimensionMismatch { expected: mesh.dim(), got: rule.dim() });
    }
    let (values, weights) = norm_samples(mesh, omega, rule);
    Ok(luxemburg_from_samples(phi, &values, &weights, tol))
}

/// Graph norm `‖ω‖_φ + ‖dω‖_φ` (the second term is absent in top degree).
pub fn graph_norm<R: Real>(
    phi: &YoungFunction<R>,
    mesh: &Mesh<R>,
    omega: &PiecewiseForm<R>,
    rule: &SimplexRule<R>,
    tol: R,
) -> Result<R> {
    let base = lphi_norm(phi, mesh, omega, rule, tol)?.norm;
    if omega.degree() == mesh.dim() {
        return Ok(base);
    }
    Ok(base + lphi_norm(phi, mesh, &omega.d()?, rule, tol)?.norm)
}
