//! Sparse multivariate polynomials and polynomial differential forms on `R^n`
//! (`n ≤ 3`), exact over any [`Field`].
//!
//! A [`PolyForm`] stores one polynomial per increasing multi-index `I`, in the
//! lexicographic order produced by [`subsets`]. The exterior derivative, wedge
//! and interior products act on coefficients only, so over rationals `d∘d = 0`
//! holds exactly.

use std::collections::BTreeMap;

use crate::scalar::{permutation_sign, Field};

/// Largest number of polynomial variables (three coordinates plus a cone parameter).
pub const MAX_VARS: usize = 4;

type Exponent = [u8; MAX_VARS];

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Field> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term([0; MAX_VARS], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::monomial(nvars, e, S::one())
    }

    pub fn monomial(nvars: usize, exponents: [u8; MAX_VARS], c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(exponents, c);
        p
    }

    /// Affine function `c + Σ a_i x_i`.
    pub fn affine(c: S, a: &[S]) -> Self {
        let mut p = Self::constant(a.len(), c);
        for (i, ai) in a.iter().enumerate() {
            let mut e = [0; MAX_VARS];
            e[i] = 1;
            p.add_term(e, ai.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &S)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exponent, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0; MAX_VARS];
                for i in 0..MAX_VARS {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::constant(self.nvars, S::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.add_term(f, c.clone() * S::from_int(i64::from(e[i])));
        }
        out
    }

    pub fn eval(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in e.iter().enumerate().take(self.nvars) {
                for _ in 0..p {
                    term = term * x[i].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// `p(s_0(w), …, s_{n−1}(w))`; all substitutes share their variable count.
    pub fn compose(&self, subs: &[Poly<S>]) -> Self {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        let target = subs.first().map_or(self.nvars, |s| s.nvars);
        let max_pow: Vec<usize> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Poly<S>>> = subs
            .iter()
            .zip(&max_pow)
            .map(|(s, &m)| {
                let mut v = vec![Poly::constant(target, S::one())];
                for j in 0..m {
                    let next = v[j].mul(s);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for i in 0..self.nvars {
                if e[i] > 0 {
                    term = term.mul(&powers[i][e[i] as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// `∫_0^1 p dx_last`, dropping the last variable.
    pub fn integrate_last_unit(&self) -> Self {
        let last = self.nvars - 1;
        let mut out = Poly::zero(last);
        for (e, c) in &self.terms {
            let mut f = *e;
            let p = f[last];
            f[last] = 0;
            out.add_term(f, c.clone() / S::from_int(i64::from(p) + 1));
        }
        out
    }

    /// The same polynomial viewed in `nvars` variables (extra ones unused).
    pub fn with_nvars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        Self { nvars, terms: self.terms.clone() }
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn subset_index(n: usize, set: &[usize]) -> usize {
    subsets(n, set.len()).iter().position(|s| s == set).expect("valid subset")
}

/// Determinant by permutation expansion (only used for `k ≤ 3`).
pub fn small_det<S: Field>(m: &[Vec<S>]) -> S {
    let k = m.len();
    if k == 0 {
        return S::one();
    }
    let mut acc = S::zero();
    for perm in permutations(k) {
        let sign = permutation_sign(&perm);
        let mut term = S::one();
        for (r, &c) in perm.iter().enumerate() {
            term = term * m[r][c].clone();
        }
        acc = if sign > 0 { acc + term } else { acc - term };
    }
    acc
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// A differential `k`-form on `R^n` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm<S> {
    n: usize,
    k: usize,
    comps: Vec<Poly<S>>,
}

impl<S: Field> PolyForm<S> {
    pub fn zero(n: usize, k: usize) -> Self {
        let count = subsets(n, k).len();
        Self { n, k, comps: vec![Poly::zero(n); count] }
    }

    /// Components in [`subsets`] order; each must have `n` variables.
    pub fn from_components(n: usize, k: usize, comps: Vec<Poly<S>>) -> Self {
        assert_eq!(comps.len(), subsets(n, k).len(), "component count");
        assert!(comps.iter().all(|c| c.nvars == n), "component variable count");
        Self { n, k, comps }
    }

    /// A 0-form.
    pub fn function(p: Poly<S>) -> Self {
        let n = p.nvars;
        Self { n, k: 0, comps: vec![p] }
    }

    /// `p dx^I` for an increasing multi-index `I`.
    pub fn monomial_form(p: Poly<S>, index: &[usize]) -> Self {
        let n = p.nvars;
        let mut out = Self::zero(n, index.len());
        out.comps[subset_index(n, index)] = p;
        out
    }

    /// The constant 1-form `Σ a_i dx_i`.
    pub fn constant_one_form(a: &[S]) -> Self {
        let n = a.len();
        Self { n, k: 1, comps: a.iter().map(|c| Poly::constant(n, c.clone())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn components(&self) -> &[Poly<S>] {
        &self.comps
    }

    pub fn poly_degree(&self) -> usize {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps.iter().map(Poly::max_abs_coeff).fold(0.0, f64::max)
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!((self.n, self.k), (other.n, other.k), "form shapes differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        Self { n: self.n, k: self.k, comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_shape(other);
        Self { n: self.n, k: self.k, comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, k: self.k, comps: self.comps.iter().map(Poly::neg).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { n: self.n, k: self.k, comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    /// Product with a 0-form coefficient.
    pub fn mul_function(&self, f: &Poly<S>) -> Self {
        Self { n: self.n, k: self.k, comps: self.comps.iter().map(|p| p.mul(f)).collect() }
    }

    /// Exterior derivative; the zero `(n+1)`-form shape is never produced,
    /// callers check `k < n`.
    pub fn d(&self) -> Self {
        assert!(self.k < self.n, "no forms of degree above the dimension");
        let mut out = Self::zero(self.n, self.k + 1);
        let targets = subsets(self.n, self.k + 1);
        for (idx, set) in subsets(self.n, self.k).iter().enumerate() {
            if self.comps[idx].is_zero() {
                continue;
            }
            for j in (0..self.n).filter(|j| !set.contains(j)) {
                let before = set.iter().filter(|&&i| i < j).count();
                let mut merged = set.clone();
                merged.insert(before, j);
                let t = targets.iter().position(|s| *s == merged).expect("subset");
                let dp = self.comps[idx].derivative(j);
                out.comps[t] = if before % 2 == 0 { out.comps[t].add(&dp) } else { out.comps[t].sub(&dp) };
            }
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let k = self.k + other.k;
        let mut out = Self::zero(self.n, k);
        if k > self.n {
            return out;
        }
        let targets = subsets(self.n, k);
        for (ia, a) in subsets(self.n, self.k).iter().enumerate() {
            if self.comps[ia].is_zero() {
                continue;
            }
            for (ib, b) in subsets(self.n, other.k).iter().enumerate() {
                if other.comps[ib].is_zero() || a.iter().any(|i| b.contains(i)) {
                    continue;
                }
                let concat: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                let sign = permutation_sign(&concat);
                let mut merged = concat.clone();
                merged.sort_unstable();
                let t = targets.iter().position(|s| *s == merged).expect("subset");
                let prod = self.comps[ia].mul(&other.comps[ib]);
                out.comps[t] = if sign > 0 { out.comps[t].add(&prod) } else { out.comps[t].sub(&prod) };
            }
        }
        out
    }

    /// Interior product `ι_V ω` with a polynomial vector field of the same
    /// variable count as the components.
    pub fn interior(&self, field: &[Poly<S>]) -> Self {
        assert!(self.k >= 1, "interior product of a 0-form");
        assert_eq!(field.len(), self.n);
        let nv = field[0].nvars;
        let targets = subsets(self.n, self.k - 1);
        let mut comps = vec![Poly::zero(nv); targets.len()];
        for (idx, set) in subsets(self.n, self.k).iter().enumerate() {
            if self.comps[idx].is_zero() {
                continue;
            }
            for (j, &i) in set.iter().enumerate() {
                let mut rest = set.clone();
                rest.remove(j);
                let t = targets.iter().position(|s| *s == rest).expect("subset");
                let term = self.comps[idx].mul(&field[i]);
                comps[t] = if j % 2 == 0 { comps[t].add(&term) } else { comps[t].sub(&term) };
            }
        }
        Self { n: self.n, k: self.k - 1, comps }
    }

    pub fn eval(&self, x: &[S]) -> Vec<S> {
        self.comps.iter().map(|p| p.eval(x)).collect()
    }

    /// Pullback along `r ↦ origin + Σ_j r_j columns[j]`, `r ∈ R^m`.
    pub fn pullback_affine(&self, origin: &[S], columns: &[Vec<S>]) -> PolyForm<S> {
        let m = columns.len();
        assert_eq!(origin.len(), self.n);
        let subs: Vec<Poly<S>> = (0..self.n)
            .map(|i| {
                let coeffs: Vec<S> = columns.iter().map(|c| c[i].clone()).collect();
                Poly::affine(origin[i].clone(), &coeffs)
            })
            .collect();
        let target_sets = subsets(m, self.k);
        let mut out = PolyForm::zero(m, self.k);
        for (idx, set) in subsets(self.n, self.k).iter().enumerate() {
            if self.comps[idx].is_zero() {
                continue;
            }
            let composed = if m == 0 {
                Poly::constant(0, self.comps[idx].eval(origin))
            } else {
                self.comps[idx].compose(&subs)
            };
            for (jdx, jset) in target_sets.iter().enumerate() {
                let minor: Vec<Vec<S>> =
                    set.iter().map(|&i| jset.iter().map(|&j| columns[j][i].clone()).collect()).collect();
                let det = small_det(&minor);
                if !det.is_zero() {
                    out.comps[jdx] = out.comps[jdx].add(&composed.scale(&det));
                }
            }
        }
        out
    }

    /// The cone contraction toward `x`:
    /// `χ_x(ω)_y = ∫_0^1 t^{k−1} ι_{y−x} ω_{x + t(y−x)} dt`, computed exactly.
    pub fn cone_contraction(&self, x: &[S]) -> PolyForm<S> {
        assert!(self.k >= 1, "cone contraction needs degree >= 1");
        let n = self.n;
        let nv = n + 1;
        let t = Poly::var(nv, n);
        let subs: Vec<Poly<S>> = (0..n)
            .map(|i| {
                // x_i + t (y_i − x_i)
                let yi = Poly::var(nv, i);
                Poly::constant(nv, x[i].clone()).add(&t.mul(&yi.sub(&Poly::constant(nv, x[i].clone()))))
            })
            .collect();
        let field: Vec<Poly<S>> =
            (0..n).map(|i| Poly::var(nv, i).sub(&Poly::constant(nv, x[i].clone()))).collect();
        let lifted = PolyForm {
            n,
            k: self.k,
            comps: self.comps.iter().map(|p| if p.is_zero() { Poly::zero(nv) } else { p.compose(&subs) }).collect(),
        };
        let contracted = lifted.interior(&field);
        let weight = t.pow(self.k - 1);
        PolyForm {
            n,
            k: self.k - 1,
            comps: contracted.comps.iter().map(|p| p.mul(&weight).integrate_last_unit()).collect(),
        }
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T + Copy) -> PolyForm<T> {
        PolyForm { n: self.n, k: self.k, comps: self.comps.iter().map(|p| p.map_coeffs(f)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(a: i64) -> BigRational {
        BigRational::from_int(a)
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn derivative_and_eval() {
        // p = 3 x² y + 2
        let p = Poly::monomial(2, [2, 1, 0, 0], 3.0).add(&Poly::constant(2, 2.0));
        assert_eq!(p.eval(&[2.0, 5.0]), 62.0);
        assert_eq!(p.derivative(0).eval(&[2.0, 5.0]), 60.0);
        assert_eq!(p.derivative(1).eval(&[2.0, 5.0]), 12.0);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn compose_and_integrate() {
        // p(x) = x², x = 1 + 2w  ⇒ 1 + 4w + 4w²; ∫_0^1 = 1 + 2 + 4/3
        let p = Poly::monomial(1, [2, 0, 0, 0], q(1));
        let sub = Poly::affine(q(1), &[q(2)]);
        let c = p.compose(&[sub]);
        let integral = c.with_nvars(1).integrate_last_unit();
        assert_eq!(integral.eval(&[]), q(13) / q(3));
    }

    #[test]
    fn d_squared_vanishes_exactly() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let f = x.mul(&y).mul(&y).add(&z.pow(3)).map_coeffs(|c: &f64| BigRational::from_float(*c).unwrap());
        let w = PolyForm::function(f);
        assert!(w.d().d().is_zero());
        let one = PolyForm::from_components(3, 1, vec![x.mul(&z), y.pow(2), x.mul(&y).mul(&z)])
            .map_coeffs(|c: &f64| BigRational::from_float(*c).unwrap());
        assert!(one.d().d().is_zero());
    }

    #[test]
    fn wedge_of_coordinate_forms() {
        let dx = PolyForm::constant_one_form(&[1.0, 0.0]);
        let dy = PolyForm::constant_one_form(&[0.0, 1.0]);
        assert_eq!(dx.wedge(&dy).eval(&[0.0, 0.0]), vec![1.0]);
        assert_eq!(dy.wedge(&dx).eval(&[0.0, 0.0]), vec![-1.0]);
        assert!(dx.wedge(&dx).is_zero());
    }

    #[test]
    fn leibniz_rule() {
        let f = Poly::<f64>::var(2, 0).mul(&Poly::var(2, 1));
        let w = PolyForm::from_components(2, 1, vec![Poly::var(2, 1).pow(2), Poly::var(2, 0)]);
        let lhs = w.mul_function(&f).d();
        let rhs = PolyForm::function(f.clone()).d().wedge(&w).add(&w.d().mul_function(&f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cone_contraction_examples() {
        // χ_0(dx_1) = y_1
        let dx = PolyForm::constant_one_form(&[1.0, 0.0]);
        let c = dx.cone_contraction(&[0.0, 0.0]);
        assert_eq!(c.eval(&[0.3, -0.7]), vec![0.3]);
        // rotation form x dy − y dx contracts to zero at the origin
        let rot = PolyForm::from_components(2, 1, vec![Poly::var(2, 1).neg(), Poly::var(2, 0)]);
        assert!(rot.cone_contraction(&[0.0, 0.0]).is_zero());
    }

    #[test]
    fn cone_contraction_is_a_homotopy() {
        let x = [q(1) / q(3), q(-1) / q(5), q(1) / q(7)];
        let v = |i| Poly::<BigRational>::var(3, i);
        let one = PolyForm::from_components(3, 1, vec![v(0).mul(&v(1)), v(2).pow(2), v(0).pow(3)]);
        let two = PolyForm::from_components(3, 2, vec![v(1), v(0).mul(&v(2)), v(1).pow(2).mul(&v(0))]);
        for w in [one, two] {
            let lhs = w.d().cone_contraction(&x).add(&w.cone_contraction(&x).d());
            assert_eq!(lhs, w);
        }
        let top = PolyForm::from_components(3, 3, vec![v(0).mul(&v(1)).mul(&v(2))]);
        assert_eq!(top.cone_contraction(&x).d(), top);
        let f = PolyForm::function(v(0).pow(2).add(&v(1)));
        let g = f.d().cone_contraction(&x);
        let fx = f.eval(&x)[0].clone();
        assert_eq!(g, f.sub(&PolyForm::function(Poly::constant(3, fx))));
    }

    #[test]
    fn pullback_to_a_segment() {
        // ω = x dy on R², segment from (1,0) to (1,2): ∫ = ∫_0^1 1·2 dr = 2
        let w = PolyForm::from_components(2, 1, vec![Poly::zero(2), Poly::var(2, 0)]);
        let pb = w.pullback_affine(&[1.0, 0.0], &[vec![0.0, 2.0]]);
        assert_eq!(pb.eval(&[0.5]), vec![2.0]);
        let pt = w.pullback_affine(&[1.0, 0.0], &[]);
        assert_eq!(pt.degree(), 1);
        assert!(pt.components().is_empty());
    }

    #[test]
    fn small_determinants() {
        assert_eq!(small_det(&[vec![2.0, 1.0], vec![1.0, 3.0]]), 5.0);
        assert_eq!(small_det::<f64>(&[]), 1.0);
        let m = vec![vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 4.0], vec![5.0, 6.0, 0.0]];
        assert_eq!(small_det(&m), 1.0);
    }
}
