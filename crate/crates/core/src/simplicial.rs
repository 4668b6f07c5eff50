//! Finite oriented simplicial complexes, alternating cochains and the
//! coboundary operator.
//!
//! Simplices are stored as ascending vertex tuples; the ascending order is the
//! canonical orientation. Faces carry the sign `(-1)^i` for the `i`-th omitted
//! vertex, so `δθ(σ) = Σ_i (-1)^i θ(∂_i σ)` and `δ∘δ = 0`.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orlicz::{luxemburg_from_samples, DEFAULT_TOL};
use crate::scalar::{permutation_sign, Field, Real};
use crate::young::YoungFunction;

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// The closure of the given simplices (any vertex order) on vertices
    /// `0..n_vertices`. Every vertex is included as a 0-simplex.
    pub fn from_simplices<I, S>(n_vertices: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut levels: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default()];
        for v in 0..n_vertices {
            levels[0].insert(vec![v]);
        }
        for s in simplices {
            let mut s = s.as_ref().to_vec();
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::InvalidComplex("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in {s:?}")));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
            }
            for face in all_faces(&s) {
                let k = face.len() - 1;
                while levels.len() <= k {
                    levels.push(Default::default());
                }
                levels[k].insert(face);
            }
        }
        Ok(Self::from_levels(n_vertices, levels.into_iter().map(|l| l.into_iter().collect()).collect()))
    }

    fn from_levels(n_vertices: usize, simplices: Vec<Vec<Vec<usize>>>) -> Self {
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Self { n_vertices, simplices, index }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Highest simplex dimension present.
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    /// Number of `k`-simplices (0 above the dimension).
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    /// Canonical `k`-simplices in lexicographic order.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[usize] {
        &self.simplices[k][i]
    }

    /// Index of a canonical (ascending) tuple.
    pub fn index_of(&self, sorted: &[usize]) -> Option<usize> {
        let k = sorted.len().checked_sub(1)?;
        self.index.get(k)?.get(sorted).copied()
    }

    /// Index and orientation sign of an arbitrarily ordered tuple.
    pub fn locate(&self, tuple: &[usize]) -> Option<(usize, i8)> {
        let sign = permutation_sign(tuple);
        if sign == 0 {
            return None;
        }
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        self.index_of(&sorted).map(|i| (i, sign))
    }

    /// The faces `(v_0, …, v̂_i, …, v_k)` of a simplex with signs `(-1)^i`.
    pub fn boundary_faces(&self, simplex: &[usize]) -> Result<Vec<(Vec<usize>, i8)>> {
        if simplex.len() < 2 {
            return Err(Error::InvalidDegree { degree: 0, allowed: ">= 1".into() });
        }
        if self.locate(simplex).is_none() {
            return Err(Error::NotFound(simplex.to_vec()));
        }
        Ok(boundary_of(simplex))
    }

    /// Indices of the `(k+1)`-simplices having the `k`-simplex `i` as a face.
    pub fn cofaces(&self, k: usize, i: usize) -> Vec<usize> {
        let s = &self.simplices[k][i];
        self.simplices(k + 1)
            .iter()
            .enumerate()
            .filter(|(_, t)| is_face(s, t))
            .map(|(j, _)| j)
            .collect()
    }

    /// Whether every simplex is a face of some top-dimensional simplex.
    pub fn is_pure(&self) -> bool {
        let n = self.dim();
        (0..n).all(|k| {
            self.simplices(k).iter().all(|s| self.simplices(n).iter().any(|t| is_face(s, t)))
        })
    }

    /// Sparse coboundary `δ_k: C^k → C^{k+1}` as `(row, col, sign)` triples.
    pub fn coboundary_entries(&self, k: usize) -> Vec<(usize, usize, i8)> {
        let mut entries = Vec::new();
        for (row, s) in self.simplices(k + 1).iter().enumerate() {
            for (face, sign) in boundary_of(s) {
                let col = self.index[k][&face];
                entries.push((row, col, sign));
            }
        }
        entries
    }

    /// Combinatorial bounded-geometry statistics.
    pub fn stats(&self) -> GeometryStats {
        let mut vertex_degree = vec![0usize; self.n_vertices];
        for e in self.simplices(1) {
            vertex_degree[e[0]] += 1;
            vertex_degree[e[1]] += 1;
        }
        let mut containing = vec![0usize; self.n_vertices];
        for level in &self.simplices {
            for s in level {
                for &v in s {
                    containing[v] += 1;
                }
            }
        }
        let coface_bounds = (0..self.dim())
            .map(|k| {
                let mut counts = vec![0usize; self.count(k)];
                for s in self.simplices(k + 1) {
                    for (face, _) in boundary_of(s) {
                        counts[self.index[k][&face]] += 1;
                    }
                }
                counts.into_iter().max().unwrap_or(0)
            })
            .collect::<Vec<_>>();
        GeometryStats {
            max_vertex_degree: vertex_degree.into_iter().max().unwrap_or(0),
            max_simplex_diameter: None,
            incidence_bound: coface_bounds.iter().copied().max().unwrap_or(0),
            max_simplices_at_vertex: containing.into_iter().max().unwrap_or(0),
            coface_bounds,
        }
    }

    /// Serializes to the complex JSON layout.
    pub fn to_file(&self) -> ComplexFile {
        let mut simplices = BTreeMap::new();
        for (k, level) in self.simplices.iter().enumerate() {
            simplices.insert(k.to_string(), level.iter().map(|s| s.iter().map(|&v| v as u64).collect()).collect());
        }
        ComplexFile { vertices: (0..self.n_vertices as u64).collect(), simplices }
    }

    /// Validates and loads a complex file. Vertex ids are relabelled to
    /// `0..n` preserving their order, so canonical orientations are kept.
    /// Complexes that are not closed under faces are rejected.
    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        let mut ids = file.vertices.clone();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidComplex("duplicate vertex id".into()));
        }
        let relabel: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let max_k = file
            .simplices
            .keys()
            .map(|k| k.parse::<usize>().map_err(|_| Error::InvalidComplex(format!("bad dimension key {k:?}"))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let mut levels: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_k + 1];
        for (key, list) in &file.simplices {
            let k: usize = key.parse().unwrap_or_default();
            for s in list {
                if s.len() != k + 1 {
                    return Err(Error::InvalidComplex(format!("simplex {s:?} listed under dimension {k}")));
                }
                let mut t = s
                    .iter()
                    .map(|v| relabel.get(v).copied().ok_or_else(|| Error::InvalidComplex(format!("unknown vertex {v}"))))
                    .collect::<Result<Vec<_>>>()?;
                t.sort_unstable();
                if t.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidComplex(format!("repeated vertex in {s:?}")));
                }
                levels[k].push(t);
            }
        }
        for level in &mut levels {
            let before = level.len();
            level.sort();
            level.dedup();
            if level.len() != before {
                return Err(Error::InvalidComplex("duplicate simplex".into()));
            }
        }
        if levels[0].len() != ids.len() {
            return Err(Error::InvalidComplex("0-simplices must list every vertex exactly once".into()));
        }
        let complex = Self::from_levels(ids.len(), levels);
        for k in 1..=complex.dim() {
            for s in complex.simplices(k) {
                for (face, _) in boundary_of(s) {
                    if complex.index_of(&face).is_none() {
                        return Err(Error::InvalidComplex(format!("face {face:?} of {s:?} missing")));
                    }
                }
            }
        }
        Ok(complex)
    }
}

/// On-disk layout: `{"vertices":[ids], "simplices":{"0":[[v]],"1":[[v,v]],…}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: Vec<u64>,
    pub simplices: BTreeMap<String, Vec<Vec<u64>>>,
}

/// Faces with signs for an ordered tuple (no membership check).
pub fn boundary_of(simplex: &[usize]) -> Vec<(Vec<usize>, i8)> {
    (0..simplex.len())
        .map(|i| {
            let mut face = simplex.to_vec();
            face.remove(i);
            (face, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// Whether the ascending tuple `s` is a face of the ascending tuple `t`.
pub fn is_face(s: &[usize], t: &[usize]) -> bool {
    s.iter().all(|v| t.binary_search(v).is_ok())
}

fn all_faces(s: &[usize]) -> Vec<Vec<usize>> {
    let n = s.len();
    (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect())
        .collect()
}

/// Bounded-geometry statistics of a complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryStats {
    pub max_vertex_degree: usize,
    /// Largest simplex diameter, when the complex is embedded.
    pub max_simplex_diameter: Option<f64>,
    /// Largest number of `(k+1)`-simplices sharing a `k`-face, over all `k`.
    pub incidence_bound: usize,
    /// Largest number of simplices (all dimensions) containing one vertex.
    pub max_simplices_at_vertex: usize,
    /// Per-degree coface bound, indexed by `k`.
    pub coface_bounds: Vec<usize>,
}

/// A real-valued alternating function on the `k`-simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<S> {
    degree: usize,
    values: Vec<S>,
}

impl<S: Field> Cochain<S> {
    pub fn zero(complex: &SimplicialComplex, degree: usize) -> Self {
        Self { degree, values: vec![S::zero(); complex.count(degree)] }
    }

    pub fn from_values(complex: &SimplicialComplex, degree: usize, values: Vec<S>) -> Result<Self> {
        if values.len() != complex.count(degree) {
            return Err(Error::DimensionMismatch { expected: complex.count(degree), got: values.len() });
        }
        Ok(Self { degree, values })
    }

    /// Indicator of one canonical simplex.
    pub fn basis(complex: &SimplicialComplex, degree: usize, index: usize) -> Self {
        let mut c = Self::zero(complex, degree);
        c.values[index] = S::one();
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    /// Value on an arbitrarily ordered tuple: `θ(π·Δ) = sign(π)·θ(Δ)`.
    pub fn eval(&self, complex: &SimplicialComplex, tuple: &[usize]) -> Result<S> {
        let (i, sign) = complex.locate(tuple).ok_or_else(|| Error::NotFound(tuple.to_vec()))?;
        if tuple.len() != self.degree + 1 {
            return Err(Error::InvalidDegree { degree: tuple.len().saturating_sub(1), allowed: self.degree.to_string() });
        }
        let v = self.values[i].clone();
        Ok(if sign < 0 { -v } else { v })
    }

    /// `(δθ)(σ) = Σ_i (-1)^i θ(∂_i σ)`; the zero cochain on an empty set above
    /// the top dimension.
    pub fn coboundary(&self, complex: &SimplicialComplex) -> Self {
        let mut out = Self::zero(complex, self.degree + 1);
        for (row, col, sign) in complex.coboundary_entries(self.degree) {
            let v = self.values[col].clone();
            out.values[row] = if sign > 0 { out.values[row].clone() + v } else { out.values[row].clone() - v };
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "cochain degrees differ");
        Self {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { degree: self.degree, values: self.values.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(Field::magnitude).fold(0.0, f64::max)
    }
}

impl<R: Real> Cochain<R> {
    /// `‖θ‖_{ℓ^φ}` over the counting measure on `X_k`.
    pub fn norm(&self, phi: &YoungFunction<R>) -> R {
        let weights = vec![R::one(); self.values.len()];
        luxemburg_from_samples(phi, &self.values, &weights, R::lit(DEFAULT_TOL)).norm
    }

    /// Uniform random values in `[-1, 1]`.
    pub fn random(complex: &SimplicialComplex, degree: usize, rng: &mut impl Rng) -> Self {
        let values = (0..complex.count(degree)).map(|_| R::lit(rng.gen_range(-1.0..=1.0))).collect();
        Self { degree, values }
    }
}

/// Empirical lower bound for the operator norm of `δ_k` on `ℓ^φ`.
///
/// Half the trials draw uniform `[-1, 1]` values, the other half random signs,
/// which hits extremal configurations such as `(1, -1)` on an edge.
pub fn coboundary_norm_estimate<R: Real>(
    phi: &YoungFunction<R>,
    complex: &SimplicialComplex,
    k: usize,
    trials: usize,
    seed: u64,
) -> R {
    if complex.count(k + 1) == 0 || complex.count(k) == 0 {
        return R::zero();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = R::zero();
    for trial in 0..trials.max(1) {
        let theta = if trial % 2 == 0 {
            Cochain::<R>::random(complex, k, &mut rng)
        } else {
            let values = (0..complex.count(k)).map(|_| if rng.gen::<bool>() { R::one() } else { -R::one() }).collect();
            Cochain { degree: k, values }
        };
        let n = theta.norm(phi);
        if n > R::zero() {
            best = best.max(theta.coboundary(complex).norm(phi) / n);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::from_simplices(3, [[0, 1, 2]]).unwrap()
    }

    #[test]
    fn closure_and_counts() {
        let x = triangle();
        assert_eq!((x.count(0), x.count(1), x.count(2)), (3, 3, 1));
        assert_eq!(x.simplices(1), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(x.is_pure());
    }

    #[test]
    fn boundary_face_examples() {
        let x = triangle();
        assert_eq!(x.boundary_faces(&[0, 1]).unwrap(), vec![(vec![1], 1), (vec![0], -1)]);
        let signs: Vec<i8> = x.boundary_faces(&[0, 1, 2]).unwrap().into_iter().map(|(_, s)| s).collect();
        assert_eq!(signs, vec![1, -1, 1]);
        assert!(x.boundary_faces(&[0]).is_err());
        assert_eq!(x.boundary_faces(&[0, 3]), Err(Error::NotFound(vec![0, 3])));
    }

    #[test]
    fn coboundary_examples() {
        let edge = SimplicialComplex::from_simplices(2, [[0, 1]]).unwrap();
        let theta = Cochain::from_values(&edge, 0, vec![2.0, 7.0]).unwrap();
        assert_eq!(theta.coboundary(&edge).values(), &[5.0]);

        let x = triangle();
        let ones = Cochain::from_values(&x, 1, vec![1.0, 1.0, 1.0]).unwrap();
        // brute-force oracle: signed sum over faces via permutation signs of the full tuple
        let mut oracle = 0.0;
        for (i, face) in [[1, 2], [0, 2], [0, 1]].iter().enumerate() {
            let mut tuple = vec![x.simplex(2, 0)[i]];
            tuple.extend_from_slice(face);
            oracle += f64::from(permutation_sign(&tuple)) * ones.eval(&x, face).unwrap();
        }
        assert_eq!(ones.coboundary(&x).values(), &[oracle]);
        assert_eq!(oracle, 1.0);

        let theta = Cochain::from_values(&x, 0, vec![0.3, -1.1, 2.5]).unwrap();
        let dd: f64 = theta.coboundary(&x).coboundary(&x).values()[0];
        assert!(dd.abs() < 1e-12);
        assert_eq!(ones.coboundary(&x).coboundary(&x).values().len(), 0);
    }

    #[test]
    fn exact_coboundary_squares_to_zero() {
        let x = SimplicialComplex::from_simplices(5, [[0, 1, 2, 3], [1, 2, 3, 4]]).unwrap();
        for k in 0..2 {
            let vals: Vec<BigRational> = (0..x.count(k))
                .map(|i| BigRational::new((i as i64 * 7 - 3).into(), (i as i64 % 4 + 1).into()))
                .collect();
            let theta = Cochain::from_values(&x, k, vals).unwrap();
            let dd = theta.coboundary(&x).coboundary(&x);
            assert!(dd.values().iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn permuted_evaluation() {
        let x = SimplicialComplex::from_simplices(4, [[0, 1, 2, 3]]).unwrap();
        for k in 0..=3 {
            let vals: Vec<f64> = (0..x.count(k)).map(|i| i as f64 + 0.5).collect();
            let theta = Cochain::from_values(&x, k, vals).unwrap();
            for s in x.simplices(k) {
                let base = theta.eval(&x, s).unwrap();
                for perm in permutations(s) {
                    let expected = f64::from(permutation_sign(&perm)) * base;
                    assert_eq!(theta.eval(&x, &perm).unwrap(), expected);
                }
            }
        }
    }

    fn permutations(s: &[usize]) -> Vec<Vec<usize>> {
        if s.len() <= 1 {
            return vec![s.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..s.len() {
            let mut rest = s.to_vec();
            let head = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn cochain_norm_examples() {
        let x = SimplicialComplex::from_simplices(3, [[0, 1], [1, 2]]).unwrap();
        let p2 = YoungFunction::power(2.0).unwrap();
        assert_eq!(Cochain::<f64>::zero(&x, 1).norm(&p2), 0.0);
        let theta = Cochain::from_values(&x, 1, vec![3.0, 4.0]).unwrap();
        assert!((theta.norm(&p2) - 5.0).abs() < 1e-11);
        let ones = Cochain::from_values(&x, 0, vec![1.0; 3]).unwrap();
        assert!((ones.norm(&YoungFunction::power(1.0).unwrap()) - 3.0_f64).abs() < 1e-11);
    }

    #[test]
    fn coboundary_norm_on_an_edge() {
        let edge = SimplicialComplex::from_simplices(2, [[0, 1]]).unwrap();
        let p2 = YoungFunction::power(2.0).unwrap();
        // exhaustive oracle over angles: max |a-b| / sqrt(a²+b²)
        let oracle = (0..100_000)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 100_000.0;
                (t.cos() - t.sin()).abs()
            })
            .fold(0.0, f64::max);
        let est = coboundary_norm_estimate(&p2, &edge, 0, 16, 1);
        assert!((est - 2f64.sqrt()).abs() < 1e-10);
        assert!((oracle - 2f64.sqrt()).abs() < 1e-8);
        assert_eq!(coboundary_norm_estimate(&p2, &edge, 1, 8, 1), 0.0);
    }

    #[test]
    fn file_round_trip_and_validation() {
        let x = triangle();
        let file = x.to_file();
        assert_eq!(SimplicialComplex::from_file(&file).unwrap(), x);
        let json = r#"{"vertices":[10,20,30],"simplices":{"0":[[10],[20],[30]],"1":[[10,20],[20,30]],"2":[[10,20,30]]}}"#;
        let file: ComplexFile = serde_json::from_str(json).unwrap();
        assert!(matches!(SimplicialComplex::from_file(&file), Err(Error::InvalidComplex(_))));
        let json = r#"{"vertices":[10,20],"simplices":{"0":[[10],[20]],"1":[[20,10]]}}"#;
        let file: ComplexFile = serde_json::from_str(json).unwrap();
        let x = SimplicialComplex::from_file(&file).unwrap();
        assert_eq!(x.simplices(1), &[vec![0, 1]]);
    }

    #[test]
    fn stats_on_triangle() {
        let s = triangle().stats();
        assert_eq!(s.max_vertex_degree, 2);
        assert_eq!(s.coface_bounds, vec![2, 1]);
        assert_eq!(s.incidence_bound, 2);
        assert_eq!(s.max_simplices_at_vertex, 4);
    }
}
