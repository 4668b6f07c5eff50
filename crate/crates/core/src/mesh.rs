//! Embedded triangulations of dimension at most three, with a Euclidean or
//! flat-torus metric.
//!
//! Each top simplex `T = (v_0 < … < v_n)` carries an affine chart from the
//! reference simplex: local coordinates `s_i = λ_i` (`i ≥ 1`), origin `v_0`
//! and edge vectors `e_i = v_i − v_0`, taken as minimal images on the torus.
//! All forms on `T` are expressed in these coordinates, so the intrinsic
//! metric is the Gram matrix `G = eᵀe`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{small_det, subsets};
use crate::scalar::Real;
use crate::simplicial::{ComplexFile, GeometryStats, SimplicialComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Euclidean,
    Torus,
}

/// Affine data of one top simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart<R> {
    origin: Vec<R>,
    edges: Vec<Vec<R>>,
    volume: R,
    /// `compound[k][I][J] = det(G⁻¹[I, J])` over increasing `k`-subsets.
    compound: Vec<Vec<Vec<R>>>,
    sigma_min: f64,
    sigma_max: f64,
}

impl<R: Real> Chart<R> {
    fn new(origin: Vec<R>, edges: Vec<Vec<R>>) -> Result<Self> {
        let n = edges.len();
        let gram: Vec<Vec<R>> = (0..n)
            .map(|i| (0..n).map(|j| edges[i].iter().zip(&edges[j]).map(|(&a, &b)| a * b).sum()).collect())
            .collect();
        let det = small_det(&gram);
        if !(det.as_f64() > 1e-12) {
            return Err(Error::InvalidComplex(format!("degenerate top simplex (Gram determinant {})", det.as_f64())));
        }
        let inv: Vec<Vec<R>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        // adjugate entry (i, j) = (−1)^{i+j} · minor(j, i)
                        let minor: Vec<Vec<R>> = (0..n)
                            .filter(|&r| r != j)
                            .map(|r| (0..n).filter(|&c| c != i).map(|c| gram[r][c]).collect())
                            .collect();
                        let m = small_det(&minor);
                        if (i + j) % 2 == 0 {
                            m / det
                        } else {
                            -m / det
                        }
                    })
                    .collect()
            })
            .collect();
        let compound = (0..=n)
            .map(|k| {
                let sets = subsets(n, k);
                sets.iter()
                    .map(|a| {
                        sets.iter()
                            .map(|b| small_det(&a.iter().map(|&i| b.iter().map(|&j| inv[i][j]).collect()).collect::<Vec<_>>()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let g64 = DMatrix::from_fn(n, n, |i, j| gram[i][j].as_f64());
        let eig = SymmetricEigen::new(g64).eigenvalues;
        let sigma_min = eig.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0).sqrt();
        let sigma_max = eig.iter().cloned().fold(0.0, f64::max).sqrt();
        Ok(Self { origin, edges, volume: det.sqrt() / R::lit(fact), compound, sigma_min, sigma_max })
    }

    /// Lifted position of vertex 0.
    pub fn origin(&self) -> &[R] {
        &self.origin
    }

    pub fn edges(&self) -> &[Vec<R>] {
        &self.edges
    }

    pub fn volume(&self) -> R {
        self.volume
    }

    /// Ambient position of the point with local coordinates `s`.
    pub fn point(&self, s: &[R]) -> Vec<R> {
        let mut p = self.origin.clone();
        for (si, e) in s.iter().zip(&self.edges) {
            for (pi, &ei) in p.iter_mut().zip(e) {
                *pi = *pi + *si * ei;
            }
        }
        p
    }

    /// Lifted position of local vertex `i` (`0` is the origin).
    pub fn vertex(&self, i: usize) -> Vec<R> {
        if i == 0 {
            self.origin.clone()
        } else {
            self.origin.iter().zip(&self.edges[i - 1]).map(|(&o, &e)| o + e).collect()
        }
    }

    /// `|ω|²` for a `k`-covector given by its components `ω_I` in local coordinates.
    pub fn norm_squared(&self, k: usize, comps: &[R]) -> R {
        let m = &self.compound[k];
        let mut acc = R::zero();
        for (i, a) in comps.iter().enumerate() {
            if *a == R::zero() {
                continue;
            }
            for (j, b) in comps.iter().enumerate() {
                acc = acc + *a * *b * m[i][j];
            }
        }
        acc.max(R::zero())
    }

    /// Extreme singular values of the chart differential.
    pub fn singular_values(&self) -> (f64, f64) {
        (self.sigma_min, self.sigma_max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh<R> {
    name: String,
    complex: SimplicialComplex,
    coords: Vec<Vec<R>>,
    metric: MetricKind,
    period: Vec<R>,
    charts: Vec<Chart<R>>,
    /// `stars[k][i]`: ascending ids of the top simplices containing simplex `(k, i)`.
    stars: Vec<Vec<Vec<usize>>>,
}

impl<R: Real> Mesh<R> {
    pub fn new(
        name: impl Into<String>,
        complex: SimplicialComplex,
        coords: Vec<Vec<R>>,
        metric: MetricKind,
        period: Vec<R>,
    ) -> Result<Self> {
        let n = complex.dim();
        if n > 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        if complex.count(n) == 0 {
            return Err(Error::InvalidComplex("empty mesh".into()));
        }
        if !complex.is_pure() {
            return Err(Error::InvalidComplex("mesh complex must be pure".into()));
        }
        if coords.len() != complex.n_vertices() {
            return Err(Error::DimensionMismatch { expected: complex.n_vertices(), got: coords.len() });
        }
        let ambient = coords[0].len();
        if ambient > 3 || ambient < n {
            return Err(Error::UnsupportedDimension(ambient));
        }
        if coords.iter().any(|c| c.len() != ambient) {
            return Err(Error::InvalidComplex("coordinates of mixed dimension".into()));
        }
        if metric == MetricKind::Torus && (period.len() != ambient || period.iter().any(|p| !(*p > R::zero()))) {
            return Err(Error::InvalidParameter("torus metric needs one positive period per coordinate".into()));
        }
        let mut mesh =
            Self { name: name.into(), complex, coords, metric, period, charts: Vec::new(), stars: Vec::new() };
        let tops = mesh.complex.simplices(n).to_vec();
        mesh.charts = tops
            .iter()
            .map(|t| {
                let origin = mesh.coords[t[0]].clone();
                let edges = t[1..].iter().map(|&v| mesh.displacement(t[0], v)).collect();
                Chart::new(origin, edges)
            })
            .collect::<Result<_>>()?;
        let mut stars: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| vec![Vec::new(); mesh.complex.count(k)]).collect();
        for (ti, t) in tops.iter().enumerate() {
            for k in 0..=n {
                for local in subsets(n + 1, k + 1) {
                    let face: Vec<usize> = local.iter().map(|&i| t[i]).collect();
                    let idx = mesh.complex.index_of(&face).expect("closed complex");
                    stars[k][idx].push(ti);
                }
            }
        }
        mesh.stars = stars;
        Ok(mesh)
    }

    /// `b − a`, as a minimal image on the torus.
    pub fn displacement(&self, a: usize, b: usize) -> Vec<R> {
        let mut d: Vec<R> = self.coords[b].iter().zip(&self.coords[a]).map(|(&x, &y)| x - y).collect();
        if self.metric == MetricKind::Torus {
            for (di, &p) in d.iter_mut().zip(&self.period) {
                *di = *di - p * (*di / p).round();
            }
        }
        d
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords[0].len()
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn period(&self) -> &[R] {
        &self.period
    }

    pub fn coordinates(&self) -> &[Vec<R>] {
        &self.coords
    }

    pub fn n_top(&self) -> usize {
        self.charts.len()
    }

    pub fn top(&self, t: usize) -> &[usize] {
        self.complex.simplex(self.dim(), t)
    }

    pub fn chart(&self, t: usize) -> &Chart<R> {
        &self.charts[t]
    }

    pub fn charts(&self) -> &[Chart<R>] {
        &self.charts
    }

    pub fn total_volume(&self) -> R {
        let v: Vec<R> = self.charts.iter().map(|c| c.volume).collect();
        crate::scalar::pairwise_sum(&v)
    }

    /// Top simplices containing the `k`-simplex `i` (the star intersection `U_Δ`).
    pub fn star(&self, k: usize, i: usize) -> &[usize] {
        &self.stars[k][i]
    }

    /// Positions of the face's vertices inside the sorted tuple of top simplex `t`.
    pub fn local_indices(&self, t: usize, face: &[usize]) -> Option<Vec<usize>> {
        let top = self.top(t);
        face.iter().map(|v| top.binary_search(v).ok()).collect()
    }

    /// Volume of the `k`-simplex `i`, measured in the chart of a containing top simplex.
    pub fn simplex_volume(&self, k: usize, i: usize) -> R {
        let t = self.stars[k][i][0];
        let local = self.local_indices(t, self.complex.simplex(k, i)).expect("face of its star");
        let chart = &self.charts[t];
        let pts: Vec<Vec<R>> = local.iter().map(|&j| chart.vertex(j)).collect();
        simplex_volume(&pts)
    }

    /// `max σ_max / min σ_min` over all chart differentials.
    pub fn bilipschitz(&self) -> f64 {
        let hi = self.charts.iter().map(|c| c.sigma_max).fold(0.0, f64::max);
        let lo = self.charts.iter().map(|c| c.sigma_min).fold(f64::INFINITY, f64::min);
        hi / lo
    }

    /// Combinatorial statistics plus the largest simplex diameter.
    pub fn geometry_stats(&self) -> GeometryStats {
        let mut stats = self.complex.stats();
        let mut diam = 0.0f64;
        for c in &self.charts {
            let n = c.edges.len();
            for i in 0..=n {
                for j in i + 1..=n {
                    let (a, b) = (c.vertex(i), c.vertex(j));
                    let d: f64 = a.iter().zip(&b).map(|(x, y)| (*x - *y).as_f64().powi(2)).sum::<f64>().sqrt();
                    diam = diam.max(d);
                }
            }
        }
        stats.max_simplex_diameter = Some(diam);
        stats
    }

    pub fn to_file(&self) -> MeshFile {
        MeshFile {
            complex: self.complex.to_file(),
            coordinates: self.coords.iter().map(|c| c.iter().map(|v| v.as_f64()).collect()).collect(),
            metric: self.metric,
            period: (self.metric == MetricKind::Torus).then(|| self.period.iter().map(|v| v.as_f64()).collect()),
        }
    }

    pub fn from_file(name: impl Into<String>, file: &MeshFile) -> Result<Self> {
        let complex = SimplicialComplex::from_file(&file.complex)?;
        let mut order: Vec<usize> = (0..file.complex.vertices.len()).collect();
        order.sort_by_key(|&i| file.complex.vertices[i]);
        if file.coordinates.len() != order.len() {
            return Err(Error::DimensionMismatch { expected: order.len(), got: file.coordinates.len() });
        }
        let coords = order.iter().map(|&i| file.coordinates[i].iter().map(|&v| R::lit(v)).collect()).collect();
        let period = file.period.clone().unwrap_or_default().into_iter().map(R::lit).collect();
        Self::new(name, complex, coords, file.metric, period)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("mesh serializes")
    }

    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let file: MeshFile = serde_json::from_str(json).map_err(|e| Error::Io(e.to_string()))?;
        Self::from_file(name, &file)
    }

    /// Builds a mesh from a generator name such as `torus:m=8` or
    /// `bary:k=1,inner=sphere:oct`.
    pub fn from_name(spec: &str) -> Result<Self> {
        generate(spec.trim())
    }
}

/// Mesh JSON: the complex layout plus coordinates and metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    #[serde(flatten)]
    pub complex: ComplexFile,
    pub coordinates: Vec<Vec<f64>>,
    pub metric: MetricKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<Vec<f64>>,
}

/// `k`-volume of the simplex spanned by `k + 1` points.
pub fn simplex_volume<R: Real>(points: &[Vec<R>]) -> R {
    let k = points.len() - 1;
    let edges: Vec<Vec<R>> = points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(&a, &b)| a - b).collect()).collect();
    let gram: Vec<Vec<R>> =
        (0..k).map(|i| (0..k).map(|j| edges[i].iter().zip(&edges[j]).map(|(&a, &b)| a * b).sum()).collect()).collect();
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    small_det(&gram).max(R::zero()).sqrt() / R::lit(fact)
}

/// Inradius of a nondegenerate simplex: `k · vol / Σ facet volumes` (half the length for a segment).
pub fn inradius<R: Real>(points: &[Vec<R>]) -> R {
    let k = points.len() - 1;
    if k == 0 {
        return R::zero();
    }
    let vol = simplex_volume(points);
    let facets: Vec<R> = (0..=k)
        .map(|i| {
            let f: Vec<Vec<R>> = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            simplex_volume(&f)
        })
        .collect();
    R::lit(k as f64) * vol / facets.into_iter().sum::<R>()
}

fn params(spec: &str) -> Result<(String, Vec<(String, String)>)> {
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut out = Vec::new();
    let mut rest = rest;
    while !rest.is_empty() {
        if let Some(inner) = rest.strip_prefix("inner=") {
            out.push(("inner".into(), inner.to_string()));
            break;
        }
        let (item, tail) = rest.split_once(',').unwrap_or((rest, ""));
        let (k, v) = item.split_once('=').ok_or_else(|| Error::spec(spec, format!("expected key=value, got {item:?}")))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
        rest = tail;
    }
    Ok((head.to_string(), out))
}

fn get<T: std::str::FromStr>(spec: &str, kv: &[(String, String)], key: &str) -> Result<T> {
    let raw = kv.iter().find(|(k, _)| k == key).map(|(_, v)| v).ok_or_else(|| Error::spec(spec, format!("missing {key}")))?;
    raw.parse().map_err(|_| Error::spec(spec, format!("bad value for {key}: {raw:?}")))
}

fn only_keys(spec: &str, kv: &[(String, String)], allowed: &[&str]) -> Result<()> {
    match kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(Error::spec(spec, format!("unknown parameter {k:?}"))),
        None => Ok(()),
    }
}

fn generate<R: Real>(spec: &str) -> Result<Mesh<R>> {
    let (head, kv) = if spec.starts_with("sphere:") { ("sphere".to_string(), Vec::new()) } else { params(spec)? };
    let lit = |v: f64| R::lit(v);
    let to_r = |pts: Vec<Vec<f64>>| pts.into_iter().map(|p| p.into_iter().map(lit).collect()).collect::<Vec<Vec<R>>>();
    match head.as_str() {
        "circle" => {
            only_keys(spec, &kv, &["n"])?;
            let n: usize = get(spec, &kv, "n")?;
            if n < 3 {
                return Err(Error::spec(spec, "a circle needs n >= 3"));
            }
            let coords = (0..n)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / n as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect();
            let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
            let complex = SimplicialComplex::from_simplices(n, edges)?;
            Mesh::new(spec, complex, to_r(coords), MetricKind::Euclidean, vec![])
        }
        "interval" => {
            only_keys(spec, &kv, &["n"])?;
            let n: usize = get(spec, &kv, "n")?;
            if n < 1 {
                return Err(Error::spec(spec, "an interval needs n >= 1"));
            }
            let coords = (0..=n).map(|i| vec![i as f64 / n as f64]).collect();
            let complex = SimplicialComplex::from_simplices(n + 1, (0..n).map(|i| [i, i + 1]))?;
            Mesh::new(spec, complex, to_r(coords), MetricKind::Euclidean, vec![])
        }
        "torus" => {
            only_keys(spec, &kv, &["m"])?;
            let m: usize = get(spec, &kv, "m")?;
            if m < 3 {
                return Err(Error::spec(spec, "a torus grid needs m >= 3"));
            }
            let id = |i: usize, j: usize| (i % m) + m * (j % m);
            let coords = (0..m * m).map(|v| vec![(v % m) as f64 / m as f64, (v / m) as f64 / m as f64]).collect();
            let mut tris = Vec::new();
            for j in 0..m {
                for i in 0..m {
                    tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                    tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                }
            }
            let complex = SimplicialComplex::from_simplices(m * m, tris)?;
            Mesh::new(spec, complex, to_r(coords), MetricKind::Torus, vec![lit(1.0), lit(1.0)])
        }
        "sphere" => {
            let kind = spec.split_once(':').map(|(_, k)| k).unwrap_or("");
            let (coords, tris): (Vec<Vec<f64>>, Vec<[usize; 3]>) = match kind {
                "oct" => (
                    vec![
                        vec![1.0, 0.0, 0.0],
                        vec![-1.0, 0.0, 0.0],
                        vec![0.0, 1.0, 0.0],
                        vec![0.0, -1.0, 0.0],
                        vec![0.0, 0.0, 1.0],
                        vec![0.0, 0.0, -1.0],
                    ],
                    vec![[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]],
                ),
                "icosa" => icosahedron(),
                _ => return Err(Error::spec(spec, "sphere must be sphere:oct or sphere:icosa")),
            };
            let complex = SimplicialComplex::from_simplices(coords.len(), tris)?;
            Mesh::new(spec, complex, to_r(coords), MetricKind::Euclidean, vec![])
        }
        "ball2" => {
            only_keys(spec, &kv, &["h"])?;
            let h: f64 = get(spec, &kv, "h")?;
            if !(h > 0.0 && h <= 1.0) {
                return Err(Error::spec(spec, "h must lie in (0, 1]"));
            }
            let (coords, tris) = disk(((1.0 / h).round() as usize).max(1));
            let complex = SimplicialComplex::from_simplices(coords.len(), tris)?;
            Mesh::new(spec, complex, to_r(coords), MetricKind::Euclidean, vec![])
        }
        "bary" => {
            only_keys(spec, &kv, &["k", "inner"])?;
            let k: usize = get(spec, &kv, "k")?;
            let inner: String = get(spec, &kv, "inner")?;
            let mut mesh: Mesh<R> = generate(&inner)?;
            for _ in 0..k {
                mesh = barycentric_subdivision(&mesh)?;
            }
            mesh.name = spec.to_string();
            Ok(mesh)
        }
        _ => Err(Error::spec(spec, "unknown mesh generator")),
    }
}

fn icosahedron() -> (Vec<Vec<f64>>, Vec<[usize; 3]>) {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, g, 0.0],
        [1.0, g, 0.0],
        [-1.0, -g, 0.0],
        [1.0, -g, 0.0],
        [0.0, -1.0, g],
        [0.0, 1.0, g],
        [0.0, -1.0, -g],
        [0.0, 1.0, -g],
        [g, 0.0, -1.0],
        [g, 0.0, 1.0],
        [-g, 0.0, -1.0],
        [-g, 0.0, 1.0],
    ];
    let norm = (1.0 + g * g).sqrt();
    let coords = raw.iter().map(|p| p.iter().map(|v| v / norm).collect()).collect();
    let tris = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (coords, tris)
}

/// Unit disk: a centre plus `rings` concentric rings, ring `i` holding `6i` points.
fn disk(rings: usize) -> (Vec<Vec<f64>>, Vec<[usize; 3]>) {
    let mut coords = vec![vec![0.0, 0.0]];
    let mut ring_ids: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..=rings {
        let count = 6 * i;
        let r = i as f64 / rings as f64;
        let ids: Vec<usize> = (0..count).map(|j| coords.len() + j).collect();
        for j in 0..count {
            let a = 2.0 * PI * j as f64 / count as f64;
            coords.push(vec![r * a.cos(), r * a.sin()]);
        }
        ring_ids.push(ids);
    }
    let mut tris = Vec::new();
    for i in 1..=rings {
        let (inner, outer) = (&ring_ids[i - 1], &ring_ids[i]);
        let (ni, no) = (inner.len(), outer.len());
        if ni == 1 {
            for j in 0..no {
                tris.push([inner[0], outer[j], outer[(j + 1) % no]]);
            }
            continue;
        }
        let (mut a, mut b) = (0usize, 0usize);
        while a < ni || b < no {
            let next_a = (a + 1) as f64 / ni as f64;
            let next_b = (b + 1) as f64 / no as f64;
            if b < no && (a == ni || next_b <= next_a) {
                tris.push([inner[a % ni], outer[b], outer[(b + 1) % no]]);
                b += 1;
            } else {
                tris.push([inner[a], inner[(a + 1) % ni], outer[b % no]]);
                a += 1;
            }
        }
    }
    (coords, tris)
}

/// One barycentric subdivision. New vertices are the barycenters of all
/// simplices, ordered by dimension then by simplex index.
pub fn barycentric_subdivision<R: Real>(mesh: &Mesh<R>) -> Result<Mesh<R>> {
    let cx = mesh.complex();
    let n = cx.dim();
    let mut offset = vec![0usize; n + 2];
    for k in 0..=n {
        offset[k + 1] = offset[k] + cx.count(k);
    }
    let mut coords = Vec::with_capacity(offset[n + 1]);
    for k in 0..=n {
        for s in cx.simplices(k) {
            let base = &mesh.coordinates()[s[0]];
            let mut c = base.clone();
            for &v in &s[1..] {
                let d = mesh.displacement(s[0], v);
                for (ci, di) in c.iter_mut().zip(&d) {
                    *ci = *ci + *di / R::lit((k + 1) as f64);
                }
            }
            if mesh.metric() == MetricKind::Torus {
                for (ci, &p) in c.iter_mut().zip(mesh.period()) {
                    *ci = *ci - p * (*ci / p).floor();
                }
            }
            coords.push(c);
        }
    }
    let mut tops = Vec::new();
    for t in cx.simplices(n) {
        for perm in permutations(t) {
            let flag: Vec<usize> = (0..=n)
                .map(|j| {
                    let mut s: Vec<usize> = perm[..=j].to_vec();
                    s.sort_unstable();
                    offset[j] + cx.index_of(&s).expect("face")
                })
                .collect();
            tops.push(flag);
        }
    }
    let complex = SimplicialComplex::from_simplices(coords.len(), tops)?;
    Mesh::new(format!("bary:k=1,inner={}", mesh.name()), complex, coords, mesh.metric(), mesh.period().to_vec())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::LinearComplex;

    fn betti(mesh: &Mesh<f64>) -> Vec<usize> {
        let cx = LinearComplex::<f64>::from_simplicial(mesh.complex());
        (0..=mesh.dim()).map(|k| cx.cohomology_dim(k).unwrap()).collect()
    }

    #[test]
    fn generators_have_the_expected_topology() {
        let cases: [(&str, &[usize]); 8] = [
            ("circle:n=12", &[1, 1]),
            ("interval:n=5", &[1, 0]),
            ("torus:m=4", &[1, 2, 1]),
            ("torus:m=3", &[1, 2, 1]),
            ("sphere:oct", &[1, 0, 1]),
            ("sphere:icosa", &[1, 0, 1]),
            ("ball2:h=0.25", &[1, 0, 0]),
            ("bary:k=1,inner=sphere:oct", &[1, 0, 1]),
        ];
        for (name, expected) in cases {
            let mesh = Mesh::<f64>::from_name(name).unwrap();
            assert_eq!(betti(&mesh), expected, "{name}");
        }
    }

    #[test]
    fn volumes_and_counts() {
        let torus = Mesh::<f64>::from_name("torus:m=5").unwrap();
        assert_eq!(torus.n_top(), 50);
        assert!((torus.total_volume() - 1.0).abs() < 1e-12);
        let oct = Mesh::<f64>::from_name("sphere:oct").unwrap();
        // eight equilateral triangles of side √2
        assert!((oct.total_volume() - 8.0 * 3f64.sqrt() / 2.0).abs() < 1e-12);
        let circle = Mesh::<f64>::from_name("circle:n=6").unwrap();
        assert!((circle.total_volume() - 6.0).abs() < 1e-12);
        let disk = Mesh::<f64>::from_name("ball2:h=0.2").unwrap();
        assert_eq!(disk.complex().count(0), 1 + 6 * (1 + 2 + 3 + 4 + 5));
        assert!(disk.total_volume() > 2.9 && disk.total_volume() < PI);
        let bary = Mesh::<f64>::from_name("bary:k=1,inner=torus:m=3").unwrap();
        assert_eq!(bary.n_top(), 6 * 18);
        assert!((bary.total_volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn every_top_simplex_is_in_its_own_stars() {
        let mesh = Mesh::<f64>::from_name("sphere:icosa").unwrap();
        for k in 0..=2 {
            for i in 0..mesh.complex().count(k) {
                let star = mesh.star(k, i);
                assert!(!star.is_empty());
                assert!(star.windows(2).all(|w| w[0] < w[1]));
                for &t in star {
                    assert!(mesh.local_indices(t, mesh.complex().simplex(k, i)).is_some());
                }
            }
        }
        assert_eq!(mesh.star(0, 0).len(), 5);
        assert_eq!(mesh.star(1, 0).len(), 2);
    }

    #[test]
    fn comass_matches_metric() {
        let mesh = Mesh::<f64>::from_name("torus:m=4").unwrap();
        let c = mesh.chart(0);
        // dx pulls back to (e_1)_x ds_1 + (e_2)_x ds_2
        let comps = [c.edges()[0][0], c.edges()[1][0]];
        assert!((c.norm_squared(1, &comps) - 1.0).abs() < 1e-12);
        // dx∧dy pulls back to det(e) ds_1∧ds_2
        let det = c.edges()[0][0] * c.edges()[1][1] - c.edges()[0][1] * c.edges()[1][0];
        assert!((c.norm_squared(2, &[3.0 * det]) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn bilipschitz_of_a_right_triangle_grid() {
        // edges (1,0)/m and (1,1)/m: G = [[1,1],[1,2]]/m², eigenvalues (3 ± √5)/2 / m²
        let mesh = Mesh::<f64>::from_name("torus:m=4").unwrap();
        let expected = ((3.0 + 5f64.sqrt()) / (3.0 - 5f64.sqrt())).sqrt();
        assert!((mesh.bilipschitz() - expected).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        for name in ["torus:m=3", "sphere:oct", "circle:n=5"] {
            let mesh = Mesh::<f64>::from_name(name).unwrap();
            let back = Mesh::<f64>::from_json(name, &mesh.to_json()).unwrap();
            assert_eq!(back, mesh);
        }
        let flat = r#"{"vertices":[0,1,2],"simplices":{"0":[[0],[1],[2]],"1":[[0,1],[1,2],[0,2]],"2":[[0,1,2]]},
            "coordinates":[[0,0],[1,0],[2,0]],"metric":"euclidean"}"#;
        assert!(matches!(Mesh::<f64>::from_json("flat", flat), Err(Error::InvalidComplex(_))));
        assert!(Mesh::<f64>::from_name("torus:m=2").is_err());
        assert!(Mesh::<f64>::from_name("klein:m=4").is_err());
        assert!(Mesh::<f64>::from_name("circle:n=8,extra=1").is_err());
    }

    #[test]
    fn inradius_examples() {
        let seg: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        assert!((inradius(&seg) - 1.0).abs() < 1e-15);
        // right triangle with legs 3, 4: r = (3 + 4 − 5) / 2
        let tri: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]];
        assert!((inradius(&tri) - 1.0).abs() < 1e-14);
        let tet: Vec<Vec<f64>> = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!((inradius(&tet) - 1.0 / (3.0 + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn geometry_stats_report_diameters() {
        let mesh = Mesh::<f64>::from_name("sphere:oct").unwrap();
        let stats = mesh.geometry_stats();
        assert!((stats.max_simplex_diameter.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(stats.max_vertex_degree, 4);
    }
}
