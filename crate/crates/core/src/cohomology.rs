//! Finite-dimensional cochain complexes: ranks, cohomology dimensions and
//! harmonic representatives.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{Field, Real};
use crate::simplicial::SimplicialComplex;

/// Relative singular-value cutoff used for floating ranks.
pub const RANK_CUTOFF: f64 = 1e-9;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Field> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).magnitude() * signum(self.get(r, c)))
    }

    /// Exact rank by Gaussian elimination (pivots are tested with `is_zero`).
    pub fn rank_exact(&self) -> usize {
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else { continue };
            for c in 0..cols {
                a.swap(rank * cols + c, p * cols + c);
            }
            let pivot = a[rank * cols + col].clone();
            for r in (rank + 1)..rows {
                let f = a[r * cols + col].clone();
                if f.is_zero() {
                    continue;
                }
                let factor = f / pivot.clone();
                for c in col..cols {
                    let v = a[r * cols + c].clone() - factor.clone() * a[rank * cols + c].clone();
                    a[r * cols + c] = v;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

fn signum<S: Field>(v: &S) -> f64 {
    if v.is_negative() {
        -1.0
    } else {
        1.0
    }
}

/// Numerical rank with singular-value cutoff `RANK_CUTOFF · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_CUTOFF * smax).count()
}

/// Graded spaces `C^k` with maps `D_k: C^k → C^{k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearComplex<S> {
    dims: Vec<usize>,
    maps: Vec<Matrix<S>>,
}

impl<S: Field> LinearComplex<S> {
    /// Validates shapes and `D_{k+1} D_k = 0` (exactly for exact fields,
    /// within `1e-10` relative for floats).
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix<S>>) -> Result<Self> {
        if maps.len() + 1 != dims.len() && !(dims.is_empty() && maps.is_empty()) {
            return Err(Error::InvalidComplex(format!("{} spaces need {} maps, got {}", dims.len(), dims.len().saturating_sub(1), maps.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.cols != dims[k] || m.rows != dims[k + 1] {
                return Err(Error::InvalidComplex(format!("map {k} has shape {}x{}, expected {}x{}", m.rows, m.cols, dims[k + 1], dims[k])));
            }
        }
        for k in 1..maps.len() {
            let prod = maps[k].mul(&maps[k - 1]);
            let scale = 1.0 + maps[k].max_abs() * maps[k - 1].max_abs();
            if prod.max_abs() > 1e-10 * scale {
                return Err(Error::InvalidComplex(format!("D_{k} D_{} != 0 (max {:e})", k - 1, prod.max_abs())));
            }
        }
        Ok(Self { dims, maps })
    }

    /// The complex with all maps zero.
    pub fn zero(dims: Vec<usize>) -> Self {
        let maps = (0..dims.len().saturating_sub(1)).map(|k| Matrix::zeros(dims[k + 1], dims[k])).collect();
        Self { dims, maps }
    }

    /// The simplicial cochain complex of `complex`.
    pub fn from_simplicial(complex: &SimplicialComplex) -> Self {
        let dims: Vec<usize> = (0..=complex.dim()).map(|k| complex.count(k)).collect();
        let maps = (0..complex.dim())
            .map(|k| {
                let mut m = Matrix::zeros(dims[k + 1], dims[k]);
                for (r, c, s) in complex.coboundary_entries(k) {
                    m.set(r, c, S::from_int(i64::from(s)));
                }
                m
            })
            .collect();
        Self { dims, maps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn map(&self, k: usize) -> Option<&Matrix<S>> {
        self.maps.get(k)
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k >= self.dims.len() {
            return Err(Error::InvalidDegree { degree: k, allowed: format!("0..{}", self.dims.len()) });
        }
        Ok(())
    }

    /// `dim Ker D_k − rank D_{k−1}` with exact elimination.
    pub fn cohomology_dim_exact(&self, k: usize) -> Result<usize> {
        self.check_degree(k)?;
        let rank_out = self.maps.get(k).map_or(0, Matrix::rank_exact);
        let rank_in = if k == 0 { 0 } else { self.maps[k - 1].rank_exact() };
        Ok(self.dims[k] - rank_out - rank_in)
    }

    /// `H^k` and its closure quotient coincide in finite dimension: images of
    /// linear maps between finite-dimensional spaces are closed.
    pub fn reduced_equals_unreduced(&self, _k: usize) -> bool {
        true
    }

    /// `Σ(−1)^k dim C^k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

impl<R: Real> LinearComplex<R> {
    fn map_f64(&self, k: usize) -> Option<DMatrix<f64>> {
        self.maps.get(k).map(Matrix::to_f64)
    }

    /// `dim Ker D_k − rank D_{k−1}` with SVD ranks.
    pub fn cohomology_dim(&self, k: usize) -> Result<usize> {
        self.check_degree(k)?;
        let rank_out = self.map_f64(k).map_or(0, |m| numerical_rank(&m));
        let rank_in = if k == 0 { 0 } else { numerical_rank(&self.map_f64(k - 1).expect("map exists")) };
        Ok(self.dims[k] - rank_out - rank_in)
    }

    /// Orthonormal basis of `Ker D_k ∩ (Im D_{k−1})^⊥`, the null space of the
    /// Laplacian `D_kᵀD_k + D_{k−1}D_{k−1}ᵀ`.
    pub fn harmonic_basis(&self, k: usize) -> Result<Vec<Vec<f64>>> {
        let b = self.cohomology_dim(k)?;
        let n = self.dims[k];
        if b == 0 {
            return Ok(Vec::new());
        }
        let mut lap = DMatrix::<f64>::zeros(n, n);
        if let Some(d) = self.map_f64(k) {
            lap += d.transpose() * &d;
        }
        if k > 0 {
            let d = self.map_f64(k - 1).expect("map exists");
            lap += &d * d.transpose();
        }
        let eig = SymmetricEigen::new(lap);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
        Ok(order[..b]
            .iter()
            .map(|&j| {
                let col: Vec<f64> = eig.eigenvectors.column(j).iter().copied().collect();
                canonical_sign(col)
            })
            .collect())
    }

    /// The `index`-th harmonic representative of `H^k`.
    pub fn harmonic_representative(&self, k: usize, index: usize) -> Result<Vec<f64>> {
        let basis = self.harmonic_basis(k)?;
        let size = basis.len();
        basis.into_iter().nth(index).ok_or(Error::IndexOutOfRange { index, size })
    }

    /// `(‖D_k r‖, ‖D_{k−1}ᵀ r‖)` for a vector `r ∈ C^k`.
    pub fn harmonic_residuals(&self, k: usize, r: &[f64]) -> (f64, f64) {
        let v = nalgebra::DVector::from_column_slice(r);
        let out = self.map_f64(k).map_or(0.0, |d| (d * &v).norm());
        let inn = if k == 0 { 0.0 } else { (self.map_f64(k - 1).expect("map exists").transpose() * &v).norm() };
        (out, inn)
    }
}

/// Flips a vector so that its first entry of largest magnitude is positive.
fn canonical_sign(mut v: Vec<f64>) -> Vec<f64> {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}
