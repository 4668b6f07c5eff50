//! Modulars and Luxemburg norms on finite weighted measure spaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Real};
use crate::young::{ConjugateOptions, YoungFunction};

/// A finite measure space: points `0..len` with strictly positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<R> {
    weights: Vec<R>,
}

impl<R: Real> DiscreteMeasure<R> {
    pub fn new(weights: Vec<R>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w > R::zero()) || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("measure weights must be positive and finite, got {w:?}")));
        }
        Ok(Self { weights })
    }

    /// Counting measure on `n` points.
    pub fn counting(n: usize) -> Self {
        Self { weights: vec![R::one(); n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn total_mass(&self) -> R {
        pairwise_sum(&self.weights)
    }
}

/// Function values aligned with the points of a [`DiscreteMeasure`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction<R>(pub Vec<R>);

impl<R: Real> SampledFunction<R> {
    pub fn values(&self) -> &[R] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| *v == R::zero())
    }

    pub fn max_abs(&self) -> R {
        self.0.iter().fold(R::zero(), |m, v| m.max(v.abs()))
    }
}

impl<R> From<Vec<R>> for SampledFunction<R> {
    fn from(v: Vec<R>) -> Self {
        SampledFunction(v)
    }
}

fn check_aligned<R>(f: &SampledFunction<R>, mu: &DiscreteMeasure<R>) -> Result<()> {
    if f.0.len() != mu.weights.len() {
        return Err(Error::DimensionMismatch { expected: mu.weights.len(), got: f.0.len() });
    }
    Ok(())
}

/// `ρ_φ(f) = Σ_i w_i φ(f_i)`.
pub fn modular<R: Real>(phi: &YoungFunction<R>, f: &SampledFunction<R>, mu: &DiscreteMeasure<R>) -> Result<R> {
    check_aligned(f, mu)?;
    Ok(scaled_modular(phi, &f.0, &mu.weights, R::one()))
}

fn scaled_modular<R: Real>(phi: &YoungFunction<R>, values: &[R], weights: &[R], alpha: R) -> R {
    let terms: Vec<R> = values.iter().zip(weights).map(|(&v, &w)| w * phi.eval(v / alpha)).collect();
    pairwise_sum(&terms)
}

/// Outcome of a Luxemburg-norm computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LuxemburgNorm<R> {
    pub norm: R,
    /// `ρ_φ(f / norm)`, which is at most 1 (0 for the zero function).
    pub modular_at_norm: R,
    /// Number of modular evaluations spent in bracketing and bisection.
    pub iterations: usize,
}

/// Default relative tolerance of the Luxemburg bisection.
pub const DEFAULT_TOL: f64 = 1e-12;

/// `‖f‖_φ = inf{α > 0 : ρ_φ(f/α) ≤ 1}`.
///
/// The map `α ↦ ρ_φ(f/α)` is nonincreasing, so the infimum is bracketed by
/// halving/doubling from `α₀ = max|f_i| · Σw_i` and then bisected until the
/// bracket is narrower than `tol` relative to its upper end. The returned norm
/// is the upper end, so `ρ_φ(f/‖f‖) ≤ 1` always holds.
pub fn luxemburg_norm<R: Real>(
    phi: &YoungFunction<R>,
    f: &SampledFunction<R>,
    mu: &DiscreteMeasure<R>,
    tol: R,
) -> Result<LuxemburgNorm<R>> {
    check_aligned(f, mu)?;
    if !(tol > R::zero()) {
        return Err(Error::InvalidParameter("luxemburg tolerance must be positive".into()));
    }
    Ok(luxemburg_from_samples(phi, &f.0, &mu.weights, tol))
}

/// Luxemburg norm of raw samples; `weights` must be positive and aligned.
pub(crate) fn luxemburg_from_samples<R: Real>(
    phi: &YoungFunction<R>,
    values: &[R],
    weights: &[R],
    tol: R,
) -> LuxemburgNorm<R> {
    let max_abs = values.iter().fold(R::zero(), |m, v| m.max(v.abs()));
    if max_abs == R::zero() {
        return LuxemburgNorm { norm: R::zero(), modular_at_norm: R::zero(), iterations: 0 };
    }
    let rho = |alpha: R| scaled_modular(phi, values, weights, alpha);
    let mut iterations = 0usize;
    let two = R::lit(2.0);
    let alpha0 = {
        let a = max_abs * pairwise_sum(weights);
        if a > R::zero() && a.is_finite() {
            a
        } else {
            max_abs
        }
    };
    let (mut lo, mut hi);
    let first = rho(alpha0);
    iterations += 1;
    if first <= R::one() {
        hi = alpha0;
        lo = alpha0 / two;
        loop {
            iterations += 1;
            if rho(lo) > R::one() || lo < R::min_positive_value() {
                break;
            }
            hi = lo;
            lo = lo / two;
        }
    } else {
        lo = alpha0;
        hi = alpha0 * two;
        loop {
            iterations += 1;
            if rho(hi) <= R::one() || !hi.is_finite() {
                break;
            }
            lo = hi;
            hi = hi * two;
        }
    }
    while hi - lo > tol * hi {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if rho(mid) <= R::one() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    LuxemburgNorm { norm: hi, modular_at_norm: rho(hi), iterations: iterations + 1 }
}

/// Two-sided comparison of `‖f‖_φ` and `‖f‖_{λφ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport<R> {
    pub norm_phi: R,
    pub norm_scaled: R,
    pub k: R,
    pub pass: bool,
}

/// Checks `K⁻¹‖f‖_φ − tol ≤ ‖f‖_{λφ} ≤ K‖f‖_φ + tol` with `K = max{λ, 1/λ}`.
pub fn check_scaling_equivalence<R: Real>(
    phi: &YoungFunction<R>,
    lambda: R,
    f: &SampledFunction<R>,
    mu: &DiscreteMeasure<R>,
    tol: R,
) -> Result<ScalingReport<R>> {
    let scaled = phi.scale(lambda)?;
    let lux_tol = R::lit(DEFAULT_TOL).max(R::epsilon() * R::lit(8.0));
    let a = luxemburg_norm(phi, f, mu, lux_tol)?.norm;
    let b = luxemburg_norm(&scaled, f, mu, lux_tol)?.norm;
    let k = lambda.max(lambda.recip());
    let pass = a / k - tol <= b && b <= k * a + tol;
    Ok(ScalingReport { norm_phi: a, norm_scaled: b, k, pass })
}

/// Both sides of `‖fg‖₁ ≤ 2‖f‖_φ‖g‖_{φ*}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderReport<R> {
    pub lhs: R,
    /// `None` when `‖g‖_{φ*}` is infinite (the inequality then holds vacuously).
    pub rhs: Option<R>,
    pub pass: bool,
}

/// Hölder inequality with factor 2, with `φ*` from the numerical conjugate.
pub fn check_holder<R: Real>(
    phi: &YoungFunction<R>,
    f: &SampledFunction<R>,
    g: &SampledFunction<R>,
    mu: &DiscreteMeasure<R>,
    conj: ConjugateOptions<R>,
    tol: R,
) -> Result<HolderReport<R>> {
    check_aligned(f, mu)?;
    check_aligned(g, mu)?;
    let terms: Vec<R> = f.0.iter().zip(&g.0).zip(&mu.weights).map(|((&a, &b), &w)| w * (a * b).abs()).collect();
    let lhs = pairwise_sum(&terms);
    let lux_tol = R::lit(DEFAULT_TOL).max(R::epsilon() * R::lit(8.0));
    let nf = luxemburg_norm(phi, f, mu, lux_tol)?.norm;
    let conjugate = phi.conjugate(conj);
    let ng = luxemburg_norm(&conjugate, g, mu, lux_tol)?.norm;
    if !ng.is_finite() {
        return Ok(HolderReport { lhs, rhs: None, pass: true });
    }
    let rhs = R::lit(2.0) * nf * ng;
    Ok(HolderReport { lhs, rhs: Some(rhs), pass: lhs <= rhs + tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(p: f64) -> YoungFunction<f64> {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn modular_examples() {
        let c2 = DiscreteMeasure::counting(2);
        assert_eq!(modular(&p(2.0), &vec![1.0, 2.0].into(), &c2).unwrap(), 5.0);
        assert_eq!(modular(&YoungFunction::exp(), &vec![0.0, 0.0].into(), &c2).unwrap(), 0.0);
        let w = DiscreteMeasure::new(vec![0.5, 1.0]).unwrap();
        assert_eq!(modular(&p(1.0), &vec![2.0, 3.0].into(), &w).unwrap(), 4.0);
        assert_eq!(
            modular(&p(1.0), &vec![2.0].into(), &w),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn measure_rejects_nonpositive_weights() {
        assert!(DiscreteMeasure::new(vec![1.0, 0.0]).is_err());
        assert!(DiscreteMeasure::new(vec![-1.0]).is_err());
    }

    #[test]
    fn luxemburg_examples() {
        let c2 = DiscreteMeasure::counting(2);
        let n = luxemburg_norm(&p(2.0), &vec![3.0, 4.0].into(), &c2, 1e-12).unwrap();
        assert!((n.norm - 5.0).abs() <= 5e-12);
        assert!(n.modular_at_norm <= 1.0);
        let z = luxemburg_norm(&p(2.0), &vec![0.0, 0.0].into(), &c2, 1e-12).unwrap();
        assert_eq!(z.norm, 0.0);
        // e^{1/α} − 1 = 1  ⇒  α = 1/ln 2
        let e = luxemburg_norm(&YoungFunction::exp(), &vec![1.0].into(), &DiscreteMeasure::counting(1), 1e-12)
            .unwrap();
        assert!((e.norm - 1.0 / 2f64.ln()).abs() <= 1e-11);
    }

    #[test]
    fn luxemburg_in_f32() {
        let phi = YoungFunction::<f32>::power(2.0).unwrap();
        let n = luxemburg_norm(&phi, &vec![3.0f32, 4.0].into(), &DiscreteMeasure::counting(2), 1e-6).unwrap();
        assert!((n.norm - 5.0).abs() < 1e-4);
    }

    #[test]
    fn scaling_examples() {
        let c2 = DiscreteMeasure::counting(2);
        let r = check_scaling_equivalence(&p(2.0), 1.0, &vec![3.0, 4.0].into(), &c2, 1e-9).unwrap();
        assert_eq!(r.norm_phi, r.norm_scaled);
        assert!(r.pass);
        let r = check_scaling_equivalence(&p(2.0), 4.0, &vec![3.0, 4.0].into(), &c2, 1e-9).unwrap();
        // (4 Σ f²)^{1/2} ... ρ_{4φ}(f/α) = 4·25/α² = 1 ⇒ α = 10
        assert!((r.norm_scaled - 10.0).abs() < 1e-10, "{r:?}");
        assert_eq!(r.k, 4.0);
        assert!(r.pass);
        let r = check_scaling_equivalence(&p(2.0), 0.25, &vec![3.0, 4.0].into(), &c2, 1e-9).unwrap();
        assert!((r.norm_scaled - 2.5).abs() < 1e-10, "{r:?}");
        assert!(r.pass);
        let r = check_scaling_equivalence(&p(2.0), 3.0, &vec![0.0, 0.0].into(), &c2, 1e-9).unwrap();
        assert_eq!((r.norm_phi, r.norm_scaled), (0.0, 0.0));
        assert!(r.pass);
    }

    #[test]
    fn holder_examples() {
        let c2 = DiscreteMeasure::counting(2);
        let opts = ConjugateOptions::default();
        let r = check_holder(&p(2.0), &vec![0.0, 0.0].into(), &vec![1.0, -2.0].into(), &c2, opts, 1e-8).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.pass);
        let r = check_holder(&p(2.0), &vec![1.0, 1.0].into(), &vec![1.0, 1.0].into(), &c2, opts, 1e-8).unwrap();
        assert_eq!(r.lhs, 2.0);
        // φ₂*(s) = s²/4: ‖g‖_{φ*} = ‖g‖₂ / 2 = √2/2, so rhs = 2·√2·√2/2 = 2.
        let rhs = r.rhs.unwrap();
        assert!((rhs - 2.0).abs() < 1e-9, "{rhs}");
        assert!(r.pass);
        // φ₁* is 0 on [0,1] and ∞ beyond; ‖g‖_{φ*} = max|g| is finite here.
        let r = check_holder(&p(1.0), &vec![1.0, 2.0].into(), &vec![0.5, -1.0].into(), &c2, opts, 1e-8).unwrap();
        assert!(r.pass);
    }
}
