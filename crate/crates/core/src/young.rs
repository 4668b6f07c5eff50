//! Young functions: even convex `φ: R → [0, ∞)` vanishing only at the origin.
//!
//! Constructors cover the power family `|t|^p`, the power-log family
//! `|t|^p / log(e + 1/|t|)^κ`, the exponential `e^{|t|} − 1`, positive
//! multiples `λφ`, and the numerical convex conjugate `φ*`. Every function is
//! addressable by a textual spec such as `power:p=2` or
//! `scale:lambda=2,inner=power:p=2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Search parameters for the numerical convex conjugate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjugateOptions<R> {
    /// Initial right end of the search interval `[0, t_max]`.
    pub t_max: R,
    /// Number of grid points on the search interval (at least 2).
    pub grid_n: usize,
    /// Objective values above this, still increasing at the right end, are
    /// reported as divergent.
    pub divergence_threshold: R,
}

impl<R: Real> Default for ConjugateOptions<R> {
    fn default() -> Self {
        Self { t_max: R::lit(16.0), grid_n: 64, divergence_threshold: R::lit(1e12) }
    }
}

/// Value of the convex conjugate: finite, or a tagged divergence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConjugateValue<R> {
    Finite(R),
    Divergent,
}

impl<R: Real> ConjugateValue<R> {
    /// Finite value, or `+∞` for a divergence.
    pub fn to_real(self) -> R {
        match self {
            ConjugateValue::Finite(v) => v,
            ConjugateValue::Divergent => R::infinity(),
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, ConjugateValue::Divergent)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind<R> {
    Power { p: R },
    PowerLog { p: R, kappa: R },
    Exp,
    Scaled { lambda: R, inner: Box<YoungFunction<R>> },
    Conjugate { inner: Box<YoungFunction<R>>, options: ConjugateOptions<R> },
}

/// An immutable Young function.
#[derive(Clone, Debug, PartialEq)]
pub struct YoungFunction<R> {
    kind: Kind<R>,
}

impl<R: Real> YoungFunction<R> {
    /// `φ_p(t) = |t|^p`, `p ≥ 1`.
    pub fn power(p: R) -> Result<Self> {
        if !(p >= R::one()) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("power exponent p must be >= 1, got {p:?}")));
        }
        Ok(Self { kind: Kind::Power { p } })
    }

    /// `φ_{p,κ}(t) = |t|^p / log(e + |t|^{-1})^κ`, with `φ(0) = 0`.
    pub fn power_log(p: R, kappa: R) -> Result<Self> {
        if !(p >= R::one()) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("power-log exponent p must be >= 1, got {p:?}")));
        }
        if !(kappa >= R::zero()) || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("power-log kappa must be >= 0, got {kappa:?}")));
        }
        Ok(Self { kind: Kind::PowerLog { p, kappa } })
    }

    /// `φ(t) = e^{|t|} − 1`.
    pub fn exp() -> Self {
        Self { kind: Kind::Exp }
    }

    /// `λφ` for `λ > 0`.
    pub fn scale(&self, lambda: R) -> Result<Self> {
        if !(lambda > R::zero()) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("scale factor must be > 0, got {lambda:?}")));
        }
        Ok(Self { kind: Kind::Scaled { lambda, inner: Box::new(self.clone()) } })
    }

    /// The complementary function `φ*(s) = sup_{t ≥ 0} (s t − φ(t))`, evaluated
    /// numerically on demand. Divergent values evaluate to `+∞`.
    pub fn conjugate(&self, options: ConjugateOptions<R>) -> Self {
        Self { kind: Kind::Conjugate { inner: Box::new(self.clone()), options } }
    }

    pub fn eval(&self, t: R) -> R {
        let a = t.abs();
        match &self.kind {
            Kind::Power { p } => pow_abs(a, *p),
            Kind::PowerLog { p, kappa } => {
                if a == R::zero() {
                    return R::zero();
                }
                let num = pow_abs(a, *p);
                if *kappa == R::zero() {
                    return num;
                }
                let e = R::one().exp();
                let log = (e + a.recip()).ln();
                num / log.powf(*kappa)
            }
            Kind::Exp => a.exp_m1(),
            Kind::Scaled { lambda, inner } => *lambda * inner.eval(a),
            Kind::Conjugate { inner, options } => complementary(inner, a, options).to_real(),
        }
    }

    /// Short human-readable label.
    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Power { .. } => "power".into(),
            Kind::PowerLog { .. } => "powerlog".into(),
            Kind::Exp => "exp".into(),
            Kind::Scaled { .. } => "scale".into(),
            Kind::Conjugate { .. } => "conjugate".into(),
        }
    }

    /// Named real parameters of the outermost constructor.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match &self.kind {
            Kind::Power { p } => vec![("p", p.as_f64())],
            Kind::PowerLog { p, kappa } => vec![("p", p.as_f64()), ("kappa", kappa.as_f64())],
            Kind::Exp => vec![],
            Kind::Scaled { lambda, .. } => vec![("lambda", lambda.as_f64())],
            Kind::Conjugate { options, .. } => vec![
                ("t_max", options.t_max.as_f64()),
                ("grid_n", options.grid_n as f64),
            ],
        }
    }

    /// The exponent `p` when `self` is a pure power function.
    pub fn power_exponent(&self) -> Option<R> {
        match &self.kind {
            Kind::Power { p } => Some(*p),
            _ => None,
        }
    }

    /// Canonical textual spec; [`YoungFunction::parse`] inverts it.
    pub fn spec(&self) -> String {
        match &self.kind {
            Kind::Power { p } => format!("power:p={}", p.as_f64()),
            Kind::PowerLog { p, kappa } => {
                format!("powerlog:p={},kappa={}", p.as_f64(), kappa.as_f64())
            }
            Kind::Exp => "exp".into(),
            Kind::Scaled { lambda, inner } => {
                format!("scale:lambda={},inner={}", lambda.as_f64(), inner.spec())
            }
            Kind::Conjugate { inner, options } => format!(
                "conj:t_max={},grid_n={},inner={}",
                options.t_max.as_f64(),
                options.grid_n,
                inner.spec()
            ),
        }
    }

    /// Parses `power:p=2`, `powerlog:p=2,kappa=1`, `exp`,
    /// `scale:lambda=2,inner=<spec>` and `conj:[t_max=..,grid_n=..,]inner=<spec>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h.trim(), r.trim()),
            None => (spec, ""),
        };
        // `inner=` swallows the remainder so nested specs may contain commas.
        let (own, inner) = match rest.find("inner=") {
            Some(pos) => (rest[..pos].trim_end_matches(','), Some(&rest[pos + "inner=".len()..])),
            None => (rest, None),
        };
        let mut params: Vec<(&str, f64)> = Vec::new();
        for item in own.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::spec(spec, format!("expected key=value, got {item:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::spec(spec, format!("not a number: {v:?}")))?;
            params.push((k.trim(), v));
        }
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|&(_, v)| v);
        let require = |key: &str| get(key).ok_or_else(|| Error::spec(spec, format!("missing {key}")));
        let check_keys = |allowed: &[&str]| -> Result<()> {
            for (k, _) in &params {
                if !allowed.contains(k) {
                    return Err(Error::spec(spec, format!("unknown parameter {k:?}")));
                }
            }
            Ok(())
        };
        let lit = |v: f64| R::from_f64(v).ok_or_else(|| Error::spec(spec, "value out of range"));
        match head {
            "power" => {
                check_keys(&["p"])?;
                Self::power(lit(require("p")?)?)
            }
            "powerlog" => {
                check_keys(&["p", "kappa"])?;
                Self::power_log(lit(require("p")?)?, lit(require("kappa")?)?)
            }
            "exp" => {
                if !rest.is_empty() {
                    return Err(Error::spec(spec, "exp takes no parameters"));
                }
                Ok(Self::exp())
            }
            "scale" => {
                check_keys(&["lambda"])?;
                let inner = inner.ok_or_else(|| Error::spec(spec, "missing inner"))?;
                Self::parse(inner)?.scale(lit(require("lambda")?)?)
            }
            "conj" => {
                check_keys(&["t_max", "grid_n"])?;
                let inner = inner.ok_or_else(|| Error::spec(spec, "missing inner"))?;
                let mut options = ConjugateOptions::default();
                if let Some(t) = get("t_max") {
                    options.t_max = lit(t)?;
                }
                if let Some(n) = get("grid_n") {
                    options.grid_n = n as usize;
                }
                Ok(Self::parse(inner)?.conjugate(options))
            }
            other => Err(Error::spec(spec, format!("unknown Young function {other:?}"))),
        }
    }

    /// Checks the defining properties on a symmetric sample grid of `[-t_max, t_max]`:
    /// vanishing exactly at 0, evenness, monotonicity on `t ≥ 0` and midpoint
    /// convexity, each up to `tol` (scaled by the magnitude of the values).
    pub fn validate(&self, t_max: R, grid_n: usize, tol: R) -> Result<()> {
        if self.eval(R::zero()) != R::zero() {
            return Err(Error::InvalidParameter(format!("{}: φ(0) != 0", self.spec())));
        }
        let n = grid_n.max(2);
        let grid: Vec<R> = (0..=n).map(|i| t_max * R::lit(i as f64 / n as f64)).collect();
        let fail = |what: &str, t: R| {
            Err(Error::InvalidParameter(format!("{}: {what} fails at t={}", self.spec(), t.as_f64())))
        };
        let mut prev = R::zero();
        for &t in grid.iter().skip(1) {
            let v = self.eval(t);
            let slack = tol * (R::one() + v.abs());
            if !(v > R::zero()) {
                return fail("positivity", t);
            }
            if (self.eval(-t) - v).abs() > slack {
                return fail("evenness", t);
            }
            if v + slack < prev {
                return fail("monotonicity", t);
            }
            prev = v;
        }
        let two = R::lit(2.0);
        let full: Vec<R> = grid.iter().rev().map(|&t| -t).chain(grid.iter().skip(1).copied()).collect();
        for (i, &s) in full.iter().enumerate() {
            for &t in full.iter().skip(i + 1).step_by(3) {
                let lhs = self.eval((s + t) / two);
                let rhs = (self.eval(s) + self.eval(t)) / two;
                if lhs > rhs + tol * (R::one() + rhs.abs()) {
                    return fail("midpoint convexity", (s + t) / two);
                }
            }
        }
        Ok(())
    }
}

impl<R: Real> fmt::Display for YoungFunction<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

fn pow_abs<R: Real>(a: R, p: R) -> R {
    if p == R::one() {
        a
    } else if p == R::lit(2.0) {
        a * a
    } else if p.fract() == R::zero() && p < R::lit(64.0) {
        a.powi(p.to_i32().unwrap_or(1))
    } else {
        a.powf(p)
    }
}

/// Numerical convex conjugate `sup_{t ≥ 0}(s t − φ(t))` for `s ≥ 0`.
///
/// A uniform grid on `[0, t_max]` locates the maximizer, then golden-section
/// search refines it on the neighbouring cells (the objective is concave). When
/// the maximizer sits at the right end the interval is doubled, up to 64 times;
/// once the still-increasing objective exceeds `divergence_threshold` the value
/// is reported as [`ConjugateValue::Divergent`].
pub fn complementary<R: Real>(phi: &YoungFunction<R>, s: R, options: &ConjugateOptions<R>) -> ConjugateValue<R> {
    let s = s.abs();
    if s == R::zero() {
        return ConjugateValue::Finite(R::zero());
    }
    let objective = |t: R| s * t - phi.eval(t);
    let n = options.grid_n.max(2);
    let mut t_max = if options.t_max > R::zero() { options.t_max } else { R::one() };
    for _ in 0..64 {
        let step = t_max / R::lit((n - 1) as f64);
        let mut best = 0usize;
        let mut best_val = R::zero();
        for i in 1..n {
            let v = objective(step * R::lit(i as f64));
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        if best + 1 < n {
            let lo = if best == 0 { R::zero() } else { step * R::lit((best - 1) as f64) };
            let hi = step * R::lit((best + 1) as f64);
            let refined = golden_max(&objective, lo, hi);
            return ConjugateValue::Finite(refined.max(best_val));
        }
        if !best_val.is_finite() || best_val > options.divergence_threshold {
            return ConjugateValue::Divergent;
        }
        t_max = t_max + t_max;
    }
    ConjugateValue::Divergent
}

fn golden_max<R: Real>(f: &impl Fn(R) -> R, mut a: R, mut b: R) -> R {
    let inv_phi = R::lit(0.618_033_988_749_894_8);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= R::epsilon() * R::lit(4.0) * (R::one() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f((a + b) / R::lit(2.0)))
}

/// Empirical Δ₂ diagnostic: `max φ(2t)/φ(t)` over a uniform grid of `[t_lo, t_hi]`.
pub fn delta2_margin<R: Real>(phi: &YoungFunction<R>, t_lo: R, t_hi: R, grid_n: usize) -> Result<R> {
    if !(t_lo > R::zero() && t_lo < t_hi) {
        return Err(Error::InvalidParameter("delta2_margin needs 0 < t_lo < t_hi".into()));
    }
    let n = grid_n.max(2);
    let two = R::lit(2.0);
    let mut margin = R::zero();
    for i in 0..n {
        let t = t_lo + (t_hi - t_lo) * R::lit(i as f64 / (n - 1) as f64);
        margin = margin.max(phi.eval(two * t) / phi.eval(t));
    }
    Ok(margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn power_examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        assert_eq!(p2.eval(3.0), 9.0);
        assert_eq!(p2.eval(0.0), 0.0);
        assert_eq!(YoungFunction::power(1.0).unwrap().eval(-4.0), 4.0);
        assert!(matches!(YoungFunction::power(0.5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn power_log_examples() {
        assert_eq!(YoungFunction::power_log(1.0, 0.0).unwrap().eval(5.0), 5.0);
        let f = YoungFunction::power_log(2.0, 1.0).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        // 1 / ln(e + 1), evaluated independently
        let expected = 1.0 / (1.0f64.exp() + 1.0).ln();
        assert!(close(f.eval(1.0), expected, 1e-15));
        assert!(close(f.eval(1.0), 0.761463, 1e-6));
        assert!(YoungFunction::power_log(2.0, -1.0).is_err());
    }

    #[test]
    fn exp_examples() {
        let f = YoungFunction::<f64>::exp();
        assert_eq!(f.eval(0.0), 0.0);
        assert!(close(f.eval(1.0), std::f64::consts::E - 1.0, 1e-15));
        assert_eq!(f.eval(-1.0), f.eval(1.0));
    }

    #[test]
    fn scale_examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        assert_eq!(p2.scale(2.0).unwrap().eval(3.0), 18.0);
        assert_eq!(p2.scale(1.0).unwrap().eval(1.7), p2.eval(1.7));
        assert_eq!(YoungFunction::power(1.0).unwrap().scale(0.5).unwrap().eval(4.0), 2.0);
        assert!(p2.scale(0.0).is_err());
        assert!(p2.scale(-1.0).is_err());
    }

    #[test]
    fn complementary_examples() {
        let opts = ConjugateOptions::default();
        let p2 = YoungFunction::power(2.0).unwrap();
        // grid oracle: brute-force max of 2t - t² on a fine grid
        let oracle = (0..=200_000).map(|i| i as f64 * 1e-5).map(|t| 2.0 * t - t * t).fold(f64::MIN, f64::max);
        let v = complementary(&p2, 2.0, &opts).to_real();
        assert!(close(v, oracle, 1e-9));
        assert!(close(v, 1.0, 1e-12));
        assert_eq!(complementary(&YoungFunction::<f64>::exp(), 0.0, &opts), ConjugateValue::Finite(0.0));
        let p1 = YoungFunction::power(1.0).unwrap();
        assert_eq!(complementary(&p1, 0.5, &opts), ConjugateValue::Finite(0.0));
        assert!(complementary(&p1, 1.5, &opts).is_divergent());
    }

    #[test]
    fn complementary_matches_closed_form_for_powers() {
        let opts = ConjugateOptions::default();
        for &p in &[1.5f64, 2.0, 3.0, 4.0] {
            let phi = YoungFunction::power(p).unwrap();
            let q = p / (p - 1.0);
            for i in 0..=40 {
                let s = 0.1 * (100.0f64).powf(i as f64 / 40.0);
                let closed = (p - 1.0) * p.powf(-q) * s.powf(q);
                let v = complementary(&phi, s, &opts).to_real();
                assert!((v - closed).abs() <= 1e-6 * closed, "p={p} s={s} v={v} closed={closed}");
            }
        }
    }

    #[test]
    fn delta2_examples() {
        let p2 = YoungFunction::power(2.0).unwrap();
        assert!(close(delta2_margin(&p2, 0.1, 10.0, 50).unwrap(), 4.0, 1e-14));
        let p1 = YoungFunction::power(1.0).unwrap();
        assert!(close(delta2_margin(&p1, 0.1, 10.0, 50).unwrap(), 2.0, 1e-14));
        let e = YoungFunction::<f64>::exp();
        let at20 = (40.0f64.exp() - 1.0) / (20.0f64.exp() - 1.0);
        let m = delta2_margin(&e, 0.5, 20.0, 40).unwrap();
        assert!(m > 1e6);
        assert!(close(m, at20, 1e-12));
        assert!(delta2_margin(&e, 2.0, 1.0, 10).is_err());
    }

    #[test]
    fn constructed_functions_are_young() {
        let specs = [
            "power:p=1",
            "power:p=1.5",
            "power:p=4",
            "powerlog:p=2,kappa=1",
            "powerlog:p=1.5,kappa=2",
            "powerlog:p=1,kappa=1",
            "exp",
            "scale:lambda=3,inner=powerlog:p=2,kappa=1",
        ];
        for s in specs {
            let phi = YoungFunction::<f64>::parse(s).unwrap();
            phi.validate(5.0, 80, 1e-12).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
    }

    #[test]
    fn spec_round_trip_and_errors() {
        for s in ["power:p=2", "powerlog:p=2,kappa=1", "exp", "scale:lambda=2,inner=power:p=2"] {
            let phi = YoungFunction::<f64>::parse(s).unwrap();
            assert_eq!(phi.spec(), s);
            assert_eq!(YoungFunction::<f64>::parse(&phi.spec()).unwrap(), phi);
        }
        assert!(YoungFunction::<f64>::parse("powr:p=2").is_err());
        assert!(YoungFunction::<f64>::parse("power").is_err());
        assert!(YoungFunction::<f64>::parse("power:q=2").is_err());
        assert!(YoungFunction::<f64>::parse("scale:lambda=2").is_err());
        let nested = YoungFunction::<f64>::parse("scale:lambda=2,inner=scale:lambda=3,inner=power:p=1").unwrap();
        assert_eq!(nested.eval(1.0), 6.0);
    }

    #[test]
    fn conjugate_as_young_function() {
        let phi = YoungFunction::power(2.0).unwrap().conjugate(ConjugateOptions::default());
        assert!(close(phi.eval(2.0), 1.0, 1e-12));
        assert_eq!(phi.eval(0.0), 0.0);
        let f32_phi = YoungFunction::<f32>::parse("power:p=3").unwrap();
        assert_eq!(f32_phi.eval(2.0f32), 8.0f32);
    }
}
