//! Verification suites and machine-readable reports.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bicomplex::{
    betti_pairing, constants_norm_ratios, d_double_prime_ratio, glue_norm_ratios, identity_residuals, PartitionOfUnity,
    StarCover,
};
use crate::cohomology::LinearComplex;
use crate::error::{Error, Result};
use crate::forms::{de_rham, stokes_residual, MeshForm, DEFAULT_QUAD_DEGREE};
use crate::mesh::Mesh;
use crate::orlicz::{check_holder, check_scaling_equivalence, luxemburg_norm, modular, DiscreteMeasure, SampledFunction, DEFAULT_TOL};
use crate::poincare::{monomial_corpus, random_polynomial_forms, sample_points, verify_boundedness, verify_homotopy_identity, AnalyticForm, BallQuadrature};
use crate::simplicial::{coboundary_norm_estimate, Cochain};
use crate::young::{ConjugateOptions, YoungFunction};
use crate::BigRational;

pub const SCHEMA_VERSION: u32 = 1;

/// Mesh used by the mesh-based suites when none is given.
pub const DEFAULT_MESH: &str = "sphere:oct";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Orlicz,
    Simplicial,
    Poincare,
    Bicomplex,
    Endtoend,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Orlicz, Suite::Simplicial, Suite::Poincare, Suite::Bicomplex, Suite::Endtoend];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orlicz => "orlicz",
            Suite::Simplicial => "simplicial",
            Suite::Poincare => "poincare",
            Suite::Bicomplex => "bicomplex",
            Suite::Endtoend => "endtoend",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::spec(name, "unknown suite; expected orlicz, simplicial, poincare, bicomplex or endtoend"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub mesh: Option<String>,
    pub phi: String,
    pub degree: Option<usize>,
    pub dim: Option<usize>,
    pub refine: usize,
    pub seed: u64,
    /// Record wall-clock time (makes the report run-dependent).
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { mesh: None, phi: "power:p=2".into(), degree: None, dim: None, refine: 0, seed: 0, timing: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `pass ⇔ value ≤ tolerance` (a NaN value fails).
    pub fn new(id: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { id: id.into(), value, tolerance, pass: value <= tolerance }
    }

    /// Distance of `value` outside `[lo, hi]`.
    pub fn within(id: impl Into<String>, value: f64, lo: f64, hi: f64, tolerance: f64) -> Self {
        let gap = if value.is_nan() { f64::NAN } else { (lo - value).max(value - hi).max(0.0) };
        Self::new(id, gap, tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub mesh: Option<String>,
    pub phi: String,
    pub degree: Option<usize>,
    pub dim: Option<usize>,
    pub refine: usize,
    pub quadrature: BTreeMap<String, usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: Suite,
    pub environment: Environment,
    pub checks: Vec<Check>,
    pub details: Value,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
    }

    /// One line per check: `id,value,tolerance,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,value,tolerance,pass\n");
        for c in &self.checks {
            out.push_str(&format!("{},{:e},{:e},{}\n", c.id, c.value, c.tolerance, c.pass));
        }
        out
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Builder {
    checks: Vec<Check>,
    details: serde_json::Map<String, Value>,
    quadrature: BTreeMap<String, usize>,
}

impl Builder {
    fn new() -> Self {
        Self { checks: Vec::new(), details: serde_json::Map::new(), quadrature: BTreeMap::new() }
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.into(), value);
    }
}

/// Runs a suite. Usage problems (unknown mesh or φ spec, bad degree) are
/// errors; numerical failures become failing checks.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let phi = YoungFunction::<f64>::parse(&config.phi)?;
    let mut b = Builder::new();
    let mut mesh_name = None;
    match suite {
        Suite::Orlicz => orlicz_suite(&phi, config, &mut b)?,
        Suite::Poincare => poincare_suite(&phi, config, &mut b)?,
        Suite::Simplicial | Suite::Bicomplex | Suite::Endtoend => {
            let name = config.mesh.clone().unwrap_or_else(|| DEFAULT_MESH.to_string());
            let mesh = load_mesh(&name)?;
            mesh_name = Some(name);
            if let Some(k) = config.degree {
                if k > mesh.dim() {
                    return Err(Error::InvalidDegree { degree: k, allowed: format!("0..={}", mesh.dim()) });
                }
            }
            b.detail("bilipschitz", json!(mesh.bilipschitz()));
            match suite {
                Suite::Simplicial => simplicial_suite(&phi, &mesh, config, &mut b)?,
                Suite::Bicomplex => bicomplex_suite(&phi, &mesh, config, &mut b)?,
                _ => endtoend_suite(&phi, &mesh, config, &mut b)?,
            }
        }
    }
    let pass = b.checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        suite,
        environment: Environment {
            mesh: mesh_name,
            phi: phi.spec(),
            degree: config.degree,
            dim: config.dim,
            refine: config.refine,
            quadrature: b.quadrature,
            seed: config.seed,
        },
        checks: b.checks,
        details: Value::Object(b.details),
        pass,
        timing_ms: config.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// A generator name (`torus:m=6`) or a path to a JSON mesh file.
pub fn load_mesh(spec: &str) -> Result<Mesh<f64>> {
    let path = std::path::Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        return Mesh::from_json(name, &text);
    }
    Mesh::from_name(spec)
}

fn random_vector(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
    let n = rng.gen_range(1..=max_len);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn orlicz_suite(phi: &YoungFunction<f64>, config: &SuiteConfig, b: &mut Builder) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let trials = 100 << config.refine.min(3);
    let mut modular_gap = 0.0f64;
    let mut lp_gap = 0.0f64;
    let mut homogeneity = 0.0f64;
    for _ in 0..trials {
        let v = random_vector(&mut rng, 100);
        let mu = DiscreteMeasure::counting(v.len());
        let f = SampledFunction(v.clone());
        let norm = luxemburg_norm(phi, &f, &mu, DEFAULT_TOL)?;
        if norm.norm > 0.0 {
            let scaled = SampledFunction(v.iter().map(|x| x / norm.norm).collect());
            modular_gap = modular_gap.max((modular(phi, &scaled, &mu)? - 1.0).abs());
            let c = rng.gen_range(0.1..10.0);
            let cf = SampledFunction(v.iter().map(|x| c * x).collect());
            let other = luxemburg_norm(phi, &cf, &mu, DEFAULT_TOL)?.norm;
            homogeneity = homogeneity.max((other - c * norm.norm).abs() / (c * norm.norm));
        }
        if let Some(p) = phi.power_exponent() {
            let exact = v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
            if exact > 0.0 {
                lp_gap = lp_gap.max((norm.norm - exact).abs() / exact);
            }
        }
    }
    b.check(Check::new("modular_at_norm", modular_gap, 1e-9));
    b.check(Check::new("homogeneity", homogeneity, 1e-9));
    if phi.power_exponent().is_some() {
        b.check(Check::new("lp_identity", lp_gap, 1e-10));
    }
    let mut scaling = 0.0f64;
    for lambda in [0.5, 2.0, 10.0] {
        for _ in 0..trials / 2 {
            let v = random_vector(&mut rng, 100);
            let mu = DiscreteMeasure::counting(v.len());
            let r = check_scaling_equivalence(phi, lambda, &SampledFunction(v), &mu, 1e-9)?;
            let gap = (r.norm_phi / r.k - r.norm_scaled).max(r.norm_scaled - r.k * r.norm_phi).max(0.0);
            scaling = scaling.max(gap);
        }
    }
    b.check(Check::new("scaling_equivalence", scaling, 1e-9));
    let mut holder = 0.0f64;
    let mut vacuous = 0usize;
    for _ in 0..trials {
        let f = random_vector(&mut rng, 50);
        let g: Vec<f64> = (0..f.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mu = DiscreteMeasure::counting(f.len());
        let r = check_holder(phi, &SampledFunction(f), &SampledFunction(g), &mu, ConjugateOptions::default(), 1e-8)?;
        match r.rhs {
            Some(rhs) => holder = holder.max(r.lhs - rhs),
            None => vacuous += 1,
        }
    }
    b.check(Check::new("holder_factor_two", holder.max(0.0), 1e-8));
    b.detail("trials", json!(trials));
    b.detail("holder_vacuous", json!(vacuous));
    Ok(())
}

fn simplicial_suite(phi: &YoungFunction<f64>, mesh: &Mesh<f64>, config: &SuiteConfig, b: &mut Builder) -> Result<()> {
    let complex = mesh.complex();
    let n = complex.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let quad = DEFAULT_QUAD_DEGREE + 2 * config.refine;
    b.quadrature.insert("simplex_degree".into(), quad);
    let mut dd_exact = 0.0f64;
    let mut whitney_dd = 0.0f64;
    let mut whitney_property = 0.0f64;
    let mut stokes = 0.0f64;
    let mut norms = Vec::new();
    for k in 0..=n {
        let values = (0..complex.count(k)).map(|_| BigRational::from_integer(rng.gen_range(-9i64..=9).into())).collect();
        let theta = Cochain::from_values(complex, k, values)?;
        if k + 2 <= n {
            dd_exact = dd_exact.max(theta.coboundary(complex).coboundary(complex).max_abs());
            let w = MeshForm::whitney_interpolate(complex, &theta)?.to_piecewise(mesh);
            whitney_dd = whitney_dd.max(w.d()?.d()?.max_abs_coeff());
        }
        let theta = Cochain::<f64>::random(complex, k, &mut rng);
        let w = MeshForm::whitney_interpolate(complex, &theta)?.to_piecewise(mesh);
        let back = de_rham(mesh, &w, quad)?;
        for (a, c) in back.values().iter().zip(theta.values()) {
            whitney_property = whitney_property.max((a - c).abs());
        }
        if k < n {
            for i in 0..complex.count(k + 1) {
                stokes = stokes.max(stokes_residual(mesh, &w, i, quad)?);
            }
            norms.push(coboundary_norm_estimate(phi, complex, k, 20, config.seed));
        }
    }
    b.check(Check::new("delta_delta_exact", dd_exact, 0.0));
    b.check(Check::new("whitney_dd_exact", whitney_dd, 0.0));
    b.check(Check::new("whitney_property", whitney_property, 1e-9));
    b.check(Check::new("stokes", stokes, 1e-9));
    let lc_exact = LinearComplex::<BigRational>::from_simplicial(complex);
    let lc = LinearComplex::<f64>::from_simplicial(complex);
    let mut betti = Vec::new();
    let mut mismatch = 0usize;
    for k in 0..=n {
        let e = lc_exact.cohomology_dim_exact(k)?;
        mismatch += e.abs_diff(lc.cohomology_dim(k)?);
        betti.push(e);
    }
    let chi: i64 = betti.iter().enumerate().map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
    b.check(Check::new("betti_exact_vs_float", mismatch as f64, 0.0));
    b.check(Check::new("euler_characteristic", (chi - lc.euler_characteristic()).abs() as f64, 0.0));
    b.check(Check::new("coboundary_norm_finite", if norms.iter().all(|v| v.is_finite()) { 0.0 } else { 1.0 }, 0.0));
    b.detail("betti", json!(betti));
    b.detail("coboundary_norm_estimates", json!(norms));
    b.detail("stats", serde_json::to_value(mesh.geometry_stats()).expect("stats serialize"));
    Ok(())
}

fn poincare_suite(phi: &YoungFunction<f64>, config: &SuiteConfig, b: &mut Builder) -> Result<()> {
    let n = config.dim.unwrap_or(2);
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let degrees: Vec<usize> = match config.degree {
        Some(k) if k > n => return Err(Error::InvalidDegree { degree: k, allowed: format!("0..={n}") }),
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };
    let coarse = BallQuadrature::<f64>::new(n, config.refine)?;
    let fine = BallQuadrature::<f64>::new(n, config.refine + 1)?;
    let (xs, ts) = coarse.node_counts();
    b.quadrature.insert("half_ball_nodes".into(), xs);
    b.quadrature.insert("t_nodes".into(), ts);
    let points = sample_points::<f64>(n, 50, 0.95, config.seed);
    let corpus: Vec<AnalyticForm<f64>> = if degrees == [0] {
        scalar_corpus(n)?
    } else {
        monomial_corpus(n, 4)?.into_iter().filter(|f| degrees.contains(&f.degree())).collect()
    };
    let (mut worst, mut worst_fine) = (0.0f64, 0.0f64);
    let mut worst_label = String::new();
    for f in &corpus {
        let r = verify_homotopy_identity(f, &coarse, &points)?.max_residual;
        if r > worst {
            worst = r;
            worst_label = f.label().to_string();
        }
        worst_fine = worst_fine.max(verify_homotopy_identity(f, &fine, &points)?.max_residual);
    }
    b.check(Check::new("homotopy_identity", worst, 1e-3));
    // ≥ 4× decrease, encoded as 4 / decrease ≤ 1; exact identities count as converged
    let decrease = if worst_fine > 0.0 { worst / worst_fine } else { f64::INFINITY };
    let converged = worst < 1e-12;
    b.check(Check::new("refinement_decrease", if converged { 0.0 } else { 4.0 / decrease }, 1.0));
    let mut ratios = Vec::new();
    let mut stable = 0.0f64;
    for &k in &degrees {
        let forms = random_polynomial_forms::<f64>(n, k, 4, 3, config.seed)?;
        let r = verify_boundedness(phi, &forms, &coarse)?;
        stable = stable.max(r.relative_change);
        if r.contradiction {
            stable = f64::INFINITY;
        }
        ratios.push(json!({"degree": k, "ratio": r.ratio, "ratio_refined": r.ratio_refined}));
    }
    b.check(Check::new("boundedness_stability", stable, 0.1));
    b.detail("corpus_size", json!(corpus.len()));
    b.detail("worst_form", json!(worst_label));
    b.detail("residual_refined", json!(worst_fine));
    b.detail("decrease_factor", json!(decrease));
    b.detail("boundedness", json!(ratios));
    Ok(())
}

fn scalar_corpus(n: usize) -> Result<Vec<AnalyticForm<f64>>> {
    use crate::poly::{Poly, PolyForm};
    let mut out = Vec::new();
    for d in 0..=4u8 {
        for i in 0..n {
            let mut e = [0u8; 4];
            e[i] = d;
            e[(i + 1) % n] += 4 - d;
            let p = Poly::monomial(n, e, 1.0);
            out.push(AnalyticForm::from_poly(&PolyForm::function(p), format!("y^{:?}", &e[..n]))?);
        }
    }
    Ok(out)
}

fn bicomplex_suite(phi: &YoungFunction<f64>, mesh: &Mesh<f64>, config: &SuiteConfig, b: &mut Builder) -> Result<()> {
    let n = mesh.dim();
    let k = config.degree.unwrap_or(1.min(n));
    let cover = StarCover::new(mesh, config.refine)?;
    let finer = StarCover::new(mesh, config.refine + 1)?;
    b.quadrature.insert("simplex_degree".into(), cover.rule().degree());
    let ids = identity_residuals(mesh, &cover, config.seed)?;
    b.check(Check::new("dd_prime", ids.dd_prime, 1e-12));
    b.check(Check::new("dd_double_prime", ids.dd_double_prime, 1e-12));
    b.check(Check::new("anticommute", ids.anticommute, 1e-12));
    b.check(Check::new("p_identity", ids.p, 1e-12));
    b.check(Check::new("h_identity", ids.h, 1e-3));
    let m = 0;
    let r0 = d_double_prime_ratio(phi, mesh, &cover, k, m, 5, config.seed)?;
    let r1 = d_double_prime_ratio(phi, mesh, &finer, k, m, 5, config.seed)?;
    let change = if r0 > 0.0 { (r1 - r0).abs() / r0 } else { r1 };
    b.check(Check::new("d_double_prime_ratio_stable", if r0.is_finite() { change } else { f64::INFINITY }, 0.1));
    let e = glue_norm_ratios(phi, mesh, &cover, k, 20, config.seed)?;
    let bound = n as f64 + 1.0;
    b.check(Check::within("glue_ratio_lower", e[0], 1.0, bound, 1e-9));
    b.check(Check::within("glue_ratio_upper", e[1], 1.0, bound, 1e-9));
    let fm = k;
    let v = cover.volume_bound(fm);
    let f = constants_norm_ratios(phi, mesh, &cover, fm, 20, config.seed)?;
    b.check(Check::within("constants_ratio_lower", f[0], v.powi(-2), v * v, 1e-9));
    b.check(Check::within("constants_ratio_upper", f[1], v.powi(-2), v * v, 1e-9));
    let z = betti_pairing(mesh, &cover, k, 3, config.seed)?;
    b.check(Check::new("zigzag_closed", z.closed_residual, 1e-8));
    b.check(Check::new("zigzag_rank", z.rank.abs_diff(z.expected) as f64, 0.0));
    b.check(Check::new("zigzag_exact_pairing", z.exact_pairing_max, 1e-6));
    let pou = PartitionOfUnity::new(mesh);
    b.detail(
        "identity_residuals",
        json!({"dd": ids.dd_prime.max(ids.dd_double_prime), "anticommute": ids.anticommute, "H": ids.h, "P": ids.p}),
    );
    b.detail("norm_ratios", json!({"E": e, "F": f, "V": v, "d_double_prime": [r0, r1]}));
    b.detail(
        "zigzag",
        json!({
            "closed_residual": z.closed_residual,
            "betti": {k.to_string(): z.rank},
            "pairing_matrix": z.pairing_matrix,
            "de_rham_gap": z.de_rham_gap,
        }),
    );
    b.detail("partition_gradient_bound", json!(pou.gradient_bound()));
    Ok(())
}

fn endtoend_suite(phi: &YoungFunction<f64>, mesh: &Mesh<f64>, config: &SuiteConfig, b: &mut Builder) -> Result<()> {
    let n = mesh.dim();
    let cover = StarCover::new(mesh, config.refine)?;
    b.quadrature.insert("simplex_degree".into(), cover.rule().degree());
    let degrees: Vec<usize> = match config.degree {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let mut betti = BTreeMap::new();
    let mut matrices = BTreeMap::new();
    let mut closed = 0.0f64;
    let mut exact = 0.0f64;
    let mut rank_gap = 0usize;
    let mut class_gap = 0.0f64;
    for &k in &degrees {
        let z = betti_pairing(mesh, &cover, k, 3, config.seed)?;
        closed = closed.max(z.closed_residual);
        exact = exact.max(z.exact_pairing_max);
        rank_gap += z.rank.abs_diff(z.expected);
        class_gap = class_gap.max(z.de_rham_gap);
        betti.insert(k.to_string(), z.rank);
        matrices.insert(k.to_string(), z.pairing_matrix);
    }
    b.check(Check::new("betti_match", rank_gap as f64, 0.0));
    b.check(Check::new("zigzag_closed", closed, 1e-8));
    b.check(Check::new("exact_inputs_exact", exact, 1e-6));
    b.check(Check::new("de_rham_class", class_gap, 1e-6));
    // norm of the zigzag on the harmonic inputs, for the record
    let mut norm_ratios = Vec::new();
    let complex = mesh.complex();
    let lc = LinearComplex::<f64>::from_simplicial(complex);
    for &k in &degrees {
        for h in lc.harmonic_basis(k)? {
            let c = Cochain::from_values(complex, k, h)?;
            let form = MeshForm::whitney_interpolate(complex, &c)?.to_piecewise(mesh);
            let z = crate::bicomplex::zigzag(&form, mesh, &cover)?;
            let lhs = z.cochain.norm(phi);
            let rhs = crate::forms::graph_norm(phi, mesh, &form, cover.rule(), DEFAULT_TOL)?;
            norm_ratios.push(json!({"degree": k, "ratio": lhs / rhs}));
        }
    }
    b.detail("betti", json!(betti));
    b.detail("pairing_matrices", json!(matrices));
    b.detail("zigzag_norm_ratios", json!(norm_ratios));
    Ok(())
}

/// A long-format table of Luxemburg norms: one row per `(φ, target)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormTable {
    pub columns: Vec<String>,
    pub rows: Vec<NormRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub phi: String,
    pub target: usize,
    pub norm: f64,
    pub modular_at_norm: f64,
}

impl NormTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{:e},{:e}\n", r.phi, r.target, r.norm, r.modular_at_norm));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }
}

/// Norms of every target under every φ, in input order.
pub fn emit_norm_table(phis: &[YoungFunction<f64>], targets: &[Vec<f64>], weights: Option<&[f64]>) -> Result<NormTable> {
    let mut rows = Vec::with_capacity(phis.len() * targets.len());
    for phi in phis {
        for (i, t) in targets.iter().enumerate() {
            let mu = match weights {
                Some(w) => DiscreteMeasure::new(w.to_vec())?,
                None => DiscreteMeasure::counting(t.len()),
            };
            let r = luxemburg_norm(phi, &SampledFunction(t.clone()), &mu, DEFAULT_TOL)?;
            rows.push(NormRow { phi: phi.spec(), target: i, norm: r.norm, modular_at_norm: r.modular_at_norm });
        }
    }
    Ok(NormTable { columns: ["phi", "target", "norm", "modular_at_norm"].map(String::from).to_vec(), rows })
}
