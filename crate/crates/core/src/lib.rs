//! Orlicz norms, simplicial ℓ^φ-cochains, Whitney forms on small meshes, the
//! cone homotopy on the unit ball and the Čech-de Rham bicomplex over the
//! open-star cover of a triangulation.
//!
//! Numerical code is generic over [`scalar::Real`] (`f32`, `f64`); the exact
//! algebra ([`poly`], cochains, ranks) is generic over [`scalar::Field`],
//! which also covers `BigRational`.

pub mod bicomplex;
pub mod cohomology;
pub mod error;
pub mod forms;
pub mod mesh;
pub mod orlicz;
pub mod poincare;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod simplicial;
pub mod young;

pub use error::{Error, Result};
pub use num_rational::BigRational;

pub type Young64 = young::YoungFunction<f64>;
pub type Young32 = young::YoungFunction<f32>;
pub type Cochain64 = simplicial::Cochain<f64>;
pub type CochainQ = simplicial::Cochain<BigRational>;
pub type LinearComplex64 = cohomology::LinearComplex<f64>;
pub type LinearComplexQ = cohomology::LinearComplex<BigRational>;
pub type Poly64 = poly::Poly<f64>;
pub type PolyQ = poly::Poly<BigRational>;
pub type PolyForm64 = poly::PolyForm<f64>;
pub type PolyFormQ = poly::PolyForm<BigRational>;
pub type Mesh64 = mesh::Mesh<f64>;
pub type PiecewiseForm64 = forms::PiecewiseForm<f64>;
pub type MeshForm64 = forms::MeshForm<f64>;
pub type AnalyticForm64 = poincare::AnalyticForm<f64>;
pub type BallQuadrature64 = poincare::BallQuadrature<f64>;
pub type BicomplexElement64 = bicomplex::BicomplexElement<f64>;
pub type BicomplexElementQ = bicomplex::BicomplexElement<BigRational>;
pub type StarCover64 = bicomplex::StarCover<f64>;
