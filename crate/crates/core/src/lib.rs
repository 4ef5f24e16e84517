//! Exact arithmetic for Chebyshev radical extensions: polynomial
//! discriminants, Newton-polygon indices, field discriminants and integral
//! bases of `ℚ(θ)` with `T_ℓⁿ(θ) = t`.

pub mod chebyshev;
pub mod error;
pub mod factor;
pub mod montes;
pub mod padic;
pub mod radical;
pub mod poly;
mod serde_big;

pub use chebyshev::{build_instance, ChebInstance, Irreducibility};
pub use error::{Error, Result};
pub use montes::{
    dedekind_test, index_at_prime, ind_phi, principal_polygon, DedekindResult, IndexOptions, IndexResult, NewtonPolygon,
    Side,
};
pub use factor::{factor_mod_p, orbit_graph, predict_factor_shape, FactorShape, OrbitGraph};
pub use padic::{FactorOptions, FactoredInt, Squarefree, Valuation};
pub use poly::{discriminant_oracle, phi_development, ExtElem, ExtField, IntPoly, ModPoly, PhiDevelopment};
pub use radical::{
    analyze, field_disc, integral_basis, monogenicity, poly_disc, AnalysisOptions, AnalysisReport, IndexMethod, Monogenic,
    PrimeIndex,
};
