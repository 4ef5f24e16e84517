//! Dense polynomial arithmetic over ℤ, 𝔽_p and 𝔽_{p^m}.

mod develop;
mod ext;
mod int_poly;
mod mod_poly;
mod resultant;

pub use develop::{phi_development, PhiDevelopment};
pub use ext::{ExtElem, ExtField, ExtPoly};
pub use int_poly::IntPoly;
pub use mod_poly::ModPoly;
pub use resultant::{discriminant_oracle, resultant};

pub(crate) use mod_poly::inv_mod;
