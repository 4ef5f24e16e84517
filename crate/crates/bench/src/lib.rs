//! Shared fixtures for the criterion benches.

use chebrad_core::{build_instance, ChebInstance};
use num_bigint::BigInt;

pub const T0: i64 = 451_251;

/// `T_ℓⁿ(x) − t₀`.
pub fn example(ell: u64, n: u32) -> ChebInstance {
    build_instance(ell, n, &BigInt::from(T0)).expect("valid instance")
}
