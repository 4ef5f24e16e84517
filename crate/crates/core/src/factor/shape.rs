use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{is_prime_u64, valuation};
use crate::poly::ModPoly;

/// `(μ, h)`: `μ` least with `ℓ | p^{2μ} − 1` and `h = ν_ℓ(p^{2μ} − 1)`.
pub fn mu_h(ell: u64, p: u64) -> Result<(u32, u32)> {
    if !is_prime_u64(ell) || !is_prime_u64(p) {
        return Err(Error::invalid("mu_h expects two primes"));
    }
    if ell == p {
        return Err(Error::invalid("mu_h needs p different from ell"));
    }
    let p2 = (p as u128 * p as u128 % ell as u128) as u64;
    let mut acc = p2;
    let mut mu = 1u32;
    while acc != 1 {
        acc = (acc as u128 * p2 as u128 % ell as u128) as u64;
        mu += 1;
    }
    debug_assert!((ell - 1) % mu as u64 == 0);
    let big = BigInt::from(BigUint::from(p).pow(2 * mu) - BigUint::one());
    let h = valuation(&big, ell).finite().unwrap_or(0) as u32;
    Ok((mu, h))
}

/// One block of a factorization pattern: `count` distinct irreducibles of
/// the given degree, each occurring with `multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShapePart {
    pub degree: usize,
    pub multiplicity: u32,
    pub count: usize,
}

/// Factorization pattern of `Φ mod p`, excluding the simple linear factor
/// `x − t̄` which is recorded separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorShape {
    pub linear_root: Option<u64>,
    pub parts: Vec<ShapePart>,
}

impl FactorShape {
    /// Groups an actual factorization; a simple factor `x − root` is split
    /// off as the linear marker.
    pub fn from_factors(factors: &[(ModPoly, u32)], root: Option<u64>) -> FactorShape {
        let mut linear_root = None;
        let mut counts: BTreeMap<(usize, u32), usize> = BTreeMap::new();
        for (g, mult) in factors {
            let d = g.degree().unwrap_or(0);
            if let Some(r) = root {
                if linear_root.is_none() && d == 1 && *mult == 1 && g.eval(r) == 0 {
                    linear_root = Some(r);
                    continue;
                }
            }
            *counts.entry((d, *mult)).or_default() += 1;
        }
        let parts = counts
            .into_iter()
            .map(|((degree, multiplicity), count)| ShapePart { degree, multiplicity, count })
            .collect();
        FactorShape { linear_root, parts }
    }

    pub fn total_degree(&self) -> usize {
        self.parts.iter().map(|s| s.degree * s.multiplicity as usize * s.count).sum::<usize>()
            + usize::from(self.linear_root.is_some())
    }
}

/// Predicted factorization of `T_ℓⁿ(x) − t mod p` when `t ≡ ±2 mod p²`.
pub fn predict_factor_shape(ell: u64, n: u32, p: u64, t: &BigInt) -> Result<FactorShape> {
    if p == 2 || p == ell || !is_prime_u64(p) {
        return Err(Error::invalid("p must be an odd prime different from ell"));
    }
    if ell == 2 || !is_prime_u64(ell) || n == 0 {
        return Err(Error::invalid("ell must be an odd prime and n positive"));
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    let r = t.mod_floor(&p2);
    let s = if r == BigInt::from(2) % &p2 {
        2u64
    } else if r == (&p2 - BigInt::from(2)) % &p2 {
        p - 2
    } else {
        return Err(Error::invalid("t must be congruent to ±2 modulo p^2"));
    };
    let (mu, h) = mu_h(ell, p)?;
    let mu = mu as usize;
    let ell_u = ell as usize;
    let pow = |k: u32| -> Result<usize> {
        ell_u.checked_pow(k).ok_or_else(|| Error::ResourceLimit("degree overflow".into()))
    };
    let mut parts = Vec::new();
    if n <= h {
        parts.push(ShapePart { degree: mu, multiplicity: 2, count: (pow(n)? - 1) / (2 * mu) });
    } else {
        parts.push(ShapePart { degree: mu, multiplicity: 2, count: (pow(h)? - 1) / (2 * mu) });
        let upper = (pow(h)? - pow(h - 1)?) / (2 * mu);
        for k in 1..=(n - h) {
            parts.push(ShapePart { degree: mu * pow(k)?, multiplicity: 2, count: upper });
        }
    }
    parts.retain(|s| s.count > 0);
    parts.sort();
    let shape = FactorShape { linear_root: Some(s % p), parts };
    debug_assert_eq!(shape.total_degree(), pow(n)?);
    Ok(shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_h_examples() {
        assert_eq!(mu_h(5, 7).unwrap(), (2, 2));
        assert_eq!(mu_h(3, 2).unwrap(), (1, 1));
        assert_eq!(mu_h(5, 11).unwrap(), (1, 1));
        assert!(mu_h(5, 5).is_err());
    }

    #[test]
    fn lifting_the_exponent() {
        // ν_ℓ(p^{2m} − 1) = ν_ℓ(p^{2μ} − 1) + ν_ℓ(m) whenever μ | m
        for ell in [3u64, 5, 7] {
            for p in crate::padic::primes_up_to(50) {
                if p == ell {
                    continue;
                }
                let (mu, h) = mu_h(ell, p).unwrap();
                let mut m = mu;
                while m <= 3 * mu * (ell * ell) as u32 {
                    let big = BigInt::from(BigUint::from(p).pow(2 * m) - BigUint::one());
                    let lhs = valuation(&big, ell).finite().unwrap();
                    let rhs = h as u64 + crate::padic::valuation_u64(m as u64, ell).finite().unwrap();
                    assert_eq!(lhs, rhs, "ell={ell} p={p} m={m}");
                    m += mu;
                }
            }
        }
    }

    #[test]
    fn predicted_shapes() {
        let t = BigInt::from(2);
        let s1 = predict_factor_shape(5, 1, 7, &t).unwrap();
        assert_eq!(s1.parts, vec![ShapePart { degree: 2, multiplicity: 2, count: 1 }]);
        let s2 = predict_factor_shape(5, 2, 7, &t).unwrap();
        assert_eq!(s2.parts, vec![ShapePart { degree: 2, multiplicity: 2, count: 6 }]);
        let s3 = predict_factor_shape(5, 3, 7, &t).unwrap();
        assert_eq!(
            s3.parts,
            vec![
                ShapePart { degree: 2, multiplicity: 2, count: 6 },
                ShapePart { degree: 10, multiplicity: 2, count: 5 }
            ]
        );
        assert_eq!(s3.total_degree(), 125);
        assert_eq!(s3.linear_root, Some(2));
    }

    #[test]
    fn bad_preconditions() {
        assert!(predict_factor_shape(5, 1, 7, &BigInt::from(9)).is_err());
        assert!(predict_factor_shape(5, 1, 2, &BigInt::from(2)).is_err());
        assert!(predict_factor_shape(5, 1, 5, &BigInt::from(2)).is_err());
    }
}
