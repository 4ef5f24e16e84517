use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PrimeIndex;
use crate::chebyshev::ChebInstance;
use crate::error::{Error, Result};
use crate::padic::{factor, FactorOptions, FactoredInt};
use crate::poly::discriminant_oracle;

/// Numeric expansions above this many digits are omitted.
pub const NUMERIC_DIGIT_CAP: u64 = 10_000;

/// Oracle comparison runs up to this degree.
const ORACLE_DEGREE: usize = 27;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "crate::serde_big")]
    pub base: BigInt,
    pub exponent: i64,
}

/// `Π base^exponent`, with the expansion when it is small enough.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredValue {
    pub terms: Vec<Term>,
    /// Decimal digits of the absolute value, estimated from the terms.
    pub digits: u64,
    #[serde(with = "crate::serde_big::opt")]
    pub numeric: Option<BigInt>,
}

impl StructuredValue {
    pub fn new(terms: Vec<Term>) -> StructuredValue {
        let terms: Vec<Term> = terms.into_iter().filter(|t| t.exponent != 0 && !t.base.is_one()).collect();
        let digits = terms
            .iter()
            .map(|t| t.exponent as f64 * t.base.abs().to_f64().unwrap_or(f64::MAX).log10())
            .sum::<f64>()
            .max(0.0)
            .ceil() as u64
            + 1;
        let numeric = (digits <= NUMERIC_DIGIT_CAP).then(|| evaluate(&terms)).flatten();
        StructuredValue { terms, digits, numeric }
    }

    /// Exponent attached to `base`, if present.
    pub fn exponent_of(&self, base: &BigInt) -> Option<i64> {
        self.terms.iter().find(|t| &t.base == base).map(|t| t.exponent)
    }
}

/// Exact product, or `None` when negative exponents leave a fraction.
fn evaluate(terms: &[Term]) -> Option<BigInt> {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in terms {
        let k = t.exponent.unsigned_abs() as u32;
        if t.exponent > 0 {
            num *= num_traits::Pow::pow(&t.base, k);
        } else {
            den *= num_traits::Pow::pow(&t.base, k);
        }
    }
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    r.is_zero().then_some(q)
}

impl fmt::Display for StructuredValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let b = if t.base.is_negative() { format!("({})", t.base) } else { t.base.to_string() };
                if t.exponent == 1 {
                    b
                } else {
                    format!("{b}^{}", t.exponent)
                }
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDisc {
    /// `ℓ^{nℓⁿ}·(4 − t²)^{(ℓⁿ−1)/2}`.
    pub value: StructuredValue,
    pub t2_minus_4: FactoredInt,
    /// Equality with the resultant discriminant, for small degrees.
    pub oracle_verified: Option<bool>,
}

/// `D(Φ) = ℓ^{nℓⁿ}·(4 − t²)^{(ℓⁿ−1)/2}`.
pub fn poly_disc(inst: &ChebInstance, opts: &FactorOptions) -> Result<PolyDisc> {
    let d = inst.degree() as i64;
    let four_minus = -inst.t2_minus_4();
    if four_minus.is_zero() {
        return Err(Error::invalid("t = ±2 makes the discriminant vanish"));
    }
    let value = StructuredValue::new(vec![
        Term { base: BigInt::from(inst.ell), exponent: inst.n as i64 * d },
        Term { base: four_minus, exponent: (d - 1) / 2 },
    ]);
    let t2_minus_4 = factor(&inst.t2_minus_4(), opts)?;
    let oracle_verified = if inst.degree() <= ORACLE_DEGREE {
        let oracle = discriminant_oracle(&inst.phi_poly)?;
        if value.numeric.as_ref() != Some(&oracle) {
            return Err(Error::TheoremViolation(format!("D(Φ) = {oracle} disagrees with the closed form")));
        }
        Some(true)
    } else {
        None
    };
    Ok(PolyDisc { value, t2_minus_4, oracle_verified })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeExponent {
    #[serde(with = "crate::serde_big")]
    pub prime: BigInt,
    /// Range of `ν_p(Δ)`; equal ends once the index is exact.
    pub min: u64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDisc {
    /// `ℓ^{nℓⁿ − 2·ind_ℓ}·(4 − t²)^{(ℓⁿ−1)/2}·Π_{p ≠ ℓ} p^{−2·ind_p}`, with the
    /// lower index bound where the index is undetermined.
    pub value: StructuredValue,
    pub sign: i8,
    /// `|Δ|` by primes, when `t² − 4` is completely factored.
    pub prime_exponents: Vec<PrimeExponent>,
    #[serde(with = "big_vec")]
    pub undetermined: Vec<BigInt>,
    pub complete: bool,
}

mod big_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|b| b.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Assembles `Δ(K) = D(Φ)/ind²` from the per-prime table.
pub fn field_disc(inst: &ChebInstance, poly: &PolyDisc, table: &[PrimeIndex]) -> Result<FieldDisc> {
    let ell = BigInt::from(inst.ell);
    let d = inst.degree() as i64;
    let b = (d - 1) / 2;
    let ind_ell = table.iter().find(|e| e.prime == ell).map_or(0, |e| e.lower);
    let mut terms = vec![
        Term { base: ell.clone(), exponent: inst.n as i64 * d - 2 * ind_ell as i64 },
        Term { base: -inst.t2_minus_4(), exponent: b },
    ];
    for e in table.iter().filter(|e| e.prime != ell && e.lower > 0) {
        terms.push(Term { base: e.prime.clone(), exponent: -2 * e.lower as i64 });
    }
    let value = StructuredValue::new(terms);
    let undetermined: Vec<BigInt> = table.iter().filter(|e| !e.exact).map(|e| e.prime.clone()).collect();
    let four_minus = -inst.t2_minus_4();
    let sign = if four_minus.sign() == Sign::Minus && b % 2 == 1 { -1 } else { 1 };

    let mut prime_exponents = Vec::new();
    if poly.t2_minus_4.is_complete() {
        let mut nus: Vec<(BigInt, u64)> =
            poly.t2_minus_4.factors.iter().map(|(p, &e)| (BigInt::from(p.clone()), e as u64 * b as u64)).collect();
        match nus.iter_mut().find(|(p, _)| *p == ell) {
            Some(entry) => entry.1 += inst.n as u64 * d as u64,
            None => nus.push((ell.clone(), inst.n as u64 * d as u64)),
        }
        nus.sort();
        for (p, nu) in nus {
            let (lo, hi) = table.iter().find(|e| e.prime == p).map_or((0, 0), |e| (e.lower, e.upper));
            if 2 * hi > nu {
                return Err(Error::Internal(format!("index bound at {p} exceeds the discriminant")));
            }
            prime_exponents.push(PrimeExponent { prime: p, min: nu - 2 * hi, max: nu - 2 * lo });
        }
    }
    let complete = undetermined.is_empty() && poly.t2_minus_4.is_complete();
    if complete {
        if let Some(n) = &value.numeric {
            // D = Δ·ind²
            let mut ind = BigInt::one();
            for e in table {
                ind *= num_traits::Pow::pow(&e.prime, e.lower as u32);
            }
            if poly.value.numeric.as_ref().is_some_and(|dv| *dv != n * &ind * &ind) {
                return Err(Error::TheoremViolation("D(Φ) ≠ Δ(K)·ind²".into()));
            }
            let mut abs = BigInt::one();
            for pe in &prime_exponents {
                abs *= num_traits::Pow::pow(&pe.prime, pe.min as u32);
            }
            if abs != n.abs() || (n.sign() == Sign::Minus) != (sign < 0) {
                return Err(Error::Internal("prime exponents do not reassemble Δ(K)".into()));
            }
        }
    }
    Ok(FieldDisc { value, sign, prime_exponents, undetermined, complete })
}
