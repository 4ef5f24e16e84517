use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{big_pow, ell_phi, is_pm2_mod, nu_ell_phi_t, squarefree_status, AnalysisOptions};
use crate::chebyshev::ChebInstance;
use crate::error::{Error, Result};
use crate::montes::principal_polygon;
use crate::padic::Squarefree;
use crate::poly::{phi_development, resultant, IntPoly};

/// Characteristic polynomials are verified up to this degree.
pub const BASIS_CHECK_DEGREE: usize = 81;

/// Above this degree only the generators are verified, not the whole
/// collection.
const COLLECTION_CHECK_DEGREE: usize = 27;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    /// Numerator as a polynomial in θ.
    pub numerator: IntPoly,
    pub prime: u64,
    pub exponent: u32,
    #[serde(with = "crate::serde_big")]
    pub denominator: BigInt,
    /// Index `j` of the quotient `q_j` the numerator comes from.
    pub quotient_index: Option<usize>,
    /// Verified integral characteristic polynomial.
    pub char_poly: Option<IntPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    PowerBasis,
    Generators,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralBasis {
    pub kind: BasisKind,
    /// Power basis, or the extra generators over `ℤ[θ]`.
    pub generators: Vec<BasisElement>,
    /// Every `q_j(θ)/ℓ^{⌊y_j⌋}` with a nontrivial denominator.
    pub collection: Vec<BasisElement>,
    /// Sum of denominator exponents over the collection.
    pub collection_exponent: u64,
    pub verified: bool,
}

/// Characteristic polynomial of `num(θ)/den` where `f(θ) = 0`, from
/// `Res_x(f, den·y − num(x))` interpolated at `y = 0..deg f`.
pub fn char_poly(f: &IntPoly, num: &IntPoly, den: &BigInt) -> Result<Vec<BigRational>> {
    let d = f.degree().ok_or_else(|| Error::invalid("zero polynomial"))?;
    if !f.is_monic() || d == 0 {
        return Err(Error::invalid("characteristic polynomial needs a monic non-constant modulus"));
    }
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let num = num.divmod_monic(f)?.1;
    let mut values = Vec::with_capacity(d + 1);
    for y in 0..=d {
        let g = &IntPoly::constant(den * BigInt::from(y)) - &num;
        let r = if g.is_zero() { BigInt::zero() } else { resultant(f, &g)? };
        values.push(BigRational::from_integer(r));
    }
    // Newton divided differences on nodes 0..d
    let mut dd = values;
    for k in 1..=d {
        for i in (k..=d).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(k));
        }
    }
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for k in (0..=d).rev() {
        // coeffs = coeffs·(y − k) + dd[k]
        let mut next = vec![BigRational::zero(); d + 1];
        for i in 0..d {
            next[i + 1] += &coeffs[i];
        }
        for i in 0..=d {
            next[i] -= &coeffs[i] * BigRational::from_integer(BigInt::from(k));
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    let scale = BigRational::from_integer(num_traits::Pow::pow(den, d as u32));
    Ok(coeffs.into_iter().map(|c| c / &scale).collect())
}

fn integral_char_poly(f: &IntPoly, num: &IntPoly, den: &BigInt) -> Result<Option<IntPoly>> {
    let cp = char_poly(f, num, den)?;
    if cp.iter().all(|c| c.is_integer()) {
        Ok(Some(IntPoly::new(cp.into_iter().map(|c| c.to_integer()).collect())))
    } else {
        Ok(None)
    }
}

fn verified(f: &IntPoly, mut e: BasisElement) -> Result<BasisElement> {
    match integral_char_poly(f, &e.numerator, &e.denominator)? {
        Some(cp) => {
            e.char_poly = Some(cp);
            Ok(e)
        }
        None => Err(Error::TheoremViolation(format!(
            "({})/{} is not integral",
            e.numerator, e.denominator
        ))),
    }
}

/// Integral basis data at ℓ: `ℤ[θ, q_{ℓ^{n−1}}(θ)/ℓ, …, q_{ℓ^{n−v}}(θ)/ℓ^v]`
/// with `v = min(ν_ℓ(Φ(t)) − 1, n)`, or the power basis when monogenic.
pub fn integral_basis(inst: &ChebInstance, opts: &AnalysisOptions) -> Result<IntegralBasis> {
    let ell = inst.ell;
    let f = &inst.phi_poly;
    let d = inst.degree();
    for (name, a) in [("t - 2", &inst.t - 2), ("t + 2", &inst.t + 2)] {
        match squarefree_status(&a, opts.factor.bound)? {
            Squarefree::Yes => {}
            Squarefree::No => return Err(Error::OutOfTheory(format!("{name} is not squarefree"))),
            Squarefree::Unknown => return Err(Error::OutOfTheory(format!("squarefreeness of {name} is unknown"))),
        }
    }
    if is_pm2_mod(&inst.t, &BigInt::from(ell * ell)) {
        return Err(Error::OutOfTheory(format!("t = ±2 mod {ell}^2")));
    }
    let v = nu_ell_phi_t(inst).finite();
    if v.is_some_and(|v| v <= 1) {
        let generators = (0..d)
            .map(|i| BasisElement {
                numerator: IntPoly::monomial(BigInt::one(), i),
                prime: ell,
                exponent: 0,
                denominator: BigInt::one(),
                quotient_index: None,
                char_poly: None,
            })
            .collect();
        return Ok(IntegralBasis {
            kind: BasisKind::PowerBasis,
            generators,
            collection: Vec::new(),
            collection_exponent: 0,
            verified: true,
        });
    }
    let n = inst.n;
    let k = v.map_or(n as u64, |v| (v - 1).min(n as u64)) as u32;
    let dev = phi_development(f, &ell_phi(inst), ell)?;
    let polygon = principal_polygon(&dev)?;
    let element = |j: usize, e: u32| -> Result<BasisElement> {
        let numerator = dev
            .quotient(j)
            .cloned()
            .ok_or_else(|| Error::Internal(format!("no quotient q_{j}")))?;
        Ok(BasisElement {
            numerator,
            prime: ell,
            exponent: e,
            denominator: big_pow(ell, e as u64),
            quotient_index: Some(j),
            char_poly: None,
        })
    };
    let mut generators = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let j = ell.pow(n - i) as usize;
        let y = polygon.ordinate(j as u64).map(|y| y.floor().to_integer());
        if y != Some(i as i64) {
            return Err(Error::TheoremViolation(format!("polygon height over {j} is {y:?}, expected {i}")));
        }
        generators.push(element(j, i)?);
    }
    let mut collection = Vec::new();
    for (j, h) in polygon.column_heights() {
        if h > 0 {
            collection.push(element(j as usize, h as u32)?);
        }
    }
    let collection_exponent = collection.iter().map(|e| e.exponent as u64).sum();
    let mut checked = false;
    if d <= BASIS_CHECK_DEGREE {
        generators = generators.into_iter().map(|e| verified(f, e)).collect::<Result<_>>()?;
        checked = true;
    }
    if d <= COLLECTION_CHECK_DEGREE {
        collection = collection.into_iter().map(|e| verified(f, e)).collect::<Result<_>>()?;
    }
    Ok(IntegralBasis { kind: BasisKind::Generators, generators, collection, collection_exponent, verified: checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn char_poly_of_cube_root_element() {
        // θ³ = 3θ + 9, β = (θ² − 3)/3 satisfies β³ + β² − 3 = 0
        let f = p(&[-9, -3, 0, 1]);
        let cp = char_poly(&f, &p(&[-3, 0, 1]), &BigInt::from(3)).unwrap();
        let ints: Vec<BigInt> = cp.iter().map(|c| c.to_integer()).collect();
        assert!(cp.iter().all(|c| c.is_integer()));
        assert_eq!(ints, [-3, 0, 1, 1].map(BigInt::from));
    }

    #[test]
    fn char_poly_of_theta_is_f() {
        let f = p(&[7, -2, 5, 0, 1]);
        let cp = char_poly(&f, &IntPoly::x(), &BigInt::one()).unwrap();
        let ints: Vec<BigInt> = cp.iter().map(|c| c.to_integer()).collect();
        assert_eq!(IntPoly::new(ints), f);
    }

    #[test]
    fn non_integral_element_detected() {
        // θ/2 with θ² = 3
        let cp = char_poly(&p(&[-3, 0, 1]), &IntPoly::x(), &BigInt::from(2)).unwrap();
        assert!(cp.iter().any(|c| !c.is_integer()));
        assert!(cp[0].numer().abs() == BigInt::from(3));
    }
}
