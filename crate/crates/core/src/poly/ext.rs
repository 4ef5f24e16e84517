use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::ModPoly;

/// The finite field 𝔽_p[x]/(m(x)) for an irreducible monic `m`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    modulus: ModPoly,
}

impl ExtField {
    /// Checks irreducibility of `modulus` before accepting it.
    pub fn new(modulus: ModPoly) -> Result<Arc<ExtField>> {
        let modulus = modulus.monic();
        if modulus.degree().unwrap_or(0) < 1 {
            return Err(Error::invalid("field modulus must have positive degree"));
        }
        if !crate::factor::is_irreducible(&modulus)? {
            return Err(Error::invalid(format!("{modulus} is reducible over F_{}", modulus.modulus())));
        }
        Ok(Arc::new(ExtField { modulus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus.modulus()
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn modulus(&self) -> &ModPoly {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree() as u32)
    }
}

/// An element of an [`ExtField`], stored as its reduced representative.
#[derive(Clone, Debug)]
pub struct ExtElem {
    field: Arc<ExtField>,
    rep: ModPoly,
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.rep == other.rep
    }
}

impl Eq for ExtElem {}

impl ExtElem {
    pub fn new(field: &Arc<ExtField>, rep: &ModPoly) -> Result<ExtElem> {
        if rep.modulus() != field.characteristic() {
            return Err(Error::invalid("representative lives over a different prime"));
        }
        Ok(ExtElem { field: field.clone(), rep: rep.rem(field.modulus())? })
    }

    pub fn zero(field: &Arc<ExtField>) -> ExtElem {
        ExtElem { field: field.clone(), rep: ModPoly::zero(field.characteristic()) }
    }

    pub fn one(field: &Arc<ExtField>) -> ExtElem {
        ExtElem { field: field.clone(), rep: ModPoly::one(field.characteristic()) }
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn rep(&self) -> &ModPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    fn check(&self, other: &ExtElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::invalid("operands belong to different fields"))
        }
    }

    fn wrap(&self, rep: ModPoly) -> ExtElem {
        ExtElem { field: self.field.clone(), rep }
    }

    pub fn add(&self, other: &ExtElem) -> Result<ExtElem> {
        self.check(other)?;
        Ok(self.wrap(self.rep.add(&other.rep)?))
    }

    pub fn sub(&self, other: &ExtElem) -> Result<ExtElem> {
        self.check(other)?;
        Ok(self.wrap(self.rep.sub(&other.rep)?))
    }

    pub fn neg(&self) -> ExtElem {
        self.wrap(self.rep.neg())
    }

    pub fn mul(&self, other: &ExtElem) -> Result<ExtElem> {
        self.check(other)?;
        Ok(self.wrap(self.rep.mul_mod_poly(&other.rep, self.field.modulus())?))
    }

    pub fn scale(&self, k: u64) -> ExtElem {
        self.wrap(self.rep.scale(k))
    }

    pub fn inv(&self) -> Result<ExtElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.rep.ext_gcd(self.field.modulus())?;
        if !g.is_one() {
            return Err(Error::Internal("non-unit in a field".into()));
        }
        Ok(self.wrap(s.rem(self.field.modulus())?))
    }

    pub fn pow(&self, e: &BigUint) -> Result<ExtElem> {
        Ok(self.wrap(self.rep.pow_mod(e, self.field.modulus())?))
    }

    /// The Frobenius map `a ↦ a^p`.
    pub fn frobenius(&self) -> Result<ExtElem> {
        self.pow(&BigUint::from(self.field.characteristic()))
    }

    /// Degree over 𝔽_p of the smallest subfield containing `self`.
    pub fn min_poly_degree(&self) -> Result<usize> {
        let mut cur = self.frobenius()?;
        let mut k = 1;
        while cur != *self {
            cur = cur.frobenius()?;
            k += 1;
        }
        Ok(k)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

/// Polynomial in one variable over an [`ExtField`]; used for residual
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtPoly {
    field: Arc<ExtField>,
    coeffs: Vec<ExtElem>,
}

impl ExtPoly {
    pub fn new(field: &Arc<ExtField>, mut coeffs: Vec<ExtElem>) -> ExtPoly {
        while coeffs.last().is_some_and(ExtElem::is_zero) {
            coeffs.pop();
        }
        ExtPoly { field: field.clone(), coeffs }
    }

    pub fn coeffs(&self) -> &[ExtElem] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> ExtPoly {
        let p = self.field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(i as u64 % p))
            .collect();
        ExtPoly::new(&self.field, coeffs)
    }

    fn monic(&self) -> Result<ExtPoly> {
        match self.coeffs.last() {
            None => Ok(self.clone()),
            Some(lc) => {
                let inv = lc.inv()?;
                let coeffs = self.coeffs.iter().map(|c| c.mul(&inv)).collect::<Result<_>>()?;
                Ok(ExtPoly::new(&self.field, coeffs))
            }
        }
    }

    pub fn rem(&self, d: &ExtPoly) -> Result<ExtPoly> {
        let Some(dd) = d.degree() else {
            return Err(Error::DivisionByZero);
        };
        let inv = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let c = r[r.len() - 1].mul(&inv)?;
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(dj)?)?;
            }
            while r.last().is_some_and(ExtElem::is_zero) {
                r.pop();
            }
        }
        Ok(ExtPoly::new(&self.field, r))
    }

    pub fn gcd(&self, other: &ExtPoly) -> Result<ExtPoly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `gcd(R, R') = 1`; a vanishing derivative means an inseparable p-th power.
    pub fn is_separable(&self) -> Result<bool> {
        match self.degree() {
            None => Ok(false),
            Some(0) => Ok(true),
            Some(_) => {
                let d = self.derivative();
                if d.is_zero() {
                    return Ok(false);
                }
                Ok(self.gcd(&d)?.degree() == Some(0))
            }
        }
    }
}

impl fmt::Display for ExtPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})y"),
                _ => format!("({c})y^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

pub(crate) fn field_order_minus_one_half(field: &ExtField) -> BigUint {
    (field.order() - BigUint::one()) >> 1
}

#[allow(dead_code)]
pub(crate) fn is_square(a: &ExtElem) -> Result<bool> {
    if a.is_zero() {
        return Ok(true);
    }
    let e = field_order_minus_one_half(a.field());
    if e.is_zero() {
        return Ok(true);
    }
    Ok(a.pow(&e)?.is_one())
}
