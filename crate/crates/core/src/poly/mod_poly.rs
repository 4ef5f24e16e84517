use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{mul_mod, pow_mod};

/// Polynomial over 𝔽_p with coefficients in `[0, p)`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModPoly {
    p: u64,
    #[serde(rename = "coeffs")]
    c: Vec<u64>,
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(pow_mod(a, p - 2, p))
}

/// Product of coefficient slices mod `p`, deferring reductions while the
/// 128-bit accumulator cannot overflow.
pub(crate) fn mul_coeffs_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    if p < (1 << 32) {
        let mut acc = vec![0u128; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u128;
            for (slot, &y) in acc[i..].iter_mut().zip(b) {
                *slot += x * y as u128;
            }
        }
        acc.into_iter().map(|v| (v % p as u128) as u64).collect()
    } else {
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + mul_mod(x, y, p) as u128) % p as u128) as u64;
            }
        }
        out
    }
}

impl ModPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        ModPoly::new(p, coeffs.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect())
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        ModPoly::new(
            p,
            coeffs.iter().map(|v| v.mod_floor(&pb).to_u64().unwrap_or(0)).collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    /// `x − a`.
    pub fn x_minus(p: u64, a: u64) -> Self {
        ModPoly::new(p, vec![(p - a % p) % p, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn leading(&self) -> Option<u64> {
        self.c.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    fn check(&self, other: &ModPoly) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::invalid(format!("moduli differ: {} vs {}", self.p, other.p)))
        }
    }

    pub fn monic(&self) -> ModPoly {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => {
                let inv = pow_mod(lc, self.p - 2, self.p);
                self.scale(inv)
            }
        }
    }

    pub fn scale(&self, k: u64) -> ModPoly {
        ModPoly::new(self.p, self.c.iter().map(|&v| mul_mod(v, k, self.p)).collect())
    }

    pub fn eval(&self, a: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &v| (mul_mod(acc, a, self.p) + v) % self.p)
    }

    pub fn add(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let n = self.c.len().max(other.c.len());
        Ok(ModPoly::new(
            self.p,
            (0..n).map(|i| (self.coeff(i) + other.coeff(i)) % self.p).collect(),
        ))
    }

    pub fn sub(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let n = self.c.len().max(other.c.len());
        Ok(ModPoly::new(
            self.p,
            (0..n).map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p).collect(),
        ))
    }

    pub fn neg(&self) -> ModPoly {
        ModPoly::new(self.p, self.c.iter().map(|&v| (self.p - v) % self.p).collect())
    }

    pub fn mul(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        Ok(ModPoly::new(self.p, mul_coeffs_mod(&self.c, &other.c, self.p)))
    }

    pub fn divrem(&self, d: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        self.check(d)?;
        let Some(dd) = d.degree() else {
            return Err(Error::DivisionByZero);
        };
        let p = self.p;
        if self.c.len() <= dd {
            return Ok((ModPoly::zero(p), self.clone()));
        }
        let inv = pow_mod(d.c[dd], p - 2, p);
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv, p);
            rem[k + dd] = 0;
            if c == 0 {
                continue;
            }
            quot[k] = c;
            for (j, &dj) in d.c[..dd].iter().enumerate() {
                if dj != 0 {
                    rem[k + j] = (rem[k + j] + p - mul_mod(c, dj, p)) % p;
                }
            }
        }
        rem.truncate(dd);
        Ok((ModPoly::new(p, quot), ModPoly::new(p, rem)))
    }

    pub fn rem(&self, d: &ModPoly) -> Result<ModPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &ModPoly) -> Result<ModPoly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::invalid("polynomial division is not exact"));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended gcd: returns monic `g` with `s·self + t·other = g`.
    pub fn ext_gcd(&self, other: &ModPoly) -> Result<(ModPoly, ModPoly, ModPoly)> {
        self.check(other)?;
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::zero(p));
        let (mut t0, mut t1) = (ModPoly::zero(p), ModPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = s0.sub(&q.mul(&s1)?)?;
            let t2 = t0.sub(&q.mul(&t1)?)?;
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading() {
            None => Ok((r0, s0, t0)),
            Some(lc) => {
                let inv = inv_mod(lc, p)?;
                Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
            }
        }
    }

    pub fn derivative(&self) -> ModPoly {
        ModPoly::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &v)| mul_mod(v, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, e: &BigUint, m: &ModPoly) -> Result<ModPoly> {
        self.check(m)?;
        let mut acc = ModPoly::one(self.p).rem(m)?;
        let base = self.rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc)?.rem(m)?;
            if e.bit(i) {
                acc = acc.mul(&base)?.rem(m)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_mod_u64(&self, e: u64, m: &ModPoly) -> Result<ModPoly> {
        self.pow_mod(&BigUint::from(e), m)
    }

    pub fn mul_mod_poly(&self, other: &ModPoly, m: &ModPoly) -> Result<ModPoly> {
        self.mul(other)?.rem(m)
    }

    /// The p-th root of a polynomial whose derivative vanishes, i.e.
    /// `self = g(x^p)` and `g^p = self` over 𝔽_p.
    pub fn pth_root(&self) -> Result<ModPoly> {
        let p = self.p as usize;
        if self.c.iter().enumerate().any(|(i, &v)| v != 0 && i % p != 0) {
            return Err(Error::invalid("polynomial is not a p-th power"));
        }
        Ok(ModPoly::new(self.p, self.c.iter().step_by(p).copied().collect()))
    }

    /// Coefficients read as base-p digits; a dense index for enumeration.
    pub fn to_index(&self) -> u64 {
        self.c.iter().rev().fold(0u64, |acc, &v| acc * self.p + v)
    }

    pub fn from_index(p: u64, mut idx: u64, len: usize) -> ModPoly {
        let mut c = Vec::with_capacity(len);
        for _ in 0..len {
            c.push(idx % p);
            idx /= p;
        }
        ModPoly::new(p, c)
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (i, &v) in self.c.iter().enumerate().rev() {
            if v == 0 {
                continue;
            }
            let coeff = if v == 1 && i > 0 { String::new() } else { v.to_string() };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        f.write_str(&terms.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_example() {
        let a = ModPoly::from_i64(5, &[-1, 0, 1]);
        let b = ModPoly::from_i64(5, &[-1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), ModPoly::new(5, vec![4, 1]));
    }

    #[test]
    fn derivative_of_t3_vanishes_mod_3() {
        let t3 = ModPoly::from_i64(3, &[0, -3, 0, 1]);
        assert!(t3.derivative().is_zero());
    }

    #[test]
    fn frobenius_of_x_in_f49() {
        // x^7 mod x^2+1 over F_7: x^2 = -1 so x^7 = x*(x^2)^3 = -x
        let m = ModPoly::from_i64(7, &[1, 0, 1]);
        let r = ModPoly::x(7).pow_mod_u64(7, &m).unwrap();
        assert_eq!(r, ModPoly::from_i64(7, &[0, -1]));
    }

    #[test]
    fn mismatched_moduli_rejected() {
        let a = ModPoly::one(5);
        let b = ModPoly::one(7);
        assert!(matches!(a.add(&b), Err(Error::InvalidArgument(_))));
        assert!(a.mul(&b).is_err());
        assert!(a.gcd(&b).is_err());
        assert!(matches!(a.divrem(&ModPoly::zero(5)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = ModPoly::from_i64(13, &[3, 1, 4, 1, 5]);
        let b = ModPoly::from_i64(13, &[9, 2, 6]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).unwrap().add(&t.mul(&b).unwrap()).unwrap(), g);
        assert_eq!(g, a.gcd(&b).unwrap());
    }

    #[test]
    fn large_modulus_multiplication() {
        let p = 4_611_686_018_427_387_847u64; // prime below 2^62
        let a = ModPoly::new(p, vec![p - 1, p - 2, 3]);
        let b = ModPoly::new(p, vec![p - 5, 7]);
        let prod = a.mul(&b).unwrap();
        for x in [0u64, 1, 2, 12345] {
            assert_eq!(prod.eval(x), mul_mod(a.eval(x), b.eval(x), p));
        }
    }
}
