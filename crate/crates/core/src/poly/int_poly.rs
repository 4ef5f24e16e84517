use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{valuation, Valuation};
use crate::poly::ModPoly;

const KARATSUBA_THRESHOLD: usize = 32;

/// Dense univariate polynomial over ℤ. `coeffs[i]` multiplies `x^i`; the
/// zero polynomial has no coefficients and no trailing zero is ever stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = String;

    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        v.iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| format!("bad coefficient {s:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(IntPoly::new)
    }
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn add_slices(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

fn mul_slices(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = mul_slices(a0, b0);
    let z2 = mul_slices(a1, b1);
    let mut z1 = mul_slices(&add_slices(a0, a1), &add_slices(b0, b1));
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + half < out.len() {
            out[i + half] += c;
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * half] += c;
    }
    out
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monic linear polynomial `x − c`.
    pub fn x_minus(c: &BigInt) -> Self {
        IntPoly::new(vec![-c, BigInt::one()])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        IntPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides every coefficient by `c`; `None` unless all divisions are exact.
    pub fn div_exact_scalar(&self, c: &BigInt) -> Option<IntPoly> {
        if c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntPoly::new(out))
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division by a monic divisor: `self = g·q + r`, `deg r < deg g`.
    pub fn divmod_monic(&self, g: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if !g.is_monic() {
            return Err(Error::invalid("divisor must be monic"));
        }
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[k + dg]);
            if c.is_zero() {
                continue;
            }
            for (j, gj) in g.coeffs[..dg].iter().enumerate() {
                if !gj.is_zero() {
                    rem[k + j] -= &c * gj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dg);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// `self(g(x))` by Horner's rule.
    pub fn compose(&self, g: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// Coefficients of `self` in powers of `(x − c)`, by repeated synthetic
    /// division.
    pub fn taylor_development(&self, c: &BigInt) -> Vec<BigInt> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        for start in 0..n {
            for k in (start..n - 1).rev() {
                let carry = &work[k + 1] * c;
                work[k] += carry;
            }
        }
        work
    }

    /// `min ν_p(c_i)` over the coefficients; `Infinity` for the zero polynomial.
    pub fn min_valuation(&self, p: u64) -> Valuation {
        self.coeffs.iter().map(|c| valuation(c, p)).min().unwrap_or(Valuation::Infinity)
    }

    pub fn reduce_mod(&self, p: u64) -> ModPoly {
        ModPoly::from_bigints(p, &self.coeffs)
    }

    /// Lift with coefficients in the symmetric range `(−p/2, p/2]`.
    pub fn lift_symmetric(f: &ModPoly) -> IntPoly {
        let p = f.modulus();
        IntPoly::new(
            f.coeffs()
                .iter()
                .map(|&c| if c > p / 2 { BigInt::from(c) - BigInt::from(p) } else { BigInt::from(c) })
                .collect(),
        )
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn rem_coeffs(&self, m: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Coefficients reduced into the symmetric range around zero.
    pub fn rem_coeffs_symmetric(&self, m: &BigInt) -> IntPoly {
        let half: BigInt = m / 2;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::new(add_slices(&self.coeffs, &rhs.coeffs))
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.coeffs.clone();
        if out.len() < rhs.coeffs.len() {
            out.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (o, c) in out.iter_mut().zip(&rhs.coeffs) {
            *o -= c;
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::new(mul_slices(&self.coeffs, &rhs.coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str(if show_coeff { "*x" } else { "x" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn normalization_and_display() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[-9, -3, 0, 1]).to_string(), "x^3 - 3*x - 9");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn long_division() {
        let (q, r) = p(&[-9, -3, 0, 1]).divmod_monic(&IntPoly::x()).unwrap();
        assert_eq!(q, p(&[-3, 0, 1]));
        assert_eq!(r, p(&[-9]));

        let f = p(&[5, -7, 3, 2]);
        let (q, r) = f.divmod_monic(&IntPoly::one()).unwrap();
        assert_eq!((q, r), (f.clone(), IntPoly::zero()));

        for t in [-4i64, 0, 3, 11] {
            let phi = p(&[-t, -3, 0, 1]);
            let (_, r) = phi.divmod_monic(&IntPoly::x_minus(&BigInt::from(t))).unwrap();
            assert_eq!(r, IntPoly::constant(phi.eval(&BigInt::from(t))));
        }
        assert!(f.divmod_monic(&p(&[1, 2])).is_err());
    }

    #[test]
    fn taylor_examples() {
        let t = p(&[0, 0, 1]).taylor_development(&BigInt::one());
        assert_eq!(t, vec![1.into(), 2.into(), 1.into()]);
        // T_3(x) - 2 about -2: constant term T_3(-2) - 2 = -4
        let t3m2 = p(&[-2, -3, 0, 1]);
        assert_eq!(t3m2.taylor_development(&BigInt::from(-2))[0], BigInt::from(-4));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
        let f = p(&[3, 0, -2, 5]);
        assert_eq!(f.compose(&IntPoly::x()), f);
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let a: Vec<BigInt> = (0..97).map(|i| BigInt::from((i * 7919) % 1013 - 500)).collect();
        let b: Vec<BigInt> = (0..70).map(|i| BigInt::from((i * 104_729) % 997 - 400)).collect();
        assert_eq!(mul_slices(&a, &b), schoolbook(&a, &b));
        assert_eq!(mul_slices(&b, &a[..40]), schoolbook(&b, &a[..40]));
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-50i64..50, 0..=max_deg + 1).prop_map(|v| IntPoly::from_i64(&v))
    }

    proptest! {
        #[test]
        fn divmod_reconstructs(f in arb_poly(12), mut g in prop::collection::vec(-9i64..9, 1..5)) {
            g.push(1);
            let g = IntPoly::from_i64(&g);
            let (q, r) = f.divmod_monic(&g).unwrap();
            prop_assert_eq!(&(&g * &q) + &r, f);
            prop_assert!(r.degree().map_or(true, |d| d < g.degree().unwrap()));
        }

        #[test]
        fn mul_is_evaluation_homomorphism(a in arb_poly(40), b in arb_poly(40), x in -5i64..5) {
            let x = BigInt::from(x);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }
    }
}
