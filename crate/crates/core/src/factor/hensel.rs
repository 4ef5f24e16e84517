use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::poly::{inv_mod, IntPoly, ModPoly};

fn lift(f: &ModPoly) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

fn mulm(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    (a * b).rem_coeffs(m)
}

fn divrem_m(a: &IntPoly, b: &IntPoly, m: &BigInt) -> Result<(IntPoly, IntPoly)> {
    let (q, r) = a.divmod_monic(b)?;
    Ok((q.rem_coeffs(m), r.rem_coeffs(m)))
}

/// One quadratic step: from `f ≡ gh`, `sg + th ≡ 1 (mod m)` to the same
/// relations mod `m²`. `h` stays monic.
fn step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m2: &BigInt,
) -> Result<(IntPoly, IntPoly, IntPoly, IntPoly)> {
    let e = (f - &(g * h)).rem_coeffs(m2);
    let (q, r) = divrem_m(&mulm(s, &e, m2), h, m2)?;
    let g2 = (&(g + &mulm(t, &e, m2)) + &mulm(&q, g, m2)).rem_coeffs(m2);
    let h2 = (h + &r).rem_coeffs(m2);
    let b = (&(&mulm(s, &g2, m2) + &mulm(t, &h2, m2)) - &IntPoly::one()).rem_coeffs(m2);
    let (c, d) = divrem_m(&mulm(s, &b, m2), &h2, m2)?;
    let s2 = (s - &d).rem_coeffs(m2);
    let t2 = (&(t - &mulm(t, &b, m2)) - &mulm(&c, &g2, m2)).rem_coeffs(m2);
    Ok((g2, h2, s2, t2))
}

/// Lifts two coprime monic factors of monic `f` from mod `p` to mod `p^e`.
fn lift_pair(f: &IntPoly, g: &ModPoly, h: &ModPoly, p: u64, e: u32) -> Result<(IntPoly, IntPoly)> {
    let (one, s, t) = g.ext_gcd(h)?;
    if !one.is_one() {
        return Err(Error::invalid("factors are not coprime modulo p"));
    }
    let target = Pow::pow(&BigInt::from(p), e);
    let (mut g, mut h, mut s, mut t) = (lift(g), lift(h), lift(&s), lift(&t));
    let mut m = BigInt::from(p);
    while m < target {
        let m2 = &m * &m;
        (g, h, s, t) = step(f, &g, &h, &s, &t, &m2)?;
        m = m2;
    }
    Ok((g.rem_coeffs(&target), h.rem_coeffs(&target)))
}

/// Hensel-lifts pairwise coprime factors of `f mod p` to monic factors
/// modulo `p^e`. For non-monic `f` (leading coefficient a unit mod p) the
/// factors lift `lc⁻¹·f`. The product is checked against `f` before returning.
pub fn hensel_lift(f: &IntPoly, factors: &[ModPoly], e: u32, p: u64) -> Result<Vec<IntPoly>> {
    if e == 0 {
        return Err(Error::invalid("target exponent must be positive"));
    }
    let lc = f.leading().ok_or_else(|| Error::invalid("cannot lift factors of zero"))?;
    let modulus = Pow::pow(&BigInt::from(p), e);
    let lc_inv = {
        let lc_p = lc.mod_floor(&BigInt::from(p));
        let lc_p = u64::try_from(lc_p).map_err(|_| Error::Internal("residue overflow".into()))?;
        inv_mod(lc_p, p).map_err(|_| Error::invalid("leading coefficient not invertible mod p"))?;
        lc.modinv(&modulus).ok_or_else(|| Error::invalid("leading coefficient not invertible"))?
    };
    let f = f.scale(&lc_inv).rem_coeffs(&modulus);
    let factors: Vec<ModPoly> = factors.iter().map(ModPoly::monic).collect();
    let prod = factors.iter().try_fold(ModPoly::one(p), |acc, g| acc.mul(g))?;
    if prod != f.reduce_mod(p) {
        return Err(Error::invalid("factors do not multiply to f modulo p"));
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if !factors[i].gcd(&factors[j])?.is_one() {
                return Err(Error::invalid("factors are not pairwise coprime modulo p"));
            }
        }
    }
    if factors.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(factors.len());
    let mut rest_f = f.clone();
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            out.push(rest_f.rem_coeffs(&modulus));
            break;
        }
        let h = factors[i + 1..].iter().try_fold(ModPoly::one(p), |acc, x| acc.mul(x))?;
        let (g_hat, h_hat) = lift_pair(&rest_f, g, &h, p, e)?;
        out.push(g_hat);
        rest_f = h_hat;
    }
    let check = out.iter().fold(IntPoly::one(), |acc, g| mulm(&acc, g, &modulus));
    if check != f {
        return Err(Error::Internal("lifted product does not reproduce f".into()));
    }
    for (g, g_hat) in factors.iter().zip(&out) {
        if &g_hat.reduce_mod(p) != g || !g_hat.is_monic() {
            return Err(Error::Internal("lift does not reduce to its factor".into()));
        }
    }
    Ok(out)
}
