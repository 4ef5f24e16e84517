use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// `lc(b)^(δ+1)·a mod b` with `δ = deg a − deg b`, exact over ℤ.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    for k in (db..a.len()).rev() {
        let c = std::mem::take(&mut r[k]);
        for x in r[..k].iter_mut() {
            *x *= lc;
        }
        if !c.is_zero() {
            let off = k - db;
            for (j, bj) in b[..db].iter().enumerate() {
                r[off + j] -= &c * bj;
            }
        }
    }
    r.truncate(db);
    while r.last().is_some_and(Zero::is_zero) {
        r.pop();
    }
    r
}

fn exact_div(v: &mut [BigInt], d: &BigInt) {
    if d.is_one() {
        return;
    }
    for x in v.iter_mut() {
        let (q, r) = x.div_rem(d);
        debug_assert!(r.is_zero());
        *x = q;
    }
}

/// Resultant by the subresultant pseudo-remainder sequence. The sign
/// matches the Sylvester matrix with the coefficients of `f` in the first
/// `deg g` rows, so `Res(x − a, x − b) = a − b`.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::invalid("resultant of the zero polynomial"));
    }
    let mut a = f.coeffs().to_vec();
    let mut b = g.coeffs().to_vec();
    let mut sign = false;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign = true;
        }
    }
    if b.len() == 1 {
        let r = Pow::pow(&b[0], (a.len() - 1) as u32);
        return Ok(if sign { -r } else { r });
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let mut r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return Ok(BigInt::zero());
        }
        let denom = &gg * Pow::pow(&h, delta);
        exact_div(&mut r, &denom);
        a = b;
        b = r;
        gg = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            let num = Pow::pow(&gg, delta);
            num / Pow::pow(&h, delta - 1)
        };
        if b.len() == 1 {
            break;
        }
    }
    let da = (a.len() - 1) as u32;
    let num = Pow::pow(&b[0], da);
    let res = if da == 0 { num } else { num / Pow::pow(&h, da - 1) };
    Ok(if sign { -res } else { res })
}

/// `(−1)^{d(d−1)/2}·Res(f, f′)` for monic `f` of degree `d ≥ 2`.
pub fn discriminant_oracle(f: &IntPoly) -> Result<BigInt> {
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::invalid("discriminant needs degree at least 2"));
    }
    if !f.is_monic() {
        return Err(Error::invalid("discriminant oracle expects a monic polynomial"));
    }
    let r = resultant(f, &f.derivative())?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Sylvester determinant by fraction-free Bareiss elimination.
    fn sylvester_res(f: &IntPoly, g: &IntPoly) -> BigInt {
        let m = f.degree().unwrap();
        let n = g.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, c) in f.coeffs().iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..m {
            for (j, c) in g.coeffs().iter().rev().enumerate() {
                mat[n + row][row + j] = c.clone();
            }
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size {
            if mat[k][k].is_zero() {
                match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                    Some(r) => {
                        mat.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    mat[i][j] = v / &prev;
                }
                mat[i][k] = BigInt::zero();
            }
            prev = mat[k][k].clone();
        }
        sign * prev
    }

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn small_cases() {
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[-2, 1])).unwrap(), BigInt::from(3));
        assert_eq!(resultant(&p(&[4, 3, 1]), &p(&[1])).unwrap(), BigInt::one());
        // Sylvester convention: Res(x − a, x − b) = a − b
        assert_eq!(resultant(&p(&[-3, 1]), &p(&[-7, 1])).unwrap(), BigInt::from(3 - 7));
        assert_eq!(sylvester_res(&p(&[-3, 1]), &p(&[-7, 1])), BigInt::from(3 - 7));
        assert!(resultant(&IntPoly::zero(), &p(&[1, 1])).is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant_oracle(&p(&[-1, -3, 0, 1])).unwrap(), BigInt::from(81));
        assert_eq!(discriminant_oracle(&p(&[-9, -3, 0, 1])).unwrap(), BigInt::from(-2079));
        assert_eq!(discriminant_oracle(&p(&[-5, 0, 1])).unwrap(), BigInt::from(20));
        assert!(discriminant_oracle(&p(&[1, 1])).is_err());
    }

    #[test]
    fn common_root_gives_zero() {
        let f = &p(&[-1, 1]) * &p(&[2, 0, 1]);
        let g = &p(&[-1, 1]) * &p(&[5, 3]);
        assert!(resultant(&f, &g).unwrap().is_zero());
    }

    fn nonzero(max_deg: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..10, 1..=max_deg + 1)
            .prop_filter_map("nonzero", |c| {
                let f = IntPoly::from_i64(&c);
                (!f.is_zero()).then_some(f)
            })
    }

    fn monic(max_deg: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..10, 1..=max_deg).prop_map(|mut c| {
            c.push(1);
            IntPoly::from_i64(&c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn matches_sylvester(f in nonzero(6), g in nonzero(6)) {
            prop_assert_eq!(resultant(&f, &g).unwrap(), sylvester_res(&f, &g));
        }

        #[test]
        fn antisymmetry(f in nonzero(6), g in nonzero(6)) {
            let s = if (f.degree().unwrap() * g.degree().unwrap()) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(resultant(&f, &g).unwrap() * s, resultant(&g, &f).unwrap());
        }

        #[test]
        fn disc_of_product(f in monic(4), g in monic(4)) {
            let r = resultant(&f, &g).unwrap();
            prop_assume!(!r.is_zero());
            let df = if f.degree().unwrap() >= 2 { discriminant_oracle(&f).unwrap() } else { BigInt::one() };
            let dg = if g.degree().unwrap() >= 2 { discriminant_oracle(&g).unwrap() } else { BigInt::one() };
            prop_assert_eq!(discriminant_oracle(&(&f * &g)).unwrap(), df * dg * &r * &r);
        }
    }
}
