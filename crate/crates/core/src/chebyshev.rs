//! Chebyshev polynomials in the Dickson normalization
//! `T_d(z + 1/z) = z^d + 1/z^d`, their iterates and the shifted iterate
//! `Φ = T_ℓⁿ(x) − t`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{ddf, squarefree};
use crate::padic::{is_prime_u64, valuation, Valuation};
use crate::poly::IntPoly;

/// Degrees above this are refused; dense arithmetic is sized for it.
pub const MAX_DEGREE: u64 = 3000;

/// How many auxiliary primes the irreducibility check tries.
pub const IRREDUCIBILITY_PRIMES: usize = 25;

pub fn cheb_t(d: usize) -> IntPoly {
    let (mut prev, mut cur) = (IntPoly::from_i64(&[2]), IntPoly::x());
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&IntPoly::x() * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

pub fn cheb_u(d: usize) -> IntPoly {
    let (mut prev, mut cur) = (IntPoly::one(), IntPoly::x());
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&IntPoly::x() * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `T_d = Σ_k (−1)^k · d/(d−k) · C(d−k, k) · x^{d−2k}` for `d ≥ 1`.
pub fn cheb_t_explicit(d: usize) -> IntPoly {
    if d == 0 {
        return IntPoly::from_i64(&[2]);
    }
    let mut coeffs = vec![BigInt::zero(); d + 1];
    let dd = BigInt::from(d);
    for k in 0..=d / 2 {
        let c = binomial(BigInt::from(d - k), BigInt::from(k)) * &dd;
        let (q, r) = c.div_rem(&BigInt::from(d - k));
        debug_assert!(r.is_zero());
        coeffs[d - 2 * k] = if k % 2 == 1 { -q } else { q };
    }
    IntPoly::new(coeffs)
}

pub(crate) fn check_ell(ell: u64) -> Result<()> {
    if ell == 2 || !is_prime_u64(ell) {
        return Err(Error::invalid(format!("ell = {ell} is not an odd prime")));
    }
    Ok(())
}

/// `ℓ^n` as a degree, refusing anything above [`MAX_DEGREE`].
pub fn iterate_degree(ell: u64, n: u32) -> Result<usize> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    ell.checked_pow(n)
        .filter(|&d| d <= MAX_DEGREE)
        .map(|d| d as usize)
        .ok_or_else(|| Error::ResourceLimit(format!("degree {ell}^{n} exceeds {MAX_DEGREE}")))
}

/// `T_ℓⁿ` by `n`-fold composition.
pub fn cheb_t_iterate(ell: u64, n: u32) -> Result<IntPoly> {
    check_ell(ell)?;
    iterate_degree(ell, n)?;
    let base = cheb_t(ell as usize);
    let mut acc = base.clone();
    for _ in 1..n {
        acc = base.compose(&acc);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Irreducibility {
    ProvenEisenstein,
    /// Degree patterns modulo these primes leave no room for a proper factor.
    ProvenModQ { primes: Vec<u64> },
    Assumed,
    Reducible { reason: String },
}

impl Irreducibility {
    pub fn is_proven(&self) -> bool {
        matches!(self, Irreducibility::ProvenEisenstein | Irreducibility::ProvenModQ { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebInstance {
    pub ell: u64,
    pub n: u32,
    #[serde(with = "crate::serde_big")]
    pub t: BigInt,
    pub phi_poly: IntPoly,
    pub irreducibility: Irreducibility,
}

impl ChebInstance {
    pub fn degree(&self) -> usize {
        self.phi_poly.degree().unwrap_or(0)
    }

    /// `Φ(t) = T_ℓⁿ(t) − t`.
    pub fn phi_at_t(&self) -> BigInt {
        self.phi_poly.eval(&self.t)
    }

    /// `t² − 4`.
    pub fn t2_minus_4(&self) -> BigInt {
        &self.t * &self.t - BigInt::from(4)
    }
}

/// Assembles `Φ` and runs the irreducibility heuristics.
pub fn build_instance(ell: u64, n: u32, t: &BigInt) -> Result<ChebInstance> {
    let mut inst = build_instance_unchecked(ell, n, t)?;
    inst.irreducibility = check_irreducibility(&inst)?;
    Ok(inst)
}

/// As [`build_instance`] but leaves the flag at `Assumed`.
pub fn build_instance_unchecked(ell: u64, n: u32, t: &BigInt) -> Result<ChebInstance> {
    check_ell(ell)?;
    let mut phi = cheb_t_iterate(ell, n)?;
    phi = &phi - &IntPoly::constant(t.clone());
    Ok(ChebInstance { ell, n, t: t.clone(), phi_poly: phi, irreducibility: Irreducibility::Assumed })
}

fn is_eisenstein(f: &IntPoly, p: u64) -> bool {
    let c = f.coeffs();
    let pb = BigInt::from(p);
    f.is_monic()
        && c[..c.len() - 1].iter().all(|a| a.is_multiple_of(&pb))
        && valuation(&c[0], p) == Valuation::Finite(1)
}

/// Integer `a` with `T_ℓ(a) = t`, which makes `T_ℓ^{n−1}(x) − a` a factor.
fn integral_preimage(ell: u64, t: &BigInt) -> Option<BigInt> {
    let t_ell = cheb_t(ell as usize);
    let bound = t.abs().to_f64().map_or(f64::INFINITY, |v| v.powf(1.0 / ell as f64)) as i64 + 3;
    (-bound..=bound).map(BigInt::from).find(|a| &t_ell.eval(a) == t)
}

fn check_irreducibility(inst: &ChebInstance) -> Result<Irreducibility> {
    let (ell, t, phi) = (inst.ell, &inst.t, &inst.phi_poly);
    let two = BigInt::from(2);
    if t.abs() == two {
        return Ok(Irreducibility::Reducible { reason: format!("t = {t}: (x - t) times a square") });
    }
    if let Some(a) = integral_preimage(ell, t) {
        let reason = if inst.n == 1 {
            format!("x = {a} is a root")
        } else {
            format!("T_{ell}^{}(x) - {a} is a factor", inst.n - 1)
        };
        return Ok(Irreducibility::Reducible { reason });
    }
    if valuation(t, ell) == Valuation::Finite(1) && is_eisenstein(phi, ell) {
        return Ok(Irreducibility::ProvenEisenstein);
    }
    let deg = inst.degree();
    let t2m4 = inst.t2_minus_4();
    // degrees a rational factor could have, intersected over primes
    let mut feasible: BTreeSet<usize> = (0..=deg).collect();
    let mut used = Vec::new();
    let mut q = 1u64;
    while used.len() < IRREDUCIBILITY_PRIMES {
        q += 1;
        if !is_prime_u64(q) || q == ell || t2m4.is_multiple_of(&BigInt::from(q)) {
            continue;
        }
        let fbar = phi.reduce_mod(q);
        let sqf = squarefree(&fbar)?;
        if sqf.len() != 1 || sqf[0].1 != 1 {
            return Err(Error::Internal(format!("Φ not squarefree modulo {q} although q ∤ disc")));
        }
        let mut sums: BTreeSet<usize> = BTreeSet::from([0]);
        for (g, d) in ddf(&sqf[0].0)? {
            let count = g.degree().unwrap_or(0) / d;
            for _ in 0..count {
                let shifted: Vec<usize> = sums.iter().map(|s| s + d).collect();
                sums.extend(shifted);
            }
        }
        used.push(q);
        feasible = feasible.intersection(&sums).copied().collect();
        if feasible.len() <= 2 {
            return Ok(Irreducibility::ProvenModQ { primes: used });
        }
    }
    Ok(Irreducibility::Assumed)
}

/// Splits `T_ℓⁿ(x) − s = (x − s)·τ(x)²` for `s = ±2`.
pub fn tau_factor(ell: u64, n: u32, s: i64) -> Result<(IntPoly, IntPoly)> {
    if s != 2 && s != -2 {
        return Err(Error::invalid("tau_factor needs s = ±2"));
    }
    let s = BigInt::from(s);
    let t = cheb_t_iterate(ell, n)?;
    let linear = IntPoly::x_minus(&s);
    let (q, r) = (&t - &IntPoly::constant(s.clone())).divmod_monic(&linear)?;
    if !r.is_zero() {
        return Err(Error::Internal("x - s does not divide T - s".into()));
    }
    let tau = poly_sqrt(&q)?;
    if &(&linear * &tau) * &tau != &t - &IntPoly::constant(s) {
        return Err(Error::Internal("square root does not re-expand".into()));
    }
    Ok((linear, tau))
}

/// Monic square root over ℤ, coefficient by coefficient from the top.
fn poly_sqrt(q: &IntPoly) -> Result<IntPoly> {
    let dq = q.degree().ok_or_else(|| Error::Internal("square root of zero".into()))?;
    if dq % 2 == 1 || !q.is_monic() {
        return Err(Error::Internal("not a monic even-degree polynomial".into()));
    }
    let k = dq / 2;
    let mut tau = vec![BigInt::zero(); k + 1];
    tau[k] = BigInt::one();
    let two = BigInt::from(2);
    for i in (0..k).rev() {
        let mut s = BigInt::zero();
        for j in i + 1..k {
            let l = k + i - j;
            if l > i && l < k {
                s += &tau[j] * &tau[l];
            }
        }
        let (c, r) = (q.coeff(k + i) - s).div_rem(&two);
        if !r.is_zero() {
            return Err(Error::Internal("square root step is not integral".into()));
        }
        tau[i] = c;
    }
    let tau = IntPoly::new(tau);
    if &tau * &tau != *q {
        return Err(Error::Internal("polynomial is not a perfect square".into()));
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_mod_p;
    use crate::poly::ModPoly;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(cheb_t(0), p(&[2]));
        assert_eq!(cheb_t(1), p(&[0, 1]));
        assert_eq!(cheb_t(3), p(&[0, -3, 0, 1]));
        assert_eq!(cheb_u(0), p(&[1]));
        assert_eq!(cheb_u(2), p(&[-1, 0, 1]));
    }

    #[test]
    fn explicit_sum_agrees() {
        for d in 0..=200 {
            assert_eq!(cheb_t(d), cheb_t_explicit(d), "d = {d}");
        }
    }

    #[test]
    fn derivative_relation() {
        for d in 0..=100 {
            assert_eq!(cheb_u(d).scale(&BigInt::from(d + 1)), cheb_t(d + 1).derivative());
        }
    }

    #[test]
    fn u_at_two() {
        for d in 0..60 {
            assert_eq!(cheb_u(d).eval(&BigInt::from(2)), BigInt::from(d + 1));
        }
    }

    #[test]
    fn parity() {
        let neg = p(&[0, -1]);
        for d in 0..=100 {
            let sign = BigInt::from(if d % 2 == 0 { 1 } else { -1 });
            assert_eq!(cheb_t(d).compose(&neg), cheb_t(d).scale(&sign));
            assert_eq!(cheb_u(d).compose(&neg), cheb_u(d).scale(&sign));
        }
    }

    #[test]
    fn laurent_identity() {
        // T_d(z + 1/z)·z^d = z^{2d} + 1, as polynomials in z
        for d in 0..=50usize {
            let mut acc = IntPoly::zero();
            for (k, c) in cheb_t(d).coeffs().iter().enumerate() {
                // (z + 1/z)^k · z^d = (z^2 + 1)^k · z^{d-k}
                let term = &p(&[1, 0, 1]).pow(k as u32) * &IntPoly::monomial(c.clone(), d - k);
                acc = &acc + &term;
            }
            let mut expect = IntPoly::monomial(BigInt::one(), 2 * d);
            expect = &expect + &IntPoly::one();
            if d == 0 {
                expect = p(&[2]);
            }
            assert_eq!(acc, expect, "d = {d}");
        }
    }

    #[test]
    fn iterates() {
        assert_eq!(cheb_t_iterate(3, 2).unwrap(), p(&[0, 9, 0, -30, 0, 27, 0, -9, 0, 1]));
        for (ell, n) in [(3u64, 1u32), (3, 2), (3, 3), (3, 4), (3, 5), (5, 1), (5, 2), (7, 1), (7, 2), (11, 2), (13, 2)] {
            let d = ell.pow(n) as usize;
            if d <= 243 {
                assert_eq!(cheb_t_iterate(ell, n).unwrap(), cheb_t(d));
            }
        }
        let t27 = cheb_t_iterate(3, 3).unwrap().reduce_mod(3);
        assert_eq!(t27, ModPoly::new(3, [vec![0; 27], vec![1]].concat()));
        assert!(cheb_t_iterate(4, 1).is_err());
        assert!(cheb_t_iterate(2, 3).is_err());
        assert!(matches!(cheb_t_iterate(3, 9), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn reduction_mod_ell() {
        for ell in [3u64, 5, 7] {
            for n in 1..=3 {
                for t in -5i64..=5 {
                    let inst = build_instance_unchecked(ell, n, &BigInt::from(t)).unwrap();
                    let expect = ModPoly::x_minus(ell, t.rem_euclid(ell as i64) as u64)
                        .pow_mod_u64(ell.pow(n), &ModPoly::new(ell, [vec![0; ell.pow(n) as usize + 1], vec![1]].concat()))
                        .unwrap();
                    assert_eq!(inst.phi_poly.reduce_mod(ell), expect, "{ell} {n} {t}");
                }
            }
        }
    }

    #[test]
    fn u_ell_minus_one_is_a_sign() {
        for ell in [3u64, 5, 7, 11, 13] {
            let u = cheb_u(ell as usize - 1).reduce_mod(ell);
            for x in 0..ell {
                if x == 2 || x == ell - 2 {
                    continue;
                }
                let v = u.eval(x);
                assert!(v == 1 || v == ell - 1, "ell={ell} x={x} -> {v}");
            }
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_factor(3, 1, 2).unwrap().1, p(&[1, 1]));
        assert_eq!(tau_factor(3, 1, -2).unwrap().1, p(&[-1, 1]));
        assert_eq!(tau_factor(5, 1, 2).unwrap().1, p(&[-1, 1, 1]));
        assert_eq!(tau_factor(5, 1, -2).unwrap().1, p(&[-1, -1, 1]));
        for (ell, n) in [(3, 3), (5, 2), (7, 2)] {
            let (_, tau) = tau_factor(ell, n, 2).unwrap();
            assert_eq!(tau.degree(), Some((ell.pow(n) as usize - 1) / 2));
        }
        assert!(tau_factor(3, 1, 1).is_err());
    }

    #[test]
    fn t5_factors_mod_7() {
        for (s, lin, quad) in [(2i64, [-2i64, 1], [-1i64, 1, 1]), (-2, [2, 1], [-1, -1, 1])] {
            let f = &cheb_t(5) - &p(&[s]);
            let fs = factor_mod_p(&f.reduce_mod(7), 0).unwrap();
            assert_eq!(fs, vec![(ModPoly::from_i64(7, &lin), 1), (ModPoly::from_i64(7, &quad), 2)]);
        }
    }

    #[test]
    fn irreducibility_flags() {
        let e = build_instance(3, 1, &BigInt::from(3)).unwrap();
        assert_eq!(e.irreducibility, Irreducibility::ProvenEisenstein);
        let q = build_instance(3, 1, &BigInt::from(1)).unwrap();
        assert!(matches!(q.irreducibility, Irreducibility::ProvenModQ { ref primes } if primes[0] == 2));
        assert!(ModPoly::from_i64(2, &[1, 1, 0, 1]).degree() == Some(3));
        let r = build_instance(3, 2, &BigInt::from(2)).unwrap();
        assert!(matches!(r.irreducibility, Irreducibility::Reducible { .. }));
        let r = build_instance(3, 2, &BigInt::from(18)).unwrap();
        assert!(matches!(r.irreducibility, Irreducibility::Reducible { .. }));
        let big = build_instance(3, 3, &BigInt::from(451251)).unwrap();
        assert_eq!(big.degree(), 27);
        assert!(big.irreducibility.is_proven());
    }

    #[test]
    fn lemma_5_3_binomial_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        for _ in 0..1000 {
            let a: u64 = rng.gen_range(0..80);
            let b = rng.gen_range(0..=a / 2);
            let c = rng.gen_range(0..=a - 2 * b);
            let bi = |x: u64| BigInt::from(x);
            // C(a−b, b)·C(a−2b, c) = C(a−b−c, b)·C(a−b, c)
            let lhs = binomial(bi(a - b), bi(b)) * binomial(bi(a - 2 * b), bi(c));
            let rhs = binomial(bi(a - b - c), bi(b)) * binomial(bi(a - b), bi(c));
            assert_eq!(lhs, rhs, "a={a} b={b} c={c}");
        }
    }
}
