//! p-adic valuations, base-p digit arithmetic, binomial residues and
//! desk-scale integer factorization.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default trial-division bound.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Below this value Miller-Rabin with the first seven prime bases is exact.
const MR_DETERMINISTIC_LIMIT: u64 = 341_550_071_728_321;
const MR_ROUNDS: usize = 64;

/// A p-adic valuation. `Infinity` only arises from the valuation of zero and
/// compares greater than every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn mr_witness_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

/// Primality test on machine words: exact below 3.4·10¹⁴, 64 seeded
/// Miller-Rabin rounds above.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    if n < MR_DETERMINISTIC_LIMIT {
        return [2u64, 3, 5, 7, 11, 13, 17]
            .iter()
            .all(|&a| !mr_witness_u64(n, a, d, s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n);
    (0..MR_ROUNDS).all(|_| {
        let a = rand::Rng::gen_range(&mut rng, 2..n - 1);
        !mr_witness_u64(n, a, d, s)
    })
}

/// Primality test for arbitrary-precision integers (probabilistic above
/// 3.4·10¹⁴, deterministic for a fixed input).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let seed = n.iter_u64_digits().fold(0xc0ffee_u64, |h, w| h.rotate_left(7) ^ w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    'rounds: for _ in 0..MR_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

/// Valuation without the primality check; `p` must be prime.
pub(crate) fn valuation(a: &BigInt, p: u64) -> Valuation {
    if a.is_zero() {
        return Valuation::Infinity;
    }
    let mut m = a.magnitude().clone();
    let pb = BigUint::from(p);
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Finite(k);
        }
        m = q;
        k += 1;
    }
}

#[cfg(test)]
pub(crate) fn valuation_u64(mut a: u64, p: u64) -> Valuation {
    if a == 0 {
        return Valuation::Infinity;
    }
    let mut k = 0;
    while a % p == 0 {
        a /= p;
        k += 1;
    }
    Valuation::Finite(k)
}

/// Largest `k` with `p^k | a`; `Infinity` for `a = 0`.
pub fn val_p(a: &BigInt, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(valuation(a, p))
}

fn digit_sum_u128(mut a: u128, p: u64) -> u64 {
    let p = p as u128;
    let mut s = 0u64;
    while a > 0 {
        s += (a % p) as u64;
        a /= p;
    }
    s
}

/// Sum of the base-p digits of `a`.
pub fn digit_sum_p(a: &BigInt, p: u64) -> Result<u64> {
    require_prime(p)?;
    if a.sign() == Sign::Minus {
        return Err(Error::invalid("digit sum of a negative integer"));
    }
    let pb = BigUint::from(p);
    let mut m = a.magnitude().clone();
    let mut s = 0u64;
    while !m.is_zero() {
        let (q, r) = m.div_rem(&pb);
        s += r.to_u64().unwrap_or(0);
        m = q;
    }
    Ok(s)
}

/// Number of carries performed when adding `a + b` in base `p`.
pub fn carries_p(a: u64, b: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    let (mut x, mut y, mut carry, mut count) = (a, b, 0u64, 0u64);
    while x > 0 || y > 0 {
        let s = x % p + y % p + carry;
        carry = u64::from(s >= p);
        count += carry;
        x /= p;
        y /= p;
    }
    Ok(count)
}

/// Legendre: ν_p(a!) = (a − σ_p(a))/(p − 1).
pub fn factorial_val_p(a: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    Ok((a - digit_sum_u128(a as u128, p)) / (p - 1))
}

/// ν_p of the binomial `C(a+b, b)`, via Kummer's carry count and confirmed
/// through factorial valuations.
pub fn binom_val_p(a: u64, b: u64, p: u64) -> Result<u64> {
    let kummer = carries_p(a, b, p)?;
    let total = a as u128 + b as u128;
    let legendre_total = (total - digit_sum_u128(total, p) as u128) / (p as u128 - 1);
    let legendre = legendre_total as u64 - factorial_val_p(a, p)? - factorial_val_p(b, p)?;
    if legendre != kummer {
        return Err(Error::Internal(format!(
            "Kummer ({kummer}) and Legendre ({legendre}) disagree for C({total},{b}) at {p}"
        )));
    }
    Ok(kummer)
}

fn small_binom_mod(n: u64, m: u64, p: u64) -> u64 {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..m {
        num = mul_mod(num, (n - i) % p, p);
        den = mul_mod(den, (i + 1) % p, p);
    }
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// `C(n, m) mod p` by Lucas' digit-wise product. Returns 0 when `m > n`.
pub fn binom_mod_p(n: u64, m: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    if m > n {
        return Ok(0);
    }
    let (mut n, mut m, mut acc) = (n, m, 1u64);
    while m > 0 || n > 0 {
        let (nj, mj) = (n % p, m % p);
        acc = mul_mod(acc, small_binom_mod(nj, mj, p), p);
        if acc == 0 {
            return Ok(0);
        }
        n /= p;
        m /= p;
    }
    Ok(acc)
}

/// An integer split as `sign · Π p^e · cofactor`. The cofactor, when present,
/// is composite with no prime factor below the trial bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FactoredWire", try_from = "FactoredWire")]
pub struct FactoredInt {
    pub sign: i8,
    pub factors: BTreeMap<BigUint, u32>,
    pub cofactor: Option<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct PrimePower {
    prime: String,
    exponent: u32,
}

#[derive(Serialize, Deserialize)]
struct FactoredWire {
    sign: i8,
    factors: Vec<PrimePower>,
    cofactor: Option<String>,
}

impl From<FactoredInt> for FactoredWire {
    fn from(f: FactoredInt) -> Self {
        FactoredWire {
            sign: f.sign,
            factors: f
                .factors
                .iter()
                .map(|(p, &exponent)| PrimePower { prime: p.to_string(), exponent })
                .collect(),
            cofactor: f.cofactor.map(|c| c.to_string()),
        }
    }
}

impl TryFrom<FactoredWire> for FactoredInt {
    type Error = String;

    fn try_from(w: FactoredWire) -> std::result::Result<Self, String> {
        let parse = |s: &str| s.parse::<BigUint>().map_err(|e| format!("{s}: {e}"));
        let mut factors = BTreeMap::new();
        for pp in &w.factors {
            factors.insert(parse(&pp.prime)?, pp.exponent);
        }
        let cofactor = w.cofactor.as_deref().map(parse).transpose()?;
        Ok(FactoredInt { sign: w.sign, factors, cofactor })
    }
}

impl FactoredInt {
    pub fn unit(sign: i8) -> Self {
        FactoredInt { sign, factors: BTreeMap::new(), cofactor: None }
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors.get(&BigUint::from(p)).copied().unwrap_or(0)
    }

    pub fn reassemble(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, &e) in &self.factors {
            acc *= p.pow(e);
        }
        if let Some(c) = &self.cofactor {
            acc *= c;
        }
        BigInt::from_biguint(if self.sign < 0 { Sign::Minus } else { Sign::Plus }, acc)
    }

    /// Product of two factorizations.
    pub fn merge(&self, other: &FactoredInt) -> FactoredInt {
        let mut factors = self.factors.clone();
        for (p, &e) in &other.factors {
            *factors.entry(p.clone()).or_insert(0) += e;
        }
        let cofactor = match (&self.cofactor, &other.cofactor) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a * b),
        };
        FactoredInt { sign: self.sign * other.sign, factors, cofactor }
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if let Some(c) = &self.cofactor {
            parts.push(format!("[{c}]"));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        let body = parts.join(" * ");
        if self.sign < 0 {
            write!(f, "-{body}")
        } else {
            f.write_str(&body)
        }
    }
}

/// Options for [`factor`]: trial bound plus an optional Pollard-Brent stage.
#[derive(Clone, Copy, Debug)]
pub struct FactorOptions {
    pub bound: u64,
    /// Iteration budget per rho attempt; 0 disables the rho stage.
    pub rho_iterations: u64,
    pub seed: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { bound: DEFAULT_TRIAL_BOUND, rho_iterations: 200_000, seed: 0x5eed }
    }
}

fn trial_divide(mut n: BigUint, bound: u64, out: &mut BTreeMap<BigUint, u32>) -> BigUint {
    let mut d = 2u64;
    while d <= bound {
        // Machine-word fast path once the remainder fits.
        if let Some(small) = n.to_u64() {
            let mut m = small;
            while d <= bound && d.saturating_mul(d) <= m {
                if m % d == 0 {
                    let mut e = 0;
                    while m % d == 0 {
                        m /= d;
                        e += 1;
                    }
                    *out.entry(BigUint::from(d)).or_insert(0) += e;
                }
                d += if d == 2 { 1 } else { 2 };
            }
            if d.saturating_mul(d) > m && m > 1 {
                *out.entry(BigUint::from(m)).or_insert(0) += 1;
                return BigUint::one();
            }
            return BigUint::from(m);
        }
        let (q, r) = n.div_rem(&BigUint::from(d));
        if r.is_zero() {
            n = q;
            *out.entry(BigUint::from(d)).or_insert(0) += 1;
            continue;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    n
}

fn pollard_brent(n: &BigUint, budget: u64, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let one = BigUint::one();
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for _attempt in 0..8 {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&one, n);
        let m = 64u64;
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        while g == one && spent < budget {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
                spent += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

fn split_composite(
    n: BigUint,
    opts: &FactorOptions,
    rng: &mut ChaCha8Rng,
    out: &mut BTreeMap<BigUint, u32>,
    leftover: &mut Vec<BigUint>,
) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let root = n.sqrt();
    if &root * &root == n {
        split_composite(root.clone(), opts, rng, out, leftover);
        split_composite(root, opts, rng, out, leftover);
        return;
    }
    if opts.rho_iterations == 0 {
        leftover.push(n);
        return;
    }
    match pollard_brent(&n, opts.rho_iterations, rng) {
        Some(d) => {
            let other = &n / &d;
            split_composite(d, opts, rng, out, leftover);
            split_composite(other, opts, rng, out, leftover);
        }
        None => leftover.push(n),
    }
}

fn factor_impl(nz: &BigInt, opts: &FactorOptions) -> Result<FactoredInt> {
    if opts.bound < 2 {
        return Err(Error::invalid("trial bound must be at least 2"));
    }
    if nz.is_zero() {
        return Err(Error::invalid("cannot factor zero"));
    }
    let sign = if nz.sign() == Sign::Minus { -1 } else { 1 };
    let mut factors = BTreeMap::new();
    let rest = trial_divide(nz.magnitude().clone(), opts.bound, &mut factors);
    if rest.is_one() {
        return Ok(FactoredInt { sign, factors, cofactor: None });
    }
    let bound_sq = BigUint::from(opts.bound) * BigUint::from(opts.bound);
    if rest < bound_sq || is_probable_prime(&rest) {
        *factors.entry(rest).or_insert(0) += 1;
        return Ok(FactoredInt { sign, factors, cofactor: None });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut leftover = Vec::new();
    split_composite(rest, opts, &mut rng, &mut factors, &mut leftover);
    let cofactor = if leftover.is_empty() {
        None
    } else {
        Some(leftover.into_iter().fold(BigUint::one(), |a, b| a * b))
    };
    Ok(FactoredInt { sign, factors, cofactor })
}

/// Trial division up to `bound`; a leftover that is neither 1 nor a
/// (probable) prime is returned as the cofactor.
pub fn factor_trial(nz: &BigInt, bound: u64) -> Result<FactoredInt> {
    factor_impl(nz, &FactorOptions { bound, rho_iterations: 0, seed: 0 })
}

/// Trial division followed by a seeded Pollard-Brent stage.
pub fn factor(nz: &BigInt, opts: &FactorOptions) -> Result<FactoredInt> {
    factor_impl(nz, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Squarefree {
    Yes,
    No,
    Unknown,
}

impl Squarefree {
    pub fn of(f: &FactoredInt) -> Squarefree {
        if f.factors.values().any(|&e| e >= 2) {
            return Squarefree::No;
        }
        match &f.cofactor {
            None => Squarefree::Yes,
            Some(c) => {
                let r = c.sqrt();
                if &r * &r == *c {
                    Squarefree::No
                } else {
                    Squarefree::Unknown
                }
            }
        }
    }
}

/// Squarefreeness proven by trial division; `Unknown` when a composite
/// cofactor survives.
pub fn is_squarefree(nz: &BigInt, bound: u64) -> Result<Squarefree> {
    Ok(Squarefree::of(&factor_trial(nz, bound)?))
}

/// Primes up to `bound` (inclusive).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(val_p(&bi(451251), 3).unwrap(), Valuation::Finite(6));
        assert_eq!(val_p(&bi(0), 5).unwrap(), Valuation::Infinity);
        assert_eq!(val_p(&bi(45), 5).unwrap(), Valuation::Finite(1));
        assert_eq!(val_p(&bi(-81), 3).unwrap(), Valuation::Finite(4));
        assert!(matches!(val_p(&bi(10), 9), Err(Error::InvalidArgument(_))));
        assert!(Valuation::Infinity > Valuation::Finite(u64::MAX));
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum_p(&bi(8), 3).unwrap(), 4);
        assert_eq!(digit_sum_p(&bi(0), 7).unwrap(), 0);
        for p in [2u64, 3, 5, 13] {
            assert_eq!(digit_sum_p(&bi(p as i64 - 1), p).unwrap(), p - 1);
        }
        assert!(digit_sum_p(&bi(-1), 3).is_err());
    }

    #[test]
    fn carries_and_binomials() {
        assert_eq!(carries_p(3, 3, 3).unwrap(), 0);
        assert_eq!(carries_p(2, 2, 2).unwrap(), 1);
        assert_eq!(carries_p(17, 0, 5).unwrap(), 0);
        assert_eq!(binom_val_p(2, 2, 2).unwrap(), 1);
        // C(6,3) = 20
        assert_eq!(binom_val_p(3, 3, 3).unwrap(), 0);
        assert_eq!(binom_val_p(9, 0, 7).unwrap(), 0);
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(binom_mod_p(7, 2, 5).unwrap(), 1);
        assert_eq!(binom_mod_p(40, 0, 7).unwrap(), 1);
        for k in 1..7 {
            assert_eq!(binom_mod_p(7, k, 7).unwrap(), 0);
        }
        assert_eq!(binom_mod_p(3, 5, 7).unwrap(), 0);
    }

    #[test]
    fn factorization_examples() {
        let f = factor_trial(&bi(451251), DEFAULT_TRIAL_BOUND).unwrap();
        assert_eq!(f.exponent(3), 6);
        assert_eq!(f.exponent(619), 1);
        assert!(f.cofactor.is_none());
        assert_eq!(f.factors.len(), 2);

        let u = factor_trial(&bi(-1), 2).unwrap();
        assert_eq!(u.sign, -1);
        assert!(u.factors.is_empty());

        let g = factor_trial(&bi(45), 10).unwrap();
        assert_eq!((g.exponent(3), g.exponent(5)), (2, 1));
        assert!(factor_trial(&bi(0), 10).is_err());
        assert!(factor_trial(&bi(10), 1).is_err());
    }

    #[test]
    fn composite_cofactor_survives_small_bound() {
        // 1000003 * 1000033, both prime, above a bound of 100
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factor_trial(&n, 100).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.cofactor, Some(n.magnitude().clone()));
        assert_eq!(Squarefree::of(&f), Squarefree::Unknown);

        let split = factor(&n, &FactorOptions { bound: 100, ..Default::default() }).unwrap();
        assert!(split.is_complete());
        assert_eq!(split.exponent(1_000_003), 1);
        assert_eq!(split.exponent(1_000_033), 1);

        let sq = BigInt::from(1_000_003u64).pow(2);
        assert_eq!(is_squarefree(&sq, 100).unwrap(), Squarefree::No);
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(is_squarefree(&bi(451253), DEFAULT_TRIAL_BOUND).unwrap(), Squarefree::Yes);
        assert_eq!(is_squarefree(&bi(451249), DEFAULT_TRIAL_BOUND).unwrap(), Squarefree::Yes);
        assert_eq!(is_squarefree(&bi(25), 10).unwrap(), Squarefree::No);
        assert_eq!(is_squarefree(&bi(1), 2).unwrap(), Squarefree::Yes);
        assert!(is_squarefree(&bi(0), 2).is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, primes_up_to(59));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        let m127 = (BigUint::one() << 127u32) - BigUint::one();
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * BigUint::from(3u32))));
    }
}
