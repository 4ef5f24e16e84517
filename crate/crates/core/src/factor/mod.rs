//! Factorization over 𝔽_p, Hensel lifting, factor-shape arithmetic and
//! functional graphs of T_ℓ over small finite fields.

mod hensel;
mod orbit;
mod shape;

pub use hensel::hensel_lift;
pub use orbit::{orbit_graph, OrbitGraph, TreeSummary, DEFAULT_MAX_FIELD_SIZE};
pub use shape::{mu_h, predict_factor_shape, FactorShape, ShapePart};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::padic::mul_mod;
use crate::poly::ModPoly;

/// Frobenius `h ↦ h^p mod f` as a linear map on `𝔽_p[x]/(f)`.
pub(crate) struct Frobenius {
    f: ModPoly,
    rows: Vec<Vec<u64>>,
}

impl Frobenius {
    pub(crate) fn new(f: &ModPoly) -> Result<Frobenius> {
        let p = f.modulus();
        let n = f.degree().ok_or(Error::DivisionByZero)?;
        let xp = ModPoly::x(p).pow_mod_u64(p, f)?;
        let mut rows = Vec::with_capacity(n);
        let mut cur = ModPoly::one(p).rem(f)?;
        for _ in 0..n {
            let mut row = cur.coeffs().to_vec();
            row.resize(n, 0);
            rows.push(row);
            cur = cur.mul_mod_poly(&xp, f)?;
        }
        Ok(Frobenius { f: f.clone(), rows })
    }

    pub(crate) fn apply(&self, h: &ModPoly) -> Result<ModPoly> {
        let p = self.f.modulus();
        let h = h.rem(&self.f)?;
        let n = self.rows.len();
        let mut acc = vec![0u128; n];
        let small = p < (1 << 32);
        for (j, &hj) in h.coeffs().iter().enumerate() {
            if hj == 0 {
                continue;
            }
            for (slot, &q) in acc.iter_mut().zip(&self.rows[j]) {
                if small {
                    *slot += hj as u128 * q as u128;
                    if *slot >= 1 << 120 {
                        *slot %= p as u128;
                    }
                } else {
                    *slot = (*slot + mul_mod(hj, q, p) as u128) % p as u128;
                }
            }
        }
        Ok(ModPoly::new(p, acc.into_iter().map(|v| (v % p as u128) as u64).collect()))
    }
}

/// Squarefree decomposition of a nonzero polynomial: pairs `(g_i, i)` with
/// each `g_i` monic squarefree, pairwise coprime, and `f = lc·Π g_i^i`.
pub fn squarefree(f: &ModPoly) -> Result<Vec<(ModPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::invalid("squarefree decomposition of zero"));
    }
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return Ok(out);
    }
    let p = f.modulus();
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.div_exact(&y)?;
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.div_exact(&y)?;
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root()?;
        for (g, j) in squarefree(&root)? {
            out.push((g, j * p as u32));
        }
    }
    out.sort_by_key(|a| a.1);
    Ok(out)
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(g_d, d)` where `g_d` is the product of all irreducible factors of degree `d`.
pub fn ddf(f: &ModPoly) -> Result<Vec<(ModPoly, usize)>> {
    let p = f.modulus();
    let mut out = Vec::new();
    let mut rest = f.monic();
    if rest.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let frob = Frobenius::new(&rest)?;
    let x = ModPoly::x(p);
    let mut h = x.rem(&rest)?;
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push((rest.clone(), deg));
            break;
        }
        h = frob.apply(&h)?;
        let g = rest.gcd(&h.sub(&x)?)?;
        if !g.is_one() {
            rest = rest.div_exact(&g)?;
            out.push((g, d));
        }
    }
    Ok(out)
}

fn random_poly(rng: &mut ChaCha8Rng, p: u64, len: usize) -> ModPoly {
    ModPoly::new(p, (0..len).map(|_| rng.gen_range(0..p)).collect())
}

/// Equal-degree splitting of a monic squarefree product of degree-`d` irreducibles.
pub fn edf(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<ModPoly>> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n % d != 0 {
        return Err(Error::invalid("degree is not a multiple of the factor degree"));
    }
    if n == d {
        return Ok(vec![f.monic()]);
    }
    let p = f.modulus();
    let half = (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1;
    let frob = if p == 2 { Some(Frobenius::new(f)?) } else { None };
    loop {
        let a = random_poly(rng, p, n);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = match &frob {
            Some(frob) => {
                let mut term = a.rem(f)?;
                let mut tr = term.clone();
                for _ in 1..d {
                    term = frob.apply(&term)?;
                    tr = tr.add(&term)?;
                }
                tr
            }
            None => a.pow_mod(&half, f)?.sub(&ModPoly::one(p))?,
        };
        let g = f.gcd(&b)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = edf(&g, d, rng)?;
            out.extend(edf(&f.div_exact(&g)?, d, rng)?);
            return Ok(out);
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree and then coefficients. The leading unit is dropped.
pub fn factor_mod_p(f: &ModPoly, seed: u64) -> Result<Vec<(ModPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::invalid("cannot factor the zero polynomial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, mult) in squarefree(f)? {
        for (part, d) in ddf(&g)? {
            for irr in edf(&part, d, &mut rng)? {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Rabin's test: `x^{p^n} ≡ x` and `gcd(x^{p^{n/q}} − x, f) = 1` for each prime `q | n`.
pub fn is_irreducible(f: &ModPoly) -> Result<bool> {
    let Some(n) = f.degree() else {
        return Ok(false);
    };
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic();
    let p = f.modulus();
    let frob = Frobenius::new(&f)?;
    let x = ModPoly::x(p);
    let mut powers = Vec::with_capacity(n + 1);
    let mut h = x.rem(&f)?;
    powers.push(h.clone());
    for _ in 0..n {
        h = frob.apply(&h)?;
        powers.push(h.clone());
    }
    if powers[n] != x.rem(&f)? {
        return Ok(false);
    }
    for q in prime_divisors(n) {
        let g = f.gcd(&powers[n / q].sub(&x)?)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// First monic irreducible of degree `m` over 𝔽_p in lexicographic order
/// of the lower coefficients.
pub fn first_irreducible(p: u64, m: usize) -> Result<ModPoly> {
    if m == 1 {
        return Ok(ModPoly::x(p));
    }
    let total = p.checked_pow(m as u32).ok_or_else(|| Error::ResourceLimit("field too large".into()))?;
    for idx in 0..total {
        let mut c = ModPoly::from_index(p, idx, m).coeffs().to_vec();
        c.resize(m, 0);
        c.push(1);
        let cand = ModPoly::new(p, c);
        if is_irreducible(&cand)? {
            return Ok(cand);
        }
    }
    Err(Error::Internal(format!("no irreducible of degree {m} over F_{p}")))
}
