//! Closed forms for `K = ℚ(θ)`, `Φ(θ) = 0`: bad residues, monogenicity,
//! local indices, discriminants, integral bases and the assembled report.

mod basis;
mod disc;
mod report;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_t, check_ell, tau_factor, ChebInstance};
use crate::error::{Error, Result};
use crate::factor::{factor_mod_p, hensel_lift};
use crate::montes::{
    dedekind_test, ind_phi, index_at_prime, phi_development_polygon, IndexOptions, IndexResult, NewtonPolygon,
};
use crate::padic::{is_squarefree, valuation, Squarefree, Valuation};
use crate::poly::IntPoly;

pub use basis::{char_poly, integral_basis, BasisElement, BasisKind, IntegralBasis, BASIS_CHECK_DEGREE};
pub use disc::{field_disc, poly_disc, FieldDisc, PolyDisc, PrimeExponent, StructuredValue, Term, NUMERIC_DIGIT_CAP};
pub use report::{analyze, AnalysisOptions, AnalysisReport, IndexMethod, PrimeIndex, SCHEMA_VERSION};

/// Polygon cross-checks run up to this degree.
pub const CROSS_CHECK_DEGREE: usize = 343;

/// Dedekind cross-checks run up to this degree.
pub const DEDEKIND_CHECK_DEGREE: usize = 125;

/// `{T_ℓ(a) mod ℓ² : 0 ≤ a < ℓ}`, the residues with `ν_ℓ(Φ(t)) ≥ 2`.
pub fn bad_residues(ell: u64) -> Result<BTreeSet<u64>> {
    check_ell(ell)?;
    let m = BigInt::from(ell * ell);
    let t_ell = cheb_t(ell as usize);
    Ok((0..ell)
        .map(|a| t_ell.eval(&BigInt::from(a)).mod_floor(&m).to_u64().unwrap_or(0))
        .collect())
}

/// `ν_ℓ(Φ(t))`.
pub fn nu_ell_phi_t(inst: &ChebInstance) -> Valuation {
    valuation(&inst.phi_at_t(), inst.ell)
}

fn symmetric_residue(t: &BigInt, m: u64) -> BigInt {
    let m = BigInt::from(m);
    let r = t.mod_floor(&m);
    if &r * 2 > m {
        r - m
    } else {
        r
    }
}

/// `t ≡ ±2 mod p^k` for the given modulus.
fn is_pm2_mod(t: &BigInt, m: &BigInt) -> bool {
    (t - BigInt::from(2)).is_multiple_of(m) || (t + BigInt::from(2)).is_multiple_of(m)
}

/// `ν_p(D(Φ)) = [p = ℓ]·nℓⁿ + ν_p(t² − 4)·(ℓⁿ − 1)/2`.
pub fn disc_valuation(inst: &ChebInstance, p: u64) -> Result<u64> {
    let d = inst.degree() as u64;
    let nu = valuation(&inst.t2_minus_4(), p)
        .finite()
        .ok_or_else(|| Error::invalid("t = ±2 makes the discriminant vanish"))?;
    let own = if p == inst.ell { inst.n as u64 * d } else { 0 };
    Ok(own + nu * (d - 1) / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monogenic {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonogenicVerdict {
    pub monogenic: Monogenic,
    /// `(T_ℓ(t) − t) mod ℓ²`; the ℓ-condition holds when it is nonzero.
    pub ell_residue: u64,
    pub ell_condition: bool,
    pub t_minus_2: Squarefree,
    pub t_plus_2: Squarefree,
    pub reasons: Vec<String>,
    /// Dedekind maximality at every prime of the discriminant, when run.
    pub dedekind_agrees: Option<bool>,
}

fn squarefree_status(a: &BigInt, bound: u64) -> Result<Squarefree> {
    if a.is_zero() {
        return Ok(Squarefree::No);
    }
    is_squarefree(a, bound)
}

/// Monogenicity of `ℤ[θ]` from the closed conditions on `(ℓ, t)`.
pub fn monogenicity(inst: &ChebInstance, opts: &AnalysisOptions) -> Result<MonogenicVerdict> {
    let ell = inst.ell;
    let m = BigInt::from(ell * ell);
    let t = &inst.t;
    let ell_residue = (cheb_t(ell as usize).eval(t) - t).mod_floor(&m).to_u64().unwrap_or(0);
    let ell_condition = ell_residue != 0;
    let t_minus_2 = squarefree_status(&(t - 2), opts.factor.bound)?;
    let t_plus_2 = squarefree_status(&(t + 2), opts.factor.bound)?;
    let mut reasons = Vec::new();
    if ell_condition {
        reasons.push(format!("T_{ell}(t) - t = {ell_residue} mod {ell}^2"));
    } else {
        reasons.push(format!("T_{ell}(t) - t = 0 mod {ell}^2"));
    }
    for (name, st) in [("t - 2", t_minus_2), ("t + 2", t_plus_2)] {
        reasons.push(match st {
            Squarefree::Yes => format!("{name} is squarefree"),
            Squarefree::No => format!("{name} is not squarefree"),
            Squarefree::Unknown => format!("squarefreeness of {name} is unknown"),
        });
    }
    let monogenic = if !ell_condition || t_minus_2 == Squarefree::No || t_plus_2 == Squarefree::No {
        Monogenic::No
    } else if t_minus_2 == Squarefree::Yes && t_plus_2 == Squarefree::Yes {
        Monogenic::Yes
    } else {
        Monogenic::Unknown
    };
    if !inst.irreducibility.is_proven() {
        reasons.push("irreducibility of the polynomial is not proven".into());
    }
    let mut verdict =
        MonogenicVerdict { monogenic, ell_residue, ell_condition, t_minus_2, t_plus_2, reasons, dedekind_agrees: None };
    if inst.degree() <= DEDEKIND_CHECK_DEGREE && inst.irreducibility.is_proven() && monogenic != Monogenic::Unknown {
        if let Some(primes) = disc_primes(inst, opts)? {
            let mut all = true;
            for p in primes {
                all &= dedekind_test(&inst.phi_poly, p, opts.seed)?.maximal;
            }
            if all != (monogenic == Monogenic::Yes) {
                return Err(Error::TheoremViolation(format!(
                    "closed conditions say {monogenic:?} but Dedekind maximality is {all}"
                )));
            }
            verdict.dedekind_agrees = Some(true);
        }
    }
    Ok(verdict)
}

/// Primes dividing `D(Φ)` when they are all known and fit a machine word.
pub(crate) fn disc_primes(inst: &ChebInstance, opts: &AnalysisOptions) -> Result<Option<Vec<u64>>> {
    let f = crate::padic::factor(&inst.t2_minus_4(), &opts.factor)?;
    if !f.is_complete() {
        return Ok(None);
    }
    let mut out: BTreeSet<u64> = BTreeSet::from([inst.ell]);
    for p in f.factors.keys() {
        match p.to_u64() {
            Some(p) => out.insert(p),
            None => return Ok(None),
        };
    }
    Ok(Some(out.into_iter().collect()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllIndex {
    /// `ν_ℓ(Φ(t))`, `None` when `Φ(t) = 0`.
    pub v: Option<u64>,
    pub value: u64,
    /// Montes computation at `φ = x − (t mod ℓ)` when it was run.
    pub polygon: Option<IndexResult>,
}

/// `ind_ℓ(Φ) = Σ_{i=1}^{min(v−1, n)} ℓ^{n−i}`, cross-checked against the
/// polygon up to [`CROSS_CHECK_DEGREE`].
pub fn ind_ell_closed(inst: &ChebInstance, seed: u64) -> Result<EllIndex> {
    let ell = inst.ell;
    if is_pm2_mod(&inst.t, &BigInt::from(ell * ell)) {
        return Err(Error::OutOfTheory(format!("t = ±2 mod {ell}^2")));
    }
    let v = nu_ell_phi_t(inst).finite();
    let k = v.map_or(inst.n as u64, |v| v.saturating_sub(1).min(inst.n as u64));
    let value = (1..=k).map(|i| ell.pow(inst.n - i as u32)).sum();
    let polygon = if inst.degree() <= CROSS_CHECK_DEGREE {
        let r = ell_polygon_index(inst, seed)?;
        if !r.exact || r.lower != value {
            return Err(Error::TheoremViolation(format!(
                "closed form gives ind_{ell} = {value}, polygon gives [{}, {}]",
                r.lower, r.upper
            )));
        }
        Some(r)
    } else {
        None
    };
    Ok(EllIndex { v, value, polygon })
}

/// `φ = x − c` with `c` the symmetric residue of `t` mod ℓ.
pub fn ell_phi(inst: &ChebInstance) -> IntPoly {
    IntPoly::x_minus(&symmetric_residue(&inst.t, inst.ell))
}

/// Raw Montes computation at ℓ with the linear lift of `t̄`.
pub fn ell_polygon_index(inst: &ChebInstance, seed: u64) -> Result<IndexResult> {
    let opts = IndexOptions {
        seed,
        lifts: vec![ell_phi(inst)],
        disc_valuation: Some(disc_valuation(inst, inst.ell)?),
    };
    index_at_prime(&inst.phi_poly, inst.ell, &opts)
}

/// The principal polygon of `Φ` at `φ = x − (t mod ℓ)`.
pub fn ell_polygon(inst: &ChebInstance) -> Result<NewtonPolygon> {
    phi_development_polygon(&inst.phi_poly, &ell_phi(inst), inst.ell)
}

fn check_p_hypotheses(inst: &ChebInstance, p: &BigInt) -> Result<u64> {
    let two = BigInt::from(2);
    if p == &two || !p.is_positive() {
        return Err(Error::OutOfTheory(format!("p = {p} is not an odd prime")));
    }
    if p == &BigInt::from(inst.ell) {
        return Err(Error::OutOfTheory("p equals ell".into()));
    }
    if inst.t.is_even() {
        return Err(Error::OutOfTheory("t is even".into()));
    }
    let d = inst.t2_minus_4();
    let mut nu = 0u64;
    let mut r = d;
    while !r.is_zero() && r.is_multiple_of(p) {
        r /= p;
        nu += 1;
    }
    if nu == 0 {
        return Err(Error::OutOfTheory(format!("{p} does not divide t^2 - 4")));
    }
    Ok(nu)
}

/// `ind_p(Φ) = ⌊ν_p(t² − 4)/2⌋·(ℓⁿ − 1)/2` for odd `p ≠ ℓ` dividing
/// `t² − 4`, `t` odd.
pub fn ind_p_closed(inst: &ChebInstance, p: &BigInt) -> Result<u64> {
    let nu = check_p_hypotheses(inst, p)?;
    Ok(nu / 2 * (inst.degree() as u64 - 1) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedFactor {
    pub phi: IntPoly,
    pub polygon: NewtonPolygon,
    pub ind: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedCheck {
    pub p: u64,
    /// `±2 ≡ t mod p`.
    pub s: i64,
    pub nu: u64,
    pub factors: Vec<LiftedFactor>,
    /// Polygon of `Φ` at `x − s`.
    pub linear: LiftedFactor,
    pub index: IndexResult,
}

/// Hensel lifts to precision `e` of the irreducible factors of `τ̄`, where
/// `T_ℓⁿ(x) − s = (x − s)·τ(x)²`.
pub fn tau_lifts(inst: &ChebInstance, p: u64, s: i64, e: u32, seed: u64) -> Result<Vec<IntPoly>> {
    let (_, tau) = tau_factor(inst.ell, inst.n, s)?;
    let factors: Vec<_> = factor_mod_p(&tau.reduce_mod(p), seed)?.into_iter().map(|(g, _)| g).collect();
    hensel_lift(&tau, &factors, e, p)
}

fn sign_of_two(t: &BigInt, p: u64) -> i64 {
    if (t - BigInt::from(2)).is_multiple_of(&BigInt::from(p)) {
        2
    } else {
        -2
    }
}

/// Montes computation at each Hensel-lifted factor of `τ`, asserting the
/// one-sided `(0, ν)–(2, 0)` shape and that `x ∓ 2` contributes nothing.
pub fn lifted_polygon_check(inst: &ChebInstance, p: u64, seed: u64) -> Result<LiftedCheck> {
    let nu = check_p_hypotheses(inst, &BigInt::from(p))?;
    let s = sign_of_two(&inst.t, p);
    let lifts = tau_lifts(inst, p, s, nu as u32 + 1, seed)?;
    let mut factors = Vec::with_capacity(lifts.len());
    for phi in &lifts {
        let polygon = phi_development_polygon(&inst.phi_poly, phi, p)?;
        let dphi = phi.degree().unwrap_or(0);
        let ind = ind_phi(&polygon, dphi);
        if polygon.vertices != [(0, nu), (2, 0)] || ind != nu / 2 * dphi as u64 {
            return Err(Error::TheoremViolation(format!(
                "lifted factor {phi} at p = {p} has vertices {:?} and index {ind}",
                polygon.vertices
            )));
        }
        factors.push(LiftedFactor { phi: phi.clone(), polygon, ind });
    }
    let lin_phi = IntPoly::x_minus(&BigInt::from(s));
    let lin_poly = phi_development_polygon(&inst.phi_poly, &lin_phi, p)?;
    let lin_ind = ind_phi(&lin_poly, 1);
    let v0 = valuation(&inst.phi_poly.eval(&BigInt::from(s)), p).finite().unwrap_or(0);
    if lin_poly.vertices != [(0, v0), (1, 0)] || lin_ind != 0 {
        return Err(Error::TheoremViolation(format!("x - ({s}) polygon at p = {p} is {:?}", lin_poly.vertices)));
    }
    let opts = IndexOptions { seed, lifts, disc_valuation: Some(disc_valuation(inst, p)?) };
    let index = index_at_prime(&inst.phi_poly, p, &opts)?;
    let expected = nu / 2 * (inst.degree() as u64 - 1) / 2;
    if !index.exact || index.lower != expected {
        return Err(Error::TheoremViolation(format!(
            "ind_{p} closed form {expected} vs polygon [{}, {}]",
            index.lower, index.upper
        )));
    }
    Ok(LiftedCheck {
        p,
        s,
        nu,
        factors,
        linear: LiftedFactor { phi: lin_phi, polygon: lin_poly, ind: lin_ind },
        index,
    })
}

/// Montes computation at `p | t² − 4` with Hensel-lifted `τ` factors but no
/// shape assertions; used outside the odd-`t` setting.
pub(crate) fn tau_polygon_index(inst: &ChebInstance, p: u64, seed: u64) -> Result<IndexResult> {
    let nu = valuation(&inst.t2_minus_4(), p).finite().unwrap_or(0);
    let s = sign_of_two(&inst.t, p);
    let lifts = if p == 2 { Vec::new() } else { tau_lifts(inst, p, s, nu as u32 + 1, seed)? };
    let opts = IndexOptions { seed, lifts, disc_valuation: Some(disc_valuation(inst, p)?) };
    index_at_prime(&inst.phi_poly, p, &opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub ell: u64,
    pub prime_bound: u64,
    /// `(ℓ² − ℓ + 2)/ℓ²` as `[numerator, denominator]`.
    pub prefactor: [u64; 2],
    /// `Π_{3 ≤ p ≤ bound} (1 − 1/(p² − 1))`.
    pub partial_product: f64,
    pub value: f64,
    /// The truncated value exceeds the limit by at most this much.
    pub tail_bound: f64,
}

/// Truncated Euler product for the density of monogenic `t`.
pub fn monogenic_density(ell: u64, prime_bound: u64) -> Result<Density> {
    check_ell(ell)?;
    if prime_bound < 3 {
        return Err(Error::invalid("prime bound must be at least 3"));
    }
    let num = ell * ell - ell + 2;
    let den = ell * ell;
    let g = num.gcd(&den);
    let partial_product: f64 = crate::padic::primes_up_to(prime_bound)
        .into_iter()
        .skip(1)
        .map(|p| {
            let p = p as f64;
            1.0 - 1.0 / (p * p - 1.0)
        })
        .product();
    let value = num as f64 / den as f64 * 6.0 / std::f64::consts::PI.powi(2) * partial_product;
    // Σ_{n > B} 1/(n² − 1) = (1/B + 1/(B+1))/2 bounds the missing factors
    let b = prime_bound as f64;
    let tail_bound = value * (1.0 / b + 1.0 / (b + 1.0)) / 2.0;
    Ok(Density { ell, prime_bound, prefactor: [num / g, den / g], partial_product, value, tail_bound })
}

/// `p^k` as a big integer.
pub(crate) fn big_pow(p: u64, k: u64) -> BigInt {
    Pow::pow(BigInt::from(p), k)
}
