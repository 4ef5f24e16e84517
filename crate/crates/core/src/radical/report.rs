use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::{
    disc_valuation, field_disc, ind_ell_closed, ind_p_closed, integral_basis, lifted_polygon_check, monogenicity,
    nu_ell_phi_t, poly_disc, tau_polygon_index, FieldDisc, IntegralBasis, MonogenicVerdict, PolyDisc,
    CROSS_CHECK_DEGREE, DEDEKIND_CHECK_DEGREE,
};
use crate::chebyshev::{ChebInstance, Irreducibility};
use crate::error::{Error, Result};
use crate::montes::{dedekind_test, index_at_prime, IndexOptions};
use crate::padic::FactorOptions;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalysisOptions {
    pub seed: u64,
    pub factor: FactorOptions,
}


#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMethod {
    ClosedForm,
    Polygon,
    Dedekind,
    /// No computation applied; bounds come from the discriminant alone.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIndex {
    #[serde(with = "crate::serde_big")]
    pub prime: BigInt,
    /// `ν_p(D(Φ))`, absent for an unfactored cofactor.
    pub disc_valuation: Option<u64>,
    pub ind: Option<u64>,
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub method: IndexMethod,
    pub out_of_theory: bool,
    /// What independently confirmed the value, if anything.
    pub cross_check: Option<String>,
    pub note: String,
}

impl PrimeIndex {
    fn exact(prime: BigInt, nu: u64, ind: u64, method: IndexMethod, note: impl Into<String>) -> PrimeIndex {
        PrimeIndex {
            prime,
            disc_valuation: Some(nu),
            ind: Some(ind),
            lower: ind,
            upper: ind,
            exact: true,
            method,
            out_of_theory: false,
            cross_check: None,
            note: note.into(),
        }
    }

    fn bounds(prime: BigInt, nu: Option<u64>, lower: u64, upper: u64, method: IndexMethod, note: String) -> PrimeIndex {
        PrimeIndex {
            prime,
            disc_valuation: nu,
            ind: (lower == upper).then_some(lower),
            lower,
            upper,
            exact: lower == upper,
            method,
            out_of_theory: true,
            cross_check: None,
            note,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub ell: u64,
    pub n: u32,
    #[serde(with = "crate::serde_big")]
    pub t: BigInt,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub inputs: Inputs,
    pub seed: u64,
    pub irreducibility: Irreducibility,
    /// `ν_ℓ(Φ(t))`, `None` when `Φ(t) = 0`.
    pub nu_ell_phi_t: Option<u64>,
    pub poly_disc: PolyDisc,
    pub monogenicity: MonogenicVerdict,
    pub primes: Vec<PrimeIndex>,
    /// `"ind_p" → ind_p` for every exact prime.
    pub indices: BTreeMap<String, u64>,
    /// `[O_K : ℤ[θ]]` when every prime is exact.
    #[serde(with = "crate::serde_big::opt")]
    pub index: Option<BigInt>,
    pub field_disc: FieldDisc,
    pub integral_basis: Option<IntegralBasis>,
    /// Why no basis was produced.
    pub integral_basis_note: Option<String>,
}

fn ell_entry(inst: &ChebInstance, opts: &AnalysisOptions) -> Result<PrimeIndex> {
    let ell = inst.ell;
    let nu = disc_valuation(inst, ell)?;
    match ind_ell_closed(inst, opts.seed) {
        Ok(r) => {
            let mut e = PrimeIndex::exact(
                BigInt::from(ell),
                nu,
                r.value,
                IndexMethod::ClosedForm,
                format!("v = nu_{ell}(Phi(t)) = {}", r.v.map_or("inf".to_string(), |v| v.to_string())),
            );
            if r.polygon.is_some() {
                e.cross_check = Some("polygon".into());
            }
            Ok(e)
        }
        Err(Error::OutOfTheory(why)) => {
            let note = format!("{why}; raw Montes bounds");
            if inst.degree() <= CROSS_CHECK_DEGREE {
                let r = super::ell_polygon_index(inst, opts.seed)?;
                Ok(PrimeIndex::bounds(BigInt::from(ell), Some(nu), r.lower, r.upper, IndexMethod::Polygon, note))
            } else {
                Ok(PrimeIndex::bounds(BigInt::from(ell), Some(nu), 0, nu / 2, IndexMethod::Unresolved, why))
            }
        }
        Err(e) => Err(e),
    }
}

fn odd_entry(inst: &ChebInstance, p: &BigInt, nu_t: u64, opts: &AnalysisOptions) -> Result<PrimeIndex> {
    let b = (inst.degree() as u64 - 1) / 2;
    let nu = nu_t * b;
    let small = p.to_u64();
    if nu_t == 1 {
        let mut e = PrimeIndex::exact(p.clone(), nu, 0, IndexMethod::ClosedForm, "t != ±2 mod p^2");
        if let Some(q) = small.filter(|_| inst.degree() <= DEDEKIND_CHECK_DEGREE) {
            if !dedekind_test(&inst.phi_poly, q, opts.seed)?.maximal {
                return Err(Error::TheoremViolation(format!("Dedekind finds {q} non-maximal with t != ±2 mod {q}^2")));
            }
            e.cross_check = Some("dedekind".into());
        }
        return Ok(e);
    }
    if inst.t.is_odd() {
        let value = ind_p_closed(inst, p)?;
        let mut e = PrimeIndex::exact(p.clone(), nu, value, IndexMethod::ClosedForm, format!("nu_p(t^2-4) = {nu_t}"));
        if let Some(q) = small.filter(|_| inst.degree() <= CROSS_CHECK_DEGREE) {
            lifted_polygon_check(inst, q, opts.seed)?;
            e.cross_check = Some("lifted polygon".into());
        }
        return Ok(e);
    }
    let note = format!("t even, nu_p(t^2-4) = {nu_t}");
    match small.filter(|_| inst.degree() <= CROSS_CHECK_DEGREE) {
        Some(q) => {
            let r = tau_polygon_index(inst, q, opts.seed)?;
            Ok(PrimeIndex::bounds(p.clone(), Some(nu), r.lower, r.upper, IndexMethod::Polygon, note))
        }
        None => Ok(PrimeIndex::bounds(p.clone(), Some(nu), 0, nu / 2, IndexMethod::Unresolved, note)),
    }
}

fn two_entry(inst: &ChebInstance, nu_t: u64, opts: &AnalysisOptions) -> Result<PrimeIndex> {
    let nu = nu_t * ((inst.degree() as u64 - 1) / 2);
    let two = BigInt::from(2);
    if dedekind_test(&inst.phi_poly, 2, opts.seed)?.maximal {
        return Ok(PrimeIndex::exact(two, nu, 0, IndexMethod::Dedekind, "2-maximal"));
    }
    let note = "p = 2 with t even".to_string();
    if inst.degree() <= CROSS_CHECK_DEGREE {
        let r = index_at_prime(
            &inst.phi_poly,
            2,
            &IndexOptions { seed: opts.seed, lifts: Vec::new(), disc_valuation: Some(nu) },
        )?;
        if r.upper == 0 {
            return Err(Error::TheoremViolation("Dedekind and Montes disagree at 2".into()));
        }
        Ok(PrimeIndex::bounds(two, Some(nu), r.lower.max(1), r.upper, IndexMethod::Polygon, note))
    } else {
        Ok(PrimeIndex::bounds(two, Some(nu), 1, nu / 2, IndexMethod::Unresolved, note))
    }
}

/// Per-prime index table over `ℓ` and the primes of `t² − 4`.
pub fn prime_table(inst: &ChebInstance, poly: &PolyDisc, opts: &AnalysisOptions) -> Result<Vec<PrimeIndex>> {
    let ell = BigInt::from(inst.ell);
    let mut table = vec![ell_entry(inst, opts)?];
    for (p, &e) in &poly.t2_minus_4.factors {
        let p = BigInt::from(p.clone());
        if p == ell {
            continue;
        }
        let entry = if p == BigInt::from(2) {
            two_entry(inst, e as u64, opts)?
        } else {
            odd_entry(inst, &p, e as u64, opts)?
        };
        table.push(entry);
    }
    if let Some(c) = &poly.t2_minus_4.cofactor {
        table.push(PrimeIndex {
            prime: BigInt::from(c.clone()),
            disc_valuation: None,
            ind: None,
            lower: 0,
            upper: 0,
            exact: false,
            method: IndexMethod::Unresolved,
            out_of_theory: false,
            cross_check: None,
            note: "composite cofactor of t^2-4 left unfactored".into(),
        });
    }
    Ok(table)
}

/// Full analysis of `K = ℚ(θ)` with `T_ℓⁿ(θ) = t`.
pub fn analyze(inst: &ChebInstance, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let poly = poly_disc(inst, &opts.factor)?;
    let mono = monogenicity(inst, opts)?;
    let table = prime_table(inst, &poly, opts)?;
    let fd = field_disc(inst, &poly, &table)?;
    let indices = table
        .iter()
        .filter(|e| e.exact)
        .map(|e| (format!("ind_{}", e.prime), e.lower))
        .collect();
    let index = table.iter().all(|e| e.exact).then(|| {
        table
            .iter()
            .fold(BigInt::one(), |acc, e| acc * num_traits::Pow::pow(&e.prime, e.lower as u32))
    });
    let (integral_basis, integral_basis_note) = match integral_basis(inst, opts) {
        Ok(b) => (Some(b), None),
        Err(Error::OutOfTheory(why)) => (None, Some(why)),
        Err(e) => return Err(e),
    };
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        inputs: Inputs { ell: inst.ell, n: inst.n, t: inst.t.clone(), degree: inst.degree() },
        seed: opts.seed,
        irreducibility: inst.irreducibility.clone(),
        nu_ell_phi_t: nu_ell_phi_t(inst).finite(),
        poly_disc: poly,
        monogenicity: mono,
        primes: table,
        indices,
        index,
        field_disc: fd,
        integral_basis,
        integral_basis_note,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    pub fn from_json(s: &str) -> Result<AnalysisReport> {
        let r: AnalysisReport = serde_json::from_str(s).map_err(|e| Error::invalid(e.to_string()))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// Whether some input hypothesis of the closed forms failed.
    pub fn out_of_theory(&self) -> bool {
        self.primes.iter().any(|e| e.out_of_theory)
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.inputs;
        writeln!(f, "instance: ell = {}, n = {}, t = {}, degree {}", i.ell, i.n, i.t, i.degree)?;
        writeln!(f, "schema: {}  seed: {}", self.schema_version, self.seed)?;
        let irr = match &self.irreducibility {
            Irreducibility::ProvenEisenstein => "proven (Eisenstein)".to_string(),
            Irreducibility::ProvenModQ { primes } => format!("proven (degree patterns mod {primes:?})"),
            Irreducibility::Assumed => "assumed".to_string(),
            Irreducibility::Reducible { reason } => format!("reducible: {reason}"),
        };
        writeln!(f, "irreducibility: {irr}")?;
        let v = self.nu_ell_phi_t.map_or("inf".to_string(), |v| v.to_string());
        writeln!(f, "nu_{}(Phi(t)) = {v}", i.ell)?;
        writeln!(f, "D(Phi) = {}", self.poly_disc.value)?;
        if let Some(n) = &self.poly_disc.value.numeric {
            writeln!(f, "  = {n}")?;
        }
        writeln!(f, "t^2 - 4 = {}", self.poly_disc.t2_minus_4)?;
        if let Some(ok) = self.poly_disc.oracle_verified {
            writeln!(f, "  resultant oracle agrees: {ok}")?;
        }
        let m = &self.monogenicity;
        writeln!(f, "monogenic: {:?}", m.monogenic)?;
        for r in &m.reasons {
            writeln!(f, "  - {r}")?;
        }
        if let Some(d) = m.dedekind_agrees {
            writeln!(f, "  Dedekind cross-check agrees: {d}")?;
        }
        writeln!(f, "indices:")?;
        for e in &self.primes {
            let val = if e.exact { e.lower.to_string() } else { format!("[{}, {}]", e.lower, e.upper) };
            let nu = e.disc_valuation.map_or("?".to_string(), |v| v.to_string());
            write!(f, "  ind_{} = {val}  (nu_p(D) = {nu}, {:?}", e.prime, e.method)?;
            if let Some(c) = &e.cross_check {
                write!(f, ", checked by {c}")?;
            }
            if e.out_of_theory {
                write!(f, ", out of theory")?;
            }
            writeln!(f, "; {})", e.note)?;
        }
        if let Some(idx) = &self.index {
            writeln!(f, "index [O_K : Z[theta]] = {idx}")?;
        }
        let fd = &self.field_disc;
        writeln!(f, "Delta(K) = {}", fd.value)?;
        if let Some(n) = &fd.numeric_if_complete() {
            writeln!(f, "  = {n}")?;
        }
        if !fd.prime_exponents.is_empty() {
            let parts: Vec<String> = fd
                .prime_exponents
                .iter()
                .filter(|p| p.max > 0)
                .map(|p| {
                    if p.min == p.max {
                        format!("{}^{}", p.prime, p.min)
                    } else {
                        format!("{}^[{}..{}]", p.prime, p.min, p.max)
                    }
                })
                .collect();
            writeln!(f, "  |Delta| = {}  (sign {})", parts.join(" * "), fd.sign)?;
        }
        if !fd.undetermined.is_empty() {
            let u: Vec<String> = fd.undetermined.iter().map(|p| p.to_string()).collect();
            writeln!(f, "  undetermined at: {}", u.join(", "))?;
        }
        match (&self.integral_basis, &self.integral_basis_note) {
            (Some(b), _) => {
                writeln!(f, "integral basis ({:?}, verified: {}):", b.kind, b.verified)?;
                for e in &b.generators {
                    writeln!(f, "  ({}) / {}", e.numerator, e.denominator)?;
                }
                if !b.collection.is_empty() {
                    writeln!(
                        f,
                        "  full collection: {} elements, denominator exponent sum {}",
                        b.collection.len(),
                        b.collection_exponent
                    )?;
                }
            }
            (None, Some(why)) => writeln!(f, "integral basis: not produced ({why})")?,
            (None, None) => {}
        }
        Ok(())
    }
}

impl FieldDisc {
    /// The expansion of Δ(K) once every prime is settled.
    pub fn numeric_if_complete(&self) -> Option<&BigInt> {
        self.complete.then_some(self.value.numeric.as_ref()).flatten()
    }
}
