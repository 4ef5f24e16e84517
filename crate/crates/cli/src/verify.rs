//! Batch cross-checks behind `chebrad verify`. Output is a function of the
//! arguments and the seed only.

use chebrad_core::chebyshev::cheb_t_iterate;
use chebrad_core::montes::IndexOptions;
use chebrad_core::padic::{factor, is_squarefree, FactorOptions};
use chebrad_core::radical::{bad_residues, ind_ell_closed, ind_p_closed, lifted_polygon_check};
use chebrad_core::{
    analyze, build_instance, dedekind_test, discriminant_oracle, index_at_prime, monogenicity, AnalysisOptions,
    ChebInstance, IntPoly, Monogenic, Squarefree,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::Sweep;

const T0: i64 = 451_251;
const PER_SHAPE: usize = 10;

#[derive(Debug, Serialize)]
pub struct Row {
    pub sweep: &'static str,
    pub scope: String,
    pub passed: usize,
    pub total: usize,
    pub failure: Option<String>,
}

impl Row {
    fn new(sweep: &'static str, scope: String) -> Row {
        Row { sweep, scope, passed: 0, total: 0, failure: None }
    }

    fn record(&mut self, what: impl FnOnce() -> Result<(), String>) {
        self.total += 1;
        match what() {
            Ok(()) => self.passed += 1,
            Err(e) => {
                if self.failure.is_none() {
                    self.failure = Some(e);
                }
            }
        }
    }

    fn ok(&self) -> bool {
        self.failure.is_none() && self.passed == self.total
    }
}

fn nu(a: &BigInt, p: u64) -> u64 {
    let p = BigInt::from(p);
    let (mut a, mut k) = (a.clone(), 0);
    while !a.is_zero() && a.is_multiple_of(&p) {
        a /= &p;
        k += 1;
    }
    k
}

fn shapes(ell: Option<u64>, n: Option<u32>, ells: &[u64], ns: &[u32]) -> Vec<(u64, u32)> {
    let ells: Vec<u64> = ell.map_or(ells.to_vec(), |e| vec![e]);
    let ns: Vec<u32> = n.map_or(ns.to_vec(), |n| vec![n]);
    ells.iter().flat_map(|&e| ns.iter().map(move |&n| (e, n))).collect()
}

fn examples(ell: Option<u64>, n: Option<u32>, seed: u64) -> Vec<Row> {
    let cases = [(3u64, 6u64, 13u64, 55i64, 13i64), (5, 4, 31, 313, 62), (7, 2, 49, 931, 171)];
    let mut rows = Vec::new();
    for (l, v, ind, le, te) in cases {
        if ell.is_some_and(|e| e != l) || n.is_some_and(|n| n != 3) {
            continue;
        }
        let mut row = Row::new("examples", format!("ell={l} n=3 t={T0}"));
        row.record(|| {
            let inst = build_instance(l, 3, &BigInt::from(T0)).map_err(|e| e.to_string())?;
            let r = analyze(&inst, &AnalysisOptions { seed, ..AnalysisOptions::default() }).map_err(|e| e.to_string())?;
            let got_ind = r.indices.get(&format!("ind_{l}")).copied();
            let fd = &r.field_disc.value;
            let four_minus = BigInt::from(4) - BigInt::from(T0) * BigInt::from(T0);
            if r.nu_ell_phi_t != Some(v)
                || got_ind != Some(ind)
                || fd.exponent_of(&BigInt::from(l)) != Some(le)
                || fd.exponent_of(&four_minus) != Some(te)
                || fd.terms.len() != 2
            {
                return Err(format!("nu = {:?}, ind = {got_ind:?}, Delta = {fd}", r.nu_ell_phi_t));
            }
            Ok(())
        });
        rows.push(row);
    }
    rows
}

fn disc_oracle(ell: Option<u64>, n: Option<u32>) -> Vec<Row> {
    let mut rows = Vec::new();
    for (l, n) in shapes(ell, n, &[3, 5], &[1, 2]) {
        let mut row = Row::new("disc-oracle", format!("ell={l} n={n} t=-10..10"));
        let Ok(big_t) = cheb_t_iterate(l, n) else {
            row.record(|| Err(format!("invalid ell = {l}")));
            rows.push(row);
            continue;
        };
        let d = l.pow(n);
        for t in -10i64..=10 {
            row.record(|| {
                let t = BigInt::from(t);
                let f = &big_t - &IntPoly::constant(t.clone());
                let oracle = discriminant_oracle(&f).map_err(|e| e.to_string())?;
                let formula = Pow::pow(&BigInt::from(l), (n as u64 * d) as u32)
                    * Pow::pow(&(BigInt::from(4) - &t * &t), ((d - 1) / 2) as u32);
                if oracle == formula {
                    Ok(())
                } else {
                    Err(format!("t = {t}: oracle {oracle} vs formula {formula}"))
                }
            });
        }
        rows.push(row);
    }
    rows
}

fn squarefree(a: &BigInt) -> bool {
    is_squarefree(a, 1_000_000).is_ok_and(|s| s == Squarefree::Yes)
}

fn ell_hypothesis_instance(rng: &mut ChaCha8Rng, ell: u64, n: u32) -> Result<ChebInstance, String> {
    let residues: Vec<u64> =
        bad_residues(ell).map_err(|e| e.to_string())?.into_iter().filter(|&r| r != 2 && r != ell * ell - 2).collect();
    loop {
        let r = residues[rng.gen_range(0..residues.len())] as i64;
        let t = BigInt::from(r + (ell * ell) as i64 * rng.gen_range(-20_000i64..20_000));
        if !squarefree(&(&t - 2)) || !squarefree(&(&t + 2)) {
            continue;
        }
        let inst = build_instance(ell, n, &t).map_err(|e| e.to_string())?;
        if inst.irreducibility.is_proven() {
            return Ok(inst);
        }
    }
}

fn closed_form(ell: Option<u64>, n: Option<u32>, seed: u64) -> Vec<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for (l, n) in shapes(ell, n, &[3, 5], &[1, 2, 3]) {
        let mut row = Row::new("closed-form", format!("ell={l} n={n} x{PER_SHAPE}"));
        for _ in 0..PER_SHAPE {
            row.record(|| {
                let inst = ell_hypothesis_instance(&mut rng, l, n)?;
                let closed = ind_ell_closed(&inst, seed).map_err(|e| format!("t = {}: {e}", inst.t))?;
                let opts = IndexOptions { seed, ..IndexOptions::default() };
                let montes = index_at_prime(&inst.phi_poly, l, &opts).map_err(|e| e.to_string())?;
                if montes.value() == Some(closed.value) {
                    Ok(())
                } else {
                    Err(format!("t = {}: closed {} vs Montes {:?}", inst.t, closed.value, montes.value()))
                }
            });
        }
        rows.push(row);
    }
    rows
}

fn squeeze(ell: Option<u64>, n: Option<u32>, seed: u64) -> Vec<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157);
    let mut rows = Vec::new();
    for (l, n) in shapes(ell, n, &[3, 5], &[1, 2]) {
        let mut row = Row::new("squeeze", format!("ell={l} n={n} x{PER_SHAPE}"));
        for _ in 0..PER_SHAPE {
            let primes: Vec<u64> = [5u64, 7, 11, 13].into_iter().filter(|&p| p != l).collect();
            let p = primes[rng.gen_range(0..primes.len())];
            let s: i64 = if rng.gen_bool(0.5) { 2 } else { -2 };
            let j = rng.gen_range(0..3u32);
            let u = loop {
                let u: i64 = 2 * rng.gen_range(0..20) + 1;
                if u % p as i64 != 0 {
                    break u;
                }
            };
            let t = BigInt::from(s) + Pow::pow(&BigInt::from(p), 2 + j) * BigInt::from(u);
            row.record(|| {
                let inst = build_instance(l, n, &t).map_err(|e| e.to_string())?;
                let v = nu(&(&t * &t - 4), p);
                let closed = (v / 2) * (l.pow(n) - 1) / 2;
                let upper = v * (l.pow(n) - 1) / 4;
                let check = lifted_polygon_check(&inst, p, seed).map_err(|e| format!("t = {t}, p = {p}: {e}"))?;
                let formula = ind_p_closed(&inst, &BigInt::from(p)).map_err(|e| e.to_string())?;
                let squeezed = if v % 2 == 0 { upper == closed } else { check.index.exact };
                if formula == closed && check.index.lower == closed && squeezed {
                    Ok(())
                } else {
                    Err(format!("t = {t}, p = {p}: closed {formula}, lower {}, nu {v}", check.index.lower))
                }
            });
        }
        rows.push(row);
    }
    rows
}

fn dedekind(ell: Option<u64>, n: Option<u32>, seed: u64) -> Vec<Row> {
    let mut rows = Vec::new();
    for (l, n) in shapes(ell, n, &[3, 5], &[1, 2]) {
        let mut row = Row::new("dedekind", format!("ell={l} n={n} t=-60..60"));
        for t in -60i64..=60 {
            let t = BigInt::from(t);
            let Ok(inst) = build_instance(l, n, &t) else { continue };
            if !inst.irreducibility.is_proven() {
                continue;
            }
            row.record(|| {
                let opts = AnalysisOptions { seed, ..AnalysisOptions::default() };
                let verdict = monogenicity(&inst, &opts).map_err(|e| format!("t = {t}: {e}"))?;
                let f = factor(&(&t * &t - 4), &FactorOptions::default()).map_err(|e| e.to_string())?;
                let mut primes: Vec<u64> = f.factors.keys().map(|p| p.try_into().unwrap_or(0)).collect();
                primes.push(l);
                let mut maximal = true;
                for p in primes {
                    maximal &= dedekind_test(&inst.phi_poly, p, seed).map_err(|e| e.to_string())?.maximal;
                }
                match (verdict.monogenic, maximal) {
                    (Monogenic::Yes, true) | (Monogenic::No, false) => Ok(()),
                    (m, d) => Err(format!("t = {t}: closed form {m:?}, Dedekind maximal {d}")),
                }
            });
        }
        rows.push(row);
    }
    rows
}

/// Runs the selected sweeps; returns the rendered table and overall status.
pub fn run(sweep: Sweep, ell: Option<u64>, n: Option<u32>, seed: u64, json: bool) -> (String, bool) {
    let all = sweep == Sweep::All;
    let mut rows = Vec::new();
    if all || sweep == Sweep::Examples {
        rows.extend(examples(ell, n, seed));
    }
    if all || sweep == Sweep::DiscOracle {
        rows.extend(disc_oracle(ell, n));
    }
    if all || sweep == Sweep::ClosedForm {
        rows.extend(closed_form(ell, n, seed));
    }
    if all || sweep == Sweep::Squeeze {
        rows.extend(squeeze(ell, n, seed));
    }
    if all || sweep == Sweep::Dedekind {
        rows.extend(dedekind(ell, n, seed));
    }
    let ok = rows.iter().all(Row::ok);
    let body = if json {
        serde_json::to_string_pretty(&serde_json::json!({ "seed": seed, "ok": ok, "rows": rows })).unwrap_or_default()
            + "\n"
    } else {
        let mut s = String::new();
        for r in &rows {
            let status = if r.ok() { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status}  {:<12} {:<28} {}/{}\n", r.sweep, r.scope, r.passed, r.total));
            if let Some(f) = &r.failure {
                s.push_str(&format!("      failing instance: {f}\n"));
            }
        }
        s.push_str(if ok { "all sweeps passed\n" } else { "verification FAILED\n" });
        s
    };
    (body, ok)
}
