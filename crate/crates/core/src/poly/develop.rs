use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::poly::IntPoly;

/// The φ-adic expansion `f = Σ a_i φ^i` together with the successive
/// division quotients and the p-adic valuations of the coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiDevelopment {
    pub phi: IntPoly,
    pub p: u64,
    pub coeffs: Vec<IntPoly>,
    /// `quotients[j - 1]` is `q_j`, so that `q_j = φ·q_{j+1} + a_j` with `q_0 = f`.
    pub quotients: Vec<IntPoly>,
    pub valuations: Vec<Valuation>,
}

pub fn phi_development(f: &IntPoly, phi: &IntPoly, p: u64) -> Result<PhiDevelopment> {
    if phi.degree().unwrap_or(0) == 0 {
        return Err(Error::invalid("phi must have positive degree"));
    }
    if !phi.is_monic() {
        return Err(Error::invalid("phi must be monic"));
    }
    let mut coeffs = Vec::new();
    let mut quotients = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let (q, r) = cur.divmod_monic(phi)?;
        coeffs.push(r);
        if !q.is_zero() {
            quotients.push(q.clone());
        }
        cur = q;
    }
    if coeffs.is_empty() {
        coeffs.push(IntPoly::zero());
    }
    let valuations = coeffs.iter().map(|a| a.min_valuation(p)).collect();
    Ok(PhiDevelopment { phi: phi.clone(), p, coeffs, quotients, valuations })
}

impl PhiDevelopment {
    /// Largest `i` with `a_i` present, i.e. `⌊deg f / deg φ⌋`.
    pub fn length(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `q_j` for `j ≥ 1`; `q_0` is the developed polynomial itself.
    pub fn quotient(&self, j: usize) -> Option<&IntPoly> {
        j.checked_sub(1).and_then(|k| self.quotients.get(k))
    }

    pub fn reconstruct(&self) -> IntPoly {
        let mut acc = IntPoly::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &self.phi) + a;
        }
        acc
    }

    /// Finite points `(i, u_i)` of the φ-Newton polygon cloud.
    pub fn points(&self) -> Vec<(u64, u64)> {
        self.valuations
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.finite().map(|u| (i as u64, u)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn development_at_x_plus_one() {
        let f = IntPoly::from_i64(&[-27, -3, 0, 1]);
        let dev = phi_development(&f, &IntPoly::from_i64(&[1, 1]), 5).unwrap();
        let a: Vec<IntPoly> = [-25, 0, -3, 1].iter().map(|&c| IntPoly::from_i64(&[c])).collect();
        assert_eq!(dev.coeffs, a);
        assert_eq!(
            dev.valuations,
            vec![Valuation::Finite(2), Valuation::Infinity, Valuation::Finite(0), Valuation::Finite(0)]
        );
        assert_eq!(dev.reconstruct(), f);
    }

    #[test]
    fn phi_itself() {
        let phi = IntPoly::from_i64(&[3, 0, 1]);
        let dev = phi_development(&phi, &phi, 3).unwrap();
        assert_eq!(dev.coeffs, vec![IntPoly::zero(), IntPoly::one()]);
    }

    #[test]
    fn quotient_relation() {
        let f = IntPoly::from_i64(&[5, -1, 4, 0, 2, 1, 1]);
        let phi = IntPoly::from_i64(&[1, 1, 1]);
        let dev = phi_development(&f, &phi, 2).unwrap();
        let q = |j: usize| if j == 0 { f.clone() } else { dev.quotient(j).cloned().unwrap_or_default() };
        for j in 0..dev.coeffs.len() {
            assert_eq!(q(j), &(&phi * &q(j + 1)) + &dev.coeffs[j]);
        }
    }

    #[test]
    fn non_monic_phi_rejected() {
        let f = IntPoly::from_i64(&[1, 1]);
        assert!(phi_development(&f, &IntPoly::from_i64(&[1, 2]), 3).is_err());
        assert!(phi_development(&f, &IntPoly::one(), 3).is_err());
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-50i64..50, 1..=max_deg + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn reconstructs(f in poly(12), mut phi in poly(3)) {
            phi.push(1);
            let f = IntPoly::from_i64(&f);
            let phi = IntPoly::from_i64(&phi);
            let dev = phi_development(&f, &phi, 3).unwrap();
            prop_assert_eq!(dev.reconstruct(), f);
            let dphi = phi.degree().unwrap();
            for a in &dev.coeffs {
                prop_assert!(a.degree().map_or(true, |d| d < dphi));
            }
        }

        #[test]
        fn taylor_matches_linear_development(f in poly(10), c in -20i64..20) {
            let f = IntPoly::from_i64(&f);
            let c = BigInt::from(c);
            let taylor = f.taylor_development(&c);
            let dev = phi_development(&f, &IntPoly::x_minus(&c), 5).unwrap();
            let mut expect: Vec<BigInt> = dev.coeffs.iter().map(|a| a.coeff(0)).collect();
            expect.resize(taylor.len().max(expect.len()), BigInt::from(0));
            let mut got = taylor.clone();
            got.resize(expect.len(), BigInt::from(0));
            prop_assert_eq!(got, expect);
        }
    }
}
