use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::first_irreducible;
use crate::padic::is_prime_u64;
use crate::poly::{ExtElem, ExtField, ModPoly};

pub const DEFAULT_MAX_FIELD_SIZE: u64 = 100_000;

/// The functional graph of `a ↦ T_ℓ(a)` on all of 𝔽_{p^m}. Nodes are indexed
/// by [`ModPoly::to_index`] of their representative.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitGraph {
    pub ell: u64,
    pub p: u64,
    pub m: usize,
    pub modulus: ModPoly,
    pub succ: Vec<usize>,
    pub weight: Vec<usize>,
}

/// A tree hanging off a periodic point: `root` maps onto the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSummary {
    pub root: usize,
    pub height: usize,
    pub size: usize,
    /// `Some(k)` when every internal node has exactly `k` children and all
    /// leaves sit at the same depth.
    pub complete_arity: Option<usize>,
}

fn cheb_eval(ell: u64, a: &ExtElem) -> Result<ExtElem> {
    let field = a.field().clone();
    let mut prev = ExtElem::one(&field).scale(2);
    let mut cur = a.clone();
    for _ in 1..ell {
        let next = a.mul(&cur)?.sub(&prev)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Builds the graph by exhaustive evaluation; refuses fields larger than `max_size`.
pub fn orbit_graph(ell: u64, p: u64, m: usize, max_size: u64) -> Result<OrbitGraph> {
    if !is_prime_u64(ell) || !is_prime_u64(p) || m == 0 {
        return Err(Error::invalid("orbit graph needs primes ell, p and m >= 1"));
    }
    if ell == p {
        return Err(Error::invalid("orbit graph needs p different from ell"));
    }
    let size = p
        .checked_pow(m as u32)
        .filter(|&s| s <= max_size)
        .ok_or_else(|| Error::ResourceLimit(format!("field of size {p}^{m} exceeds {max_size}")))?;
    let modulus = first_irreducible(p, m)?;
    let field = ExtField::new(modulus.clone())?;
    let mut succ = Vec::with_capacity(size as usize);
    let mut weight = Vec::with_capacity(size as usize);
    for idx in 0..size {
        let a = ExtElem::new(&field, &ModPoly::from_index(p, idx, m))?;
        succ.push(cheb_eval(ell, &a)?.rep().to_index() as usize);
        weight.push(a.min_poly_degree()?);
    }
    Ok(OrbitGraph { ell, p, m, modulus, succ, weight })
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    /// Node index of a constant `c ∈ 𝔽_p`.
    pub fn constant(&self, c: i64) -> usize {
        c.rem_euclid(self.p as i64) as usize
    }

    pub fn label(&self, node: usize) -> ModPoly {
        ModPoly::from_index(self.p, node as u64, self.m)
    }

    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut pre = vec![Vec::new(); self.len()];
        for (a, &b) in self.succ.iter().enumerate() {
            pre[b].push(a);
        }
        pre
    }

    pub fn is_periodic(&self, node: usize) -> bool {
        let mut cur = self.succ[node];
        for _ in 0..self.len() {
            if cur == node {
                return true;
            }
            cur = self.succ[cur];
        }
        false
    }

    /// The trees attached to a periodic node, one per non-periodic preimage.
    pub fn trees_at(&self, node: usize) -> Vec<TreeSummary> {
        let pre = self.preimages();
        pre[node]
            .iter()
            .copied()
            .filter(|&r| !self.is_periodic(r))
            .map(|root| self.summarize(root, &pre))
            .collect()
    }

    fn summarize(&self, root: usize, pre: &[Vec<usize>]) -> TreeSummary {
        let mut size = 0;
        let mut leaf_depths = Vec::new();
        let mut arities = Vec::new();
        let mut stack = vec![(root, 0usize)];
        while let Some((v, depth)) = stack.pop() {
            size += 1;
            if pre[v].is_empty() {
                leaf_depths.push(depth);
            } else {
                arities.push(pre[v].len());
                stack.extend(pre[v].iter().map(|&c| (c, depth + 1)));
            }
        }
        let height = leaf_depths.iter().copied().max().unwrap_or(0);
        let uniform_leaves = leaf_depths.iter().all(|&d| d == height);
        let complete_arity = match arities.first() {
            None => Some(0),
            Some(&k) if uniform_leaves && arities.iter().all(|&a| a == k) => Some(k),
            _ => None,
        };
        TreeSummary { root, height, size, complete_arity }
    }

    pub fn weight_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &w in &self.weight {
            *h.entry(w).or_default() += 1;
        }
        h
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "digraph T{}_F{}_{} {{\n  // modulus {}",
            self.ell, self.p, self.m, self.modulus
        );
        for (i, &w) in self.weight.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\\nw={w}\", weight={w}];", self.label(i));
        }
        for (a, &b) in self.succ.iter().enumerate() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}
