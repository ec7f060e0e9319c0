//! `S = exp(a ⊗ a†)` on three bosonic modes, with `a|n⟩ = n|n−1⟩` and
//! `a†|n⟩ = |n+1⟩` so that `a a† − a† a = 1`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::report::{index_label, RelationId, VerificationReport, Witness};
use crate::scalar::Rational;

pub type Occupation = [u32; 3];
pub type FockVector = BTreeMap<Occupation, Rational>;

fn accumulate(v: &mut FockVector, n: Occupation, c: Rational) {
    let zero = Rational::from_integer(0.into());
    let entry = v.entry(n).or_insert_with(|| zero.clone());
    *entry += c;
    if *entry == zero {
        v.remove(&n);
    }
}

fn lower(v: &FockVector, mode: usize) -> FockVector {
    let mut out = FockVector::new();
    for (&n, c) in v {
        if n[mode] > 0 {
            let mut m = n;
            m[mode] -= 1;
            accumulate(&mut out, m, c.clone() * Rational::from_integer(n[mode].into()));
        }
    }
    out
}

fn raise(v: &FockVector, mode: usize) -> FockVector {
    v.iter()
        .map(|(&n, c)| {
            let mut m = n;
            m[mode] += 1;
            (m, c.clone())
        })
        .collect()
}

/// `exp(a_i ⊗ a†_j) v = Σ_k a_iᵏ a†_jᵏ v / k!`; the series stops once `a_i` has
/// exhausted every occupation of mode `i`.
pub fn apply_exp(v: &FockVector, i: usize, j: usize) -> FockVector {
    let mut out = v.clone();
    let mut term = v.clone();
    let mut k: u32 = 0;
    loop {
        term = raise(&lower(&term, i), j);
        if term.is_empty() {
            return out;
        }
        k += 1;
        let kk = Rational::from_integer(k.into());
        for c in term.values_mut() {
            *c /= kk.clone();
        }
        for (&n, c) in &term {
            accumulate(&mut out, n, c.clone());
        }
    }
}

fn render(v: &FockVector) -> Vec<(String, String)> {
    v.iter()
        .map(|(n, c)| (index_label(&n.map(|x| x as usize)), c.to_string()))
        .collect()
}

/// `S₁₂S₁₃S₂₃|n⟩ = S₂₃S₁₂|n⟩` for every occupation `nᵢ ≤ max_occupation`.
pub fn weyl_pentagon_check(max_occupation: u32) -> VerificationReport {
    let side = (max_occupation + 1) as usize;
    let basis: Vec<Occupation> = (0..side.pow(3))
        .map(|k| [(k / (side * side)) as u32, (k / side % side) as u32, (k % side) as u32])
        .collect();
    VerificationReport::timed(RelationId::WeylPentagon, basis.len(), || {
        basis.par_iter().find_map_first(|&n| {
            let (lhs, rhs) = weyl_sides(n);
            (lhs != rhs).then(|| Witness {
                basis: n.iter().map(|&x| x as usize).collect(),
                lhs: render(&lhs),
                rhs: render(&rhs),
            })
        })
    })
}

/// Both sides of the exponential pentagon on one basis vector.
pub fn weyl_sides(n: Occupation) -> (FockVector, FockVector) {
    let e: FockVector = [(n, Rational::from_integer(1.into()))].into();
    let lhs = apply_exp(&apply_exp(&apply_exp(&e, 1, 2), 0, 2), 0, 1);
    let rhs = apply_exp(&apply_exp(&e, 0, 1), 1, 2);
    (lhs, rhs)
}
