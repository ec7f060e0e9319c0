//! Exact verification of operator identities written as products of placed
//! operators, e.g. `S₁₂S₁₃S₂₃ = S₂₃S₁₂`.
//!
//! Leg labels in the written identities are one-based; the scripts below use
//! zero-based legs, so `S₁₃` is `S` on legs `[0, 2]`.

use rayon::prelude::*;

use crate::bialgebra::{double_relations, CrossOrder, StructureConstants};
use crate::error::{Error, Result};
use crate::report::{RelationId, VerificationReport, Witness};
use crate::scalar::Field;
use crate::tensor::{LegPlacement, Operator, PlacedOperator, SparseVec};

/// Largest space on which full operator products are materialized.
pub const FULL_PRODUCT_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Apply both sides to every basis vector, keeping intermediates sparse.
    #[default]
    BasisVectors,
    /// Materialize both products (spaces up to [`FULL_PRODUCT_LIMIT`]).
    FullProduct,
}

/// One factor of a product: an operator and the legs it acts on.
pub type Factor<'a, F> = (&'a Operator<F>, &'a [usize]);

fn placements<F: Field>(leg_dims: &[usize], side: &[Factor<'_, F>]) -> Result<Vec<PlacedOperator<F>>> {
    side.iter()
        .map(|(op, legs)| {
            let pl = LegPlacement::new(leg_dims.to_vec(), legs.to_vec())?;
            PlacedOperator::new(op, &pl)
        })
        .collect()
}

fn apply_side<F: Field>(side: &[PlacedOperator<F>], v: SparseVec<F>) -> SparseVec<F> {
    side.iter().rev().fold(v, |acc, op| op.apply(&acc))
}

fn materialize<F: Field>(leg_dims: &[usize], side: &[Factor<'_, F>]) -> Result<Operator<F>> {
    let mut acc = Operator::identity(leg_dims.to_vec());
    for (op, legs) in side {
        let pl = LegPlacement::new(leg_dims.to_vec(), legs.to_vec())?;
        acc = acc.compose(&op.place_on_legs(&pl)?)?;
    }
    Ok(acc)
}

fn column<F: Field>(op: &Operator<F>, j: usize) -> SparseVec<F> {
    op.iter().filter(|&(_, c, _)| c == j).map(|(r, _, v)| (r, v.clone())).collect()
}

/// Checks `Π lhs = Π rhs` (products written left to right) on the space with
/// the given leg dimensions. The witness is the first basis vector, in
/// lexicographic order, on which the two sides differ.
pub fn check_identity<F: Field>(
    relation: RelationId,
    leg_dims: &[usize],
    lhs: &[Factor<'_, F>],
    rhs: &[Factor<'_, F>],
    strategy: Strategy,
) -> Result<VerificationReport> {
    let n: usize = leg_dims.iter().product();
    let basis_label = |j: usize| crate::tensor::unflatten(j, leg_dims);
    match strategy {
        Strategy::BasisVectors => {
            let l = placements(leg_dims, lhs)?;
            let r = placements(leg_dims, rhs)?;
            Ok(VerificationReport::timed(relation, n, || {
                (0..n).into_par_iter().find_map_first(|j| {
                    let mut e = SparseVec::new();
                    e.insert(j, F::one());
                    let a = apply_side(&l, e.clone());
                    let b = apply_side(&r, e);
                    (a != b).then(|| Witness::from_vectors(basis_label(j), leg_dims, &a, &b))
                })
            }))
        }
        Strategy::FullProduct => {
            if n > FULL_PRODUCT_LIMIT {
                return Err(Error::DimensionMismatch(format!(
                    "full products are limited to dimension {FULL_PRODUCT_LIMIT}, got {n}"
                )));
            }
            let mut failure = None;
            let report = VerificationReport::timed(relation, n, || {
                let a = match materialize(leg_dims, lhs) {
                    Ok(a) => a,
                    Err(e) => {
                        failure = Some(e);
                        return None;
                    }
                };
                let b = match materialize(leg_dims, rhs) {
                    Ok(b) => b,
                    Err(e) => {
                        failure = Some(e);
                        return None;
                    }
                };
                if a == b {
                    return None;
                }
                (0..n).find_map(|j| {
                    let (ca, cb) = (column(&a, j), column(&b, j));
                    (ca != cb).then(|| Witness::from_vectors(basis_label(j), leg_dims, &ca, &cb))
                })
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(report),
            }
        }
    }
}

/// Leg dimension of an operator on two equal square legs.
fn two_leg_dim<F: Field>(op: &Operator<F>, what: &str) -> Result<usize> {
    let dims = op.row_dims();
    if !op.is_square_legs() || dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch(format!(
            "{what} must act on two equal square legs, got {:?} -> {:?}",
            op.col_dims(),
            op.row_dims()
        )));
    }
    Ok(dims[0])
}

const L01: &[usize] = &[0, 1];
const L02: &[usize] = &[0, 2];
const L12: &[usize] = &[1, 2];
const L10: &[usize] = &[1, 0];
const L20: &[usize] = &[2, 0];

/// `S₁₂S₁₃S₂₃ = S₂₃S₁₂`.
pub fn check_pentagon<F: Field>(s: &Operator<F>) -> Result<VerificationReport> {
    check_pentagon_with(s, Strategy::default())
}

pub fn check_pentagon_with<F: Field>(s: &Operator<F>, strategy: Strategy) -> Result<VerificationReport> {
    let d = two_leg_dim(s, "S")?;
    check_identity(
        RelationId::Pentagon,
        &[d; 3],
        &[(s, L01), (s, L02), (s, L12)],
        &[(s, L12), (s, L01)],
        strategy,
    )
}

/// `S̃₁₂S̃₂₃ = S̃₂₃S̃₁₃S̃₁₂`.
pub fn check_reversed_pentagon<F: Field>(st: &Operator<F>) -> Result<VerificationReport> {
    let d = two_leg_dim(st, "S~")?;
    check_identity(
        RelationId::ReversedPentagon,
        &[d; 3],
        &[(st, L01), (st, L12)],
        &[(st, L12), (st, L02), (st, L01)],
        Strategy::default(),
    )
}

/// The six mixed pentagons, in reading order:
///
/// 1. `S′₁₂S′₁₃S₂₃ = S₂₃S′₁₂`
/// 2. `S̃₁₂S′₂₃ = S′₂₃S′₁₃S̃₁₂`
/// 3. `S₁₂S″₁₃S″₂₃ = S″₂₃S₁₂`
/// 4. `S″₁₂S̃₂₃ = S̃₂₃S″₁₃S″₁₂`
/// 5. `S′₁₂S̃₁₃S″₂₃ = S″₂₃S′₁₂`
/// 6. `S″₁₂S′₂₃ = S′₂₃S₁₃S″₁₂`
pub fn check_mixed_pentagons<F: Field>(
    s: &Operator<F>,
    sp: &Operator<F>,
    spp: &Operator<F>,
    st: &Operator<F>,
) -> Result<Vec<VerificationReport>> {
    let d = two_leg_dim(s, "S")?;
    for (op, name) in [(sp, "S'"), (spp, "S''"), (st, "S~")] {
        if two_leg_dim(op, name)? != d {
            return Err(Error::DimensionMismatch(format!("{name} acts on a different space than S")));
        }
    }
    let dims = [d; 3];
    type Script<'a, F> = (Vec<Factor<'a, F>>, Vec<Factor<'a, F>>);
    let scripts: [Script<'_, F>; 6] = [
        (vec![(sp, L01), (sp, L02), (s, L12)], vec![(s, L12), (sp, L01)]),
        (vec![(st, L01), (sp, L12)], vec![(sp, L12), (sp, L02), (st, L01)]),
        (vec![(s, L01), (spp, L02), (spp, L12)], vec![(spp, L12), (s, L01)]),
        (vec![(spp, L01), (st, L12)], vec![(st, L12), (spp, L02), (spp, L01)]),
        (vec![(sp, L01), (st, L02), (spp, L12)], vec![(spp, L12), (sp, L01)]),
        (vec![(spp, L01), (sp, L12)], vec![(sp, L12), (s, L02), (spp, L01)]),
    ];
    scripts
        .iter()
        .enumerate()
        .map(|(i, (l, r))| {
            check_identity(
                RelationId::MixedPentagon(i as u8 + 1),
                &dims,
                l,
                r,
                Strategy::default(),
            )
        })
        .collect()
}

/// `R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂` where each "site" is a group of
/// `legs_per_site` legs; `R` acts on two sites (the first half of its legs
/// is site 1). For a pair-leg R-matrix, `legs_per_site = 2`.
pub fn check_yang_baxter<F: Field>(r: &Operator<F>, legs_per_site: usize) -> Result<VerificationReport> {
    check_yang_baxter_with(r, legs_per_site, Strategy::default())
}

pub fn check_yang_baxter_with<F: Field>(
    r: &Operator<F>,
    legs_per_site: usize,
    strategy: Strategy,
) -> Result<VerificationReport> {
    let k = legs_per_site;
    let dims = r.row_dims();
    if k == 0 || !r.is_square_legs() || dims.len() != 2 * k || dims[..k] != dims[k..] {
        return Err(Error::DimensionMismatch(format!(
            "R must act on two equal sites of {k} legs, got {:?} -> {:?}",
            r.col_dims(),
            r.row_dims()
        )));
    }
    let site = &dims[..k];
    let space: Vec<usize> = site.iter().cycle().take(3 * k).copied().collect();
    let legs = |a: usize, b: usize| -> Vec<usize> { (a * k..(a + 1) * k).chain(b * k..(b + 1) * k).collect() };
    let (r12, r13, r23) = (legs(0, 1), legs(0, 2), legs(1, 2));
    check_identity(
        RelationId::YangBaxter,
        &space,
        &[(r, &r12), (r, &r13), (r, &r23)],
        &[(r, &r23), (r, &r13), (r, &r12)],
        strategy,
    )
}

/// `G₁S₁₂F₂ = F₂G₁` with `F₂ = S₀₂`, `G₁ = S₁₀` on legs `(0, 1, 2)`,
/// leg 0 being the representation space.
pub fn check_mixed_permutation<F: Field>(s: &Operator<F>) -> Result<VerificationReport> {
    let d = two_leg_dim(s, "S")?;
    check_identity(
        RelationId::MixedPermutation,
        &[d; 3],
        &[(s, L10), (s, L12), (s, L02)],
        &[(s, L02), (s, L10)],
        Strategy::default(),
    )
}

/// `F₁F₂S₁₂ = S₁₂F₁` and `S₁₂G₁G₂ = G₂S₁₂` with `Fᵢ = S₀ᵢ`, `Gᵢ = Sᵢ₀`.
/// Each family lives on its own three-leg space `(0, 1, 2)`.
pub fn check_fg_relations<F: Field>(s: &Operator<F>) -> Result<VerificationReport> {
    let d = two_leg_dim(s, "S")?;
    let f = check_identity(
        RelationId::FGRelations,
        &[d; 3],
        &[(s, L01), (s, L02), (s, L12)],
        &[(s, L12), (s, L01)],
        Strategy::default(),
    )?;
    if !f.holds {
        return Ok(f.with_detail("F family: F1 F2 S12 = S12 F1"));
    }
    let g = check_identity(
        RelationId::FGRelations,
        &[d; 3],
        &[(s, L12), (s, L10), (s, L20)],
        &[(s, L20), (s, L12)],
        Strategy::default(),
    )?;
    let mut g = if g.holds { g } else { g.with_detail("G family: S12 G1 G2 = G2 S12") };
    g.elapsed += f.elapsed;
    Ok(g)
}

/// Drinfeld double relations for generators `E_α` (`lower`) and `E^α` (`upper`):
/// `E_αE_β = m_{αβ}^γ E_γ`, `E^αE^β = μ_γ^{αβ} E^γ`,
/// `μ_α^{σγ} m_{γρ}^β E_σE^ρ = m_{ργ}^β μ_α^{γσ} E^ρE_σ`.
/// The witness basis is `[family, α, β]`.
pub fn check_drinfeld_relations<F: Field>(
    sc: &StructureConstants<F>,
    lower: &[Operator<F>],
    upper: &[Operator<F>],
) -> Result<VerificationReport> {
    if lower.len() != sc.dim || upper.len() != sc.dim {
        return Err(Error::DimensionMismatch(format!(
            "expected {} generators of each kind, got {} and {}",
            sc.dim,
            lower.len(),
            upper.len()
        )));
    }
    let n = lower.first().map_or(0, Operator::row_size);
    if lower.iter().chain(upper).any(|x| x.row_size() != n || !x.is_square_legs()) {
        return Err(Error::DimensionMismatch("generators act on different spaces".into()));
    }
    Ok(VerificationReport::timed(RelationId::DrinfeldRelations, n, || {
        double_relations(sc, lower, upper, CrossOrder::Drinfeld)
    }))
}
