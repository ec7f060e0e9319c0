//! Bialgebras and Hopf algebras given by structure constants.
//!
//! Index conventions, all zero-based:
//! * `m[(a, b, c)]` is `m_{ab}^c`: `e_a e_b = Σ_c m_{ab}^c e_c`.
//! * `mu[(a, b, c)]` is `μ_a^{bc}`: `Δ(e_a) = Σ μ_a^{bc} e_b ⊗ e_c`. Read on the
//!   dual basis it is also the product `e^b e^c = Σ_a μ_a^{bc} e^a`.
//! * `antipode[(a, b)]` is `γ_a^b`: `γ(e_a) = Σ_b γ_a^b e_b`; same for the inverse.

mod group;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::report::{RelationId, VerificationReport, Witness};
use crate::scalar::Field;
use crate::tensor::Operator;
pub use group::{group_algebra, FiniteGroup};

pub type Tensor3<F> = BTreeMap<(usize, usize, usize), F>;
pub type Tensor2<F> = BTreeMap<(usize, usize), F>;

#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants<F> {
    pub dim: usize,
    pub m: Tensor3<F>,
    pub mu: Tensor3<F>,
    pub unit: Option<Vec<F>>,
    pub counit: Option<Vec<F>>,
    pub antipode: Option<Tensor2<F>>,
    pub antipode_inv: Option<Tensor2<F>>,
}

/// Dense copy of a three-index tensor for inner loops.
struct Dense3<F> {
    d: usize,
    data: Vec<F>,
}

impl<F: Field> Dense3<F> {
    fn new(d: usize, sparse: &Tensor3<F>) -> Self {
        let mut data = vec![F::zero(); d * d * d];
        for (&(a, b, c), v) in sparse {
            data[(a * d + b) * d + c] = v.clone();
        }
        Dense3 { d, data }
    }

    fn get(&self, a: usize, b: usize, c: usize) -> &F {
        &self.data[(self.d * a + b) * self.d + c]
    }
}

fn delta<F: Field>(a: usize, b: usize) -> F {
    if a == b {
        F::one()
    } else {
        F::zero()
    }
}

/// Scans index tuples in lexicographic order and reports the first mismatch.
fn first_mismatch<F: Field>(
    d: usize,
    arity: usize,
    mut sides: impl FnMut(&[usize]) -> (F, F),
) -> Option<Witness> {
    let total = d.pow(arity as u32);
    let mut idx = vec![0; arity];
    for flat in 0..total {
        let mut rest = flat;
        for slot in idx.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        let (l, r) = sides(&idx);
        if l != r {
            return Some(Witness::scalar(idx.clone(), l, r));
        }
    }
    None
}

impl<F: Field> StructureConstants<F> {
    /// Bialgebra without Hopf data. Zero values are dropped.
    pub fn new(dim: usize, m: Tensor3<F>, mu: Tensor3<F>) -> Result<Self> {
        let sc = StructureConstants {
            dim,
            m: m.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            mu: mu.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            unit: None,
            counit: None,
            antipode: None,
            antipode_inv: None,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Index bounds and, when both maps are present, `γ γ̄ = id`.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidConstants("dimension must be positive".into()));
        }
        let oob3 = |t: &Tensor3<F>| t.keys().any(|&(a, b, c)| a >= d || b >= d || c >= d);
        let oob2 = |t: &Tensor2<F>| t.keys().any(|&(a, b)| a >= d || b >= d);
        if oob3(&self.m) || oob3(&self.mu) {
            return Err(Error::InvalidConstants(format!("index out of range for dim {d}")));
        }
        for v in [&self.unit, &self.counit].into_iter().flatten() {
            if v.len() != d {
                return Err(Error::InvalidConstants(format!(
                    "unit/counit has length {} for dim {d}",
                    v.len()
                )));
            }
        }
        for t in [&self.antipode, &self.antipode_inv].into_iter().flatten() {
            if oob2(t) {
                return Err(Error::InvalidConstants(format!("antipode index out of range for dim {d}")));
            }
        }
        if self.antipode.is_some() && self.antipode_inv.is_some() {
            let report = check_antipode_inverse(self);
            if !report.holds {
                return Err(Error::InvalidConstants(
                    "antipode and its inverse do not compose to the identity".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn m(&self, a: usize, b: usize, c: usize) -> F {
        self.m.get(&(a, b, c)).cloned().unwrap_or_else(F::zero)
    }

    pub fn mu(&self, a: usize, b: usize, c: usize) -> F {
        self.mu.get(&(a, b, c)).cloned().unwrap_or_else(F::zero)
    }

    pub fn has_hopf_data(&self) -> bool {
        self.antipode.is_some() && self.antipode_inv.is_some()
    }

    /// True when `m_{ab}^c = m_{ba}^c` for all indices.
    pub fn is_commutative(&self) -> bool {
        self.m.iter().all(|(&(a, b, c), v)| self.m(b, a, c) == *v)
    }

    /// The same bialgebra with every scalar mapped through `f` (e.g. promotion ℚ → ℚ(q)).
    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> StructureConstants<G> {
        let t3 = |t: &Tensor3<F>| t.iter().map(|(k, v)| (*k, f(v))).collect();
        let t2 = |t: &Tensor2<F>| t.iter().map(|(k, v)| (*k, f(v))).collect();
        StructureConstants {
            dim: self.dim,
            m: t3(&self.m),
            mu: t3(&self.mu),
            unit: self.unit.as_ref().map(|u| u.iter().map(&f).collect()),
            counit: self.counit.as_ref().map(|u| u.iter().map(&f).collect()),
            antipode: self.antipode.as_ref().map(t2),
            antipode_inv: self.antipode_inv.as_ref().map(t2),
        }
    }
}

pub fn check_associativity<F: Field>(sc: &StructureConstants<F>) -> VerificationReport {
    let d = sc.dim;
    VerificationReport::timed(RelationId::Associativity, d, || {
        let m = Dense3::new(d, &sc.m);
        first_mismatch(d, 4, |i| {
            let (a, b, c, t) = (i[0], i[1], i[2], i[3]);
            let mut lhs = F::zero();
            let mut rhs = F::zero();
            for s in 0..d {
                lhs = lhs + m.get(a, b, s).clone() * m.get(s, c, t).clone();
                rhs = rhs + m.get(b, c, s).clone() * m.get(a, s, t).clone();
            }
            (lhs, rhs)
        })
    })
}

/// `(Δ ⊗ id)Δ = (id ⊗ Δ)Δ`: `Σ_s μ_a^{sδ} μ_s^{βγ} = Σ_s μ_a^{βs} μ_s^{γδ}`,
/// witness indices `(a, β, γ, δ)`.
pub fn check_coassociativity<F: Field>(sc: &StructureConstants<F>) -> VerificationReport {
    let d = sc.dim;
    VerificationReport::timed(RelationId::Coassociativity, d, || {
        let mu = Dense3::new(d, &sc.mu);
        first_mismatch(d, 4, |i| {
            let (a, b, c, e) = (i[0], i[1], i[2], i[3]);
            let mut lhs = F::zero();
            let mut rhs = F::zero();
            for s in 0..d {
                lhs = lhs + mu.get(a, s, e).clone() * mu.get(s, b, c).clone();
                rhs = rhs + mu.get(a, b, s).clone() * mu.get(s, c, e).clone();
            }
            (lhs, rhs)
        })
    })
}

/// `Δ(e_α e_β) = Δ(e_α) Δ(e_β)`, witness indices `(α, β, ρ, σ)`.
pub fn check_compatibility<F: Field>(sc: &StructureConstants<F>) -> VerificationReport {
    let d = sc.dim;
    VerificationReport::timed(RelationId::Compatibility, d, || {
        let m = Dense3::new(d, &sc.m);
        let mu = Dense3::new(d, &sc.mu);
        let mut mu_by_first: Vec<Vec<(usize, usize, F)>> = vec![Vec::new(); d];
        for (&(a, b, c), v) in &sc.mu {
            mu_by_first[a].push((b, c, v.clone()));
        }
        for a in 0..d {
            for b in 0..d {
                let mut lhs = vec![F::zero(); d * d];
                for g in 0..d {
                    let mg = m.get(a, b, g);
                    if mg.is_zero() {
                        continue;
                    }
                    for r in 0..d {
                        for s in 0..d {
                            let v = mu.get(g, r, s);
                            if !v.is_zero() {
                                lhs[r * d + s] = lhs[r * d + s].clone() + mg.clone() * v.clone();
                            }
                        }
                    }
                }
                let mut rhs = vec![F::zero(); d * d];
                for (r1, s1, x) in &mu_by_first[a] {
                    for (r2, s2, y) in &mu_by_first[b] {
                        let xy = x.clone() * y.clone();
                        for r in 0..d {
                            let mr = m.get(*r1, *r2, r);
                            if mr.is_zero() {
                                continue;
                            }
                            let xyr = xy.clone() * mr.clone();
                            for s in 0..d {
                                let ms = m.get(*s1, *s2, s);
                                if !ms.is_zero() {
                                    rhs[r * d + s] = rhs[r * d + s].clone() + xyr.clone() * ms.clone();
                                }
                            }
                        }
                    }
                }
                for k in 0..d * d {
                    if lhs[k] != rhs[k] {
                        return Some(Witness::scalar(vec![a, b, k / d, k % d], &lhs[k], &rhs[k]));
                    }
                }
            }
        }
        None
    })
}

/// `Σ_a ε^a m_{ab}^c = δ_b^c = Σ_a m_{ba}^c ε^a`. Vacuously true without a unit.
pub fn check_unit_laws<F: Field>(sc: &StructureConstants<F>) -> VerificationReport {
    let d = sc.dim;
    VerificationReport::timed(RelationId::UnitLaws, d, || {
        let unit = sc.unit.as_ref()?;
        first_mismatch(d, 3, |i| {
            let (side, b, c) = (i[0], i[1], i[2]);
            if side > 1 {
                return (F::zero(), F::zero());
            }
            let mut acc = F::zero();
            for (a, e) in unit.iter().enumerate() {
                let coeff = if side == 0 { sc.m(a, b, c) } else { sc.m(b, a, c) };
                acc = acc + e.clone() * coeff;
            }
            (acc, delta(b, c))
        })
    })
}

/// `Σ_b μ_a^{bc} ε_b = δ_a^c` and `Σ_c μ_a^{bc} ε_c = δ_a^b`.
pub fn check_counit_laws<F: Field>(sc: &StructureConstants<F>) -> VerificationReport {
    let d = sc.dim;
    VerificationReport::timed(RelationId::CounitLaws, d, || {
        let counit = sc.counit.as_ref()?;
        first_mismatch(d, 3, |i| {
            let (side, a, c) = (i[0], i[1], i[2]);
            if side > 1 {
                return (F::zero(), F::zero());
            }
            let mut acc = F::zero();
            for (b, e) in counit.iter().enumerate() {
                let coeff = if side == 0 { sc.mu(a, b, c) } else { sc.mu(a, c, b) };
                acc = acc + e.clone() * coeff;
            }
            (acc, delta(a, c))
        })
    })
}

/// `γ_a^c γ̄_c^b = δ_a^b` and `γ̄_a^c γ_c^b = δ_a^b`.
pub fn check_antipode_inverse<F: Field>(sc: &StructureConstants<F>) -> VerificationReport {
    let d = sc.dim;
    VerificationReport::timed(RelationId::AntipodeInverse, d, || {
        let (Some(g), Some(gb)) = (&sc.antipode, &sc.antipode_inv) else {
            return None;
        };
        let get = |t: &Tensor2<F>, a, b| t.get(&(a, b)).cloned().unwrap_or_else(F::zero);
        first_mismatch(d, 3, |i| {
            let (side, a, b) = (i[0], i[1], i[2]);
            if side > 1 {
                return (F::zero(), F::zero());
            }
            let (x, y) = if side == 0 { (g, gb) } else { (gb, g) };
            let mut acc = F::zero();
            for c in 0..d {
                acc = acc + get(x, a, c) * get(y, c, b);
            }
            (acc, delta(a, b))
        })
    })
}

/// Every axiom check applicable to `sc`.
pub fn check_axioms<F: Field>(sc: &StructureConstants<F>) -> Vec<VerificationReport> {
    let mut out = vec![
        check_associativity(sc),
        check_coassociativity(sc),
        check_compatibility(sc),
    ];
    if sc.unit.is_some() {
        out.push(check_unit_laws(sc));
    }
    if sc.counit.is_some() {
        out.push(check_counit_laws(sc));
    }
    if sc.has_hopf_data() {
        out.push(check_antipode_inverse(sc));
    }
    out
}

/// Matrices for `e_β` (`lower`) and `e^β` (`upper`), each `dim × dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointRep<F: Field> {
    pub lower: Vec<Operator<F>>,
    pub upper: Vec<Operator<F>>,
}

impl<F: Field> AdjointRep<F> {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// `⟨α|e_β|γ⟩ = m_{αβ}^γ`, `⟨α|e^β|γ⟩ = μ_α^{βγ}`.
pub fn adjoint_rep<F: Field>(sc: &StructureConstants<F>) -> AdjointRep<F> {
    let d = sc.dim;
    let mut lower = vec![Operator::zero(vec![d], vec![d]); d];
    let mut upper = vec![Operator::zero(vec![d], vec![d]); d];
    for (&(a, b, c), v) in &sc.m {
        lower[b].insert(a, c, v.clone());
    }
    for (&(a, b, c), v) in &sc.mu {
        upper[b].insert(a, c, v.clone());
    }
    AdjointRep { lower, upper }
}

/// `S = Σ_α rep(e_α) ⊗ rep(e^α)` on `dim ⊗ dim`.
pub fn canonical_element<F: Field>(rep: &AdjointRep<F>) -> Operator<F> {
    let d = rep.dim();
    let mut s = Operator::zero(vec![d, d], vec![d, d]);
    for (l, u) in rep.lower.iter().zip(&rep.upper) {
        s = s.add(&l.kron(u)).expect("same dimensions");
    }
    s
}

/// The second ("tilde") double realized through transposition:
/// `rep(ẽ_α) = Σ_β γ_α^β rep(e_β)ᵗ`, `rep(ẽ^α) = Σ_β γ̄_β^α rep(e^β)ᵗ`.
pub fn tilde_rep<F: Field>(sc: &StructureConstants<F>, rep: &AdjointRep<F>) -> Result<AdjointRep<F>> {
    let (Some(g), Some(gb)) = (&sc.antipode, &sc.antipode_inv) else {
        return Err(Error::MissingHopfData("antipode and inverse antipode are required"));
    };
    if !check_antipode_inverse(sc).holds {
        return Err(Error::InvalidConstants(
            "antipode and its inverse do not compose to the identity".into(),
        ));
    }
    let d = sc.dim;
    let lower_t: Vec<_> = rep.lower.iter().map(Operator::transpose).collect();
    let upper_t: Vec<_> = rep.upper.iter().map(Operator::transpose).collect();
    let mut lower = vec![Operator::zero(vec![d], vec![d]); d];
    let mut upper = vec![Operator::zero(vec![d], vec![d]); d];
    for (&(a, b), v) in g {
        lower[a] = lower[a].add(&lower_t[b].scale(v))?;
    }
    for (&(b, a), v) in gb {
        upper[a] = upper[a].add(&upper_t[b].scale(v))?;
    }
    Ok(AdjointRep { lower, upper })
}

/// Renders two matrices as a witness at `basis`.
pub(crate) fn matrix_witness<F: Field>(basis: Vec<usize>, lhs: &Operator<F>, rhs: &Operator<F>) -> Witness {
    let render = |op: &Operator<F>| {
        op.iter()
            .map(|(r, c, v)| (format!("{r};{c}"), v.to_string()))
            .collect()
    };
    Witness {
        basis,
        lhs: render(lhs),
        rhs: render(rhs),
    }
}

/// The three families of Heisenberg double relations in a representation:
/// `e_α e_β = m_{αβ}^γ e_γ`, `e^α e^β = μ_γ^{αβ} e^γ`,
/// `e_α e^β = Σ m_{ργ}^β μ_α^{γσ} e^ρ e_σ`. The witness basis is `[family, α, β]`.
pub fn check_heisenberg_relations<F: Field>(
    sc: &StructureConstants<F>,
    rep: &AdjointRep<F>,
) -> VerificationReport {
    let d = sc.dim;
    VerificationReport::timed(RelationId::HeisenbergRelations, d, || {
        double_relations(sc, &rep.lower, &rep.upper, CrossOrder::LowerUpper)
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum CrossOrder {
    /// `e_α e^β = Σ m_{ργ}^β μ_α^{γσ} e^ρ e_σ`
    LowerUpper,
    /// `ẽ^β ẽ_α = Σ μ_α^{σγ} m_{γρ}^β ẽ_σ ẽ^ρ`
    UpperLower,
    /// `Σ μ_α^{σγ} m_{γρ}^β E_σ E^ρ = Σ m_{ργ}^β μ_α^{γσ} E^ρ E_σ`
    Drinfeld,
}

/// Shared checker for the Heisenberg, tilde and Drinfeld relation families.
pub(crate) fn double_relations<F: Field>(
    sc: &StructureConstants<F>,
    lower: &[Operator<F>],
    upper: &[Operator<F>],
    cross: CrossOrder,
) -> Option<Witness> {
    let d = sc.dim;
    if lower.len() != d || upper.len() != d {
        return Some(Witness::scalar(vec![], lower.len(), d));
    }
    let n = lower[0].row_dims().to_vec();
    let zero = || Operator::zero(n.clone(), n.clone());
    let prod = |a: &Operator<F>, b: &Operator<F>| a.compose(b).expect("same dimensions");
    let lin = |terms: Vec<(F, Operator<F>)>| {
        let mut acc = zero();
        for (c, x) in terms {
            if !c.is_zero() {
                acc = acc.add(&x.scale(&c)).expect("same dimensions");
            }
        }
        acc
    };
    for a in 0..d {
        for b in 0..d {
            let lhs = prod(&lower[a], &lower[b]);
            let rhs = lin((0..d).map(|c| (sc.m(a, b, c), lower[c].clone())).collect());
            if lhs != rhs {
                return Some(matrix_witness(vec![0, a, b], &lhs, &rhs));
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            let lhs = prod(&upper[a], &upper[b]);
            let rhs = lin((0..d).map(|c| (sc.mu(c, a, b), upper[c].clone())).collect());
            if lhs != rhs {
                return Some(matrix_witness(vec![1, a, b], &lhs, &rhs));
            }
        }
    }
    // Precompute products once per cross check.
    let mut lu = vec![None; d * d];
    let mut ul = vec![None; d * d];
    let mut lower_upper = |s: usize, r: usize| -> Operator<F> {
        lu[s * d + r].get_or_insert_with(|| prod(&lower[s], &upper[r])).clone()
    };
    let mut upper_lower = |r: usize, s: usize| -> Operator<F> {
        ul[r * d + s].get_or_insert_with(|| prod(&upper[r], &lower[s])).clone()
    };
    for a in 0..d {
        for b in 0..d {
            // Σ_γ m_{ργ}^β μ_α^{γσ} (upper_ρ lower_σ)
            let mut heis = Vec::new();
            // Σ_γ μ_α^{σγ} m_{γρ}^β (lower_σ upper_ρ)
            let mut tilde = Vec::new();
            for r in 0..d {
                for s in 0..d {
                    let mut c1 = F::zero();
                    let mut c2 = F::zero();
                    for g in 0..d {
                        c1 = c1 + sc.m(r, g, b) * sc.mu(a, g, s);
                        c2 = c2 + sc.mu(a, s, g) * sc.m(g, r, b);
                    }
                    if !c1.is_zero() {
                        heis.push((c1, upper_lower(r, s)));
                    }
                    if !c2.is_zero() {
                        tilde.push((c2, lower_upper(s, r)));
                    }
                }
            }
            let (lhs, rhs) = match cross {
                CrossOrder::LowerUpper => (prod(&lower[a], &upper[b]), lin(heis)),
                CrossOrder::UpperLower => (prod(&upper[b], &lower[a]), lin(tilde)),
                CrossOrder::Drinfeld => (lin(tilde), lin(heis)),
            };
            if lhs != rhs {
                return Some(matrix_witness(vec![2, a, b], &lhs, &rhs));
            }
        }
    }
    None
}
