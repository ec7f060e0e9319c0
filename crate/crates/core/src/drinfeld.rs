//! The Hopf case: the family `S, S̃, S′, S″`, Drinfeld double generators on
//! the tensor square of the adjoint representation, and the factorized
//! R-matrix `R₁₂,₃₄ = S″₁₄ S₁₃ S̃₂₄ S′₂₃`.

use crate::bialgebra::{
    adjoint_rep, canonical_element, double_relations, tilde_rep, AdjointRep, CrossOrder,
    StructureConstants,
};
use crate::error::{Error, Result};
use crate::relations::{check_mixed_pentagons, check_pentagon, check_reversed_pentagon, check_yang_baxter};
use crate::report::{RelationId, VerificationReport};
use crate::scalar::Field;
use crate::tensor::{LegPlacement, Operator};

#[derive(Debug, Clone, PartialEq)]
pub struct SMatrixFamily<F: Field> {
    pub s: Operator<F>,
    /// `Sᵗ`
    pub s_tilde: Operator<F>,
    /// `(S⁻¹)^{t₁}`
    pub s_prime: Operator<F>,
    /// `(S^{t₂})⁻¹`
    pub s_double_prime: Operator<F>,
}

fn invert_named<F: Field>(op: &Operator<F>, what: &'static str) -> Result<Operator<F>> {
    op.invert().map_err(|e| match e {
        Error::Singular { rank, size, .. } => Error::Singular { what, rank, size },
        other => other,
    })
}

/// The four operators from full and partial transpositions of `S`.
/// Fails if `S` or `S^{t₂}` is singular.
pub fn s_family<F: Field>(s: &Operator<F>) -> Result<SMatrixFamily<F>> {
    let dims = s.row_dims();
    if !s.is_square_legs() || dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch("S must act on two equal square legs".into()));
    }
    let s_prime = invert_named(s, "S")?.partial_transpose(0)?;
    let s_double_prime = invert_named(&s.partial_transpose(1)?, "S^t2")?;
    Ok(SMatrixFamily {
        s: s.clone(),
        s_tilde: s.transpose(),
        s_prime,
        s_double_prime,
    })
}

fn canonical_pair<F: Field>(lower: &[Operator<F>], upper: &[Operator<F>]) -> Operator<F> {
    canonical_element(&AdjointRep {
        lower: lower.to_vec(),
        upper: upper.to_vec(),
    })
}

/// The family built from the two representations:
/// `S′ = ẽ_α ⊗ e^α`, `S″ = e_α ⊗ ẽ^α`, `S̃ = ẽ_α ⊗ ẽ^α`. Each is checked
/// against the transposition formulas of [`s_family`].
pub fn s_primes_from_reps<F: Field>(
    rep: &AdjointRep<F>,
    tilde: &AdjointRep<F>,
) -> Result<SMatrixFamily<F>> {
    let from_reps = SMatrixFamily {
        s: canonical_element(rep),
        s_tilde: canonical_pair(&tilde.lower, &tilde.upper),
        s_prime: canonical_pair(&tilde.lower, &rep.upper),
        s_double_prime: canonical_pair(&rep.lower, &tilde.upper),
    };
    let formulas = s_family(&from_reps.s)?;
    for (a, b, name) in [
        (&from_reps.s_tilde, &formulas.s_tilde, "S~"),
        (&from_reps.s_prime, &formulas.s_prime, "S'"),
        (&from_reps.s_double_prime, &formulas.s_double_prime, "S''"),
    ] {
        if a != b {
            return Err(Error::InvalidConstants(format!(
                "{name} from the representations disagrees with its transposition formula"
            )));
        }
    }
    Ok(from_reps)
}

/// `E_α` and `E^α` acting on the pair space `d ⊗ d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleGenerators<F: Field> {
    pub lower: Vec<Operator<F>>,
    pub upper: Vec<Operator<F>>,
}

/// `E_α = μ_α^{βγ} e_β ⊗ ẽ_γ`, `E^α = m_{γβ}^α e^β ⊗ ẽ^γ`.
pub fn drinfeld_generators<F: Field>(
    sc: &StructureConstants<F>,
    rep: &AdjointRep<F>,
    tilde: &AdjointRep<F>,
) -> Result<DoubleGenerators<F>> {
    if !sc.has_hopf_data() {
        return Err(Error::MissingHopfData("the Drinfeld double needs an antipode"));
    }
    let d = sc.dim;
    let zero = || Operator::zero(vec![d, d], vec![d, d]);
    let mut lower = vec![zero(); d];
    let mut upper = vec![zero(); d];
    for (&(a, b, c), v) in &sc.mu {
        lower[a] = lower[a].add(&rep.lower[b].kron(&tilde.lower[c]).scale(v))?;
    }
    for (&(c, b, a), v) in &sc.m {
        upper[a] = upper[a].add(&rep.upper[b].kron(&tilde.upper[c]).scale(v))?;
    }
    Ok(DoubleGenerators { lower, upper })
}

/// An R-matrix acting on two sites of `site_legs` legs each; legs are
/// flattened row-major with site 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix<F: Field> {
    pub operator: Operator<F>,
    pub site_legs: usize,
}

impl<F: Field> RMatrix<F> {
    pub fn check_yang_baxter(&self) -> Result<VerificationReport> {
        check_yang_baxter(&self.operator, self.site_legs)
    }
}

/// `R₁₂,₃₄ = S″₁₄ S₁₃ S̃₂₄ S′₂₃` on legs `(0,1)` for site 1 and `(2,3)` for site 2.
pub fn r_matrix<F: Field>(family: &SMatrixFamily<F>) -> Result<RMatrix<F>> {
    let d = family.s.row_dims()[0];
    let dims = vec![d; 4];
    let mut r = Operator::identity(dims.clone());
    for (op, legs) in [
        (&family.s_double_prime, [0, 3]),
        (&family.s, [0, 2]),
        (&family.s_tilde, [1, 3]),
        (&family.s_prime, [1, 2]),
    ] {
        let pl = LegPlacement::new(dims.clone(), legs.to_vec())?;
        r = r.compose(&op.place_on_legs(&pl)?)?;
    }
    Ok(RMatrix {
        operator: r,
        site_legs: 2,
    })
}

/// `Σ_α E_α ⊗ E^α`, the canonical element of the double.
pub fn canonical_r<F: Field>(gens: &DoubleGenerators<F>) -> RMatrix<F> {
    let d = gens.lower.first().map_or(0, |e| e.row_dims()[0]);
    let mut r = Operator::zero(vec![d; 4], vec![d; 4]);
    for (l, u) in gens.lower.iter().zip(&gens.upper) {
        r = r.add(&l.kron(u)).expect("same dimensions");
    }
    RMatrix {
        operator: r,
        site_legs: 2,
    }
}

/// Tilde-double relations in the transpose realization, the pentagon for
/// `S`, the reversed pentagon for `S̃` and the six mixed pentagons.
pub fn check_double_consistency<F: Field>(sc: &StructureConstants<F>) -> Result<Vec<VerificationReport>> {
    let rep = adjoint_rep(sc);
    let tilde = tilde_rep(sc, &rep)?;
    let family = s_primes_from_reps(&rep, &tilde)?;
    let mut out = vec![VerificationReport::timed(RelationId::TildeRelations, sc.dim, || {
        double_relations(sc, &tilde.lower, &tilde.upper, CrossOrder::UpperLower)
    })];
    out.push(check_pentagon(&family.s)?);
    out.push(check_reversed_pentagon(&family.s_tilde)?);
    out.extend(check_mixed_pentagons(
        &family.s,
        &family.s_prime,
        &family.s_double_prime,
        &family.s_tilde,
    )?);
    Ok(out)
}

/// Operator equality as a report with the first differing entry as witness.
pub fn agreement<F: Field>(what: &'static str, a: &Operator<F>, b: &Operator<F>) -> VerificationReport {
    VerificationReport::timed(RelationId::Agreement(what), a.row_size(), || {
        if a == b {
            return None;
        }
        let keys: std::collections::BTreeSet<(usize, usize)> =
            a.iter().chain(b.iter()).map(|(r, c, _)| (r, c)).collect();
        keys.into_iter().find_map(|(r, c)| {
            let (x, y) = (a.get(r, c), b.get(r, c));
            (x != y).then(|| {
                let mut basis = crate::tensor::unflatten(r, a.row_dims());
                basis.extend(crate::tensor::unflatten(c, a.col_dims()));
                crate::report::Witness::scalar(basis, x, y)
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{group_algebra, FiniteGroup};
    use crate::relations::check_drinfeld_relations;
    use crate::scalar::Rational;

    type Op = Operator<Rational>;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn hopf(g: &FiniteGroup) -> StructureConstants<Rational> {
        group_algebra(g)
    }

    fn parts(g: &FiniteGroup) -> (StructureConstants<Rational>, AdjointRep<Rational>, AdjointRep<Rational>) {
        let sc = hopf(g);
        let rep = adjoint_rep(&sc);
        let tilde = tilde_rep(&sc, &rep).unwrap();
        (sc, rep, tilde)
    }

    #[test]
    fn identity_family() {
        let id = Op::identity(vec![2, 2]);
        let fam = s_family(&id).unwrap();
        for x in [&fam.s_tilde, &fam.s_prime, &fam.s_double_prime] {
            assert!(x.is_identity());
        }
        assert!(r_matrix(&fam).unwrap().operator.is_identity());
    }

    #[test]
    fn z2_family() {
        let (_, rep, tilde) = parts(&FiniteGroup::cyclic(2));
        let s = canonical_element(&rep);
        let fam = s_family(&s).unwrap();
        assert_eq!(fam.s_tilde, s.invert().unwrap());
        assert_eq!(s_primes_from_reps(&rep, &tilde).unwrap(), fam);
    }

    #[test]
    fn z3_family_matches_formulas() {
        let (_, rep, tilde) = parts(&FiniteGroup::cyclic(3));
        let fam = s_primes_from_reps(&rep, &tilde).unwrap();
        let s = canonical_element(&rep);
        assert_eq!(fam.s_prime, s.invert().unwrap().partial_transpose(0).unwrap());
        let reps = check_mixed_pentagons(&fam.s, &fam.s_prime, &fam.s_double_prime, &fam.s_tilde).unwrap();
        assert!(reps.iter().all(|r| r.holds));
    }

    #[test]
    fn dim_one() {
        let (sc, rep, tilde) = parts(&FiniteGroup::cyclic(1));
        let fam = s_primes_from_reps(&rep, &tilde).unwrap();
        let one = Op::identity(vec![1, 1]);
        assert_eq!(fam.s_tilde, one);
        assert_eq!(fam.s_prime, one);
        let gens = drinfeld_generators(&sc, &rep, &tilde).unwrap();
        assert_eq!(gens.lower, vec![one.clone()]);
        assert_eq!(gens.upper, vec![one]);
        assert!(check_double_consistency(&sc).unwrap().iter().all(|r| r.holds));
    }

    #[test]
    fn singular_inputs_are_named() {
        let zero = Op::zero(vec![2, 2], vec![2, 2]);
        assert!(matches!(s_family(&zero), Err(Error::Singular { what: "S", .. })));
        // Invertible, but its partial transpose on leg 2 is not: the swap.
        assert!(matches!(s_family(&Op::swap(2)), Err(Error::Singular { what: "S^t2", .. })));
    }

    #[test]
    fn drinfeld_relations_and_r_matrix() {
        for n in [2, 3] {
            let (sc, rep, tilde) = parts(&FiniteGroup::cyclic(n));
            let gens = drinfeld_generators(&sc, &rep, &tilde).unwrap();
            assert_eq!(gens.lower.len(), n);
            assert_eq!(gens.lower[0].row_size(), n * n);
            assert!(check_drinfeld_relations(&sc, &gens.lower, &gens.upper).unwrap().holds);
            let fam = s_primes_from_reps(&rep, &tilde).unwrap();
            let rm = r_matrix(&fam).unwrap();
            assert_eq!(rm.operator, canonical_r(&gens).operator);
            let ybe = rm.check_yang_baxter().unwrap();
            assert!(ybe.holds);
            assert_eq!(ybe.space_dim, n.pow(6));
        }
    }

    #[test]
    fn s3_generators_and_r() {
        let (sc, rep, tilde) = parts(&FiniteGroup::symmetric3());
        let gens = drinfeld_generators(&sc, &rep, &tilde).unwrap();
        assert!(check_drinfeld_relations(&sc, &gens.lower, &gens.upper).unwrap().holds);
        let fam = s_primes_from_reps(&rep, &tilde).unwrap();
        let rm = r_matrix(&fam).unwrap();
        assert!(agreement("R", &rm.operator, &canonical_r(&gens).operator).holds);
    }

    #[test]
    fn double_consistency() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
            let reps = check_double_consistency(&hopf(&g)).unwrap();
            assert_eq!(reps.len(), 9);
            for rep in reps {
                assert!(rep.holds, "{rep}");
            }
        }
        let mut sc = hopf(&FiniteGroup::cyclic(2));
        sc.antipode = Some(Default::default());
        assert!(check_double_consistency(&sc).is_err());
    }

    #[test]
    fn broken_generators_fail() {
        let (sc, rep, tilde) = parts(&FiniteGroup::cyclic(2));
        let mut gens = drinfeld_generators(&sc, &rep, &tilde).unwrap();
        gens.upper[1] = gens.upper[1].scale(&r(2));
        assert!(!check_drinfeld_relations(&sc, &gens.lower, &gens.upper).unwrap().holds);
        let fam = s_primes_from_reps(&rep, &tilde).unwrap();
        let rm = r_matrix(&fam).unwrap();
        let rep = agreement("R", &rm.operator, &canonical_r(&gens).operator);
        assert!(!rep.holds);
        assert_eq!(rep.witness.unwrap().basis.len(), 8);
    }

    #[test]
    fn missing_antipode() {
        let (mut sc, rep, tilde) = parts(&FiniteGroup::cyclic(2));
        sc.antipode = None;
        assert!(matches!(drinfeld_generators(&sc, &rep, &tilde), Err(Error::MissingHopfData(_))));
    }
}
