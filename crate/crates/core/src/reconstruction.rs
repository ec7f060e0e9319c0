//! Recovering a pair of dual bialgebras from an invertible pentagon solution.
//!
//! `S` is regrouped with [`Grouping::Bipartition`] and rank-factorized as
//! `S = Σ_α G_α ⊗ F^α`. With trace duals `tr(G_α G^β) = δ`, `tr(F_α F^β) = δ`
//! the structure constants are `m_{αβ}^γ = tr(G_α G_β G^γ)` and
//! `μ_γ^{αβ} = tr(F^α F^β F_γ)`.

use std::collections::BTreeMap;

use crate::bialgebra::{
    adjoint_rep, canonical_element, check_associativity, check_coassociativity, check_compatibility,
    StructureConstants,
};
use crate::error::{Error, Result};
use crate::relations::check_pentagon;
use crate::report::{RelationId, VerificationReport, Witness};
use crate::scalar::Field;
use crate::tensor::{rank_factorize, reshuffle, DenseMatrix, Grouping, Operator};

#[derive(Debug, Clone)]
pub struct ReconstructionResult<F: Field> {
    pub dim: usize,
    pub g: Vec<Operator<F>>,
    pub f: Vec<Operator<F>>,
    /// `G^γ` with `tr(G_α G^γ) = δ`.
    pub g_dual: Vec<Operator<F>>,
    /// `F_α` with `tr(F_α F^β) = δ`.
    pub f_dual: Vec<Operator<F>>,
    pub constants: StructureConstants<F>,
    /// Unit of the reconstructed algebra, if one exists.
    pub unit: Option<Vec<F>>,
    pub diagnostics: Vec<VerificationReport>,
}

impl<F: Field> ReconstructionResult<F> {
    pub fn all_hold(&self) -> bool {
        self.diagnostics.iter().all(|r| r.holds)
    }
}

fn leg_dim<F: Field>(s: &Operator<F>) -> Result<usize> {
    let dims = s.row_dims();
    if !s.is_square_legs() || dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::DimensionMismatch(
            "S must act on two equal square legs".into(),
        ));
    }
    Ok(dims[0])
}

/// `rank((P₁₂S)^{t₁})`, evaluated literally and checked against the rank of
/// the bipartition regrouping (the two matrices differ by a row permutation).
pub fn dimension<F: Field>(s: &Operator<F>) -> Result<usize> {
    leg_dim(s)?;
    let literal = reshuffle(s, Grouping::SwapTranspose)?.rank();
    let factored = reshuffle(s, Grouping::Bipartition)?.rank();
    assert_eq!(literal, factored, "regroupings of S disagree on rank");
    Ok(literal)
}

/// Row-major `d²` vector as a `d × d` matrix.
fn as_matrix<F: Field>(d: usize, v: &[F]) -> Operator<F> {
    let mut op = Operator::zero(vec![d], vec![d]);
    for (k, x) in v.iter().enumerate() {
        op.insert(k / d, k % d, x.clone());
    }
    op
}

/// `S = Σ_α G_α ⊗ F^α` with as few terms as possible. The split is fixed by
/// the pivot rule: `G_α` are pivot columns of the bipartition matrix, `F^α`
/// the rows of its reduced echelon form.
pub fn factorize<F: Field>(s: &Operator<F>) -> Result<(Vec<Operator<F>>, Vec<Operator<F>>)> {
    let d = leg_dim(s)?;
    let m = reshuffle(s, Grouping::Bipartition)?;
    let (left, right, _) = rank_factorize(&m);
    let g = left.iter().map(|v| as_matrix(d, v)).collect();
    let f = right.iter().map(|v| as_matrix(d, v)).collect();
    Ok((g, f))
}

fn trace_product<F: Field>(mats: &[&Operator<F>]) -> Result<F> {
    let (first, rest) = mats.split_first().expect("nonempty product");
    let mut acc = (*first).clone();
    for m in rest {
        acc = acc.compose(m)?;
    }
    let mut t = F::zero();
    for (r, c, v) in acc.iter() {
        if r == c {
            t = t + v.clone();
        }
    }
    Ok(t)
}

/// Matrices `X_α` with `tr(X_α A_β) = δ_αβ` for linearly independent `A_β`.
/// Each `X_α` is the solution of the linear system with free variables set to zero.
pub fn dual_matrices<F: Field>(mats: &[Operator<F>]) -> Result<Vec<Operator<F>>> {
    let r = mats.len();
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let d = first.row_size();
    // Row β: coefficients of X_{ij} in tr(X A_β) = Σ_ij X_ij (A_β)_ji.
    let mut sys = DenseMatrix::zeros(r, d * d);
    for (b, a) in mats.iter().enumerate() {
        if a.row_size() != d || a.col_size() != d {
            return Err(Error::DimensionMismatch("matrices of different sizes".into()));
        }
        for (j, i, v) in a.iter() {
            sys[(b, i * d + j)] = v.clone();
        }
    }
    (0..r)
        .map(|a| {
            let rhs: Vec<F> = (0..r).map(|b| if a == b { F::one() } else { F::zero() }).collect();
            let x = sys.solve(&rhs).ok_or_else(|| {
                Error::Degenerate("matrices are linearly dependent under the trace pairing".into())
            })?;
            Ok(as_matrix(d, &x))
        })
        .collect()
}

/// Checks that products of the basis close on its span, returning the
/// structure constants `c[(α,β,γ)]` of `A_α A_β = Σ_γ c A_γ`.
fn closed_products<F: Field>(
    basis: &[Operator<F>],
    duals: &[Operator<F>],
    what: &str,
) -> Result<BTreeMap<(usize, usize, usize), F>> {
    let r = basis.len();
    let mut out = BTreeMap::new();
    for a in 0..r {
        for b in 0..r {
            let prod = basis[a].compose(&basis[b])?;
            let mut expansion = prod.scale(&F::zero());
            for (c, (dual, elem)) in duals.iter().zip(basis).enumerate() {
                let coeff = trace_product(&[&prod, dual])?;
                if !coeff.is_zero() {
                    expansion = expansion.add(&elem.scale(&coeff))?;
                    out.insert((a, b, c), coeff);
                }
            }
            if expansion != prod {
                return Err(Error::Closure(format!(
                    "{what}_{a} {what}_{b} is not in the span of the {what} matrices"
                )));
            }
        }
    }
    Ok(out)
}

/// `m_{αβ}^γ = tr(G_α G_β G^γ)` and `μ_γ^{αβ} = tr(F^α F^β F_γ)`, after
/// checking that both families are closed under multiplication.
pub fn structure_constants<F: Field>(
    g: &[Operator<F>],
    g_dual: &[Operator<F>],
    f: &[Operator<F>],
    f_dual: &[Operator<F>],
) -> Result<StructureConstants<F>> {
    let r = g.len();
    if g_dual.len() != r || f.len() != r || f_dual.len() != r {
        return Err(Error::DimensionMismatch("factor lists have different lengths".into()));
    }
    let m = closed_products(g, g_dual, "G")?;
    let mu = closed_products(f, f_dual, "F")?
        .into_iter()
        .map(|((a, b, c), v)| ((c, a, b), v))
        .collect();
    StructureConstants::new(r, m, mu)
}

/// The algebra read off the `F` side: multiplication `μ`, comultiplication `m`.
fn swapped<F: Field>(sc: &StructureConstants<F>) -> StructureConstants<F> {
    StructureConstants {
        dim: sc.dim,
        m: sc.mu.iter().map(|(&(c, a, b), v)| ((a, b, c), v.clone())).collect(),
        mu: sc.m.iter().map(|(&(b, c, a), v)| ((a, b, c), v.clone())).collect(),
        unit: None,
        counit: None,
        antipode: None,
        antipode_inv: None,
    }
}

fn pairing_report<F: Field>(s: &Operator<F>, g: &[Operator<F>], f: &[Operator<F>]) -> VerificationReport {
    let d = s.row_dims()[0];
    VerificationReport::timed(RelationId::PairingReproduction, d * d, || {
        let mut sum = Operator::zero(vec![d, d], vec![d, d]);
        for (a, b) in g.iter().zip(f) {
            sum = sum.add(&a.kron(b)).expect("same dimensions");
        }
        let n = d * d;
        (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).find_map(|(r, c)| {
            let (l, rr) = (sum.get(r, c), s.get(r, c));
            (l != rr).then(|| Witness::scalar(vec![r / d, r % d, c / d, c % d], l, rr))
        })
    })
}

fn dual_pairing_report<F: Field>(pairs: [(&[Operator<F>], &[Operator<F>]); 2]) -> VerificationReport {
    let r = pairs[0].0.len();
    VerificationReport::timed(RelationId::DualPairing, r, || {
        for (family, (basis, duals)) in pairs.iter().enumerate() {
            for a in 0..r {
                for b in 0..r {
                    let t = trace_product(&[&duals[a], &basis[b]]).expect("square matrices");
                    let want = if a == b { F::one() } else { F::zero() };
                    if t != want {
                        return Some(Witness::scalar(vec![family, a, b], t, want));
                    }
                }
            }
        }
        None
    })
}

/// Axioms of both reconstructed algebras, reproduction of `S`, the trace
/// duality, and the pentagon for the canonical element rebuilt from `(m, μ)`.
pub fn validate<F: Field>(s: &Operator<F>, result: &ReconstructionResult<F>) -> Vec<VerificationReport> {
    let sc = &result.constants;
    let dual = swapped(sc);
    let mut out = vec![
        check_associativity(sc),
        check_coassociativity(sc),
        check_compatibility(sc),
        check_associativity(&dual).with_detail("F-side algebra"),
        check_coassociativity(&dual).with_detail("F-side algebra"),
        pairing_report(s, &result.g, &result.f),
        dual_pairing_report([(&result.g, &result.g_dual), (&result.f, &result.f_dual)]),
    ];
    let rebuilt = canonical_element(&adjoint_rep(sc));
    let mut pent = check_pentagon(&rebuilt)
        .unwrap_or_else(|e| VerificationReport::failure(RelationId::Pentagon, 0, e.to_string()));
    pent.relation = RelationId::RebuiltPentagon;
    out.push(pent);
    out
}

/// Solves `Σ_α ε^α m_{αβ}^γ = δ_β^γ` for a left unit `ε^α e_α` and keeps it
/// only if it is also a right unit.
pub fn unit_search<F: Field>(sc: &StructureConstants<F>) -> Option<Vec<F>> {
    let d = sc.dim;
    let mut sys = DenseMatrix::zeros(d * d, d);
    let mut rhs = vec![F::zero(); d * d];
    for (&(a, b, c), v) in &sc.m {
        sys[(b * d + c, a)] = v.clone();
    }
    for b in 0..d {
        rhs[b * d + b] = F::one();
    }
    let e = sys.solve(&rhs)?;
    let right_unit = (0..d).all(|a| {
        (0..d).all(|c| {
            let mut acc = F::zero();
            for (b, eb) in e.iter().enumerate() {
                if !eb.is_zero() {
                    acc = acc + eb.clone() * sc.m(a, b, c);
                }
            }
            acc == if a == c { F::one() } else { F::zero() }
        })
    });
    right_unit.then_some(e)
}

/// Full pipeline: factorize, dualize, read off `(m, μ)` and validate.
pub fn reconstruct<F: Field>(s: &Operator<F>) -> Result<ReconstructionResult<F>> {
    let dim = dimension(s)?;
    if dim == 0 {
        return Err(Error::Degenerate("S = 0 has no expansion".into()));
    }
    let (g, f) = factorize(s)?;
    debug_assert_eq!(g.len(), dim);
    let g_dual = dual_matrices(&g)?;
    let f_dual = dual_matrices(&f)?;
    let constants = structure_constants(&g, &g_dual, &f, &f_dual)?;
    let unit = unit_search(&constants);
    let mut result = ReconstructionResult {
        dim,
        g,
        f,
        g_dual,
        f_dual,
        constants,
        unit,
        diagnostics: Vec::new(),
    };
    result.diagnostics = validate(s, &result);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{check_axioms, group_algebra, FiniteGroup};
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type Op = Operator<Rational>;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn mat(rows: &[&[i64]]) -> Op {
        Op::from_dense(&DenseMatrix::from_i64(rows), vec![rows.len()], vec![rows[0].len()]).unwrap()
    }

    fn group_s(g: &FiniteGroup) -> Op {
        canonical_element(&adjoint_rep(&group_algebra::<Rational>(g)))
    }

    /// Rank as the largest nonsingular minor, searching sizes up to `bound`
    /// by cofactor-expanded determinants.
    fn naive_rank(m: &DenseMatrix<Rational>, bound: usize) -> usize {
        fn det(m: &[Vec<Rational>]) -> Rational {
            if m.is_empty() {
                return r(1);
            }
            let mut acc = r(0);
            for (j, x) in m[0].iter().enumerate() {
                if x == &r(0) {
                    continue;
                }
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = x.clone() * det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let nonzero_rows: Vec<usize> = (0..m.rows()).filter(|&i| m.row(i).iter().any(|x| x != &r(0))).collect();
        let nonzero_cols: Vec<usize> = (0..m.cols()).filter(|&j| m.column(j).iter().any(|x| x != &r(0))).collect();
        let max = nonzero_rows.len().min(nonzero_cols.len()).min(bound);
        for k in (1..=max).rev() {
            for rs in subsets(nonzero_rows.len(), k) {
                for cs in subsets(nonzero_cols.len(), k) {
                    let sub: Vec<Vec<Rational>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| m[(nonzero_rows[i], nonzero_cols[j])].clone()).collect())
                        .collect();
                    if det(&sub) != r(0) {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn dimension_examples() {
        let z2 = group_s(&FiniteGroup::cyclic(2));
        assert_eq!(dimension(&z2).unwrap(), 2);
        assert_eq!(naive_rank(&reshuffle(&z2, Grouping::SwapTranspose).unwrap(), 4), 2);
        // The identity is the pure tensor I ⊗ I.
        assert_eq!(dimension(&Op::identity(vec![3, 3])).unwrap(), 1);
        let a = mat(&[&[1, 2], &[0, 1]]);
        let b = mat(&[&[0, 1], &[1, 1]]);
        assert_eq!(dimension(&a.kron(&b)).unwrap(), 1);
        assert_eq!(dimension(&Op::swap(2)).unwrap(), 4);
        assert!(dimension(&Op::identity(vec![2, 3])).is_err());
    }

    #[test]
    fn group_dimensions() {
        for n in 2..=4 {
            assert_eq!(dimension(&group_s(&FiniteGroup::cyclic(n))).unwrap(), n);
        }
        assert_eq!(dimension(&group_s(&FiniteGroup::symmetric3())).unwrap(), 6);
    }

    #[test]
    fn factorize_examples() {
        let a = mat(&[&[1, 2], &[0, 1]]);
        let b = mat(&[&[0, 3], &[1, 1]]);
        let (g, f) = factorize(&a.kron(&b)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].kron(&f[0]), a.kron(&b));

        for s in [group_s(&FiniteGroup::cyclic(2)), Op::identity(vec![2, 2])] {
            let (g, f) = factorize(&s).unwrap();
            let mut sum = Op::zero(vec![2, 2], vec![2, 2]);
            for (x, y) in g.iter().zip(&f) {
                sum = sum.add(&x.kron(y)).unwrap();
            }
            assert_eq!(sum, s);
        }
    }

    #[test]
    fn dual_matrix_examples() {
        let one = Op::identity(vec![1]);
        assert_eq!(dual_matrices(&[one.clone()]).unwrap(), vec![one]);

        let e00 = mat(&[&[1, 0], &[0, 0]]);
        let e11 = mat(&[&[0, 0], &[0, 1]]);
        assert_eq!(dual_matrices(&[e00.clone(), e11.clone()]).unwrap(), vec![e00, e11]);

        let f = vec![Op::identity(vec![2]), mat(&[&[0, 1], &[0, 0]])];
        let duals = dual_matrices(&f).unwrap();
        for (a, x) in duals.iter().enumerate() {
            for (b, y) in f.iter().enumerate() {
                let want = if a == b { r(1) } else { r(0) };
                assert_eq!(trace_product(&[x, y]).unwrap(), want);
            }
        }

        let dependent = vec![Op::identity(vec![2]), Op::identity(vec![2]).scale(&r(2))];
        assert!(dual_matrices(&dependent).is_err());
    }

    #[test]
    fn structure_constants_dim_one() {
        let one = vec![Op::identity(vec![1])];
        let sc = structure_constants(&one, &one, &one, &one).unwrap();
        assert_eq!(sc.m(0, 0, 0), r(1));
        assert_eq!(sc.mu(0, 0, 0), r(1));
    }

    #[test]
    fn closure_violation() {
        // (E₀₁ + E₁₀)² = I lies outside the span.
        let g = vec![mat(&[&[0, 1], &[1, 0]])];
        let dual = dual_matrices(&g).unwrap();
        assert!(matches!(
            structure_constants(&g, &dual, &g, &dual),
            Err(Error::Closure(_))
        ));
    }

    #[test]
    fn group_pipelines() {
        for (g, abelian) in [
            (FiniteGroup::cyclic(1), true),
            (FiniteGroup::cyclic(2), true),
            (FiniteGroup::cyclic(3), true),
            (FiniteGroup::symmetric3(), false),
        ] {
            let s = group_s(&g);
            let res = reconstruct(&s).unwrap();
            assert_eq!(res.dim, g.order());
            for rep in &res.diagnostics {
                assert!(rep.holds, "{rep}");
            }
            assert_eq!(res.constants.is_commutative(), abelian);
            assert!(res.unit.is_some());
        }
    }

    #[test]
    fn identity_pipeline_is_trivial_bialgebra() {
        let res = reconstruct(&Op::identity(vec![2, 2])).unwrap();
        assert_eq!(res.dim, 1);
        assert_eq!(res.constants.m(0, 0, 0), r(1));
        assert_eq!(res.constants.mu(0, 0, 0), r(1));
        assert!(res.all_hold());
    }

    #[test]
    fn zero_rejected() {
        assert!(matches!(
            reconstruct(&Op::zero(vec![2, 2], vec![2, 2])),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn non_pentagon_input_fails_somewhere() {
        let s = Op::swap(2);
        match reconstruct(&s) {
            Ok(res) => assert!(!res.all_hold()),
            Err(e) => assert!(matches!(e, Error::Closure(_))),
        }
    }

    fn invertible(r_: usize) -> impl Strategy<Value = DenseMatrix<Rational>> {
        prop::collection::vec(-3i64..=3, r_ * r_)
            .prop_map(move |v| {
                DenseMatrix::from_rows(v.chunks(r_).map(|c| c.iter().map(|&x| r(x)).collect()).collect())
            })
            .prop_filter("invertible", |m| m.inverse().is_ok())
    }

    /// `Σ_{k<K} A_k ⊗ B_k` on `d ⊗ d` with small integer entries.
    fn random_low_rank() -> impl Strategy<Value = (Op, usize)> {
        (1usize..4, 1usize..4).prop_flat_map(|(d, k)| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, 2 * d * d), k).prop_map(move |terms| {
                let mut s = Op::zero(vec![d, d], vec![d, d]);
                for t in &terms {
                    let to_op = |v: &[i64]| {
                        let rows: Vec<Vec<Rational>> = v.chunks(d).map(|c| c.iter().map(|&x| r(x)).collect()).collect();
                        Op::from_dense(&DenseMatrix::from_rows(rows), vec![d], vec![d]).unwrap()
                    };
                    s = s.add(&to_op(&t[..d * d]).kron(&to_op(&t[d * d..]))).unwrap();
                }
                (s, k)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn basis_change_transforms_tensorially(t in invertible(2)) {
            let s = group_s(&FiniteGroup::cyclic(2));
            let base = reconstruct(&s).unwrap();
            let ti = t.inverse().unwrap();
            let r_ = base.dim;
            // G′_α = T_α^β G_β, F′^α = (T⁻¹)_β^α F^β.
            let g2: Vec<Op> = (0..r_).map(|a| {
                (0..r_).fold(Op::zero(vec![2], vec![2]), |acc, b| acc.add(&base.g[b].scale(&t[(a, b)])).unwrap())
            }).collect();
            let f2: Vec<Op> = (0..r_).map(|a| {
                (0..r_).fold(Op::zero(vec![2], vec![2]), |acc, b| acc.add(&base.f[b].scale(&ti[(b, a)])).unwrap())
            }).collect();
            let mut sum = Op::zero(vec![2, 2], vec![2, 2]);
            for (x, y) in g2.iter().zip(&f2) {
                sum = sum.add(&x.kron(y)).unwrap();
            }
            prop_assert_eq!(&sum, &s);
            let sc2 = structure_constants(&g2, &dual_matrices(&g2).unwrap(), &f2, &dual_matrices(&f2).unwrap()).unwrap();
            let sc = &base.constants;
            for a in 0..r_ { for b in 0..r_ { for c in 0..r_ {
                let mut want = r(0);
                for x in 0..r_ { for y in 0..r_ { for z in 0..r_ {
                    want = want + t[(a, x)].clone() * t[(b, y)].clone() * sc.m(x, y, z) * ti[(z, c)].clone();
                }}}
                prop_assert_eq!(sc2.m(a, b, c), want);
            }}}
            prop_assert!(check_axioms(&sc2).iter().all(|r| r.holds));
        }

        #[test]
        fn literal_rank_matches_factorization((s, k) in random_low_rank()) {
            let dim = dimension(&s).unwrap();
            prop_assert!(dim <= k);
            prop_assert_eq!(dim, naive_rank(&reshuffle(&s, Grouping::SwapTranspose).unwrap(), k));
            let (g, f) = factorize(&s).unwrap();
            prop_assert_eq!(g.len(), dim);
            prop_assert_eq!(f.len(), dim);
        }
    }
}
