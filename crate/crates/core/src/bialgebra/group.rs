use std::collections::BTreeMap;

use super::StructureConstants;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A finite group given by its Cayley table: `table[g][h]` is the index of `gh`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::NotAGroup("table is not closed".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!("({a}{b}){c} != {a}({b}{c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .ok_or_else(|| Error::NotAGroup(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
        })
    }

    /// `Z_n` with elements `0..n` and addition mod `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        Self::from_table((0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect())
            .expect("cyclic group")
    }

    /// `S₃` with permutations of `{0,1,2}` in lexicographic order and
    /// product `(στ)(i) = σ(τ(i))`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index([s[t[0]], s[t[1]], s[t[2]]]))
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.mul(g, h) == self.mul(h, g)))
    }
}

/// The group algebra as a Hopf algebra: `e_g e_h = e_{gh}`, group-like
/// coproduct `Δ(e_g) = e_g ⊗ e_g`, unit `e_1`, counit `ε(e_g) = 1`,
/// antipode `γ(e_g) = e_{g⁻¹}` (an involution, so it is its own inverse).
pub fn group_algebra<F: Field>(group: &FiniteGroup) -> StructureConstants<F> {
    let n = group.order();
    let mut m = BTreeMap::new();
    let mut mu = BTreeMap::new();
    let mut antipode = BTreeMap::new();
    for g in 0..n {
        for h in 0..n {
            m.insert((g, h, group.mul(g, h)), F::one());
        }
        mu.insert((g, g, g), F::one());
        antipode.insert((g, group.inverse(g)), F::one());
    }
    let mut unit = vec![F::zero(); n];
    unit[group.identity()] = F::one();
    StructureConstants {
        dim: n,
        m,
        mu,
        unit: Some(unit),
        counit: Some(vec![F::one(); n]),
        antipode: Some(antipode.clone()),
        antipode_inv: Some(antipode),
    }
}
