//! Verification reports shared by every relation and axiom check.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::scalar::Field;
use crate::tensor::SparseVec;

/// Identity being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationId {
    Pentagon,
    ReversedPentagon,
    /// One of the six mixed pentagons, numbered 1..=6 in reading order
    /// (row by row, left before right).
    MixedPentagon(u8),
    YangBaxter,
    MixedPermutation,
    FGRelations,
    DrinfeldRelations,
    HeisenbergRelations,
    TildeRelations,
    Associativity,
    Coassociativity,
    Compatibility,
    UnitLaws,
    CounitLaws,
    AntipodeInverse,
    PairingReproduction,
    DualPairing,
    Closure,
    RebuiltPentagon,
    UnitSearch,
    /// Two constructions of the same operator agree.
    Agreement(&'static str),
    DilogIdentity,
    CenterCheck,
    WeylPentagon,
}

impl RelationId {
    pub fn name(&self) -> String {
        match self {
            RelationId::Pentagon => "pentagon".into(),
            RelationId::ReversedPentagon => "reversed_pentagon".into(),
            RelationId::MixedPentagon(i) => format!("mixed_pentagon_{i}"),
            RelationId::YangBaxter => "yang_baxter".into(),
            RelationId::MixedPermutation => "mixed_permutation".into(),
            RelationId::FGRelations => "fg_relations".into(),
            RelationId::DrinfeldRelations => "drinfeld_relations".into(),
            RelationId::HeisenbergRelations => "heisenberg_relations".into(),
            RelationId::TildeRelations => "tilde_relations".into(),
            RelationId::Associativity => "associativity".into(),
            RelationId::Coassociativity => "coassociativity".into(),
            RelationId::Compatibility => "compatibility".into(),
            RelationId::UnitLaws => "unit_laws".into(),
            RelationId::CounitLaws => "counit_laws".into(),
            RelationId::AntipodeInverse => "antipode_inverse".into(),
            RelationId::PairingReproduction => "pairing_reproduction".into(),
            RelationId::DualPairing => "dual_pairing".into(),
            RelationId::Closure => "closure".into(),
            RelationId::RebuiltPentagon => "rebuilt_pentagon".into(),
            RelationId::UnitSearch => "unit_search".into(),
            RelationId::Agreement(what) => format!("agreement:{what}"),
            RelationId::DilogIdentity => "dilog_identity".into(),
            RelationId::CenterCheck => "center_check".into(),
            RelationId::WeylPentagon => "weyl_pentagon".into(),
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Where a relation fails: the input basis element and both sides' coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub basis: Vec<usize>,
    pub lhs: Vec<(String, String)>,
    pub rhs: Vec<(String, String)>,
}

impl Witness {
    /// Witness from two sparse output vectors over a multi-leg space.
    pub fn from_vectors<F: Field>(
        basis: Vec<usize>,
        dims: &[usize],
        lhs: &SparseVec<F>,
        rhs: &SparseVec<F>,
    ) -> Self {
        let render = |v: &SparseVec<F>| {
            v.iter()
                .map(|(&i, x)| (index_label(&crate::tensor::unflatten(i, dims)), x.to_string()))
                .collect()
        };
        Witness {
            basis,
            lhs: render(lhs),
            rhs: render(rhs),
        }
    }

    /// Witness for a scalar identity at one index tuple.
    pub fn scalar(basis: Vec<usize>, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        let label = index_label(&basis);
        Witness {
            basis,
            lhs: vec![(label.clone(), lhs.to_string())],
            rhs: vec![(label, rhs.to_string())],
        }
    }
}

pub fn index_label(idx: &[usize]) -> String {
    idx.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub relation: RelationId,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub space_dim: usize,
    pub elapsed: Duration,
    /// Free-form context, e.g. which sub-identity failed.
    pub detail: Option<String>,
}

impl VerificationReport {
    /// Runs `check`, which returns the first witness of failure if any.
    pub fn timed(relation: RelationId, space_dim: usize, check: impl FnOnce() -> Option<Witness>) -> Self {
        let start = Instant::now();
        let witness = check();
        VerificationReport {
            relation,
            holds: witness.is_none(),
            witness,
            space_dim,
            elapsed: start.elapsed(),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// A failure that has no natural basis witness (e.g. a construction error).
    pub fn failure(relation: RelationId, space_dim: usize, detail: impl Into<String>) -> Self {
        VerificationReport {
            relation,
            holds: false,
            witness: Some(Witness {
                basis: Vec::new(),
                lhs: Vec::new(),
                rhs: Vec::new(),
            }),
            space_dim,
            elapsed: Duration::ZERO,
            detail: Some(detail.into()),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "relation": self.relation.name(),
            "holds": self.holds,
            "space_dim": self.space_dim,
            "elapsed_ms": self.elapsed.as_secs_f64() * 1000.0,
        });
        if let Some(w) = &self.witness {
            v["witness"] = json!({ "basis": w.basis, "lhs": w.lhs, "rhs": w.rhs });
        }
        if let Some(d) = &self.detail {
            v["detail"] = json!(d);
        }
        v
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {}  (dim {}, {:.1} ms)",
            self.relation.name(),
            if self.holds { "holds" } else { "FAILS" },
            self.space_dim,
            self.elapsed.as_secs_f64() * 1000.0
        )?;
        if let Some(d) = &self.detail {
            write!(f, "  [{d}]")?;
        }
        if let Some(w) = &self.witness {
            let side = |s: &[(String, String)]| {
                s.iter()
                    .map(|(i, v)| format!("({i}):{v}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            write!(
                f,
                "\n    witness basis [{}]\n    lhs {}\n    rhs {}",
                index_label(&w.basis),
                side(&w.lhs),
                side(&w.rhs)
            )?;
        }
        Ok(())
    }
}

/// True when every report holds.
pub fn all_hold(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.holds)
}
