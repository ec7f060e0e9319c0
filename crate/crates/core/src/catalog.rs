//! Built-in Hopf algebras: `trivial`, `zn:<n>` for `1 ≤ n ≤ 12`, `s3`.

use crate::bialgebra::{group_algebra, FiniteGroup, StructureConstants};
use crate::error::{Error, Result};
use crate::scalar::Field;

pub const MAX_CYCLIC: usize = 12;

pub fn example_group(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownExample(name.to_string());
    match name {
        "trivial" => Ok(FiniteGroup::cyclic(1)),
        "s3" => Ok(FiniteGroup::symmetric3()),
        _ => {
            let n: usize = name.strip_prefix("zn:").ok_or_else(unknown)?.parse().map_err(|_| unknown())?;
            if (1..=MAX_CYCLIC).contains(&n) {
                Ok(FiniteGroup::cyclic(n))
            } else {
                Err(unknown())
            }
        }
    }
}

pub fn example<F: Field>(name: &str) -> Result<StructureConstants<F>> {
    example_group(name).map(|g| group_algebra(&g))
}

/// Every catalog name, smallest first.
pub fn example_names() -> Vec<String> {
    let mut names = vec!["trivial".to_string()];
    names.extend((1..=MAX_CYCLIC).map(|n| format!("zn:{n}")));
    names.push("s3".into());
    names
}
