//! Pairwise comparison of every applicable definition at one order.

use serde::{Deserialize, Serialize};

use super::{
    dv_first_order, graded_chain, grothendieck_chain, lunts_filtration, two_sided_base, two_sided_filtration,
    Definition, DiffSpace, Side,
};
use crate::error::{Error, Result};
use crate::hom::HomSpace;
use crate::linalg::vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// The first space is strictly inside the second.
    Subset,
    /// The first space strictly contains the second.
    Superset,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionSummary {
    pub definition: Definition,
    pub dim: usize,
    pub naive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRelation {
    pub first: Definition,
    pub second: Definition,
    pub relation: Relation,
    /// A map in the first space but not the second, flattened row-major.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only_first: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only_second: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub algebra: String,
    pub source: String,
    pub target: String,
    pub order: usize,
    pub commutative: bool,
    pub definitions: Vec<DefinitionSummary>,
    pub relations: Vec<PairRelation>,
    /// Definitions that could not be built, with the reason.
    pub skipped: Vec<(Definition, String)>,
    /// Whether the union of left and right zero-order operators is already a
    /// subspace, when the two-sided definition applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_sided_union_is_subspace: Option<bool>,
}

impl ComparisonReport {
    pub fn all_equal(&self) -> bool {
        self.relations.iter().all(|r| r.relation == Relation::Equal)
    }

    pub fn relation(&self, a: Definition, b: Definition) -> Option<&PairRelation> {
        self.relations.iter().find(|r| r.first == a && r.second == b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn relate(a: &DiffSpace, b: &DiffSpace) -> Result<PairRelation> {
    let only_first = a.subspace.witness_outside(&b.subspace);
    let only_second = b.subspace.witness_outside(&a.subspace);
    let relation = match (&only_first, &only_second) {
        (None, None) => Relation::Equal,
        (None, Some(_)) => Relation::Subset,
        (Some(_), None) => Relation::Superset,
        (Some(_), Some(_)) => Relation::Incomparable,
    };
    Ok(PairRelation {
        first: a.definition,
        second: b.definition,
        relation,
        only_first: only_first.map(|v| vector::to_strings(&v)),
        only_second: only_second.map(|v| vector::to_strings(&v)),
    })
}

fn skip_reason(e: Error) -> Result<String> {
    match e {
        Error::MissingSide(_) | Error::MissingGrading(_) | Error::CharacteristicTwo | Error::NotHomogeneous => {
            Ok(e.to_string())
        }
        other => Err(other),
    }
}

/// Builds every definition that applies to `Hom(P, Q)` at order `k` and
/// relates each pair; the first-order two-sided condition only enters at `k = 1`.
pub fn compare_definitions(hom: &HomSpace, k: usize) -> Result<ComparisonReport> {
    let mut spaces = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |def: Definition, built: Result<DiffSpace>| -> Result<()> {
        match built {
            Ok(s) => spaces.push(s),
            Err(e) => skipped.push((def, skip_reason(e)?)),
        }
        Ok(())
    };
    push(Definition::Grothendieck, grothendieck_chain(hom, k).map(|f| f.space(hom, k)))?;
    let graded = hom.source().parity().is_some() && hom.target().parity().is_some();
    if graded {
        push(Definition::Graded, graded_chain(hom, k).map(|f| f.space(hom, k)))?;
    }
    if k == 1 {
        push(Definition::DvFirstOrder, dv_first_order(hom))?;
    }
    push(Definition::LuntsLeft, lunts_filtration(hom, k, Side::Left).map(|f| f.space(hom, k)))?;
    push(Definition::LuntsRight, lunts_filtration(hom, k, Side::Right).map(|f| f.space(hom, k)))?;
    push(Definition::TwoSided, two_sided_filtration(hom, k).map(|f| f.space(hom, k)))?;

    let mut relations = Vec::new();
    for (i, a) in spaces.iter().enumerate() {
        for b in &spaces[i + 1..] {
            relations.push(relate(a, b)?);
        }
    }
    let two_sided_union_is_subspace = two_sided_base(hom).ok().map(|b| b.union_is_subspace);
    Ok(ComparisonReport {
        algebra: hom.source().algebra().name().to_string(),
        source: hom.source().name().to_string(),
        target: hom.target().name().to_string(),
        order: k,
        commutative: hom.source().algebra().is_commutative(),
        definitions: spaces
            .iter()
            .map(|s| DefinitionSummary {
                definition: s.definition,
                dim: s.dim(),
                naive: s.naive,
            })
            .collect(),
        relations,
        skipped,
        two_sided_union_is_subspace,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::catalog;
    use crate::module::Bimodule;
    use crate::Field;

    fn end(name: &str) -> HomSpace {
        let a = Arc::new(catalog(name, Field::Rational).unwrap());
        HomSpace::endomorphisms(&Bimodule::regular(&a)).unwrap()
    }

    #[test]
    fn commutative_definitions_coincide() {
        for name in ["trunc_poly(3)", "xy_sq", "group_algebra(2)"] {
            let r = compare_definitions(&end(name), 1).unwrap();
            assert!(r.all_equal(), "{name}: {r:?}");
            assert_eq!(r.definitions.len(), 5);
        }
    }

    #[test]
    fn matrices_first_order() {
        let r = compare_definitions(&end("matrix(2)"), 1).unwrap();
        assert!(!r.all_equal());
        let g = r.relation(Definition::Grothendieck, Definition::DvFirstOrder).unwrap();
        assert_ne!(g.relation, Relation::Equal);
        // on the regular module every two-sided first-order operator is left first order
        let dv = r.relation(Definition::DvFirstOrder, Definition::LuntsLeft).unwrap();
        assert!(matches!(dv.relation, Relation::Subset | Relation::Equal));
        let json = r.to_json();
        assert_eq!(serde_json::from_str::<ComparisonReport>(&json).unwrap(), r);
    }

    #[test]
    fn one_sided_modules_skip_definitions() {
        let a = Arc::new(catalog("trunc_poly(2)", Field::Rational).unwrap());
        let p = Bimodule::left_regular(&a);
        let h = HomSpace::endomorphisms(&p).unwrap();
        let r = compare_definitions(&h, 1).unwrap();
        assert!(r.skipped.iter().any(|(d, _)| *d == Definition::LuntsRight));
        assert!(r.definitions.iter().any(|d| d.definition == Definition::LuntsLeft));
    }
}
