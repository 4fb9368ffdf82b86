//! Left, right and two-sided filtrations over noncommutative algebras.

use super::{check_order, Definition, Filtration, Side};
use crate::error::{Error, Result};
use crate::hom::{ActionKind, HomSpace};
use crate::linalg::{Matrix, Subspace};

fn side_data(hom: &HomSpace, side: Side) -> Result<(Vec<Matrix>, [ActionKind; 2])> {
    Ok(match side {
        Side::Left => (hom.delta_ops()?, [ActionKind::Left, ActionKind::LeftBullet]),
        Side::Right => (hom.bar_delta_ops()?, [ActionKind::Right, ActionKind::RightBullet]),
    })
}

fn side_definition(side: Side) -> Definition {
    match side {
        Side::Left => Definition::LuntsLeft,
        Side::Right => Definition::LuntsRight,
    }
}

/// `span{bΦ : Φ ∈ s}` (left) or `span{Φb : Φ ∈ s}` (right), over basis `b`.
fn multiples(hom: &HomSpace, kind: ActionKind, s: &Subspace) -> Result<Subspace> {
    let ops = hom.operators(kind)?;
    Ok(Subspace::span(
        hom.field(),
        hom.dim(),
        ops.iter().flat_map(|op| s.basis().iter().map(move |v| op.mul_vec(v))),
    ))
}

/// `I_0 ⊆ … ⊆ I_r`: `I_0` is the submodule generated by the δ-kernel and
/// `I_r` the submodule generated by `{Φ : δ_a Φ ∈ I_{r-1}}`.
///
/// The right side uses `δ̄` and the right structures.
pub fn lunts_filtration(hom: &HomSpace, r: usize, side: Side) -> Result<Filtration> {
    check_order(r)?;
    let (deltas, kinds) = side_data(hom, side)?;
    let gens = hom.generators(&kinds)?;
    let mut terms = vec![hom.common_kernel(&deltas).closure(&gens)];
    for _ in 0..r {
        let z = hom.preimage(&deltas, terms.last().expect("nonempty"));
        terms.push(z.closure(&gens));
    }
    Ok(Filtration {
        definition: side_definition(side),
        terms,
        naive: false,
    })
}

/// The same chain built from finite sums `Σ b_i Φ^i + Δ_{r-1}` with every
/// `δ_a Φ^i` of order `r-1` (resp. `Σ Φ^i b_i + Δ_{r-1}` on the right).
pub fn lunts_sum_form(hom: &HomSpace, r: usize, side: Side) -> Result<Filtration> {
    check_order(r)?;
    let (deltas, [mult, _]) = side_data(hom, side)?;
    let mut terms = vec![multiples(hom, mult, &hom.common_kernel(&deltas))?];
    for _ in 0..r {
        let prev = terms.last().expect("nonempty");
        let next = multiples(hom, mult, &hom.preimage(&deltas, prev))?.sum(prev)?;
        terms.push(next);
    }
    Ok(Filtration {
        definition: side_definition(side),
        terms,
        naive: false,
    })
}

/// The two readings of the two-sided order 0: left and right zero-order
/// operators and their span.
#[derive(Clone, Debug)]
pub struct TwoSidedBase {
    pub left: Subspace,
    pub right: Subspace,
    pub span: Subspace,
    /// The union is already a subspace, so both readings agree.
    pub union_is_subspace: bool,
}

pub fn two_sided_base(hom: &HomSpace) -> Result<TwoSidedBase> {
    let left = multiples(hom, ActionKind::Left, &hom.left_linear()?)?;
    let right = multiples(hom, ActionKind::Right, &hom.right_linear()?)?;
    let span = left.sum(&right)?;
    let union_is_subspace = left.is_subset(&right)? || right.is_subset(&left)?;
    Ok(TwoSidedBase {
        left,
        right,
        span,
        union_is_subspace,
    })
}

/// `TS_0 = span(left zero order ∪ right zero order)` and
/// `TS_r = L_r ∩ R_r`, where `L_r = span{bΦ : δ_aΦ ∈ TS_{r-1}} + TS_{r-1}` and
/// `R_r = span{Φb : δ̄_aΦ ∈ TS_{r-1}} + TS_{r-1}`.
pub fn two_sided_filtration(hom: &HomSpace, r: usize) -> Result<Filtration> {
    check_order(r)?;
    let deltas = hom.delta_ops()?;
    let bars = hom.bar_delta_ops()?;
    let mut terms = vec![two_sided_base(hom)?.span];
    for _ in 0..r {
        let prev = terms.last().expect("nonempty");
        let l = multiples(hom, ActionKind::Left, &hom.preimage(&deltas, prev))?.sum(prev)?;
        let rr = multiples(hom, ActionKind::Right, &hom.preimage(&bars, prev))?.sum(prev)?;
        terms.push(l.intersect(&rr)?);
    }
    Ok(Filtration {
        definition: Definition::TwoSided,
        terms,
        naive: false,
    })
}

/// Whether `Δ₁∘Δ₂` lies in the left order-`n+m` operators, given
/// `Δ₁ ∈ I_n` and `Δ₂ ∈ I_m` of `End_K(P)`.
pub fn composition_order_check(hom: &HomSpace, d1: &Matrix, n: usize, d2: &Matrix, m: usize) -> Result<bool> {
    if hom.source().dim() != hom.target().dim() {
        return Err(Error::DimensionMismatch("composition needs an endomorphism space".into()));
    }
    let f = lunts_filtration(hom, n.max(m).max(n + m), Side::Left)?;
    if !f.term(n).contains(&hom.flatten(d1)?) {
        return Err(Error::NotADifferentialOperator(format!("first operator is not of left order {n}")));
    }
    if !f.term(m).contains(&hom.flatten(d2)?) {
        return Err(Error::NotADifferentialOperator(format!("second operator is not of left order {m}")));
    }
    let comp = HomSpace::compose(d1, d2)?;
    Ok(f.term(n + m).contains(&hom.flatten(&comp)?))
}
