//! Differential operators as subspaces of `Hom_K(P, Q)`.
//!
//! Every definition is phrased through the δ-operators of [`HomSpace`]; orders
//! are built bottom-up as preimages and action closures, so the quotients
//! `Hom/I_{r-1}` are never formed explicitly.

mod compare;
mod filtration;

use serde::{Deserialize, Serialize};

pub use compare::{compare_definitions, ComparisonReport, DefinitionSummary, PairRelation, Relation};
pub use filtration::{
    composition_order_check, lunts_filtration, lunts_sum_form, two_sided_base, two_sided_filtration, TwoSidedBase,
};

use crate::error::{Error, Result};
use crate::hom::{HomSpace, LinMap};
use crate::linalg::{Matrix, Subspace};

/// Highest order any filtration is built to.
pub const MAX_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definition {
    Grothendieck,
    Graded,
    DvFirstOrder,
    LuntsLeft,
    LuntsRight,
    TwoSided,
}

impl Definition {
    pub fn slug(self) -> &'static str {
        match self {
            Definition::Grothendieck => "grothendieck",
            Definition::Graded => "graded",
            Definition::DvFirstOrder => "dv_first_order",
            Definition::LuntsLeft => "lunts_left",
            Definition::LuntsRight => "lunts_right",
            Definition::TwoSided => "two_sided",
        }
    }
}

impl std::fmt::Display for Definition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Side> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Parse(format!("side must be `left` or `right`, got `{s}`"))),
        }
    }
}

/// One definition at one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSpace {
    pub definition: Definition,
    pub order: usize,
    pub subspace: Subspace,
    /// Set when the definition is applied outside the setting it was made for
    /// (e.g. the commutative condition over a noncommutative algebra).
    pub naive: bool,
    pub algebra: String,
    pub source: String,
    pub target: String,
}

impl DiffSpace {
    fn new(hom: &HomSpace, definition: Definition, order: usize, subspace: Subspace, naive: bool) -> DiffSpace {
        DiffSpace {
            definition,
            order,
            subspace,
            naive,
            algebra: hom.source().algebra().name().to_string(),
            source: hom.source().name().to_string(),
            target: hom.target().name().to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn contains(&self, hom: &HomSpace, phi: &Matrix) -> Result<bool> {
        Ok(self.subspace.contains(&hom.flatten(phi)?))
    }
}

/// `I_0 ⊆ I_1 ⊆ … ⊆ I_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub definition: Definition,
    pub terms: Vec<Subspace>,
    pub naive: bool,
}

impl Filtration {
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, r: usize) -> &Subspace {
        &self.terms[r]
    }

    pub fn top(&self) -> &Subspace {
        self.terms.last().expect("filtration has an order-0 term")
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].is_subset(&w[1]).unwrap_or(false))
    }

    /// Least `r` with `phi ∈ I_r`.
    pub fn order_of(&self, v: &[crate::Scalar]) -> Option<usize> {
        self.terms.iter().position(|t| t.contains(v))
    }

    pub fn space(&self, hom: &HomSpace, r: usize) -> DiffSpace {
        DiffSpace::new(hom, self.definition, r, self.terms[r].clone(), self.naive)
    }
}

pub(crate) fn check_order(k: usize) -> Result<()> {
    if k > MAX_ORDER {
        return Err(Error::CapExceeded { degree: k, cap: MAX_ORDER });
    }
    Ok(())
}

fn kernel_chain(hom: &HomSpace, ops: &[Matrix], k: usize) -> Vec<Subspace> {
    let mut terms = vec![hom.common_kernel(ops)];
    for _ in 0..k {
        let next = hom.preimage(ops, terms.last().expect("nonempty"));
        terms.push(next);
    }
    terms
}

/// `D_0 ⊆ … ⊆ D_k` with `D_j = {Δ : δ_{a_0}∘⋯∘δ_{a_j} Δ = 0}`.
///
/// Over a noncommutative algebra the same linear conditions are solved and the
/// result is marked naive.
pub fn grothendieck_chain(hom: &HomSpace, k: usize) -> Result<Filtration> {
    check_order(k)?;
    let ops = hom.delta_ops()?;
    Ok(Filtration {
        definition: Definition::Grothendieck,
        terms: kernel_chain(hom, &ops, k),
        naive: !hom.source().algebra().is_commutative(),
    })
}

pub fn grothendieck_diff(hom: &HomSpace, k: usize) -> Result<DiffSpace> {
    Ok(grothendieck_chain(hom, k)?.space(hom, k))
}

/// Even and odd parts of the graded order-`k` operators.
pub fn graded_parts(hom: &HomSpace, k: usize) -> Result<(Subspace, Subspace)> {
    let chain = graded_chain(hom, k)?;
    let top = chain.top();
    Ok((top.intersect(&hom.parity_subspace(0)?)?, top.intersect(&hom.parity_subspace(1)?)?))
}

/// Graded orders `0..=k`, each the direct sum of its even and odd parts.
pub fn graded_chain(hom: &HomSpace, k: usize) -> Result<Filtration> {
    check_order(k)?;
    let alg = hom.source().algebra();
    alg.require_parity("graded differential operators")?;
    let naive = !alg.is_graded_commutative()?;
    let ops = hom.graded_delta_ops()?;
    let even = hom.parity_subspace(0)?;
    let odd = hom.parity_subspace(1)?;
    let mut terms = Vec::with_capacity(k + 1);
    for t in kernel_chain(hom, &ops, k) {
        let parts = t.intersect(&even)?.sum(&t.intersect(&odd)?)?;
        if parts != t {
            return Err(Error::Invariant("graded operator space is not spanned by homogeneous operators".into()));
        }
        terms.push(parts);
    }
    Ok(Filtration {
        definition: Definition::Graded,
        terms,
        naive,
    })
}

pub fn graded_diff(hom: &HomSpace, k: usize) -> Result<DiffSpace> {
    Ok(graded_chain(hom, k)?.space(hom, k))
}

/// `{Δ : δ_a δ̄_b Δ = 0 for all a, b}`, i.e. every `δ̄_b Δ` is left linear.
pub fn dv_first_order(hom: &HomSpace) -> Result<DiffSpace> {
    let left_linear = hom.left_linear()?;
    let sub = hom.preimage(&hom.bar_delta_ops()?, &left_linear);
    Ok(DiffSpace::new(hom, Definition::DvFirstOrder, 1, sub, false))
}

/// The two derivations attached to a first-order operator.
///
/// `forward[a]` is `p ↦ Δ(e_a p) − e_a Δ(p)` and `backward[b]` is
/// `p ↦ Δ(p e_b) − Δ(p) e_b`.
#[derive(Clone, Debug)]
pub struct DvSplit {
    pub forward: Vec<Matrix>,
    pub backward: Vec<Matrix>,
    /// Each `forward[a]` is right linear.
    pub forward_right_linear: bool,
    /// Each `backward[b]` is left linear.
    pub backward_left_linear: bool,
    /// `∂→(ab) = (∂→a)∙b + a(∂→b)` on basis pairs.
    pub forward_leibniz: bool,
    /// `∂←(ab) = a∙(∂←b) + (∂←a)b` on basis pairs.
    pub backward_leibniz: bool,
    /// `Δ(apb) = (∂→a)(p)b + aΔ(p)b + a(∂←b)(p)` for all basis `a, b, p`.
    pub reconstructs: bool,
}

impl DvSplit {
    pub fn holds(&self) -> bool {
        self.forward_right_linear && self.backward_left_linear && self.forward_leibniz && self.backward_leibniz && self.reconstructs
    }
}

pub fn dv_split(hom: &HomSpace, delta: &LinMap) -> Result<DvSplit> {
    let d = &delta.matrix;
    let v = hom.flatten(d)?;
    if !dv_first_order(hom)?.subspace.contains(&v) {
        return Err(Error::NotADifferentialOperator("map is not first order in the two-sided sense".into()));
    }
    let p = hom.source();
    let q = hom.target();
    let alg = p.algebra();
    let n = alg.dim();
    let (lp, rp) = (p.left_mats()?, p.right_mats()?);
    let (lq, rq) = (q.left_mats()?, q.right_mats()?);
    let forward: Vec<Matrix> = (0..n).map(|a| &(d * &lp[a]) - &(&lq[a] * d)).collect();
    let backward: Vec<Matrix> = (0..n).map(|b| &(d * &rp[b]) - &(&rq[b] * d)).collect();

    let flat = |m: &Matrix| hom.flatten(m).expect("hom shape");
    let right_linear = hom.right_linear()?;
    let left_linear = hom.left_linear()?;
    let forward_right_linear = forward.iter().all(|m| right_linear.contains(&flat(m)));
    let backward_left_linear = backward.iter().all(|m| left_linear.contains(&flat(m)));

    let combine = |parts: &[Matrix], coeffs: &[crate::Scalar]| {
        let mut out = Matrix::zeros(hom.field(), q.dim(), p.dim());
        for (c, m) in coeffs.iter().zip(parts) {
            if !c.is_zero() {
                out = &out + &m.scale(c);
            }
        }
        out
    };
    let mut forward_leibniz = true;
    let mut backward_leibniz = true;
    let mut reconstructs = true;
    for a in 0..n {
        for b in 0..n {
            let ab = alg.product_of_basis(a, b);
            let lhs = combine(&forward, ab);
            let rhs = &(&forward[a] * &lp[b]) + &(&lq[a] * &forward[b]);
            forward_leibniz &= lhs == rhs;
            let lhs = combine(&backward, ab);
            let rhs = &(&backward[b] * &rp[a]) + &(&rq[b] * &backward[a]);
            backward_leibniz &= lhs == rhs;
            let apb = &(d * &lp[a]) * &rp[b];
            let rebuilt = &(&(&rq[b] * &forward[a]) + &(&(&lq[a] * &rq[b]) * d)) + &(&lq[a] * &backward[b]);
            reconstructs &= apb == rebuilt;
        }
    }
    Ok(DvSplit {
        forward,
        backward,
        forward_right_linear,
        backward_left_linear,
        forward_leibniz,
        backward_leibniz,
        reconstructs,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::catalog;
    use crate::module::Bimodule;
    use crate::{Field, FiniteAlgebra};

    fn end(name: &str) -> (Arc<FiniteAlgebra>, HomSpace) {
        let a = Arc::new(catalog(name, Field::Rational).unwrap());
        let h = HomSpace::endomorphisms(&Bimodule::regular(&a)).unwrap();
        (a, h)
    }

    #[test]
    fn truncated_polynomial_orders() {
        let (_, h) = end("trunc_poly(3)");
        let c = grothendieck_chain(&h, 2).unwrap();
        // ad(x) on 3x3 matrices has Jordan blocks of sizes 5, 3, 1
        assert_eq!(c.dims(), vec![3, 5, 7]);
        assert!(c.is_monotone());
        assert!(!c.naive);
    }

    #[test]
    fn order_zero_is_left_linear() {
        for name in ["trunc_poly(3)", "matrix(2)", "upper_triangular(2)"] {
            let (_, h) = end(name);
            assert_eq!(grothendieck_diff(&h, 0).unwrap().subspace, h.left_linear().unwrap());
        }
    }

    #[test]
    fn inner_derivation_of_matrices_is_not_naively_first_order() {
        let (a, h) = end("matrix(2)");
        let e12 = a.basis_element(1);
        let u = &a.left_mult(&e12) - &a.right_mult(&e12);
        let d1 = grothendieck_diff(&h, 1).unwrap();
        assert!(d1.naive);
        assert!(!d1.contains(&h, &u).unwrap());
    }

    #[test]
    fn dv_on_matrices() {
        let (a, h) = end("matrix(2)");
        let dv = dv_first_order(&h).unwrap();
        assert_eq!(dv.dim(), 7);
        assert!(h.bimodule_morphisms().unwrap().is_subset(&dv.subspace).unwrap());
        let e12 = a.basis_element(1);
        let ad = &a.left_mult(&e12) - &a.right_mult(&e12);
        let split = dv_split(&h, &LinMap::new(ad)).unwrap();
        assert!(split.holds());
        let left_mult = a.right_mult(&e12);
        let split = dv_split(&h, &LinMap::new(left_mult)).unwrap();
        assert!(split.holds());
        assert!(split.forward.iter().all(Matrix::is_zero));
    }

    #[test]
    fn dv_rejects_second_order() {
        let (a, h) = end("matrix(2)");
        let e12 = a.basis_element(1);
        let ad = &a.left_mult(&e12) - &a.right_mult(&e12);
        assert!(dv_split(&h, &LinMap::new(&ad * &ad)).is_err());
    }

    #[test]
    fn dv_equals_grothendieck_when_commutative() {
        for name in ["trunc_poly(3)", "xy_sq", "group_algebra(3)"] {
            let (_, h) = end(name);
            assert_eq!(dv_first_order(&h).unwrap().subspace, grothendieck_diff(&h, 1).unwrap().subspace);
        }
    }

    #[test]
    fn graded_first_order_on_one_generator() {
        let (a, h) = end("grassmann(1)");
        let c = graded_chain(&h, 1).unwrap();
        assert!(!c.naive);
        // zero order: multiplications by A; first order adds ∂/∂θ and θ∂/∂θ
        assert_eq!(c.dims(), vec![2, 4]);
        let mut dtheta = Matrix::zeros(a.field(), 2, 2);
        dtheta.set(0, 1, a.field().one());
        assert_eq!(h.map_parity(&dtheta).unwrap(), 1);
        assert!(c.top().contains(&h.flatten(&dtheta).unwrap()));
        assert!(!c.term(0).contains(&h.flatten(&dtheta).unwrap()));
    }

    #[test]
    fn partial_derivative_on_two_generators() {
        let (a, h) = end("grassmann(2)");
        let n = a.dim();
        // basis in mask order: 1, θ1, θ2, θ1θ2
        let mut d1 = Matrix::zeros(a.field(), n, n);
        d1.set(0, 1, a.field().one());
        d1.set(2, 3, a.field().one());
        let (even, odd) = graded_parts(&h, 1).unwrap();
        let v = h.flatten(&d1).unwrap();
        assert!(odd.contains(&v));
        assert!(!even.contains(&v));
        assert!(!graded_chain(&h, 1).unwrap().term(0).contains(&v));
    }

    #[test]
    fn order_cap() {
        let (_, h) = end("trunc_poly(2)");
        assert!(matches!(grothendieck_chain(&h, MAX_ORDER + 1), Err(Error::CapExceeded { .. })));
    }
}
