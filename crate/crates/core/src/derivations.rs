//! Derivations `u(ab) = u(a)b + a u(b)` of an algebra into a bimodule, their
//! brackets, and the split of first-order operators on `A`.

use serde::{Deserialize, Serialize};

use crate::diffops::{dv_first_order, graded_diff, grothendieck_diff};
use crate::error::{Error, Result};
use crate::hom::HomSpace;
use crate::linalg::{vector, Echelon, Matrix, Subspace};
use crate::module::Bimodule;
use crate::scalar::{sign, Scalar};

/// Derivations `A → Q` as a subspace of `Hom_K(A, Q)`.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub hom: HomSpace,
    pub subspace: Subspace,
    pub graded: bool,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn basis_maps(&self) -> Vec<Matrix> {
        self.subspace.basis().iter().map(|v| self.hom.unflatten(v)).collect()
    }

    pub fn contains(&self, u: &Matrix) -> Result<bool> {
        Ok(self.subspace.contains(&self.hom.flatten(u)?))
    }

    pub fn coords(&self, u: &Matrix) -> Result<Option<Vec<Scalar>>> {
        Ok(self.subspace.coords(&self.hom.flatten(u)?))
    }

    pub fn from_coords(&self, c: &[Scalar]) -> Matrix {
        self.hom.unflatten(&self.subspace.from_coords(c))
    }

    /// Parity of each basis map; the graded basis is homogeneous.
    pub fn basis_parities(&self) -> Result<Vec<u8>> {
        self.basis_maps().iter().map(|m| self.hom.map_parity(m)).collect()
    }

    fn require(&self, u: &Matrix) -> Result<()> {
        if self.contains(u)? {
            Ok(())
        } else {
            Err(Error::NotADerivation("map violates the Leibniz rule".into()))
        }
    }
}

/// Rows of the Leibniz system `u(e_i e_j) − u(e_i)e_j − s_{ij} e_i u(e_j) = 0`,
/// where `s_{ij}` is `(−1)^{[e_i]·phi}` in the graded case and 1 otherwise.
fn leibniz_rows(q: &Bimodule, graded_parity: Option<u8>) -> Result<Vec<Vec<Scalar>>> {
    let a = q.algebra();
    let f = a.field();
    let n = a.dim();
    let d = q.dim();
    let (lq, rq) = (q.left_mats()?, q.right_mats()?);
    let par = match graded_parity {
        Some(_) => Some(a.require_parity("graded derivations")?),
        None => None,
    };
    let mut rows = Vec::with_capacity(n * n * d);
    for i in 0..n {
        for j in 0..n {
            let s = match (par, graded_parity) {
                (Some(p), Some(phi)) => sign(f, (p[i] * phi) as usize),
                _ => f.one(),
            };
            let ij = a.product_of_basis(i, j);
            for out in 0..d {
                let mut row = vector::zeros(f, d * n);
                for (k, c) in ij.iter().enumerate() {
                    if !c.is_zero() {
                        row[out * n + k] += c;
                    }
                }
                for qq in 0..d {
                    let r = rq[j].get(out, qq);
                    if !r.is_zero() {
                        row[qq * n + i] -= r;
                    }
                    let l = lq[i].get(out, qq);
                    if !l.is_zero() {
                        row[qq * n + j] -= &(&s * l);
                    }
                }
                if !vector::is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

fn kernel_of(field: crate::Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Subspace {
    let mut e = Echelon::new(field, cols);
    for r in rows {
        e.insert(r);
    }
    e.kernel()
}

/// `𝔡(A, Q)`; with `graded`, the span of homogeneous graded derivations.
pub fn derivations(q: &Bimodule, graded: bool) -> Result<DerivationSpace> {
    let a = q.algebra();
    let hom = HomSpace::new(&Bimodule::regular(a), q)?;
    let f = a.field();
    let cols = hom.dim();
    let subspace = if graded {
        a.require_parity("graded derivations")?;
        let mut total = hom.zero();
        for phi in 0..2u8 {
            let sol = kernel_of(f, cols, leibniz_rows(q, Some(phi))?);
            total = total.sum(&sol.intersect(&hom.parity_subspace(phi)?)?)?;
        }
        total
    } else {
        kernel_of(f, cols, leibniz_rows(q, None)?)
    };
    Ok(DerivationSpace { hom, subspace, graded })
}

/// `𝔡A`, derivations of `A` into itself.
pub fn algebra_derivations(a: &std::sync::Arc<crate::FiniteAlgebra>, graded: bool) -> Result<DerivationSpace> {
    derivations(&Bimodule::regular(a), graded)
}

/// `u∘v − v∘u`, checked to be a derivation again.
pub fn lie_bracket(space: &DerivationSpace, u: &Matrix, v: &Matrix) -> Result<Matrix> {
    space.require(u)?;
    space.require(v)?;
    let b = &(u * v) - &(v * u);
    if !space.contains(&b)? {
        return Err(Error::Invariant("bracket left the derivation space".into()));
    }
    Ok(b)
}

/// `u∘v − (−1)^{[u][v]} v∘u` for homogeneous graded derivations.
pub fn super_bracket(space: &DerivationSpace, u: &Matrix, v: &Matrix) -> Result<Matrix> {
    space.require(u)?;
    space.require(v)?;
    let pu = space.hom.map_parity(u)?;
    let pv = space.hom.map_parity(v)?;
    let s = sign(space.hom.field(), (pu * pv) as usize);
    let b = &(u * v) - &(v * u).scale(&s);
    if !space.contains(&b)? {
        return Err(Error::Invariant("superbracket left the derivation space".into()));
    }
    Ok(b)
}

/// Whether every derivation of `A` maps the center into itself.
pub fn derivations_preserve_center(space: &DerivationSpace) -> bool {
    let center = space.hom.source().algebra().center();
    space
        .basis_maps()
        .iter()
        .all(|u| center.basis().iter().all(|z| center.contains(&u.mul_vec(z))))
}

/// Which first-order space is split and on which side its zero-order part acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    /// Commutative `A`: `Δ(a) = aΔ(1) + [Δ(a) − aΔ(1)]`.
    Commutative,
    /// Graded commutative `A`: `Δ(a) = Δ(1)a + [Δ(a) − Δ(1)a]`.
    Graded,
    /// Two-sided first order, left zero-order part `aΔ(1)`.
    DvLeft,
    /// Two-sided first order, right zero-order part `Δ(1)a`.
    DvRight,
}

#[derive(Clone, Debug)]
pub struct FirstOrderSplit {
    pub kind: SplitKind,
    pub first_order: Subspace,
    pub zero_order: Subspace,
    pub derivations: Subspace,
    /// `zero_order ∩ derivations = 0`.
    pub direct: bool,
    /// `zero_order + derivations = first_order`.
    pub exhaustive: bool,
}

impl FirstOrderSplit {
    pub fn holds(&self) -> bool {
        self.direct && self.exhaustive
    }
}

fn zero_order_map(q: &Bimodule, value: &[Scalar], left: bool) -> Result<Matrix> {
    let a = q.algebra();
    let cols: Vec<Vec<Scalar>> = (0..a.dim())
        .map(|j| {
            let e = a.basis_element(j);
            if left {
                q.act_left(&e, value)
            } else {
                q.act_right(value, &e)
            }
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(a.field(), q.dim(), &cols))
}

fn left_side(kind: SplitKind) -> bool {
    matches!(kind, SplitKind::Commutative | SplitKind::DvLeft)
}

/// `Diff₁(A, Q) = (zero order) ⊕ 𝔡(A, Q)`, checked as an exact subspace identity.
pub fn first_order_decomposition(q: &Bimodule, kind: SplitKind) -> Result<FirstOrderSplit> {
    let a = q.algebra();
    let hom = HomSpace::new(&Bimodule::regular(a), q)?;
    let first_order = match kind {
        SplitKind::Commutative => {
            if !a.is_commutative() {
                return Err(Error::InvalidAlgebra(
                    "the commutative split needs a commutative algebra; use a two-sided split".into(),
                ));
            }
            grothendieck_diff(&hom, 1)?.subspace
        }
        SplitKind::Graded => graded_diff(&hom, 1)?.subspace,
        SplitKind::DvLeft | SplitKind::DvRight => dv_first_order(&hom)?.subspace,
    };
    let f = a.field();
    let zero_order = Subspace::span(
        f,
        hom.dim(),
        (0..q.dim())
            .map(|t| zero_order_map(q, &vector::unit(f, q.dim(), t), left_side(kind)).map(Matrix::into_data))
            .collect::<Result<Vec<_>>>()?,
    );
    let derivations = derivations(q, kind == SplitKind::Graded)?.subspace;
    let direct = zero_order.intersect(&derivations)?.is_zero();
    let exhaustive = zero_order.sum(&derivations)? == first_order;
    Ok(FirstOrderSplit {
        kind,
        first_order,
        zero_order,
        derivations,
        direct,
        exhaustive,
    })
}

/// `(zero-order part, derivation part)` of one operator `Δ: A → Q`.
pub fn split_operator(q: &Bimodule, delta: &Matrix, kind: SplitKind) -> Result<(Matrix, Matrix)> {
    let a = q.algebra();
    let value = delta.mul_vec(a.unit());
    let zero = zero_order_map(q, &value, left_side(kind))?;
    let rest = delta - &zero;
    Ok((zero, rest))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::catalog;
    use crate::{Field, FiniteAlgebra};

    fn alg(name: &str) -> Arc<FiniteAlgebra> {
        Arc::new(catalog(name, Field::Rational).unwrap())
    }

    /// Leibniz check written out entry by entry, independent of the solver.
    fn is_derivation(a: &FiniteAlgebra, u: &Matrix) -> bool {
        let n = a.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ei = a.basis_element(i);
                let ej = a.basis_element(j);
                let lhs = u.mul_vec(&a.mul(&ei, &ej));
                let rhs = vector::add(&a.mul(&u.mul_vec(&ei), &ej), &a.mul(&ei, &u.mul_vec(&ej)));
                lhs == rhs
            })
        })
    }

    #[test]
    fn truncated_polynomial_derivations() {
        let a = alg("trunc_poly(3)");
        let d = algebra_derivations(&a, false).unwrap();
        assert_eq!(d.dim(), 2);
        for u in d.basis_maps() {
            assert!(is_derivation(&a, &u));
            // u(x) has no constant term
            assert!(u.get(0, 1).is_zero());
        }
    }

    #[test]
    fn matrix_derivations_are_inner() {
        let a = alg("matrix(2)");
        let d = algebra_derivations(&a, false).unwrap();
        assert_eq!(d.dim(), 3);
        let inner = Subspace::span(
            a.field(),
            16,
            (0..4).map(|i| {
                let e = a.basis_element(i);
                (&a.left_mult(&e) - &a.right_mult(&e)).into_data()
            }),
        );
        assert_eq!(inner, d.subspace);
        assert!(derivations_preserve_center(&d));
    }

    #[test]
    fn ground_field_has_none() {
        assert_eq!(algebra_derivations(&alg("field"), false).unwrap().dim(), 0);
    }

    #[test]
    fn brackets() {
        let a = alg("trunc_poly(3)");
        let d = algebra_derivations(&a, false).unwrap();
        let f = a.field();
        // x∂ and x²∂ on the basis 1, x, x²
        let xd = Matrix::from_i64(f, &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let x2d = Matrix::from_i64(f, &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        assert!(lie_bracket(&d, &xd, &xd).unwrap().is_zero());
        assert_eq!(lie_bracket(&d, &xd, &x2d).unwrap(), x2d);
        let not = Matrix::from_i64(f, &[&[0, 1, 0], &[0, 0, 2], &[0, 0, 0]]);
        assert!(matches!(lie_bracket(&d, &not, &xd), Err(Error::NotADerivation(_))));
    }

    #[test]
    fn odd_superbracket() {
        let a = alg("grassmann(1)");
        let d = algebra_derivations(&a, true).unwrap();
        assert_eq!(d.dim(), 2);
        let f = a.field();
        let dtheta = Matrix::from_i64(f, &[&[0, 1], &[0, 0]]);
        let b = super_bracket(&d, &dtheta, &dtheta).unwrap();
        assert_eq!(b, (&dtheta * &dtheta).scale(&f.from_i64(2)));
        // grassmann(2): ∂₁ is odd, [∂₁, ∂₁] = 2∂₁∂₁ = 0
        let a2 = alg("grassmann(2)");
        let d2 = algebra_derivations(&a2, true).unwrap();
        assert_eq!(d2.dim(), 8);
        for u in d2.basis_maps() {
            for v in d2.basis_maps() {
                super_bracket(&d2, &u, &v).unwrap();
            }
        }
    }

    #[test]
    fn central_multiples_stay_derivations() {
        for name in ["trunc_poly(3)", "product(matrix(2),trunc_poly(2))"] {
            let a = alg(name);
            let d = algebra_derivations(&a, false).unwrap();
            for z in a.center().basis() {
                for u in d.basis_maps() {
                    assert!(d.contains(&(&a.left_mult(z) * &u)).unwrap());
                }
            }
        }
    }

    #[test]
    fn commutative_split() {
        let a = alg("trunc_poly(3)");
        let s = first_order_decomposition(&Bimodule::regular(&a), SplitKind::Commutative).unwrap();
        assert!(s.holds());
        assert_eq!((s.first_order.dim(), s.zero_order.dim(), s.derivations.dim()), (5, 3, 2));
        let x = a.left_mult(&a.basis_element(1));
        let (zero, der) = split_operator(&Bimodule::regular(&a), &x, SplitKind::Commutative).unwrap();
        assert_eq!(zero, x);
        assert!(der.is_zero());
    }

    #[test]
    fn two_sided_splits_on_matrices() {
        let a = alg("matrix(2)");
        let q = Bimodule::regular(&a);
        for kind in [SplitKind::DvLeft, SplitKind::DvRight] {
            let s = first_order_decomposition(&q, kind).unwrap();
            assert!(s.holds(), "{kind:?}");
            assert_eq!((s.first_order.dim(), s.zero_order.dim(), s.derivations.dim()), (7, 4, 3));
        }
        assert!(first_order_decomposition(&q, SplitKind::Commutative).is_err());
    }

    #[test]
    fn graded_split() {
        let a = alg("grassmann(1)");
        let s = first_order_decomposition(&Bimodule::regular(&a), SplitKind::Graded).unwrap();
        assert!(s.holds());
        assert_eq!((s.first_order.dim(), s.zero_order.dim(), s.derivations.dim()), (4, 2, 2));
    }
}
