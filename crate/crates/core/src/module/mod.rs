//! Finite-dimensional left, right and two-sided modules given by action matrices.

mod io;
mod tensor;

pub use io::ModuleSpec;
pub use tensor::{TensorAP, TensorAPA};

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{vector, Matrix, Quotient, Subspace};
use crate::scalar::{Field, Scalar};

/// A module over a [`FiniteAlgebra`].
///
/// `left[i]` is the matrix of `p ↦ e_i p` and `right[i]` that of `p ↦ p e_i`.
/// A side that is absent makes the module one-sided; operations that need it
/// report [`Error::MissingSide`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    name: String,
    algebra: Arc<FiniteAlgebra>,
    dim: usize,
    left: Option<Vec<Matrix>>,
    right: Option<Vec<Matrix>>,
    parity: Option<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleViolation {
    Shape,
    LeftNotMultiplicative { i: usize, j: usize },
    LeftUnit,
    RightNotAntiMultiplicative { i: usize, j: usize },
    RightUnit,
    ActionsDoNotCommute { i: usize, j: usize },
    Grading { side: String, i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    pub name: String,
    pub algebra: String,
    pub dim: usize,
    pub has_left: bool,
    pub has_right: bool,
    pub central: Option<bool>,
    pub valid: bool,
    pub violations: Vec<ModuleViolation>,
}

pub(crate) fn same_algebra(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Bimodule {
    /// Assembles a module without checking the axioms.
    pub fn from_parts(
        name: impl Into<String>,
        algebra: Arc<FiniteAlgebra>,
        dim: usize,
        left: Option<Vec<Matrix>>,
        right: Option<Vec<Matrix>>,
        parity: Option<Vec<u8>>,
    ) -> Result<Bimodule> {
        let n = algebra.dim();
        for side in [&left, &right].into_iter().flatten() {
            if side.len() != n || side.iter().any(|m| m.rows() != dim || m.cols() != dim) {
                return Err(Error::InvalidModule(format!(
                    "expected {n} action matrices of size {dim}x{dim}"
                )));
            }
            if side.iter().any(|m| m.field() != algebra.field()) {
                return Err(Error::InvalidField("action matrices over another field".into()));
            }
        }
        if parity.as_ref().is_some_and(|p| p.len() != dim) {
            return Err(Error::InvalidModule("parity has wrong length".into()));
        }
        Ok(Bimodule {
            name: name.into(),
            algebra,
            dim,
            left,
            right,
            parity,
        })
    }

    /// Like [`Bimodule::from_parts`], rejecting data that fails validation.
    pub fn new(
        name: impl Into<String>,
        algebra: Arc<FiniteAlgebra>,
        dim: usize,
        left: Option<Vec<Matrix>>,
        right: Option<Vec<Matrix>>,
        parity: Option<Vec<u8>>,
    ) -> Result<Bimodule> {
        let m = Bimodule::from_parts(name, algebra, dim, left, right, parity)?;
        let r = m.validate();
        if !r.valid {
            return Err(Error::InvalidModule(format!("{:?}", r.violations[0])));
        }
        Ok(m)
    }

    /// `A` acting on itself from both sides.
    pub fn regular(algebra: &Arc<FiniteAlgebra>) -> Bimodule {
        Bimodule {
            name: "regular".into(),
            algebra: algebra.clone(),
            dim: algebra.dim(),
            left: Some(algebra.left_basis_mults()),
            right: Some(algebra.right_basis_mults()),
            parity: algebra.parity().map(<[u8]>::to_vec),
        }
    }

    /// `A` as a left module only.
    pub fn left_regular(algebra: &Arc<FiniteAlgebra>) -> Bimodule {
        Bimodule {
            name: "left_regular".into(),
            right: None,
            ..Bimodule::regular(algebra)
        }
    }

    /// `A` as a right module only.
    pub fn right_regular(algebra: &Arc<FiniteAlgebra>) -> Bimodule {
        Bimodule {
            name: "right_regular".into(),
            left: None,
            ..Bimodule::regular(algebra)
        }
    }

    pub fn zero(algebra: &Arc<FiniteAlgebra>) -> Bimodule {
        let f = algebra.field();
        let mats = vec![Matrix::zeros(f, 0, 0); algebra.dim()];
        Bimodule {
            name: "zero".into(),
            algebra: algebra.clone(),
            dim: 0,
            left: Some(mats.clone()),
            right: Some(mats),
            parity: algebra.parity().map(|_| Vec::new()),
        }
    }

    /// `A^k` with the componentwise actions.
    pub fn free(algebra: &Arc<FiniteAlgebra>, rank: usize) -> Bimodule {
        let mut m = Bimodule::zero(algebra);
        for _ in 0..rank {
            m = m.direct_sum(&Bimodule::regular(algebra)).expect("same algebra");
        }
        m.name = format!("free({rank})");
        m
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let block = |a: &Option<Vec<Matrix>>, b: &Option<Vec<Matrix>>| -> Option<Vec<Matrix>> {
            let (a, b) = (a.as_ref()?, b.as_ref()?);
            Some(a.iter().zip(b).map(|(x, y)| block_diag(x, y)).collect())
        };
        let parity = match (&self.parity, &other.parity) {
            (Some(p), Some(q)) => Some(p.iter().chain(q).copied().collect()),
            _ => None,
        };
        Ok(Bimodule {
            name: format!("{}+{}", self.name, other.name),
            algebra: self.algebra.clone(),
            dim: self.dim + other.dim,
            left: block(&self.left, &other.left),
            right: block(&self.right, &other.right),
            parity,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Bimodule {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self) -> Option<&[u8]> {
        self.parity.as_deref()
    }

    pub fn has_left(&self) -> bool {
        self.left.is_some()
    }

    pub fn has_right(&self) -> bool {
        self.right.is_some()
    }

    pub fn left_mats(&self) -> Result<&[Matrix]> {
        self.left.as_deref().ok_or(Error::MissingSide("left"))
    }

    pub fn right_mats(&self) -> Result<&[Matrix]> {
        self.right.as_deref().ok_or(Error::MissingSide("right"))
    }

    /// Parities of the basis, refusing ungraded modules and characteristic 2.
    pub fn require_parity(&self) -> Result<&[u8]> {
        if self.field().characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        self.parity
            .as_deref()
            .ok_or_else(|| Error::MissingGrading(format!("module `{}` is not graded", self.name)))
    }

    fn combine(&self, mats: &[Matrix], a: &[Scalar]) -> Result<Matrix> {
        if a.len() != self.algebra.dim() {
            return Err(Error::DimensionMismatch("algebra element length".into()));
        }
        let mut out = Matrix::zeros(self.field(), self.dim, self.dim);
        for (c, m) in a.iter().zip(mats) {
            if !c.is_zero() {
                out = &out + &m.scale(c);
            }
        }
        Ok(out)
    }

    /// Matrix of `p ↦ a p`.
    pub fn left_action(&self, a: &[Scalar]) -> Result<Matrix> {
        self.combine(self.left_mats()?, a)
    }

    /// Matrix of `p ↦ p a`.
    pub fn right_action(&self, a: &[Scalar]) -> Result<Matrix> {
        self.combine(self.right_mats()?, a)
    }

    pub fn act_left(&self, a: &[Scalar], p: &[Scalar]) -> Result<Vec<Scalar>> {
        Ok(self.left_action(a)?.mul_vec(p))
    }

    pub fn act_right(&self, p: &[Scalar], a: &[Scalar]) -> Result<Vec<Scalar>> {
        Ok(self.right_action(a)?.mul_vec(p))
    }

    /// All action generators present on the module.
    pub fn generators(&self) -> Vec<&Matrix> {
        self.left.iter().flatten().chain(self.right.iter().flatten()).collect()
    }

    /// Whether left and right actions agree on the center; `None` when one side is absent.
    pub fn is_central(&self) -> Option<bool> {
        let (l, r) = (self.left.as_ref()?, self.right.as_ref()?);
        let center = self.algebra.center();
        Some(center.basis().iter().all(|z| {
            self.combine(l, z).expect("length") == self.combine(r, z).expect("length")
        }))
    }

    pub fn validate(&self) -> ModuleReport {
        let a = &self.algebra;
        let n = a.dim();
        let id = Matrix::identity(self.field(), self.dim);
        let mut violations = Vec::new();
        if let Some(l) = &self.left {
            for i in 0..n {
                for j in 0..n {
                    let prod = &l[i] * &l[j];
                    if prod != self.combine(l, a.product_of_basis(i, j)).expect("length") {
                        violations.push(ModuleViolation::LeftNotMultiplicative { i, j });
                    }
                }
            }
            if self.combine(l, a.unit()).expect("length") != id {
                violations.push(ModuleViolation::LeftUnit);
            }
        }
        if let Some(r) = &self.right {
            for i in 0..n {
                for j in 0..n {
                    // p e_i e_j: first R(e_i), then R(e_j)
                    let prod = &r[j] * &r[i];
                    if prod != self.combine(r, a.product_of_basis(i, j)).expect("length") {
                        violations.push(ModuleViolation::RightNotAntiMultiplicative { i, j });
                    }
                }
            }
            if self.combine(r, a.unit()).expect("length") != id {
                violations.push(ModuleViolation::RightUnit);
            }
        }
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            for i in 0..n {
                for j in 0..n {
                    if &l[i] * &r[j] != &r[j] * &l[i] {
                        violations.push(ModuleViolation::ActionsDoNotCommute { i, j });
                    }
                }
            }
        }
        if let (Some(mp), Some(ap)) = (&self.parity, a.parity()) {
            for (side, mats) in [("left", &self.left), ("right", &self.right)] {
                let Some(mats) = mats else { continue };
                for (i, m) in mats.iter().enumerate() {
                    let bad = (0..self.dim).any(|c| {
                        (0..self.dim).any(|r| !m.get(r, c).is_zero() && mp[r] != (mp[c] + ap[i]) % 2)
                    });
                    if bad {
                        violations.push(ModuleViolation::Grading { side: side.into(), i });
                    }
                }
            }
        }
        ModuleReport {
            name: self.name.clone(),
            algebra: a.name().to_string(),
            dim: self.dim,
            has_left: self.left.is_some(),
            has_right: self.right.is_some(),
            central: self.is_central(),
            valid: violations.is_empty(),
            violations,
        }
    }

    /// The same space viewed over the opposite algebra (sides exchanged).
    pub fn opposite(&self, opposite_algebra: &Arc<FiniteAlgebra>) -> Result<Bimodule> {
        if opposite_algebra.dim() != self.algebra.dim() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Bimodule {
            name: format!("opposite({})", self.name),
            algebra: opposite_algebra.clone(),
            dim: self.dim,
            left: self.right.clone(),
            right: self.left.clone(),
            parity: self.parity.clone(),
        })
    }

    /// The submodule carried by an action-stable subspace, in echelon coordinates.
    pub fn submodule(&self, sub: &Subspace) -> Result<Bimodule> {
        let restrict = |mats: &Option<Vec<Matrix>>| -> Result<Option<Vec<Matrix>>> {
            mats.as_ref()
                .map(|ms| ms.iter().map(|m| sub.restrict(m)).collect())
                .transpose()
        };
        let parity = self.parity.as_ref().and_then(|p| homogeneous_parities(sub.basis(), p));
        Ok(Bimodule {
            name: format!("sub({})", self.name),
            algebra: self.algebra.clone(),
            dim: sub.dim(),
            left: restrict(&self.left)?,
            right: restrict(&self.right)?,
            parity,
        })
    }

    /// The quotient by an action-stable subspace.
    pub fn quotient(&self, sub: &Subspace) -> Result<(Bimodule, Quotient)> {
        let quo = Quotient::of_ambient(sub);
        let induce = |mats: &Option<Vec<Matrix>>| -> Result<Option<Vec<Matrix>>> {
            mats.as_ref()
                .map(|ms| ms.iter().map(|m| quo.induced(m)).collect())
                .transpose()
        };
        let parity = self
            .parity
            .as_ref()
            .and_then(|p| homogeneous_parities(quo.representatives(), p));
        let m = Bimodule {
            name: format!("quotient({})", self.name),
            algebra: self.algebra.clone(),
            dim: quo.dim(),
            left: induce(&self.left)?,
            right: induce(&self.right)?,
            parity,
        };
        Ok((m, quo))
    }

    /// Smallest submodule containing the given vectors.
    pub fn generated_submodule<I>(&self, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        Subspace::span(self.field(), self.dim, vectors).closure(&self.generators())
    }

    /// Right-linear maps `u: Q → A` (`u(qb) = u(q)b`) with `(bu)(q) = b u(q)` and
    /// `(ub)(q) = u(bq)`. Maps are flattened row-major (`u[a][q]` at `a·dim Q + q`).
    pub fn right_dual(&self) -> Result<DualModule> {
        let a = &self.algebra;
        let ra = a.right_basis_mults();
        let la = a.left_basis_mults();
        let id_q = Matrix::identity(self.field(), self.dim);
        let id_a = Matrix::identity(self.field(), a.dim());
        let rq = self.right_mats()?;
        let lq = self.left_mats()?;
        let constraints: Vec<Matrix> = (0..a.dim())
            .map(|b| &ra[b].kron(&id_q) - &id_a.kron(&rq[b].transpose()))
            .collect();
        let left_ops: Vec<Matrix> = la.iter().map(|l| l.kron(&id_q)).collect();
        let right_ops: Vec<Matrix> = lq.iter().map(|l| id_a.kron(&l.transpose())).collect();
        DualModule::build(self, "right_dual", constraints, left_ops, right_ops)
    }

    /// Left-linear maps `u: Q → A` (`u(bq) = b u(q)`) with `(bu)(q) = u(qb)` and
    /// `(ub)(q) = u(q)b`.
    pub fn left_dual(&self) -> Result<DualModule> {
        let a = &self.algebra;
        let ra = a.right_basis_mults();
        let la = a.left_basis_mults();
        let id_q = Matrix::identity(self.field(), self.dim);
        let id_a = Matrix::identity(self.field(), a.dim());
        let rq = self.right_mats()?;
        let lq = self.left_mats()?;
        let constraints: Vec<Matrix> = (0..a.dim())
            .map(|b| &la[b].kron(&id_q) - &id_a.kron(&lq[b].transpose()))
            .collect();
        let left_ops: Vec<Matrix> = rq.iter().map(|r| id_a.kron(&r.transpose())).collect();
        let right_ops: Vec<Matrix> = ra.iter().map(|r| r.kron(&id_q)).collect();
        DualModule::build(self, "left_dual", constraints, left_ops, right_ops)
    }
}

fn homogeneous_parities(vectors: &[Vec<Scalar>], parity: &[u8]) -> Option<Vec<u8>> {
    vectors
        .iter()
        .map(|v| {
            let mut found = None;
            for (x, &p) in v.iter().zip(parity) {
                if x.is_zero() {
                    continue;
                }
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
            Some(found.unwrap_or(0))
        })
        .collect()
}

pub(crate) fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            m.set(r, c, a.get(r, c).clone());
        }
    }
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            m.set(a.rows() + r, a.cols() + c, b.get(r, c).clone());
        }
    }
    m
}

/// A one-sided dual realized as a subspace of `Hom_K(Q, A)`.
#[derive(Clone, Debug)]
pub struct DualModule {
    /// The dual as a bimodule, in coordinates of `maps`.
    pub module: Bimodule,
    /// Subspace of flattened maps `Q → A`.
    pub maps: Subspace,
    pub target_dim: usize,
    pub source_dim: usize,
}

impl DualModule {
    fn build(
        q: &Bimodule,
        kind: &str,
        constraints: Vec<Matrix>,
        left_ops: Vec<Matrix>,
        right_ops: Vec<Matrix>,
    ) -> Result<DualModule> {
        let a = &q.algebra;
        let ambient = a.dim() * q.dim;
        let refs: Vec<&Matrix> = constraints.iter().collect();
        let maps = Subspace::zero(q.field(), ambient).preimage_all(refs, ambient);
        let left = left_ops.iter().map(|m| maps.restrict(m)).collect::<Result<Vec<_>>>()?;
        let right = right_ops.iter().map(|m| maps.restrict(m)).collect::<Result<Vec<_>>>()?;
        let module = Bimodule {
            name: format!("{kind}({})", q.name),
            algebra: a.clone(),
            dim: maps.dim(),
            left: Some(left),
            right: Some(right),
            parity: None,
        };
        Ok(DualModule {
            module,
            maps,
            target_dim: a.dim(),
            source_dim: q.dim,
        })
    }

    /// The map `Q → A` with the given dual coordinates, as a `dim A × dim Q` matrix.
    pub fn map_matrix(&self, coords: &[Scalar]) -> Matrix {
        let flat = self.maps.from_coords(coords);
        Matrix::from_flat(self.maps.field(), self.target_dim, self.source_dim, flat).expect("map shape")
    }

    pub fn basis_maps(&self) -> Vec<Matrix> {
        (0..self.maps.dim())
            .map(|i| self.map_matrix(&vector::unit(self.maps.field(), self.maps.dim(), i)))
            .collect()
    }
}

/// A coordinate vector tied to its module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement<'a> {
    module: &'a Bimodule,
    coords: Vec<Scalar>,
}

impl<'a> ModuleElement<'a> {
    pub fn new(module: &'a Bimodule, coords: Vec<Scalar>) -> Result<ModuleElement<'a>> {
        if coords.len() != module.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a module of dimension {}",
                coords.len(),
                module.dim
            )));
        }
        Ok(ModuleElement { module, coords })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn left_mul(&self, a: &[Scalar]) -> Result<ModuleElement<'a>> {
        Ok(ModuleElement {
            module: self.module,
            coords: self.module.act_left(a, &self.coords)?,
        })
    }

    pub fn right_mul(&self, a: &[Scalar]) -> Result<ModuleElement<'a>> {
        Ok(ModuleElement {
            module: self.module,
            coords: self.module.act_right(&self.coords, a)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    fn alg(name: &str) -> Arc<FiniteAlgebra> {
        Arc::new(catalog(name, Field::Rational).unwrap())
    }

    #[test]
    fn regular_modules_validate() {
        for name in ["trunc_poly(2)", "matrix(2)", "grassmann(1)", "quaternions", "upper_triangular(2)"] {
            let a = alg(name);
            let r = Bimodule::regular(&a).validate();
            assert!(r.valid, "{name}: {:?}", r.violations);
            assert_eq!(r.central, Some(true));
        }
        let a = alg("trunc_poly(2)");
        let m = Bimodule::regular(&a);
        assert_eq!(m.left_mats().unwrap(), m.right_mats().unwrap());
        let m2 = alg("matrix(2)");
        let m = Bimodule::regular(&m2);
        assert_ne!(m.left_mats().unwrap(), m.right_mats().unwrap());
    }

    #[test]
    fn free_and_sums() {
        let a = alg("matrix(2)");
        assert_eq!(Bimodule::free(&a, 1).left_mats().unwrap(), Bimodule::regular(&a).left_mats().unwrap());
        assert_eq!(Bimodule::free(&a, 2).dim(), 8);
        assert!(Bimodule::free(&a, 2).validate().valid);
        let b = alg("trunc_poly(3)");
        let s = Bimodule::regular(&b).direct_sum(&Bimodule::free(&b, 2)).unwrap();
        assert_eq!(s.dim(), 9);
        assert!(matches!(
            Bimodule::regular(&a).direct_sum(&Bimodule::regular(&b)),
            Err(Error::AlgebraMismatch)
        ));
    }

    #[test]
    fn one_sided_modules_report_missing_side() {
        let a = alg("matrix(2)");
        let l = Bimodule::left_regular(&a);
        assert!(l.validate().valid);
        assert!(matches!(l.right_mats(), Err(Error::MissingSide("right"))));
        assert_eq!(l.is_central(), None);
    }

    #[test]
    fn broken_actions_are_reported() {
        let a = alg("trunc_poly(2)");
        let reg = Bimodule::regular(&a);
        let mut left = reg.left_mats().unwrap().to_vec();
        left[0] = left[0].scale(&Field::Rational.from_i64(2));
        let bad = Bimodule::from_parts("bad", a.clone(), 2, Some(left), None, None).unwrap();
        assert!(!bad.validate().valid);
    }

    #[test]
    fn right_dual_of_regular_is_regular() {
        for name in ["trunc_poly(3)", "matrix(2)"] {
            let a = alg(name);
            let d = Bimodule::regular(&a).right_dual().unwrap();
            assert_eq!(d.module.dim(), a.dim());
            assert!(d.module.validate().valid);
            // u ↦ u(1) is injective and every u is left multiplication by u(1).
            for u in d.basis_maps() {
                let u1 = u.mul_vec(a.unit());
                assert_eq!(u, a.left_mult(&u1));
            }
        }
        let a = alg("matrix(2)");
        let z = Bimodule::zero(&a).right_dual().unwrap();
        assert_eq!(z.module.dim(), 0);
        let l = Bimodule::regular(&a).left_dual().unwrap();
        assert_eq!(l.module.dim(), 4);
        assert!(l.module.validate().valid);
    }

    #[test]
    fn submodule_and_quotient() {
        let a = alg("trunc_poly(3)");
        let reg = Bimodule::regular(&a);
        let ideal = reg.generated_submodule([a.basis_element(1)]);
        assert_eq!(ideal.dim(), 2);
        let sub = reg.submodule(&ideal).unwrap();
        assert!(sub.validate().valid);
        let (quo, _) = reg.quotient(&ideal).unwrap();
        assert_eq!(quo.dim(), 1);
        assert!(quo.validate().valid);
        let not_stable = Subspace::span(Field::Rational, 3, [a.basis_element(0)]);
        assert!(reg.submodule(&not_stable).is_err());
    }
}
