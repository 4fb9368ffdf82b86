//! Finite-dimensional unital associative algebras given by structure constants.

mod catalog;
mod io;

pub use catalog::{catalog, parse_catalog, CatalogEntry, STANDARD, STANDARD_COMMUTATIVE};
pub use io::AlgebraSpec;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{vector, Matrix, Subspace};
use crate::scalar::{fma, Field, Scalar};

/// A unital associative algebra with `e_i e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    field: Field,
    dim: usize,
    basis_names: Vec<String>,
    // c[i][j][k] at (i*n + j)*n + k
    sc: Vec<Scalar>,
    unit: Vec<Scalar>,
    parity: Option<Vec<u8>>,
}

/// A violated algebra axiom, with the basis indices that exhibit it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Associativity { i: usize, j: usize, k: usize, l: usize },
    LeftUnit { j: usize },
    RightUnit { j: usize },
    ZeroUnit,
    GradingOfProduct { i: usize, j: usize, k: usize },
    OddUnit,
    BadParityValue { i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub dim: usize,
    pub graded: bool,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

const MAX_REPORTED: usize = 64;

impl FiniteAlgebra {
    /// Assembles an algebra from dense data; shapes are checked, axioms are not
    /// (see [`FiniteAlgebra::validate`]).
    pub fn from_parts(
        name: impl Into<String>,
        field: Field,
        basis_names: Vec<String>,
        sc: Vec<Scalar>,
        unit: Vec<Scalar>,
        parity: Option<Vec<u8>>,
    ) -> Result<FiniteAlgebra> {
        let dim = basis_names.len();
        if sc.len() != dim * dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "{} structure constants for dimension {dim}",
                sc.len()
            )));
        }
        if unit.len() != dim {
            return Err(Error::InvalidAlgebra("unit has wrong length".into()));
        }
        if let Some(p) = &parity {
            if p.len() != dim {
                return Err(Error::InvalidAlgebra("parity has wrong length".into()));
            }
        }
        if sc.iter().chain(&unit).any(|x| x.field() != field) {
            return Err(Error::InvalidField("algebra data from another field".into()));
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            field,
            dim,
            basis_names,
            sc,
            unit,
            parity,
        })
    }

    /// Like [`FiniteAlgebra::from_parts`], rejecting data that fails validation.
    pub fn new(
        name: impl Into<String>,
        field: Field,
        basis_names: Vec<String>,
        sc: Vec<Scalar>,
        unit: Vec<Scalar>,
        parity: Option<Vec<u8>>,
    ) -> Result<FiniteAlgebra> {
        let a = FiniteAlgebra::from_parts(name, field, basis_names, sc, unit, parity)?;
        let report = a.validate();
        if !report.valid {
            return Err(Error::InvalidAlgebra(format!("{:?}", report.violations[0])));
        }
        Ok(a)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn parity(&self) -> Option<&[u8]> {
        self.parity.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.parity.is_some()
    }

    /// Parities, or an error naming the operation that needed them.
    pub fn require_parity(&self, what: &str) -> Result<&[u8]> {
        if self.field.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        self.parity
            .as_deref()
            .ok_or_else(|| Error::MissingGrading(format!("{what} needs a graded algebra")))
    }

    /// Forgets the grading.
    pub fn ungraded(&self) -> FiniteAlgebra {
        FiniteAlgebra {
            parity: None,
            ..self.clone()
        }
    }

    pub fn with_parity(&self, parity: Vec<u8>) -> Result<FiniteAlgebra> {
        FiniteAlgebra::new(
            self.name.clone(),
            self.field,
            self.basis_names.clone(),
            self.sc.clone(),
            self.unit.clone(),
            Some(parity),
        )
    }

    /// Coefficients of `e_i e_j`.
    #[inline]
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim;
        &self.sc[(i * n + j) * n..(i * n + j + 1) * n]
    }

    #[inline]
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.sc[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_element(&self, i: usize) -> Vec<Scalar> {
        vector::unit(self.field, self.dim, i)
    }

    pub fn zero_element(&self) -> Vec<Scalar> {
        vector::zeros(self.field, self.dim)
    }

    /// Index of the basis element equal to the unit, if any.
    pub fn unit_index(&self) -> Option<usize> {
        (0..self.dim).find(|&i| self.unit == self.basis_element(i))
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(a.len(), self.dim, "algebra element length");
        assert_eq!(b.len(), self.dim, "algebra element length");
        let mut out = self.zero_element();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (o, c) in out.iter_mut().zip(self.product_of_basis(i, j)) {
                    if !c.is_zero() {
                        fma(o, &ab, c);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        vector::sub(&self.mul(a, b), &self.mul(b, a))
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mult(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.mul(a, &self.basis_element(j))).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Matrix of `x ↦ x a`.
    pub fn right_mult(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.mul(&self.basis_element(j), a)).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// `L(e_i)` for every basis element.
    pub fn left_basis_mults(&self) -> Vec<Matrix> {
        (0..self.dim).map(|i| self.left_mult(&self.basis_element(i))).collect()
    }

    /// `R(e_i)` for every basis element.
    pub fn right_basis_mults(&self) -> Vec<Matrix> {
        (0..self.dim).map(|i| self.right_mult(&self.basis_element(i))).collect()
    }

    /// Checks associativity, the unit laws and grading compatibility.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut violations = Vec::new();
        if vector::is_zero(&self.unit) {
            violations.push(Violation::ZeroUnit);
        }
        for j in 0..n {
            let ej = self.basis_element(j);
            if self.mul(&self.unit, &ej) != ej {
                violations.push(Violation::LeftUnit { j });
            }
            if self.mul(&ej, &self.unit) != ej {
                violations.push(Violation::RightUnit { j });
            }
        }
        // (e_i e_j) e_k versus e_i (e_j e_k), coefficient of e_l.
        'assoc: for i in 0..n {
            for j in 0..n {
                let ij = self.product_of_basis(i, j);
                for k in 0..n {
                    let jk = self.product_of_basis(j, k);
                    let mut lhs = self.zero_element();
                    let mut rhs = self.zero_element();
                    for m in 0..n {
                        if !ij[m].is_zero() {
                            vector::axpy(&mut lhs, &ij[m], self.product_of_basis(m, k));
                        }
                        if !jk[m].is_zero() {
                            vector::axpy(&mut rhs, &jk[m], self.product_of_basis(i, m));
                        }
                    }
                    if let Some(l) = (0..n).find(|&l| lhs[l] != rhs[l]) {
                        violations.push(Violation::Associativity { i, j, k, l });
                        if violations.len() >= MAX_REPORTED {
                            break 'assoc;
                        }
                    }
                }
            }
        }
        if let Some(par) = &self.parity {
            for (i, &p) in par.iter().enumerate() {
                if p > 1 {
                    violations.push(Violation::BadParityValue { i });
                }
            }
            if self.unit.iter().zip(par).any(|(u, &p)| !u.is_zero() && p != 0) {
                violations.push(Violation::OddUnit);
            }
            for i in 0..n {
                for j in 0..n {
                    let want = (par[i] + par[j]) % 2;
                    for (k, c) in self.product_of_basis(i, j).iter().enumerate() {
                        if !c.is_zero() && par[k] % 2 != want {
                            violations.push(Violation::GradingOfProduct { i, j, k });
                        }
                    }
                }
            }
        }
        violations.truncate(MAX_REPORTED);
        ValidationReport {
            name: self.name.clone(),
            dim: n,
            graded: self.parity.is_some(),
            valid: violations.is_empty(),
            violations,
        }
    }

    /// `{z : e_i z = z e_i for all i}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            let ei = self.basis_element(i);
            let ad = &self.left_mult(&ei) - &self.right_mult(&ei);
            rows.extend(ad.row_vectors());
        }
        Matrix::from_rows(self.field, n, rows).expect("center system").kernel()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.product_of_basis(i, j) == self.product_of_basis(j, i)))
    }

    /// `e_i e_j = (-1)^{[e_i][e_j]} e_j e_i` on all basis pairs.
    pub fn is_graded_commutative(&self) -> Result<bool> {
        let par = self.require_parity("graded commutativity")?;
        for i in 0..self.dim {
            for j in 0..=i {
                let ij = self.product_of_basis(i, j);
                let ji = self.product_of_basis(j, i);
                let odd = par[i] == 1 && par[j] == 1;
                let ok = if odd {
                    ij.iter().zip(ji).all(|(a, b)| (a + b).is_zero())
                } else {
                    ij == ji
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Parity of a nonzero homogeneous element; zero counts as even.
    pub fn element_parity(&self, a: &[Scalar]) -> Result<u8> {
        let par = self.require_parity("element parity")?;
        let mut found: Option<u8> = None;
        for (x, &p) in a.iter().zip(par) {
            if x.is_zero() {
                continue;
            }
            match found {
                None => found = Some(p),
                Some(q) if q != p => return Err(Error::NotHomogeneous),
                _ => {}
            }
        }
        Ok(found.unwrap_or(0))
    }

    /// The algebra with reversed multiplication.
    pub fn opposite(&self) -> FiniteAlgebra {
        let n = self.dim;
        let mut sc = Vec::with_capacity(self.sc.len());
        for i in 0..n {
            for j in 0..n {
                sc.extend_from_slice(self.product_of_basis(j, i));
            }
        }
        FiniteAlgebra {
            name: format!("opposite({})", self.name),
            field: self.field,
            dim: n,
            basis_names: self.basis_names.clone(),
            sc,
            unit: self.unit.clone(),
            parity: self.parity.clone(),
        }
    }

    /// Whether `rho` (columns = images of basis elements in `target`) is a unital
    /// algebra homomorphism.
    pub fn is_homomorphism(&self, target: &FiniteAlgebra, rho: &Matrix) -> Result<()> {
        if rho.rows() != target.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch("homomorphism matrix shape".into()));
        }
        if rho.mul_vec(&self.unit) != target.unit {
            return Err(Error::NotAHomomorphism("unit is not preserved".into()));
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = rho.mul_vec(self.product_of_basis(i, j));
                let rhs = target.mul(&rho.column(i), &rho.column(j));
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(format!(
                        "product of basis elements {i} and {j} is not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<AlgebraElement<'_>> {
        AlgebraElement::new(self, coords)
    }

    /// Human-readable form such as `2*x - 1/3*e12`.
    pub fn format_element(&self, a: &[Scalar]) -> String {
        format_combination(a, &self.basis_names)
    }
}

pub(crate) fn format_combination(a: &[Scalar], names: &[String]) -> String {
    let mut out = String::new();
    for (x, name) in a.iter().zip(names) {
        if x.is_zero() {
            continue;
        }
        let s = x.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A coordinate vector tied to its algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<'a> {
    algebra: &'a FiniteAlgebra,
    coords: Vec<Scalar>,
}

impl<'a> AlgebraElement<'a> {
    pub fn new(algebra: &'a FiniteAlgebra, coords: Vec<Scalar>) -> Result<AlgebraElement<'a>> {
        if coords.len() != algebra.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for an algebra of dimension {}",
                coords.len(),
                algebra.dim
            )));
        }
        Ok(AlgebraElement { algebra, coords })
    }

    pub fn algebra(&self) -> &'a FiniteAlgebra {
        self.algebra
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn mul(&self, other: &AlgebraElement<'a>) -> Result<AlgebraElement<'a>> {
        if !std::ptr::eq(self.algebra, other.algebra) && self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: self.algebra,
            coords: self.algebra.mul(&self.coords, &other.coords),
        })
    }

    pub fn add(&self, other: &AlgebraElement<'a>) -> Result<AlgebraElement<'a>> {
        if !std::ptr::eq(self.algebra, other.algebra) && self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: self.algebra,
            coords: vector::add(&self.coords, &other.coords),
        })
    }
}

impl std::fmt::Display for AlgebraElement<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.algebra.format_element(&self.coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn matrix_units_multiply() {
        let m2 = catalog("matrix(2)", q()).unwrap();
        // basis e11, e12, e21, e22
        let e = |i| m2.basis_element(i);
        assert_eq!(m2.mul(&e(1), &e(2)), e(0));
        assert!(vector::is_zero(&m2.mul(&e(2), &e(2))));
        assert!(!m2.is_commutative());
    }

    #[test]
    fn truncation_kills_high_powers() {
        let a = catalog("trunc_poly(3)", q()).unwrap();
        let x = a.basis_element(1);
        let x2 = a.basis_element(2);
        assert!(vector::is_zero(&a.mul(&x, &x2)));
        assert_eq!(a.mul(&x, &x), x2);
        let one = a.element(a.unit().to_vec()).unwrap();
        let xe = a.element(x.clone()).unwrap();
        assert_eq!(one.mul(&xe).unwrap(), xe);
    }

    #[test]
    fn broken_unit_is_reported() {
        let a = catalog("trunc_poly(2)", q()).unwrap();
        let mut sc = a.sc.clone();
        sc[(1 * 2 + 0) * 2 + 1] = q().from_i64(2); // x·1 = 2x
        let bad = FiniteAlgebra::from_parts("bad", q(), a.basis_names.clone(), sc, a.unit.clone(), None).unwrap();
        let r = bad.validate();
        assert!(r.violations.contains(&Violation::RightUnit { j: 1 }));
        assert!(FiniteAlgebra::new("bad", q(), bad.basis_names.clone(), bad.sc.clone(), bad.unit.clone(), None).is_err());
    }

    #[test]
    fn edited_constant_names_associativity_witness() {
        let a = catalog("matrix(2)", q()).unwrap();
        let mut sc = a.sc.clone();
        sc[0] = q().from_i64(2); // e11 e11 = 2 e11
        let bad = FiniteAlgebra::from_parts("bad", q(), a.basis_names.clone(), sc, a.unit.clone(), None).unwrap();
        let r = bad.validate();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Associativity { .. })));
    }

    #[test]
    fn centers() {
        assert_eq!(catalog("trunc_poly(3)", q()).unwrap().center().dim(), 3);
        assert_eq!(catalog("matrix(2)", q()).unwrap().center().dim(), 1);
        assert_eq!(catalog("quaternions", q()).unwrap().center().dim(), 1);
        let m2 = catalog("matrix(2)", q()).unwrap();
        assert!(m2.center().contains(m2.unit()));
    }

    #[test]
    fn graded_commutativity() {
        let g = catalog("grassmann(2)", q()).unwrap();
        assert!(g.is_graded_commutative().unwrap());
        assert!(!g.is_commutative());
        let m2 = catalog("matrix(2)", q()).unwrap();
        assert!(matches!(m2.is_graded_commutative(), Err(Error::MissingGrading(_))));
        let g3 = catalog("grassmann(1)", Field::prime(2).unwrap()).unwrap();
        assert!(matches!(g3.is_graded_commutative(), Err(Error::CharacteristicTwo)));
    }

    #[test]
    fn mismatched_elements() {
        let a = catalog("trunc_poly(2)", q()).unwrap();
        let b = catalog("trunc_poly(3)", q()).unwrap();
        let x = a.element(a.basis_element(1)).unwrap();
        let y = b.element(b.basis_element(1)).unwrap();
        assert!(matches!(x.mul(&y), Err(Error::AlgebraMismatch)));
        assert!(a.element(vec![q().one()]).is_err());
    }

    #[test]
    fn homogeneity() {
        let g = catalog("grassmann(2)", q()).unwrap();
        let mixed = vector::add(&g.basis_element(0), &g.basis_element(1));
        assert!(matches!(g.element_parity(&mixed), Err(Error::NotHomogeneous)));
        assert_eq!(g.element_parity(&g.basis_element(3)).unwrap(), 0);
        assert_eq!(g.element_parity(&g.basis_element(2)).unwrap(), 1);
    }

    #[test]
    fn opposite_of_matrix_algebra_is_valid() {
        let m2 = catalog("matrix(2)", q()).unwrap();
        let op = m2.opposite();
        assert!(op.validate().valid);
        assert_eq!(op.mul(&op.basis_element(2), &op.basis_element(1)), op.basis_element(0));
    }

    #[test]
    fn formatting() {
        let a = catalog("trunc_poly(3)", q()).unwrap();
        let v = vector::from_i64(q(), &[0, -1, 2]);
        assert_eq!(a.format_element(&v), "-x + 2*x^2");
    }
}
