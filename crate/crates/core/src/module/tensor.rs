//! `A ⊗_K P` and `A ⊗_K P ⊗_K A` with their commuting module structures.

use std::sync::Arc;

use super::Bimodule;
use crate::algebra::FiniteAlgebra;
use crate::error::Result;
use crate::linalg::Matrix;

/// `A ⊗ P`, basis `e_a ⊗ p_l` at index `a·dim P + l`.
///
/// `outer[b]` is `a⊗p ↦ (e_b a)⊗p` and `inner[b]` is `a⊗p ↦ a⊗(e_b p)`.
#[derive(Clone, Debug)]
pub struct TensorAP {
    pub algebra: Arc<FiniteAlgebra>,
    pub p_dim: usize,
    pub outer: Vec<Matrix>,
    pub inner: Vec<Matrix>,
}

impl TensorAP {
    pub fn new(p: &Bimodule) -> Result<TensorAP> {
        let a = p.algebra();
        let f = a.field();
        let id_p = Matrix::identity(f, p.dim());
        let id_a = Matrix::identity(f, a.dim());
        let outer = a.left_basis_mults().iter().map(|l| l.kron(&id_p)).collect();
        let inner = p.left_mats()?.iter().map(|l| id_a.kron(l)).collect();
        Ok(TensorAP {
            algebra: a.clone(),
            p_dim: p.dim(),
            outer,
            inner,
        })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim() * self.p_dim
    }

    pub fn index(&self, a: usize, l: usize) -> usize {
        a * self.p_dim + l
    }

    /// Flattened `a ⊗ p`.
    pub fn pure(&self, a: &[crate::Scalar], p: &[crate::Scalar]) -> Vec<crate::Scalar> {
        a.iter().flat_map(|x| p.iter().map(move |y| x * y)).collect()
    }

    /// `δ^b = outer(b) − inner(b)`.
    pub fn delta(&self, b: usize) -> Matrix {
        &self.outer[b] - &self.inner[b]
    }

    /// The outer structure as a left module.
    pub fn outer_module(&self) -> Bimodule {
        Bimodule::from_parts("A⊗P", self.algebra.clone(), self.dim(), Some(self.outer.clone()), None, None)
            .expect("tensor shapes")
    }

    pub fn all_generators(&self) -> Vec<&Matrix> {
        self.outer.iter().chain(&self.inner).collect()
    }
}

/// `A ⊗ P ⊗ A`, basis `e_a ⊗ p_l ⊗ e_c` at `(a·dim P + l)·dim A + c`.
///
/// `module` carries the outer structure `b(a⊗p⊗c) = (ba)⊗p⊗c`,
/// `(a⊗p⊗c)b = a⊗p⊗(cb)`; `inner_left[b]` is `a⊗p⊗c ↦ a⊗(bp)⊗c` and
/// `inner_right[b]` is `a⊗p⊗c ↦ a⊗(pb)⊗c`.
#[derive(Clone, Debug)]
pub struct TensorAPA {
    pub module: Bimodule,
    pub p_dim: usize,
    pub inner_left: Vec<Matrix>,
    pub inner_right: Vec<Matrix>,
}

impl TensorAPA {
    pub fn new(p: &Bimodule) -> Result<TensorAPA> {
        let a = p.algebra();
        let f = a.field();
        let n = a.dim();
        let id_p = Matrix::identity(f, p.dim());
        let id_a = Matrix::identity(f, n);
        let id_ap = id_a.kron(&id_p);
        let id_pa = id_p.kron(&id_a);
        let left = a.left_basis_mults().iter().map(|l| l.kron(&id_pa)).collect();
        let right = a.right_basis_mults().iter().map(|r| id_ap.kron(r)).collect();
        let inner_left = p.left_mats()?.iter().map(|l| id_a.kron(l).kron(&id_a)).collect();
        let inner_right = p.right_mats()?.iter().map(|r| id_a.kron(r).kron(&id_a)).collect();
        let module = Bimodule::from_parts("A⊗P⊗A", a.clone(), n * p.dim() * n, Some(left), Some(right), None)?;
        Ok(TensorAPA {
            module,
            p_dim: p.dim(),
            inner_left,
            inner_right,
        })
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn index(&self, a: usize, l: usize, c: usize) -> usize {
        let n = self.module.algebra().dim();
        (a * self.p_dim + l) * n + c
    }

    /// `δ^b`: `a⊗p⊗c ↦ (ba)⊗p⊗c − a⊗(bp)⊗c`.
    pub fn delta(&self, b: usize) -> Matrix {
        &self.module.left_mats().expect("outer left")[b] - &self.inner_left[b]
    }

    /// `δ̄^c`: `a⊗p⊗d ↦ a⊗p⊗(dc) − a⊗(pc)⊗d`.
    pub fn bar_delta(&self, c: usize) -> Matrix {
        &self.module.right_mats().expect("outer right")[c] - &self.inner_right[c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::linalg::vector;
    use crate::Field;

    #[test]
    fn tensor_with_p_structures() {
        let a = Arc::new(catalog("trunc_poly(2)", Field::Rational).unwrap());
        let p = Bimodule::regular(&a);
        let t = TensorAP::new(&p).unwrap();
        assert_eq!(t.dim(), 4);
        let one_one = vector::unit(a.field(), 4, t.index(0, 0));
        assert_eq!(t.outer[1].mul_vec(&one_one), vector::unit(a.field(), 4, t.index(1, 0)));
        assert_eq!(t.inner[1].mul_vec(&one_one), vector::unit(a.field(), 4, t.index(0, 1)));
        for b in 0..2 {
            for c in 0..2 {
                assert_eq!(&t.outer[b] * &t.inner[c], &t.inner[c] * &t.outer[b]);
            }
        }
        assert!(t.outer_module().validate().valid);
    }

    #[test]
    fn three_fold_tensor() {
        let a = Arc::new(catalog("matrix(2)", Field::Rational).unwrap());
        let p = Bimodule::regular(&a);
        let t = TensorAPA::new(&p).unwrap();
        assert_eq!(t.dim(), 64);
        assert!(t.module.validate().valid);
        for b in 0..4 {
            for c in 0..4 {
                assert_eq!(&t.delta(b) * &t.bar_delta(c), &t.bar_delta(c) * &t.delta(b));
            }
        }
    }
}
