//! `Hom_K(P, Q)` as a flat coordinate space with its module actions and the
//! operators `δ_a`, `δ̄_a` and graded `δ_a`.
//!
//! A map `Φ: P → Q` is a `dim Q × dim P` matrix flattened row-major, so the
//! entry `Φ[q][p]` sits at `q·dim P + p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{vector, Matrix, Subspace};
use crate::module::{same_algebra, Bimodule};
use crate::scalar::{sign, Field, Scalar};

/// Which of the four module structures on `Hom_K(P, Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    /// `(aΦ)(p) = aΦ(p)`
    Left,
    /// `(Φ∙a)(p) = Φ(ap)`
    LeftBullet,
    /// `(Φa)(p) = Φ(p)a`
    Right,
    /// `(a∙Φ)(p) = Φ(pa)`
    RightBullet,
}

/// Which δ-operator family an order condition is phrased in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Plain,
    Bar,
    Graded,
}

/// A linear map between two modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub matrix: Matrix,
    pub parity: Option<u8>,
}

impl LinMap {
    pub fn new(matrix: Matrix) -> LinMap {
        LinMap { matrix, parity: None }
    }

    pub fn apply(&self, p: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(p)
    }
}

#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Bimodule,
    target: Bimodule,
    left: Option<Vec<Matrix>>,
    left_bullet: Option<Vec<Matrix>>,
    right: Option<Vec<Matrix>>,
    right_bullet: Option<Vec<Matrix>>,
}

impl HomSpace {
    pub fn new(source: &Bimodule, target: &Bimodule) -> Result<HomSpace> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let f = source.field();
        let id_p = Matrix::identity(f, source.dim());
        let id_q = Matrix::identity(f, target.dim());
        let left = target.left_mats().ok().map(|ms| ms.iter().map(|l| l.kron(&id_p)).collect());
        let right = target.right_mats().ok().map(|ms| ms.iter().map(|r| r.kron(&id_p)).collect());
        let left_bullet = source
            .left_mats()
            .ok()
            .map(|ms| ms.iter().map(|l| id_q.kron(&l.transpose())).collect());
        let right_bullet = source
            .right_mats()
            .ok()
            .map(|ms| ms.iter().map(|r| id_q.kron(&r.transpose())).collect());
        Ok(HomSpace {
            source: source.clone(),
            target: target.clone(),
            left,
            left_bullet,
            right,
            right_bullet,
        })
    }

    /// `End_K(P)`.
    pub fn endomorphisms(p: &Bimodule) -> Result<HomSpace> {
        HomSpace::new(p, p)
    }

    pub fn source(&self) -> &Bimodule {
        &self.source
    }

    pub fn target(&self) -> &Bimodule {
        &self.target
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn algebra_dim(&self) -> usize {
        self.source.algebra().dim()
    }

    /// `dim P · dim Q`.
    pub fn dim(&self) -> usize {
        self.source.dim() * self.target.dim()
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.field(), self.dim())
    }

    pub fn zero(&self) -> Subspace {
        Subspace::zero(self.field(), self.dim())
    }

    pub fn flatten(&self, m: &Matrix) -> Result<Vec<Scalar>> {
        if m.rows() != self.target.dim() || m.cols() != self.source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected a {}x{} map, got {}x{}",
                self.target.dim(),
                self.source.dim(),
                m.rows(),
                m.cols()
            )));
        }
        Ok(m.data().to_vec())
    }

    pub fn unflatten(&self, v: &[Scalar]) -> Matrix {
        Matrix::from_flat(self.field(), self.target.dim(), self.source.dim(), v.to_vec()).expect("hom vector length")
    }

    pub fn operators(&self, kind: ActionKind) -> Result<&[Matrix]> {
        let (ops, side) = match kind {
            ActionKind::Left => (&self.left, "left"),
            ActionKind::LeftBullet => (&self.left_bullet, "left"),
            ActionKind::Right => (&self.right, "right"),
            ActionKind::RightBullet => (&self.right_bullet, "right"),
        };
        ops.as_deref().ok_or(Error::MissingSide(side))
    }

    /// Operator of the given action by an arbitrary algebra element.
    pub fn action_operator(&self, kind: ActionKind, a: &[Scalar]) -> Result<Matrix> {
        if a.len() != self.algebra_dim() {
            return Err(Error::DimensionMismatch("algebra element length".into()));
        }
        let ops = self.operators(kind)?;
        let mut out = Matrix::zeros(self.field(), self.dim(), self.dim());
        for (c, op) in a.iter().zip(ops) {
            if !c.is_zero() {
                out = &out + &op.scale(c);
            }
        }
        Ok(out)
    }

    pub fn act(&self, kind: ActionKind, a: &[Scalar], phi: &Matrix) -> Result<Matrix> {
        let v = self.flatten(phi)?;
        Ok(self.unflatten(&self.action_operator(kind, a)?.mul_vec(&v)))
    }

    /// `δ_{e_i} = left(e_i) − left_bullet(e_i)`.
    pub fn delta_op(&self, i: usize) -> Result<Matrix> {
        Ok(&self.operators(ActionKind::Left)?[i] - &self.operators(ActionKind::LeftBullet)?[i])
    }

    /// `δ̄_{e_i} = right(e_i) − right_bullet(e_i)`.
    pub fn bar_delta_op(&self, i: usize) -> Result<Matrix> {
        Ok(&self.operators(ActionKind::Right)?[i] - &self.operators(ActionKind::RightBullet)?[i])
    }

    pub fn delta_ops(&self) -> Result<Vec<Matrix>> {
        (0..self.algebra_dim()).map(|i| self.delta_op(i)).collect()
    }

    pub fn bar_delta_ops(&self) -> Result<Vec<Matrix>> {
        (0..self.algebra_dim()).map(|i| self.bar_delta_op(i)).collect()
    }

    pub fn delta_element(&self, a: &[Scalar]) -> Result<Matrix> {
        Ok(&self.action_operator(ActionKind::Left, a)? - &self.action_operator(ActionKind::LeftBullet, a)?)
    }

    pub fn bar_delta_element(&self, a: &[Scalar]) -> Result<Matrix> {
        Ok(&self.action_operator(ActionKind::Right, a)? - &self.action_operator(ActionKind::RightBullet, a)?)
    }

    pub fn delta(&self, a: &[Scalar], phi: &Matrix) -> Result<Matrix> {
        Ok(self.unflatten(&self.delta_element(a)?.mul_vec(&self.flatten(phi)?)))
    }

    pub fn bar_delta(&self, a: &[Scalar], phi: &Matrix) -> Result<Matrix> {
        Ok(self.unflatten(&self.bar_delta_element(a)?.mul_vec(&self.flatten(phi)?)))
    }

    /// Parity of each flat coordinate: `[q] + [p]`.
    pub fn coordinate_parities(&self) -> Result<Vec<u8>> {
        let pp = self.source.require_parity()?;
        let pq = self.target.require_parity()?;
        Ok(pq
            .iter()
            .flat_map(|&q| pp.iter().map(move |&p| (q + p) % 2))
            .collect())
    }

    /// Maps of parity `phi`.
    pub fn parity_subspace(&self, phi: u8) -> Result<Subspace> {
        let par = self.coordinate_parities()?;
        let f = self.field();
        let n = self.dim();
        Ok(Subspace::span(
            f,
            n,
            par.iter()
                .enumerate()
                .filter(|(_, &p)| p == phi % 2)
                .map(|(i, _)| vector::unit(f, n, i)),
        ))
    }

    /// Parity of a homogeneous map.
    pub fn map_parity(&self, phi: &Matrix) -> Result<u8> {
        let par = self.coordinate_parities()?;
        let v = self.flatten(phi)?;
        let mut found = None;
        for (x, &p) in v.iter().zip(&par) {
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

    /// Graded `δ_a Φ = aΦ − (−1)^{[a][Φ]} Φ∙a` for homogeneous `a`, extended
    /// to all of `Hom` componentwise in the parity of `Φ`.
    pub fn graded_delta_element(&self, a: &[Scalar]) -> Result<Matrix> {
        let alg = self.source.algebra();
        alg.require_parity("graded δ")?;
        let pa = alg.element_parity(a)?;
        let par = self.coordinate_parities()?;
        let l = self.action_operator(ActionKind::Left, a)?;
        let mut b = self.action_operator(ActionKind::LeftBullet, a)?;
        if pa == 1 {
            // Φ∙a keeps the parity of the coordinate's map component; flip the odd ones.
            for c in 0..b.cols() {
                if par[c] == 1 {
                    for r in 0..b.rows() {
                        let x = b.get(r, c).clone();
                        if !x.is_zero() {
                            b.set(r, c, -x);
                        }
                    }
                }
            }
        }
        Ok(&l - &b)
    }

    pub fn graded_delta_op(&self, i: usize) -> Result<Matrix> {
        let e = self.source.algebra().basis_element(i);
        self.graded_delta_element(&e)
    }

    pub fn graded_delta_ops(&self) -> Result<Vec<Matrix>> {
        (0..self.algebra_dim()).map(|i| self.graded_delta_op(i)).collect()
    }

    /// Graded δ on a homogeneous map; errors on inhomogeneous arguments.
    pub fn graded_delta(&self, a: &[Scalar], phi: &Matrix) -> Result<Matrix> {
        let alg = self.source.algebra();
        let pa = alg.element_parity(a)?;
        let pphi = self.map_parity(phi)?;
        let l = self.act(ActionKind::Left, a, phi)?;
        let b = self.act(ActionKind::LeftBullet, a, phi)?;
        Ok(&l - &b.scale(&sign(self.field(), (pa * pphi) as usize)))
    }

    pub fn flavor_ops(&self, flavor: Flavor) -> Result<Vec<Matrix>> {
        match flavor {
            Flavor::Plain => self.delta_ops(),
            Flavor::Bar => self.bar_delta_ops(),
            Flavor::Graded => self.graded_delta_ops(),
        }
    }

    /// Whether every `(k+1)`-fold composite of basis δ-operators kills `Φ`.
    ///
    /// The span of all length-`j` composites applied to `Φ` is propagated level
    /// by level; the condition holds iff the span at level `k+1` is zero.
    pub fn iterated_delta_vanishes(&self, phi: &Matrix, k: usize, flavor: Flavor) -> Result<bool> {
        let ops = self.flavor_ops(flavor)?;
        let mut level = Subspace::span(self.field(), self.dim(), [self.flatten(phi)?]);
        for _ in 0..=k {
            if level.is_zero() {
                return Ok(true);
            }
            level = Subspace::span(
                self.field(),
                self.dim(),
                ops.iter().flat_map(|op| level.basis().iter().map(move |v| op.mul_vec(v))),
            );
        }
        Ok(level.is_zero())
    }

    /// `{Φ : δ_{e_i}Φ ∈ s for all i}`.
    pub fn preimage(&self, ops: &[Matrix], s: &Subspace) -> Subspace {
        s.preimage_all(ops.iter(), self.dim())
    }

    /// Maps killed by every operator in `ops`.
    pub fn common_kernel(&self, ops: &[Matrix]) -> Subspace {
        self.preimage(ops, &self.zero())
    }

    /// `Hom^L`: left-linear maps, `δ_a Φ = 0`.
    pub fn left_linear(&self) -> Result<Subspace> {
        Ok(self.common_kernel(&self.delta_ops()?))
    }

    /// `Hom^R`: right-linear maps, `δ̄_a Φ = 0`.
    pub fn right_linear(&self) -> Result<Subspace> {
        Ok(self.common_kernel(&self.bar_delta_ops()?))
    }

    /// Bimodule morphisms.
    pub fn bimodule_morphisms(&self) -> Result<Subspace> {
        let mut ops = self.delta_ops()?;
        ops.extend(self.bar_delta_ops()?);
        Ok(self.common_kernel(&ops))
    }

    /// All action generators of the given kinds, for closure computations.
    pub fn generators(&self, kinds: &[ActionKind]) -> Result<Vec<&Matrix>> {
        let mut out = Vec::new();
        for &k in kinds {
            out.extend(self.operators(k)?.iter());
        }
        Ok(out)
    }

    /// Matrix of the composite `Φ₁ ∘ Φ₂`.
    pub fn compose(first: &Matrix, second: &Matrix) -> Result<Matrix> {
        first.checked_mul(second)
    }
}
