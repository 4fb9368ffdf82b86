//! Chevalley–Eilenberg calculus of an algebra: forms on its derivations.
//!
//! A `k`-cochain is a `K`-multilinear map `(𝔡A)^k → A`, stored by its values on
//! basis tuples: tuple `(i_1, …, i_k)` read as a base-`m` number (`m = dim 𝔡A`,
//! `i_1` most significant) times `dim A`, plus the coordinate of the value.
//! Forms `O^k` are the alternating cochains that are linear over the center.

pub mod graded;
mod minimal;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use minimal::{DualityReport, FirstOrderCheck};

use crate::algebra::FiniteAlgebra;
use crate::derivations::{algebra_derivations, DerivationSpace};
use crate::error::{Error, Result};
use crate::linalg::{vector, Echelon, Matrix, Subspace};
use crate::module::Bimodule;
use crate::scalar::{sign, Scalar};

pub const DEFAULT_CE_CAP: usize = 3;
/// No calculus is built beyond this degree.
pub const MAX_CE_CAP: usize = 5;

pub(crate) fn tuples(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = m.checked_pow(k as u32).expect("tuple count");
    (0..count).map(move |mut x| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = x % m;
            x /= m;
        }
        t
    })
}

pub(crate) fn tuple_index(m: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &i| acc * m + i)
}

/// Increasing `r`-subsets of `0..n` with the sign of the shuffle `(I, J)`.
pub(crate) fn shuffles(n: usize, r: usize) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(r);
    fn rec(n: usize, r: usize, start: usize, pick: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>, usize)>) {
        if pick.len() == r {
            let rest: Vec<usize> = (0..n).filter(|x| !pick.contains(x)).collect();
            let inversions = pick.iter().map(|&i| rest.iter().filter(|&&j| j < i).count()).sum();
            out.push((pick.clone(), rest, inversions));
            return;
        }
        for x in start..n {
            pick.push(x);
            rec(n, r, x + 1, pick, out);
            pick.pop();
        }
    }
    rec(n, r, 0, &mut pick, &mut out);
    out
}

fn add_at(m: &mut Matrix, r: usize, c: usize, x: &Scalar) {
    if !x.is_zero() {
        let v = m.get(r, c) + x;
        m.set(r, c, v);
    }
}

/// The calculus `O^0 = A, O^1, …, O^cap` with its coboundaries.
#[derive(Clone, Debug)]
pub struct CeCalculus {
    algebra: Arc<FiniteAlgebra>,
    derivations: DerivationSpace,
    basis: Vec<Matrix>,
    bracket: Vec<Vec<Vec<Scalar>>>,
    cap: usize,
    forms: Vec<Subspace>,
    d: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CeReport {
    pub algebra: String,
    pub derivations: usize,
    pub cap: usize,
    pub cochain_dims: Vec<usize>,
    pub form_dims: Vec<usize>,
    /// `d^{k+1} d^k = 0` on all cochains, for each `k + 2 ≤ cap`.
    pub d_squared_zero: Vec<bool>,
    /// `d(O^k) ⊆ O^{k+1}` for each `k < cap`.
    pub d_preserves_forms: Vec<bool>,
    /// `dim ker d^k` on `O^k`, for `k < cap`.
    pub cycles: Vec<usize>,
    /// `dim d^{k-1}(O^{k-1})` inside `O^k`, for `1 ≤ k ≤ cap`.
    pub boundaries: Vec<usize>,
    /// Restricted coboundaries in form coordinates, entries as strings.
    pub d_matrices: Vec<Vec<Vec<String>>>,
    pub minimal_dims: Vec<usize>,
}

impl CeReport {
    pub fn holds(&self) -> bool {
        self.d_squared_zero.iter().all(|&b| b) && self.d_preserves_forms.iter().all(|&b| b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl CeCalculus {
    pub fn new(algebra: &Arc<FiniteAlgebra>, cap: usize) -> Result<CeCalculus> {
        if cap > MAX_CE_CAP {
            return Err(Error::CapExceeded { degree: cap, cap: MAX_CE_CAP });
        }
        let derivations = algebra_derivations(algebra, false)?;
        let basis = derivations.basis_maps();
        let mut bracket = Vec::with_capacity(basis.len());
        for u in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for v in &basis {
                let b = &(u * v) - &(v * u);
                row.push(
                    derivations
                        .coords(&b)?
                        .ok_or_else(|| Error::Invariant("bracket of derivations is not a derivation".into()))?,
                );
            }
            bracket.push(row);
        }
        let mut calc = CeCalculus {
            algebra: algebra.clone(),
            derivations,
            basis,
            bracket,
            cap,
            forms: Vec::new(),
            d: Vec::new(),
        };
        calc.forms = (0..=cap).map(|k| calc.build_forms(k)).collect();
        calc.d = (0..cap).map(|k| calc.build_coboundary(k)).collect();
        Ok(calc)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn derivations(&self) -> &DerivationSpace {
        &self.derivations
    }

    pub fn derivation_basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn n(&self) -> usize {
        self.algebra.dim()
    }

    pub fn cochain_dim(&self, k: usize) -> usize {
        self.m().pow(k as u32) * self.n()
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.cap {
            return Err(Error::CapExceeded { degree: k, cap: self.cap });
        }
        Ok(())
    }

    /// `O^k` inside the `k`-cochains.
    pub fn forms(&self, k: usize) -> Result<&Subspace> {
        self.check_degree(k)?;
        Ok(&self.forms[k])
    }

    /// `d^k` on all `k`-cochains.
    pub fn coboundary(&self, k: usize) -> Result<&Matrix> {
        if k >= self.cap {
            return Err(Error::CapExceeded { degree: k + 1, cap: self.cap });
        }
        Ok(&self.d[k])
    }

    /// `dφ` for a form `φ` of degree `k`.
    pub fn apply_d(&self, k: usize, phi: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.forms(k)?.contains(phi) {
            return Err(Error::Invariant(format!("not a form of degree {k}")));
        }
        Ok(self.coboundary(k)?.mul_vec(phi))
    }

    /// `da` as a 1-form.
    pub fn exact(&self, a: &[Scalar]) -> Result<Vec<Scalar>> {
        self.apply_d(0, a)
    }

    /// `φ(u_{t_1}, …, u_{t_k})`.
    pub fn evaluate(&self, phi: &[Scalar], t: &[usize]) -> Vec<Scalar> {
        let n = self.n();
        let i = tuple_index(self.m(), t);
        phi[i * n..(i + 1) * n].to_vec()
    }

    fn build_forms(&self, k: usize) -> Subspace {
        let f = self.algebra.field();
        let (m, n) = (self.m(), self.n());
        let dim = self.cochain_dim(k);
        if k == 0 {
            return Subspace::full(f, dim);
        }
        let mut e = Echelon::new(f, dim);
        let center = self.algebra.center();
        let one = f.one();
        for t in tuples(m, k) {
            let ti = tuple_index(m, &t);
            for p in 0..k {
                for q in p + 1..k {
                    if t[p] > t[q] {
                        continue;
                    }
                    let mut s = t.clone();
                    s.swap(p, q);
                    let si = tuple_index(m, &s);
                    for c in 0..n {
                        let mut row = vector::zeros(f, dim);
                        row[ti * n + c] = one.clone();
                        if si != ti {
                            row[si * n + c] = one.clone();
                        }
                        e.insert(row);
                    }
                }
            }
            for z in center.basis() {
                let lz = self.algebra.left_mult(z);
                for p in 0..k {
                    let zu = &lz * &self.basis[t[p]];
                    let coords = self.derivations.coords(&zu).ok().flatten().expect("central multiple of a derivation");
                    for c in 0..n {
                        let mut row = vector::zeros(f, dim);
                        for (b, x) in coords.iter().enumerate() {
                            if !x.is_zero() {
                                let mut s = t.clone();
                                s[p] = b;
                                row[tuple_index(m, &s) * n + c] += x;
                            }
                        }
                        for cc in 0..n {
                            let x = lz.get(c, cc);
                            if !x.is_zero() {
                                row[ti * n + cc] -= x;
                            }
                        }
                        e.insert(row);
                    }
                }
            }
        }
        e.kernel()
    }

    fn build_coboundary(&self, k: usize) -> Matrix {
        let f = self.algebra.field();
        let (m, n) = (self.m(), self.n());
        let mut d = Matrix::zeros(f, self.cochain_dim(k + 1), self.cochain_dim(k));
        for t in tuples(m, k + 1) {
            let row0 = tuple_index(m, &t) * n;
            for i in 0..=k {
                let s = sign(f, i);
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(x, _)| x != i).map(|(_, &y)| y).collect();
                let col0 = tuple_index(m, &rest) * n;
                let u = &self.basis[t[i]];
                for r in 0..n {
                    for c in 0..n {
                        add_at(&mut d, row0 + r, col0 + c, &(&s * u.get(r, c)));
                    }
                }
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let s = sign(f, i + j);
                    let rest: Vec<usize> =
                        t.iter().enumerate().filter(|&(x, _)| x != i && x != j).map(|(_, &y)| y).collect();
                    for (b, x) in self.bracket[t[i]][t[j]].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let mut args = vec![b];
                        args.extend(&rest);
                        let col0 = tuple_index(m, &args) * n;
                        let sx = &s * x;
                        for r in 0..n {
                            add_at(&mut d, row0 + r, col0 + r, &sx);
                        }
                    }
                }
            }
        }
        d
    }

    /// `φ∧ψ(u_1, …, u_{r+s}) = Σ sgn · φ(u_I) ψ(u_J)` over shuffles `(I, J)`.
    pub fn wedge(&self, phi: &[Scalar], r: usize, psi: &[Scalar], s: usize) -> Result<Vec<Scalar>> {
        self.check_degree(r + s)?;
        if phi.len() != self.cochain_dim(r) || psi.len() != self.cochain_dim(s) {
            return Err(Error::DimensionMismatch("cochain length".into()));
        }
        let f = self.algebra.field();
        let (m, n) = (self.m(), self.n());
        let mut out = vector::zeros(f, self.cochain_dim(r + s));
        let sh = shuffles(r + s, r);
        for t in tuples(m, r + s) {
            let o = tuple_index(m, &t) * n;
            for (ii, jj, inv) in &sh {
                let ti: Vec<usize> = ii.iter().map(|&x| t[x]).collect();
                let tj: Vec<usize> = jj.iter().map(|&x| t[x]).collect();
                let prod = self.algebra.mul(&self.evaluate(phi, &ti), &self.evaluate(psi, &tj));
                let sg = sign(f, *inv);
                for (c, x) in prod.iter().enumerate() {
                    if !x.is_zero() {
                        out[o + c] += &(&sg * x);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `φ ↦ aφ` on `k`-cochains.
    pub fn left_mult(&self, k: usize, a: &[Scalar]) -> Matrix {
        let f = self.algebra.field();
        Matrix::identity(f, self.m().pow(k as u32)).kron(&self.algebra.left_mult(a))
    }

    /// `φ ↦ φa` on `k`-cochains.
    pub fn right_mult(&self, k: usize, a: &[Scalar]) -> Matrix {
        let f = self.algebra.field();
        Matrix::identity(f, self.m().pow(k as u32)).kron(&self.algebra.right_mult(a))
    }

    /// All `k`-cochains as a bimodule.
    pub fn cochain_module(&self, k: usize) -> Bimodule {
        let a = &self.algebra;
        let left = (0..a.dim()).map(|i| self.left_mult(k, &a.basis_element(i))).collect();
        let right = (0..a.dim()).map(|i| self.right_mult(k, &a.basis_element(i))).collect();
        Bimodule::from_parts(format!("C^{k}"), a.clone(), self.cochain_dim(k), Some(left), Some(right), None)
            .expect("cochain module shapes")
    }

    /// `d^k` restricted to `O^k → O^{k+1}` in echelon coordinates.
    pub fn restricted_coboundary(&self, k: usize) -> Result<Matrix> {
        let d = self.coboundary(k)?;
        let target = self.forms(k + 1)?;
        let f = self.algebra.field();
        let cols = self.forms[k]
            .basis()
            .iter()
            .map(|v| {
                target
                    .coords(&d.mul_vec(v))
                    .ok_or_else(|| Error::Invariant(format!("d maps a {k}-form outside the forms")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(f, target.dim(), &cols))
    }

    pub fn report(&self) -> CeReport {
        let cap = self.cap;
        let d_squared_zero = (0..cap.saturating_sub(1)).map(|k| (&self.d[k + 1] * &self.d[k]).is_zero()).collect();
        let d_preserves_forms: Vec<bool> = (0..cap)
            .map(|k| self.forms[k].basis().iter().all(|v| self.forms[k + 1].contains(&self.d[k].mul_vec(v))))
            .collect();
        let mut cycles = Vec::new();
        let mut boundaries = Vec::new();
        let mut d_matrices = Vec::new();
        for k in 0..cap {
            let img = self.forms[k].image(&self.d[k]);
            boundaries.push(img.dim());
            cycles.push(self.forms[k].dim() - img.dim());
            if let Ok(r) = self.restricted_coboundary(k) {
                d_matrices.push(r.row_vectors().iter().map(|row| vector::to_strings(row)).collect());
            }
        }
        CeReport {
            algebra: self.algebra.name().to_string(),
            derivations: self.m(),
            cap,
            cochain_dims: (0..=cap).map(|k| self.cochain_dim(k)).collect(),
            form_dims: self.forms.iter().map(Subspace::dim).collect(),
            d_squared_zero,
            d_preserves_forms,
            cycles,
            boundaries,
            d_matrices,
            minimal_dims: (0..=cap).map(|k| self.minimal(k).map(|s| s.dim()).unwrap_or(0)).collect(),
        }
    }
}
