//! Chevalley–Eilenberg complex of the graded derivations of a graded
//! commutative algebra.
//!
//! Cochains are stored on normal-ordered monomials
//! `ε_{i_1}∧⋯∧ε_{i_r}∧ϵ_{j_1}∧⋯∧ϵ_{j_s}` with even indices strictly increasing
//! and odd indices weakly increasing: even generators anticommute, odd ones
//! commute, and an even and an odd generator anticommute. Swapping adjacent
//! generators `x, y` costs `−(−1)^{[x][y]}`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::derivations::algebra_derivations;
use crate::error::{Error, Result};
use crate::linalg::{vector, Echelon, Matrix, Subspace};
use crate::scalar::{sign, Scalar};

/// Highest source degree of a graded coboundary.
pub const GRADED_CAP: usize = 2;

/// Sign choices for the odd terms of the coboundary.
///
/// With all fields at their default the coboundary reads
/// `Σ_i (−1)^{i−1} ε_i c(…ε̂_i…) + Σ_j (−1)^r ϵ_j c(…ϵ̂_j…)
///  + Σ_{i<j} (−1)^{i+j} c([ε_i,ε_j]∧…) + σ Σ_{i<j} c([ϵ_i,ϵ_j]∧…)
///  + Σ_{i,j} (−1)^{i+r+1} c([ε_i,ϵ_j]∧…)`, where `σ = odd_bracket_sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedSigns {
    /// Extra factor `−1` on the odd action terms.
    pub flip_odd_action: bool,
    /// `σ`: sign of the odd–odd bracket terms.
    pub odd_bracket_sign: i8,
    /// Extra factor `−1` on the mixed bracket terms.
    pub flip_mixed_bracket: bool,
    /// Whether the mixed sum runs over all even positions or stops before the last.
    pub mixed_includes_last: bool,
}

impl GradedSigns {
    /// The expression with `ϵ_j` acting in the odd action sum and every sign
    /// taken at face value.
    pub const AS_WRITTEN: GradedSigns = GradedSigns {
        flip_odd_action: false,
        odd_bracket_sign: 1,
        flip_mixed_bracket: false,
        mixed_includes_last: false,
    };

    /// The choice that squares to zero on every tested algebra.
    pub const CONSISTENT: GradedSigns = GradedSigns {
        flip_odd_action: false,
        odd_bracket_sign: -1,
        flip_mixed_bracket: false,
        mixed_includes_last: true,
    };

    pub fn all() -> Vec<GradedSigns> {
        let mut out = Vec::new();
        for flip_odd_action in [false, true] {
            for odd_bracket_sign in [1, -1] {
                for flip_mixed_bracket in [false, true] {
                    for mixed_includes_last in [false, true] {
                        out.push(GradedSigns {
                            flip_odd_action,
                            odd_bracket_sign,
                            flip_mixed_bracket,
                            mixed_includes_last,
                        });
                    }
                }
            }
        }
        out
    }
}

/// A basis monomial: global derivation indices, evens (`< m_even`) first.
type Monomial = Vec<usize>;

#[derive(Clone, Debug)]
pub struct GradedCe {
    algebra: Arc<FiniteAlgebra>,
    basis: Vec<Matrix>,
    parity: Vec<u8>,
    m_even: usize,
    /// `bracket[x][y]`: coordinates of `[u_x, u_y]`.
    bracket: Vec<Vec<Vec<Scalar>>>,
    monomials: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    signs: GradedSigns,
    cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedCeReport {
    pub algebra: String,
    pub even_derivations: usize,
    pub odd_derivations: usize,
    pub cochain_dims: Vec<usize>,
    pub form_dims: Vec<usize>,
    pub signs: GradedSigns,
    /// `δ^{k+1} δ^k = 0` for `k + 1 ≤ cap`.
    pub d_squared_zero: Vec<bool>,
    /// `δ(O^k) ⊆ O^{k+1}` for `k ≤ cap`.
    pub d_preserves_forms: Vec<bool>,
}

impl GradedCeReport {
    pub fn holds(&self) -> bool {
        self.d_squared_zero.iter().all(|&b| b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn monomials(m_even: usize, m_odd: usize, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for r in 0..=k.min(m_even) {
        let s = k - r;
        let evens = combinations(m_even, r);
        let odds = multisets(m_odd, s);
        for e in &evens {
            for o in &odds {
                let mut w = e.clone();
                w.extend(o.iter().map(|&j| m_even + j));
                out.push(w);
            }
        }
    }
    out
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(n, r, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, 0, &mut Vec::new(), &mut out);
    out
}

fn multisets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(n, r, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 && r > 0 {
        return out;
    }
    rec(n, r, 0, &mut Vec::new(), &mut out);
    out
}

impl GradedCe {
    pub fn new(algebra: &Arc<FiniteAlgebra>, signs: GradedSigns) -> Result<GradedCe> {
        GradedCe::with_cap(algebra, signs, GRADED_CAP)
    }

    pub fn with_cap(algebra: &Arc<FiniteAlgebra>, signs: GradedSigns, cap: usize) -> Result<GradedCe> {
        if cap > GRADED_CAP {
            return Err(Error::CapExceeded { degree: cap, cap: GRADED_CAP });
        }
        if !algebra.is_graded_commutative()? {
            return Err(Error::InvalidAlgebra("graded Chevalley–Eilenberg needs a graded commutative algebra".into()));
        }
        let space = algebra_derivations(algebra, true)?;
        let even = space.subspace.intersect(&space.hom.parity_subspace(0)?)?;
        let odd = space.subspace.intersect(&space.hom.parity_subspace(1)?)?;
        let m_even = even.dim();
        let basis: Vec<Matrix> = even.basis().iter().chain(odd.basis()).map(|v| space.hom.unflatten(v)).collect();
        let parity: Vec<u8> = (0..basis.len()).map(|x| u8::from(x >= m_even)).collect();
        let f = algebra.field();
        let all = Subspace::span(f, space.hom.dim(), basis.iter().map(|m| m.data().to_vec()));
        let mut bracket = Vec::with_capacity(basis.len());
        for (x, u) in basis.iter().enumerate() {
            let mut row = Vec::with_capacity(basis.len());
            for (y, v) in basis.iter().enumerate() {
                let s = sign(f, (parity[x] * parity[y]) as usize);
                let b = &(u * v) - &(v * u).scale(&s);
                let c = all
                    .coords(b.data())
                    .ok_or_else(|| Error::Invariant("superbracket of derivations is not a derivation".into()))?;
                // echelon coordinates → coordinates in `basis`
                row.push(to_basis_coords(&all, &basis, &c));
            }
            bracket.push(row);
        }
        let m_odd = basis.len() - m_even;
        let monomials: Vec<Vec<Monomial>> = (0..=cap + 1).map(|k| monomials(m_even, m_odd, k)).collect();
        let index = monomials
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        Ok(GradedCe {
            algebra: algebra.clone(),
            basis,
            parity,
            m_even,
            bracket,
            monomials,
            index,
            signs,
            cap,
        })
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn derivation_basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn even_count(&self) -> usize {
        self.m_even
    }

    pub fn monomials(&self, k: usize) -> &[Monomial] {
        &self.monomials[k]
    }

    pub fn cochain_dim(&self, k: usize) -> usize {
        self.monomials[k].len() * self.algebra.dim()
    }

    /// Normal form of a word of basis generators: `(sign, monomial)`, or `None`
    /// when a repeated even generator kills it.
    fn normalize(&self, word: &[usize]) -> Option<(bool, Monomial)> {
        let mut w = word.to_vec();
        let mut negative = false;
        for i in 0..w.len() {
            for j in 0..w.len() - 1 - i {
                if w[j] > w[j + 1] {
                    let both_odd = self.parity[w[j]] == 1 && self.parity[w[j + 1]] == 1;
                    if !both_odd {
                        negative = !negative;
                    }
                    w.swap(j, j + 1);
                }
            }
        }
        if w.windows(2).any(|p| p[0] == p[1] && self.parity[p[0]] == 0) {
            return None;
        }
        Some((negative, w))
    }

    /// Adds `coeff · c(word)` (value coordinate `t`) as a row contribution.
    fn add_term(&self, row: &mut [Scalar], k: usize, word: &[usize], coeff: &Scalar, t: usize) {
        if coeff.is_zero() {
            return;
        }
        if let Some((neg, w)) = self.normalize(word) {
            let n = self.algebra.dim();
            let col = self.index[k][&w] * n + t;
            if neg {
                row[col] -= coeff;
            } else {
                row[col] += coeff;
            }
        }
    }

    /// `δ^k : C^k → C^{k+1}`.
    pub fn coboundary(&self, k: usize) -> Result<Matrix> {
        if k > self.cap {
            return Err(Error::CapExceeded { degree: k, cap: self.cap });
        }
        let f = self.algebra.field();
        let n = self.algebra.dim();
        let src = self.cochain_dim(k);
        let mut rows = Vec::with_capacity(self.cochain_dim(k + 1));
        let sg = self.signs;
        for w in &self.monomials[k + 1] {
            let r = w.iter().filter(|&&x| self.parity[x] == 0).count();
            let evens = &w[..r];
            let odds = &w[r..];
            for t in 0..n {
                let mut row = vector::zeros(f, src);
                // action terms
                for (pos, &x) in w.iter().enumerate() {
                    let rest: Vec<usize> = w.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &y)| y).collect();
                    let s = if pos < r {
                        sign(f, pos)
                    } else {
                        sign(f, r + usize::from(sg.flip_odd_action))
                    };
                    let u = &self.basis[x];
                    for c in 0..n {
                        let coeff = &s * u.get(t, c);
                        self.add_term(&mut row, k, &rest, &coeff, c);
                    }
                }
                let without = |drop: &[usize]| -> Vec<usize> {
                    w.iter().enumerate().filter(|(p, _)| !drop.contains(p)).map(|(_, &y)| y).collect()
                };
                let bracket_terms = |i: usize, j: usize, s: Scalar, row: &mut Vec<Scalar>| {
                    let rest = without(&[i, j]);
                    for (b, x) in self.bracket[w[i]][w[j]].iter().enumerate() {
                        if !x.is_zero() {
                            let mut word = vec![b];
                            word.extend(&rest);
                            self.add_term(row, k, &word, &(&s * x), t);
                        }
                    }
                };
                // even–even brackets, positions counted from 1
                for i in 0..evens.len() {
                    for j in i + 1..evens.len() {
                        bracket_terms(i, j, sign(f, i + j + 2), &mut row);
                    }
                }
                // odd–odd brackets
                for i in 0..odds.len() {
                    for j in i + 1..odds.len() {
                        let s = if sg.odd_bracket_sign < 0 { -f.one() } else { f.one() };
                        bracket_terms(r + i, r + j, s, &mut row);
                    }
                }
                // mixed brackets
                let last = if sg.mixed_includes_last { r } else { r.saturating_sub(1) };
                for i in 0..last {
                    for j in 0..odds.len() {
                        let s = sign(f, (i + 1) + r + 1 + usize::from(sg.flip_mixed_bracket));
                        bracket_terms(i, r + j, s, &mut row);
                    }
                }
                rows.push(row);
            }
        }
        Matrix::from_rows(f, src, rows)
    }

    /// `O^k`: cochains with `c(a·u ∧ w) = a·c(u ∧ w)`. Graded symmetry then
    /// gives `c(u ∧ a·v) = (−1)^{[a][u]} a·c(u ∧ v)` in later slots.
    pub fn forms(&self, k: usize) -> Result<Subspace> {
        let f = self.algebra.field();
        let n = self.algebra.dim();
        let dim = self.cochain_dim(k);
        if k == 0 {
            return Ok(Subspace::full(f, dim));
        }
        let all = Subspace::span(f, n * n, self.basis.iter().map(|m| m.data().to_vec()));
        let mut e = Echelon::new(f, dim);
        for i in 0..n {
            let la = self.algebra.left_mult(&self.algebra.basis_element(i));
            for b in 0..self.basis.len() {
                let au = &la * &self.basis[b];
                let c = all
                    .coords(au.data())
                    .ok_or_else(|| Error::Invariant("a·u is not a derivation".into()))?;
                let coords = to_basis_coords(&all, &self.basis, &c);
                for rest in &self.monomials[k - 1] {
                    for t in 0..n {
                        let mut row = vector::zeros(f, dim);
                        for (bb, x) in coords.iter().enumerate() {
                            let mut word = vec![bb];
                            word.extend(rest);
                            self.add_term(&mut row, k, &word, x, t);
                        }
                        let mut word = vec![b];
                        word.extend(rest);
                        for c in 0..n {
                            self.add_term(&mut row, k, &word, &-la.get(t, c).clone(), c);
                        }
                        e.insert(row);
                    }
                }
            }
        }
        Ok(e.kernel())
    }

    pub fn report(&self) -> Result<GradedCeReport> {
        let d: Vec<Matrix> = (0..=self.cap).map(|k| self.coboundary(k)).collect::<Result<_>>()?;
        let forms: Vec<Subspace> = (0..=self.cap + 1).map(|k| self.forms(k)).collect::<Result<_>>()?;
        Ok(GradedCeReport {
            algebra: self.algebra.name().to_string(),
            even_derivations: self.m_even,
            odd_derivations: self.basis.len() - self.m_even,
            cochain_dims: (0..=self.cap + 1).map(|k| self.cochain_dim(k)).collect(),
            form_dims: forms.iter().map(Subspace::dim).collect(),
            signs: self.signs,
            d_squared_zero: (0..self.cap).map(|k| (&d[k + 1] * &d[k]).is_zero()).collect(),
            d_preserves_forms: (0..=self.cap)
                .map(|k| forms[k].basis().iter().all(|v| forms[k + 1].contains(&d[k].mul_vec(v))))
                .collect(),
        })
    }
}

fn to_basis_coords(all: &Subspace, basis: &[Matrix], echelon_coords: &[Scalar]) -> Vec<Scalar> {
    // `basis` spans `all`; solve for the combination reproducing the vector.
    let f = all.field();
    let target = all.from_coords(echelon_coords);
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|m| m.data().to_vec()).collect();
    let a = Matrix::from_columns(f, target.len(), &cols);
    crate::linalg::solve_affine(f, basis.len(), &[(a, target)])
        .ok()
        .and_then(|s| s.unique().map(<[Scalar]>::to_vec))
        .expect("derivation basis is independent")
}

/// Result of one sign choice on one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignExperiment {
    pub signs: GradedSigns,
    pub algebra: String,
    pub d_squared_zero: bool,
    pub d_preserves_forms: bool,
}

/// Runs every sign choice on each algebra.
pub fn sign_experiments(algebras: &[Arc<FiniteAlgebra>]) -> Result<Vec<SignExperiment>> {
    let mut out = Vec::new();
    for signs in GradedSigns::all() {
        for a in algebras {
            let r = GradedCe::new(a, signs)?.report()?;
            out.push(SignExperiment {
                signs,
                algebra: a.name().to_string(),
                d_squared_zero: r.holds(),
                d_preserves_forms: r.d_preserves_forms.iter().all(|&b| b),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::ce::{tuple_index, CeCalculus};
    use crate::Field;

    fn alg(name: &str) -> Arc<FiniteAlgebra> {
        Arc::new(catalog(name, Field::Rational).unwrap())
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 2, 2).len(), 1 + 4 + 3);
        assert_eq!(monomials(0, 1, 3).len(), 1);
        assert_eq!(monomials(3, 0, 3).len(), 1);
        assert_eq!(monomials(0, 0, 1).len(), 0);
    }

    #[test]
    fn degree_zero_evaluates() {
        let a = alg("grassmann(1)");
        let g = GradedCe::new(&a, GradedSigns::CONSISTENT).unwrap();
        let d0 = g.coboundary(0).unwrap();
        let n = a.dim();
        for i in 0..n {
            let e = a.basis_element(i);
            let de = d0.mul_vec(&e);
            for (x, u) in g.derivation_basis().iter().enumerate() {
                let idx = g.index[1][&vec![x]];
                assert_eq!(de[idx * n..(idx + 1) * n].to_vec(), u.mul_vec(&e));
            }
        }
    }

    #[test]
    fn consistent_signs_square_to_zero() {
        for name in ["grassmann(1)", "grassmann(2)"] {
            let r = GradedCe::new(&alg(name), GradedSigns::CONSISTENT).unwrap().report().unwrap();
            assert!(r.holds(), "{name}: {r:?}");
            assert!(r.d_preserves_forms.iter().all(|&b| b), "{name}: {r:?}");
        }
    }

    #[test]
    fn literal_signs_fail() {
        let r = GradedCe::new(&alg("grassmann(1)"), GradedSigns::AS_WRITTEN).unwrap().report().unwrap();
        assert!(!r.holds());
    }

    #[test]
    fn even_algebra_matches_ungraded() {
        let base = alg("trunc_poly(3)");
        let a = Arc::new(base.with_parity(vec![0; 3]).unwrap());
        let g = GradedCe::new(&a, GradedSigns::AS_WRITTEN).unwrap();
        let c = CeCalculus::new(&base, 3).unwrap();
        assert_eq!(g.derivation_basis(), c.derivation_basis());
        let m = g.derivation_basis().len();
        let n = a.dim();
        for k in 0..=2 {
            let dg = g.coboundary(k).unwrap();
            let du = c.coboundary(k).unwrap();
            // extend each graded basis cochain alternatingly and compare on increasing tuples
            for col in 0..g.cochain_dim(k) {
                let mut alt = vector::zeros(a.field(), c.cochain_dim(k));
                let (mono, t) = (&g.monomials(k)[col / n], col % n);
                for perm in permutations(k) {
                    let word: Vec<usize> = perm.iter().map(|&p| mono[p]).collect();
                    let s = sign(a.field(), inversions(&perm));
                    alt[tuple_index(m, &word) * n + t] = s;
                }
                let image = du.mul_vec(&alt);
                for (row, w) in g.monomials(k + 1).iter().enumerate() {
                    for tt in 0..n {
                        assert_eq!(dg.get(row * n + tt, col), &image[tuple_index(m, w) * n + tt]);
                    }
                }
            }
        }
    }

    #[test]
    fn only_one_sign_choice_survives() {
        let algs = [alg("grassmann(1)"), alg("grassmann(2)")];
        let results = sign_experiments(&algs).unwrap();
        let good: Vec<GradedSigns> = GradedSigns::all()
            .into_iter()
            .filter(|s| results.iter().filter(|e| e.signs == *s).all(|e| e.d_squared_zero && e.d_preserves_forms))
            .collect();
        assert_eq!(good, vec![GradedSigns::CONSISTENT]);
    }

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }

    fn inversions(p: &[usize]) -> usize {
        (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
    }
}
