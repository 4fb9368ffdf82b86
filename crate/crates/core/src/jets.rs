//! Jet modules `J^k(P) = (A ⊗ P)/μ^{k+1}` over commutative algebras, the
//! factorization of order-`k` operators through `J^k: p ↦ 1 ⊗ p`, and the
//! two-sided first jets `(A ⊗ P ⊗ A)/μ¹`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::diffops::{dv_first_order, grothendieck_diff};
use crate::error::{Error, Result};
use crate::hom::{Flavor, HomSpace};
use crate::linalg::{vector, AffineSolution, LinearSystem, Matrix, Quotient, Subspace};
use crate::module::{Bimodule, TensorAP, TensorAPA};

pub const JET_CAP: usize = 2;

#[derive(Clone, Debug)]
pub struct JetModule {
    pub order: usize,
    pub two_sided: bool,
    pub ambient_dim: usize,
    pub mu: Subspace,
    pub quotient: Quotient,
    /// The quotient with its outer structure; maps out of it are taken linear
    /// for these actions.
    pub module: Bimodule,
    /// Induced `b • (a ⊗ p) = a ⊗ bp`; empty for two-sided jets.
    pub inner: Vec<Matrix>,
    /// `p ↦ class of 1 ⊗ p` (or `1 ⊗ p ⊗ 1`), `dim J × dim P`.
    pub jet_map: Matrix,
    pub source: Bimodule,
}

impl JetModule {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// The maps `f: J → Q` that are linear for the outer structure.
    pub fn hom_space(&self, q: &Bimodule) -> Result<HomSpace> {
        HomSpace::new(&self.module, q)
    }

    fn linear_maps(&self, q: &Bimodule) -> Result<(HomSpace, Subspace)> {
        let hom = self.hom_space(q)?;
        let sub = if self.two_sided {
            hom.bimodule_morphisms()?
        } else {
            hom.left_linear()?
        };
        Ok((hom, sub))
    }

    /// `dim Hom_A(J, Q)`, or `dim Hom_{A-A}(J, Q)` for two-sided jets.
    pub fn hom_dim(&self, q: &Bimodule) -> Result<usize> {
        Ok(self.linear_maps(q)?.1.dim())
    }

    /// `J^k` is an order-`k` operator into `J` with its outer structure.
    pub fn jet_map_is_diffop(&self) -> Result<bool> {
        let hom = HomSpace::new(&self.source, &self.module)?;
        hom.iterated_delta_vanishes(&self.jet_map, self.order, Flavor::Plain)
    }

    /// `J` is generated by `{J^k p}` under the outer structure.
    pub fn generated_by_jets(&self) -> bool {
        let gens = (0..self.jet_map.cols()).map(|c| self.jet_map.column(c));
        self.module.generated_submodule(gens).dim() == self.dim()
    }

    /// Solves `Δ = f ∘ J^k` for outer-linear `f: J → Q`.
    pub fn factorize(&self, q: &Bimodule, delta: &Matrix) -> Result<JetFactorization> {
        let target = HomSpace::new(&self.source, q)?;
        let allowed = if self.two_sided {
            restricted_first_order(&target)?
        } else {
            grothendieck_diff(&target, self.order)?.subspace
        };
        if !allowed.contains(&target.flatten(delta)?) {
            return Err(Error::NotADifferentialOperator(format!(
                "operator is not of order {} in the sense the jets represent",
                self.order
            )));
        }
        let (hom, _) = self.linear_maps(q)?;
        let f = hom.field();
        let mut sys = LinearSystem::new(f, hom.dim());
        let zeros = vector::zeros(f, hom.dim());
        let mut ops = hom.delta_ops()?;
        if self.two_sided {
            ops.extend(hom.bar_delta_ops()?);
        }
        for op in &ops {
            sys.add_block(op, &zeros);
        }
        let j = self.dim();
        for p in 0..self.source.dim() {
            let col = self.jet_map.column(p);
            for r in 0..q.dim() {
                let mut row = vector::zeros(f, hom.dim());
                for (c, x) in col.iter().enumerate() {
                    row[r * j + c] = x.clone();
                }
                sys.add_equation(&row, delta.get(r, p).clone());
            }
        }
        let AffineSolution::Solutions { particular, directions } = sys.solve() else {
            return Err(Error::Inconsistent("operator does not factor through the jet map".into()));
        };
        let map = hom.unflatten(&particular);
        Ok(JetFactorization {
            residual_zero: &map * &self.jet_map == *delta,
            solution_space_dim: directions.dim(),
            map,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetFactorization {
    pub map: Matrix,
    pub residual_zero: bool,
    pub solution_space_dim: usize,
}

impl JetFactorization {
    pub fn holds(&self) -> bool {
        self.residual_zero && self.solution_space_dim == 0
    }
}

fn check_cap(k: usize) -> Result<()> {
    if k > JET_CAP {
        return Err(Error::CapExceeded { degree: k, cap: JET_CAP });
    }
    Ok(())
}

/// `{Δ : δ̄_c ∘ δ_b Δ = 0 for all b, c}`.
pub fn restricted_first_order(hom: &HomSpace) -> Result<Subspace> {
    let mut ops = Vec::new();
    for b in hom.delta_ops()? {
        for c in hom.bar_delta_ops()? {
            ops.push(&c * &b);
        }
    }
    Ok(hom.common_kernel(&ops))
}

/// `Σ` of the images of all `δ^{b_0}∘⋯∘δ^{b_k}` on `A ⊗ P`.
fn iterated_images(t: &TensorAP, k: usize) -> Subspace {
    let n = t.algebra.dim();
    let f = t.algebra.field();
    let deltas: Vec<Matrix> = (0..n).map(|b| t.delta(b)).collect();
    let mut vectors = Vec::new();
    let mut products = deltas.clone();
    for _ in 0..k {
        products = products.iter().flat_map(|m| deltas.iter().map(move |d| m * d)).collect();
    }
    for m in &products {
        vectors.extend((0..t.dim()).map(|c| m.column(c)));
    }
    Subspace::span(f, t.dim(), vectors)
}

/// `J^k(P)` for a module `P` over a commutative algebra.
pub fn jet_module(p: &Bimodule, k: usize) -> Result<JetModule> {
    check_cap(k)?;
    let a = p.algebra();
    if !a.is_commutative() {
        return Err(Error::InvalidAlgebra("jet modules need a commutative algebra".into()));
    }
    let t = TensorAP::new(p)?;
    let mu = iterated_images(&t, k).closure(&t.all_generators());
    let quotient = Quotient::of_ambient(&mu);
    let outer = t.outer.iter().map(|m| quotient.induced(m)).collect::<Result<Vec<_>>>()?;
    let inner = t.inner.iter().map(|m| quotient.induced(m)).collect::<Result<Vec<_>>>()?;
    let module = Bimodule::from_parts(
        format!("J^{k}({})", p.name()),
        a.clone(),
        quotient.dim(),
        Some(outer.clone()),
        Some(outer),
        None,
    )?;
    let one = a.unit().to_vec();
    let cols: Vec<Vec<_>> = (0..p.dim())
        .map(|l| quotient.project(&t.pure(&one, &vector::unit(a.field(), p.dim(), l))))
        .collect();
    let jet_map = Matrix::from_columns(a.field(), quotient.dim(), &cols);
    Ok(JetModule {
        order: k,
        two_sided: false,
        ambient_dim: t.dim(),
        mu,
        quotient,
        module,
        inner,
        jet_map,
        source: p.clone(),
    })
}

/// First-order two-sided jets `(A ⊗ P ⊗ A)/μ¹` with `μ¹` the sub-bimodule
/// generated by `δ̄^c ∘ δ^b (1 ⊗ p ⊗ 1)`.
pub fn two_sided_jet(p: &Bimodule) -> Result<JetModule> {
    let a = p.algebra();
    let f = a.field();
    let n = a.dim();
    let t = TensorAPA::new(p)?;
    let one = a.unit().to_vec();
    let base: Vec<Vec<_>> = (0..p.dim())
        .map(|l| {
            let pl = vector::unit(f, p.dim(), l);
            one.iter()
                .flat_map(|x| pl.iter().map(move |y| x * y))
                .flat_map(|xy| one.iter().map(move |z| &xy * z).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    let mut gens = Vec::new();
    for b in 0..n {
        let db = t.delta(b);
        for c in 0..n {
            let m = &t.bar_delta(c) * &db;
            gens.extend(base.iter().map(|v| m.mul_vec(v)));
        }
    }
    let mu = t.module.generated_submodule(gens);
    let (module, quotient) = t.module.quotient(&mu)?;
    let cols: Vec<Vec<_>> = base.iter().map(|v| quotient.project(v)).collect();
    let jet_map = Matrix::from_columns(f, quotient.dim(), &cols);
    Ok(JetModule {
        order: 1,
        two_sided: true,
        ambient_dim: t.dim(),
        mu,
        quotient,
        module: module.with_name(format!("J^1_two_sided({})", p.name())),
        inner: Vec::new(),
        jet_map,
        source: p.clone(),
    })
}

/// Representability of `Q ↦ Diff_k(P, Q)` (or the restricted two-sided
/// first-order operators) by `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representability {
    pub order: usize,
    pub two_sided: bool,
    pub source: String,
    pub target: String,
    pub ambient_dim: usize,
    pub mu_dim: usize,
    pub jet_dim: usize,
    pub diff_dim: usize,
    pub hom_dim: usize,
    /// `f ↦ f ∘ J^k` followed by factorization returns `f`, on a basis.
    pub maps_round_trip: bool,
    /// Factorization followed by composition returns `Δ`, on a basis, with a
    /// unique solution each time.
    pub operators_round_trip: bool,
    pub jet_map_is_diffop: bool,
}

impl Representability {
    pub fn holds(&self) -> bool {
        self.diff_dim == self.hom_dim && self.maps_round_trip && self.operators_round_trip && self.jet_map_is_diffop
    }
}

pub fn representability(jm: &JetModule, q: &Bimodule) -> Result<Representability> {
    let target = HomSpace::new(&jm.source, q)?;
    let ops = if jm.two_sided {
        restricted_first_order(&target)?
    } else {
        grothendieck_diff(&target, jm.order)?.subspace
    };
    let (hom, maps) = jm.linear_maps(q)?;
    let mut maps_round_trip = true;
    for v in maps.basis() {
        let f = hom.unflatten(v);
        let delta = &f * &jm.jet_map;
        maps_round_trip &= ops.contains(&target.flatten(&delta)?);
        maps_round_trip &= jm.factorize(q, &delta).map(|r| r.map == f).unwrap_or(false);
    }
    let mut operators_round_trip = true;
    for v in ops.basis() {
        let delta = target.unflatten(v);
        operators_round_trip &= jm.factorize(q, &delta)?.holds();
    }
    Ok(Representability {
        order: jm.order,
        two_sided: jm.two_sided,
        source: jm.source.name().to_string(),
        target: q.name().to_string(),
        ambient_dim: jm.ambient_dim,
        mu_dim: jm.mu.dim(),
        jet_dim: jm.dim(),
        diff_dim: ops.dim(),
        hom_dim: maps.dim(),
        maps_round_trip,
        operators_round_trip,
        jet_map_is_diffop: jm.two_sided || jm.jet_map_is_diffop()?,
    })
}

/// A failure of `δ_{b_0}∘δ_{b_1}(f∘J)(p) = f(δ^{b_0}∘δ^{b_1}(1⊗p))` for an
/// outer-linear `f: A ⊗ P → Q` over a noncommutative algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftJetWitness {
    pub algebra: String,
    /// `dim Hom_A(A ⊗ P, Q)` basis elements searched.
    pub maps_searched: usize,
    /// Index of the basis map `f`.
    pub map: Option<usize>,
    pub b0: usize,
    pub b1: usize,
    pub p: usize,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

/// Exhaustive search over a basis of `Hom_A(A ⊗ P, Q)` and basis triples for a
/// violation of the jet identity at order 1.
pub fn left_jet_identity_failure(p: &Bimodule, q: &Bimodule) -> Result<LeftJetWitness> {
    let a = p.algebra();
    let f = a.field();
    let n = a.dim();
    let t = TensorAP::new(p)?;
    let tensor = t.outer_module();
    let hom_t = HomSpace::new(&tensor, q)?;
    let maps = hom_t.left_linear()?;
    let hom_pq = HomSpace::new(p, q)?;
    let one = a.unit().to_vec();
    let jcols: Vec<Vec<_>> = (0..p.dim()).map(|l| t.pure(&one, &vector::unit(f, p.dim(), l))).collect();
    let j = Matrix::from_columns(f, t.dim(), &jcols);
    let mut out = LeftJetWitness {
        algebra: a.name().to_string(),
        maps_searched: maps.dim(),
        map: None,
        b0: 0,
        b1: 0,
        p: 0,
        lhs: Vec::new(),
        rhs: Vec::new(),
    };
    for (idx, v) in maps.basis().iter().enumerate() {
        let fm = hom_t.unflatten(v);
        let fj = hom_pq.flatten(&(&fm * &j))?;
        for b0 in 0..n {
            for b1 in 0..n {
                let lhs = hom_pq.unflatten(&hom_pq.delta_op(b0)?.mul_vec(&hom_pq.delta_op(b1)?.mul_vec(&fj)));
                let inner = &t.delta(b0) * &t.delta(b1);
                for l in 0..p.dim() {
                    let l_val = lhs.column(l);
                    let r_val = fm.mul_vec(&inner.mul_vec(&jcols[l]));
                    if l_val != r_val {
                        out.map = Some(idx);
                        out.b0 = b0;
                        out.b1 = b1;
                        out.p = l;
                        out.lhs = vector::to_strings(&l_val);
                        out.rhs = vector::to_strings(&r_val);
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Dimensions of the two-sided jet of `A` against the two-sided first-order space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSidedJetCheck {
    pub algebra: String,
    pub jet_dim: usize,
    pub hom_dim: usize,
    pub dv_first_order_dim: usize,
}

pub fn two_sided_jet_check(a: &Arc<FiniteAlgebra>) -> Result<TwoSidedJetCheck> {
    let reg = Bimodule::regular(a);
    let jm = two_sided_jet(&reg)?;
    let hom = HomSpace::endomorphisms(&reg)?;
    Ok(TwoSidedJetCheck {
        algebra: a.name().to_string(),
        jet_dim: jm.dim(),
        hom_dim: jm.hom_dim(&reg)?,
        dv_first_order_dim: dv_first_order(&hom)?.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, STANDARD_COMMUTATIVE};
    use crate::Field;

    fn alg(name: &str) -> Arc<FiniteAlgebra> {
        Arc::new(catalog(name, Field::Rational).unwrap())
    }

    #[test]
    fn zero_jets_are_the_module() {
        for name in ["trunc_poly(3)", "xy_sq"] {
            let a = alg(name);
            for p in [Bimodule::regular(&a), Bimodule::free(&a, 2)] {
                let jm = jet_module(&p, 0).unwrap();
                assert_eq!(jm.dim(), p.dim());
                // a ⊗ p ↦ ap kills μ¹ and inverts J⁰
                let t = TensorAP::new(&p).unwrap();
                let m = p.dim();
                let cols: Vec<Vec<_>> = (0..t.dim())
                    .map(|c| p.act_left(&a.basis_element(c / m), &vector::unit(a.field(), m, c % m)).unwrap())
                    .collect();
                let act = Matrix::from_columns(a.field(), m, &cols);
                assert!(jm.mu.basis().iter().all(|v| vector::is_zero(&act.mul_vec(v))));
                let back_cols: Vec<Vec<_>> = jm.quotient.representatives().iter().map(|r| act.mul_vec(r)).collect();
                let back = Matrix::from_columns(a.field(), m, &back_cols);
                assert_eq!(&back * &jm.jet_map, Matrix::identity(a.field(), m));
                assert_eq!(&jm.jet_map * &back, Matrix::identity(a.field(), m));
            }
        }
    }

    #[test]
    fn first_order_relation_lies_in_mu2() {
        let a = alg("trunc_poly(3)");
        let p = Bimodule::regular(&a);
        let jm = jet_module(&p, 1).unwrap();
        let t = TensorAP::new(&p).unwrap();
        let one = a.unit().to_vec();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    let (x, y, q) = (a.basis_element(i), a.basis_element(j), a.basis_element(l));
                    let mut v = t.pure(&one, &a.mul(&x, &a.mul(&y, &q)));
                    v = vector::sub(&v, &t.pure(&x, &a.mul(&y, &q)));
                    v = vector::sub(&v, &t.pure(&y, &a.mul(&x, &q)));
                    v = vector::add(&v, &t.pure(&a.mul(&x, &y), &q));
                    assert!(jm.mu.contains(&v));
                }
            }
        }
    }

    #[test]
    fn dual_number_first_jets() {
        let a = alg("trunc_poly(2)");
        let p = Bimodule::regular(&a);
        let jm = jet_module(&p, 1).unwrap();
        // Diff₁(A, A) = A ⊕ 𝔡A has dimension 2 + 1
        assert_eq!(jm.hom_dim(&p).unwrap(), 3);
        assert!(representability(&jm, &p).unwrap().holds());
    }

    #[test]
    fn jet_maps_are_differential_operators() {
        for (name, k) in [("trunc_poly(3)", 1), ("trunc_poly(2)", 2), ("xy_sq", 0)] {
            let a = alg(name);
            let jm = jet_module(&Bimodule::regular(&a), k).unwrap();
            assert!(jm.jet_map_is_diffop().unwrap(), "{name} {k}");
            assert!(jm.generated_by_jets());
        }
    }

    #[test]
    fn representability_over_commutative_catalog() {
        for name in STANDARD_COMMUTATIVE {
            let a = alg(name);
            let mods = [Bimodule::regular(&a), Bimodule::free(&a, 2)];
            for k in 0..=2 {
                for p in &mods {
                    let jm = jet_module(p, k).unwrap();
                    for q in &mods {
                        let r = representability(&jm, q).unwrap();
                        assert!(r.holds(), "{name} k={k}: {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_factors() {
        let a = alg("trunc_poly(3)");
        let p = Bimodule::regular(&a);
        let jm = jet_module(&p, 1).unwrap();
        // x·d/dx
        let delta = Matrix::from_i64(a.field(), &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert!(jm.factorize(&p, &delta).unwrap().holds());
        let second = &delta * &delta;
        assert!(jm.factorize(&p, &second).is_err());
    }

    #[test]
    fn cap_and_commutativity_enforced() {
        let a = alg("trunc_poly(2)");
        assert!(jet_module(&Bimodule::regular(&a), 3).is_err());
        let m = alg("matrix(2)");
        assert!(jet_module(&Bimodule::regular(&m), 1).is_err());
    }

    #[test]
    fn two_sided_jets_of_matrices() {
        let a = alg("matrix(2)");
        let c = two_sided_jet_check(&a).unwrap();
        assert_eq!(c.dv_first_order_dim, 7);
        assert_eq!(c.hom_dim, 7);
        let reg = Bimodule::regular(&a);
        let r = representability(&two_sided_jet(&reg).unwrap(), &reg).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn two_sided_jets_of_commutative_algebras() {
        for name in ["trunc_poly(3)", "xy_sq"] {
            let c = two_sided_jet_check(&alg(name)).unwrap();
            assert_eq!(c.hom_dim, c.dv_first_order_dim, "{name}");
        }
    }

    #[test]
    fn zero_module_has_zero_jets() {
        let a = alg("trunc_poly(2)");
        let z = Bimodule::zero(&a);
        assert_eq!(jet_module(&z, 1).unwrap().dim(), 0);
        assert_eq!(two_sided_jet(&z).unwrap().dim(), 0);
    }

    #[test]
    fn left_jet_identity_fails_for_matrices() {
        let a = alg("matrix(2)");
        let reg = Bimodule::regular(&a);
        let w = left_jet_identity_failure(&reg, &reg).unwrap();
        assert!(w.map.is_some());
        assert_ne!(w.lhs, w.rhs);
        // commutative algebras satisfy it
        let c = alg("trunc_poly(3)");
        let reg = Bimodule::regular(&c);
        assert!(left_jet_identity_failure(&reg, &reg).unwrap().map.is_none());
    }
}
